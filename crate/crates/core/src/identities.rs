//! Quadrature verification of the variational identities: the energy
//! identity, the Pohozaev ball identity with its sign obstruction, the
//! entire-space Pohozaev relation that forces the critical exponent, and the
//! exponent-bootstrap recurrence behind the nonexistence range.
//!
//! The ball identity is derived internally by applying the multiplier
//! `x . grad` to both equations and integrating by parts (the printed form of
//! its boundary term repeats the `v`-flux where the derivation produces a
//! `u`-flux; see `pohozaev_ball`). Every intermediate integral is reported so
//! the two readings can be compared.

use crate::grid::{log_grid, ProfileInterp};
use crate::integrator::{RadialProfile, TrajectoryOutcome};
use crate::model::{ClosedForm, FormKind, SystemParams};
use crate::potentials::{surface_area, PotentialError, RadialField};
use crate::scalar::{lit, Real};
use crate::shooting::{decay_fit, ShootError, DECAY_WINDOW_DEFAULT};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IdentityError {
    #[error("decay error: {0}")]
    Decay(String),
    #[error("boundary error: {0}")]
    Boundary(String),
    #[error("subject kind error: {0}")]
    Kind(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error(transparent)]
    Potential(#[from] PotentialError),
}

impl From<ShootError> for IdentityError {
    fn from(e: ShootError) -> Self {
        IdentityError::Decay(e.to_string())
    }
}

/// Relative-residual denominator guard for identically-zero identities.
pub const EPS_DEN: f64 = 1e-300;

/// Two sides of an identity plus every intermediate integral.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport<R> {
    pub name: String,
    pub lhs: R,
    pub rhs: R,
    /// `|lhs - rhs| / max(|lhs|, |rhs|, EPS_DEN)` unless documented otherwise.
    pub residual: R,
    pub components: Vec<(String, R)>,
    /// FNV-1a over the input samples; identical inputs and settings
    /// reproduce identical reports.
    pub input_hash: u64,
    pub nodes: usize,
}

fn rel_res<R: Real>(a: R, b: R) -> R {
    (a - b).abs() / a.abs().max(b.abs()).max(lit(EPS_DEN))
}

fn fnv1a(words: impl Iterator<Item = u64>) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for w in words {
        for byte in w.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

/// What an identity is evaluated on.
#[derive(Clone, Copy)]
pub enum Subject<'a, R> {
    Form(&'a ClosedForm<R>),
    Profile(&'a RadialProfile<R>),
}

/// Quadrature settings for the identity integrals.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature<R> {
    pub nodes: usize,
    /// Grid range for closed forms (profiles use their own range).
    pub r_lo: R,
    pub r_hi: R,
}

impl<R: Real> Default for Quadrature<R> {
    fn default() -> Self {
        Self {
            nodes: 2048,
            r_lo: lit(1e-4),
            r_hi: lit(1e3),
        }
    }
}

enum Domain<R> {
    /// Dirichlet ball of the given radius with boundary fluxes.
    Ball { radius: R, du_end: R, dv_end: R, u_end: R, v_end: R },
    /// Entire space with power tails of the given exponents.
    Entire { tail_u: R, tail_v: R },
}

struct SubjectSamples<R> {
    params: SystemParams<R>,
    grid: Vec<R>,
    u: Vec<R>,
    du: Vec<R>,
    v: Vec<R>,
    dv: Vec<R>,
    domain: Domain<R>,
    hash: u64,
}

impl<R: Real> SubjectSamples<R> {
    fn build(subject: &Subject<'_, R>, quad: &Quadrature<R>) -> Result<Self, IdentityError> {
        match subject {
            Subject::Form(form) => {
                if matches!(form.kind, FormKind::CylinderLift { .. }) {
                    return Err(IdentityError::Kind(
                        "cylinder lifts are not radial; identities apply to bubbles, singular \
                         powers and profiles"
                            .into(),
                    ));
                }
                let grid = log_grid(quad.r_lo, quad.r_hi, quad.nodes)
                    .map_err(PotentialError::from)?;
                let mut u = Vec::with_capacity(grid.len());
                let mut du = Vec::with_capacity(grid.len());
                for &r in &grid {
                    u.push(form.radial_value(r));
                    du.push(form.radial_derivatives(r).0);
                }
                let t = form.tail_exponent();
                let hash = fnv1a(
                    u.iter()
                        .chain(du.iter())
                        .map(|x| x.to_f64().unwrap_or(f64::NAN).to_bits()),
                );
                Ok(Self {
                    params: form.params,
                    grid,
                    v: u.clone(),
                    dv: du.clone(),
                    u,
                    du,
                    domain: Domain::Entire { tail_u: t, tail_v: t },
                    hash,
                })
            }
            Subject::Profile(profile) => {
                let domain = match profile.outcome {
                    TrajectoryOutcome::BothVanished(r) => {
                        let end = profile.last();
                        Domain::Ball {
                            radius: r,
                            du_end: end.du,
                            dv_end: end.dv,
                            u_end: end.u,
                            v_end: end.v,
                        }
                    }
                    TrajectoryOutcome::EntirePositive(_) => {
                        let fit = decay_fit(
                            profile,
                            (lit(DECAY_WINDOW_DEFAULT.0), lit(DECAY_WINDOW_DEFAULT.1)),
                        )?;
                        Domain::Entire {
                            tail_u: fit.rate,
                            tail_v: fit.rate,
                        }
                    }
                    ref o => {
                        return Err(IdentityError::Boundary(format!(
                            "profile ends as {}; identities need both components zero \
                             (Dirichlet ball) or an entire positive profile",
                            o.tag()
                        )))
                    }
                };
                let interp = ProfileInterp::new(profile);
                let grid = log_grid(interp.r_min(), interp.r_max(), quad.nodes)
                    .map_err(PotentialError::from)?;
                let mut u = Vec::with_capacity(grid.len());
                let mut du = Vec::with_capacity(grid.len());
                let mut v = Vec::with_capacity(grid.len());
                let mut dv = Vec::with_capacity(grid.len());
                for &r in &grid {
                    u.push(interp.u_at(r));
                    du.push(interp.du_at(r));
                    v.push(interp.v_at(r));
                    dv.push(interp.dv_at(r));
                }
                let hash = fnv1a(
                    profile
                        .samples
                        .iter()
                        .flat_map(|s| [s.r, s.u, s.du, s.v, s.dv])
                        .map(|x| x.to_f64().unwrap_or(f64::NAN).to_bits()),
                );
                Ok(Self {
                    params: profile.params,
                    grid,
                    u,
                    du,
                    v,
                    dv,
                    domain,
                    hash,
                })
            }
        }
    }

    fn gated_tails(&self) -> Result<(R, R), IdentityError> {
        match self.domain {
            Domain::Ball { .. } => unreachable!("tail gate applies to entire domains"),
            Domain::Entire { tail_u, tail_v } => Ok((tail_u, tail_v)),
        }
    }
}

/// `omega_{n-1} int f(r) r^{n-1} dr` from `0` to `upper` (or infinity), with
/// analytic power-law continuation below the grid and past it.
pub fn radial_integral<R: Real>(
    field: &RadialField<R>,
    n: u32,
    upper: Option<R>,
) -> Result<R, IdentityError> {
    let nn = lit::<R>(n as f64);
    let head = field.head_moment_pub(nn)?;
    let cum = field.cumulative_moment_pub(nn);
    let grid = field.grid();
    let total = match upper {
        None => {
            let tail = field.tail_moment_pub(nn)?; // diverges unless t > n
            head + cum[cum.len() - 1] + tail
        }
        Some(x) => {
            let end = *grid.last().unwrap();
            if x > end * (R::one() + lit(1e-9)) || x < grid[0] {
                return Err(IdentityError::Param(format!(
                    "integration bound {x} outside the sampled range [{}, {end}]",
                    grid[0]
                )));
            }
            if x >= end {
                head + cum[cum.len() - 1]
            } else {
                // Hermite interpolation of the cumulative in the log variable:
                // dC/dx = r^n f(r)
                let i = grid
                    .iter()
                    .position(|&g| g > x)
                    .unwrap_or(grid.len() - 1)
                    .max(1)
                    - 1;
                let (x0, x1) = (grid[i].ln(), grid[i + 1].ln());
                let (c0, c1) = (cum[i], cum[i + 1]);
                let w = |k: usize| grid[k].powf(nn) * field.values()[k];
                let h = x1 - x0;
                let t = (x.ln() - x0) / h;
                let t2 = t * t;
                let t3 = t2 * t;
                let two = lit::<R>(2.0);
                let three = lit::<R>(3.0);
                let c = (two * t3 - three * t2 + R::one()) * c0
                    + (t3 - two * t2 + t) * h * w(i)
                    + (three * t2 - two * t3) * c1
                    + (t3 - t2) * h * w(i + 1);
                head + c
            }
        }
    };
    Ok(surface_area::<R>(n) * total)
}

fn relu_pow_prod<R: Real>(u: &[R], v: &[R], p: R) -> Vec<R> {
    u.iter()
        .zip(v.iter())
        .map(|(&a, &b)| a.max(R::zero()).powf(p) * b.max(R::zero()))
        .collect()
}

/// Core integrals `(∫|∇u|², ∫|∇v|², ∫u^p v)` over the subject's domain.
fn core_integrals<R: Real>(s: &SubjectSamples<R>) -> Result<(R, R, R), IdentityError> {
    let p = s.params.p();
    let n = s.params.n_real();
    match s.domain {
        Domain::Ball { radius, .. } => {
            let gu: Vec<R> = s.du.iter().map(|&d| d * d).collect();
            let gv: Vec<R> = s.dv.iter().map(|&d| d * d).collect();
            let upv = relu_pow_prod(&s.u, &s.v, p);
            let a = s_int(s, gu, None, Some(radius))?;
            let b = s_int(s, gv, None, Some(radius))?;
            let c = s_int(s, upv, None, Some(radius))?;
            Ok((a, b, c))
        }
        Domain::Entire { .. } => {
            let (tu, tv) = s.gated_tails()?;
            let two = lit::<R>(2.0);
            let t_gu = two * (tu + R::one());
            let t_gv = two * (tv + R::one());
            let t_upv = p * tu + tv;
            if t_gu <= n || t_gv <= n || t_upv <= n {
                return Err(IdentityError::Decay(format!(
                    "integrand tails (|∇u|²: {t_gu}, |∇v|²: {t_gv}, u^p v: {t_upv}) must \
                     exceed n = {n} for the entire-space identities; the subject decays \
                     too slowly"
                )));
            }
            let gu: Vec<R> = s.du.iter().map(|&d| d * d).collect();
            let gv: Vec<R> = s.dv.iter().map(|&d| d * d).collect();
            let upv = relu_pow_prod(&s.u, &s.v, p);
            let a = s_int(s, gu, Some(t_gu), None)?;
            let b = s_int(s, gv, Some(t_gv), None)?;
            let c = s_int(s, upv, Some(t_upv), None)?;
            Ok((a, b, c))
        }
    }
}

fn s_int<R: Real>(
    s: &SubjectSamples<R>,
    w: Vec<R>,
    tail: Option<R>,
    upper: Option<R>,
) -> Result<R, IdentityError> {
    let field = RadialField::new(s.grid.clone(), w, tail)?;
    radial_integral(&field, s.params.n(), upper)
}

/// Energy identity `∫|∇u|² = ∫|∇v|² = sqrt(p) ∫ u^p v`, over the entire
/// space for fast-decaying subjects or over the Dirichlet ball for profiles
/// that lose both components together.
///
/// The reported residual is the worst of the pairwise relative residuals.
pub fn energy_identity<R: Real>(
    subject: &Subject<'_, R>,
    quad: &Quadrature<R>,
) -> Result<IdentityReport<R>, IdentityError> {
    let s = SubjectSamples::build(subject, quad)?;
    if let Domain::Ball { u_end, v_end, .. } = s.domain {
        check_dirichlet(u_end, v_end)?;
    }
    let (a, b, c) = core_integrals(&s)?;
    let spc = s.params.sqrt_p() * c;
    let residual = rel_res(a, b).max(rel_res(a, spc)).max(rel_res(b, spc));
    let name = match s.domain {
        Domain::Ball { .. } => "energy_ball",
        Domain::Entire { .. } => "energy_entire",
    };
    Ok(IdentityReport {
        name: name.into(),
        lhs: a,
        rhs: spc,
        residual,
        components: vec![
            ("grad_u_sq".into(), a),
            ("grad_v_sq".into(), b),
            ("interaction".into(), c),
            ("sqrt_p_interaction".into(), spc),
        ],
        input_hash: s.hash,
        nodes: quad.nodes,
    })
}

fn check_dirichlet<R: Real>(u_end: R, v_end: R) -> Result<(), IdentityError> {
    let tol = lit::<R>(1e-10);
    if u_end.abs() > tol || v_end.abs() > tol {
        return Err(IdentityError::Boundary(format!(
            "boundary values ({u_end}, {v_end}) exceed 1e-10; not a Dirichlet profile"
        )));
    }
    Ok(())
}

/// Sign obstruction `Q(n,p) = (n-2)/2 (sqrt(p) + 1/sqrt(p)) - n/sqrt(p)`.
///
/// Negative exactly when `p < (n+2)/(n-2)`; a positive-interior Dirichlet
/// ball solution can only exist at negative `Q`.
pub fn pohozaev_q<R: Real>(params: &SystemParams<R>) -> R {
    let sp = params.sqrt_p();
    (params.n_real() - lit(2.0)) / lit(2.0) * (sp + sp.recip()) - params.n_real() / sp
}

#[derive(Debug, Clone)]
pub struct PohozaevBall<R> {
    pub report: IdentityReport<R>,
    pub q: R,
    /// `Q < 0`, the necessary sign for a ball solution to exist.
    pub admissible: bool,
}

/// Ball Pohozaev identity, re-derived from the system by the multiplier
/// `x . grad` (both fluxes appear, weighted `u`-flux first):
///
/// ```text
///   -(R/2) [ S|∂u|² + S|∂v|²/p ] = (n-2)/2 [ ∫|∇u|² + ∫|∇v|²/p ] - (n/sqrt(p)) ∫u^p v
/// ```
///
/// with `S w = omega R^{n-1} w(R)`.
pub fn pohozaev_ball<R: Real>(
    profile: &RadialProfile<R>,
    quad: &Quadrature<R>,
) -> Result<PohozaevBall<R>, IdentityError> {
    let s = SubjectSamples::build(&Subject::Profile(profile), quad)?;
    let (radius, du_end, dv_end, u_end, v_end) = match s.domain {
        Domain::Ball {
            radius,
            du_end,
            dv_end,
            u_end,
            v_end,
        } => (radius, du_end, dv_end, u_end, v_end),
        Domain::Entire { .. } => {
            return Err(IdentityError::Boundary(
                "ball identity needs a Dirichlet profile (both components vanishing)".into(),
            ))
        }
    };
    check_dirichlet(u_end, v_end)?;

    let params = &s.params;
    let (a, b, c) = core_integrals(&s)?;
    let n = params.n_real();
    let p = params.p();
    let two = lit::<R>(2.0);
    let omega = surface_area::<R>(params.n());
    let flux_u = omega * radius.powf(n - R::one()) * du_end * du_end;
    let flux_v = omega * radius.powf(n - R::one()) * dv_end * dv_end;
    let lhs = -(radius / two) * (flux_u + flux_v / p);
    let rhs = (n - two) / two * (a + b / p) - n / params.sqrt_p() * c;
    let q = pohozaev_q(params);
    Ok(PohozaevBall {
        report: IdentityReport {
            name: "pohozaev_ball".into(),
            lhs,
            rhs,
            residual: rel_res(lhs, rhs),
            components: vec![
                ("grad_u_sq".into(), a),
                ("grad_v_sq".into(), b),
                ("interaction".into(), c),
                ("flux_u".into(), flux_u),
                ("flux_v".into(), flux_v),
                ("radius".into(), radius),
                ("q".into(), q),
            ],
            input_hash: s.hash,
            nodes: quad.nodes,
        },
        q,
        admissible: q < R::zero(),
    })
}

#[derive(Debug, Clone)]
pub struct PohozaevEntire<R> {
    pub report: IdentityReport<R>,
    /// Exponent solving the identity with the measured integrals; equals
    /// `2^*-1` when the subject truly solves the system.
    pub p_implied: R,
}

/// Entire-space Pohozaev relation
/// `(n-2)/2 (p ∫|∇u|² + ∫|∇v|²) = n sqrt(p) ∫u^p v`
/// for fast-decaying subjects. Combined with the energy identity it pins
/// `p = 2^*-1`; `p_implied` extracts that exponent from the measured
/// integrals.
pub fn pohozaev_entire<R: Real>(
    subject: &Subject<'_, R>,
    quad: &Quadrature<R>,
) -> Result<PohozaevEntire<R>, IdentityError> {
    let s = SubjectSamples::build(subject, quad)?;
    if matches!(s.domain, Domain::Ball { .. }) {
        return Err(IdentityError::Decay(
            "entire-space relation applied to a Dirichlet ball profile".into(),
        ));
    }
    let (a, b, c) = core_integrals(&s)?;
    let params = &s.params;
    let n = params.n_real();
    let two = lit::<R>(2.0);
    let p = params.p();
    let spc = params.sqrt_p() * c;
    let lhs = (n - two) / two * (p * a + b);
    let rhs = n * spc;
    let p_implied = (two * n * spc - (n - two) * b) / ((n - two) * a);
    Ok(PohozaevEntire {
        report: IdentityReport {
            name: "pohozaev_entire".into(),
            lhs,
            rhs,
            residual: rel_res(lhs, rhs),
            components: vec![
                ("grad_u_sq".into(), a),
                ("grad_v_sq".into(), b),
                ("interaction".into(), c),
                ("p_implied".into(), p_implied),
            ],
            input_hash: s.hash,
            nodes: quad.nodes,
        },
        p_implied,
    })
}

/// Exponent-bootstrap sequence `a_0 = n-2`, `a_{j+1} = (2p-1) a_j - 4`,
/// `b_j = p a_j - 2`, with `j0` the first index where `a_j <= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapTrace<R> {
    pub n: u32,
    pub p: R,
    pub a_seq: Vec<R>,
    pub b_seq: Vec<R>,
    pub j0: Option<usize>,
}

impl<R: Real> BootstrapTrace<R> {
    /// Closed form `a_j = (n-2-2/(p-1)) (2p-1)^j + 2/(p-1)`.
    pub fn closed_form(n: u32, p: R, j: usize) -> R {
        let nn = lit::<R>(n as f64);
        let l = lit::<R>(2.0) / (p - R::one());
        let growth = (lit::<R>(2.0) * p - R::one()).powi(j as i32);
        (nn - lit(2.0) - l) * growth + l
    }

    /// Upper bound on `j0` from the closed form (only when `p < n/(n-2)`).
    pub fn j0_bound(n: u32, p: R) -> Option<usize> {
        let nn = lit::<R>(n as f64);
        let l = lit::<R>(2.0) / (p - R::one());
        let k = nn - lit(2.0) - l;
        if k >= R::zero() {
            return None;
        }
        let ratio = l / (l - (nn - lit(2.0)));
        let bound = (ratio.ln() / (lit::<R>(2.0) * p - R::one()).ln()).ceil();
        Some(bound.to_f64().unwrap_or(0.0) as usize + 1)
    }
}

/// Generates the bootstrap trace up to `j_max` (inclusive), stopping early at
/// the first nonpositive entry.
pub fn bootstrap<R: Real>(params: &SystemParams<R>, j_max: usize) -> BootstrapTrace<R> {
    let p = params.p();
    let mut a_seq = Vec::with_capacity(j_max + 1);
    let mut b_seq = Vec::with_capacity(j_max + 1);
    let mut j0 = None;
    let mut a = params.n_real() - lit(2.0);
    for j in 0..=j_max {
        a_seq.push(a);
        b_seq.push(p * a - lit(2.0));
        if a <= R::zero() {
            j0 = Some(j);
            break;
        }
        a = (lit::<R>(2.0) * p - R::one()) * a - lit(4.0);
    }
    BootstrapTrace {
        n: params.n(),
        p,
        a_seq,
        b_seq,
        j0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrator::integrate;
    use crate::model::{bubble_form, singular_form, FormKind};
    use crate::potentials::RadialField;
    use crate::shooting::entire_profile;

    fn params(n: u32, p: f64) -> SystemParams<f64> {
        SystemParams::new(n, p).unwrap()
    }

    #[test]
    fn radial_integral_ball_volume() {
        // f = 1 on [0,1], n = 3 -> 4 pi / 3
        let grid = log_grid(1e-4f64, 1.0, 2048).unwrap();
        let field = RadialField::new(grid, vec![1.0; 2048], None).unwrap();
        let val = radial_integral(&field, 3, Some(1.0)).unwrap();
        assert!((val - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-8, "{val}");
    }

    #[test]
    fn radial_integral_divergent_tail() {
        let grid = log_grid(1.0f64, 100.0, 128).unwrap();
        let vals: Vec<f64> = grid.iter().map(|&r| r.powf(-2.0)).collect();
        let field = RadialField::new(grid, vals, Some(2.0)).unwrap();
        assert!(radial_integral(&field, 3, None).is_err());
    }

    #[test]
    fn bubble_gradient_integral_finite_and_exact() {
        // closed form for (3,5,t=1): ∫|∇u|² = 3 pi² c² / 4
        let q = params(3, 5.0);
        let bubble = bubble_form(&q, 1.0, vec![0.0; 3]).unwrap();
        let c = crate::model::bubble_amplitude(&q);
        let quad = Quadrature { nodes: 2048, r_lo: 1e-4, r_hi: 1e3 };
        let rep = energy_identity(&Subject::Form(&bubble), &quad).unwrap();
        let grad_u = rep.components[0].1;
        let exact = 3.0 * std::f64::consts::PI.powi(2) * c * c / 4.0;
        assert!(
            ((grad_u - exact) / exact).abs() < 1e-6,
            "grad_u {grad_u} vs exact {exact}"
        );
        assert!(rep.residual < 1e-6, "residual {:.2e}", rep.residual);
    }

    #[test]
    fn energy_identity_ball_case() {
        let q = params(3, 2.0);
        let prof = integrate(&q, 1.0, 50.0, 1e-11).unwrap();
        assert!(matches!(prof.outcome, TrajectoryOutcome::BothVanished(_)));
        let rep = energy_identity(&Subject::Profile(&prof), &Quadrature::default()).unwrap();
        assert!(rep.residual < 1e-4, "residual {:.2e}", rep.residual);
        assert_eq!(rep.name, "energy_ball");
    }

    #[test]
    fn energy_identity_rejects_slow_decay() {
        let q = params(4, 4.0);
        let prof = entire_profile(&q, 1e3).unwrap();
        match energy_identity(&Subject::Profile(&prof), &Quadrature::default()) {
            Err(IdentityError::Decay(_)) => {}
            other => panic!("expected DecayError, got {other:?}"),
        }
    }

    #[test]
    fn energy_identity_discriminates_perturbation() {
        let q = params(3, 5.0);
        let mut bubble = bubble_form(&q, 1.0, vec![0.0; 3]).unwrap();
        if let FormKind::Bubble { amplitude, .. } = &mut bubble.kind {
            *amplitude *= 1.01;
        }
        let rep = energy_identity(&Subject::Form(&bubble), &Quadrature::default()).unwrap();
        assert!(rep.residual > 1e-3, "residual {:.2e}", rep.residual);
    }

    #[test]
    fn q_values() {
        assert!((pohozaev_q(&params(3, 2.0)) + 3.0 / (2.0 * 2.0f64.sqrt())).abs() < 1e-15);
        assert!((pohozaev_q(&params(4, 4.0)) - 0.5).abs() < 1e-15);
        assert!(pohozaev_q(&params(3, 5.0)).abs() < 1e-15);
    }

    #[test]
    fn q_sign_dichotomy() {
        for n in 3..=6u32 {
            let crit = (n as f64 + 2.0) / (n as f64 - 2.0);
            for k in 0..50 {
                let p = 1.1 + 10.0 * k as f64 / 49.0;
                if (p - crit).abs() < 1e-9 {
                    continue;
                }
                let q = pohozaev_q(&params(n, p));
                assert_eq!(q < 0.0, p < crit, "n={n} p={p} q={q}");
            }
        }
    }

    #[test]
    fn pohozaev_ball_on_subcritical_solution() {
        let q = params(3, 2.0);
        let prof = integrate(&q, 1.0, 50.0, 1e-11).unwrap();
        let result = pohozaev_ball(&prof, &Quadrature::default()).unwrap();
        assert!(result.admissible);
        assert!(result.q < 0.0);
        assert!(
            result.report.residual < 1e-4,
            "residual {:.2e}",
            result.report.residual
        );
    }

    #[test]
    fn pohozaev_entire_bubble() {
        for (n, p) in [(3u32, 5.0f64), (4, 3.0)] {
            let q = params(n, p);
            let bubble = bubble_form(&q, 1.0, vec![0.0; n as usize]).unwrap();
            let out = pohozaev_entire(&Subject::Form(&bubble), &Quadrature::default()).unwrap();
            assert!(out.report.residual < 1e-4, "(n={n}): {:.2e}", out.report.residual);
            let crit = q.critical();
            assert!(
                (out.p_implied - crit).abs() < 1e-3,
                "p_implied {} vs {}",
                out.p_implied,
                crit
            );
        }
    }

    #[test]
    fn pohozaev_entire_rejects_slow_profile() {
        let q = params(4, 4.0);
        let prof = entire_profile(&q, 1e3).unwrap();
        assert!(matches!(
            pohozaev_entire(&Subject::Profile(&prof), &Quadrature::default()),
            Err(IdentityError::Decay(_))
        ));
    }

    #[test]
    fn singular_form_energy_rejected() {
        // slow tail: the entire-space integrals diverge
        let q = params(4, 4.0);
        let form = singular_form(&q).unwrap();
        assert!(matches!(
            energy_identity(&Subject::Form(&form), &Quadrature::default()),
            Err(IdentityError::Decay(_))
        ));
    }

    #[test]
    fn quadrature_order_on_bubble_energy() {
        // the identity residual itself cancels correlated quadrature error,
        // so the order is measured on an integral with a known closed form
        let q = params(3, 5.0);
        let bubble = bubble_form(&q, 1.0, vec![0.0; 3]).unwrap();
        let c = crate::model::bubble_amplitude(&q);
        let exact = 3.0 * std::f64::consts::PI.powi(2) * c * c / 4.0;
        let err = |nodes: usize| {
            let quad = Quadrature { nodes, r_lo: 1e-4, r_hi: 1e4 };
            let rep = energy_identity(&Subject::Form(&bubble), &quad).unwrap();
            (rep.components[0].1 - exact).abs()
        };
        let e1 = err(128);
        let e2 = err(256);
        assert!(
            e1 / e2 > 8.0,
            "refinement factor {:.2} (e1={e1:.2e} e2={e2:.2e})",
            e1 / e2
        );
        // and the residual still shrinks with refinement
        let res = |nodes: usize| {
            let quad = Quadrature { nodes, r_lo: 1e-4, r_hi: 1e4 };
            energy_identity(&Subject::Form(&bubble), &quad).unwrap().residual
        };
        assert!(res(2048) < res(128));
    }

    #[test]
    fn bootstrap_examples() {
        // (3,2): a0 = 1, a1 = -1 -> j0 = 1
        let t = bootstrap(&params(3, 2.0), 30);
        assert_eq!(t.a_seq[0], 1.0);
        assert_eq!(t.a_seq[1], -1.0);
        assert_eq!(t.j0, Some(1));
        assert_eq!(t.b_seq[0], 0.0);

        // (3,4): coefficient positive, sequence grows
        let t = bootstrap(&params(3, 4.0), 30);
        assert_eq!(t.j0, None);
        assert_eq!(t.a_seq.len(), 31);
        assert!(t.a_seq.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn bootstrap_closed_form_matches_recurrence() {
        let q = params(5, 1.5);
        let t = bootstrap(&q, 30);
        for (j, &a) in t.a_seq.iter().enumerate() {
            let cf = BootstrapTrace::closed_form(5, 1.5, j);
            let rel = (a - cf).abs() / a.abs().max(cf.abs()).max(1.0);
            assert!(rel < 1e-9, "j={j}: {a} vs {cf}");
        }
    }

    #[test]
    fn bootstrap_dichotomy_and_bound() {
        for n in [3u32, 4, 5, 6, 8] {
            let serrin = n as f64 / (n as f64 - 2.0);
            for &p in &[1.2, 1.5, 2.0, 2.5, 3.0, 4.0] {
                let q = params(n, p);
                let bound = BootstrapTrace::j0_bound(n, p);
                let j_max = bound.unwrap_or(0).max(40);
                let t = bootstrap(&q, j_max);
                if p < serrin {
                    let j0 = t.j0.unwrap_or_else(|| panic!("expected j0 for n={n} p={p}"));
                    assert!(j0 <= bound.unwrap(), "n={n} p={p}: j0={j0} bound={bound:?}");
                } else {
                    assert_eq!(t.j0, None, "n={n} p={p}");
                }
            }
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let q = params(3, 5.0);
        let bubble = bubble_form(&q, 1.0, vec![0.0; 3]).unwrap();
        let r1 = energy_identity(&Subject::Form(&bubble), &Quadrature::default()).unwrap();
        let r2 = energy_identity(&Subject::Form(&bubble), &Quadrature::default()).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(r1.input_hash, r2.input_hash);
    }
}

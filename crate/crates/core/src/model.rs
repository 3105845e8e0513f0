//! Domain types, exponent-regime classification and analytic solution families
//! for the coupled system
//!
//! ```text
//!   -Δu = sqrt(p) u^{p-1} v,   -Δv = sqrt(p) u^p     in R^n,  n >= 3, p > 1.
//! ```
//!
//! The closed forms carried here (critical bubble, singular power pair,
//! cylinder lift) all satisfy the system exactly; `residual_system` measures
//! how well any radial field pair does.

use crate::scalar::{dim, lit, Real};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    Param(String),
    #[error("regime violation: {0}")]
    Regime(String),
    #[error("wrong closed-form kind: {0}")]
    Kind(String),
    #[error("evaluation at the singular point")]
    Singularity,
    #[error("finite differences need r >= 2 h_fd (r = {r}, h_fd = {h})")]
    Differentiation { r: f64, h: f64 },
}

/// Dimension `n >= 3` and exponent `p > 1` with the derived thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams<R> {
    n: u32,
    p: R,
}

impl<R: Real> SystemParams<R> {
    pub fn new(n: u32, p: R) -> Result<Self, ModelError> {
        if n < 3 {
            return Err(ModelError::Param(format!("n must be >= 3, got {n}")));
        }
        if !(p > R::one()) || !p.is_finite() {
            return Err(ModelError::Param(format!("p must be finite and > 1, got {p}")));
        }
        Ok(Self { n, p })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn p(&self) -> R {
        self.p
    }

    pub fn n_real(&self) -> R {
        dim(self.n)
    }

    /// Serrin exponent `n/(n-2)`; at or below it no positive solution exists.
    pub fn serrin(&self) -> R {
        self.n_real() / (self.n_real() - lit(2.0))
    }

    /// Critical exponent `2^* - 1 = (n+2)/(n-2)`.
    pub fn critical(&self) -> R {
        (self.n_real() + lit(2.0)) / (self.n_real() - lit(2.0))
    }

    /// Slow decay rate `2/(p-1)`.
    pub fn slow_rate(&self) -> R {
        lit::<R>(2.0) / (self.p - R::one())
    }

    /// Fast decay rate `n-2`.
    pub fn fast_rate(&self) -> R {
        self.n_real() - lit(2.0)
    }

    pub fn sqrt_p(&self) -> R {
        self.p.sqrt()
    }

    /// Shooting admissibility `p >= max(2, 2^*-1)` (hypothesis of the
    /// shooting existence theorem).
    pub fn shooting_admissible(&self) -> bool {
        self.p >= lit(2.0) && self.p >= self.critical()
    }
}

/// Partition cell of the exponent ray `p > 1` for fixed `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeTag {
    /// `p <= n/(n-2)`: no positive solution at all.
    NoPositiveSolution,
    /// `n/(n-2) < p < 2^*-1`.
    Subcritical,
    /// `p = 2^*-1`: the bubble family.
    Critical,
    /// `p > 2^*-1`: slow-decay entire solutions.
    Supercritical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentRegime {
    pub tag: RegimeTag,
    pub shooting_admissible: bool,
}

/// Regime classification. Boundaries follow the nonexistence statement:
/// `p = n/(n-2)` still has no positive solution, `p = 2^*-1` is critical.
pub fn regime<R: Real>(params: &SystemParams<R>) -> ExponentRegime {
    let p = params.p();
    let tag = if p <= params.serrin() {
        RegimeTag::NoPositiveSolution
    } else if p < params.critical() {
        RegimeTag::Subcritical
    } else if p == params.critical() {
        RegimeTag::Critical
    } else {
        RegimeTag::Supercritical
    };
    ExponentRegime {
        tag,
        shooting_admissible: params.shooting_admissible(),
    }
}

/// Analytic solution family with explicit constants. Every kind has `u = v`.
#[derive(Debug, Clone, PartialEq)]
pub enum FormKind<R> {
    /// `u = c (t/(t^2+|x-x*|^2))^{(n-2)/2}` at the critical exponent.
    Bubble { amplitude: R, scale: R, center: Vec<R> },
    /// `u = c |x|^{-2/(p-1)}` on `R^n \ {0}` for `p > n/(n-2)`.
    SingularPower { amplitude: R },
    /// A form on `R^{n+1}` constant in the added last coordinate.
    CylinderLift { base: Box<ClosedForm<R>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm<R> {
    pub kind: FormKind<R>,
    pub params: SystemParams<R>,
}

/// Amplitude of the singular power pair,
/// `c = [2n/(sqrt(p)(p-1)) - 4 sqrt(p)/(p-1)^2]^{1/(p-1)}`.
///
/// The bracket equals `t(n-2-t)/sqrt(p)` with `t = 2/(p-1)` and changes sign
/// exactly at `p = n/(n-2)`.
pub fn singular_bracket<R: Real>(params: &SystemParams<R>) -> R {
    let p = params.p();
    let pm1 = p - R::one();
    lit::<R>(2.0) * params.n_real() / (params.sqrt_p() * pm1)
        - lit::<R>(4.0) * params.sqrt_p() / (pm1 * pm1)
}

/// Singular power solution `u = v = c |x|^{-2/(p-1)}`.
pub fn singular_form<R: Real>(params: &SystemParams<R>) -> Result<ClosedForm<R>, ModelError> {
    let bracket = singular_bracket(params);
    if params.p() <= params.serrin() || bracket <= R::zero() {
        return Err(ModelError::Regime(format!(
            "singular power form needs p > n/(n-2) = {}, got p = {}",
            params.serrin(),
            params.p()
        )));
    }
    let amplitude = bracket.powf(R::one() / (params.p() - R::one()));
    Ok(ClosedForm {
        kind: FormKind::SingularPower { amplitude },
        params: *params,
    })
}

/// Bubble amplitude for the `sqrt(p)`-coefficient normalization:
/// the unit-coefficient bubble `(n(n-2))^{(n-2)/4}` rescaled by
/// `lambda = p^{-1/(2(p-1))}`.
pub fn bubble_amplitude<R: Real>(params: &SystemParams<R>) -> R {
    let p = params.p();
    let nn = params.n_real();
    let lambda = p.powf(-R::one() / (lit::<R>(2.0) * (p - R::one())));
    lambda * (nn * (nn - lit(2.0))).powf((nn - lit(2.0)) / lit(4.0))
}

/// Bubble `u = v = c (t/(t^2+|x-x*|^2))^{(n-2)/2}` solving the system at the
/// critical exponent.
pub fn bubble_form<R: Real>(
    params: &SystemParams<R>,
    scale: R,
    center: Vec<R>,
) -> Result<ClosedForm<R>, ModelError> {
    if params.p() != params.critical() {
        return Err(ModelError::Regime(format!(
            "bubble needs p = 2^*-1 = {}, got p = {}",
            params.critical(),
            params.p()
        )));
    }
    if !(scale > R::zero()) {
        return Err(ModelError::Param(format!("bubble scale must be > 0, got {scale}")));
    }
    Ok(ClosedForm {
        kind: FormKind::Bubble {
            amplitude: bubble_amplitude(params),
            scale,
            center,
        },
        params: *params,
    })
}

/// Lifts a bubble on `R^n` to a cylinder solution on `R^{n+1}`, constant in
/// the added coordinate. The exponent stays the same and becomes
/// supercritical in the lifted dimension.
pub fn cylinder_lift<R: Real>(base: ClosedForm<R>) -> Result<ClosedForm<R>, ModelError> {
    match base.kind {
        FormKind::Bubble { .. } => {}
        _ => {
            return Err(ModelError::Kind(
                "cylinder lift takes a bubble as its base".into(),
            ))
        }
    }
    let lifted = SystemParams::new(base.params.n() + 1, base.params.p())
        .expect("lifted parameters stay valid");
    Ok(ClosedForm {
        kind: FormKind::CylinderLift { base: Box::new(base) },
        params: lifted,
    })
}

impl<R: Real> ClosedForm<R> {
    /// Radial profile value `U(r)` about the form's own center.
    /// Not defined for cylinder lifts (they are not radial).
    pub fn radial_value(&self, r: R) -> R {
        match &self.kind {
            FormKind::Bubble { amplitude, scale, .. } => {
                let m = (self.params.n_real() - lit(2.0)) / lit(2.0);
                let phi = *scale / (*scale * *scale + r * r);
                *amplitude * phi.powf(m)
            }
            FormKind::SingularPower { amplitude } => {
                *amplitude * r.powf(-self.params.slow_rate())
            }
            FormKind::CylinderLift { .. } => panic!("cylinder lift has no radial profile"),
        }
    }

    /// Analytic radial derivatives `(U'(r), U''(r))`.
    pub fn radial_derivatives(&self, r: R) -> (R, R) {
        match &self.kind {
            FormKind::Bubble { amplitude, scale, .. } => {
                let two = lit::<R>(2.0);
                let m = (self.params.n_real() - two) / two;
                let t = *scale;
                let phi = t / (t * t + r * r);
                let d1 = -two * *amplitude * m * r * phi.powf(m + R::one()) / t;
                let d2 = -two * *amplitude * m * phi.powf(m + R::one()) / t
                    + lit::<R>(4.0) * *amplitude * m * (m + R::one()) * r * r
                        * phi.powf(m + two)
                        / (t * t);
                (d1, d2)
            }
            FormKind::SingularPower { amplitude } => {
                let tau = self.params.slow_rate();
                let d1 = -tau * *amplitude * r.powf(-tau - R::one());
                let d2 = tau * (tau + R::one()) * *amplitude * r.powf(-tau - lit(2.0));
                (d1, d2)
            }
            FormKind::CylinderLift { .. } => panic!("cylinder lift has no radial profile"),
        }
    }

    /// Power-law tail exponent of the form (`n-2` for bubbles, `2/(p-1)` for
    /// the singular pair).
    pub fn tail_exponent(&self) -> R {
        match &self.kind {
            FormKind::Bubble { .. } => self.params.fast_rate(),
            FormKind::SingularPower { .. } => self.params.slow_rate(),
            FormKind::CylinderLift { base } => base.tail_exponent(),
        }
    }
}

/// Evaluates a closed form at a point, returning `(u, v)`. Both components
/// agree for every family carried here.
pub fn eval_closed_form<R: Real>(form: &ClosedForm<R>, x: &[R]) -> Result<(R, R), ModelError> {
    match &form.kind {
        FormKind::Bubble { center, .. } => {
            let r = distance(x, center);
            let u = form.radial_value(r);
            Ok((u, u))
        }
        FormKind::SingularPower { .. } => {
            let r = norm(x);
            if r == R::zero() {
                return Err(ModelError::Singularity);
            }
            let u = form.radial_value(r);
            Ok((u, u))
        }
        FormKind::CylinderLift { base } => {
            let nbase = base.params.n() as usize;
            let head = if x.len() > nbase { &x[..nbase] } else { x };
            eval_closed_form(base, head)
        }
    }
}

fn norm<R: Real>(x: &[R]) -> R {
    x.iter().fold(R::zero(), |s, &c| s + c * c).sqrt()
}

fn distance<R: Real>(x: &[R], center: &[R]) -> R {
    let mut s = R::zero();
    for i in 0..x.len().max(center.len()) {
        let a = x.get(i).copied().unwrap_or_else(R::zero);
        let b = center.get(i).copied().unwrap_or_else(R::zero);
        s += (a - b) * (a - b);
    }
    s.sqrt()
}

/// A scalar field of the radius, with optional analytic derivatives.
pub trait RadialFn<R: Real> {
    fn value(&self, r: R) -> R;

    /// `(first, second)` radial derivatives, if available analytically.
    fn derivatives(&self, _r: R) -> Option<(R, R)> {
        None
    }
}

/// Wraps a plain closure; derivatives fall back to finite differences.
pub struct FnField<F>(pub F);

impl<R: Real, F: Fn(R) -> R> RadialFn<R> for FnField<F> {
    fn value(&self, r: R) -> R {
        (self.0)(r)
    }
}

/// Closed-form component as a radial field with analytic derivatives.
pub struct FormField<'a, R>(pub &'a ClosedForm<R>);

impl<R: Real> RadialFn<R> for FormField<'_, R> {
    fn value(&self, r: R) -> R {
        self.0.radial_value(r)
    }

    fn derivatives(&self, r: R) -> Option<(R, R)> {
        Some(self.0.radial_derivatives(r))
    }
}

/// Default finite-difference step for fields without analytic derivatives.
pub const H_FD_DEFAULT: f64 = 1e-4;

/// Richardson-extrapolated central differences at step `h`.
fn fd_derivatives<R: Real>(f: &dyn Fn(R) -> R, r: R, h: R) -> (R, R) {
    let four = lit::<R>(4.0);
    let three = lit::<R>(3.0);
    let d1 = |h: R| (f(r + h) - f(r - h)) / (lit::<R>(2.0) * h);
    let d2 = |h: R| (f(r + h) - lit::<R>(2.0) * f(r) + f(r - h)) / (h * h);
    let half = h / lit(2.0);
    (
        (four * d1(half) - d1(h)) / three,
        (four * d2(half) - d2(h)) / three,
    )
}

/// Pointwise residuals of the system for a radial field pair:
/// `res_u = |ΔU + sqrt(p) U^{p-1} V|`, `res_v = |ΔV + sqrt(p) U^p|`
/// with `ΔW = W'' + (n-1) W'/r`.
///
/// Analytic derivatives are used when the fields supply them; otherwise
/// Richardson-extrapolated central differences at step `h_fd`.
pub fn residual_system<R: Real>(
    u_fn: &dyn RadialFn<R>,
    v_fn: &dyn RadialFn<R>,
    params: &SystemParams<R>,
    r: R,
    h_fd: R,
) -> Result<(R, R), ModelError> {
    if !(r > R::zero()) {
        return Err(ModelError::Param(format!("residual radius must be > 0, got {r}")));
    }
    let needs_fd = u_fn.derivatives(r).is_none() || v_fn.derivatives(r).is_none();
    if needs_fd && r < lit::<R>(2.0) * h_fd {
        return Err(ModelError::Differentiation {
            r: r.to_f64().unwrap_or(f64::NAN),
            h: h_fd.to_f64().unwrap_or(f64::NAN),
        });
    }

    let eval = |f: &dyn RadialFn<R>| -> (R, R, R) {
        let w = f.value(r);
        let (d1, d2) = f
            .derivatives(r)
            .unwrap_or_else(|| fd_derivatives(&|x| f.value(x), r, h_fd));
        (w, d1, d2)
    };
    let (u, du, ddu) = eval(u_fn);
    let (v, dv, ddv) = eval(v_fn);

    let nm1 = params.n_real() - R::one();
    let lap_u = ddu + nm1 * du / r;
    let lap_v = ddv + nm1 * dv / r;
    let sp = params.sqrt_p();
    let upm1 = u.abs().powf(params.p() - R::one());
    let res_u = (lap_u + sp * upm1 * v).abs();
    let res_v = (lap_v + sp * upm1 * u).abs();
    Ok((res_u, res_v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: u32, p: f64) -> SystemParams<f64> {
        SystemParams::new(n, p).unwrap()
    }

    #[test]
    fn constructor_rejects_bad_inputs() {
        assert!(SystemParams::new(2, 3.0).is_err());
        assert!(SystemParams::new(3, 1.0).is_err());
        assert!(SystemParams::new(3, 0.5).is_err());
        assert!(SystemParams::new(3, f64::NAN).is_err());
        assert!(SystemParams::new(3, 2.0).is_ok());
    }

    #[test]
    fn derived_thresholds() {
        let q = params(3, 5.0);
        assert_eq!(q.serrin(), 3.0);
        assert_eq!(q.critical(), 5.0);
        assert_eq!(q.slow_rate(), 0.5);
        assert_eq!(q.fast_rate(), 1.0);
        let q = params(4, 4.0);
        assert_eq!(q.serrin(), 2.0);
        assert_eq!(q.critical(), 3.0);
        assert!((q.slow_rate() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn regime_examples() {
        // p = serrin boundary stays in the nonexistence cell
        let r = regime(&params(3, 3.0));
        assert_eq!(r.tag, RegimeTag::NoPositiveSolution);

        let r = regime(&params(3, 5.0));
        assert_eq!(r.tag, RegimeTag::Critical);
        assert!(r.shooting_admissible);

        let r = regime(&params(4, 4.0));
        assert_eq!(r.tag, RegimeTag::Supercritical);
        assert!(r.shooting_admissible);

        let r = regime(&params(3, 4.0));
        assert_eq!(r.tag, RegimeTag::Subcritical);
        assert!(!r.shooting_admissible);

        // p >= 2 but below critical is not admissible
        assert!(!regime(&params(3, 2.0)).shooting_admissible);
    }

    #[test]
    fn singular_amplitude_matches_printed_constant() {
        // (n=4, p=4): bracket = 4/3 - 8/9 = 4/9, c = (4/9)^{1/3}
        let form = singular_form(&params(4, 4.0)).unwrap();
        match form.kind {
            FormKind::SingularPower { amplitude } => {
                assert!((amplitude - (4.0f64 / 9.0).powf(1.0 / 3.0)).abs() < 1e-15);
            }
            _ => panic!("expected singular power"),
        }
        // boundary p = serrin is rejected
        assert!(matches!(
            singular_form(&params(3, 3.0)),
            Err(ModelError::Regime(_))
        ));
    }

    #[test]
    fn singular_bracket_changes_sign_at_serrin() {
        for n in 3..=8u32 {
            let s = params(n, 2.0).serrin().max(1.0 + 1e-9);
            let below = SystemParams::new(n, s * 0.99).unwrap();
            let above = SystemParams::new(n, s * 1.01).unwrap();
            assert!(singular_bracket(&below) < 0.0, "n={n}");
            assert!(singular_bracket(&above) > 0.0, "n={n}");
        }
    }

    #[test]
    fn bubble_requires_critical_exponent() {
        assert!(bubble_form(&params(4, 4.0), 1.0, vec![]).is_err());
        assert!(bubble_form(&params(3, 5.0), 1.0, vec![]).is_ok());
    }

    #[test]
    fn singular_residual_analytic() {
        // oracle: Δ(r^{-t}) = t(t+2-n) r^{-t-2}, so the residual reduces to
        // |c t(n-2-t) - sqrt(p) c^p| r^{-t-2} which vanishes by construction
        let q = params(4, 4.0);
        let form = singular_form(&q).unwrap();
        let field = FormField(&form);
        for &r in &[0.1, 1.0, 10.0] {
            let (ru, rv) = residual_system(&field, &field, &q, r, 1e-4).unwrap();
            assert!(ru < 1e-10 && rv < 1e-10, "r={r}: ({ru:.2e},{rv:.2e})");
        }
    }

    #[test]
    fn bubble_residual_fd() {
        // finite-difference path (value-only field), step 1e-4 per default
        let q = params(3, 5.0);
        let form = bubble_form(&q, 1.0, vec![]).unwrap();
        let f = form.clone();
        let field = FnField(move |r: f64| f.radial_value(r));
        for &r in &[0.5, 1.0, 5.0] {
            let (ru, rv) = residual_system(&field, &field, &q, r, 1e-4).unwrap();
            assert!(ru < 1e-7 && rv < 1e-7, "r={r}: ({ru:.2e},{rv:.2e})");
        }
        // analytic path is exact to rounding
        let af = FormField(&form);
        for &r in &[0.5, 1.0, 5.0] {
            let (ru, rv) = residual_system(&af, &af, &q, r, 1e-4).unwrap();
            assert!(ru < 1e-12 && rv < 1e-12);
        }
    }

    #[test]
    fn residual_fd_guard_near_origin() {
        let q = params(3, 5.0);
        let field = FnField(|r: f64| r.exp());
        let err = residual_system(&field, &field, &q, 1e-5, 1e-4);
        assert!(matches!(err, Err(ModelError::Differentiation { .. })));
    }

    #[test]
    fn zero_fields_have_zero_residual() {
        let q = params(3, 5.0);
        let zero = FnField(|_r: f64| 0.0);
        let (ru, rv) = residual_system(&zero, &zero, &q, 1.0, 1e-4).unwrap();
        assert_eq!(ru, 0.0);
        assert_eq!(rv, 0.0);
    }

    #[test]
    fn eval_singular_at_unit_radius() {
        let form = singular_form(&params(4, 4.0)).unwrap();
        let (u, v) = eval_closed_form(&form, &[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(u, v);
        assert!((u - (4.0f64 / 9.0).powf(1.0 / 3.0)).abs() < 1e-15);
        assert!(matches!(
            eval_closed_form(&form, &[0.0, 0.0, 0.0, 0.0]),
            Err(ModelError::Singularity)
        ));
    }

    #[test]
    fn bubble_limit_and_center_value() {
        let q = params(3, 5.0);
        let form = bubble_form(&q, 1.0, vec![0.0; 3]).unwrap();
        let c = bubble_amplitude(&q);
        let (u0, _) = eval_closed_form(&form, &[0.0; 3]).unwrap();
        assert!((u0 - c).abs() < 1e-15); // c * t^{-(n-2)/2} with t = 1
        // u |x|^{n-2} -> c t^{(n-2)/2}
        let r = 1e6;
        let (u, _) = eval_closed_form(&form, &[r, 0.0, 0.0]).unwrap();
        assert!((u * r - c).abs() / c < 1e-10);
    }

    #[test]
    fn cylinder_lift_structure() {
        let q = params(3, 5.0);
        let base = bubble_form(&q, 1.0, vec![0.0; 3]).unwrap();
        let lift = cylinder_lift(base.clone()).unwrap();
        assert_eq!(lift.params.n(), 4);
        assert_eq!(lift.params.p(), 5.0);
        // supercritical in the lifted dimension: p = 5 > critical(4) = 3
        assert_eq!(regime(&lift.params).tag, RegimeTag::Supercritical);
        // constant along the added axis
        let (a, _) = eval_closed_form(&lift, &[0.3, -0.2, 0.9, 0.0]).unwrap();
        let (b, _) = eval_closed_form(&lift, &[0.3, -0.2, 0.9, 17.0]).unwrap();
        assert_eq!(a, b);
        // and equal to the base on the first n coordinates
        let (c, _) = eval_closed_form(&base, &[0.3, -0.2, 0.9]).unwrap();
        assert_eq!(a, c);
        // only bubbles lift
        let sing = singular_form(&params(4, 4.0)).unwrap();
        assert!(matches!(cylinder_lift(sing), Err(ModelError::Kind(_))));
    }

    #[test]
    fn lifted_form_satisfies_system_in_cylindrical_coords() {
        // Δ_{n+1} w = w_ρρ + (n-1)/ρ w_ρ + w_zz for w(ρ, z); the lift is
        // z-independent so the base residual carries over. Checked with
        // central differences in the lifted geometry.
        let q = params(3, 5.0);
        let lift = cylinder_lift(bubble_form(&q, 1.0, vec![0.0; 3]).unwrap()).unwrap();
        let sp = 5.0f64.sqrt();
        let h = 1e-3;
        for &(rho, z) in &[(0.7, 0.0), (1.3, 2.0), (3.0, -5.0)] {
            let w = |rho: f64, z: f64| {
                let x = [rho, 0.0, 0.0, z];
                eval_closed_form(&lift, &x).unwrap().0
            };
            // Richardson-extrapolated central differences
            let d2 = |f: &dyn Fn(f64) -> f64, x: f64, h: f64| {
                let raw = |h: f64| (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
                (4.0 * raw(h / 2.0) - raw(h)) / 3.0
            };
            let d1 = |f: &dyn Fn(f64) -> f64, x: f64, h: f64| {
                let raw = |h: f64| (f(x + h) - f(x - h)) / (2.0 * h);
                (4.0 * raw(h / 2.0) - raw(h)) / 3.0
            };
            let along_rho = |x: f64| w(x, z);
            let along_z = |x: f64| w(rho, x);
            let lap = d2(&along_rho, rho, h) + 2.0 / rho * d1(&along_rho, rho, h)
                + d2(&along_z, z, h); // base n = 3 => (n-1)/rho = 2/rho
            let u = w(rho, z);
            let res = (lap + sp * u.powi(5)).abs();
            assert!(res < 1e-8, "rho={rho} z={z}: {res:.2e}");
        }
    }

    #[test]
    fn closed_form_components_identical() {
        let q = params(3, 5.0);
        let forms = [
            bubble_form(&q, 2.0, vec![1.0, 0.0, 0.0]).unwrap(),
            singular_form(&params(4, 4.0)).unwrap(),
        ];
        for form in &forms {
            let (u, v) = eval_closed_form(form, &[0.5, 0.5, 0.5, 0.5]).unwrap();
            assert_eq!(u, v);
        }
    }

    #[test]
    fn regime_works_in_f32() {
        let q = SystemParams::<f32>::new(4, 4.0).unwrap();
        assert_eq!(regime(&q).tag, RegimeTag::Supercritical);
    }
}

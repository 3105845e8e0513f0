//! Radial Newton-potential quadrature and verification of the integral
//! system
//!
//! ```text
//!   u = c1 * |x|^{2-n} * (u^{p-1} v),    v = c2 * |x|^{2-n} * u^p
//! ```
//!
//! For a radial density the convolution reduces exactly to two
//! one-dimensional integrals through the spherical mean identity: the mean
//! of `|x-y|^{2-n}` over the sphere `|y| = s` equals `max(r,s)^{2-n}`.

use crate::grid::{cumulative_uniform, log_grid, suffix_uniform, GridError, ProfileInterp};
use crate::integrator::RadialProfile;
use crate::model::ClosedForm;
use crate::scalar::{lit, sphere_area, Real};
use crate::shooting::{decay_fit, ShootError, DECAY_WINDOW_DEFAULT};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error("tail error: {0}")]
    Tail(String),
    #[error(transparent)]
    Grid(#[from] GridError),
    #[error("field error: {0}")]
    Field(String),
}

impl From<ShootError> for PotentialError {
    fn from(e: ShootError) -> Self {
        PotentialError::Field(e.to_string())
    }
}

/// Nonnegative radial samples on a log-uniform grid, with an optional
/// power-law continuation `f(r) = f(r_max) (r/r_max)^{-t}` past the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialField<R> {
    grid: Vec<R>,
    values: Vec<R>,
    tail_exponent: Option<R>,
}

impl<R: Real> RadialField<R> {
    pub fn new(grid: Vec<R>, values: Vec<R>, tail_exponent: Option<R>) -> Result<Self, PotentialError> {
        if grid.len() != values.len() || grid.len() < 4 {
            return Err(PotentialError::Field(format!(
                "need matching grid/value lengths of at least 4, got {} / {}",
                grid.len(),
                values.len()
            )));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) || !(grid[0] > R::zero()) {
            return Err(GridError::Invalid("grid must be positive and strictly increasing".into()).into());
        }
        // the cumulative rule needs uniform log spacing
        let x0 = grid[0].ln();
        let step = (grid[grid.len() - 1].ln() - x0) / R::from_usize(grid.len() - 1).unwrap();
        for (k, g) in grid.iter().enumerate() {
            let expect = x0 + step * R::from_usize(k).unwrap();
            if (g.ln() - expect).abs() > lit::<R>(1e-8) * step.max(R::one()) {
                return Err(GridError::Invalid("grid must be log-uniform".into()).into());
            }
        }
        if values.iter().any(|v| !v.is_finite() || *v < R::zero()) {
            return Err(PotentialError::Field("values must be finite and nonnegative".into()));
        }
        Ok(Self {
            grid,
            values,
            tail_exponent,
        })
    }

    pub fn grid(&self) -> &[R] {
        &self.grid
    }

    pub fn values(&self) -> &[R] {
        &self.values
    }

    pub fn tail_exponent(&self) -> Option<R> {
        self.tail_exponent
    }

    /// Power-law exponent that extrapolates the first two samples toward the
    /// origin; zero when either sample vanishes.
    fn head_exponent(&self) -> R {
        let (f0, f1) = (self.values[0], self.values[1]);
        if f0 <= R::zero() || f1 <= R::zero() {
            return R::zero();
        }
        (f0 / f1).ln() / (self.grid[1] / self.grid[0]).ln()
    }

    /// `int_0^{r0} s^{m-1} f(s) ds` by the head power law.
    fn head_moment(&self, m: R) -> Result<R, PotentialError> {
        let theta = self.head_exponent();
        if theta >= m {
            return Err(PotentialError::Tail(format!(
                "density grows like r^-{theta} toward the origin; moment of order {m} diverges"
            )));
        }
        Ok(self.values[0] * self.grid[0].powf(m) / (m - theta))
    }

    /// `int_{r_max}^inf s^{m-1} f(s) ds` by the tail power law; requires the
    /// tail exponent to exceed `m` unless the last sample is zero.
    fn tail_moment(&self, m: R) -> Result<R, PotentialError> {
        let f_end = *self.values.last().unwrap();
        if f_end == R::zero() {
            return Ok(R::zero());
        }
        let t = self.tail_exponent.ok_or_else(|| {
            PotentialError::Tail("tail exponent required for an improper integral".into())
        })?;
        if t <= m {
            return Err(PotentialError::Tail(format!(
                "tail exponent {t} <= {m}; improper integral diverges"
            )));
        }
        let r_end = *self.grid.last().unwrap();
        Ok(f_end * r_end.powf(m) / (t - m))
    }

    pub(crate) fn head_moment_pub(&self, m: R) -> Result<R, PotentialError> {
        self.head_moment(m)
    }

    pub(crate) fn tail_moment_pub(&self, m: R) -> Result<R, PotentialError> {
        self.tail_moment(m)
    }

    pub(crate) fn cumulative_moment_pub(&self, m: R) -> Vec<R> {
        self.cumulative_moment(m)
    }

    /// Cumulative `int_{r0}^{r_k} s^{m-1} f(s) ds` on the grid (log variable).
    fn cumulative_moment(&self, m: R) -> Vec<R> {
        let (x, w) = self.log_weights(m);
        cumulative_uniform(&x, &w)
    }

    /// Remaining `int_{r_k}^{r_end} s^{m-1} f(s) ds`, summed backward.
    fn suffix_moment(&self, m: R) -> Vec<R> {
        let (x, w) = self.log_weights(m);
        suffix_uniform(&x, &w)
    }

    fn log_weights(&self, m: R) -> (Vec<R>, Vec<R>) {
        let x: Vec<R> = self.grid.iter().map(|g| g.ln()).collect();
        let w: Vec<R> = self
            .grid
            .iter()
            .zip(self.values.iter())
            .map(|(&g, &f)| g.powf(m) * f)
            .collect();
        (x, w)
    }
}

/// Area of the unit (n-1)-sphere.
pub fn surface_area<R: Real>(n: u32) -> R {
    sphere_area(n)
}

/// Newton potential of a radial density:
///
/// ```text
///   g(r) = omega_{n-1} [ r^{2-n} int_0^r s^{n-1} f ds  +  int_r^inf s f ds ]
/// ```
///
/// exact radial reduction of `int f(|y|) |x-y|^{2-n} dy`.
pub fn radial_newton<R: Real>(f: &RadialField<R>, n: u32) -> Result<RadialField<R>, PotentialError> {
    if n < 3 {
        return Err(PotentialError::Field("the kernel |x|^{2-n} needs n >= 3".into()));
    }
    let nn = lit::<R>(n as f64);
    let omega = surface_area::<R>(n);
    let two = lit::<R>(2.0);

    let head_inner = f.head_moment(nn)?;
    let inner = f.cumulative_moment(nn);
    let outer_left = f.suffix_moment(two);
    let tail_outer = f.tail_moment(two)?;

    let mut g = Vec::with_capacity(f.grid.len());
    for (k, &r) in f.grid.iter().enumerate() {
        let inner_k = head_inner + inner[k];
        let outer_k = outer_left[k] + tail_outer;
        g.push(omega * (r.powf(two - nn) * inner_k + outer_k));
    }

    // the potential of a finite-mass density decays like r^{2-n}; a slow
    // density with tail exponent t in (2, n) only reaches r^{2-t}
    let g_tail = match f.tail_exponent {
        Some(t) if *f.values.last().unwrap() > R::zero() => (nn - two).min(t - two),
        _ => nn - two,
    };
    RadialField::new(f.grid.clone(), g, Some(g_tail))
}

/// Kernel normalizations making the integral system equivalent to the
/// differential one: `c1 = c2 = sqrt(p) / ((n-2) omega_{n-1})`, the constant
/// for which `-Δ (c |x|^{2-n} * f) = sqrt(p) f`.
pub fn ie_constants<R: Real>(params: &crate::model::SystemParams<R>) -> (R, R) {
    let c = params.sqrt_p()
        / ((params.n_real() - lit(2.0)) * surface_area::<R>(params.n()));
    (c, c)
}

/// Radial samples of a solution pair with known tail exponents, ready for
/// integral-equation verification.
#[derive(Debug, Clone)]
pub struct SampledSolution<R> {
    pub params: crate::model::SystemParams<R>,
    pub grid: Vec<R>,
    pub u: Vec<R>,
    pub v: Vec<R>,
    pub tail_u: R,
    pub tail_v: R,
}

impl<R: Real> SampledSolution<R> {
    pub fn from_form(form: &ClosedForm<R>, r_lo: R, r_hi: R, nodes: usize) -> Result<Self, PotentialError> {
        let grid = log_grid(r_lo, r_hi, nodes)?;
        let u: Vec<R> = grid.iter().map(|&r| form.radial_value(r)).collect();
        let t = form.tail_exponent();
        Ok(Self {
            params: form.params,
            grid,
            v: u.clone(),
            u,
            tail_u: t,
            tail_v: t,
        })
    }

    /// Resamples an entire profile onto a log grid; the tail exponent comes
    /// from the decay fit.
    pub fn from_profile(profile: &RadialProfile<R>, nodes: usize) -> Result<Self, PotentialError> {
        if !profile.outcome.is_entire() {
            return Err(PotentialError::Tail(
                "integral-system verification needs an entire positive profile".into(),
            ));
        }
        let fit = decay_fit(profile, (lit(DECAY_WINDOW_DEFAULT.0), lit(DECAY_WINDOW_DEFAULT.1)))?;
        let interp = ProfileInterp::new(profile);
        let grid = log_grid(interp.r_min(), interp.r_max(), nodes)?;
        let u: Vec<R> = grid.iter().map(|&r| interp.u_at(r)).collect();
        let v: Vec<R> = grid.iter().map(|&r| interp.v_at(r)).collect();
        Ok(Self {
            params: profile.params,
            grid,
            u,
            v,
            tail_u: fit.rate,
            tail_v: fit.rate,
        })
    }
}

/// Outcome of reconstructing both components through the Newton kernels.
#[derive(Debug, Clone)]
pub struct IeReport<R> {
    /// Max relative deviation of `c1 K*(u^{p-1} v)` from `u`.
    pub u_deviation: R,
    /// Max relative deviation of `c2 K*(u^p)` from `v`.
    pub v_deviation: R,
    pub c1: R,
    pub c2: R,
    pub nodes: usize,
    pub tail_u: R,
    pub tail_v: R,
}

/// Verifies the integral system on a sampled solution.
pub fn verify_ie<R: Real>(sol: &SampledSolution<R>) -> Result<IeReport<R>, PotentialError> {
    let params = &sol.params;
    let p = params.p();
    let (c1, c2) = ie_constants(params);

    // convergence of the outer Newton integral needs the integrands to
    // decay faster than s^{-2}
    let t_fu = (p - R::one()) * sol.tail_u + sol.tail_v;
    let t_fv = p * sol.tail_u;
    let two = lit::<R>(2.0);
    if t_fu <= two || t_fv <= two {
        return Err(PotentialError::Tail(format!(
            "integrand tails ({t_fu}, {t_fv}) do not clear the convergence threshold 2; \
             the profile decays too slowly for the Newton representation"
        )));
    }

    let fu: Vec<R> = sol
        .u
        .iter()
        .zip(sol.v.iter())
        .map(|(&u, &v)| u.powf(p - R::one()) * v)
        .collect();
    let fv: Vec<R> = sol.u.iter().map(|&u| u.powf(p)).collect();
    let field_u = RadialField::new(sol.grid.clone(), fu, Some(t_fu))?;
    let field_v = RadialField::new(sol.grid.clone(), fv, Some(t_fv))?;
    let gu = radial_newton(&field_u, params.n())?;
    let gv = radial_newton(&field_v, params.n())?;

    let mut u_dev = R::zero();
    let mut v_dev = R::zero();
    for k in 0..sol.grid.len() {
        u_dev = u_dev.max(((c1 * gu.values[k] - sol.u[k]) / sol.u[k]).abs());
        v_dev = v_dev.max(((c2 * gv.values[k] - sol.v[k]) / sol.v[k]).abs());
    }
    Ok(IeReport {
        u_deviation: u_dev,
        v_deviation: v_dev,
        c1,
        c2,
        nodes: sol.grid.len(),
        tail_u: sol.tail_u,
        tail_v: sol.tail_v,
    })
}

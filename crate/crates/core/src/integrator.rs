//! Adaptive integration of the radial system
//!
//! ```text
//!   -(U'' + (n-1)/r U') = sqrt(p) U^{p-1} V
//!   -(V'' + (n-1)/r V') = sqrt(p) U^p
//!   U(0) = 1, V(0) = a, U'(0) = V'(0) = 0
//! ```
//!
//! from a series start at `r0` outward, with embedded Dormand–Prince 5(4)
//! stepping and event localization for the first zero of either component.
//!
//! The right-hand side evaluates `U^p` as `U^{p-1} * U` so that a state with
//! `U == V` bitwise stays bitwise symmetric through every stage. The `a = 1`
//! trajectory therefore carries `U - V = 0` exactly, which is what makes the
//! shooting threshold resolvable far below the integration tolerance.

use crate::model::{ModelError, SystemParams};
use crate::scalar::{lit, Real};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntegrateError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("step size underflow at r = {r} (h = {h}); system too stiff")]
    Stiffness { r: f64, h: f64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// One sample `(r, U, U', V, V')` of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialState<R> {
    pub r: R,
    pub u: R,
    pub du: R,
    pub v: R,
    pub dv: R,
}

impl<R: Real> RadialState<R> {
    pub fn new(r: R, u: R, du: R, v: R, dv: R) -> Result<Self, IntegrateError> {
        let s = Self { r, u, du, v, dv };
        if !s.is_finite() {
            return Err(IntegrateError::Domain("non-finite state entry".into()));
        }
        if r < R::zero() {
            return Err(IntegrateError::Domain("negative radius".into()));
        }
        Ok(s)
    }

    pub fn is_finite(&self) -> bool {
        self.r.is_finite()
            && self.u.is_finite()
            && self.du.is_finite()
            && self.v.is_finite()
            && self.dv.is_finite()
    }
}

/// Derivative of a state with respect to `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative<R> {
    pub du: R,
    pub ddu: R,
    pub dv: R,
    pub ddv: R,
}

/// Right-hand side of the first-order system at `s`.
///
/// Requires `s.r > 0` (the `(n-1)/r` terms are singular at the origin; use
/// [`series_start`] there) and `s.u >= 0`.
pub fn rhs<R: Real>(
    params: &SystemParams<R>,
    s: &RadialState<R>,
) -> Result<StateDerivative<R>, IntegrateError> {
    if s.r <= R::zero() {
        return Err(IntegrateError::Domain(
            "rhs undefined at r <= 0; start from the series expansion".into(),
        ));
    }
    if s.u < R::zero() {
        return Err(IntegrateError::Domain("rhs undefined for U < 0".into()));
    }
    let [ddu, ddv] = second_derivatives(params, s.r, s.u, s.du, s.v, s.dv);
    Ok(StateDerivative {
        du: s.du,
        ddu,
        dv: s.dv,
        ddv,
    })
}

/// Shared kernel: clamps `U` at zero for interior Runge–Kutta stages and
/// keeps the two forcings bitwise symmetric under `(U,U') <-> (V,V')`.
#[inline]
fn second_derivatives<R: Real>(params: &SystemParams<R>, r: R, u: R, du: R, v: R, dv: R) -> [R; 2] {
    let nm1 = params.n_real() - R::one();
    let f = params.sqrt_p() * u.max(R::zero()).powf(params.p() - R::one());
    [-nm1 * du / r - f * v, -nm1 * dv / r - f * u]
}

/// Fourth-order series start at `0 < r0 << 1`:
///
/// ```text
///   U(r0) = 1 - sqrt(p) a r0^2/(2n) + p(1+(p-1)a^2) r0^4/(8n(n+2)) + O(r0^6)
///   V(r0) = a - sqrt(p)   r0^2/(2n) + p^2 a          r0^4/(8n(n+2)) + O(r0^6)
/// ```
///
/// obtained from two passes of the double-integral fixed-point map. At
/// `a = 1` the two expansions agree bitwise.
pub fn series_start<R: Real>(
    params: &SystemParams<R>,
    a: R,
    r0: R,
) -> Result<RadialState<R>, IntegrateError> {
    if !(a > R::zero()) || !a.is_finite() {
        return Err(IntegrateError::Param(format!("shooting parameter a must be > 0, got {a}")));
    }
    if !(r0 > R::zero()) || !r0.is_finite() {
        return Err(IntegrateError::Param(format!("series radius r0 must be > 0, got {r0}")));
    }
    let n = params.n_real();
    let p = params.p();
    let sp = params.sqrt_p();
    let two = lit::<R>(2.0);

    let q2 = sp * r0 * r0 / (two * n);
    let q4 = p * r0 * r0 * r0 * r0 / (lit::<R>(8.0) * n * (n + two));
    let d2 = sp * r0 / n;
    let d4 = p * r0 * r0 * r0 / (two * n * (n + two));

    // quartic coefficients: 1 + (p-1) a^2 for U, p a for V (equal at a = 1)
    let cu = R::one() + (p - R::one()) * a * a;
    let cv = p * a;

    let u = R::one() - q2 * a + q4 * cu;
    let v = a - q2 * R::one() + q4 * cv;
    let du = -d2 * a + d4 * cu;
    let dv = -d2 * R::one() + d4 * cv;
    RadialState::new(r0, u, du, v, dv)
}

/// Which component hit zero first, or positivity up to the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TrajectoryOutcome<R> {
    /// `U` vanished at the given radius while `V` stayed positive.
    UVanished(R),
    /// `V` vanished first.
    VVanished(R),
    /// Both vanished within the simultaneity window.
    BothVanished(R),
    /// Both components exceeded the positivity floor on the whole range.
    EntirePositive(R),
}

impl<R: Copy> TrajectoryOutcome<R> {
    pub fn radius(&self) -> R {
        match *self {
            TrajectoryOutcome::UVanished(r)
            | TrajectoryOutcome::VVanished(r)
            | TrajectoryOutcome::BothVanished(r)
            | TrajectoryOutcome::EntirePositive(r) => r,
        }
    }

    pub fn is_entire(&self) -> bool {
        matches!(self, TrajectoryOutcome::EntirePositive(_))
    }

    pub fn tag(&self) -> &'static str {
        match self {
            TrajectoryOutcome::UVanished(_) => "u_vanished",
            TrajectoryOutcome::VVanished(_) => "v_vanished",
            TrajectoryOutcome::BothVanished(_) => "both_vanished",
            TrajectoryOutcome::EntirePositive(_) => "entire_positive",
        }
    }
}

/// An integrated trajectory: samples at accepted steps plus the outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile<R> {
    pub params: SystemParams<R>,
    pub a: R,
    pub samples: Vec<RadialState<R>>,
    pub outcome: TrajectoryOutcome<R>,
}

impl<R: Real> RadialProfile<R> {
    pub fn first(&self) -> &RadialState<R> {
        self.samples.first().expect("profile is never empty")
    }

    pub fn last(&self) -> &RadialState<R> {
        self.samples.last().expect("profile is never empty")
    }

    /// Largest `|U - V|` over the samples.
    pub fn sync_deviation(&self) -> R {
        self.samples
            .iter()
            .map(|s| (s.u - s.v).abs())
            .fold(R::zero(), R::max)
    }

    pub fn max_u(&self) -> R {
        self.samples.iter().map(|s| s.u).fold(R::zero(), R::max)
    }
}

/// Tunables for [`integrate_with`]. The plain [`integrate`] entry point uses
/// the defaults with caller-supplied `r_max` and `tol`.
#[derive(Debug, Clone, Copy)]
pub struct IntegrateOptions<R> {
    /// Series-start radius.
    pub r0: R,
    /// Local error per unit step.
    pub tol: R,
    /// Integration horizon.
    pub r_max: R,
    /// Step cap `h <= r * h_cap_ratio`, keeps log-uniform sample density.
    pub h_cap_ratio: R,
    /// Relative width of the event bracket after root polish.
    pub event_tol: R,
    /// Positivity floor distinguishing an entire trajectory from a graze.
    pub eps_pos: R,
    /// Simultaneity window for `BothVanished`.
    pub both_window: R,
}

impl<R: Real> Default for IntegrateOptions<R> {
    fn default() -> Self {
        Self {
            r0: lit(1e-4),
            tol: lit(1e-10),
            r_max: lit(1e3),
            h_cap_ratio: lit(1.0 / 64.0),
            event_tol: lit(1e-12),
            eps_pos: lit(1e-13),
            both_window: lit(1e-8),
        }
    }
}

/// Dormand–Prince 5(4) coefficients.
const A2: [f64; 1] = [1.0 / 5.0];
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
];
const B: [f64; 6] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
];
/// Difference between the 5th- and 4th-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

type Vec4<R> = [R; 4];

#[inline]
fn axpy<R: Real>(y: &Vec4<R>, h: R, coeffs: &[f64], ks: &[Vec4<R>]) -> Vec4<R> {
    let mut out = *y;
    for (c, k) in coeffs.iter().zip(ks.iter()) {
        let c = lit::<R>(*c);
        for i in 0..4 {
            out[i] += h * c * k[i];
        }
    }
    out
}

struct Stepper<'a, R> {
    params: &'a SystemParams<R>,
}

impl<R: Real> Stepper<'_, R> {
    #[inline]
    fn eval(&self, r: R, y: &Vec4<R>) -> Vec4<R> {
        let [ddu, ddv] = second_derivatives(self.params, r, y[0], y[1], y[2], y[3]);
        [y[1], ddu, y[3], ddv]
    }

    /// One 5th-order step of size `h` from `(r, y)` with `k1` given.
    /// Returns `(y_new, k_last, err_estimate)`.
    fn step(&self, r: R, y: &Vec4<R>, k1: &Vec4<R>, h: R) -> (Vec4<R>, Vec4<R>, R) {
        let k2 = self.eval(r + lit::<R>(0.2) * h, &axpy(y, h, &A2, &[*k1]));
        let k3 = self.eval(r + lit::<R>(0.3) * h, &axpy(y, h, &A3, &[*k1, k2]));
        let k4 = self.eval(r + lit::<R>(0.8) * h, &axpy(y, h, &A4, &[*k1, k2, k3]));
        let k5 = self.eval(
            r + lit::<R>(8.0 / 9.0) * h,
            &axpy(y, h, &A5, &[*k1, k2, k3, k4]),
        );
        let k6 = self.eval(r + h, &axpy(y, h, &A6, &[*k1, k2, k3, k4, k5]));
        let y_new = axpy(y, h, &B, &[*k1, k2, k3, k4, k5, k6]);
        let k7 = self.eval(r + h, &y_new);

        let ks = [*k1, k2, k3, k4, k5, k6, k7];
        let mut err = R::zero();
        for i in 0..4 {
            let mut e = R::zero();
            for (c, k) in E.iter().zip(ks.iter()) {
                e += lit::<R>(*c) * k[i];
            }
            e *= h;
            let scale = R::one().max(y[i].abs()).max(y_new[i].abs());
            err = err.max((e / scale).abs());
        }
        (y_new, k7, err)
    }

    /// Partial step used for event localization: advance by `h` and return
    /// the new state only.
    fn substep(&self, r: R, y: &Vec4<R>, k1: &Vec4<R>, h: R) -> Vec4<R> {
        self.step(r, y, k1, h).0
    }
}

/// Integrates the radial system with default options.
pub fn integrate<R: Real>(
    params: &SystemParams<R>,
    a: R,
    r_max: R,
    tol: R,
) -> Result<RadialProfile<R>, IntegrateError> {
    let opts = IntegrateOptions {
        r_max,
        tol,
        ..Default::default()
    };
    integrate_with(params, a, &opts)
}

/// Integrates the radial system from the series start to `opts.r_max` or the
/// first component zero.
pub fn integrate_with<R: Real>(
    params: &SystemParams<R>,
    a: R,
    opts: &IntegrateOptions<R>,
) -> Result<RadialProfile<R>, IntegrateError> {
    if params.p() < lit(2.0) {
        return Err(IntegrateError::Param(format!(
            "integration requires p >= 2 (U^{{p-1}} loses Lipschitz continuity at U = 0), got p = {}",
            params.p()
        )));
    }
    if !(opts.tol > R::zero()) {
        return Err(IntegrateError::Param("tol must be > 0".into()));
    }
    if !(opts.r_max > opts.r0) {
        return Err(IntegrateError::Param("r_max must exceed the series radius".into()));
    }
    let start = series_start(params, a, opts.r0)?;

    let stepper = Stepper { params };
    let mut r = start.r;
    let mut y: Vec4<R> = [start.u, start.du, start.v, start.dv];
    let mut k1 = stepper.eval(r, &y);
    let mut samples = vec![start];
    let mut h = opts.r0 / lit(20.0);

    let safety = lit::<R>(0.9);
    let grow = lit::<R>(5.0);
    let shrink = lit::<R>(0.2);
    let quarter = lit::<R>(0.25);

    loop {
        let h_cap = (r * opts.h_cap_ratio).min(opts.r_max - r);
        if h > h_cap {
            h = h_cap;
        }
        if h < lit::<R>(1e-14) * r {
            return Err(IntegrateError::Stiffness {
                r: r.to_f64().unwrap_or(f64::NAN),
                h: h.to_f64().unwrap_or(f64::NAN),
            });
        }

        let (y_new, k_last, err) = stepper.step(r, &y, &k1, h);
        let budget = opts.tol * h;

        if err <= budget || h <= lit::<R>(2e-14) * r {
            // accepted
            let r_new = r + h;
            if !y_new.iter().all(|c| c.is_finite()) {
                return Err(IntegrateError::Domain(format!(
                    "state became non-finite near r = {r_new}"
                )));
            }

            if let Some(outcome) =
                detect_event(&stepper, r, &y, &k1, h, &y_new, opts, &mut samples)?
            {
                return Ok(RadialProfile {
                    params: *params,
                    a,
                    samples,
                    outcome,
                });
            }

            samples.push(RadialState::new(r_new, y_new[0], y_new[1], y_new[2], y_new[3])?);

            // positivity floor: a component this small is a vanish in all but name
            if y_new[0] <= opts.eps_pos || y_new[2] <= opts.eps_pos {
                let outcome = if y_new[0] <= opts.eps_pos && y_new[2] <= opts.eps_pos {
                    TrajectoryOutcome::BothVanished(r_new)
                } else if y_new[0] <= opts.eps_pos {
                    TrajectoryOutcome::UVanished(r_new)
                } else {
                    TrajectoryOutcome::VVanished(r_new)
                };
                return Ok(RadialProfile {
                    params: *params,
                    a,
                    samples,
                    outcome,
                });
            }

            r = r_new;
            y = y_new;
            k1 = k_last; // FSAL

            if r >= opts.r_max {
                return Ok(RadialProfile {
                    params: *params,
                    a,
                    samples,
                    outcome: TrajectoryOutcome::EntirePositive(opts.r_max),
                });
            }

            let factor = if err == R::zero() {
                grow
            } else {
                (safety * (budget / err).powf(quarter)).max(shrink).min(grow)
            };
            h *= factor;
        } else {
            let factor = (safety * (budget / err).powf(quarter)).max(shrink);
            h *= factor;
        }
    }
}

/// Checks the accepted step `[r, r+h]` for zero crossings of `U` (index 0)
/// and `V` (index 2); localizes them by bisection on the one-step map and
/// applies the simultaneity window.
#[allow(clippy::too_many_arguments)]
fn detect_event<R: Real>(
    stepper: &Stepper<'_, R>,
    r: R,
    y: &Vec4<R>,
    k1: &Vec4<R>,
    h: R,
    y_new: &Vec4<R>,
    opts: &IntegrateOptions<R>,
    samples: &mut Vec<RadialState<R>>,
) -> Result<Option<TrajectoryOutcome<R>>, IntegrateError> {
    let crossed = |idx: usize| y[idx] > R::zero() && y_new[idx] <= R::zero();
    let cu = crossed(0);
    let cv = crossed(2);
    if !cu && !cv {
        return Ok(None);
    }

    let locate = |idx: usize| -> (R, Vec4<R>) {
        // invariant: component positive at lo, non-positive at hi
        let mut lo = R::zero();
        let mut hi = h;
        let mut state_hi = *y_new;
        let width_goal = opts.event_tol * R::one().max(r);
        for _ in 0..200 {
            if hi - lo <= width_goal {
                break;
            }
            let mid = (lo + hi) * lit(0.5);
            if mid <= lo || mid >= hi {
                break;
            }
            let s = stepper.substep(r, y, k1, mid);
            if s[idx] > R::zero() {
                lo = mid;
            } else {
                hi = mid;
                state_hi = s;
            }
        }
        (r + hi, state_hi)
    };

    let (outcome, event_state, event_r) = match (cu, cv) {
        (true, true) => {
            let (ru, su) = locate(0);
            let (rv, sv) = locate(2);
            if (ru - rv).abs() < opts.both_window {
                let rr = ru.min(rv);
                let ss = if ru <= rv { su } else { sv };
                (TrajectoryOutcome::BothVanished(rr), ss, rr)
            } else if ru < rv {
                (TrajectoryOutcome::UVanished(ru), su, ru)
            } else {
                (TrajectoryOutcome::VVanished(rv), sv, rv)
            }
        }
        (true, false) => {
            let (ru, su) = locate(0);
            // V may cross just past this step; linear look-ahead within the window
            if su[3] < R::zero() && su[2] + su[3] * opts.both_window <= R::zero() {
                (TrajectoryOutcome::BothVanished(ru), su, ru)
            } else {
                (TrajectoryOutcome::UVanished(ru), su, ru)
            }
        }
        (false, true) => {
            let (rv, sv) = locate(2);
            if sv[1] < R::zero() && sv[0] + sv[1] * opts.both_window <= R::zero() {
                (TrajectoryOutcome::BothVanished(rv), sv, rv)
            } else {
                (TrajectoryOutcome::VVanished(rv), sv, rv)
            }
        }
        _ => unreachable!(),
    };

    samples.push(RadialState::new(
        event_r,
        event_state[0],
        event_state[1],
        event_state[2],
        event_state[3],
    )?);
    Ok(Some(outcome))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SystemParams;

    fn params(n: u32, p: f64) -> SystemParams<f64> {
        SystemParams::new(n, p).unwrap()
    }

    #[test]
    fn rhs_printed_values() {
        // (n=3,p=2), state (r=1,U=1,V=1,dU=0,dV=0): ddu = ddv = -sqrt(2)
        let q = params(3, 2.0);
        let s = RadialState::new(1.0, 1.0, 0.0, 1.0, 0.0).unwrap();
        let d = rhs(&q, &s).unwrap();
        assert!((d.ddu + 2.0f64.sqrt()).abs() < 1e-15);
        assert!((d.ddv + 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rhs_forcing_vanishes_at_u_zero() {
        let q = params(3, 2.0);
        let s = RadialState::new(2.0, 0.0, -0.1, 0.5, -0.2).unwrap();
        let d = rhs(&q, &s).unwrap();
        assert_eq!(d.ddu, -2.0 * (-0.1) / 2.0);
        assert_eq!(d.ddv, -2.0 * (-0.2) / 2.0);
    }

    #[test]
    fn rhs_rejects_origin_and_negative_u() {
        let q = params(3, 2.0);
        let s = RadialState::new(0.0, 1.0, 0.0, 1.0, 0.0).unwrap();
        assert!(rhs(&q, &s).is_err());
        let s = RadialState::new(1.0, -0.1, 0.0, 1.0, 0.0).unwrap();
        assert!(rhs(&q, &s).is_err());
    }

    #[test]
    fn state_rejects_non_finite() {
        assert!(RadialState::new(1.0, f64::NAN, 0.0, 1.0, 0.0).is_err());
        assert!(RadialState::new(1.0, f64::INFINITY, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn series_start_values() {
        // (n=3,p=5,a=1,r0=1e-4): U ~ 1 - sqrt(5) 1e-8/6
        let q = params(3, 5.0);
        let s = series_start(&q, 1.0, 1e-4).unwrap();
        let lead = 1.0 - 5.0f64.sqrt() * 1e-8 / 6.0;
        assert!((s.u - lead).abs() < 1e-18);
        assert_eq!(s.u, s.v);
        assert_eq!(s.du, s.dv);
    }

    #[test]
    fn series_start_bitwise_symmetric_at_a_one() {
        for &(n, p) in &[(3u32, 2.0), (3, 5.0), (4, 4.0), (5, 3.0), (6, 2.5), (7, 11.0 / 3.0)] {
            let q = params(n, p);
            let s = series_start(&q, 1.0, 1e-4).unwrap();
            assert_eq!(s.u.to_bits(), s.v.to_bits(), "(n={n},p={p})");
            assert_eq!(s.du.to_bits(), s.dv.to_bits(), "(n={n},p={p})");
        }
    }

    #[test]
    fn series_start_rejects_bad_params() {
        let q = params(3, 5.0);
        assert!(series_start(&q, 0.0, 1e-4).is_err());
        assert!(series_start(&q, -1.0, 1e-4).is_err());
        assert!(series_start(&q, 1.0, 0.0).is_err());
    }

    /// Picard-map oracle: two passes of the double-integral fixed point,
    /// evaluated by Simpson quadrature on the inner and outer integrals.
    fn picard_oracle(n: u32, p: f64, a: f64, r0: f64) -> (f64, f64) {
        let sp = p.sqrt();
        let nn = n as f64;
        // first iterate: u0 = 1, v0 = a, closed inner integrals
        let u1 = |r: f64| 1.0 - sp * a * r * r / (2.0 * nn);
        let v1 = |r: f64| a - sp * r * r / (2.0 * nn);
        // second iterate via nested Simpson
        let m = 400;
        let simpson = |f: &dyn Fn(f64) -> f64, lo: f64, hi: f64| {
            let h = (hi - lo) / m as f64;
            let mut s = f(lo) + f(hi);
            for k in 1..m {
                let w = if k % 2 == 1 { 4.0 } else { 2.0 };
                s += w * f(lo + k as f64 * h);
            }
            s * h / 3.0
        };
        let inner_u = |tau: f64| {
            simpson(
                &|s: f64| s.powf(nn - 1.0) * u1(s).powf(p - 1.0) * v1(s),
                0.0,
                tau,
            )
        };
        let inner_v = |tau: f64| simpson(&|s: f64| s.powf(nn - 1.0) * u1(s).powf(p), 0.0, tau);
        let u2 = 1.0 - sp * simpson(&|t: f64| t.powf(1.0 - nn) * inner_u(t), 1e-12, r0);
        let v2 = a - sp * simpson(&|t: f64| t.powf(1.0 - nn) * inner_v(t), 1e-12, r0);
        (u2, v2)
    }

    #[test]
    fn series_start_matches_picard_oracle() {
        for &(n, p, a) in &[(3u32, 5.0, 1.0), (4, 4.0, 0.5), (5, 3.0, 2.0)] {
            let q = params(n, p);
            let r0 = 1e-3; // larger r0 so the oracle quadrature resolves it
            let s = series_start(&q, a, r0).unwrap();
            let (u2, v2) = picard_oracle(n, p, a, r0);
            assert!((s.u - u2).abs() < 1e-14, "(n={n},p={p},a={a}): {}", (s.u - u2).abs());
            assert!((s.v - v2).abs() < 1e-14, "(n={n},p={p},a={a}): {}", (s.v - v2).abs());
        }
    }

    #[test]
    fn series_self_consistency_across_r0() {
        // start at r0/10, integrate up to r0, compare against the direct series
        let q = params(3, 5.0);
        let r0 = 1e-4;
        let direct = series_start(&q, 1.0, r0).unwrap();
        let opts = IntegrateOptions {
            r0: r0 / 10.0,
            tol: 1e-13,
            r_max: r0,
            ..Default::default()
        };
        let prof = integrate_with(&q, 1.0, &opts).unwrap();
        let end = prof.last();
        assert!((end.r - r0).abs() < 1e-18);
        assert!((end.u - direct.u).abs() < 1e-12);
        assert!((end.v - direct.v).abs() < 1e-12);
        assert!((end.du - direct.du).abs() < 1e-12);
    }

    #[test]
    fn subcritical_lane_emden_vanishes_together() {
        let q = params(3, 2.0);
        let prof = integrate(&q, 1.0, 50.0, 1e-10).unwrap();
        match prof.outcome {
            TrajectoryOutcome::BothVanished(r) => {
                // prototype cross-check value; the RK4 oracle lives in the
                // integration test suite
                assert!((r - 3.6603166).abs() < 1e-5, "R = {r}");
            }
            ref o => panic!("expected BothVanished, got {o:?}"),
        }
        assert_eq!(prof.sync_deviation(), 0.0);
    }

    #[test]
    fn supercritical_at_one_stays_positive() {
        let q = params(4, 4.0);
        let prof = integrate(&q, 1.0, 1e3, 1e-10).unwrap();
        assert!(prof.outcome.is_entire());
        assert_eq!(prof.sync_deviation(), 0.0);
        // decreasing components while positive
        for s in &prof.samples[1..] {
            assert!(s.du <= 0.0 && s.dv <= 0.0, "monotone decrease at r={}", s.r);
        }
        // prototype cross-check of the far value
        let end = prof.last();
        assert!((end.u - 7.473159455910132e-3).abs() < 1e-8, "U(1e3) = {}", end.u);
    }

    #[test]
    fn small_a_loses_v_inside_unit_ball() {
        // a below eps0 = 1/(n 2^{1+p} sqrt(p))
        let q = params(3, 5.0);
        let prof = integrate(&q, 0.002, 10.0, 1e-10).unwrap();
        match prof.outcome {
            TrajectoryOutcome::VVanished(r) => assert!(r <= 1.0, "R = {r}"),
            ref o => panic!("expected VVanished, got {o:?}"),
        }
    }

    #[test]
    fn ordering_preserved_either_side_of_one() {
        let q = params(4, 4.0);
        let above = integrate(&q, 1.5, 1e3, 1e-10).unwrap();
        assert!(above.samples.iter().all(|s| s.v > s.u));
        let below = integrate(&q, 0.5, 1e3, 1e-10).unwrap();
        let last = below.samples.len() - 1; // event sample may sit at V = 0
        assert!(below.samples[..last].iter().all(|s| s.u > s.v));
    }

    #[test]
    fn event_radius_stable_under_r0_halving() {
        let q = params(3, 2.0);
        let base = IntegrateOptions {
            tol: 1e-12,
            r_max: 50.0,
            ..Default::default()
        };
        let r1 = integrate_with(&q, 1.0, &base).unwrap().outcome.radius();
        let halved = IntegrateOptions {
            r0: base.r0 / 2.0,
            ..base
        };
        let r2 = integrate_with(&q, 1.0, &halved).unwrap().outcome.radius();
        assert!((r1 - r2).abs() < 1e-8 * (1.0 + r1), "{r1} vs {r2}");
    }

    #[test]
    fn rejects_p_below_two_and_bad_args() {
        let q = params(3, 1.5);
        assert!(matches!(
            integrate(&q, 1.0, 10.0, 1e-10),
            Err(IntegrateError::Param(_))
        ));
        let q = params(3, 5.0);
        assert!(integrate(&q, 1.0, 10.0, 0.0).is_err());
        assert!(integrate(&q, 1.0, 1e-6, 1e-10).is_err());
        assert!(integrate(&q, -2.0, 10.0, 1e-10).is_err());
    }

    #[test]
    fn samples_strictly_increasing_and_start_at_r0() {
        let q = params(4, 4.0);
        let prof = integrate(&q, 0.7, 100.0, 1e-10).unwrap();
        assert_eq!(prof.first().r, 1e-4);
        for w in prof.samples.windows(2) {
            assert!(w[1].r > w[0].r);
        }
    }
}

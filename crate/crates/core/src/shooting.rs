//! Trajectory classification over the shooting parameter, bisection for the
//! entire-solution threshold, and asymptotic decay-rate estimation.
//!
//! The threshold is the supremum of shooting values whose trajectories lose
//! `V` first. A trajectory at distance `eps` below the threshold only reveals
//! its `V`-zero at a radius growing like `eps^{-1/(tau+gamma)}` (`tau` the
//! slow rate, `gamma` the growth exponent of the symmetric-profile
//! linearization), so the bisection classifies at a detection horizon far
//! beyond the horizon of the profile it finally returns. With the detection
//! horizon tied to the profile horizon the bracket stalls at
//! `1 - O(r_max^{-(tau+gamma)})`, orders of magnitude short of the threshold.

use crate::integrator::{
    integrate, IntegrateError, RadialProfile, RadialState, TrajectoryOutcome,
};
use crate::model::{ClosedForm, FormField, RadialFn, SystemParams};
use crate::scalar::{lit, Real};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShootError {
    #[error("bracket error: {0}")]
    Bracket(String),
    #[error("threshold profile is not entirely positive: {0}")]
    ThresholdUnresolved(String),
    #[error("decay window error: {0}")]
    Window(String),
    #[error("positivity error: {0}")]
    Positivity(String),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
}

/// Default bracket for the threshold search: the lower end sits inside the
/// small-`a` regime where `V` provably vanishes inside the unit ball, the
/// upper end in the `a > 1` ordering regime.
pub const DEFAULT_BRACKET: (f64, f64) = (1e-3, 2.0);

/// Default detection horizon for the bisection predicate.
pub const DETECT_HORIZON_DEFAULT: f64 = 1e10;

/// The `a`-threshold `eps0 = 1/(n 2^{1+p} sqrt(p))` below which `V` vanishes
/// inside the unit ball.
pub fn eps0<R: Real>(params: &SystemParams<R>) -> R {
    R::one()
        / (params.n_real() * lit::<R>(2.0).powf(R::one() + params.p()) * params.sqrt_p())
}

/// Classifies the trajectory at shooting parameter `a`: integrates to
/// `r_max` and returns which component vanished first, if any.
pub fn classify<R: Real>(
    params: &SystemParams<R>,
    a: R,
    r_max: R,
    tol: R,
) -> Result<TrajectoryOutcome<R>, ShootError> {
    Ok(integrate(params, a, r_max, tol)?.outcome)
}

/// Search settings for [`find_threshold_with`].
#[derive(Debug, Clone, Copy)]
pub struct ThresholdSearch<R> {
    pub a_lo: R,
    pub a_hi: R,
    pub bisect_tol: R,
    /// Horizon of the returned profile.
    pub r_max: R,
    /// Horizon used by the bisection predicate; raised to at least
    /// [`DETECT_HORIZON_DEFAULT`] and `r_max`.
    pub detect_horizon: R,
    pub tol: R,
}

impl<R: Real> Default for ThresholdSearch<R> {
    fn default() -> Self {
        Self {
            a_lo: lit(DEFAULT_BRACKET.0),
            a_hi: lit(DEFAULT_BRACKET.1),
            bisect_tol: lit(1e-8),
            r_max: lit(1e3),
            detect_horizon: lit(DETECT_HORIZON_DEFAULT),
            tol: lit(1e-10),
        }
    }
}

/// Certified bracket around the threshold shooting value.
#[derive(Debug, Clone)]
pub struct ThresholdResult<R> {
    pub a_star: R,
    pub bracket: (R, R),
    pub lo_outcome: TrajectoryOutcome<R>,
    pub hi_outcome: TrajectoryOutcome<R>,
    pub iterations: usize,
    /// Horizon at which the bracket outcomes are certified.
    pub detect_horizon: R,
    pub profile_at_star: RadialProfile<R>,
}

/// Bisection on the predicate `outcome == VVanished` over `[a_lo, a_hi]`.
pub fn find_threshold<R: Real>(
    params: &SystemParams<R>,
    a_lo: R,
    a_hi: R,
    bisect_tol: R,
    r_max: R,
) -> Result<ThresholdResult<R>, ShootError> {
    find_threshold_with(
        params,
        &ThresholdSearch {
            a_lo,
            a_hi,
            bisect_tol,
            r_max,
            ..Default::default()
        },
    )
}

pub fn find_threshold_with<R: Real>(
    params: &SystemParams<R>,
    search: &ThresholdSearch<R>,
) -> Result<ThresholdResult<R>, ShootError> {
    let (mut a_lo, mut a_hi) = (search.a_lo, search.a_hi);
    if !(a_lo < a_hi) {
        return Err(ShootError::Bracket(format!(
            "empty bracket [{a_lo}, {a_hi}]"
        )));
    }
    if !(search.bisect_tol > R::zero()) {
        return Err(ShootError::Param("bisect_tol must be > 0".into()));
    }
    let horizon = search.detect_horizon.max(search.r_max).max(lit(DETECT_HORIZON_DEFAULT));

    let is_v = |o: &TrajectoryOutcome<R>| matches!(o, TrajectoryOutcome::VVanished(_));
    let lo_outcome = classify(params, a_lo, horizon, search.tol)?;
    if !is_v(&lo_outcome) {
        return Err(ShootError::Bracket(format!(
            "classify(a_lo = {a_lo}) = {} instead of v_vanished",
            lo_outcome.tag()
        )));
    }
    let hi_outcome = classify(params, a_hi, horizon, search.tol)?;
    if is_v(&hi_outcome) {
        return Err(ShootError::Bracket(format!(
            "classify(a_hi = {a_hi}) is still v_vanished"
        )));
    }

    let mut iterations = 0usize;
    while a_hi - a_lo > search.bisect_tol {
        let mid = (a_lo + a_hi) * lit(0.5);
        if mid <= a_lo || mid >= a_hi {
            break; // bracket exhausted at working precision
        }
        iterations += 1;
        if is_v(&classify(params, mid, horizon, search.tol)?) {
            a_lo = mid;
        } else {
            a_hi = mid;
        }
    }

    let a_star = (a_lo + a_hi) * lit(0.5);
    let profile_at_star = integrate(params, a_star, search.r_max, search.tol)?;
    Ok(ThresholdResult {
        a_star,
        bracket: (a_lo, a_hi),
        lo_outcome,
        hi_outcome,
        iterations,
        detect_horizon: horizon,
        profile_at_star,
    })
}

/// Integrates the threshold trajectory, certifying positivity up to `r_max`.
///
/// The internal bisection runs at a fixed tight tolerance: the threshold
/// profile is the product here, and the sync deviation it carries scales
/// with the bracket width.
pub fn entire_profile<R: Real>(
    params: &SystemParams<R>,
    r_max: R,
) -> Result<RadialProfile<R>, ShootError> {
    entire_profile_with(params, r_max, lit(1e-10))
}

pub fn entire_profile_with<R: Real>(
    params: &SystemParams<R>,
    r_max: R,
    tol: R,
) -> Result<RadialProfile<R>, ShootError> {
    let search = ThresholdSearch {
        r_max,
        bisect_tol: lit(1e-11),
        tol,
        ..Default::default()
    };
    let found = find_threshold_with(params, &search)?;
    let profile = found.profile_at_star;
    match profile.outcome {
        TrajectoryOutcome::EntirePositive(_) => Ok(profile),
        ref o => Err(ShootError::ThresholdUnresolved(format!(
            "profile at a* = {} ends as {} at r = {}",
            found.a_star,
            o.tag(),
            o.radius()
        ))),
    }
}

/// Least-squares power-law fit of the far field of a profile.
#[derive(Debug, Clone, Copy)]
pub struct DecayFit<R> {
    /// Fitted exponent `t` in `U ~ c r^{-t}`.
    pub rate: R,
    /// Extremes of `U r^{rate}` over the window.
    pub amplitude_band: (R, R),
    /// Radii actually fitted.
    pub window: (R, R),
    /// RMS residual of the fit in log-log space.
    pub regression_residual: R,
    pub samples_used: usize,
}

pub const DECAY_WINDOW_DEFAULT: (f64, f64) = (0.5, 0.9);

/// Fits `log U` against `log r` over `[f_lo, f_hi] * r_end`.
pub fn decay_fit<R: Real>(
    profile: &RadialProfile<R>,
    window_fraction: (R, R),
) -> Result<DecayFit<R>, ShootError> {
    let (f_lo, f_hi) = window_fraction;
    if !(R::zero() < f_lo && f_lo < f_hi && f_hi <= R::one()) {
        return Err(ShootError::Param(format!(
            "window fractions must satisfy 0 < lo < hi <= 1, got ({f_lo}, {f_hi})"
        )));
    }
    let r_end = profile.outcome.radius();
    let (w_lo, w_hi) = (f_lo * r_end, f_hi * r_end);
    let picked: Vec<&RadialState<R>> = profile
        .samples
        .iter()
        .filter(|s| s.r >= w_lo && s.r <= w_hi)
        .collect();
    if picked.len() < 20 {
        return Err(ShootError::Window(format!(
            "window [{w_lo}, {w_hi}] holds {} samples, need at least 20",
            picked.len()
        )));
    }
    if let Some(bad) = picked.iter().find(|s| s.u <= R::zero()) {
        return Err(ShootError::Positivity(format!(
            "U({}) = {} is not positive",
            bad.r, bad.u
        )));
    }

    let m = R::from_usize(picked.len()).unwrap();
    let (mut sx, mut sy, mut sxx, mut sxy) = (R::zero(), R::zero(), R::zero(), R::zero());
    for s in &picked {
        let x = s.r.ln();
        let y = s.u.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let denom = m * sxx - sx * sx;
    let slope = (m * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / m;

    let mut ss = R::zero();
    let mut band = (R::infinity(), R::neg_infinity());
    for s in &picked {
        let resid = s.u.ln() - (slope * s.r.ln() + intercept);
        ss += resid * resid;
        let amp = s.u * s.r.powf(-slope);
        band.0 = band.0.min(amp);
        band.1 = band.1.max(amp);
    }
    Ok(DecayFit {
        rate: -slope,
        amplitude_band: band,
        window: (w_lo, w_hi),
        regression_residual: (ss / m).sqrt(),
        samples_used: picked.len(),
    })
}

/// Samples a radial closed form into a profile shape (outcome
/// `EntirePositive` at the upper radius), for feeding the decay and identity
/// machinery with analytic inputs.
pub fn sample_closed_form<R: Real>(
    form: &ClosedForm<R>,
    r_lo: R,
    r_hi: R,
    count: usize,
) -> Result<RadialProfile<R>, ShootError> {
    let grid = crate::grid::log_grid(r_lo, r_hi, count)
        .map_err(|e| ShootError::Param(e.to_string()))?;
    let field = FormField(form);
    let samples: Vec<RadialState<R>> = grid
        .into_iter()
        .map(|r| {
            let u = field.value(r);
            let (du, _) = form.radial_derivatives(r);
            RadialState::new(r, u, du, u, du)
        })
        .collect::<Result<_, _>>()?;
    Ok(RadialProfile {
        params: form.params,
        a: samples[0].v / samples[0].u,
        samples,
        outcome: TrajectoryOutcome::EntirePositive(r_hi),
    })
}

//! Numerical laboratory for the coupled radial system
//!
//! ```text
//!   -Δu = sqrt(p) u^{p-1} v,   -Δv = sqrt(p) u^p     in R^n
//! ```
//!
//! with `n >= 3`, `p > 1`: exponent-regime classification, closed-form
//! solution families with residual checks, adaptive shooting from the origin
//! with event detection, threshold search for the entire positive solution,
//! asymptotic decay-rate fits, Newton-potential verification of the
//! equivalent integral system, and quadrature checks of the energy and
//! Pohozaev identities.
//!
//! All numerics are generic over the scalar type through [`scalar::Real`];
//! the `*64` aliases below fix `f64`, which every shipped tolerance assumes.

// `!(x > 0)` style guards are deliberate: unlike `x <= 0` they also reject
// NaN, which is exactly what the constructors are screening for.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod grid;
pub mod identities;
pub mod integrator;
pub mod model;
pub mod potentials;
pub mod scalar;
pub mod shooting;

pub use model::{
    bubble_amplitude, bubble_form, cylinder_lift, eval_closed_form, regime, residual_system,
    singular_form, ClosedForm, ExponentRegime, FormField, FormKind, ModelError, RadialFn,
    RegimeTag, SystemParams,
};

pub use integrator::{
    integrate, integrate_with, rhs, series_start, IntegrateError, IntegrateOptions,
    RadialProfile, RadialState, TrajectoryOutcome,
};

pub use shooting::{
    classify, decay_fit, entire_profile, entire_profile_with, eps0, find_threshold,
    find_threshold_with, sample_closed_form, DecayFit, ShootError, ThresholdResult,
    ThresholdSearch,
};

pub use potentials::{
    ie_constants, radial_newton, surface_area, verify_ie, IeReport, PotentialError, RadialField,
    SampledSolution,
};

pub use identities::{
    bootstrap, energy_identity, pohozaev_ball, pohozaev_entire, pohozaev_q, radial_integral,
    BootstrapTrace, IdentityError, IdentityReport, PohozaevBall, PohozaevEntire, Quadrature,
    Subject,
};

/// Concrete double-precision aliases.
pub type SystemParams64 = SystemParams<f64>;
pub type ClosedForm64 = ClosedForm<f64>;
pub type RadialState64 = RadialState<f64>;
pub type RadialProfile64 = RadialProfile<f64>;
pub type TrajectoryOutcome64 = TrajectoryOutcome<f64>;
pub type ThresholdResult64 = ThresholdResult<f64>;
pub type DecayFit64 = DecayFit<f64>;
pub type RadialField64 = RadialField<f64>;
pub type IdentityReport64 = IdentityReport<f64>;
pub type BootstrapTrace64 = BootstrapTrace<f64>;

//! Monotone travelling-wave solutions of constrained control field equations,
//! with three independent verification routes.
//!
//! The crate is organised around a second-order transformation of a
//! stochastic control problem: the log-derivative field of the value
//! function's slope satisfies a conservation-form evolution equation, and
//! policy-relevant long-run behaviour appears as monotone travelling waves of
//! that field.
//!
//! * [`model`] — model variants, the two-branch constitutive closures
//!   `A`, `B`, the pointwise optimal exposure, and the phase-line functions.
//! * [`wave`] — wave chords, connection validation, root scans of the chord
//!   residual, and adaptive integration of the wave profile.
//! * [`pde`] — an independent finite-difference evolution of the field
//!   equation, used to confirm speed, shape and the discrete max principle.
//! * [`value`] — reconstruction of the value function from a field, the
//!   inverse transformation, and synthesis of tabulated terminal payouts.
//! * [`mc`] — Monte Carlo simulation of the controlled state under constant
//!   and wave-induced policies, with deterministic parallel reductions.
//!
//! Errors from every module share the [`Error`] enum; fallible operations
//! return the crate-wide [`Result`].

pub mod error;
pub mod mc;
pub mod model;
pub mod ode;
pub mod pde;
pub mod value;
pub mod wave;

mod num;

pub use error::{Error, Result};
pub use mc::{
    drift_vol, policy_from_wave, simulate, simulate_terminal, PolicyField, SdeConfig, SimResult,
    Utility, WavePolicy,
};
pub use model::{ClosureBranch, ModelParams, PhaseLine, Variant};
pub use ode::StepControl;
pub use pde::{
    check_bounds, estimate_speed, evolve, residual_constant, BoundsReport, EvolveOptions,
    FieldEvolution, FluxScheme, SpatialGrid, SpeedEstimate,
};
pub use value::{
    check_value_assumptions, marginal_from_phi, reconstruct_phi, synth_terminal_utility,
    UtilitySpec, ValueCurve, ValueReport,
};
pub use wave::{
    analytic_z_roots_simple, build_wave_spec, compute_wave_spec, connection_report, find_phi_roots,
    integrate_profile, integrate_profile_from, secant_threshold, validate_connection,
    ConnectionReport, Direction, PhiRoot, ProfileOptions, Stability, WaveProfile, WaveSpec,
    ZRootsSimple,
};

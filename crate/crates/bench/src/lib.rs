//! Shared fixtures for the benchmark suite: the two reference waves used
//! throughout the verification tests, pre-built so individual benchmarks
//! measure one stage of the pipeline at a time.

use hjbwave_core::{compute_wave_spec, integrate_profile, ModelParams, WaveProfile, WaveSpec};

/// Decreasing wave of the simple variant (`omega = 1`) between 2 and 1/2.
pub fn simple_wave() -> (WaveSpec, WaveProfile) {
    let params = ModelParams::simple(1.0).unwrap();
    let spec = compute_wave_spec(&params, 2.0, 0.5).unwrap();
    let profile = integrate_profile(&spec, None).unwrap();
    (spec, profile)
}

/// Increasing wave of the general variant (`m = 3/2`) between 1 and 10/3.
pub fn general_wave() -> (WaveSpec, WaveProfile) {
    let params = ModelParams::general(1.0, 0.0, 0.0, 1.5).unwrap();
    let spec = compute_wave_spec(&params, 1.0, 10.0 / 3.0).unwrap();
    let profile = integrate_profile(&spec, None).unwrap();
    (spec, profile)
}

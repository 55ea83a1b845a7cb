//! Monte Carlo verification of candidate policies.
//!
//! Simulates the controlled state under a feedback policy with the
//! Euler--Maruyama scheme and scores the terminal position with a payout
//! function.  Runs are bit-reproducible for a fixed seed regardless of the
//! number of worker threads: every path draws from its own counter-based RNG
//! stream, paths are collected in index order, and the reduction to mean and
//! standard error is sequential compensated summation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ModelParams, Variant};
use crate::num::{interp_clamped, KahanSum};
use crate::value::UtilitySpec;
use crate::wave::{WaveProfile, WaveSpec};

/// Smallest exposure the wave policy will request; keeps the controlled
/// diffusion nondegenerate when the field is very large.
const THETA_FLOOR: f64 = 1e-6;

/// Simulation layout: time window, resolution, ensemble size and seed.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SdeConfig {
    /// Initial state.
    pub x0: f64,
    /// Start time.
    pub t0: f64,
    /// Terminal time.
    pub t_end: f64,
    /// Number of Euler--Maruyama steps per path (at least 100).
    pub n_steps: usize,
    /// Number of independent paths (at least 1000).
    pub n_paths: usize,
    /// Base seed; path `p` uses RNG stream `p` of this seed.
    pub seed: u64,
}

impl SdeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.x0.is_finite() && self.t0.is_finite() && self.t_end.is_finite()) {
            return Err(Error::precondition("x0, t0, t_end must be finite"));
        }
        if !(self.t_end > self.t0) {
            return Err(Error::precondition(format!(
                "need t_end > t0, got t0 = {}, t_end = {}",
                self.t0, self.t_end
            )));
        }
        if self.n_steps < 100 {
            return Err(Error::precondition(format!(
                "need at least 100 time steps for a usable discretisation, got {}",
                self.n_steps
            )));
        }
        if self.n_paths < 1000 {
            return Err(Error::precondition(format!(
                "need at least 1000 paths for a usable estimate, got {}",
                self.n_paths
            )));
        }
        Ok(())
    }
}

/// Feedback policy evaluated from a frozen wave profile: the exposure is the
/// pointwise optimiser of the Hamiltonian at the field value
/// `v(x + c (T - t))`.
#[derive(Debug, Clone, Serialize)]
pub struct WavePolicy {
    pub params: ModelParams,
    /// Profile coordinate samples.
    pub xi: Vec<f64>,
    /// Field samples along the profile.
    pub v: Vec<f64>,
    /// Wave speed.
    pub c: f64,
    /// Terminal time the profile is pinned to.
    pub t_terminal: f64,
    /// Lower clamp on the exposure.
    pub theta_floor: f64,
}

/// A feedback exposure rule `theta(x, t)`.
#[derive(Debug, Clone, Serialize)]
pub enum PolicyField {
    /// Constant exposure, used as a benchmark.
    Constant { theta: f64 },
    /// Exposure induced by a travelling-wave field.
    WaveOptimal(WavePolicy),
}

impl PolicyField {
    /// Evaluate the exposure at state `x` and time `t`.
    pub fn theta(&self, x: f64, t: f64) -> f64 {
        match self {
            PolicyField::Constant { theta } => *theta,
            PolicyField::WaveOptimal(w) => {
                let xi = x + w.c * (w.t_terminal - t);
                let field = interp_clamped(&w.xi, &w.v, xi);
                w.params.theta_star_raw(field).max(w.theta_floor)
            }
        }
    }

    /// Human-readable label recorded in results.
    pub fn describe(&self) -> String {
        match self {
            PolicyField::Constant { theta } => format!("constant theta = {theta}"),
            PolicyField::WaveOptimal(w) => {
                format!("wave-optimal (c = {:.6}, T = {})", w.c, w.t_terminal)
            }
        }
    }
}

/// Build the wave-induced feedback policy from a computed profile.
pub fn policy_from_wave(spec: &WaveSpec, profile: &WaveProfile, t_terminal: f64) -> PolicyField {
    PolicyField::WaveOptimal(WavePolicy {
        params: spec.params,
        xi: profile.xi.clone(),
        v: profile.v.clone(),
        c: spec.c,
        t_terminal,
        theta_floor: THETA_FLOOR,
    })
}

/// State-equation coefficients for a given exposure.
pub fn drift_vol(params: &ModelParams, theta: f64) -> (f64, f64) {
    match params.variant {
        Variant::Simple => (params.omega * theta, theta),
        Variant::QuadraticDrift => (params.omega * theta - 0.5 * theta * theta, theta),
        Variant::General => {
            let var = 2.0 * (params.alpha * params.alpha + theta.powf(params.m) / params.m);
            (params.beta + params.omega * theta, var.sqrt())
        }
    }
}

/// Terminal payout used to score simulated paths.
#[derive(Debug, Clone, Serialize)]
pub enum Utility {
    /// Exponential payout `-(exp(-lambda x))` with `lambda > 0`.
    Cara { lambda: f64 },
    /// Tabulated payout with exponential tails.
    Tabulated(UtilitySpec),
}

impl Utility {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            Utility::Cara { lambda } => -(-lambda * x).exp(),
            Utility::Tabulated(spec) => spec.eval(x),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Utility::Cara { lambda } if !(lambda.is_finite() && *lambda > 0.0) => Err(
                Error::precondition(format!("CARA coefficient must be positive, got {lambda}")),
            ),
            _ => Ok(()),
        }
    }
}

/// Ensemble summary of a policy simulation.
#[derive(Debug, Clone, Serialize)]
pub struct SimResult {
    /// Sample mean of the terminal payout.
    pub mean_utility: f64,
    /// Standard error of the mean.
    pub std_error: f64,
    pub n_paths: usize,
    /// Label of the simulated policy.
    pub policy: String,
    /// Paths whose terminal state fell outside a tabulated payout's grid
    /// (scored by the tail extension).
    pub flagged_paths: usize,
}

fn simulate_one(
    params: &ModelParams,
    config: &SdeConfig,
    policy: &PolicyField,
    path_index: u64,
) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(path_index);
    let dt = (config.t_end - config.t0) / config.n_steps as f64;
    let sqrt_dt = dt.sqrt();
    let mut x = config.x0;
    for k in 0..config.n_steps {
        let t = config.t0 + k as f64 * dt;
        let theta = policy.theta(x, t);
        let (mu, sigma) = drift_vol(params, theta);
        let z: f64 = rng.sample(StandardNormal);
        x += mu * dt + sigma * sqrt_dt * z;
    }
    x
}

/// Simulate all paths and return the terminal states in path order.
///
/// Exposed separately so the state equation itself can be tested against
/// moment oracles independent of any payout.
pub fn simulate_terminal(
    params: &ModelParams,
    config: &SdeConfig,
    policy: &PolicyField,
) -> Result<Vec<f64>> {
    config.validate()?;
    if let PolicyField::Constant { theta } = policy {
        if !(theta.is_finite() && *theta > 0.0 && *theta <= 1.0) {
            return Err(Error::precondition(format!(
                "constant exposure must lie in (0, 1], got {theta}"
            )));
        }
    }
    let terminals: Vec<f64> = (0..config.n_paths as u64)
        .into_par_iter()
        .map(|p| simulate_one(params, config, policy, p))
        .collect();
    if let Some(&bad) = terminals.iter().find(|v| !v.is_finite()) {
        return Err(Error::numeric(format!(
            "a path diverged to a non-finite terminal state ({bad})"
        )));
    }
    Ok(terminals)
}

/// Simulate a policy and score it with a payout.
pub fn simulate(
    params: &ModelParams,
    config: &SdeConfig,
    policy: &PolicyField,
    utility: &Utility,
) -> Result<SimResult> {
    utility.validate()?;
    let terminals = simulate_terminal(params, config, policy)?;

    let mut flagged = 0usize;
    if let Utility::Tabulated(spec) = utility {
        let (lo, hi) = (spec.x[0], *spec.x.last().unwrap());
        flagged = terminals.iter().filter(|&&x| x < lo || x > hi).count();
    }

    // sequential compensated reduction keeps the result independent of the
    // parallel schedule
    let payouts: Vec<f64> = terminals.iter().map(|&x| utility.eval(x)).collect();
    if let Some(&bad) = payouts.iter().find(|v| !v.is_finite()) {
        return Err(Error::numeric(format!(
            "payout evaluated to a non-finite value ({bad})"
        )));
    }
    let n = payouts.len() as f64;
    let mut sum = KahanSum::default();
    for &u in &payouts {
        sum.add(u);
    }
    let mean = sum.value() / n;
    let mut ss = KahanSum::default();
    for &u in &payouts {
        ss.add((u - mean) * (u - mean));
    }
    let var = ss.value() / (n - 1.0);
    Ok(SimResult {
        mean_utility: mean,
        std_error: (var / n).sqrt(),
        n_paths: payouts.len(),
        policy: policy.describe(),
        flagged_paths: flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use crate::value::synth_terminal_utility;
    use crate::wave::{compute_wave_spec, integrate_profile};

    fn base_config() -> SdeConfig {
        SdeConfig {
            x0: 0.0,
            t0: 0.0,
            t_end: 2.0,
            n_steps: 200,
            n_paths: 4000,
            seed: 42,
        }
    }

    #[test]
    fn config_validation_rejects_degenerate_layouts() {
        let mut c = base_config();
        c.t_end = 0.0;
        assert!(c.validate().is_err());
        let mut c = base_config();
        c.n_steps = 10;
        assert!(c.validate().is_err());
        let mut c = base_config();
        c.n_paths = 10;
        assert!(c.validate().is_err());
        assert!(base_config().validate().is_ok());
    }

    #[test]
    fn cara_mean_matches_closed_form_for_constant_policy() {
        // for constant coefficients Euler--Maruyama sums exact normal
        // increments, so E[-exp(-lambda X_T)] has a closed form
        let params = ModelParams::simple(1.0).unwrap();
        let config = base_config();
        let lambda = 0.5f64;
        for theta in [0.25, 0.5, 1.0] {
            let policy = PolicyField::Constant { theta };
            let res = simulate(&params, &config, &policy, &Utility::Cara { lambda }).unwrap();
            let tau = config.t_end - config.t0;
            let exact = -(-lambda * (config.x0 + params.omega * theta * tau)
                + 0.5 * lambda * lambda * theta * theta * tau)
                .exp();
            let z = (res.mean_utility - exact).abs() / res.std_error;
            assert!(
                z < 3.5,
                "theta = {theta}: mean {} vs exact {exact}, z = {z:.2}",
                res.mean_utility
            );
        }
    }

    #[test]
    fn general_variant_moments_match_the_state_equation() {
        let params = ModelParams::general(0.8, 0.5, -0.2, 1.5).unwrap();
        let mut config = base_config();
        config.n_paths = 8000;
        let theta = 0.6;
        let policy = PolicyField::Constant { theta };
        let xs = simulate_terminal(&params, &config, &policy).unwrap();
        let (mu, sigma) = drift_vol(&params, theta);
        let tau = config.t_end - config.t0;
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);

        let mean_exact = config.x0 + mu * tau;
        let sd_of_mean = sigma * tau.sqrt() / n.sqrt();
        assert!(
            (mean - mean_exact).abs() < 4.0 * sd_of_mean,
            "mean {mean} vs {mean_exact}"
        );
        let var_exact = sigma * sigma * tau;
        assert!(
            (var - var_exact).abs() < 0.05 * var_exact,
            "variance {var} vs {var_exact}"
        );
    }

    #[test]
    fn results_are_bitwise_identical_across_thread_counts() {
        let params = ModelParams::simple(1.0).unwrap();
        let spec = compute_wave_spec(&params, 2.0, 0.5).unwrap();
        let profile = integrate_profile(&spec, None).unwrap();
        let policy = policy_from_wave(&spec, &profile, 2.0);
        let utility = Utility::Tabulated(synth_terminal_utility(&spec, &profile).unwrap());
        let config = SdeConfig {
            n_paths: 2000,
            ..base_config()
        };

        let run = |threads: usize| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate(&params, &config, &policy, &utility).unwrap())
        };
        let r1 = run(1);
        let r4 = run(4);
        assert_eq!(r1.mean_utility.to_bits(), r4.mean_utility.to_bits());
        assert_eq!(r1.std_error.to_bits(), r4.std_error.to_bits());
        assert_eq!(r1.flagged_paths, r4.flagged_paths);
    }

    #[test]
    fn wave_policy_has_the_expected_shape() {
        let params = ModelParams::simple(1.0).unwrap();
        let spec = compute_wave_spec(&params, 2.0, 0.5).unwrap();
        let profile = integrate_profile(&spec, None).unwrap();
        let policy = policy_from_wave(&spec, &profile, 2.0);

        // field decreases from 2 to 0.5 in x, so theta = min(1, 1/v) rises
        // from 0.5 to 1
        let t = 2.0;
        let th_left = policy.theta(-30.0, t);
        let th_mid = policy.theta(0.0, t);
        let th_right = policy.theta(30.0, t);
        assert!((th_left - 0.5).abs() < 1e-6);
        assert!((th_right - 1.0).abs() < 1e-6);
        assert!(th_left <= th_mid && th_mid <= th_right);
        // at earlier times the evaluation point x + c (T - t) sits further
        // right, where the field is smaller, so the exposure is at least as
        // large as at the terminal time
        assert!(policy.theta(-5.0, 0.0) >= policy.theta(-5.0, 2.0));
        for x in [-5.0, -1.0, 0.0, 1.0, 5.0] {
            let th = policy.theta(x, 1.0);
            assert!(th > 0.0 && th <= 1.0);
        }
    }

    #[test]
    fn tabulated_payout_flags_paths_that_leave_the_table() {
        let params = ModelParams::simple(1.0).unwrap();
        let config = SdeConfig {
            n_paths: 1000,
            ..base_config()
        };
        let policy = PolicyField::Constant { theta: 1.0 };
        // narrow table around the start point: many paths must exit
        let table = UtilitySpec {
            x: vec![-0.5, 0.0, 0.5],
            u: vec![-0.5, 0.0, 0.4],
            du: vec![1.2, 1.0, 0.7],
            lambda_left: 2.0,
            lambda_right: 0.5,
        };
        let res = simulate(&params, &config, &policy, &Utility::Tabulated(table)).unwrap();
        assert!(
            res.flagged_paths > config.n_paths / 2,
            "expected most of the {} paths to leave the narrow table, flagged {}",
            config.n_paths,
            res.flagged_paths
        );
    }

    #[test]
    fn constant_policy_outside_the_admissible_band_is_rejected() {
        let params = ModelParams::simple(1.0).unwrap();
        let config = base_config();
        for theta in [0.0, -0.5, 1.5] {
            let policy = PolicyField::Constant { theta };
            assert!(simulate_terminal(&params, &config, &policy).is_err());
        }
    }
}

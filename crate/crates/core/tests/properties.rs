//! Property-based invariants over randomly drawn parameters, limits and
//! fields: closure smoothness, family reductions, inverse consistency,
//! chord-speed positivity and profile monotonicity.

use hjbwave_core::{
    compute_wave_spec, integrate_profile, integrate_profile_from, ClosureBranch, ModelParams,
};
use proptest::prelude::*;

const JUNCTION_TOL: f64 = 1e-12;

fn junction_gap(params: &ModelParams) -> f64 {
    let below = ClosureBranch::AtOrBelowOne;
    let above = ClosureBranch::AboveOne;
    [
        (params.a_on(below, 1.0), params.a_on(above, 1.0)),
        (params.b_on(below, 1.0), params.b_on(above, 1.0)),
        (params.a_prime_on(below, 1.0), params.a_prime_on(above, 1.0)),
        (params.b_prime_on(below, 1.0), params.b_prime_on(above, 1.0)),
    ]
    .iter()
    .map(|(lo, hi)| (lo - hi).abs() / (1.0 + lo.abs().max(hi.abs())))
    .fold(0.0, f64::max)
}

proptest! {
    /// The two-branch closures meet with matching value and slope at φ = 1
    /// for every parameter combination.
    #[test]
    fn closures_are_c1_at_the_junction(
        omega in 0.1f64..5.0,
        alpha in 0.0f64..2.0,
        beta in -1.0f64..1.0,
        m in 1.01f64..4.0,
    ) {
        let general = ModelParams::general(omega, alpha, beta, m).unwrap();
        prop_assert!(junction_gap(&general) <= JUNCTION_TOL);
        let simple = ModelParams::simple(omega).unwrap();
        prop_assert!(junction_gap(&simple) <= JUNCTION_TOL);
        let quad = ModelParams::quadratic_drift(omega).unwrap();
        prop_assert!(junction_gap(&quad) <= JUNCTION_TOL);
    }

    /// The general family with α = β = 0 and m = 2 degenerates to the simple
    /// model: closures, slopes and the optimal exposure all coincide.
    #[test]
    fn general_with_m_two_reduces_to_simple(
        omega in 0.1f64..5.0,
        phi in 0.05f64..5.0,
    ) {
        let general = ModelParams::general(omega, 0.0, 0.0, 2.0).unwrap();
        let simple = ModelParams::simple(omega).unwrap();
        let pairs = [
            (general.a(phi).unwrap(), simple.a(phi).unwrap()),
            (general.b(phi).unwrap(), simple.b(phi).unwrap()),
            (general.a_prime(phi).unwrap(), simple.a_prime(phi).unwrap()),
            (general.b_prime(phi).unwrap(), simple.b_prime(phi).unwrap()),
            (general.theta_star(phi).unwrap(), simple.theta_star(phi).unwrap()),
        ];
        for (g, s) in pairs {
            let scale = 1.0 + g.abs().max(s.abs());
            prop_assert!((g - s).abs() <= 1e-12 * scale, "general {g} vs simple {s}");
        }
    }

    /// `A` is strictly increasing, so inverting its value recovers the field
    /// point on either branch.
    #[test]
    fn invert_a_round_trips(
        omega in 0.1f64..5.0,
        alpha in 0.0f64..2.0,
        beta in -1.0f64..1.0,
        m in 1.05f64..4.0,
        phi in 0.02f64..8.0,
        which in 0usize..3,
    ) {
        let params = match which {
            0 => ModelParams::simple(omega).unwrap(),
            1 => ModelParams::quadratic_drift(omega).unwrap(),
            _ => ModelParams::general(omega, alpha, beta, m).unwrap(),
        };
        let z = params.a(phi).unwrap();
        let back = params.invert_a(z).unwrap();
        prop_assert!(
            (back - phi).abs() <= 1e-9 * (1.0 + phi),
            "invert_a(a({phi})) = {back}"
        );
    }

    /// The pointwise optimal exposure always lies in (0, 1], saturating the
    /// constraint exactly on the constrained branch.
    #[test]
    fn optimal_exposure_lies_in_unit_interval(
        omega in 0.1f64..5.0,
        alpha in 0.0f64..2.0,
        beta in -1.0f64..1.0,
        m in 1.05f64..4.0,
        phi in 0.02f64..8.0,
        which in 0usize..3,
    ) {
        let params = match which {
            0 => ModelParams::simple(omega).unwrap(),
            1 => ModelParams::quadratic_drift(omega).unwrap(),
            _ => ModelParams::general(omega, alpha, beta, m).unwrap(),
        };
        let theta = params.theta_star(phi).unwrap();
        prop_assert!(theta > 0.0 && theta <= 1.0, "theta = {theta}");
        if phi <= 1.0 {
            prop_assert!(theta == 1.0, "constrained branch must saturate, got {theta}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Every admissible decreasing limit pair yields a validated connection
    /// with strictly positive speed, in both the simple and quadratic-drift
    /// families.
    #[test]
    fn admissible_chords_move_with_positive_speed(
        omega in 0.3f64..3.0,
        v_left in 1.05f64..6.0,
        v_right in 0.05f64..0.95,
        quadratic in any::<bool>(),
    ) {
        let params = if quadratic {
            ModelParams::quadratic_drift(omega).unwrap()
        } else {
            ModelParams::simple(omega).unwrap()
        };
        let spec = compute_wave_spec(&params, v_left, v_right).unwrap();
        prop_assert!(spec.c > 0.0, "speed {}", spec.c);
        prop_assert!(spec.f_prime_left > 0.0 && spec.f_prime_right < 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    /// Integrated profiles are strictly monotone in the field and monotone
    /// the opposite way in the exposure.
    #[test]
    fn profiles_are_strictly_monotone(
        omega in 0.4f64..2.5,
        v_left in 1.2f64..4.0,
        v_right in 0.1f64..0.9,
        quadratic in any::<bool>(),
    ) {
        let params = if quadratic {
            ModelParams::quadratic_drift(omega).unwrap()
        } else {
            ModelParams::simple(omega).unwrap()
        };
        let spec = compute_wave_spec(&params, v_left, v_right).unwrap();
        let profile = integrate_profile(&spec, None).unwrap();
        for w in profile.v.windows(2) {
            prop_assert!(w[1] < w[0], "field must strictly decrease: {w:?}");
        }
        for w in profile.theta.windows(2) {
            prop_assert!(w[1] >= w[0], "exposure must not decrease: {w:?}");
        }
    }

    /// The profile is unique up to translation: starting the integration at
    /// a different interior level reproduces the same shape shifted in ξ.
    #[test]
    fn profiles_are_translates_of_each_other(
        v_left in 1.3f64..4.0,
        v_right in 0.1f64..0.8,
        s in 0.25f64..0.75,
    ) {
        let params = ModelParams::simple(1.0).unwrap();
        let spec = compute_wave_spec(&params, v_left, v_right).unwrap();
        let reference = integrate_profile(&spec, None).unwrap();
        let z_alt = spec.z_right + s * (spec.z_left - spec.z_right);
        let shifted = integrate_profile_from(&spec, z_alt, None).unwrap();

        // ξ-offset that maps the shifted profile onto the reference one.
        let v_mid = reference.v_at(0.0);
        let delta = shifted
            .level_crossing(v_mid)
            .expect("interior level must be crossed");
        for probe in [-3.0, -1.0, -0.25, 0.0, 0.5, 2.0] {
            let a = reference.v_at(probe);
            let b = shifted.v_at(probe + delta);
            prop_assert!(
                (a - b).abs() <= 1e-5,
                "profiles differ by {} at xi = {probe}",
                a - b
            );
        }
    }
}

use proptest::prelude::*;
use secplan_core::{
    critical_distance, lambda_threshold, optimal_guard_radius, optimal_power_split, p_active,
    p_cov_an, p_cov_gz, p_sec_an, p_sec_gz, selection_function, selection_value, GuardZoneDesign,
    NoiseSplitDesign, SystemParams, Technique,
};

prop_compose! {
    fn params()(
        alpha in 2.2f64..6.0,
        p_t in 0.1f64..10.0,
        beta_t in 0.1f64..5.0,
        beta_e in 0.1f64..5.0,
        epsilon in 0.5f64..0.99,
        sigma2_p in 0.1f64..5.0,
        sigma2_s in 0.1f64..5.0,
        lambda_e in 0.0f64..1.0,
        d in 0.05f64..3.0,
    ) -> SystemParams {
        SystemParams { alpha, p_t, beta_t, beta_e, epsilon, sigma2_p, sigma2_s, lambda_e, d }
    }
}

prop_compose! {
    /// Parameters with the secrecy constraint binding: λ_e ∈ (λ_e*, 10 λ_e*).
    fn binding_params()(base in params(), factor in 1.01f64..10.0) -> SystemParams {
        let threshold = lambda_threshold(&base).unwrap();
        base.with_lambda_e(threshold * factor)
    }
}

fn unit(p: f64) -> bool {
    (0.0..=1.0).contains(&p)
}

proptest! {
    #[test]
    fn probabilities_in_unit_interval(p in params(), r_g in 0.0f64..5.0, gamma in 0.01f64..=1.0) {
        let gz = GuardZoneDesign { r_g };
        let an = NoiseSplitDesign { gamma };
        prop_assert!(unit(p_active(&p, &gz).unwrap()));
        prop_assert!(unit(p_cov_gz(&p, &gz).unwrap()));
        prop_assert!(unit(p_sec_gz(&p, &gz).unwrap()));
        prop_assert!(unit(p_cov_an(&p, &an).unwrap()));
        prop_assert!(unit(p_sec_an(&p, &an).unwrap()));
    }

    #[test]
    fn guard_radius_trades_coverage_for_secrecy(
        p in params(),
        r in 0.0f64..1.5,
        step in 0.01f64..0.5,
    ) {
        let p = p.with_lambda_e(p.lambda_e.max(0.01));
        let near = GuardZoneDesign { r_g: r };
        let far = GuardZoneDesign { r_g: r + step };
        let c_near = p_cov_gz(&p, &near).unwrap();
        prop_assume!(c_near > 1e-250);
        prop_assert!(p_cov_gz(&p, &far).unwrap() < c_near);
        let (s_near, s_far) = (p_sec_gz(&p, &near).unwrap(), p_sec_gz(&p, &far).unwrap());
        // once the tail underflows both saturate at exactly 1
        prop_assert!(s_far > s_near || (s_far == 1.0 && s_near == 1.0) || s_near > 1.0 - 1e-15);
    }

    #[test]
    fn power_split_trades_secrecy_for_coverage(
        p in params(),
        g1 in 0.01f64..1.0,
        g2 in 0.01f64..1.0,
    ) {
        prop_assume!((g1 - g2).abs() > 1e-6);
        let (lo, hi) = if g1 < g2 { (g1, g2) } else { (g2, g1) };
        let p = p.with_lambda_e(p.lambda_e.max(0.01));
        let (a_lo, a_hi) = (NoiseSplitDesign { gamma: lo }, NoiseSplitDesign { gamma: hi });
        let c_hi = p_cov_an(&p, &a_hi).unwrap();
        prop_assume!(c_hi > 1e-250 && c_hi < 1.0);
        prop_assert!(c_hi > p_cov_an(&p, &a_lo).unwrap());
        let floor = p.beta_e / (1.0 + p.beta_e);
        let (s_lo, s_hi) = (p_sec_an(&p, &a_lo).unwrap(), p_sec_an(&p, &a_hi).unwrap());
        if hi <= floor {
            prop_assert_eq!(s_lo, 1.0);
            prop_assert_eq!(s_hi, 1.0);
        } else if lo > floor {
            prop_assert!(s_hi < s_lo);
        } else {
            prop_assert_eq!(s_lo, 1.0);
            prop_assert!(s_hi < 1.0);
        }
    }

    #[test]
    fn optima_meet_the_target_exactly(p in binding_params()) {
        let gz = optimal_guard_radius(&p).unwrap();
        let an = optimal_power_split(&p).unwrap();
        prop_assert!(gz.constraint_active);
        prop_assert!((gz.metrics.p_sec - p.epsilon).abs() <= 1e-9);
        prop_assert!(an.parameter <= 1.0);
        if an.constraint_active {
            prop_assert!((an.metrics.p_sec - p.epsilon).abs() <= 1e-9);
        }
    }

    #[test]
    fn null_designs_below_threshold(p in params(), fraction in 0.0f64..=1.0) {
        let threshold = lambda_threshold(&p).unwrap();
        let p = p.with_lambda_e(threshold * fraction);
        let gz = optimal_guard_radius(&p).unwrap();
        let an = optimal_power_split(&p).unwrap();
        prop_assert_eq!(gz.parameter, 0.0);
        prop_assert_eq!(an.parameter, 1.0);
        prop_assert!(!gz.constraint_active && !an.constraint_active);
        prop_assert_eq!(gz.metrics.p_cov, an.metrics.p_cov);
        prop_assert!((gz.metrics.p_sec - an.metrics.p_sec).abs() <= 1e-15);
        prop_assert!(gz.metrics.p_sec >= p.epsilon - 1e-12);
    }

    #[test]
    fn selection_sign_matches_coverage_comparison(p in binding_params()) {
        let verdict = selection_function(&p).unwrap();
        let diff = verdict.gz_design.metrics.p_cov - verdict.an_design.metrics.p_cov;
        // skip numerically tied points
        prop_assume!(diff.abs() > 1e-9 && verdict.f_value.abs() > 1e-12);
        prop_assert_eq!(diff > 0.0, verdict.f_value > 0.0, "diff {} F {}", diff, verdict.f_value);
        prop_assert_eq!(verdict.better == Technique::GuardZone, verdict.f_value > 0.0);
        prop_assert_eq!(verdict.g_value, verdict.an_design.parameter);
    }

    /// Non-strict: far out `Γ(2/α, H)` underflows and `F` flattens.
    #[test]
    fn selection_increases_with_distance(p in binding_params()) {
        let mut previous = f64::NEG_INFINITY;
        for i in 1..=40 {
            let f = selection_value(&p, 0.05 * i as f64).unwrap();
            prop_assert!(f >= previous);
            previous = f;
        }
    }
}

#[test]
fn selection_strictly_increasing_on_reference_grid() {
    let p = SystemParams::default();
    // beyond d ≈ 1.1 the tail term drops below one ulp of the budget
    let values: Vec<f64> = (1..=20)
        .map(|i| selection_value(&p, 0.05 * i as f64).unwrap())
        .collect();
    assert!(values.windows(2).all(|w| w[1] > w[0]), "{values:?}");
}

#[test]
fn optimality_against_grid_search() {
    let p = SystemParams::default().with_d(0.8);
    let gz = optimal_guard_radius(&p).unwrap();
    let n = 10_000;
    let hi = 3.0 * gz.parameter;
    let cell = hi / n as f64;
    let best = (0..=n)
        .map(|i| i as f64 * cell)
        .filter(|&r| p_sec_gz(&p, &GuardZoneDesign { r_g: r }).unwrap() >= p.epsilon)
        .map(|r| (r, p_cov_gz(&p, &GuardZoneDesign { r_g: r }).unwrap()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert!(
        (best.0 - gz.parameter).abs() <= cell,
        "{best:?} vs {}",
        gz.parameter
    );
    assert!(best.1 <= gz.metrics.p_cov + 1e-12);

    let an = optimal_power_split(&p).unwrap();
    let floor = p.beta_e / (1.0 + p.beta_e);
    let cell = (1.0 - floor) / n as f64;
    let best = (0..=n)
        .map(|i| floor + i as f64 * cell)
        .filter(|&g| p_sec_an(&p, &NoiseSplitDesign { gamma: g }).unwrap() >= p.epsilon)
        .map(|g| (g, p_cov_an(&p, &NoiseSplitDesign { gamma: g }).unwrap()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap();
    assert!(
        (best.0 - an.parameter).abs() <= cell,
        "{best:?} vs {}",
        an.parameter
    );
}

#[test]
fn critical_distance_nondecreasing_in_density() {
    let p = SystemParams::default();
    let threshold = lambda_threshold(&p).unwrap();
    let mut previous = 0.0;
    for k in 0..=20 {
        let lambda_e = threshold * (1.0 + 0.25 * k as f64);
        let d_star = critical_distance(&p.with_lambda_e(lambda_e), None)
            .unwrap()
            .d_star;
        assert!(
            d_star >= previous,
            "λ_e = {lambda_e}: {d_star} < {previous}"
        );
        previous = d_star;
    }
}

use gospa::rfs::{derive_seed, TABLE1_FALSE};
use gospa::{
    estimate_metric, estimate_metric_with, gospa, table1_scenario, BernoulliComponent,
    EstimatorConfig, Execution, GospaParams, MetricVariant, MultiBernoulli, PairSampler, TargetSet,
};

fn degenerate_model(existence: f64, means: &[[f64; 2]]) -> MultiBernoulli<f64> {
    MultiBernoulli::new(
        means
            .iter()
            .map(|m| BernoulliComponent::new(existence, m.to_vec(), vec![vec![0.0; 2]; 2]).unwrap())
            .collect(),
    )
    .unwrap()
}

fn table_params(p: f64) -> GospaParams<f64> {
    GospaParams::new(8.0, 2.0, p).unwrap()
}

#[test]
fn degenerate_models_reproduce_the_deterministic_metric() {
    let truth_means = [[0.0, 0.0], [10.0, 1.0], [-3.0, 4.0]];
    let est_means = [[0.5, 0.2], [9.0, 2.5]];
    let sampler = PairSampler::independent(degenerate_model(1.0, &truth_means), degenerate_model(1.0, &est_means));
    let x = TargetSet::from_points(&truth_means.iter().map(|m| m.to_vec()).collect::<Vec<_>>()).unwrap();
    let y = TargetSet::from_points(&est_means.iter().map(|m| m.to_vec()).collect::<Vec<_>>()).unwrap();
    for p in [1.0, 2.0, 3.0] {
        let params = GospaParams::new(5.0, 2.0, p).unwrap();
        for p_prime in [1.0, 2.0] {
            let cfg = EstimatorConfig::new(p_prime, 300, 11).unwrap();
            for variant in MetricVariant::ALL {
                let est = estimate_metric(&sampler, &params, &cfg, variant).unwrap();
                let direct = variant.evaluate(&x, &y, &params).unwrap();
                assert_eq!(est.value, direct, "{variant:?} p={p} p'={p_prime}");
                assert_eq!(est.standard_error, 0.0);
                assert_eq!(est.samples, 300);
            }
        }
    }
}

#[test]
fn identical_results_for_every_execution_mode() {
    let sampler = table1_scenario::<f64>(0, 3).unwrap();
    let cfg = EstimatorConfig::new(2.0, 500, 42).unwrap();
    let serial = estimate_metric_with(&sampler, &table_params(2.0), &cfg, MetricVariant::Gospa, Execution::Serial).unwrap();
    for threads in [1, 2, 3, 8] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let parallel = pool
            .install(|| estimate_metric_with(&sampler, &table_params(2.0), &cfg, MetricVariant::Gospa, Execution::Parallel))
            .unwrap();
        assert_eq!(serial.value.to_bits(), parallel.value.to_bits());
        assert_eq!(serial.standard_error.to_bits(), parallel.standard_error.to_bits());
    }
    let other_seed = EstimatorConfig::new(2.0, 500, 43).unwrap();
    let different = estimate_metric(&sampler, &table_params(2.0), &other_seed, MetricVariant::Gospa).unwrap();
    assert_ne!(serial.value, different.value);
}

#[test]
fn standard_error_shrinks_as_inverse_square_root() {
    let sampler = table1_scenario::<f64>(0, 0).unwrap();
    let small = EstimatorConfig::new(1.0, 2000, 5).unwrap();
    let large = EstimatorConfig::new(1.0, 8000, 5).unwrap();
    let a = estimate_metric(&sampler, &table_params(1.0), &small, MetricVariant::Gospa).unwrap();
    let b = estimate_metric(&sampler, &table_params(1.0), &large, MetricVariant::Gospa).unwrap();
    let ratio = a.standard_error / b.standard_error;
    assert!((ratio - 2.0).abs() <= 0.2 * 2.0, "ratio {ratio}");
}

#[test]
fn fully_missed_scenario_is_deterministic() {
    for (p, expected) in [(1.0, 8.0), (2.0, 8.0)] {
        let cfg = EstimatorConfig::new(p, 1000, 0).unwrap();
        let est = estimate_metric(&table1_scenario::<f64>(2, 0).unwrap(), &table_params(p), &cfg, MetricVariant::Gospa).unwrap();
        assert_eq!(est.value, expected);
        assert_eq!(est.standard_error, 0.0);
    }
}

#[test]
fn false_targets_add_half_cutoff_power_per_sample() {
    // Same seeds for (m, n) and (m, 0): truth and detections coincide.
    let params = table_params(1.0);
    for n_missed in 0..=2 {
        let base = table1_scenario::<f64>(n_missed, 0).unwrap();
        for n_false in TABLE1_FALSE {
            let with_false = table1_scenario::<f64>(n_missed, n_false).unwrap();
            for k in 0..200u64 {
                let seed = derive_seed(9, k);
                let (x0, y0) = base.sample(seed).unwrap();
                let (x1, y1) = with_false.sample(seed).unwrap();
                assert_eq!(x0, x1);
                assert_eq!(y1.len(), y0.len() + n_false);
                let g0 = gospa(&x0, &y0, &params).unwrap().total;
                let g1 = gospa(&x1, &y1, &params).unwrap().total;
                assert!((g1 - g0 - 4.0 * n_false as f64).abs() < 1e-9);
            }
            let cfg = EstimatorConfig::new(1.0, 1000, 9).unwrap();
            let e0 = estimate_metric(&base, &params, &cfg, MetricVariant::Gospa).unwrap();
            let e1 = estimate_metric(&with_false, &params, &cfg, MetricVariant::Gospa).unwrap();
            assert!((e1.value - e0.value - 4.0 * n_false as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn gospa_increases_with_missed_and_false_targets() {
    for p in [1.0, 2.0] {
        let cfg = EstimatorConfig::new(p, 1000, 3).unwrap();
        let value = |m: usize, n: usize| {
            estimate_metric(&table1_scenario::<f64>(m, n).unwrap(), &table_params(p), &cfg, MetricVariant::Gospa)
                .unwrap()
                .value
        };
        for n in TABLE1_FALSE {
            assert!(value(0, n) < value(1, n) && value(1, n) < value(2, n), "p={p} n={n}");
        }
        for m in 0..=2 {
            let column: Vec<f64> = TABLE1_FALSE.iter().map(|&n| value(m, n)).collect();
            assert!(column.windows(2).all(|w| w[0] < w[1]), "p={p} m={m}: {column:?}");
        }
    }
}

#[test]
fn estimator_accepts_independent_outer_exponent() {
    let sampler = table1_scenario::<f64>(0, 0).unwrap();
    let params = table_params(1.0);
    let mean = estimate_metric(&sampler, &params, &EstimatorConfig::new(1.0, 2000, 1).unwrap(), MetricVariant::Gospa).unwrap();
    let rms = estimate_metric(&sampler, &params, &EstimatorConfig::new(2.0, 2000, 1).unwrap(), MetricVariant::Gospa).unwrap();
    // Power means are non-decreasing in the exponent.
    assert!(rms.value >= mean.value);
}

#[test]
fn estimator_rejects_invalid_configuration() {
    let sampler = table1_scenario::<f64>(0, 0).unwrap();
    let mut cfg = EstimatorConfig::new(1.0, 10, 1).unwrap();
    cfg.samples = 0;
    assert!(estimate_metric(&sampler, &table_params(1.0), &cfg, MetricVariant::Gospa).is_err());
}

#[test]
fn custom_sampler_errors_propagate() {
    let sampler = PairSampler::custom(|_| {
        Ok((
            TargetSet::from_points(&[vec![0.0]])?,
            TargetSet::from_points(&[vec![0.0, 1.0]])?,
        ))
    });
    let cfg = EstimatorConfig::new(1.0, 10, 1).unwrap();
    assert!(estimate_metric(&sampler, &table_params(1.0), &cfg, MetricVariant::Gospa).is_err());
}

#[test]
fn single_precision_estimates() {
    let sampler = table1_scenario::<f32>(0, 0).unwrap();
    let params = GospaParams::new(8.0f32, 2.0, 1.0).unwrap();
    let cfg = EstimatorConfig::new(1.0f32, 1000, 0).unwrap();
    let est = estimate_metric(&sampler, &params, &cfg, MetricVariant::Gospa).unwrap();
    assert!((est.value - 4.48).abs() < 0.25, "{est:?}");
}

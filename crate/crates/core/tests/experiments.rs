use stochpl::dominance::{run_groemer_experiment, run_pl_experiment, ExperimentSettings, Verdict};
use stochpl::logconcave::LogConcaveFunction;
use stochpl::Error;

fn settings(trials: usize, seed: u64) -> ExperimentSettings {
    ExperimentSettings { trials, seed, ..Default::default() }
}

#[test]
fn mean_envelope_integral_grows_with_n() {
    let f = LogConcaveFunction::gaussian(vec![0.7], 1.0).unwrap();
    let means: Vec<f64> = [3, 6, 12]
        .iter()
        .map(|&n| run_groemer_experiment(&f, n, &settings(1000, 5)).unwrap().mean)
        .collect();
    assert!(means.windows(2).all(|w| w[1] >= w[0]), "{means:?}");
    assert!(*means.last().unwrap() < f.integral());
}

#[test]
fn radial_input_is_a_null_case() {
    let f = LogConcaveFunction::exp_norm(vec![0.0], 1.0).unwrap();
    let r = run_groemer_experiment(&f, 4, &settings(2000, 17)).unwrap();
    assert_eq!(r.verdict, Verdict::Pass);
    assert!(r.within_band());
    assert!(r.reverse_excess <= 0.0);
}

#[test]
fn reports_have_the_declared_shape() {
    let f = LogConcaveFunction::gaussian(vec![2.0], 1.0).unwrap();
    let g = LogConcaveFunction::indicator_box(vec![0.0], vec![1.0], 1.0).unwrap();
    let r = run_pl_experiment(&f, &g, 5, 5, 0.3, &settings(300, 1)).unwrap();
    assert_eq!(r.alpha.len(), 200);
    assert!(r.alpha.windows(2).all(|w| w[0] <= w[1]));
    let want = ((2.0f64 / 0.05).ln() / 600.0).sqrt();
    assert!((r.epsilon - want).abs() < 1e-15);
    for k in 0..200 {
        assert!((r.margin[k] - (r.survival[k] - r.survival_star[k] + 2.0 * r.epsilon)).abs() < 1e-15);
    }
    let mut csv = Vec::new();
    r.write_survival_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert_eq!(text.lines().next(), Some("alpha,S,S_star,margin"));
    assert_eq!(text.lines().count(), 201);
    let back: stochpl::dominance::DominanceReport = serde_json::from_str(&r.to_json().unwrap()).unwrap();
    assert_eq!(back, r);
}

#[test]
fn preconditions_are_enforced() {
    let f = LogConcaveFunction::gaussian(vec![0.0, 0.0], 1.0).unwrap();
    assert!(matches!(run_groemer_experiment(&f, 3, &settings(200, 0)), Err(Error::Precondition(_))));
    assert!(matches!(run_groemer_experiment(&f, 5, &settings(50, 0)), Err(Error::Precondition(_))));
    let g = LogConcaveFunction::gaussian(vec![0.0], 1.0).unwrap();
    assert!(matches!(run_pl_experiment(&g, &g, 5, 5, 1.0, &settings(200, 0)), Err(Error::InvalidParameter(_))));
    assert!(matches!(run_pl_experiment(&f, &g, 5, 5, 0.5, &settings(200, 0)), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn function_specs_round_trip() {
    let text = r#"[
        {"family": "gaussian", "center": [2.0], "a": 1.0},
        {"family": "expnorm", "center": [0.0, 1.0], "rate": 2.0},
        {"family": "indicator_box", "lo": [0.0], "hi": [1.0]}
    ]"#;
    let fs: Vec<LogConcaveFunction> = serde_json::from_str(text).unwrap();
    assert_eq!(fs[2].max_value(), 1.0);
    let again: Vec<LogConcaveFunction> = serde_json::from_str(&serde_json::to_string(&fs).unwrap()).unwrap();
    assert_eq!(fs, again);
    assert!(serde_json::from_str::<LogConcaveFunction>(r#"{"family": "gaussian", "center": [0.0], "a": -1.0}"#).is_err());
}

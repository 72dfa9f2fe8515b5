use proptest::prelude::*;

use stochpl::dominance::{dkw_band, empirical_survival};
use stochpl::geometry::{convex_hull, minkowski_combine, upper_envelope};
use stochpl::logconcave::{epsilon_truncate, rearrange, LogConcaveFunction};

fn variants() -> Vec<LogConcaveFunction> {
    let envelope = upper_envelope(
        &[
            vec![-1.0, -0.5, -0.2],
            vec![1.2, -0.8, -1.0],
            vec![0.3, 1.1, 0.0],
            vec![0.0, 0.0, 0.4],
            vec![-0.6, 0.9, -2.0],
        ],
        2,
    )
    .unwrap();
    let g = LogConcaveFunction::gaussian(vec![0.4, -0.3], 1.3).unwrap();
    vec![
        g.clone(),
        LogConcaveFunction::exp_norm(vec![-0.2, 0.5], 0.8).unwrap(),
        LogConcaveFunction::indicator_box(vec![-1.0, -0.5], vec![0.7, 1.5], 2.0).unwrap(),
        LogConcaveFunction::envelope(envelope).unwrap(),
        epsilon_truncate(&g, 0.3).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn variants_are_log_concave(
        x in prop::array::uniform2(-2.0f64..2.0),
        y in prop::array::uniform2(-2.0f64..2.0),
    ) {
        let m = [(x[0] + y[0]) / 2.0, (x[1] + y[1]) / 2.0];
        for f in variants() {
            let (a, b) = (f.log_value(&x), f.log_value(&y));
            if a.is_finite() && b.is_finite() {
                let c = f.log_value(&m);
                prop_assert!(c >= 0.5 * (a + b) - 1e-9, "{f:?}: {c} < ({a} + {b})/2");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2_000))]

    #[test]
    fn rearranged_gaussian_is_log_concave_along_rays(
        r in prop::array::uniform3(0.0f64..3.0),
    ) {
        // f* is radial, so log-concavity reduces to concavity of log f*(r)
        thread_local! {
            static STAR: stochpl::logconcave::RadialProfile =
                rearrange(&LogConcaveFunction::gaussian(vec![1.5, -0.5], 1.0).unwrap()).unwrap();
        }
        STAR.with(|p| {
            let (a, b) = (r[0].min(r[1]), r[0].max(r[1]));
            let m = 0.5 * (a + b);
            let (fa, fb, fm) = (p.value(a).ln(), p.value(b).ln(), p.value(m).ln());
            if fa.is_finite() && fb.is_finite() {
                assert!(fm >= 0.5 * (fa + fb) - 1e-9, "{fm} vs {fa}, {fb}");
            }
        });
    }
}

fn points(d: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-1.0f64..1.0, d), d + 1..20)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn hull_contains_inputs(pts in points(2)) {
        let h = convex_hull(&pts, 2).unwrap();
        prop_assert!(h.volume() <= 4.0 + 1e-12);
        for p in &pts {
            prop_assert!(h.contains(p, 1e-9));
        }
        for v in h.vertices() {
            prop_assert!(pts.contains(v));
        }
    }

    #[test]
    fn hull3_contains_inputs(pts in points(3)) {
        let h = convex_hull(&pts, 3).unwrap();
        prop_assert!(h.volume() <= 8.0 + 1e-12);
        for p in &pts {
            prop_assert!(h.contains(p, 1e-9));
        }
    }

    #[test]
    fn envelope_majorizes_and_is_concave(pts in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 3), 3..15)) {
        let e = upper_envelope(&pts, 2).unwrap();
        if !e.is_degenerate() {
            for p in &pts {
                prop_assert!(e.eval(&p[..2]) >= p[2] - 1e-12);
            }
            for a in &pts {
                for b in &pts {
                    let m = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
                    let (ea, eb) = (e.eval(&a[..2]), e.eval(&b[..2]));
                    prop_assert!(e.eval(&m) >= 0.5 * (ea + eb) - 1e-9);
                }
            }
        }
    }

    #[test]
    fn combined_support_is_minkowski_combination(
        a in prop::collection::vec(prop::array::uniform2(-1.0f64..1.0), 2..8),
        b in prop::collection::vec(prop::array::uniform2(-1.0f64..1.0), 2..8),
        lambda in 0.05f64..0.95,
    ) {
        let lift = |v: &[[f64; 2]]| -> Vec<Vec<f64>> { v.iter().map(|p| p.to_vec()).collect() };
        let e = upper_envelope(&lift(&a), 1).unwrap();
        let f = upper_envelope(&lift(&b), 1).unwrap();
        let width = |v: &[[f64; 2]]| {
            v.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max) - v.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min)
        };
        let h = minkowski_combine(&e, &f, lambda).unwrap();
        let want = lambda * width(&a) + (1.0 - lambda) * width(&b);
        prop_assert!((h.support_measure() - want).abs() <= 1e-9);
    }

    #[test]
    fn survival_is_nonincreasing(values in prop::collection::vec(-5.0f64..5.0, 1..200)) {
        let grid: Vec<f64> = (0..50).map(|k| -6.0 + 12.0 * k as f64 / 49.0).collect();
        let s = empirical_survival(&values, &grid).unwrap();
        prop_assert_eq!(s[0], 1.0);
        prop_assert_eq!(*s.last().unwrap(), 0.0);
        prop_assert!(s.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn dkw_scales_with_root_m(m in 1usize..10_000, delta in 0.001f64..0.999) {
        let e = dkw_band(m, delta).unwrap();
        prop_assert!((dkw_band(4 * m, delta).unwrap() - e / 2.0).abs() <= 1e-12);
    }
}

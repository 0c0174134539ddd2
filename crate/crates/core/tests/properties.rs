//! Property tests for the structural invariants of the statistics.

use funcpd_core::classical::{demean_by_segments, BootstrapEngine};
use funcpd_core::relevant::{boot_p1, boot_p2, boot_p3, estimate_mean_diff, estimate_null_set};
use funcpd_core::{CusumProcess, FunctionalSample, Grid, NormKind};
use proptest::prelude::*;

fn curve_values(m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-100.0f64..100.0, m)
}

fn sample_strategy() -> impl Strategy<Value = FunctionalSample> {
    (2usize..8, 2usize..30).prop_flat_map(|(m, n)| {
        prop::collection::vec(curve_values(m), n).prop_map(move |rows| {
            FunctionalSample::from_rows(&rows, Grid::uniform(m).unwrap()).unwrap()
        })
    })
}

proptest! {
    // Jensen on a probability measure: L1 <= L2 <= sup.
    #[test]
    fn norm_ordering(values in (2usize..50).prop_flat_map(curve_values)) {
        let grid = Grid::uniform(values.len()).unwrap();
        let c = funcpd_core::Curve::new(values, grid).unwrap();
        let (l1, l2, sup) =
            (c.norm(NormKind::L1), c.norm(NormKind::L2), c.norm(NormKind::Sup));
        prop_assert!(l1 <= l2 + 1e-12 * (1.0 + l2));
        prop_assert!(l2 <= sup + 1e-12 * (1.0 + sup));
    }

    // U_n(0) = U_n(1) = 0 and the knot maximum dominates any interpolated s.
    #[test]
    fn cusum_boundary_and_knot_maximum(sample in sample_strategy()) {
        let u = CusumProcess::from_sample(&sample);
        let n = sample.n();
        let scale: f64 = sample.rows().flatten().map(|v| v.abs()).sum::<f64>() + 1.0;
        prop_assert!(u.row(0).iter().all(|v| v.abs() <= 1e-12 * scale));
        prop_assert!(u.row(n).iter().all(|v| v.abs() <= 1e-12 * scale));

        for kind in [NormKind::L1, NormKind::L2, NormKind::Sup] {
            let (_, stat) = u.argmax_norm(kind);
            let sqrt_n = (n as f64).sqrt();
            // 10x oversampled interpolation never beats the knots
            for i in 0..=10 * n {
                let s = i as f64 / (10 * n) as f64;
                let vals = u.eval(s);
                let c = funcpd_core::Curve::new(vals, sample.grid().clone()).unwrap();
                prop_assert!(sqrt_n * c.norm(kind) <= stat + 1e-9 * scale);
            }
        }
    }

    // Adding a common constant curve to every observation leaves U_n fixed.
    #[test]
    fn cusum_translation_invariance(sample in sample_strategy(), shift in -50.0f64..50.0) {
        let shifted_rows: Vec<Vec<f64>> = sample
            .rows()
            .map(|r| r.iter().map(|v| v + shift).collect())
            .collect();
        let shifted =
            FunctionalSample::from_rows(&shifted_rows, sample.grid().clone()).unwrap();
        let ua = CusumProcess::from_sample(&sample);
        let ub = CusumProcess::from_sample(&shifted);
        let scale: f64 = sample.rows().flatten().map(|v| v.abs()).sum::<f64>()
            + shift.abs() * sample.n() as f64 + 1.0;
        for k in 0..=sample.n() {
            for (a, b) in ua.row(k).iter().zip(ub.row(k)) {
                prop_assert!((a - b).abs() <= 1e-12 * scale);
            }
        }
    }

    // Per-replicate dominance of the three relevant bootstrap statistics.
    #[test]
    fn relevant_bootstrap_dominance(
        sample in sample_strategy(),
        seed in 0u64..1000,
    ) {
        let n = sample.n();
        let k_hat = (n / 2).max(1);
        let est = estimate_mean_diff(&sample, k_hat).unwrap();
        let nset = estimate_null_set(&est);
        let demeaned = demean_by_segments(&sample, k_hat).unwrap();
        let l = (n / 4).max(1);
        let engine = BootstrapEngine::new(&demeaned, l).unwrap();
        let s_hat = k_hat as f64 / n as f64;
        let scale: f64 = sample.rows().flatten().map(|v| v.abs()).sum::<f64>() + 1.0;
        for b in 0..3u64 {
            let nu = engine.multipliers(seed, 0, b);
            let rep = engine.replicate(&nu);
            let p1 = boot_p1(&rep, s_hat, &est, &nset).unwrap();
            let p2 = boot_p2(&rep, s_hat, &est).unwrap();
            let p3 = boot_p3(&rep, s_hat);
            prop_assert!(p3 >= p1 - 1e-10 * scale, "P3 = {p3} < P1 = {p1}");
            prop_assert!(p1 >= p2 - 1e-10 * scale, "P1 = {p1} < P2 = {p2}");
        }
    }

    // Same seed and config give bit-identical results.
    #[test]
    fn classical_test_deterministic(sample in sample_strategy(), seed in 0u64..1000) {
        let cfg = funcpd_core::BootstrapConfig {
            block_length: Some(1),
            replicates: 10,
            seed,
            norm: NormKind::L1,
        };
        let a = funcpd_core::classical::classical_test(&sample, 0.1, &cfg).unwrap();
        let b = funcpd_core::classical::classical_test(&sample, 0.1, &cfg).unwrap();
        prop_assert_eq!(a, b);
    }
}

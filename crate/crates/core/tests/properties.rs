mod common;

use common::*;
use permrow::analysis::{
    f_survival, f_test_oneway, regularized_incomplete_beta, t_test_two_sample, t_two_sided_p,
    GroupedValues, TTestVariant,
};
use permrow::linalg::{center_rows, leading_singular_triple, Matrix};
use permrow::theory::{
    classify_snr, first_term_phase, linear_signal_indices, minimax_rate_extreme, minimax_rate_phase,
    rate_psi,
    RateTarget, SignalIndices,
};
use permrow::{estimate, EstimateOptions, Method, ObservationMatrix, SignConvention, SvdOptions};
use proptest::prelude::*;

fn matrix_strategy(n: std::ops::Range<usize>, p: std::ops::Range<usize>) -> impl Strategy<Value = Matrix> {
    (n, p).prop_flat_map(|(n, p)| {
        prop::collection::vec(-5.0f64..5.0, n * p).prop_map(move |d| Matrix::new(n, p, d).unwrap())
    })
}

fn perm_strategy(p: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..p).collect::<Vec<usize>>()).prop_shuffle()
}

const EQUIVARIANT: [Method; 4] = [
    Method::Spectral,
    Method::Regression,
    Method::DirectSorting,
    Method::OrderStatistic,
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn estimates_ignore_column_order(
        (m, perm) in matrix_strategy(3..8, 4..20)
            .prop_flat_map(|m| { let p = m.cols(); (Just(m), perm_strategy(p)) })
    ) {
        let y = ObservationMatrix::new(m).unwrap();
        let yp = permute_columns(&y, &perm);
        let opts = EstimateOptions::default();
        for method in permrow::Method::ALL {
            let a = estimate(&y, method, &opts).unwrap();
            let b = estimate(&yp, method, &opts).unwrap();
            prop_assert!(max_abs_diff(&a.theta_r, &b.theta_r) < 1e-10, "{method}");
            prop_assert!(max_abs_diff(&a.theta_l, &b.theta_l) < 1e-10, "{method}");
            prop_assert!(max_abs_diff(&a.range, &b.range) < 1e-10, "{method}");
        }
    }

    #[test]
    fn row_shift_moves_ends_not_range(
        (m, shifts) in matrix_strategy(3..8, 4..20)
            .prop_flat_map(|m| { let n = m.rows(); (Just(m), prop::collection::vec(-10.0f64..10.0, n)) })
    ) {
        let y = ObservationMatrix::new(m.clone()).unwrap();
        let shifted = ObservationMatrix::new(Matrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j) + shifts[i])).unwrap();
        let opts = EstimateOptions::default();
        for method in EQUIVARIANT {
            let a = estimate(&y, method, &opts).unwrap();
            let b = estimate(&shifted, method, &opts).unwrap();
            for i in 0..m.rows() {
                prop_assert!((b.theta_r[i] - a.theta_r[i] - shifts[i]).abs() < 1e-10);
                prop_assert!((b.theta_l[i] - a.theta_l[i] - shifts[i]).abs() < 1e-10);
                prop_assert!((b.range[i] - a.range[i]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn positive_scaling_scales_estimates(m in matrix_strategy(3..8, 4..20), c in 0.1f64..10.0) {
        let y = ObservationMatrix::new(m.clone()).unwrap();
        let ys = ObservationMatrix::new(m.scaled(c)).unwrap();
        let opts = EstimateOptions::default();
        // the power iteration stops at a fixed tolerance, so the error in v
        // grows like 1 / (relative spectral gap)
        let t0 = leading_singular_triple(&center_rows(&y), &SvdOptions::default()).unwrap();
        let gap = ((t0.lambda - t0.lambda2) / t0.lambda).max(1e-6);
        for method in permrow::Method::ALL {
            let a = estimate(&y, method, &opts).unwrap();
            let b = estimate(&ys, method, &opts).unwrap();
            let tol = 1e-9 * c.max(1.0) / gap;
            for i in 0..m.rows() {
                prop_assert!((b.theta_r[i] - c * a.theta_r[i]).abs() < tol);
                prop_assert!((b.theta_l[i] - c * a.theta_l[i]).abs() < tol);
                prop_assert!((b.range[i] - c * a.range[i]).abs() < tol);
            }
        }
        let x = center_rows(&y);
        let xs = center_rows(&ys);
        let t = leading_singular_triple(&x, &SvdOptions::default()).unwrap();
        let ts = leading_singular_triple(&xs, &SvdOptions::default()).unwrap();
        prop_assert!((ts.lambda - c * t.lambda).abs() <= 1e-10 * ts.lambda);
        prop_assert!(max_abs_diff(&t.v, &ts.v) < 1e-8 / gap);
        prop_assert!(max_abs_diff(&t.u, &ts.u) < 1e-8 / gap);
    }

    #[test]
    fn range_is_exact_difference(m in matrix_strategy(2..6, 4..12)) {
        let y = ObservationMatrix::new(m).unwrap();
        for method in permrow::Method::ALL {
            let e = estimate(&y, method, &EstimateOptions::default()).unwrap();
            for i in 0..y.n() {
                prop_assert_eq!(e.range[i], e.theta_r[i] - e.theta_l[i]);
            }
        }
    }

    #[test]
    fn singular_vectors_are_unit_and_centered(m in matrix_strategy(2..10, 2..30)) {
        let x = center_rows(&ObservationMatrix::new(m).unwrap());
        let t = leading_singular_triple(&x, &SvdOptions::default()).unwrap();
        let nu: f64 = t.u.iter().map(|a| a * a).sum::<f64>().sqrt();
        let nv: f64 = t.v.iter().map(|a| a * a).sum::<f64>().sqrt();
        prop_assert!((nu - 1.0).abs() < 1e-10 && (nv - 1.0).abs() < 1e-10);
        prop_assert!(t.v.iter().sum::<f64>().abs() < 1e-10);
        prop_assert!(t.residual(&x.values) <= 1e-10 * (t.lambda + 1.0));
        let xv_sum: f64 = x.values.mul_vec(&t.v).iter().sum();
        prop_assert!(xv_sum >= 0.0);
    }

    #[test]
    fn monotone_rows_give_monotone_v(
        rows in prop::collection::vec(
            (prop::collection::vec(0.0f64..3.0, 12), any::<bool>(), -5.0f64..5.0), 2..7)
    ) {
        // cumulative sums of nonnegative steps, optionally reversed
        let p = 12;
        let mut data = Vec::new();
        let mut dirs = Vec::new();
        for (steps, up, level) in &rows {
            let mut acc = *level;
            let mut row: Vec<f64> = steps.iter().map(|s| { acc += s; acc }).collect();
            if !up {
                row.reverse();
            }
            dirs.push(if steps[1..].iter().all(|&s| s == 0.0) { 0.0 } else if *up { 1.0 } else { -1.0 });
            data.extend(row);
        }
        let theta = Matrix::new(rows.len(), p, data).unwrap();
        let x = center_rows(&ObservationMatrix::new(theta).unwrap());
        prop_assume!(x.values.frobenius_norm() > 1e-6);
        let opts = SvdOptions::with_convention(SignConvention::FirstNonzeroNegative);
        let t = leading_singular_triple(&x, &opts).unwrap();
        prop_assume!(!t.multiplicity_warning && t.lambda - t.lambda2 > 1e-6 * t.lambda);
        for w in t.v.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-10, "v not monotone: {:?}", t.v);
        }
        for (i, &d) in dirs.iter().enumerate() {
            if d != 0.0 && t.u[i].abs() > 1e-10 {
                prop_assert_eq!(t.u[i].signum(), d);
            }
        }
    }

    #[test]
    fn f_equals_t_squared(
        x in prop::collection::vec(-10.0f64..10.0, 2..15),
        y in prop::collection::vec(-10.0f64..10.0, 2..15),
    ) {
        let g = GroupedValues::new(vec![("a".into(), x.clone()), ("b".into(), y.clone())]);
        let f = f_test_oneway(&g).unwrap();
        let t = t_test_two_sample(&x, &y, TTestVariant::Pooled).unwrap();
        prop_assert!((f.f - t.t * t.t).abs() <= 1e-10 * f.f.max(1.0));
        prop_assert!((f.p_value - t.p_value).abs() < 1e-10);
    }

    #[test]
    fn tests_invariant_to_shift_and_scale(
        x in prop::collection::vec(-10.0f64..10.0, 3..10),
        y in prop::collection::vec(-10.0f64..10.0, 3..10),
        shift in -100.0f64..100.0,
        scale in 0.1f64..10.0,
    ) {
        let tr = |v: &[f64]| v.iter().map(|a| scale * a + shift).collect::<Vec<_>>();
        for variant in [TTestVariant::Welch, TTestVariant::Pooled] {
            let a = t_test_two_sample(&x, &y, variant).unwrap();
            let b = t_test_two_sample(&tr(&x), &tr(&y), variant).unwrap();
            prop_assert!((a.t - b.t).abs() < 1e-8 * a.t.abs().max(1.0));
            prop_assert!((a.p_value - b.p_value).abs() < 1e-8);
        }
        let g = |f: &dyn Fn(&[f64]) -> Vec<f64>| GroupedValues::new(vec![
            ("a".into(), f(&x)), ("b".into(), f(&y)), ("c".into(), f(&[1.0, 2.0, 4.0])),
        ]);
        let a = f_test_oneway(&g(&|v: &[f64]| v.to_vec())).unwrap();
        let b = f_test_oneway(&g(&tr)).unwrap();
        prop_assert!((a.f - b.f).abs() < 1e-8 * a.f.max(1.0));
    }

    #[test]
    fn p_values_decrease_in_statistic(df in 1.0f64..200.0, s in 0.0f64..20.0, ds in 0.01f64..5.0, d1 in 1.0f64..10.0) {
        let p1 = t_two_sided_p(s, df);
        let p2 = t_two_sided_p(s + ds, df);
        prop_assert!((0.0..=1.0).contains(&p1) && (0.0..=1.0).contains(&p2));
        prop_assert!(p2 <= p1);
        let f1 = f_survival(s, d1, df);
        let f2 = f_survival(s + ds, d1, df);
        prop_assert!((0.0..=1.0).contains(&f1) && f2 <= f1);
    }

    #[test]
    fn incomplete_beta_matches_statrs(a in 0.1f64..50.0, b in 0.1f64..50.0, x in 0.0f64..1.0) {
        let ours = regularized_incomplete_beta(a, b, x);
        let theirs = statrs::function::beta::beta_reg(a, b, x);
        prop_assert!((ours - theirs).abs() < 1e-10, "{ours} vs {theirs}");
    }

    #[test]
    fn linear_indices_match_svd(
        a in prop::collection::vec(0.1f64..4.0, 2..8),
        raw in prop::collection::vec(-3.0f64..3.0, 3..25),
    ) {
        let mut eta = raw.clone();
        eta.sort_by(f64::total_cmp);
        let mean = eta.iter().sum::<f64>() / eta.len() as f64;
        eta.iter_mut().for_each(|e| *e -= mean);
        prop_assume!(eta[eta.len() - 1] - eta[0] > 1e-3);
        let idx = linear_signal_indices(&a, &eta, 1.0).unwrap();
        let theta = Matrix::from_fn(a.len(), eta.len(), |i, j| a[i] * eta[j] + 1.0);
        let t = leading_singular_triple(&center_rows(&ObservationMatrix::new(theta).unwrap()), &SvdOptions::default()).unwrap();
        prop_assert!((t.lambda - idx.t).abs() <= 1e-10 * idx.t);
        let p = eta.len();
        prop_assert!((t.v[p - 1] - idx.beta_r).abs() < 1e-9);
        prop_assert!((-t.v[0] - idx.beta_l).abs() < 1e-9);
    }

    #[test]
    fn regime_nondecreasing_in_t(n in 1usize..500, p in 2usize..5000, sigma in 0.1f64..3.0) {
        let mut last = classify_snr(0.0, sigma, n, p);
        for k in 1..200 {
            let t = k as f64 * 0.05 * sigma * (p as f64).sqrt();
            let r = classify_snr(t, sigma, n, p);
            prop_assert!(r >= last);
            last = r;
        }
    }

    #[test]
    fn rate_monotone_and_plateau(n in 2usize..500, p in 3usize..5000, beta in 0.01f64..1.0) {
        let sigma = 1.0;
        let psi = rate_psi(n, p);
        prop_assert!(rate_psi(n, p + 1) > psi && rate_psi(n + 1, p) < psi);
        // nonincreasing in t once past the weak regime
        // nonincreasing in t outside the weak regime; with n > p the
        // intermediate regime is empty and the three-regime form jumps
        prop_assume!(p >= n);
        let sqrt_np = ((n * p) as f64).sqrt();
        let mut last = f64::INFINITY;
        for k in 0..50 {
            let t = (sqrt_np * (1.0 + 0.2 * k as f64)).sqrt() * sigma;
            let idx = SignalIndices { t, beta_r: beta, beta_l: beta, sigma };
            let r = minimax_rate_phase(&idx, RateTarget::Right, n, p);
            prop_assert!(r <= last + 1e-12);
            last = r;
        }
        // the closed form decreases once the min(·, 1) factor is active
        let (nf, pf) = (n as f64, p as f64);
        let t_switch = ((nf + (nf * nf + 4.0 * nf * pf).sqrt()) / 2.0).sqrt() * sigma;
        let mut last = f64::INFINITY;
        for k in 0..50 {
            let t = t_switch * (1.0 + 0.3 * k as f64);
            let idx = SignalIndices { t, beta_r: beta, beta_l: beta, sigma };
            let r = minimax_rate_extreme(&idx, RateTarget::Right, n, p);
            prop_assert!(r <= last + 1e-12);
            last = r;
        }
        let t = 10.0 * (p as f64).sqrt();
        prop_assert_eq!(first_term_phase(beta, t, sigma, n, p), first_term_phase(beta, 10.0 * t, sigma, n, p));
    }
}

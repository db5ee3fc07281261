//! Reference values checked against independent computations.

use growth_optimal::density::skew_normal_pdf;
use growth_optimal::index::{exact_ratio_step, index_step, path_returns};
use growth_optimal::special::norm_cdf;
use growth_optimal::{
    apply_view, believed_density, bs_call_price, discretize, dollar_gamma, expected_rate_of_return,
    growth_optimal_payoff, hedged_pnl, implied_density, kl_divergence, make_grid, model_risk_report,
    refine_and_compare, replicate_vanilla, run_index, state_prices, BucketGrid, Density, DynamicsSpec, Family,
    GammaEngine, Grid, HedgedPnlSpec, Kernel, Localization, PathSample, Payoff, PricingTerms, ProfileFn,
    ReplicationBasis, SkewNormalParams, Verdict, ViewKind, ViewSpec, VolCurve,
};
use nalgebra::{DMatrix, DVector};
use statrs::distribution::{Continuous, Normal};
use statrs::function::erf::erfc;

fn phi_oracle(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn two(a: f64, b: f64) -> Density<f64> {
    Density::new(Grid::from_points(vec![0.0, 1.0]).unwrap(), vec![a, b]).unwrap()
}

// 40-digit reference values
const PHI_TABLE: [(f64, f64); 9] = [
    (-30.0, 4.906_713_927_148_187e-198),
    (-20.0, 2.753_624_118_606_233_7e-89),
    (-10.0, 7.619_853_024_160_526e-24),
    (-5.0, 2.866_515_718_791_939e-7),
    (-1.0, 0.158_655_253_931_457_05),
    (0.0, 0.5),
    (1.0, 0.841_344_746_068_542_9),
    (3.0, 0.998_650_101_968_369_9),
    (8.0, 0.999_999_999_999_999_4),
];

#[test]
fn normal_cdf_against_reference_table() {
    for (x, v) in PHI_TABLE {
        assert!((norm_cdf(x) - v).abs() < 1e-15);
        assert!((norm_cdf(x) / v - 1.0).abs() < 1e-12, "x = {x}: {} vs {v}", norm_cdf(x));
    }
}

#[test]
fn normal_cdf_against_erfc() {
    assert!((phi_oracle(1.0) - 0.841_345).abs() < 1e-6);
    for i in 0..=400 {
        let x = -20.0 + 0.1 * i as f64;
        let (ours, theirs) = (norm_cdf(x), phi_oracle(x));
        // statrs erfc itself is only good to a few 1e-11 near |x| = 1
        assert!((ours - theirs).abs() < 5e-11, "x = {x}");
        if x < -1.0 {
            assert!((ours / theirs - 1.0).abs() < 1e-8, "x = {x}: {ours} vs {theirs}");
        }
    }
}

#[test]
fn skew_normal_pdf_at_one() {
    let p = SkewNormalParams::new(1.0, 0.0, 1.0).unwrap();
    let n = Normal::new(0.0, 1.0).unwrap();
    let oracle = 2.0 * n.pdf(1.0) * phi_oracle(1.0);
    let ours = skew_normal_pdf(1.0, &p);
    assert!((ours - oracle).abs() < 1e-10, "{ours} vs {oracle}");
    assert!((ours - 0.407_161_595_553_160_04).abs() < 1e-15, "{ours}");
}

#[test]
fn discretized_lognormal_mean() {
    let d = discretize(&Family::LogNormal { mu: 0.0, sigma: 0.2 }, &make_grid(0.3, 3.0, 2000).unwrap()).unwrap();
    assert!((d.mean() - 0.02f64.exp()).abs() < 1e-6, "{}", d.mean());
}

#[test]
fn kl_two_point() {
    let oracle = 0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
    let kl = kl_divergence(&two(0.5, 0.5), &two(0.25, 0.75)).unwrap();
    assert!((kl - oracle).abs() < 1e-15);
    assert!((kl - 0.14384).abs() < 1e-5);
}

/// Composite Simpson integration of `max(F e^{sZ - s²/2} - K, 0)` over `Z`.
fn call_by_quadrature(f: f64, k: f64, vol: f64, t: f64) -> f64 {
    let s = vol * t.sqrt();
    let n = Normal::new(0.0, 1.0).unwrap();
    let (lo, hi, steps) = (-12.0, 12.0, 200_000);
    let h = (hi - lo) / steps as f64;
    let g = |z: f64| (f * (s * z - 0.5 * s * s).exp() - k).max(0.0) * n.pdf(z);
    let mut acc = g(lo) + g(hi);
    for i in 1..steps {
        acc += g(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

#[test]
fn black_price_against_quadrature() {
    let c = bs_call_price(100.0f64, 100.0, 0.2, 1.0, 1.0).unwrap();
    assert!((c - 7.9656).abs() < 1e-4, "{c}");
    for &(k, vol, t) in &[(100.0, 0.2, 1.0), (80.0, 0.3, 2.0), (130.0, 0.15, 0.5)] {
        let q = call_by_quadrature(100.0, k, vol, t);
        let b = bs_call_price(100.0, k, vol, t, 1.0).unwrap();
        assert!((b - q).abs() < 1e-7, "K={k}: {b} vs {q}");
    }
}

fn flat_curve(vol: f64) -> VolCurve<f64> {
    VolCurve::new(1.0, 100.0, (3..=30).map(|i| (10.0 * i as f64, vol)).collect()).unwrap()
}

#[test]
fn implied_density_reprices_quoted_calls() {
    let curve = flat_curve(0.2);
    let grid = make_grid(20.0, 400.0, 3801).unwrap();
    let d = implied_density(&curve, &grid).unwrap();
    let sp = state_prices(&d, &PricingTerms::new(0.97, 0.0, 1.0).unwrap());
    for (k, vol) in curve.quotes() {
        let bs = bs_call_price(100.0, k, vol, 1.0, 0.97).unwrap();
        if bs < 1e-3 {
            continue;
        }
        let rep: f64 = grid.points().iter().zip(sp.prices()).map(|(&x, &q)| q * (x - k).max(0.0)).sum();
        assert!((rep / bs - 1.0).abs() < 5e-4, "K={k}: {rep} vs {bs}");
    }
}

#[test]
fn implied_mean_is_forward_for_skewed_curve() {
    let quotes = (0..=27)
        .map(|i| {
            let k = 30.0 + 10.0 * i as f64;
            (k, 0.2 - 0.06 * (f64::ln(k / 100.0) / 0.4).tanh())
        })
        .collect();
    let curve = VolCurve::new(1.0, 100.0, quotes).unwrap();
    let d = implied_density(&curve, &make_grid(30.0, 300.0, 801).unwrap()).unwrap();
    assert!((d.mean() / 100.0f64 - 1.0).abs() < 1e-3, "{}", d.mean());
}

#[test]
fn skew_scale_hand_computation() {
    let c = VolCurve::new(1.0f64, 100.0, vec![(90.0, 0.25), (100.0, 0.20), (110.0, 0.17)]).unwrap();
    let out = apply_view(&c, &ViewSpec::global(ViewKind::SkewScale { s: 0.5 })).unwrap();
    for ((_, v), e) in out.quotes().zip([0.225, 0.20, 0.185]) {
        assert!((v - e).abs() < 1e-15);
    }
}

#[test]
fn localized_view_leaves_far_wings_alone() {
    let quotes: Vec<(f64, f64)> = (0..=56)
        .map(|i| {
            let k = 40.0 + 5.0 * i as f64;
            (k, 0.2 - 0.06 * (f64::ln(k / 100.0) / 0.4).tanh())
        })
        .collect();
    let curve = VolCurve::new(1.0, 100.0, quotes).unwrap();
    let grid = make_grid(40.0, 320.0, 1121).unwrap();
    let loc = Localization { center: 100.0, width: 10.0 };
    let view = ViewSpec::localized(ViewKind::SkewScale { s: 0.5 }, 100.0, 10.0);
    let m = implied_density(&curve, &grid).unwrap();
    let b = believed_density(&curve, &[view], &grid).unwrap();
    let mut worst = 0.0f64;
    for ((x, bm), mm) in b.iter().zip(m.mass()) {
        if (x - loc.center).abs() > 3.0 * loc.width {
            worst = worst.max((bm - mm).abs());
        }
    }
    // blend weight at three widths is exp(-4.5)
    assert!((loc.weight(130.0) - (-4.5f64).exp()).abs() < 1e-15);
    assert!(worst < 1e-4, "largest probability mass gap beyond 3 widths: {worst:.3e}");
}

#[test]
fn vol_down_view_narrows_density() {
    let grid = make_grid(30.0, 300.0, 801).unwrap();
    let curve = flat_curve(0.2);
    let m = implied_density(&curve, &grid).unwrap();
    let b = believed_density(&curve, &[ViewSpec::global(ViewKind::VolShift { v: -0.05 })], &grid).unwrap();
    let mode = |d: &Density<f64>| d.mass().iter().copied().fold(0.0, f64::max);
    assert!(mode(&b) > mode(&m));
    assert!(b.variance() < m.variance());
}

#[test]
fn growth_optimal_expected_return_examples() {
    let b = two(0.5, 0.5);
    let m = two(0.25, 0.75);
    let f = growth_optimal_payoff(&m, &b, &PricingTerms::default()).unwrap();
    let er = expected_rate_of_return(&f, &b).unwrap();
    let oracle = 0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
    assert!((er.er - oracle).abs() < 1e-15);

    let t = PricingTerms::new((-0.02f64).exp(), 0.0, 1.0).unwrap();
    let bond = growth_optimal_payoff(&m, &m, &t).unwrap();
    let r = expected_rate_of_return(&bond, &m).unwrap();
    assert!((r.er - 0.02).abs() < 1e-15 && (r.rfr - 0.02).abs() < 1e-15);
}

#[test]
fn price_examples() {
    let m = two(0.3, 0.7);
    let t = PricingTerms::new(0.9, 0.0, 1.0).unwrap();
    let sp = state_prices(&m, &t);
    let bond = Payoff::new(m.grid().clone(), vec![1.0, 1.0], t).unwrap();
    assert!((growth_optimal::price(&bond, &sp).unwrap() - 0.9).abs() < 1e-15);
    let zero = Payoff::new(m.grid().clone(), vec![0.0, 0.0], t).unwrap();
    assert_eq!(growth_optimal::price(&zero, &sp).unwrap(), 0.0);
    let f = growth_optimal_payoff(&m, &two(0.6, 0.4), &PricingTerms::default()).unwrap();
    let sp1 = state_prices(&m, &PricingTerms::default());
    assert!((growth_optimal::price(&f, &sp1).unwrap() - 1.0).abs() < 1e-15);
}

/// Unweighted-by-construction least squares through nalgebra's SVD.
fn nalgebra_lstsq(columns: &[Vec<f64>], rhs: &[f64]) -> Vec<f64> {
    let a = DMatrix::from_fn(rhs.len(), columns.len(), |i, j| columns[j][i]);
    let b = DVector::from_column_slice(rhs);
    a.svd(true, true).solve(&b, 1e-14).unwrap().iter().copied().collect()
}

#[test]
fn replication_matches_independent_least_squares() {
    let grid = make_grid(50.0f64, 150.0, 101).unwrap();
    let m = discretize(&Family::Normal { mean: 100.0, std_dev: 15.0 }, &grid).unwrap();
    let values: Vec<f64> = grid.points().iter().map(|&x| 1.0 + 0.3 * ((x - 100.0) / 15.0).tanh()).collect();
    let p = Payoff::new(grid.clone(), values.clone(), PricingTerms::default()).unwrap();
    let strikes = [80.0, 90.0, 100.0, 110.0, 120.0];
    let basis = ReplicationBasis::out_of_the_money(&strikes, 100.0);
    let port = replicate_vanilla(&p, &m, &basis).unwrap();

    let instruments = basis.instruments();
    let sw: Vec<f64> = m.mass().iter().map(|w| w.sqrt()).collect();
    let cols: Vec<Vec<f64>> = instruments
        .iter()
        .map(|ins| grid.points().iter().zip(&sw).map(|(&x, s)| s * ins.payout(x)).collect())
        .collect();
    let rhs: Vec<f64> = values.iter().zip(&sw).map(|(f, s)| f * s).collect();
    let oracle = nalgebra_lstsq(&cols, &rhs);
    let ours: Vec<f64> = std::iter::once(port.bond_notional)
        .chain(port.put_weights.iter().map(|w| w.1))
        .chain(port.call_weights.iter().map(|w| w.1))
        .collect();
    // order in the basis: bond, calls, puts, digitals
    let mut expected_order = vec![port.bond_notional];
    expected_order.extend(port.call_weights.iter().map(|w| w.1));
    expected_order.extend(port.put_weights.iter().map(|w| w.1));
    assert_eq!(ours.len(), oracle.len());
    for (a, b) in expected_order.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn replication_of_a_single_call() {
    let grid = make_grid(50.0f64, 150.0, 101).unwrap();
    let m = discretize(&Family::Normal { mean: 100.0, std_dev: 15.0 }, &grid).unwrap();
    let values: Vec<f64> = grid.points().iter().map(|&x| (x - 100.0).max(0.0)).collect();
    let p = Payoff::new(grid, values, PricingTerms::default()).unwrap();
    let port = replicate_vanilla(&p, &m, &ReplicationBasis::out_of_the_money(&[90.0, 100.0, 110.0], 95.0)).unwrap();
    assert!(port.residual_sup_error < 1e-10);
    for &(k, w) in &port.call_weights {
        assert!((w - if k == 100.0 { 1.0 } else { 0.0 }).abs() < 1e-10);
    }
}

#[test]
fn symmetric_vol_view_replicates_with_a_strangle() {
    let grid = make_grid(30.0, 300.0, 801).unwrap();
    let curve = flat_curve(0.2);
    let m = implied_density(&curve, &grid).unwrap();
    let b = believed_density(&curve, &[ViewSpec::global(ViewKind::VolShift { v: 0.05 })], &grid).unwrap();
    let f = growth_optimal_payoff(&m, &b, &PricingTerms::default()).unwrap();
    let basis = ReplicationBasis::out_of_the_money(&[90.0, 110.0], 100.0);
    let port = replicate_vanilla(&f, &m, &basis).unwrap();
    assert!(port.call_weights.iter().all(|w| w.1 > 0.0), "{:?}", port.call_weights);
    assert!(port.put_weights.iter().all(|w| w.1 > 0.0), "{:?}", port.put_weights);
}

#[test]
fn digital_replication_of_skew_payoff() {
    let grid = make_grid(-4.0f64, 4.0, 81).unwrap();
    let m = discretize(&Family::SkewNormal(SkewNormalParams::standard(0.0)), &grid).unwrap();
    let mut last = f64::INFINITY;
    // below xi ~ 3 the sup residual first grows as the payoff steepens
    for xi in [3.0, 5.0, 10.0, 20.0, 50.0] {
        let b = discretize(&Family::SkewNormal(SkewNormalParams::standard(xi)), &grid).unwrap();
        let f = growth_optimal_payoff(&m, &b, &PricingTerms::default()).unwrap();
        let basis = ReplicationBasis::out_of_the_money(&[], 0.0).with_digitals(&[0.0]);
        let port = replicate_vanilla(&f, &m, &basis).unwrap();

        let sw: Vec<f64> = m.mass().iter().map(|w| w.sqrt()).collect();
        let cols = vec![
            sw.clone(),
            grid.points()
                .iter()
                .zip(&sw)
                .map(|(&x, s)| s * if x > 0.0 { 1.0 } else if x == 0.0 { 0.5 } else { 0.0 })
                .collect(),
        ];
        let rhs: Vec<f64> = f.values().iter().zip(&sw).map(|(v, s)| v * s).collect();
        let oracle = nalgebra_lstsq(&cols, &rhs);
        assert!((port.bond_notional - oracle[0]).abs() < 1e-10);
        assert!((port.digital_weights[0].1 - oracle[1]).abs() < 1e-10);

        let gap = f.values()[grid.len() - 1] - f.values()[0];
        if xi >= 20.0 {
            assert!((port.digital_weights[0].1 - gap).abs() < 1e-2, "xi={xi}");
        }
        assert!(port.residual_sup_error <= last + 1e-12, "xi={xi}");
        last = port.residual_sup_error;
    }
}

#[test]
fn simulated_mean_return_within_clt_bound() {
    let dt = 1.0 / 252.0;
    let spec = DynamicsSpec::constant(0.0, 0.2, dt, 1000).unwrap();
    let mut sum = 0.0;
    for i in 0..1000 {
        sum += path_returns(&spec, 11, i).iter().sum::<f64>();
    }
    let mean = sum / 1e6;
    assert!(mean.abs() < 3.0 * 0.2 * dt.sqrt() / 1e3, "{mean}");
}

#[test]
fn exact_ratio_equals_density_ratio() {
    let dt = 1.0 / 252.0;
    let (r, mu, sigma) = (0.01f64, 0.06, 0.25);
    let market = DynamicsSpec::constant(r, sigma, dt, 50).unwrap();
    let believed = market.with_drift(vec![mu; 50]).unwrap();
    let x = path_returns(&believed, 3, 0);
    let path = PathSample::from_returns(1.0, x.clone()).unwrap();
    let s = run_index(&path, &market, &believed).unwrap();
    let sd = sigma * dt.sqrt();
    let nb = Normal::new(mu * dt, sd).unwrap();
    let nm = Normal::new(r * dt, sd).unwrap();
    let log_ratio: f64 = x.iter().map(|&xi| nb.ln_pdf(xi) - nm.ln_pdf(xi)).sum();
    assert!((s.terminal_exact() / log_ratio.exp() - 1.0).abs() < 1e-10);
    let product: f64 = x.iter().map(|&xi| exact_ratio_step(xi, r, mu, sigma, dt)).product();
    assert!((product / s.terminal_exact() - 1.0).abs() < 1e-12);
}

#[test]
fn single_step_exact_vs_first_order() {
    let dt = 1.0f64 / 252.0;
    let e = exact_ratio_step(0.01, 0.0, 0.05, 0.2, dt);
    let i = 1.0 + index_step(0.01, 0.0, 0.05, 0.2, dt).unwrap();
    assert!((e - 1.01245).abs() < 5e-6);
    assert!((i - 1.0125).abs() < 1e-15);
}

fn quadratic(a: f64) -> ProfileFn<f64> {
    ProfileFn::from_fn(make_grid(1.0, 400.0, 800).unwrap(), move |x| a * x * x).unwrap()
}

#[test]
fn dollar_gamma_of_quadratic() {
    // E[S_T²] = S² e^{K² τ} under the lognormal hedge model
    for &(s, k, tau) in &[(100.0, 0.2, 1.0), (80.0, 0.1, 0.25), (120.0, 0.3, 0.5)] {
        let g = dollar_gamma(&quadratic(0.7), s, k, tau).unwrap();
        let oracle = 0.7 * s * s * (k * k * tau).exp();
        assert!((g / oracle - 1.0).abs() < 1e-9, "{g} vs {oracle}");
    }
}

#[test]
fn single_step_hedged_pnl() {
    let p = quadratic(0.5);
    let fix = PathSample::from_levels(vec![100.0, 101.0]).unwrap();
    let spec = HedgedPnlSpec::new(0.2, 0.5, fix, vec![0.3], vec![0.1]).unwrap();
    let g = dollar_gamma(&p, 100.0, 0.2, 0.5).unwrap();
    let pnl = hedged_pnl(&p, &spec).unwrap();
    assert!((pnl - g * (0.09 - 0.04) * 0.1).abs() < 1e-12 * g.abs());
}

#[test]
fn gamma_converges_under_quadrature_refinement() {
    let p = ProfileFn::from_fn(make_grid(20.0f64, 300.0, 600).unwrap(), |x| 1.0 + 0.3 * ((x - 100.0) / 15.0).tanh()).unwrap();
    let mut prev = None;
    for panels in [64, 128, 256, 512] {
        let g = GammaEngine::new(Kernel::Lognormal, panels).dollar_gamma(&p, 100.0, 0.2, 0.5).unwrap();
        if let Some(q) = prev {
            let q: f64 = q;
            assert!(((g - q) / g).abs() < 1e-6, "panels {panels}: {g} vs {q}");
        }
        prev = Some(g);
    }
}

#[test]
fn model_risk_examples() {
    let buckets = BucketGrid::new(vec![-0.5, 0.5, 1.5]).unwrap();
    let (b, m) = (two(0.5, 0.5), two(0.25, 0.75));
    let kl = 0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
    let r = model_risk_report(&b, &m, &buckets, &PricingTerms::from_returns(0.02, 0.2, 1.0).unwrap()).unwrap();
    assert!((r.mrr - kl).abs() < 1e-15);
    assert!((r.er - (kl + 0.02 - 0.2)).abs() < 1e-14);
    assert!((r.er + 0.03616).abs() < 1e-5);
    assert_eq!(r.verdict, Verdict::Safe);
    let r = model_risk_report(&b, &m, &buckets, &PricingTerms::from_returns(0.02, 0.1, 1.0).unwrap()).unwrap();
    assert_eq!(r.verdict, Verdict::Material);
    let same = model_risk_report(&b, &b, &buckets, &PricingTerms::from_returns(0.0, 1e-6, 1.0).unwrap()).unwrap();
    assert_eq!((same.mrr, same.verdict), (0.0, Verdict::Safe));
}

#[test]
fn refinement_examples() {
    let grid = Grid::from_points(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
    let b = Density::new(grid.clone(), vec![0.1, 0.4, 0.3, 0.2]).unwrap();
    let m = Density::new(grid.clone(), vec![0.25, 0.25, 0.25, 0.25]).unwrap();
    let coarse = BucketGrid::new(vec![0.0, 1.5, 3.0]).unwrap();
    let fine = BucketGrid::from_grid(&grid).unwrap();
    let (c, f) = refine_and_compare(&b, &m, &coarse, &fine).unwrap();
    let direct_c = 0.5 * (0.5f64 / 0.5).ln() + 0.5 * (0.5f64 / 0.5).ln();
    let direct_f: f64 = [0.1, 0.4, 0.3, 0.2].iter().map(|&p: &f64| p * (p / 0.25).ln()).sum();
    assert!((c - direct_c).abs() < 1e-15);
    assert!((f - direct_f).abs() < 1e-15);
    assert_eq!(c, 0.0);
    assert!(f > c);

    let b2 = Density::new(grid.clone(), vec![0.3, 0.1, 0.35, 0.25]).unwrap();
    let (c2, f2) = refine_and_compare(&b2, &m, &coarse, &fine).unwrap();
    let coarse_direct = 0.4 * (0.4f64 / 0.5).ln() + 0.6 * (0.6f64 / 0.5).ln();
    assert!((c2 - coarse_direct).abs() < 1e-15);
    assert!(f2 >= c2);
}

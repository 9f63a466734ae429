use nlcausal_core::finance::{
    backtest_with_codependence, pair_trading_backtest, portfolio_variance, rebalance_backtest, CoDependenceMatrix,
    Objective, PairTradingConfig, PortfolioConfig, Position,
};
use nlcausal_core::synthetic::{simulate, CoupledDifferenceParams};
use nlcausal_core::{CodependenceKind, MeasureSeries, RollingConfig};
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

fn alternating(range: std::ops::Range<usize>) -> impl Iterator<Item = f64> {
    range.map(|k| if k % 2 == 0 { 0.1 } else { -0.1 })
}

#[test]
fn fifty_sample_round_trip() {
    // History of ten alternating +-0.1 values, then a spike. Hand-computed z scores:
    // t=20: 4.743 opens short A / long B; t=21..23: 1.107, 0.647, -0.938 hold; t=24: 0.076 closes.
    let c: Vec<f64> = alternating(0..20).chain([0.5, 0.25, 0.2]).chain(alternating(23..50)).collect();
    let codep = MeasureSeries::new(c, (0..50).collect()).unwrap();
    // A falls while the trade is open, then recovers.
    let ra: Vec<f64> = (0..50)
        .map(|s| match s {
            0..=20 => 0.002,
            21..=24 => -0.01,
            _ => 0.005,
        })
        .collect();
    let rb = vec![0.0; 50];
    let cfg = PairTradingConfig { hist_window: 11, short_window: 1, ..Default::default() };
    let bt = backtest_with_codependence(&ra, &rb, codep, &cfg, 1).unwrap();
    for (s, p) in bt.positions.iter().enumerate() {
        let expected = if (21..=24).contains(&s) { Position::ShortALongB } else { Position::Flat };
        assert_eq!(*p, expected, "sample {s}");
    }
    assert!((bt.total_return() - 0.04).abs() < 1e-12);
    assert!((bt.decisions[10].1 - 4.743).abs() < 1e-3);
}

fn prices_from(x: &[f64]) -> Vec<f64> {
    let m = x.iter().sum::<f64>() / x.len() as f64;
    let mut p = 100.0;
    x.iter()
        .map(|v| {
            p *= (0.02 * (v - m)).exp();
            p
        })
        .collect()
}

#[test]
fn correlation_and_ccm_trade_differently() {
    let (x, y) = simulate(&CoupledDifferenceParams::default(), 1500).unwrap();
    let (pa, pb) = (prices_from(x.values()), prices_from(y.values()));
    let run = |kind| {
        let cfg = PairTradingConfig { hist_window: 600, short_window: 200, codependence: kind, ..Default::default() };
        pair_trading_backtest(&pa, &pb, &cfg, 20).unwrap()
    };
    let corr = run(CodependenceKind::Correlation);
    let ccm = run(CodependenceKind::Ccm);
    assert_eq!(corr.positions.len(), ccm.positions.len());
    assert_ne!(corr.positions, ccm.positions);
}

fn double_sum(w: &[f64], vols: &[f64], theta: &[[f64; 3]; 3]) -> f64 {
    let mut total = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            total += w[i] * w[j] * vols[i] * vols[j] * theta[i][j];
        }
    }
    total
}

#[test]
fn causal_substitution_changes_variance() {
    let labels: Vec<String> = ["a", "b", "c"].map(String::from).to_vec();
    let corr = [[1.0, -0.4, 0.3], [-0.4, 1.0, 0.1], [0.3, 0.1, 1.0]];
    let ccm = [[0.9, 0.6, 0.2], [0.5, 0.9, 0.7], [0.4, 0.3, 0.9]];
    let flat = |m: &[[f64; 3]; 3]| m.iter().flatten().copied().collect::<Vec<f64>>();
    let w = [0.5, 0.3, 0.2];
    let vols = [0.2, 0.1, 0.3];
    let c = CoDependenceMatrix::new(labels.clone(), flat(&corr), CodependenceKind::Correlation, None).unwrap();
    let k = CoDependenceMatrix::new(labels, flat(&ccm), CodependenceKind::Ccm, Some(flat(&corr))).unwrap();
    let theta = [[1.0, -0.6, 0.2], [-0.5, 1.0, 0.7], [0.4, 0.3, 1.0]];
    let vc = portfolio_variance(&w, &vols, &c).unwrap();
    let vk = portfolio_variance(&w, &vols, &k).unwrap();
    assert!((vc - double_sum(&w, &vols, &corr)).abs() < 1e-15);
    assert!((vk - double_sum(&w, &vols, &theta)).abs() < 1e-15);
    assert!((vc - vk).abs() > 1e-4);
}

fn correlated_paths(assets: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut prices = vec![vec![100.0]; assets];
    for _ in 1..n {
        let common: f64 = StandardNormal.sample(&mut rng);
        for (a, p) in prices.iter_mut().enumerate() {
            let own: f64 = StandardNormal.sample(&mut rng);
            let last = *p.last().unwrap();
            p.push(last * (0.0002 * (a + 1) as f64 + 0.01 * (0.5 * common + 0.85 * own)).exp());
        }
    }
    prices
}

#[test]
fn five_asset_backtests_depend_on_codependence() {
    let prices = correlated_paths(5, 800, 17);
    let refs: Vec<&[f64]> = prices.iter().map(|p| p.as_slice()).collect();
    let labels: Vec<String> = (0..5).map(|i| format!("s{i}")).collect();
    let mut results = Vec::new();
    for kind in [CodependenceKind::Correlation, CodependenceKind::TransferEntropy, CodependenceKind::Ccm] {
        for objective in [Objective::MinRisk { target_return: None }, Objective::MaxSharpe] {
            let cfg = PortfolioConfig {
                objective,
                codependence: kind,
                rolling: RollingConfig::new(250, 50).unwrap(),
                ..Default::default()
            };
            let bt = rebalance_backtest(&labels, &refs, &cfg).unwrap();
            assert!(bt.risk.var_alpha.is_finite() && bt.risk.stdev > 0.0 && bt.risk.final_value > 0.0);
            results.push((kind, objective, bt.weights));
        }
    }
    for objective in [Objective::MinRisk { target_return: None }, Objective::MaxSharpe] {
        let of = |kind| results.iter().find(|r| r.0 == kind && r.1 == objective).unwrap().2.clone();
        assert_ne!(of(CodependenceKind::Correlation), of(CodependenceKind::Ccm));
        assert_ne!(of(CodependenceKind::Correlation), of(CodependenceKind::TransferEntropy));
    }
}

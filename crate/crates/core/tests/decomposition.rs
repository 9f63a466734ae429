use nlcausal_core::decomposition::{nested_correlation, nonlinear_fraction, DecompositionReport};
use nlcausal_core::synthetic::{simulate, CoupledDifferenceParams};
use nlcausal_core::timeseries::rolling_apply;
use nlcausal_core::{CodependenceKind, MeasureSeries, MeasureSettings, RollingConfig};

fn rolling(kind: CodependenceKind, x: &[f64], y: &[f64], settings: &MeasureSettings) -> MeasureSeries {
    let cfg = RollingConfig::new(500, 50).unwrap();
    rolling_apply(x, y, &cfg, &kind.measure(settings)).unwrap()
}

#[test]
fn coupled_pair_pipeline() {
    let (x, y) = simulate(&CoupledDifferenceParams::default(), 2500).unwrap();
    let (x, y) = (x.values(), y.values());
    let mut settings = MeasureSettings::default();
    settings.surrogate.realizations = 5;

    let te = rolling(CodependenceKind::TransferEntropy, x, y, &settings);
    let te_s = rolling(CodependenceKind::SurrogateTransferEntropy, x, y, &settings);
    let r = nested_correlation(&te, &te_s).unwrap();
    assert!(r > -1.0 && r < 1.0);

    let ccm = rolling(CodependenceKind::Ccm, x, y, &settings);
    let ccm_s = rolling(CodependenceKind::SurrogateCcm, x, y, &settings);
    assert!(nonlinear_fraction(&ccm, &ccm_s).unwrap() > 0.0);

    let rho = rolling(CodependenceKind::Correlation, x, y, &settings);
    let rep = DecompositionReport::compute("ccm", ("x".into(), "y".into()), &ccm, &ccm_s, &rho).unwrap();
    assert_eq!(rep.linear_fraction + rep.nonlinear_fraction, 1.0);
    for v in [rep.linear_fraction, rep.fallacy, rep.fallacy_linear] {
        assert!((0.0..=1.0).contains(&v));
    }
}

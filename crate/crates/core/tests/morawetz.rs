use std::f64::consts::PI;

use angreg::inequalities::*;
use angreg::modes::{RadialProfile, SpectralFunction};
use angreg::transforms::EvolutionSettings;

fn gauss(n: u32, k: u32) -> SpectralFunction {
    SpectralFunction::single(n, k, RadialProfile::gaussian(1.0, 0, 1.0).unwrap()).unwrap()
}

#[test]
fn exact_values() {
    assert!((morawetz_mode_ratio_exact(3, 2.0, 2.0, 0).unwrap() - PI).abs() < 1e-13);
    assert!((morawetz_mode_ratio_exact(3, 2.0, 1.0, 0).unwrap() - 2.0 * PI).abs() < 1e-13);
    assert!(morawetz_mode_ratio_exact(3, 1.0, 2.0, 0).is_err());
    assert!(morawetz_mode_ratio_exact(3, 2.0, 0.0, 0).is_err());
    // n <= b < n + 2k is still finite for k >= 1
    assert!(morawetz_mode_ratio_exact(2, 2.0, 2.0, 1).unwrap().is_finite());
    assert!(morawetz_mode_ratio_exact(2, 2.0, 2.0, 0).is_err());
}

#[test]
fn numeric_matches_exact() {
    let s = EvolutionSettings::default();
    for a in [1.0, 2.0] {
        let f = gauss(3, 0);
        let r = morawetz_ratio_numeric(&f, 2.0, a, &s).unwrap();
        let exact = morawetz_mode_ratio_exact(3, 2.0, a, 0).unwrap();
        assert!((r.ratio.unwrap().powi(2) / exact - 1.0).abs() < 5e-3, "a={a}");
        assert_eq!(r.estimate, EstimateId::Morawetz);
        assert_eq!(r.method, Method::Simulation);
    }
}

#[test]
fn profile_independence() {
    let s = EvolutionSettings::default();
    for k in [0u32, 1] {
        let f = gauss(3, k);
        let g = SpectralFunction::single(3, k, RadialProfile::gaussian(1.0, 2, 0.5).unwrap()).unwrap();
        let a = morawetz_ratio_numeric(&f, 1.5, 2.0, &s).unwrap().ratio.unwrap();
        let b = morawetz_ratio_numeric(&g, 1.5, 2.0, &s).unwrap().ratio.unwrap();
        assert!((a / b - 1.0).abs() < 1e-3, "k={k}");
    }
}

#[test]
fn time_reversal_and_refinement() {
    let f = gauss(3, 1);
    let base = morawetz_ratio_numeric(&f, 2.0, 2.0, &EvolutionSettings::default()).unwrap();
    let both = EvolutionSettings { both_signs: true, ..Default::default() };
    let r = morawetz_ratio_numeric(&f, 2.0, 2.0, &both).unwrap();
    assert!((r.lhs / base.lhs - 1.0).abs() < 1e-12);
    let fine = EvolutionSettings { refine: 1, ..Default::default() };
    let r = morawetz_ratio_numeric(&f, 2.0, 2.0, &fine).unwrap();
    assert!((r.ratio.unwrap() / base.ratio.unwrap() - 1.0).abs() < 1e-3);
}

#[test]
fn window_is_enforced() {
    let s = EvolutionSettings::default();
    assert!(matches!(
        morawetz_ratio_numeric(&gauss(3, 0), 3.0, 2.0, &s),
        Err(angreg::Error::Window { .. })
    ));
    assert!(morawetz_ratio_numeric(&gauss(3, 0), 1.0, 2.0, &s).is_err());
}

#[test]
fn local_smoothing_saturates() {
    let f = gauss(3, 0);
    let radii = [1.0, 4.0, 16.0, 64.0];
    let reps = local_smoothing_ratio(&f, 2.0, &radii, &EvolutionSettings::default()).unwrap();
    assert_eq!(reps.len(), 4);
    let mass: Vec<f64> = reps.iter().map(|r| r.lhs * r.lhs * r.r_exp.unwrap()).collect();
    assert!(mass.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-9)));
    assert!(reps.iter().all(|r| r.ratio.unwrap().is_finite() && r.ratio.unwrap() > 0.0));
    // the normalised quantity converges as the ball grows
    let lhs: Vec<f64> = reps.iter().map(|r| r.lhs).collect();
    let steps: Vec<f64> = lhs.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    assert!(steps[2] < steps[1] && steps[1] < steps[0]);
    assert!((lhs[3] / lhs[2] - 1.0).abs() < 1e-2);
}

#[test]
fn zero_data_has_no_ratio() {
    let f = SpectralFunction::single(3, 0, RadialProfile::gaussian(0.0, 0, 1.0).unwrap()).unwrap();
    let reps = local_smoothing_ratio(&f, 2.0, &[1.0, 2.0], &EvolutionSettings::default()).unwrap();
    assert!(reps.iter().all(|r| r.lhs == 0.0 && r.rhs == 0.0 && r.ratio.is_none()));
    assert!(local_smoothing_ratio(&f, 2.0, &[], &EvolutionSettings::default()).is_err());
}

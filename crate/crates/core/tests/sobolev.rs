use std::f64::consts::PI;

use angreg::inequalities::{sobolev_trace_ratio, zonal_harmonic, EstimateId, SobolevVariant};
use angreg::modes::{RadialProfile, SpectralFunction};
use proptest::prelude::*;

const GAMMA_5_4: f64 = 0.906_402_477_055_477;

fn gauss(n: u32, k: u32) -> SpectralFunction {
    SpectralFunction::single(n, k, RadialProfile::gaussian(1.0, 0, 1.0).unwrap()).unwrap()
}

// n = 3, k = 0, frequency profile exp(-rho^2): the physical radial part is
// pi^{3/2} (2 pi)^{-3} exp(-r^2 / 4) and L^2 norms pick up (2 pi)^{-3/2}.
fn physical_amplitude() -> f64 {
    PI.powf(1.5) / (2.0 * PI).powi(3)
}

#[test]
fn l2_omega_closed_form() {
    // sup r^{1/2} e^{-r^2/4} sits at r = 1
    let lhs = physical_amplitude() * (-0.25f64).exp();
    // int rho^4 e^{-2 rho^2} = 3 sqrt(pi) / (8 * 2^{5/2})
    let rhs = (2.0 * PI).powf(-1.5) * (3.0 * PI.sqrt() / (8.0 * 2f64.powf(2.5))).sqrt();
    let r = sobolev_trace_ratio(&gauss(3, 0), 2.0, SobolevVariant::L2Omega).unwrap();
    assert_eq!(r.estimate, EstimateId::SobolevInfty);
    assert!((r.lhs / lhs - 1.0).abs() < 1e-6, "{} vs {lhs}", r.lhs);
    assert!((r.rhs / rhs - 1.0).abs() < 1e-8);
    assert!((r.ratio.unwrap() - 0.80328).abs() < 1e-4);
}

#[test]
fn dual_closed_form() {
    // ||D^{-1} f||: int e^{-2 rho^2} = sqrt(pi / 8)
    let lhs = (2.0 * PI).powf(-1.5) * (PI / 8.0).sqrt().sqrt();
    // int r^{3/2} e^{-r^2/4} = 4^{5/4} Gamma(5/4) / 2
    let rhs = physical_amplitude() * 0.5 * 4f64.powf(1.25) * GAMMA_5_4;
    let r = sobolev_trace_ratio(&gauss(3, 0), 2.0, SobolevVariant::Dual).unwrap();
    assert!((r.lhs / lhs - 1.0).abs() < 1e-8);
    assert!((r.rhs / rhs - 1.0).abs() < 1e-6, "{} vs {rhs}", r.rhs);
    assert!((r.ratio.unwrap() - 0.87336).abs() < 1e-4);
}

#[test]
fn zonal_against_l2_for_constant_mode() {
    // Y_0 is constant, so the sup over the sphere is the L^2 mean over |S^{n-1}|^{1/2}
    for (n, b, s, area) in [(3u32, 2.0, 0.75, 4.0 * PI), (2, 1.5, 0.5, 2.0 * PI)] {
        let f = gauss(n, 0);
        let l2 = sobolev_trace_ratio(&f, b, SobolevVariant::L2Omega).unwrap().ratio.unwrap();
        let z = sobolev_trace_ratio(&f, b, SobolevVariant::ZonalInfty { s }).unwrap().ratio.unwrap();
        assert!((l2 / z / area.sqrt() - 1.0).abs() < 1e-6, "n={n}");
    }
}

#[test]
fn zonal_harmonics_are_normalised() {
    for k in 0..5u32 {
        // integrate |Y_k|^2 over the sphere by midpoint rule
        let m = 20_000;
        let h = PI / m as f64;
        let s3: f64 = (0..m)
            .map(|i| {
                let t = (i as f64 + 0.5) * h;
                zonal_harmonic(3, k, t).unwrap().powi(2) * t.sin()
            })
            .sum::<f64>()
            * h
            * 2.0
            * PI;
        let s2: f64 = (0..2 * m)
            .map(|i| zonal_harmonic(2, k, (i as f64 + 0.5) * h).unwrap().powi(2))
            .sum::<f64>()
            * h;
        assert!((s3 - 1.0).abs() < 1e-6 && (s2 - 1.0).abs() < 1e-6, "k={k}");
    }
    assert!(zonal_harmonic(4, 0, 0.0).is_err());
}

#[test]
fn window_errors() {
    let is_window = |r: angreg::Result<_>| matches!(r, Err(angreg::Error::Window { .. }));
    assert!(is_window(sobolev_trace_ratio(&gauss(3, 0), 3.0, SobolevVariant::L2Omega)));
    assert!(is_window(sobolev_trace_ratio(&gauss(3, 0), 1.0, SobolevVariant::Dual)));
    assert!(is_window(sobolev_trace_ratio(&gauss(4, 0), 2.0, SobolevVariant::ZonalInfty { s: 2.0 })));
    assert!(is_window(sobolev_trace_ratio(&gauss(3, 0), 2.0, SobolevVariant::ZonalInfty { s: 0.5 })));
    let zero = SpectralFunction::single(3, 0, RadialProfile::gaussian(0.0, 0, 1.0).unwrap()).unwrap();
    assert!(sobolev_trace_ratio(&zero, 2.0, SobolevVariant::L2Omega).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dilation_invariance(n in 2u32..=4, k in 0u32..=2, t in 0.05f64..0.95, lam in 0.3f64..3.0, dual in any::<bool>()) {
        let b = 1.0 + t * (n as f64 - 1.0);
        let variant = if dual { SobolevVariant::Dual } else { SobolevVariant::L2Omega };
        let f = gauss(n, k);
        let x = sobolev_trace_ratio(&f, b, variant);
        let y = sobolev_trace_ratio(&f.rescaled(lam), b, variant);
        match (x, y) {
            (Ok(x), Ok(y)) => prop_assert!((x.ratio.unwrap() / y.ratio.unwrap() - 1.0).abs() < 1e-6),
            (Err(_), Err(_)) => {}
            (x, y) => prop_assert!(false, "mismatch {x:?} {y:?}"),
        }
    }
}

use std::f64::consts::PI;

use angreg::quadrature::{gl16, integrate_breaks, uniform_breaks};
use angreg::specfun::*;
use proptest::prelude::*;

fn pol() -> EvalPolicy {
    EvalPolicy::default()
}

/// Poisson integral `J_nu(t) = (t/2)^nu / (sqrt(pi) Gamma(nu + 1/2)) int_{-1}^1 (1-s^2)^{nu-1/2} cos(ts) ds`,
/// with `s = sin(theta)` to remove the endpoint singularity. Also returns the
/// roundoff scale of the cancelling integral.
fn bessel_poisson(nu: f64, t: f64) -> (f64, f64) {
    let breaks = uniform_breaks(-0.5 * PI, 0.5 * PI, 0.05);
    let integral: f64 = integrate_breaks(gl16(), &breaks, |th: f64| {
        th.cos().powf(2.0 * nu) * (t * th.sin()).cos()
    });
    let size: f64 = integrate_breaks(gl16(), &breaks, |th: f64| th.cos().powf(2.0 * nu));
    let pre = (nu * (0.5 * t).ln() - 0.5 * PI.ln() - log_gamma(nu + 0.5).unwrap()).exp();
    (pre * integral, pre * size * 1e-14)
}

#[test]
fn bessel_matches_poisson_integral() {
    for &nu in &[0.0, 0.5, 1.0, 2.5, 7.0, 15.5] {
        for &t in &[0.1, 1.0, 3.7, 12.0, 25.0, 48.0] {
            let a = bessel_j(nu, t, &pol()).unwrap();
            let (b, noise) = bessel_poisson(nu, t);
            assert!((a - b).abs() <= 1e-10 * a.abs() + noise, "nu={nu} t={t}: {a} vs {b}");
        }
    }
}

#[test]
fn half_integer_examples() {
    let j = |nu, t| bessel_j(nu, t, &pol()).unwrap();
    assert_eq!(j(0.0, 0.0), 1.0);
    assert!((j(0.5, PI / 2.0) - 2.0 / PI).abs() < 1e-12);
    assert!((j(1.5, PI) - 2f64.sqrt() / PI).abs() < 1e-12);
}

#[test]
fn log_gamma_half_from_quadrature() {
    // Gamma(1/2) = int_0^inf e^{-r} r^{-1/2} dr = 2 int_0^inf e^{-u^2} du
    let breaks = uniform_breaks(0.0, 12.0, 0.25);
    let v: f64 = integrate_breaks(gl16(), &breaks, |u: f64| 2.0 * (-u * u).exp());
    assert!((log_gamma(0.5).unwrap() - v.ln()).abs() < 1e-12);
    assert!((log_gamma(5.0).unwrap() - 24f64.ln()).abs() < 1e-12);
    assert_eq!(log_gamma(1.0).unwrap(), 0.0);
}

#[test]
fn stirling_decreases_to_one() {
    let s: Vec<f64> = [10.0, 100.0, 1000.0].iter().map(|&t| stirling_deviation(t).unwrap()).collect();
    assert!(s[0] > s[1] && s[1] > s[2] && s[2] > 1.0);
    assert!((s[0] - (1.0f64 / 120.0).exp()).abs() < 1e-5);
    assert!((s[2] - 1.0).abs() < 1e-4);
}

proptest! {
    #[test]
    fn three_term_recurrence(nu in 1.0f64..40.0, t in 0.1f64..100.0) {
        let j = |v| bessel_j(v, t, &pol()).unwrap();
        let c = j(nu);
        let r = j(nu - 1.0) + j(nu + 1.0) - 2.0 * nu / t * c;
        prop_assert!(r.abs() <= 1e-9 * c.abs().max(1.0));
    }

    #[test]
    fn gamma_recurrence(x in 0.1f64..50.0) {
        let r = (log_gamma(x + 1.0).unwrap() - log_gamma(x).unwrap()).exp();
        prop_assert!((r / x - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn small_argument_law(nu in 0.0f64..10.0) {
        let t = 1e-4f64;
        let lead = (nu * (0.5 * t).ln() - log_gamma(nu + 1.0).unwrap()).exp();
        prop_assert!((bessel_j(nu, t, &pol()).unwrap() / lead - 1.0).abs() <= 1e-6);
    }

    #[test]
    fn large_argument_envelope(nu in 0.0f64..8.0, s in 1.0f64..20.0) {
        let t = 10.0 * nu * nu.max(1.0) * s;
        prop_assert!(bessel_j(nu, t, &pol()).unwrap().abs() <= 1.01 * (2.0 / (PI * t)).sqrt());
    }
}

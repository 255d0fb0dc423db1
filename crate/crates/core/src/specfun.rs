//! Gamma and Bessel functions of real nonnegative order.
//!
//! `J_nu` is evaluated by one of three branches: the power series for small
//! arguments, the Hankel asymptotic expansion for large arguments, and a
//! Miller-type downward recurrence with Neumann-series normalization in
//! between. The switch points live in [`EvalPolicy`].

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// `B_{2k} / (2k (2k-1))` for k = 1..8.
const STIRLING_COEFFS: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

const TAYLOR_TERMS: usize = 40;

/// `zeta(k)` for k = 2..TAYLOR_TERMS+1, via Euler-Maclaurin summation.
fn zeta_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (2..TAYLOR_TERMS + 2)
            .map(|k| {
                let s = k as f64;
                let n = 100.0_f64;
                let mut sum = 0.0;
                for j in (1..100).rev() {
                    sum += (j as f64).powf(-s);
                }
                sum += n.powf(1.0 - s) / (s - 1.0) + 0.5 * n.powf(-s);
                sum += s * n.powf(-s - 1.0) / 12.0;
                sum -= s * (s + 1.0) * (s + 2.0) * n.powf(-s - 3.0) / 720.0;
                sum
            })
            .collect()
    })
}

/// `ln Gamma(1 + z)` for |z| <= 0.25 from its Taylor series at 1.
fn ln_gamma_1p(z: f64) -> f64 {
    let mut acc = -EULER_GAMMA * z;
    let mut pow = -z;
    for (i, zv) in zeta_table().iter().enumerate() {
        pow *= -z;
        let term = zv / (i + 2) as f64 * pow;
        acc += term;
        if term.abs() < 1e-18 * acc.abs() {
            break;
        }
    }
    acc
}

fn ln_gamma_stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut corr = 0.0;
    let mut pow = inv;
    for c in STIRLING_COEFFS {
        corr += c * pow;
        pow *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + corr
}

fn ln_gamma_positive(x: f64) -> f64 {
    if (0.75..=1.25).contains(&x) {
        return ln_gamma_1p(x - 1.0);
    }
    if (1.75..=2.25).contains(&x) {
        return (x - 1.0).ln() + ln_gamma_1p(x - 2.0);
    }
    if x >= 10.0 {
        return ln_gamma_stirling(x);
    }
    let shift = (10.0 - x).ceil() as usize;
    let mut prod = 1.0;
    for i in 0..shift {
        prod *= x + i as f64;
    }
    ln_gamma_stirling(x + shift as f64) - prod.ln()
}

/// Natural logarithm of the Gamma function for `x > 0`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain("log_gamma", format!("x = {x} must be > 0")));
    }
    Ok(ln_gamma_positive(x))
}

/// `sin(pi x)` with exact zeros at the integers.
fn sin_pi(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).floor();
    if r == 0.0 || r == 1.0 {
        return 0.0;
    }
    (PI * r).sin()
}

/// `(ln|Gamma(x)|, sign Gamma(x))` for any real `x`; `None` at the poles.
pub fn ln_gamma_signed(x: f64) -> Option<(f64, f64)> {
    if x > 0.0 {
        return Some((ln_gamma_positive(x), 1.0));
    }
    if x == x.floor() {
        return None;
    }
    let s = sin_pi(x);
    let lg = PI.ln() - s.abs().ln() - ln_gamma_positive(1.0 - x);
    Some((lg, s.signum()))
}

/// `1 / Gamma(x)` expressed as (log magnitude, sign); zero at the poles.
pub(crate) fn recip_gamma_parts(x: f64) -> (f64, f64) {
    match ln_gamma_signed(x) {
        Some((lg, s)) => (-lg, s),
        None => (f64::NEG_INFINITY, 0.0),
    }
}

/// `Gamma(t) / (sqrt(2 pi) t^(t - 1/2) e^(-t))`, computed in log space.
pub fn stirling_deviation(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain(
            "stirling_deviation",
            format!("t = {t} must be > 0"),
        ));
    }
    let stirling = HALF_LN_2PI + (t - 0.5) * t.ln() - t;
    Ok((log_gamma(t)? - stirling).exp())
}

/// Branch selection and accuracy settings for [`bessel_j`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPolicy {
    /// Series is used for `t <= series_cutoff`, and whenever `t^2 <= 4 (nu + 1)`.
    pub series_cutoff: f64,
    /// Hankel expansion is used for `t >= max(asymptotic_min, asymptotic_nu_factor * nu^2)`.
    pub asymptotic_min: f64,
    pub asymptotic_nu_factor: f64,
    pub target_rel_err: f64,
    /// Cap on series / asymptotic terms.
    pub max_terms: usize,
    /// Cap on the number of downward recurrence steps.
    pub max_recurrence: usize,
}

impl Default for EvalPolicy {
    fn default() -> Self {
        Self {
            series_cutoff: 8.0,
            asymptotic_min: 25.0,
            asymptotic_nu_factor: 1.0,
            target_rel_err: 1e-15,
            max_terms: 300,
            max_recurrence: 2_000_000,
        }
    }
}

impl EvalPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.target_rel_err > 0.0) || self.max_terms == 0 || !(self.series_cutoff > 0.0) {
            return Err(Error::Invalid(format!("invalid EvalPolicy {self:?}")));
        }
        Ok(())
    }

    pub fn branch(&self, nu: f64, t: f64) -> BesselBranch {
        if t <= self.series_cutoff || t * t <= 4.0 * (nu + 1.0) {
            BesselBranch::Series
        } else if t >= self.asymptotic_min.max(self.asymptotic_nu_factor * nu * nu) {
            BesselBranch::Asymptotic
        } else {
            BesselBranch::Recurrence
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BesselBranch {
    Series,
    Recurrence,
    Asymptotic,
}

fn check_bessel_args(nu: f64, t: f64) -> Result<()> {
    if !(nu >= 0.0) || !nu.is_finite() {
        return Err(Error::domain("bessel_j", format!("order {nu} must be >= 0")));
    }
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::domain("bessel_j", format!("argument {t} must be >= 0")));
    }
    Ok(())
}

/// Bessel function of the first kind `J_nu(t)` for `nu >= 0`, `t >= 0`.
pub fn bessel_j(nu: f64, t: f64, policy: &EvalPolicy) -> Result<f64> {
    check_bessel_args(nu, t)?;
    if t == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    match policy.branch(nu, t) {
        BesselBranch::Series => series_scaled(nu, nu, t, policy),
        BesselBranch::Asymptotic => match hankel_pq(nu, t, policy) {
            Ok((p, q)) => {
                let chi = t - (0.5 * nu + 0.25) * PI;
                Ok((2.0 / (PI * t)).sqrt() * (p * chi.cos() - q * chi.sin()))
            }
            Err(_) => miller(nu, t, policy),
        },
        BesselBranch::Recurrence => miller(nu, t, policy),
    }
}

/// `J_nu(x) / x^p` for `0 <= p <= nu`, finite at `x = 0`.
pub fn bessel_j_scaled(nu: f64, p: f64, x: f64, policy: &EvalPolicy) -> Result<f64> {
    check_bessel_args(nu, x)?;
    if p > nu || p < 0.0 {
        return Err(Error::domain(
            "bessel_j_scaled",
            format!("scaling power {p} must lie in [0, {nu}]"),
        ));
    }
    if x == 0.0 {
        if nu == p {
            return Ok((-nu * 2f64.ln() - log_gamma(nu + 1.0)?).exp());
        }
        return Ok(0.0);
    }
    if policy.branch(nu, x) == BesselBranch::Series {
        return series_scaled(nu, nu - p, x, policy);
    }
    Ok(bessel_j(nu, x, policy)? / x.powf(p))
}

/// Power series for `J_nu(t) / t^(nu - power)`.
fn series_scaled(nu: f64, power: f64, t: f64, policy: &EvalPolicy) -> Result<f64> {
    let half = 0.5 * t;
    let ln_pref = power * half.ln() - (nu - power) * 2f64.ln() - log_gamma(nu + 1.0)?;
    let pref = ln_pref.exp();
    let x2 = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..=policy.max_terms {
        let jf = j as f64;
        term *= x2 / (jf * (nu + jf));
        sum += term;
        if term.abs() <= policy.target_rel_err * 1e-2 * sum.abs() || term == 0.0 {
            return Ok(pref * sum);
        }
    }
    Err(Error::Accuracy {
        func: "bessel_j",
        detail: format!("series for nu={nu}, t={t} did not converge"),
    })
}

/// Hankel asymptotic factors `(P, Q)` with
/// `J_nu(t) = sqrt(2/(pi t)) (P cos chi - Q sin chi)`, `chi = t - (nu/2 + 1/4) pi`.
pub fn hankel_pq(nu: f64, t: f64, policy: &EvalPolicy) -> Result<(f64, f64)> {
    check_bessel_args(nu, t)?;
    if t == 0.0 {
        return Err(Error::domain("hankel_pq", "t must be > 0"));
    }
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term: f64 = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..=policy.max_terms {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * 8.0 * t);
        if term == 0.0 {
            return Ok((p, q));
        }
        let mag = term.abs();
        if mag > prev && (k as f64) > nu + 1.0 {
            break;
        }
        prev = mag;
        // signs: P = a0 - a2/t^2 + a4/t^4 ..., Q = a1/t - a3/t^3 ...
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        if mag < policy.target_rel_err * 1e-2 {
            return Ok((p, q));
        }
    }
    Err(Error::Accuracy {
        func: "hankel_pq",
        detail: format!("asymptotic expansion for nu={nu}, t={t} stalled above target"),
    })
}

/// Miller downward recurrence normalized by
/// `(t/2)^nu0 = sum_i (nu0 + 2i) Gamma(nu0 + i) / i! J_{nu0 + 2i}(t)`.
fn miller(nu: f64, t: f64, policy: &EvalPolicy) -> Result<f64> {
    let m = nu.floor() as usize;
    let nu0 = nu - m as f64;
    let span = (m as f64).max(t);
    let start = (span + 20.0 + (60.0 * span).sqrt()).ceil() as usize;
    let start = start + (start % 2); // even offset keeps the normalization aligned
    if start > policy.max_recurrence {
        return Err(Error::Accuracy {
            func: "bessel_j",
            detail: format!("recurrence length {start} exceeds policy cap"),
        });
    }

    // Normalization coefficients c_i for the even offsets 2i <= start.
    let half_count = start / 2;
    let mut coeffs = Vec::with_capacity(half_count + 1);
    coeffs.push((log_gamma(nu0 + 1.0)?).exp());
    let mut g = coeffs[0]; // Gamma(nu0 + i) / i! at i = 1
    for i in 1..=half_count {
        if i > 1 {
            let ip = (i - 1) as f64;
            g *= (nu0 + ip) / (ip + 1.0);
        }
        coeffs.push((nu0 + 2.0 * i as f64) * g);
    }

    let mut j_next = 0.0; // J_{nu0 + k + 1}
    let mut j_cur = 1e-30; // J_{nu0 + k}
    let mut norm = 0.0;
    let mut wanted = if start == m { j_cur } else { 0.0 };
    if start.is_multiple_of(2) {
        norm += coeffs[start / 2] * j_cur;
    }
    for k in (1..=start).rev() {
        let j_prev = 2.0 * (nu0 + k as f64) / t * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        let order = k - 1;
        if order == m {
            wanted = j_cur;
        }
        if order % 2 == 0 {
            norm += coeffs[order / 2] * j_cur;
        }
        if j_cur.abs() > 1e250 {
            let s = 1e-250;
            j_cur *= s;
            j_next *= s;
            norm *= s;
            wanted *= s;
        }
    }
    let lhs = if nu0 == 0.0 { 1.0 } else { (0.5 * t).powf(nu0) };
    Ok(wanted * lhs / norm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pol() -> EvalPolicy {
        EvalPolicy::default()
    }

    #[test]
    fn log_gamma_known_values() {
        assert_eq!(log_gamma(1.0).unwrap(), 0.0);
        assert!(log_gamma(2.0).unwrap().abs() < 1e-16);
        assert_relative_eq!(log_gamma(5.0).unwrap(), 24f64.ln(), max_relative = 1e-14);
        assert_relative_eq!(
            log_gamma(0.5).unwrap(),
            0.5 * PI.ln(),
            max_relative = 1e-14
        );
        // ln 170! via summation
        let s: f64 = (1..=170).map(|i| (i as f64).ln()).sum();
        assert_relative_eq!(log_gamma(171.0).unwrap(), s, max_relative = 1e-13);
    }

    #[test]
    fn log_gamma_rejects_nonpositive() {
        assert!(matches!(log_gamma(0.0), Err(Error::Domain { .. })));
        assert!(matches!(log_gamma(-1.5), Err(Error::Domain { .. })));
        assert!(log_gamma(f64::NAN).is_err());
    }

    #[test]
    fn log_gamma_near_roots_is_relatively_accurate() {
        // ln Gamma(1 + z) = -gamma z + zeta(2)/2 z^2 + O(z^3)
        let z = 1e-6;
        let approx = -EULER_GAMMA * z + PI * PI / 12.0 * z * z;
        assert_relative_eq!(log_gamma(1.0 + z).unwrap(), approx, max_relative = 1e-9);
        // ln Gamma(2 + z) = ln(1 + z) + ln Gamma(1 + z)
        let want = z.ln_1p() + approx;
        assert_relative_eq!(log_gamma(2.0 + z).unwrap(), want, max_relative = 1e-8);
    }

    #[test]
    fn gamma_reflection_signs() {
        let (lg, s) = ln_gamma_signed(-0.5).unwrap();
        assert_eq!(s, -1.0);
        assert_relative_eq!(lg, (2.0 * PI.sqrt()).ln(), max_relative = 1e-14);
        let (_, s) = ln_gamma_signed(-1.5).unwrap();
        assert_eq!(s, 1.0);
        assert!(ln_gamma_signed(-2.0).is_none());
        assert!(ln_gamma_signed(0.0).is_none());
    }

    #[test]
    fn stirling_examples() {
        let d10 = stirling_deviation(10.0).unwrap();
        assert!((d10 - 1.00837).abs() < 5e-6, "{d10}");
        let d1000 = stirling_deviation(1000.0).unwrap();
        assert!((d1000 - 1.0).abs() < 1e-4);
        let d100 = stirling_deviation(100.0).unwrap();
        assert!(d10 > d100 && d100 > d1000 && d1000 > 1.0);
        assert!(stirling_deviation(0.0).is_err());
    }

    #[test]
    fn bessel_closed_forms() {
        let p = pol();
        assert_eq!(bessel_j(0.0, 0.0, &p).unwrap(), 1.0);
        assert_eq!(bessel_j(2.5, 0.0, &p).unwrap(), 0.0);
        assert_relative_eq!(
            bessel_j(0.5, PI / 2.0, &p).unwrap(),
            2.0 / PI,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            bessel_j(1.5, PI, &p).unwrap(),
            2f64.sqrt() / PI,
            max_relative = 1e-14
        );
        // Half-integer orders on every branch.
        for &t in &[0.3, 3.0, 9.5, 17.0, 33.0, 120.0, 2500.0] {
            let j12 = (2.0 / (PI * t)).sqrt() * t.sin();
            let j32 = (2.0 / (PI * t)).sqrt() * (t.sin() / t - t.cos());
            let got12 = bessel_j(0.5, t, &p).unwrap();
            let got32 = bessel_j(1.5, t, &p).unwrap();
            assert!((got12 - j12).abs() <= 1e-12 + 1e-10 * j12.abs(), "t={t}");
            assert!((got32 - j32).abs() <= 1e-12 + 1e-10 * j32.abs(), "t={t}");
        }
    }

    #[test]
    fn bessel_branches_agree_at_switch_points() {
        let p = pol();
        let series_everywhere = EvalPolicy {
            series_cutoff: 1e9,
            ..p
        };
        let recurrence_everywhere = EvalPolicy {
            series_cutoff: 1e-9,
            asymptotic_min: 1e9,
            ..p
        };
        for &nu in &[0.0, 0.5, 1.0, 3.25, 7.0] {
            for &t in &[0.5, 2.0, 6.0] {
                let a = bessel_j(nu, t, &series_everywhere).unwrap();
                let b = bessel_j(nu, t, &recurrence_everywhere).unwrap();
                assert!((a - b).abs() < 1e-13, "nu={nu} t={t}: {a} vs {b}");
            }
        }
        for &nu in &[0.0, 1.0, 2.5, 4.0, 6.5, 21.0] {
            let t = p.asymptotic_min.max(nu * nu) * 1.01;
            let a = bessel_j(nu, t, &p).unwrap();
            let b = bessel_j(nu, t, &recurrence_everywhere).unwrap();
            assert!((a - b).abs() < 1e-12, "nu={nu} t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn bessel_domain_errors() {
        let p = pol();
        assert!(matches!(bessel_j(-1.0, 1.0, &p), Err(Error::Domain { .. })));
        assert!(matches!(bessel_j(1.0, -1.0, &p), Err(Error::Domain { .. })));
    }

    #[test]
    fn bessel_large_order_small_argument() {
        let p = pol();
        // Leading small-t law.
        let nu: f64 = 40.0;
        let t: f64 = 1e-3;
        let lead = (nu * (0.5 * t).ln() - log_gamma(nu + 1.0).unwrap()).exp();
        assert_relative_eq!(bessel_j(nu, t, &p).unwrap(), lead, max_relative = 1e-6);
    }

    #[test]
    fn scaled_bessel_limit() {
        let p = pol();
        // J_{1/2}(x)/x^{1/2} -> sqrt(2/pi) as x -> 0
        assert_relative_eq!(
            bessel_j_scaled(0.5, 0.5, 0.0, &p).unwrap(),
            (2.0 / PI).sqrt(),
            max_relative = 1e-14
        );
        assert_eq!(bessel_j_scaled(1.5, 0.5, 0.0, &p).unwrap(), 0.0);
        let x = 3.7;
        assert_relative_eq!(
            bessel_j_scaled(2.5, 0.5, x, &p).unwrap(),
            bessel_j(2.5, x, &p).unwrap() / x.sqrt(),
            max_relative = 1e-13
        );
    }
}

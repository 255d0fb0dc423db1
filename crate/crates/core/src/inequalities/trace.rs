use std::f64::consts::PI;

use super::{EstimateId, EstimateReport, Method};
use crate::error::{Error, Result};
use crate::modes::{Mode, SphereFunction, WeightMode};
use crate::specfun::{log_gamma, recip_gamma_parts, EvalPolicy};
use crate::transforms::{bessel_product_integral, oscillatory_integral, OscillatoryIntegral, OscillatoryIntegralSpec};

/// `int_0^inf J_mu(t) J_nu(t) t^{-lambda} dt` in closed form, for
/// `mu + nu + 1 > lambda > 0`.
pub fn ws_closed_form(mu: f64, nu: f64, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) || !(mu + nu + 1.0 > lambda) {
        return Err(Error::domain(
            "ws_closed_form",
            format!("need mu + nu + 1 > lambda > 0 (mu = {mu}, nu = {nu}, lambda = {lambda})"),
        ));
    }
    let num = log_gamma(lambda)? + log_gamma(0.5 * (mu + nu - lambda + 1.0))?;
    let (l1, s1) = recip_gamma_parts(0.5 * (mu - nu + lambda + 1.0));
    let (l2, s2) = recip_gamma_parts(0.5 * (nu - mu + lambda + 1.0));
    let (l3, s3) = recip_gamma_parts(0.5 * (mu + nu + lambda + 1.0));
    let sign = s1 * s2 * s3;
    if sign == 0.0 {
        return Ok(0.0);
    }
    Ok(sign * (num + l1 + l2 + l3 - lambda * 2f64.ln()).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceMethod {
    ClosedForm,
    Quadrature,
}

/// `c_k(n, b) = int_0^inf J_nu(t)^2 t^{1-b} dt`, `nu = k + (n-2)/2`.
pub fn trace_mode_constant(n: u32, b: f64, k: u32, method: TraceMethod) -> Result<f64> {
    let mode = Mode::new(n, k)?;
    match method {
        TraceMethod::ClosedForm => {
            if !(b > 1.0 && b < n as f64) {
                return Err(Error::domain(
                    "trace_mode_constant",
                    format!("closed form needs 1 < b < n (b = {b}, n = {n})"),
                ));
            }
            ws_closed_form(mode.nu, mode.nu, b - 1.0)
        }
        TraceMethod::Quadrature => {
            let mut t = 64f64.max(4.0 * mode.nu * mode.nu);
            loop {
                let r = trace_mode_quadrature(n, b, k, t)?;
                if r.tail_bound <= 1e-9 * r.value.abs() || t > 1e7 {
                    if r.tail_bound > 1e-9 * r.value.abs() {
                        return Err(Error::TailTolerance {
                            bound: r.tail_bound,
                            tolerance: 1e-9 * r.value.abs(),
                            context: format!("trace constant n = {n}, b = {b}, k = {k}"),
                        });
                    }
                    return Ok(r.value);
                }
                t *= 2.0;
            }
        }
    }
}

/// The trace constant by quadrature truncated at `truncation`, with its tail.
pub fn trace_mode_quadrature(n: u32, b: f64, k: u32, truncation: f64) -> Result<OscillatoryIntegral> {
    let mode = Mode::new(n, k)?;
    oscillatory_integral(&OscillatoryIntegralSpec::new(mode.nu, mode.nu, b - 1.0, truncation))
}

/// `L(b) = Gamma(b-1) / (2^{b-1} Gamma(b/2)^2)`, the limit of `c_k k^{b-1}`.
pub fn stirling_limit(b: f64) -> Result<f64> {
    if !(b > 1.0) {
        return Err(Error::domain("stirling_limit", format!("b = {b} must be > 1")));
    }
    Ok((log_gamma(b - 1.0)? - (b - 1.0) * 2f64.ln() - 2.0 * log_gamma(0.5 * b)?).exp())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceBounds {
    pub n: u32,
    pub b: f64,
    pub k_max: u32,
    /// `v_k = (2 pi)^n lam_k^{b-1} c_k` for `k = 0..=k_max`.
    pub values: Vec<f64>,
    pub inf_v: f64,
    pub sup_v: f64,
    pub stirling_limit: f64,
    /// `|c_k k^{b-1} / L(b) - 1|` at `k_max`.
    pub stirling_gap: f64,
}

pub fn equivalence_bounds(n: u32, b: f64, k_max: u32) -> Result<EquivalenceBounds> {
    if k_max < 10 {
        return Err(Error::Invalid(format!("k_max = {k_max} must be >= 10")));
    }
    let pre = (2.0 * PI).powi(n as i32);
    let mut values = Vec::with_capacity(k_max as usize + 1);
    let mut last_c = 0.0;
    for k in 0..=k_max {
        let c = trace_mode_constant(n, b, k, TraceMethod::ClosedForm)?;
        let lam = Mode::new(n, k)?.lam;
        values.push(pre * lam.powf(b - 1.0) * c);
        last_c = c;
    }
    let limit = stirling_limit(b)?;
    Ok(EquivalenceBounds {
        n,
        b,
        k_max,
        inf_v: values.iter().copied().fold(f64::INFINITY, f64::min),
        sup_v: values.iter().copied().fold(0.0, f64::max),
        values,
        stirling_limit: limit,
        stirling_gap: (last_c * (k_max as f64).powf(b - 1.0) / limit - 1.0).abs(),
    })
}

/// `||x|^{(1-b)/2} \widehat{g d sigma}|` against `||g||_{L^2}` via the exact mode sum.
pub fn trace_ratio(g: &SphereFunction, b: f64, weight_mode: WeightMode) -> Result<EstimateReport> {
    let n = g.n;
    if !(b > 1.0 && b < n as f64) {
        return Err(Error::window("trace", format!("need 1 < b < n (b = {b}, n = {n})")));
    }
    let mut lhs2 = 0.0;
    let mut rhs2 = 0.0;
    for (k, mass) in g.degree_mass() {
        let c = trace_mode_constant(n, b, k, TraceMethod::ClosedForm)?;
        lhs2 += weight_mode.weight(n, k).powf(b - 1.0) * c * mass;
        rhs2 += mass;
    }
    lhs2 *= (2.0 * PI).powi(n as i32);
    let mut report = EstimateReport::new(EstimateId::Trace, n, lhs2.sqrt(), rhs2.sqrt(), Method::ClosedForm);
    report.b = Some(b);
    report.weight_mode = weight_mode;
    let degrees: Vec<u32> = g.degree_mass().into_keys().collect();
    if let [k] = degrees[..] {
        report.k = Some(k);
    }
    report.grid_id = "exact".into();
    Ok(report)
}

/// One point of an endpoint probe: the cutoff and the truncated integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbePoint {
    pub cutoff: f64,
    pub value: f64,
}

/// Truncations of `int J_nu(t)^2 t^{1-b} dt` that expose the endpoint
/// behaviour. For `b >= n` the cutoffs are lower limits `eps` of `int_eps^1`;
/// otherwise they are upper limits `T` of `int_0^T`.
pub fn endpoint_divergence_probe(n: u32, b: f64, k: u32, cutoffs: &[f64]) -> Result<Vec<ProbePoint>> {
    let mode = Mode::new(n, k)?;
    let policy = EvalPolicy::default();
    let lambda = b - 1.0;
    cutoffs
        .iter()
        .map(|&c| {
            let value = if b >= n as f64 {
                if !(c > 0.0 && c < 1.0) {
                    return Err(Error::Invalid(format!("lower cutoff {c} must lie in (0, 1)")));
                }
                bessel_product_integral(mode.nu, mode.nu, lambda, c, 1.0, &policy)?
            } else {
                if !(c > 0.0) {
                    return Err(Error::Invalid(format!("upper cutoff {c} must be positive")));
                }
                bessel_product_integral(mode.nu, mode.nu, lambda, 0.0, c, &policy)?
            };
            Ok(ProbePoint { cutoff: c, value })
        })
        .collect()
}

/// Least-squares slope of `value` against `ln cutoff`.
pub fn log_slope(points: &[ProbePoint]) -> f64 {
    let m = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.cutoff.ln()).collect();
    let mx = xs.iter().sum::<f64>() / m;
    let my = points.iter().map(|p| p.value).sum::<f64>() / m;
    let sxy: f64 = xs.iter().zip(points).map(|(x, p)| (x - mx) * (p.value - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

use super::{EstimateId, EstimateReport, Method};
use crate::error::{Error, Result};
use crate::modes::{spectral_sobolev_norm, SpectralFunction};
use crate::transforms::{Evolution, TailModel};

/// Weight exponent `alpha = b/2 - n/2 + n/r_exp`; `r_exp` may be infinite.
pub fn strichartz_alpha(n: u32, b: f64, r_exp: f64) -> f64 {
    0.5 * b - 0.5 * n as f64 + n as f64 / r_exp
}

/// Decay exponent of `int r^{-alpha R} |u|^R r^{n-1} dr` in time.
pub fn strichartz_time_decay(b: f64, a: f64, r_exp: f64) -> f64 {
    if a == 1.0 {
        1.0 + 0.5 * r_exp * (b - 1.0)
    } else {
        0.5 * b * r_exp
    }
}

/// `||x|^{-alpha} e^{itD^a} f||_{L^R_{t,|x|} L^2_omega}` against
/// `||D^{b/2 - a/R} Lambda^{(1-b)/2} f||`, from a precomputed evolution.
pub fn weighted_strichartz_ratio(
    evo: &Evolution,
    f: &SpectralFunction,
    b: f64,
    a: f64,
    r_exp: f64,
) -> Result<EstimateReport> {
    let n = f.n;
    if !(r_exp >= 2.0) {
        return Err(Error::window("strichartz-weighted", format!("r_exp = {r_exp} must lie in [2, inf]")));
    }
    if !(b > 1.0) {
        return Err(Error::window("strichartz-weighted", format!("b = {b} must be > 1")));
    }
    let k_min = f.components().iter().map(|c| c.mode.k).min().unwrap_or(0);
    if !(b < (n + 2 * k_min) as f64) {
        return Err(Error::window(
            "strichartz-weighted",
            format!("weight is not integrable at 0 for b = {b}, n = {n}, lowest degree {k_min}"),
        ));
    }
    let alpha = strichartz_alpha(n, b, r_exp);
    let lhs = if r_exp.is_infinite() {
        evo.sup(alpha)?.0
    } else {
        let gamma = strichartz_time_decay(b, a, r_exp);
        let v = evo.space_time(alpha * r_exp, r_exp, f64::INFINITY, TailModel::Power(gamma))?;
        v.value.powf(1.0 / r_exp)
    };
    let s = 0.5 * b - if r_exp.is_infinite() { 0.0 } else { a / r_exp };
    let rhs = spectral_sobolev_norm(f, s, 0.5 * (1.0 - b))?;
    let mut report = EstimateReport::new(EstimateId::StrichartzWeighted, n, lhs, rhs, Method::Simulation);
    report.b = Some(b);
    report.a = Some(a);
    report.k = match f.components() {
        [c] => Some(c.mode.k),
        _ => None,
    };
    report.r_exp = Some(r_exp);
    report.q_exp = Some(r_exp);
    report.alpha = Some(alpha);
    report.grid_id = evo.grid_id().to_string();
    Ok(report)
}

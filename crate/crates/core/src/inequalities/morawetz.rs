use std::f64::consts::PI;

use super::trace::ws_closed_form;
use super::{EstimateId, EstimateReport, Method};
use crate::error::{Error, Result};
use crate::modes::{spectral_sobolev_norm, Mode, SpectralFunction};
use crate::transforms::{Evolution, EvolutionSettings, TailModel};

/// Exact `lhs^2 / rhs^2` of the Morawetz estimate for data of one degree `k`:
/// `2 pi a^{-1} c_k(n, b) lam_k^{b-1}`. Finite for `1 < b < n + 2k`.
pub fn morawetz_mode_ratio_exact(n: u32, b: f64, a: f64, k: u32) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::domain("morawetz_mode_ratio_exact", format!("a = {a} must be > 0")));
    }
    let mode = Mode::new(n, k)?;
    if !(b > 1.0 && b < (n + 2 * k) as f64) {
        return Err(Error::domain(
            "morawetz_mode_ratio_exact",
            format!("need 1 < b < n + 2k (n = {n}, b = {b}, k = {k})"),
        ));
    }
    let c = ws_closed_form(mode.nu, mode.nu, b - 1.0)?;
    Ok(2.0 * PI / a * c * mode.lam.powf(b - 1.0))
}

fn check_b(f: &SpectralFunction, b: f64, estimate: &'static str) -> Result<()> {
    if !(b > 1.0) {
        return Err(Error::window(estimate, format!("b = {b} must be > 1")));
    }
    let k_min = f.components().iter().map(|c| c.mode.k).min().unwrap_or(0);
    if !(b < (f.n + 2 * k_min) as f64) {
        return Err(Error::window(
            estimate,
            format!("|x|^-b |u|^2 is not integrable at 0 for b = {b}, n = {}, lowest degree {k_min}", f.n),
        ));
    }
    Ok(())
}

fn single_degree(f: &SpectralFunction) -> Option<u32> {
    match f.components() {
        [c] => Some(c.mode.k),
        _ => None,
    }
}

/// Morawetz ratio from a precomputed evolution of `f`.
pub fn morawetz_ratio(evo: &Evolution, f: &SpectralFunction, b: f64, a: f64) -> Result<EstimateReport> {
    check_b(f, b, "morawetz")?;
    let lhs2 = evo.space_time(b, 2.0, f64::INFINITY, TailModel::Power(b))?;
    let rhs = spectral_sobolev_norm(f, 0.5 * (b - a), 0.5 * (1.0 - b))?;
    let mut report = EstimateReport::new(EstimateId::Morawetz, f.n, lhs2.value.sqrt(), rhs, Method::Simulation);
    report.b = Some(b);
    report.a = Some(a);
    report.k = single_degree(f);
    report.r_exp = Some(2.0);
    report.q_exp = Some(2.0);
    report.alpha = Some(0.5 * b);
    report.grid_id = evo.grid_id().to_string();
    Ok(report)
}

/// `||x|^{-b/2} e^{itD^a} f||_{L^2_{t,x}}` against `||D^{(b-a)/2} Lambda^{(1-b)/2} f||`
/// by direct space-time quadrature.
pub fn morawetz_ratio_numeric(
    f: &SpectralFunction,
    b: f64,
    a: f64,
    settings: &EvolutionSettings,
) -> Result<EstimateReport> {
    check_b(f, b, "morawetz")?;
    let evo = Evolution::new(f, a, settings)?;
    morawetz_ratio(&evo, f, b, a)
}

/// `R^{-1/2} ||e^{itD^a} f||_{L^2_t L^2(|x| < R)}` against `||D^{(1-a)/2} f||`,
/// one report per radius.
pub fn local_smoothing_ratio(
    f: &SpectralFunction,
    a: f64,
    radii: &[f64],
    settings: &EvolutionSettings,
) -> Result<Vec<EstimateReport>> {
    if radii.is_empty() || radii.iter().any(|&r| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::Invalid("ball radii must be positive and finite".into()));
    }
    let rhs = spectral_sobolev_norm(f, 0.5 * (1.0 - a), 0.0)?;
    let base = |lhs: f64, r: f64, grid: &str| {
        let mut report = EstimateReport::new(EstimateId::MorawetzLocal, f.n, lhs, rhs, Method::Simulation);
        report.a = Some(a);
        report.k = single_degree(f);
        report.r_exp = Some(r);
        report.grid_id = grid.to_string();
        report
    };
    if f.components().iter().all(|c| c.profile.is_zero()) {
        return Ok(radii.iter().map(|&r| base(0.0, r, "zero")).collect());
    }
    let mut settings = settings.clone();
    let r_max = radii.iter().copied().fold(0.0, f64::max);
    settings.radial_breaks.extend_from_slice(radii);
    settings.max_radius = Some(r_max);
    let evo = Evolution::new(f, a, &settings)?;
    radii
        .iter()
        .map(|&r| {
            let mass = evo.space_time(0.0, 2.0, r, TailModel::Fitted)?;
            Ok(base((mass.value / r).sqrt(), r, evo.grid_id()))
        })
        .collect()
}

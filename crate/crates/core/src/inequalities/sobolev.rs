use std::f64::consts::PI;

use num_complex::Complex64;

use super::{EstimateId, EstimateReport, Method};
use crate::error::{Error, Result};
use crate::modes::{spectral_sobolev_norm, RadialProfile, SpectralFunction};
use crate::quadrature::{gl16, gl8, graded_breaks};
use crate::transforms::hankel_inverse_at;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SobolevVariant {
    /// `sup_r r^{(n-b)/2} ||f(r .)||_{L^2_omega}` against `||D^{b/2} Lambda^{(1-b)/2} f||`.
    L2Omega,
    /// `||D^{-b/2} Lambda^{(b-1)/2} f||` against `||x|^{(b-n)/2} f||_{L^1_{r^{n-1}dr} L^2_omega}`.
    Dual,
    /// `sup_r r^{(n-b)/2} ||f(r .)||_{L^infty_omega}` against `||D^{b/2} Lambda^s f||`,
    /// for zonal data and `s > (n-b)/2`.
    ZonalInfty { s: f64 },
}

/// Orthonormal zonal harmonic of degree `k` on `S^{n-1}` at polar angle `theta`,
/// for `n` in `{2, 3}`.
pub fn zonal_harmonic(n: u32, k: u32, theta: f64) -> Result<f64> {
    match n {
        2 if k == 0 => Ok(1.0 / (2.0 * PI).sqrt()),
        2 => Ok((k as f64 * theta).cos() / PI.sqrt()),
        3 => {
            let x = theta.cos();
            let (mut p0, mut p1) = (1.0, x);
            if k == 0 {
                p1 = 1.0;
            } else {
                for j in 1..k {
                    let j = j as f64;
                    let p2 = ((2.0 * j + 1.0) * x * p1 - j * p0) / (j + 1.0);
                    p0 = p1;
                    p1 = p2;
                }
            }
            Ok(((2 * k + 1) as f64 / (4.0 * PI)).sqrt() * p1)
        }
        _ => Err(Error::Invalid(format!("zonal harmonics are implemented for n in {{2, 3}}, got {n}"))),
    }
}

/// Physical-side radial parts `f_k(r)`, sampled on a quadrature grid that
/// scales with the profiles.
struct Physical<'a> {
    f: &'a SpectralFunction,
    /// Smallest graded breakpoint.
    floor: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    values: Vec<Vec<Complex64>>,
    /// False when the grid stopped at its cap before the integrand decayed.
    decayed: bool,
}

impl<'a> Physical<'a> {
    fn new(f: &'a SpectralFunction, integrand: impl Fn(f64, &[Complex64]) -> f64) -> Result<Self> {
        let rho_hi = f
            .components()
            .iter()
            .map(|c| c.profile.essential_support(1e-12).1)
            .fold(0.0, f64::max);
        if !(rho_hi > 0.0) {
            return Err(Error::Invalid("spectral function has no frequency content".into()));
        }
        let r1 = 1.0 / rho_hi;
        let graded = graded_breaks(r1, 40);
        let mut phys = Self {
            f,
            floor: graded[0],
            nodes: Vec::new(),
            weights: Vec::new(),
            values: Vec::new(),
            decayed: true,
        };
        for w in graded.windows(2) {
            for (r, wt) in gl8().mapped(w[0], w[1]) {
                phys.push(r, wt)?;
            }
        }
        // Gaussian-family parts are analytic off the origin, so far out they
        // only decay; the panels may then grow geometrically
        let analytic = f
            .components()
            .iter()
            .all(|c| matches!(c.profile, RadialProfile::Gaussian { .. }));
        let cap = 1e4 * r1;
        let mut peak: f64 = 0.0;
        let mut raw_peak: f64 = 0.0;
        let mut lo = r1;
        loop {
            let width = if analytic && lo > 64.0 * r1 { 0.25 * lo } else { r1 };
            let start = phys.nodes.len();
            for (r, wt) in gl16().mapped(lo, lo + width) {
                phys.push(r, wt)?;
            }
            let panel = (start..phys.nodes.len())
                .map(|i| integrand(phys.nodes[i], &phys.values[i]).abs())
                .fold(0.0, f64::max);
            let raw = (start..phys.nodes.len())
                .map(|i| phys.values[i].iter().map(|z| z.norm()).sum::<f64>())
                .fold(0.0, f64::max);
            peak = peak.max(panel);
            raw_peak = raw_peak.max(raw);
            lo += width;
            // past the quadrature noise floor the weight would only amplify noise
            if (panel <= 1e-15 * peak || raw <= 1e-14 * raw_peak) && lo > 8.0 * r1 {
                break;
            }
            if lo > cap {
                if !analytic {
                    return Err(Error::Budget(format!(
                        "physical-side profile has not decayed by r = {cap}"
                    )));
                }
                phys.decayed = false;
                break;
            }
        }
        Ok(phys)
    }

    /// Power-law exponent `gamma` of `g ~ r^{-gamma}` over the last doubling of the grid.
    fn tail_exponent(&self, g: impl Fn(f64, &[Complex64]) -> f64) -> f64 {
        let last = self.nodes.len() - 1;
        let r_end = self.nodes[last];
        let mid = self.nodes.partition_point(|&r| r < 0.5 * r_end);
        let (ga, gb) = (g(self.nodes[mid], &self.values[mid]), g(r_end, &self.values[last]));
        -(gb / ga).ln() / (r_end / self.nodes[mid]).ln()
    }

    fn eval(&self, r: f64) -> Result<Vec<Complex64>> {
        self.f
            .components()
            .iter()
            .map(|c| hankel_inverse_at(&c.profile, &c.mode, r))
            .collect()
    }

    fn push(&mut self, r: f64, w: f64) -> Result<()> {
        let v = self.eval(r)?;
        self.nodes.push(r);
        self.weights.push(w);
        self.values.push(v);
        Ok(())
    }

    fn l2_omega(&self, v: &[Complex64]) -> f64 {
        self.f
            .components()
            .iter()
            .zip(v)
            .map(|(c, z)| c.weight as f64 * z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `sup_theta |sum_k i^k f_k Y_k(theta)|`.
    fn linf_omega(&self, v: &[Complex64]) -> Result<f64> {
        let n = self.f.n;
        let coef: Vec<(u32, Complex64)> = self
            .f
            .components()
            .iter()
            .zip(v)
            .map(|(c, z)| (c.mode.k, z * Complex64::i().powu(c.mode.k)))
            .collect();
        let at = |theta: f64| -> Result<f64> {
            let mut acc = Complex64::new(0.0, 0.0);
            for &(k, z) in &coef {
                acc += z * zonal_harmonic(n, k, theta)?;
            }
            Ok(acc.norm())
        };
        let k_max = coef.iter().map(|c| c.0).max().unwrap_or(0);
        let count = 64 * (k_max as usize + 1);
        let h = PI / count as f64;
        let mut best = (0.0, 0.0);
        for i in 0..=count {
            let th = i as f64 * h;
            let val = at(th)?;
            if val > best.0 {
                best = (val, th);
            }
        }
        let (val, _) = golden_max(at, (best.1 - h).max(0.0), (best.1 + h).min(PI))?;
        Ok(val.max(best.0))
    }
}

fn golden_max(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc > fd { (fc, c) } else { (fd, d) })
}

/// Largest `r^e g(r)` over the nodes, refined between the neighbouring nodes.
fn radial_sup(phys: &Physical, e: f64, g: impl Fn(&[Complex64]) -> Result<f64>) -> Result<f64> {
    let mut best = (0.0, 0usize);
    for (i, (r, v)) in phys.nodes.iter().zip(&phys.values).enumerate() {
        let val = r.powf(e) * g(v)?;
        if val > best.0 {
            best = (val, i);
        }
    }
    if !phys.decayed {
        let (r, v) = (*phys.nodes.last().unwrap(), phys.values.last().unwrap());
        if r.powf(e) * g(v)? > 1e-3 * best.0 {
            return Err(Error::Budget(format!("weighted profile is still large at r = {r}")));
        }
    }
    let i = best.1;
    let lo = if i == 0 { 0.5 * phys.nodes[0] } else { phys.nodes[i - 1] };
    let hi = phys.nodes[(i + 1).min(phys.nodes.len() - 1)];
    let (val, _) = golden_max(|r| Ok(r.powf(e) * g(&phys.eval(r)?)?), lo, hi)?;
    Ok(val.max(best.0))
}

pub fn sobolev_trace_ratio(f: &SpectralFunction, b: f64, variant: SobolevVariant) -> Result<EstimateReport> {
    let n = f.n;
    let nf = n as f64;
    let (id, name) = match variant {
        SobolevVariant::L2Omega => (EstimateId::SobolevInfty, "sobolev-infty"),
        SobolevVariant::Dual => (EstimateId::SobolevDual, "sobolev-dual"),
        SobolevVariant::ZonalInfty { .. } => (EstimateId::SobolevInftyZonal, "sobolev-infty-zonal"),
    };
    if !(b > 1.0 && b < nf) {
        return Err(Error::window(name, format!("need 1 < b < n (b = {b}, n = {n})")));
    }
    if f.components().iter().all(|c| c.profile.is_zero()) {
        return Err(Error::Invalid("zero spectral function".into()));
    }
    let e = 0.5 * (nf - b);
    let (lhs, rhs, grid) = match variant {
        SobolevVariant::L2Omega => {
            let phys = Physical::new(f, |r, v| r.powf(e) * v.iter().map(|z| z.norm()).sum::<f64>())?;
            let lhs = radial_sup(&phys, e, |v| Ok(phys.l2_omega(v)))?;
            (lhs, spectral_sobolev_norm(f, 0.5 * b, 0.5 * (1.0 - b))?, phys.nodes.len())
        }
        SobolevVariant::Dual => {
            let dens = |r: f64, v: &[Complex64]| r.powf(nf - 1.0 - e) * v.iter().map(|z| z.norm()).sum::<f64>();
            let phys = Physical::new(f, dens)?;
            let mut rhs = 0.0;
            for ((r, w), v) in phys.nodes.iter().zip(&phys.weights).zip(&phys.values) {
                rhs += w * r.powf(nf - 1.0 - e) * phys.l2_omega(v);
            }
            // below the graded grid |f| ~ |f(r0)| (r / r0)^k
            let k_min = f.components().iter().map(|c| c.mode.k).min().unwrap_or(0) as f64;
            let (r0, v0) = (phys.nodes[0], &phys.values[0]);
            let p = nf - e + k_min;
            rhs += phys.l2_omega(v0) * r0.powf(-k_min) * phys.floor.powf(p) / p;
            if !phys.decayed {
                let g = |r: f64, v: &[Complex64]| r.powf(nf - 1.0 - e) * phys.l2_omega(v);
                let gamma = phys.tail_exponent(g);
                if !(gamma > 1.0 + 1e-3) {
                    return Err(Error::Divergence(format!(
                        "dual norm integrand decays like r^-{gamma:.3}"
                    )));
                }
                let (r_end, v_end) = (*phys.nodes.last().unwrap(), phys.values.last().unwrap());
                rhs += g(r_end, v_end) * r_end / (gamma - 1.0);
            }
            (spectral_sobolev_norm(f, -0.5 * b, 0.5 * (b - 1.0))?, rhs, phys.nodes.len())
        }
        SobolevVariant::ZonalInfty { s } => {
            if !(n == 2 || n == 3) {
                return Err(Error::window(name, format!("zonal evaluation needs n in {{2, 3}}, got {n}")));
            }
            if f.components().iter().any(|c| c.weight != 1) {
                return Err(Error::window(name, "zonal data has one slot per degree"));
            }
            if !(s > e) {
                return Err(Error::window(name, format!("need s > (n-b)/2 = {e}, got s = {s}")));
            }
            let phys = Physical::new(f, |r, v| r.powf(e) * v.iter().map(|z| z.norm()).sum::<f64>())?;
            let lhs = radial_sup(&phys, e, |v| phys.linf_omega(v))?;
            (lhs, spectral_sobolev_norm(f, 0.5 * b, s)?, phys.nodes.len())
        }
    };
    let mut report = EstimateReport::new(id, n, lhs, rhs, Method::Quadrature);
    report.b = Some(b);
    report.k = match f.components() {
        [c] => Some(c.mode.k),
        _ => None,
    };
    report.alpha = Some(-e);
    report.grid_id = format!("phys:nr={grid}");
    Ok(report)
}

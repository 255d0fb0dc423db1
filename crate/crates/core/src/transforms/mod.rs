//! Hankel transforms on a fixed angular mode, the surface-measure extension,
//! and the propagator `e^{itD^a}` evaluated mode by mode.
//!
//! For a degree-`k` component with Bessel order `nu = k + (n-2)/2` and
//! `p = (n-2)/2`, the Fourier transform of `f_k(r) Y_k(omega)` is
//! `(-i)^k g_k(rho) Y_k(xi/|xi|)` with
//!
//! ```text
//! g_k(rho) = (2 pi)^{n/2} rho^{-p} int_0^inf f_k(r) J_nu(r rho) r^{n/2} dr,
//! ```
//!
//! and the inverse carries `(2 pi)^{-n/2}` and `i^k`. Phases are never folded
//! into stored profiles; they are returned as an exponent of `i`.

mod evolution;
mod oscillatory;

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modes::{Mode, RadialProfile, SampledProfile, SphereFunction};
use crate::parallel::{self, Parallelism};
use crate::quadrature::{gl16, GaussLegendre};
use crate::specfun::{bessel_j_scaled, EvalPolicy};

pub use evolution::{Evolution, EvolutionSettings, SpaceTimeIntegral, TailModel};
pub use oscillatory::{
    bessel_product_integral, oscillatory_integral, OscillatoryIntegral, OscillatoryIntegralSpec,
};

/// Relative level below which a profile is treated as zero when truncating.
pub const SUPPORT_EPS: f64 = 1e-16;

/// Largest phase change (radians) allowed across one 16-point panel.
const PANEL_PHASE: f64 = 6.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Logarithmic,
}

/// Radial nodes and weights made of Gauss-Legendre panels.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    r_min: f64,
    r_max: f64,
    spacing: Spacing,
    degree: usize,
    breaks: Vec<f64>,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    par: Parallelism,
}

impl RadialGrid {
    /// `count` nodes (rounded up to whole 16-point panels) on `[r_min, r_max]`.
    pub fn new(r_min: f64, r_max: f64, count: usize, spacing: Spacing) -> Result<Self> {
        Self::with_degree(r_min, r_max, count, spacing, 16)
    }

    pub fn with_degree(
        r_min: f64,
        r_max: f64,
        count: usize,
        spacing: Spacing,
        degree: usize,
    ) -> Result<Self> {
        if !(r_min > 0.0) || !(r_max > r_min) || !r_max.is_finite() {
            return Err(Error::Invalid(format!(
                "radial grid needs 0 < r_min < r_max (got {r_min}, {r_max})"
            )));
        }
        if count < 16 {
            return Err(Error::Invalid(format!("radial grid needs >= 16 nodes, got {count}")));
        }
        if degree < 8 {
            return Err(Error::Invalid(format!("panel degree {degree} is below 8")));
        }
        let panels = count.div_ceil(degree);
        let breaks: Vec<f64> = (0..=panels)
            .map(|i| {
                let s = i as f64 / panels as f64;
                match spacing {
                    Spacing::Linear => r_min + (r_max - r_min) * s,
                    Spacing::Logarithmic => r_min * (r_max / r_min).powf(s),
                }
            })
            .collect();
        let rule = GaussLegendre::new(degree);
        let mut nodes = Vec::with_capacity(panels * degree);
        let mut weights = Vec::with_capacity(panels * degree);
        for w in breaks.windows(2) {
            for (x, wt) in rule.mapped(w[0], w[1]) {
                nodes.push(x);
                weights.push(wt);
            }
        }
        Ok(Self {
            r_min,
            r_max,
            spacing,
            degree,
            breaks,
            nodes,
            weights,
            par: Parallelism::default(),
        })
    }

    pub fn with_parallelism(mut self, par: Parallelism) -> Self {
        self.par = par;
        self
    }

    pub fn parallelism(&self) -> Parallelism {
        self.par
    }

    /// Short stable label, e.g. `log:0.0001:1000:2048`.
    pub fn id(&self) -> String {
        let kind = match self.spacing {
            Spacing::Linear => "lin",
            Spacing::Logarithmic => "log",
        };
        format!("{kind}:{}:{}:{}", self.r_min, self.r_max, self.nodes.len())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn range(&self) -> (f64, f64) {
        (self.r_min, self.r_max)
    }

    /// Sample `f` on the nodes; the result interpolates panel by panel.
    pub fn sample(&self, values: Vec<Complex64>) -> Result<SampledProfile> {
        SampledProfile::new(self.nodes.clone(), values)?.with_blocks(self.degree)
    }

    /// `int |f(r)|^2 r^{n-1} dr` over the grid using the node values of `f`.
    pub fn mass(&self, profile: &RadialProfile, n: u32) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&r, &w)| w * profile.eval(r).norm_sqr() * r.powi(n as i32 - 1))
            .sum()
    }
}

impl Default for RadialGrid {
    /// Logarithmic, 2048 nodes on `[1e-4, 1e3]`.
    fn default() -> Self {
        Self::new(1e-4, 1e3, 2048, Spacing::Logarithmic).expect("default grid is valid")
    }
}

/// A transformed radial profile with its metadata.
#[derive(Debug, Clone)]
pub struct Transformed {
    pub mode: Mode,
    pub profile: RadialProfile,
    /// The omitted phase is `i^phase_power`.
    pub phase_power: i32,
    pub grid_id: String,
    /// Bound on the part of the input discarded by truncating its support.
    pub tail_bound: f64,
}

/// Unit-modulus factor `e^{i t s^a}` carried by the propagator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Phase {
    pub a: f64,
    pub t: f64,
}

impl Phase {
    fn at(&self, s: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.t * s.powf(self.a))
    }
}

/// `int_0^inf h(s) [e^{i t s^a}] s^{n-1} J_nu(x s) / (x s)^p ds` over the
/// essential support of `h`.
pub(crate) fn kernel_integral(
    h: &RadialProfile,
    mode: &Mode,
    x: f64,
    phase: Option<Phase>,
    policy: &EvalPolicy,
) -> Result<Complex64> {
    let pieces = h.pieces(SUPPORT_EPS);
    let rule = gl16();
    let p = mode.radial_power();
    let n1 = mode.n as i32 - 1;
    let mut acc = Complex64::new(0.0, 0.0);
    for w in pieces.windows(2) {
        let (u, v) = (w[0], w[1]);
        if !(v > u) {
            continue;
        }
        for (a, b) in split_by_phase(u, v, x, phase) {
            for (s, wt) in rule.mapped(a, b) {
                let mut term = h.eval(s) * (wt * s.powi(n1) * bessel_j_scaled(mode.nu, p, x * s, policy)?);
                if let Some(ph) = phase {
                    term *= ph.at(s);
                }
                acc += term;
            }
        }
    }
    Ok(acc)
}

/// Sub-panels of `[u, v]` over which the kernel phase `x s + t s^a` moves by at
/// most [`PANEL_PHASE`].
fn split_by_phase(u: f64, v: f64, x: f64, phase: Option<Phase>) -> Vec<(f64, f64)> {
    let psi = |s: f64| x * s + phase.map_or(0.0, |ph| ph.t.abs() * s.powf(ph.a));
    let total = psi(v) - psi(u);
    let count = ((total / PANEL_PHASE).ceil() as usize).max(1);
    if count == 1 {
        return vec![(u, v)];
    }
    let linear = phase.is_none_or(|ph| ph.a == 1.0 || ph.t == 0.0);
    let mut points = Vec::with_capacity(count + 1);
    points.push(u);
    for j in 1..count {
        let target = psi(u) + total * j as f64 / count as f64;
        let s = if linear {
            u + (v - u) * j as f64 / count as f64
        } else {
            // psi is increasing; bisect for the level set
            let (mut lo, mut hi) = (*points.last().unwrap(), v);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if psi(mid) < target { lo = mid } else { hi = mid }
            }
            0.5 * (lo + hi)
        };
        points.push(s);
    }
    points.push(v);
    points.windows(2).map(|w| (w[0], w[1])).collect()
}

/// Bound on `int_hi^inf |h(s)| s^{n-1} ds`, using `|J_nu(z) / z^p| <= 1`.
fn truncation_bound(h: &RadialProfile, n: u32) -> f64 {
    match h {
        RadialProfile::Gaussian {
            amplitude,
            power,
            width,
        } => {
            let (_, hi) = h.essential_support(SUPPORT_EPS);
            let q = (*power + n - 1) as f64;
            let slope = 2.0 * width * hi - q / hi;
            if slope <= 0.0 {
                return f64::INFINITY;
            }
            amplitude.abs() * hi.powf(q) * (-width * hi * hi).exp() / slope
        }
        RadialProfile::Sampled(_) => 0.0,
    }
}

fn transform(
    h: &RadialProfile,
    mode: &Mode,
    grid: &RadialGrid,
    prefactor: f64,
    phase_power: i32,
) -> Result<Transformed> {
    let policy = EvalPolicy::default();
    let values: Result<Vec<Complex64>> = parallel::map(grid.nodes(), grid.parallelism(), |&x| {
        Ok(kernel_integral(h, mode, x, None, &policy)? * prefactor)
    })
    .into_iter()
    .collect();
    let values = values?;
    let tail_bound = prefactor * truncation_bound(h, mode.n);
    let peak = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if tail_bound > 1e-10 * peak.max(f64::MIN_POSITIVE) && !h.is_zero() {
        return Err(Error::TailTolerance {
            bound: tail_bound,
            tolerance: 1e-10 * peak,
            context: format!("hankel transform of degree {} input", mode.k),
        });
    }
    let profile = grid.sample(values)?.with_origin_power(mode.k);
    Ok(Transformed {
        mode: *mode,
        profile: RadialProfile::Sampled(profile),
        phase_power,
        grid_id: grid.id(),
        tail_bound,
    })
}

/// Physical-side profile to frequency side, sampled on `grid`.
pub fn hankel_forward(f: &RadialProfile, mode: &Mode, grid: &RadialGrid) -> Result<Transformed> {
    let pre = (2.0 * PI).powf(0.5 * mode.n as f64);
    transform(f, mode, grid, pre, -(mode.k as i32))
}

/// Frequency-side profile back to physical side, sampled on `grid`.
pub fn hankel_inverse(g: &RadialProfile, mode: &Mode, grid: &RadialGrid) -> Result<Transformed> {
    let pre = (2.0 * PI).powf(-0.5 * mode.n as f64);
    transform(g, mode, grid, pre, mode.k as i32)
}

/// The inverse transform at a single radius.
pub fn hankel_inverse_at(g: &RadialProfile, mode: &Mode, r: f64) -> Result<Complex64> {
    let pre = (2.0 * PI).powf(-0.5 * mode.n as f64);
    Ok(kernel_integral(g, mode, r, None, &EvalPolicy::default())? * pre)
}

/// One `(k, l)` slot of the extension `\widehat{g d sigma}`.
#[derive(Debug, Clone)]
pub struct SurfaceComponent {
    pub mode: Mode,
    pub l: u64,
    pub profile: RadialProfile,
    pub phase_power: i32,
}

/// Mode-wise radial parts `a_{k,l} (2 pi)^{n/2} r^{-p} J_nu(r)` of the
/// extension of `g d sigma`, sampled on `grid`.
pub fn extend_surface_measure(g: &SphereFunction, grid: &RadialGrid) -> Result<Vec<SurfaceComponent>> {
    let policy = EvalPolicy::default();
    let pre = (2.0 * PI).powf(0.5 * g.n as f64);
    let mut out = Vec::new();
    for (k, l, a) in g.coefficients() {
        let mode = Mode::new(g.n, k)?;
        let p = mode.radial_power();
        let values: Result<Vec<Complex64>> = parallel::map(grid.nodes(), grid.parallelism(), |&r| {
            Ok(a * (pre * bessel_j_scaled(mode.nu, p, r, &policy)?))
        })
        .into_iter()
        .collect();
        out.push(SurfaceComponent {
            mode,
            l,
            profile: RadialProfile::Sampled(grid.sample(values?)?.with_origin_power(k)),
            phase_power: -(k as i32),
        });
    }
    Ok(out)
}

/// `u_k(t, r) = (2 pi)^{-n/2} int e^{i t rho^a} g(rho) r^{-p} J_nu(r rho) rho^{n/2} drho`.
/// The global phase `i^k` is omitted.
pub fn propagate_mode(mode: &Mode, profile: &RadialProfile, a: f64, t: f64, r: f64) -> Result<Complex64> {
    if !(a > 0.0) {
        return Err(Error::Invalid(format!("dispersion exponent a = {a} must be > 0")));
    }
    if !(r >= 0.0) || !t.is_finite() {
        return Err(Error::Invalid(format!("need r >= 0 and finite t (got r = {r}, t = {t})")));
    }
    let pre = (2.0 * PI).powf(-0.5 * mode.n as f64);
    let phase = (t != 0.0).then_some(Phase { a, t });
    Ok(kernel_integral(profile, mode, r, phase, &EvalPolicy::default())? * pre)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_layout() {
        let g = RadialGrid::default();
        assert_eq!(g.nodes().len(), 2048);
        assert_eq!(g.id(), "log:0.0001:1000:2048");
        assert!(g.weights().iter().all(|&w| w > 0.0));
        let total: f64 = g.weights().iter().sum();
        assert!((total - (1e3 - 1e-4)).abs() < 1e-9);
        assert!(RadialGrid::new(1.0, 1.0, 32, Spacing::Linear).is_err());
        assert!(RadialGrid::new(1.0, 2.0, 8, Spacing::Linear).is_err());
    }

    #[test]
    fn phase_split_respects_budget() {
        let parts = split_by_phase(0.0, 10.0, 50.0, Some(Phase { a: 2.0, t: 3.0 }));
        let psi = |s: f64| 50.0 * s + 3.0 * s * s;
        for (a, b) in &parts {
            assert!(psi(*b) - psi(*a) <= PANEL_PHASE + 1e-6);
        }
        let parts = split_by_phase(0.0, 4.0, 0.0, Some(Phase { a: 0.5, t: 100.0 }));
        let psi = |s: f64| 100.0 * s.sqrt();
        for (a, b) in &parts {
            assert!(psi(*b) - psi(*a) <= PANEL_PHASE + 1e-6);
        }
    }
}

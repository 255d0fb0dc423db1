//! Angular modes, spherical-harmonic bookkeeping and frequency-side Sobolev norms.
//!
//! A [`SpectralFunction`] stores one representative `l`-slot per degree `k`
//! together with a multiplicity weight; every norm implemented here depends
//! only on `k` and on `sum_l |a_{k,l}|^2`.
//!
//! Fourier convention: forward `int e^{-i x.xi} f dx`, inverse carries
//! `(2 pi)^{-n}`, so `||f||^2 = (2 pi)^{-n} ||f^||^2`.

mod format;
mod sampled;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::log_gamma;

pub use format::{parse_spectral_function, write_spectral_function};
pub use sampled::{Interpolation, SampledProfile};

/// Number of linearly independent spherical harmonics of degree `k` on `S^{n-1}`.
pub fn mode_dimension(n: u32, k: u32) -> Result<u64> {
    if n < 2 {
        return Err(Error::domain("mode_dimension", format!("n = {n} must be >= 2")));
    }
    if k == 0 {
        return Ok(1);
    }
    let overflow = || Error::Overflow(format!("d(k) for n = {n}, k = {k}"));
    // C(n + k - 3, k - 1), exact at every step.
    let top = (n + k - 3) as u128;
    let r = (k - 1) as u128;
    let r = r.min(top - r);
    let mut binom: u128 = 1;
    for i in 0..r {
        binom = binom.checked_mul(top - i).ok_or_else(overflow)? / (i + 1);
    }
    let num = binom
        .checked_mul((2 * k + n - 2) as u128)
        .ok_or_else(overflow)?;
    let d = num / k as u128;
    u64::try_from(d).map_err(|_| overflow())
}

/// Angular weight used for `Lambda_omega`-type norms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum WeightMode {
    /// `sqrt(1 + k (k + n - 2))`, the exact eigenvalue of `Lambda_omega`.
    ExactLambda,
    /// `<k> = sqrt(1 + k^2)`, equivalent up to constants.
    BracketK,
}

impl WeightMode {
    pub fn weight(self, n: u32, k: u32) -> f64 {
        let k = k as f64;
        match self {
            WeightMode::ExactLambda => (1.0 + k * (k + n as f64 - 2.0)).sqrt(),
            WeightMode::BracketK => (1.0 + k * k).sqrt(),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            WeightMode::ExactLambda => "exact-lambda",
            WeightMode::BracketK => "bracket-k",
        }
    }
}

impl std::str::FromStr for WeightMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact-lambda" => Ok(WeightMode::ExactLambda),
            "bracket-k" => Ok(WeightMode::BracketK),
            _ => Err(Error::Invalid(format!("unknown weight mode {s:?}"))),
        }
    }
}

/// An angular frequency: degree `k` in dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub n: u32,
    pub k: u32,
    /// Bessel order `k + (n-2)/2`.
    pub nu: f64,
    /// `k (k + n - 2)`.
    pub eig: f64,
    /// `sqrt(1 + eig)`.
    pub lam: f64,
    /// Multiplicity `d(k)`.
    pub dim: u64,
}

impl Mode {
    pub fn new(n: u32, k: u32) -> Result<Self> {
        let dim = mode_dimension(n, k)?;
        let kf = k as f64;
        let eig = kf * (kf + n as f64 - 2.0);
        Ok(Self {
            n,
            k,
            nu: kf + 0.5 * (n as f64 - 2.0),
            eig,
            lam: (1.0 + eig).sqrt(),
            dim,
        })
    }

    /// `(n-2)/2`, the power stripped from `J_nu` in radial kernels.
    pub fn radial_power(&self) -> f64 {
        0.5 * (self.n as f64 - 2.0)
    }

    pub fn weight(&self, mode: WeightMode) -> f64 {
        mode.weight(self.n, self.k)
    }
}

/// Function on `S^{n-1}` given by finitely many harmonic coefficients `a_{k,l}`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SphereFunction {
    pub n: u32,
    coefficients: BTreeMap<(u32, u64), Complex64>,
}

impl SphereFunction {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid(format!("dimension {n} must be >= 2")));
        }
        Ok(Self {
            n,
            coefficients: BTreeMap::new(),
        })
    }

    /// Set `a_{k,l}`; `l` runs over `1..=d(k)`.
    pub fn set(&mut self, k: u32, l: u64, a: Complex64) -> Result<()> {
        let d = mode_dimension(self.n, k)?;
        if l == 0 || l > d {
            return Err(Error::Invalid(format!(
                "slot l = {l} outside [1, {d}] for degree {k}"
            )));
        }
        if a == Complex64::new(0.0, 0.0) {
            self.coefficients.remove(&(k, l));
        } else {
            self.coefficients.insert((k, l), a);
        }
        Ok(())
    }

    pub fn with(mut self, k: u32, l: u64, a: f64) -> Result<Self> {
        self.set(k, l, Complex64::new(a, 0.0))?;
        Ok(self)
    }

    pub fn coefficients(&self) -> impl Iterator<Item = (u32, u64, Complex64)> + '_ {
        self.coefficients.iter().map(|(&(k, l), &a)| (k, l, a))
    }

    /// `sum_l |a_{k,l}|^2` per degree.
    pub fn degree_mass(&self) -> BTreeMap<u32, f64> {
        let mut out = BTreeMap::new();
        for (k, _, a) in self.coefficients() {
            *out.entry(k).or_insert(0.0) += a.norm_sqr();
        }
        out
    }

    pub fn l2_norm(&self) -> f64 {
        self.coefficients().map(|(_, _, a)| a.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `H^s` norm on the sphere: `(sum w_k^{2s} |a_{k,l}|^2)^{1/2}`.
pub fn sphere_h_norm(g: &SphereFunction, s: f64, mode: WeightMode) -> f64 {
    g.degree_mass()
        .into_iter()
        .map(|(k, mass)| mode.weight(g.n, k).powf(2.0 * s) * mass)
        .sum::<f64>()
        .sqrt()
}

/// Radial coefficient function of one angular component.
#[derive(Debug, Clone, PartialEq)]
pub enum RadialProfile {
    /// `amplitude * rho^power * exp(-width rho^2)`.
    Gaussian {
        amplitude: f64,
        power: u32,
        width: f64,
    },
    /// Values on a grid; see [`SampledProfile`].
    Sampled(SampledProfile),
}

impl RadialProfile {
    pub fn gaussian(amplitude: f64, power: u32, width: f64) -> Result<Self> {
        if !(width > 0.0) || !width.is_finite() || !amplitude.is_finite() {
            return Err(Error::Invalid(format!(
                "gaussian profile needs finite amplitude and width > 0 (got {amplitude}, {width})"
            )));
        }
        Ok(RadialProfile::Gaussian {
            amplitude,
            power,
            width,
        })
    }

    /// Piecewise-cubic profile, zero outside the grid.
    pub fn sampled(grid: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        Ok(RadialProfile::Sampled(SampledProfile::new(grid, values)?))
    }

    pub fn eval(&self, rho: f64) -> Complex64 {
        match self {
            RadialProfile::Gaussian {
                amplitude,
                power,
                width,
            } => Complex64::new(amplitude * rho.powi(*power as i32) * (-width * rho * rho).exp(), 0.0),
            RadialProfile::Sampled(s) => s.eval(rho),
        }
    }

    pub fn is_real(&self) -> bool {
        match self {
            RadialProfile::Gaussian { .. } => true,
            RadialProfile::Sampled(s) => s.is_real(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RadialProfile::Gaussian { amplitude, .. } => *amplitude == 0.0,
            RadialProfile::Sampled(s) => s.is_zero(),
        }
    }

    /// Interval outside of which `|profile|` stays below `rel_eps` times its maximum.
    pub fn essential_support(&self, rel_eps: f64) -> (f64, f64) {
        match self {
            RadialProfile::Gaussian { power, width, .. } => {
                // rho^m e^{-w rho^2} peaks at sqrt(m / 2w)
                let m = *power as f64;
                let peak = (m / (2.0 * width)).sqrt();
                let log_at = |r: f64| {
                    if r == 0.0 {
                        if m == 0.0 { 0.0 } else { f64::NEG_INFINITY }
                    } else {
                        m * r.ln() - width * r * r
                    }
                };
                let cut = log_at(peak) + rel_eps.ln();
                let mut hi = peak.max(1.0 / width.sqrt());
                while log_at(hi) > cut {
                    hi *= 1.05;
                }
                let mut lo = 0.0;
                if m > 0.0 {
                    lo = peak;
                    while lo > 1e-300 && log_at(lo) > cut {
                        lo *= 0.5;
                    }
                }
                (lo, hi)
            }
            RadialProfile::Sampled(s) => s.support(rel_eps),
        }
    }

    /// Breakpoints between which the profile is smooth, covering its essential support.
    pub fn pieces(&self, rel_eps: f64) -> Vec<f64> {
        let (lo, hi) = self.essential_support(rel_eps);
        match self {
            RadialProfile::Gaussian { width, .. } => {
                // panels no wider than half the natural length scale
                let count = (((hi - lo) * width.sqrt() * 2.0).ceil() as usize).max(4);
                (0..=count).map(|i| lo + (hi - lo) * i as f64 / count as f64).collect()
            }
            RadialProfile::Sampled(s) => {
                let mut out: Vec<f64> = s.pieces().into_iter().filter(|&x| x > lo && x < hi).collect();
                out.insert(0, lo);
                out.push(hi);
                out.dedup();
                out
            }
        }
    }

    /// The profile `rho -> profile(rho / lambda)`.
    pub fn dilated(&self, lambda: f64) -> Self {
        match self {
            RadialProfile::Gaussian {
                amplitude,
                power,
                width,
            } => RadialProfile::Gaussian {
                amplitude: amplitude / lambda.powi(*power as i32),
                power: *power,
                width: width / (lambda * lambda),
            },
            RadialProfile::Sampled(s) => RadialProfile::Sampled(s.dilated(lambda)),
        }
    }

    /// `c * profile`.
    pub fn scaled(&self, c: f64) -> Self {
        match self {
            RadialProfile::Gaussian {
                amplitude,
                power,
                width,
            } => RadialProfile::Gaussian {
                amplitude: amplitude * c,
                power: *power,
                width: *width,
            },
            RadialProfile::Sampled(s) => RadialProfile::Sampled(s.scaled(c)),
        }
    }

    /// `int_0^inf |profile(rho)|^2 rho^{exponent - 1} drho`.
    pub fn weighted_mass(&self, exponent: f64) -> Result<f64> {
        match self {
            RadialProfile::Gaussian {
                amplitude,
                power,
                width,
            } => {
                if *amplitude == 0.0 {
                    return Ok(0.0);
                }
                let e = exponent + 2.0 * *power as f64;
                if !(e > 0.0) {
                    return Err(Error::Divergence(format!(
                        "int rho^{} exp(-2 w rho^2) diverges at 0",
                        e - 1.0
                    )));
                }
                let c = 2.0 * width;
                let ln = 2.0 * amplitude.abs().ln() + log_gamma(0.5 * e)? - 0.5 * e * c.ln();
                Ok(0.5 * ln.exp())
            }
            RadialProfile::Sampled(s) => s.weighted_mass(exponent),
        }
    }
}

/// One angular component: a mode, its frequency-side radial profile, and the
/// number of `l`-slots sharing that profile.
#[derive(Debug, Clone, PartialEq)]
pub struct Component {
    pub mode: Mode,
    pub profile: RadialProfile,
    pub weight: u64,
}

/// Finite sum of angular components, profiles on the frequency side.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralFunction {
    pub n: u32,
    components: Vec<Component>,
}

impl SpectralFunction {
    pub fn new(n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid(format!("dimension {n} must be >= 2")));
        }
        Ok(Self {
            n,
            components: Vec::new(),
        })
    }

    pub fn single(n: u32, k: u32, profile: RadialProfile) -> Result<Self> {
        let mut f = Self::new(n)?;
        f.push(k, profile, 1)?;
        Ok(f)
    }

    pub fn push(&mut self, k: u32, profile: RadialProfile, weight: u64) -> Result<()> {
        let mode = Mode::new(self.n, k)?;
        if weight == 0 || weight > mode.dim {
            return Err(Error::Invalid(format!(
                "weight {weight} outside [1, {}] for degree {k}",
                mode.dim
            )));
        }
        if self.components.iter().any(|c| c.mode.k == k) {
            return Err(Error::Invalid(format!("degree {k} appears twice")));
        }
        self.components.push(Component {
            mode,
            profile,
            weight,
        });
        self.components.sort_by_key(|c| c.mode.k);
        Ok(())
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// `f(lambda x)` on the physical side, i.e. `lambda^{-n} f^(xi / lambda)`.
    pub fn rescaled(&self, lambda: f64) -> Self {
        let factor = lambda.powi(-(self.n as i32));
        Self {
            n: self.n,
            components: self
                .components
                .iter()
                .map(|c| Component {
                    mode: c.mode,
                    profile: c.profile.dilated(lambda).scaled(factor),
                    weight: c.weight,
                })
                .collect(),
        }
    }
}

/// `||D^s Lambda_omega^m f||_{L^2}` with exact eigenvalue weights.
pub fn spectral_sobolev_norm(f: &SpectralFunction, s: f64, m: f64) -> Result<f64> {
    spectral_sobolev_norm_with(f, s, m, WeightMode::ExactLambda)
}

/// As [`spectral_sobolev_norm`] with a chosen angular weight.
pub fn spectral_sobolev_norm_with(
    f: &SpectralFunction,
    s: f64,
    m: f64,
    mode: WeightMode,
) -> Result<f64> {
    let n = f.n as f64;
    let mut total = 0.0;
    for c in f.components() {
        let radial = c.profile.weighted_mass(2.0 * s + n)?;
        total += c.weight as f64 * c.mode.weight(mode).powf(2.0 * m) * radial;
    }
    Ok(((2.0 * PI).powf(-n) * total).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn dimension_examples() {
        assert_eq!(mode_dimension(3, 0).unwrap(), 1);
        assert_eq!(mode_dimension(3, 2).unwrap(), 5);
        assert_eq!(mode_dimension(2, 3).unwrap(), 2);
        assert_eq!(mode_dimension(2, 0).unwrap(), 1);
        // n = 4: d(k) = (k+1)^2
        for k in 0..30 {
            assert_eq!(mode_dimension(4, k).unwrap(), ((k + 1) * (k + 1)) as u64);
        }
        assert!(mode_dimension(1, 3).is_err());
    }

    #[test]
    fn dimension_overflow_is_reported() {
        assert!(matches!(mode_dimension(200, 200), Err(Error::Overflow(_))));
    }

    #[test]
    fn sphere_norm_examples() {
        let g = SphereFunction::new(3).unwrap().with(0, 1, 1.0).unwrap();
        for s in [-1.0, 0.0, 2.5] {
            assert_eq!(sphere_h_norm(&g, s, WeightMode::ExactLambda), 1.0);
            assert_eq!(sphere_h_norm(&g, s, WeightMode::BracketK), 1.0);
        }
        let g = SphereFunction::new(3).unwrap().with(1, 1, 1.0).unwrap();
        assert_relative_eq!(
            sphere_h_norm(&g, 1.0, WeightMode::ExactLambda),
            3f64.sqrt(),
            max_relative = 1e-15
        );
        let g = SphereFunction::new(3)
            .unwrap()
            .with(0, 1, 3.0)
            .unwrap()
            .with(1, 2, 4.0)
            .unwrap();
        assert_eq!(sphere_h_norm(&g, 0.0, WeightMode::ExactLambda), 5.0);
        assert_eq!(sphere_h_norm(&g, 0.0, WeightMode::BracketK), 5.0);
    }

    #[test]
    fn sphere_slot_range_checked() {
        let mut g = SphereFunction::new(3).unwrap();
        assert!(g.set(2, 6, Complex64::new(1.0, 0.0)).is_err());
        assert!(g.set(2, 0, Complex64::new(1.0, 0.0)).is_err());
        assert!(g.set(2, 5, Complex64::new(1.0, 0.0)).is_ok());
    }

    #[test]
    fn gaussian_norm_example() {
        // (2 pi)^-3 int rho^2 e^{-2 rho^2} = (2 pi)^-3 sqrt(pi/2)/8
        let f = SpectralFunction::single(3, 0, RadialProfile::gaussian(1.0, 0, 1.0).unwrap())
            .unwrap();
        let want = ((2.0 * PI).powi(-3) * (PI / 2.0).sqrt() / 8.0).sqrt();
        assert_relative_eq!(
            spectral_sobolev_norm(&f, 0.0, 0.0).unwrap(),
            want,
            max_relative = 1e-14
        );
        for m in [-1.0, 0.5, 3.0] {
            assert_eq!(
                spectral_sobolev_norm(&f, 0.3, m).unwrap(),
                spectral_sobolev_norm(&f, 0.3, 0.0).unwrap()
            );
        }
    }

    #[test]
    fn divergent_norm_is_an_error() {
        let f = SpectralFunction::single(2, 0, RadialProfile::gaussian(1.0, 0, 1.0).unwrap())
            .unwrap();
        assert!(matches!(
            spectral_sobolev_norm(&f, -1.0, 0.0),
            Err(Error::Divergence(_))
        ));
    }

    #[test]
    fn dilation_scaling_law() {
        // g(rho/lambda) multiplies the norm by lambda^{(n+2s)/2}
        let p = RadialProfile::gaussian(1.3, 2, 0.7).unwrap();
        let n = 3;
        let s = 0.4;
        let f = SpectralFunction::single(n, 1, p.clone()).unwrap();
        let g = SpectralFunction::single(n, 1, p.dilated(2.0)).unwrap();
        let ratio = spectral_sobolev_norm(&g, s, 0.2).unwrap() / spectral_sobolev_norm(&f, s, 0.2).unwrap();
        assert_relative_eq!(ratio, 2f64.powf((n as f64 + 2.0 * s) / 2.0), max_relative = 1e-13);
    }

    #[test]
    fn sampled_profile_matches_parametric_mass() {
        let p = RadialProfile::gaussian(1.0, 1, 1.0).unwrap();
        let grid: Vec<f64> = (0..4000).map(|i| 1e-4 * 1.005f64.powi(i)).filter(|&x| x < 12.0).collect();
        let values = grid.iter().map(|&x| p.eval(x)).collect();
        let q = RadialProfile::sampled(grid, values).unwrap();
        assert_relative_eq!(
            q.weighted_mass(3.0).unwrap(),
            p.weighted_mass(3.0).unwrap(),
            max_relative = 1e-9
        );
    }

    #[test]
    fn sampled_validation() {
        let g: Vec<f64> = (1..5).map(f64::from).collect();
        let v = vec![Complex64::new(1.0, 0.0); 4];
        assert!(RadialProfile::sampled(g, v).is_err());
        let g = vec![1.0, 2.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0];
        let v = vec![Complex64::new(1.0, 0.0); 8];
        assert!(RadialProfile::sampled(g, v).is_err());
    }

    #[test]
    fn weight_modes_are_equivalent() {
        // bracket/exact ratio stays within fixed constants for n = 3
        let mut lo = f64::INFINITY;
        let mut hi: f64 = 0.0;
        for k in 0..=500 {
            let r = WeightMode::BracketK.weight(3, k) / WeightMode::ExactLambda.weight(3, k);
            lo = lo.min(r);
            hi = hi.max(r);
        }
        assert!(lo >= 0.8 && hi <= 1.0, "{lo} {hi}");
    }
}

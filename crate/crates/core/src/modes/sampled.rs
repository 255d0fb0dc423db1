use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{gl16, gl8};

/// How a sampled profile is evaluated between its nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Interpolation {
    /// Local cubic through the four nearest nodes.
    Cubic,
    /// Consecutive blocks of `d` nodes, each interpolated by one polynomial of
    /// degree `d - 1`. Meant for nodes that are Gauss-Legendre points of panels,
    /// where the interpolant is spectrally accurate.
    Blocks(usize),
}

/// Radial function known on a strictly increasing positive grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledProfile {
    grid: Vec<f64>,
    values: Vec<Complex64>,
    rule: Interpolation,
    origin_power: Option<u32>,
    bary: Vec<f64>,
}

impl SampledProfile {
    pub fn new(grid: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if grid.len() < 8 {
            return Err(Error::Invalid(format!(
                "sampled profile needs >= 8 points, got {}",
                grid.len()
            )));
        }
        if grid.len() != values.len() {
            return Err(Error::Invalid("grid and values lengths differ".into()));
        }
        if !(grid[0] > 0.0) || grid.windows(2).any(|w| !(w[1] > w[0])) || !grid[grid.len() - 1].is_finite() {
            return Err(Error::Invalid(
                "sampled grid must be positive, finite and strictly increasing".into(),
            ));
        }
        if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Invalid("sampled values must be finite".into()));
        }
        Ok(Self {
            grid,
            values,
            rule: Interpolation::Cubic,
            origin_power: None,
            bary: Vec::new(),
        })
    }

    /// Switch to block interpolation with `degree` nodes per block.
    pub fn with_blocks(mut self, degree: usize) -> Result<Self> {
        if degree < 4 || !self.grid.len().is_multiple_of(degree) {
            return Err(Error::Invalid(format!(
                "{} nodes do not split into blocks of {degree} (need degree >= 4)",
                self.grid.len()
            )));
        }
        self.bary = Vec::with_capacity(self.grid.len());
        for block in self.grid.chunks(degree) {
            let (c, h) = block_frame(block);
            for (j, &xj) in block.iter().enumerate() {
                let xj = (xj - c) / h;
                let mut prod = 1.0;
                for (m, &xm) in block.iter().enumerate() {
                    if m != j {
                        prod *= xj - (xm - c) / h;
                    }
                }
                self.bary.push(1.0 / prod);
            }
        }
        self.rule = Interpolation::Blocks(degree);
        Ok(self)
    }

    /// Below the first node, continue as `values[0] (rho / grid[0])^power`
    /// instead of zero.
    pub fn with_origin_power(mut self, power: u32) -> Self {
        self.origin_power = Some(power);
        self
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn rule(&self) -> Interpolation {
        self.rule
    }

    pub fn origin_power(&self) -> Option<u32> {
        self.origin_power
    }

    fn first(&self) -> f64 {
        self.grid[0]
    }

    fn last(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        if x.is_nan() || x > self.last() || x < 0.0 {
            return zero;
        }
        if x < self.first() {
            return match self.origin_power {
                Some(p) => self.values[0] * (x / self.first()).powi(p as i32),
                None => zero,
            };
        }
        match self.rule {
            Interpolation::Cubic => cubic(&self.grid, &self.values, x),
            Interpolation::Blocks(d) => self.eval_block(d, x),
        }
    }

    fn eval_block(&self, d: usize, x: f64) -> Complex64 {
        let i = match self.grid.binary_search_by(|g| g.total_cmp(&x)) {
            Ok(i) => return self.values[i],
            Err(i) => i - 1,
        };
        let mut b = i / d;
        // in the gap between two blocks, use the nearer one
        if i % d == d - 1 && i + 1 < self.grid.len() && self.grid[i + 1] - x < x - self.grid[i] {
            b += 1;
        }
        let range = b * d..(b + 1) * d;
        let block = &self.grid[range.clone()];
        let (c, h) = block_frame(block);
        let xs = (x - c) / h;
        let mut num = Complex64::new(0.0, 0.0);
        let mut den = 0.0;
        for ((&xj, &yj), &wj) in block.iter().zip(&self.values[range.clone()]).zip(&self.bary[range]) {
            let q = wj / (xs - (xj - c) / h);
            num += yj * q;
            den += q;
        }
        num / den
    }

    /// Breakpoints between which the interpolant is smooth, from the first to
    /// the last node.
    pub fn pieces(&self) -> Vec<f64> {
        match self.rule {
            Interpolation::Cubic => self.grid.clone(),
            Interpolation::Blocks(d) => {
                let mut out = Vec::with_capacity(2 * self.grid.len() / d);
                for block in self.grid.chunks(d) {
                    out.push(block[0]);
                    out.push(block[d - 1]);
                }
                out
            }
        }
    }

    /// Smallest node range outside which every value is below `rel_eps` times
    /// the largest magnitude.
    pub fn support(&self, rel_eps: f64) -> (f64, f64) {
        let peak = self.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return (self.first(), self.first());
        }
        let cut = peak * rel_eps;
        let lo = self.values.iter().position(|v| v.norm() > cut).unwrap_or(0);
        let hi = self.values.iter().rposition(|v| v.norm() > cut).unwrap_or(0);
        let lo = lo.saturating_sub(1);
        let hi = (hi + 1).min(self.grid.len() - 1);
        let lo = if lo == 0 && self.origin_power.is_some() { 0.0 } else { self.grid[lo] };
        (lo, self.grid[hi])
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.norm_sqr() == 0.0)
    }

    pub fn dilated(&self, lambda: f64) -> Self {
        let mut out = self.clone();
        out.grid.iter_mut().for_each(|g| *g *= lambda);
        out
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= c);
        out
    }

    /// `int_0^inf |g|^2 rho^{exponent - 1} drho` with the interpolant.
    pub fn weighted_mass(&self, exponent: f64) -> Result<f64> {
        let mut acc = 0.0;
        if let Some(p) = self.origin_power {
            let e = exponent + 2.0 * p as f64;
            let v0 = self.values[0].norm_sqr();
            if v0 > 0.0 {
                if !(e > 0.0) {
                    return Err(Error::Divergence(format!(
                        "sampled profile ~ rho^{p} near 0 makes rho^{} non-integrable",
                        e - 1.0
                    )));
                }
                acc += v0 * self.first().powf(exponent) / e;
            }
        }
        let rule = match self.rule {
            Interpolation::Cubic => gl8(),
            Interpolation::Blocks(_) => gl16(),
        };
        for w in self.pieces().windows(2) {
            acc += rule.integrate(w[0], w[1], |x| self.eval(x).norm_sqr() * x.powf(exponent - 1.0));
        }
        Ok(acc)
    }
}

fn block_frame(block: &[f64]) -> (f64, f64) {
    let a = block[0];
    let b = block[block.len() - 1];
    (0.5 * (a + b), 0.5 * (b - a))
}

fn cubic(grid: &[f64], values: &[Complex64], x: f64) -> Complex64 {
    let n = grid.len();
    let i = match grid.binary_search_by(|g| g.total_cmp(&x)) {
        Ok(i) => return values[i],
        Err(i) => i - 1,
    };
    let start = i.saturating_sub(1).min(n - 4);
    let xs = &grid[start..start + 4];
    let ys = &values[start..start + 4];
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..4 {
        let mut basis = 1.0;
        for m in 0..4 {
            if m != j {
                basis *= (x - xs[m]) / (xs[j] - xs[m]);
            }
        }
        acc += ys[j] * basis;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gl16;

    fn panel_nodes(breaks: &[f64]) -> Vec<f64> {
        breaks
            .windows(2)
            .flat_map(|w| gl16().mapped(w[0], w[1]).map(|(x, _)| x).collect::<Vec<_>>())
            .collect()
    }

    #[test]
    fn block_interpolation_is_spectral() {
        let breaks: Vec<f64> = (0..=20).map(|i| 0.01 + 0.5 * i as f64).collect();
        let grid = panel_nodes(&breaks);
        let f = |x: f64| Complex64::new((-x * x / 4.0).exp() * x.cos(), x.sin());
        let values = grid.iter().map(|&x| f(x)).collect();
        let p = SampledProfile::new(grid, values).unwrap().with_blocks(16).unwrap();
        for i in 0..997 {
            let x = 0.02 + i as f64 * 0.00997;
            assert!((p.eval(x) - f(x)).norm() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn origin_extension() {
        let grid: Vec<f64> = (1..=8).map(|i| i as f64).collect();
        let values = grid.iter().map(|&x| Complex64::new(x * x, 0.0)).collect();
        let p = SampledProfile::new(grid, values).unwrap();
        assert_eq!(p.eval(0.5), Complex64::new(0.0, 0.0));
        let p = p.with_origin_power(2);
        assert!((p.eval(0.5).re - 0.25).abs() < 1e-15);
        // exact mass of rho^4 rho^{e-1} below 1 is 1/(e+4)
        let below = p.weighted_mass(3.0).unwrap();
        let above = SampledProfile::new(p.grid().to_vec(), p.values().to_vec())
            .unwrap()
            .weighted_mass(3.0)
            .unwrap();
        assert!((below - above - 1.0 / 7.0).abs() < 1e-9, "{below} {above}");
    }

    #[test]
    fn block_layout_checked() {
        let grid: Vec<f64> = (1..=20).map(|i| i as f64).collect();
        let values = vec![Complex64::new(1.0, 0.0); 20];
        assert!(SampledProfile::new(grid, values).unwrap().with_blocks(16).is_err());
    }
}

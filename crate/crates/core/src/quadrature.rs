//! Composite Gauss-Legendre quadrature shared by the transform and estimate code.

use std::ops::{Add, Mul};
use std::sync::OnceLock;

use num_traits::Zero;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be >= 1");
        let mut nodes = vec![0.0; order];
        let mut weights = vec![0.0; order];
        let n = order as f64;
        for i in 0..order.div_ceil(2) {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(order, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(order, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[order - 1 - i] = x;
            weights[i] = w;
            weights[order - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(x, w)| (mid + half * x, half * w))
    }

    /// Integral of `f` over `[a, b]` with this rule.
    pub fn integrate<T, F>(&self, a: f64, b: f64, mut f: F) -> T
    where
        T: Zero + Add<Output = T> + Mul<f64, Output = T>,
        F: FnMut(f64) -> T,
    {
        let mut acc = T::zero();
        for (x, w) in self.mapped(a, b) {
            acc = acc + f(x) * w;
        }
        acc
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Shared 16-point rule.
pub fn gl16() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(16))
}

/// Shared 8-point rule.
pub fn gl8() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(8))
}

/// Breakpoints `0 < t0 2^-levels < ... < t0 / 2 < t0`, graded toward the origin.
pub fn graded_breaks(t0: f64, levels: usize) -> Vec<f64> {
    let mut out: Vec<f64> = (0..=levels).map(|j| t0 * 0.5f64.powi(j as i32)).collect();
    out.reverse();
    out
}

/// Split `[a, b]` into panels no wider than `max_width`.
pub fn uniform_breaks(a: f64, b: f64, max_width: f64) -> Vec<f64> {
    let count = (((b - a) / max_width).ceil() as usize).max(1);
    let h = (b - a) / count as f64;
    let mut v: Vec<f64> = (0..count).map(|i| a + h * i as f64).collect();
    v.push(b);
    v
}

/// Integral over consecutive panels given by `breaks`.
pub fn integrate_breaks<T, F>(rule: &GaussLegendre, breaks: &[f64], mut f: F) -> T
where
    T: Zero + Add<Output = T> + Mul<f64, Output = T>,
    F: FnMut(f64) -> T,
{
    let mut acc = T::zero();
    for w in breaks.windows(2) {
        acc = acc + rule.integrate(w[0], w[1], &mut f);
    }
    acc
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Adaptive {
    pub value: f64,
    /// Sum of panel-to-halves differences, an error indicator.
    pub error: f64,
    pub panels: usize,
}

/// Adaptive 16-point Gauss-Legendre over the given initial panels. Each panel is
/// bisected until the whole-panel and two-half estimates agree to `tol` (absolute,
/// scaled by the panel's share of the interval).
pub fn adaptive<F>(breaks: &[f64], tol: f64, max_panels: usize, mut f: F) -> Result<Adaptive>
where
    F: FnMut(f64) -> Result<f64>,
{
    let rule = gl16();
    let total = breaks.last().copied().unwrap_or(0.0) - breaks.first().copied().unwrap_or(0.0);
    let eval = |a: f64, b: f64, f: &mut F| -> Result<f64> {
        let mut acc = 0.0;
        for (x, w) in rule.mapped(a, b) {
            acc += f(x)? * w;
        }
        Ok(acc)
    };
    let mut out = Adaptive {
        value: 0.0,
        error: 0.0,
        panels: 0,
    };
    let mut stack: Vec<(f64, f64, f64, u32)> = Vec::new();
    for w in breaks.windows(2).rev() {
        let whole = eval(w[0], w[1], &mut f)?;
        stack.push((w[0], w[1], whole, 0));
    }
    while let Some((a, b, whole, depth)) = stack.pop() {
        let mid = 0.5 * (a + b);
        let left = eval(a, mid, &mut f)?;
        let right = eval(mid, b, &mut f)?;
        let diff = (left + right - whole).abs();
        let share = if total > 0.0 { (b - a) / total } else { 1.0 };
        if diff <= tol * share.max(1e-3) || depth >= 40 {
            out.value += left + right;
            out.error += diff;
            out.panels += 1;
        } else {
            if out.panels + stack.len() > max_panels {
                return Err(Error::Budget(format!(
                    "adaptive quadrature exceeded {max_panels} panels on [{a}, {b}]"
                )));
            }
            stack.push((mid, b, right, depth + 1));
            stack.push((a, mid, left, depth + 1));
        }
    }
    Ok(out)
}

//! Fixed-grid space-time evaluation of `e^{itD^a} f` for a spectral function.
//!
//! Each component is reduced to a frequency quadrature `(rho_j, c_j)` and a
//! kernel matrix `J_nu(r_i rho_j) / (r_i rho_j)^p`; one time step is then a
//! complex matrix-vector product. All node sets are laid out in units of the
//! profile's own frequency scale, so dilating the data dilates the grids.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::modes::SpectralFunction;
use crate::parallel::{self, Parallelism};
use crate::quadrature::{gl16, gl8, graded_breaks, GaussLegendre};
use crate::specfun::{bessel_j_scaled, EvalPolicy};

/// Amplitude level below which frequency content is dropped.
const SPECTRAL_EPS: f64 = 1e-9;
/// Radians of kernel phase per 16-point frequency panel at `refine = 0`.
const PHASE_PER_PANEL: f64 = 6.0 * std::f64::consts::PI;
/// Graded radial levels toward the origin.
const ORIGIN_LEVELS: usize = 40;

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionSettings {
    /// Time horizon in units of the dispersion time `1 / (a rho_rms^a)`.
    pub horizon: f64,
    /// Each level doubles the radial, frequency and time node density.
    pub refine: u32,
    /// Evaluate negative times explicitly even when the data is real.
    pub both_signs: bool,
    /// Largest radius kept; `None` follows the fastest group velocity.
    pub max_radius: Option<f64>,
    /// Extra radial breakpoints, e.g. ball radii.
    pub radial_breaks: Vec<f64>,
    pub par: Parallelism,
}

impl Default for EvolutionSettings {
    fn default() -> Self {
        Self {
            horizon: 40.0,
            refine: 0,
            both_signs: false,
            max_radius: None,
            radial_breaks: Vec::new(),
            par: Parallelism::default(),
        }
    }
}

/// How the integrand in time is continued beyond the horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailModel {
    /// `t^{-gamma}` times a short expansion in `1/t` and `t^{-delta}`, with
    /// `gamma` known and `delta` fitted.
    Power(f64),
    /// Same form, with `gamma` estimated from the last time panels.
    Fitted,
}

/// A space-time integral split into its computed and extrapolated parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpaceTimeIntegral {
    pub value: f64,
    /// Extrapolated contribution beyond the horizon, both signs of `t`.
    pub tail: f64,
    /// Largest relative misfit of the tail model on its fitting window.
    pub fit_residual: f64,
}

struct Channel {
    weight: f64,
    nu: f64,
    /// frequency nodes and `w_j g(rho_j) rho_j^{n-1} (2pi)^{-n/2}`
    rho: Vec<f64>,
    coef: Vec<Complex64>,
    /// row-major `radii x rho`
    kernel: Vec<f64>,
}

/// Squared angular-L2 amplitude `sum_k w_k |u_k(t, r)|^2` on a time-radius grid.
pub struct Evolution {
    n: u32,
    a: f64,
    p: f64,
    channels: Vec<Channel>,
    min_degree: u32,
    radii: Vec<f64>,
    r_floor: f64,
    radial_weights: Vec<f64>,
    /// Time nodes per side, ascending from 0, with weights.
    times: Vec<f64>,
    time_weights: Vec<f64>,
    horizon: f64,
    /// `density[side][time][radius]`; side 0 is `t >= 0`, side 1 (if present) `t <= 0`.
    density: Vec<Vec<Vec<f64>>>,
    grid_id: String,
}

fn panel_nodes(rule: &GaussLegendre, breaks: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut x = Vec::new();
    let mut w = Vec::new();
    for b in breaks.windows(2) {
        if b[1] > b[0] {
            for (xi, wi) in rule.mapped(b[0], b[1]) {
                x.push(xi);
                w.push(wi);
            }
        }
    }
    (x, w)
}

fn uniform(a: f64, b: f64, width: f64) -> Vec<f64> {
    let count = (((b - a) / width).ceil() as usize).max(1);
    (0..=count).map(|i| a + (b - a) * i as f64 / count as f64).collect()
}

impl Evolution {
    pub fn new(f: &SpectralFunction, a: f64, settings: &EvolutionSettings) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::Invalid(format!("dispersion exponent a = {a} must be > 0")));
        }
        if !(settings.horizon > 0.0) {
            return Err(Error::Invalid("evolution horizon must be positive".into()));
        }
        let n = f.n;
        let nf = n as f64;
        let live: Vec<_> = f.components().iter().filter(|c| !c.profile.is_zero()).collect();
        if live.is_empty() {
            return Err(Error::Invalid("spectral function has no nonzero component".into()));
        }
        let refine = 2f64.powi(settings.refine as i32);

        // frequency scales
        let mut m0 = 0.0;
        let mut m2 = 0.0;
        let mut rho_hi: f64 = 0.0;
        let mut rho_lo = f64::INFINITY;
        for c in &live {
            m0 += c.weight as f64 * c.profile.weighted_mass(nf)?;
            m2 += c.weight as f64 * c.profile.weighted_mass(nf + 2.0)?;
            let (lo, hi) = c.profile.essential_support(SPECTRAL_EPS);
            rho_hi = rho_hi.max(hi);
            rho_lo = rho_lo.min(lo);
        }
        let rho_rms = (m2 / m0).sqrt();
        let speed = a * rho_rms.powf(a - 1.0);
        let v_max = if a >= 1.0 {
            a * rho_hi.powf(a - 1.0)
        } else {
            a * rho_lo.max(0.1 * rho_rms).powf(a - 1.0)
        };
        let ball = settings.radial_breaks.iter().copied().fold(0.0, f64::max);
        let t_max = settings.horizon * (1.0 / (a * rho_rms.powf(a))).max(ball / speed);
        // a wave front sits right behind the slowly decaying tail of the data,
        // so non-dispersive flows get a wider margin
        let margin = if a > 1.0 { 1.0 } else { 3.0 };
        let r_max = settings
            .max_radius
            .unwrap_or(margin * (14.0 / rho_rms + t_max * v_max))
            .max(ball);

        // radial nodes: graded near 0, then panels spanning a few wavelengths
        let r_inner = (1.0 / rho_hi).min(r_max);
        let mut outer = uniform(r_inner, r_max, 3.0 * 2.0 * std::f64::consts::PI / rho_hi / refine);
        for &b in &settings.radial_breaks {
            if b > r_inner && b < r_max {
                outer.push(b);
            }
        }
        outer.sort_by(f64::total_cmp);
        outer.dedup();
        let graded = graded_breaks(r_inner, ORIGIN_LEVELS);
        let r_floor = graded[0];
        let (mut radii, mut radial_weights) = panel_nodes(gl8(), &graded);
        let (ro, wo) = panel_nodes(gl16(), &outer);
        radii.extend(ro);
        radial_weights.extend(wo);

        // time nodes: one short panel, then geometric growth
        let ratio = 1.5f64.powf(1.0 / refine);
        let mut tb = vec![0.0, 0.25 / (a * rho_rms.powf(a))];
        while *tb.last().unwrap() * ratio < t_max {
            let next = tb.last().unwrap() * ratio;
            tb.push(next);
        }
        tb.push(t_max);
        let (times, time_weights) = panel_nodes(gl16(), &tb);

        let policy = EvalPolicy::default();
        let p = 0.5 * (nf - 2.0);
        let pre = (2.0 * std::f64::consts::PI).powf(-0.5 * nf);
        let mut channels = Vec::with_capacity(live.len());
        for c in &live {
            let pieces = c.profile.pieces(SPECTRAL_EPS);
            let psi = |s: f64| r_max * s + t_max * s.powf(a);
            let mut breaks = vec![pieces[0]];
            for w in pieces.windows(2) {
                let count = (((psi(w[1]) - psi(w[0])) * refine / PHASE_PER_PANEL).ceil() as usize).max(1);
                let mut lo = w[0];
                for j in 1..=count {
                    let target = psi(w[0]) + (psi(w[1]) - psi(w[0])) * j as f64 / count as f64;
                    let (mut x0, mut x1) = (lo, w[1]);
                    if j == count {
                        x0 = w[1];
                    } else {
                        for _ in 0..80 {
                            let mid = 0.5 * (x0 + x1);
                            if psi(mid) < target { x0 = mid } else { x1 = mid }
                        }
                    }
                    lo = x0;
                    breaks.push(x0);
                }
            }
            let (rho, w) = panel_nodes(gl16(), &breaks);
            let coef: Vec<Complex64> = rho
                .iter()
                .zip(&w)
                .map(|(&s, &wt)| c.profile.eval(s) * (wt * s.powi(n as i32 - 1) * pre))
                .collect();
            let nu = c.mode.nu;
            let rows: Result<Vec<Vec<f64>>> = parallel::map(&radii, settings.par, |&r| {
                rho.iter().map(|&s| bessel_j_scaled(nu, p, r * s, &policy)).collect()
            })
            .into_iter()
            .collect();
            channels.push(Channel {
                weight: c.weight as f64,
                nu,
                rho,
                coef,
                kernel: rows?.concat(),
            });
        }

        let sides = if settings.both_signs || live.iter().any(|c| !c.profile.is_real()) { 2 } else { 1 };
        let mut evo = Self {
            n,
            a,
            p,
            channels,
            min_degree: live.iter().map(|c| c.mode.k).min().unwrap_or(0),
            radii,
            r_floor,
            radial_weights,
            times,
            time_weights,
            horizon: t_max,
            density: Vec::new(),
            grid_id: String::new(),
        };
        for side in 0..sides {
            let sign = if side == 0 { 1.0 } else { -1.0 };
            let slices = parallel::map(&evo.times, settings.par, |&t| evo.slice(sign * t));
            evo.density.push(slices);
        }
        evo.grid_id = format!(
            "evo:T={:.6}:R={:.6}:nr={}:nt={}:nrho={}",
            t_max,
            r_max,
            evo.radii.len(),
            evo.times.len(),
            evo.channels.iter().map(|c| c.rho.len()).sum::<usize>()
        );
        Ok(evo)
    }

    fn slice(&self, t: f64) -> Vec<f64> {
        let nr = self.radii.len();
        let mut out = vec![0.0; nr];
        for ch in &self.channels {
            let m = ch.rho.len();
            let phased: Vec<Complex64> = ch
                .rho
                .iter()
                .zip(&ch.coef)
                .map(|(&s, &c)| c * Complex64::from_polar(1.0, t * s.powf(self.a)))
                .collect();
            for (i, slot) in out.iter_mut().enumerate() {
                let row = &ch.kernel[i * m..(i + 1) * m];
                let mut re = 0.0;
                let mut im = 0.0;
                for (k, z) in row.iter().zip(&phased) {
                    re += k * z.re;
                    im += k * z.im;
                }
                *slot += ch.weight * (re * re + im * im);
            }
        }
        out
    }

    /// `sum_k w_k |u_k(t, r)|^2` at an arbitrary point.
    pub fn density_at(&self, t: f64, r: f64) -> Result<f64> {
        let policy = EvalPolicy::default();
        let mut acc = 0.0;
        for ch in &self.channels {
            let mut u = Complex64::new(0.0, 0.0);
            for (&s, &c) in ch.rho.iter().zip(&ch.coef) {
                u += c * Complex64::from_polar(1.0, t * s.powf(self.a))
                    * bessel_j_scaled(ch.nu, self.p, r * s, &policy)?;
            }
            acc += ch.weight * u.norm_sqr();
        }
        Ok(acc)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn sides(&self) -> usize {
        self.density.len()
    }

    pub fn grid_id(&self) -> &str {
        &self.grid_id
    }

    /// Density slice at the `i`-th time node of the given side.
    pub fn slice_at(&self, side: usize, i: usize) -> &[f64] {
        &self.density[side][i]
    }

    /// `int r^{-weight} D^{power/2} r^{n-1} dr` restricted to `r < r_cut`, per time node.
    pub fn radial_profile(&self, side: usize, weight: f64, power: f64, r_cut: f64) -> Result<Vec<f64>> {
        let beta = self.n as f64 - 1.0 - weight;
        let origin = beta + power * self.min_degree as f64;
        if !(origin > -1.0) {
            return Err(Error::Divergence(format!(
                "radial integrand ~ r^{origin} is not integrable at 0"
            )));
        }
        let eps = self.r_floor;
        Ok(self.density[side]
            .iter()
            .map(|d| {
                let mut acc = 0.0;
                for ((&r, &w), &v) in self.radii.iter().zip(&self.radial_weights).zip(d) {
                    if r < r_cut {
                        acc += w * r.powf(beta) * v.powf(0.5 * power);
                    }
                }
                // below the finest graded panel, D ~ D(r_0) (r / r_0)^{2k}
                let k = self.min_degree as f64;
                let r0 = self.radii[0];
                let scale = d[0].powf(0.5 * power) * r0.powf(-power * k);
                acc + scale * eps.powf(origin + 1.0) / (origin + 1.0)
            })
            .collect())
    }

    /// `int_R int_{r < r_cut} r^{-weight} D^{power/2} r^{n-1} dr dt` over all times.
    pub fn space_time(&self, weight: f64, power: f64, r_cut: f64, tail: TailModel) -> Result<SpaceTimeIntegral> {
        let mut value = 0.0;
        let mut tail_total = 0.0;
        let mut residual: f64 = 0.0;
        for side in 0..self.sides() {
            let f = self.radial_profile(side, weight, power, r_cut)?;
            let body: f64 = f.iter().zip(&self.time_weights).map(|(v, w)| v * w).sum();
            let (t, res) = self.fit_tail(&f, body, tail)?;
            value += body + t;
            tail_total += t;
            residual = residual.max(res);
        }
        if self.sides() == 1 {
            value *= 2.0;
            tail_total *= 2.0;
        }
        Ok(SpaceTimeIntegral {
            value,
            tail: tail_total,
            fit_residual: residual,
        })
    }

    /// Least-squares fit of `t^gamma F(t)` by powers of `T/t` over `[T/4, T]`,
    /// integrated from `T` to infinity.
    fn fit_tail(&self, f: &[f64], body: f64, model: TailModel) -> Result<(f64, f64)> {
        let big_t = self.horizon;
        let window: Vec<(f64, f64)> = self
            .times
            .iter()
            .zip(f)
            .filter(|(&t, _)| t >= 0.25 * big_t)
            .map(|(&t, &v)| (t, v))
            .collect();
        if window.len() < 4 {
            return Err(Error::Budget("too few time nodes in the tail window".into()));
        }
        // nothing left to extrapolate, e.g. after a wave has left a ball
        let last = window.iter().map(|w| w.1.abs()).fold(0.0, f64::max);
        if last * big_t <= 1e-14 * body.abs() {
            return Ok((0.0, 0.0));
        }
        let gamma = match model {
            TailModel::Power(g) => g,
            TailModel::Fitted => {
                // log-log slope between the window ends
                let (t0, v0) = window[0];
                let (t1, v1) = window[window.len() - 1];
                if v0 <= 0.0 || v1 <= 0.0 {
                    return Ok((0.0, 0.0));
                }
                -(v1 / v0).ln() / (t1 / t0).ln()
            }
        };
        if !(gamma > 1.0) {
            return Err(Error::Divergence(format!(
                "time integrand decays like t^-{gamma}, not integrable"
            )));
        }
        // integer powers of 1/t plus a family t^{-delta}, t^{-delta-1} whose
        // exponent depends on how the data behaves at zero frequency
        let sse = |delta: f64| fit_powers(&window, big_t, gamma, delta).map_or(f64::INFINITY, |f| f.1);
        let mut delta = 0.5;
        let mut best = sse(delta);
        for i in 1..=80 {
            let d = 0.0375 * i as f64;
            let e = sse(d);
            if e < best {
                best = e;
                delta = d;
            }
        }
        let (mut lo, mut hi) = ((delta - 0.0375).max(0.01), delta + 0.0375);
        for _ in 0..40 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if sse(m1) < sse(m2) { hi = m2 } else { lo = m1 }
        }
        if sse(0.5 * (lo + hi)) < best {
            delta = 0.5 * (lo + hi);
        }
        let (c, _) = fit_powers(&window, big_t, gamma, delta)
            .ok_or_else(|| Error::Budget("singular tail fit".into()))?;
        let exps = tail_exponents(delta);
        let mut res: f64 = 0.0;
        for &(t, v) in &window {
            let x = big_t / t;
            let model: f64 = c.iter().zip(&exps).map(|(c, e)| c * x.powf(*e)).sum::<f64>() * x.powf(gamma);
            if v != 0.0 {
                res = res.max(((model - v) / v).abs());
            }
        }
        let tail = big_t * c.iter().zip(&exps).map(|(c, e)| c / (gamma + e - 1.0)).sum::<f64>();
        Ok((tail, res))
    }

    /// Largest `r^{-weight} D^{1/2}` over the grid, refined locally.
    pub fn sup(&self, weight: f64) -> Result<(f64, f64, f64)> {
        let mut best = (0.0, 0.0, 0.0);
        for side in 0..self.sides() {
            let sign = if side == 0 { 1.0 } else { -1.0 };
            for (ti, d) in self.density[side].iter().enumerate() {
                for (ri, &v) in d.iter().enumerate() {
                    let val = self.radii[ri].powf(-weight) * v.sqrt();
                    if val > best.0 {
                        best = (val, sign * self.times[ti], self.radii[ri]);
                    }
                }
            }
        }
        let objective = |t: f64, r: f64| -> Result<f64> { Ok(r.powf(-weight) * self.density_at(t, r)?.sqrt()) };
        let (mut val, mut t, mut r) = best;
        if val == 0.0 {
            return Ok(best);
        }
        for _ in 0..4 {
            let (rv, rr) = golden(|x| objective(t, x), (r * 0.8).max(0.0), r * 1.25)?;
            if rv > val {
                val = rv;
                r = rr;
            }
            let span = 0.2 * t.abs().max(0.05 * self.horizon);
            let (tv, tt) = golden(|x| objective(x, r), t - span, t + span)?;
            if tv > val {
                val = tv;
                t = tt;
            }
        }
        Ok((val, t, r))
    }
}

fn golden(f: impl Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
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

fn tail_exponents(delta: f64) -> [f64; 5] {
    [0.0, 1.0, 2.0, delta, delta + 1.0]
}

/// Least squares of `t^gamma F(t)` in powers `x^e` of `x = T/t`, returning the
/// coefficients and the relative residual sum of squares.
fn fit_powers(window: &[(f64, f64)], big_t: f64, gamma: f64, delta: f64) -> Option<([f64; 5], f64)> {
    let exps = tail_exponents(delta);
    let mut rows: Vec<[f64; 5]> = Vec::with_capacity(window.len());
    let mut rhs: Vec<f64> = Vec::with_capacity(window.len());
    for &(t, v) in window {
        let x = big_t / t;
        rows.push(exps.map(|e| x.powf(e)));
        rhs.push(v * x.powf(-gamma));
    }
    let scale = rhs.iter().map(|y| y * y).sum::<f64>();
    let c = householder_lsq(&mut rows, &mut rhs.clone())?;
    let sse = rows_residual(window, big_t, gamma, &exps, &c);
    Some((c, sse / scale))
}

fn rows_residual(window: &[(f64, f64)], big_t: f64, gamma: f64, exps: &[f64; 5], c: &[f64; 5]) -> f64 {
    window
        .iter()
        .map(|&(t, v)| {
            let x = big_t / t;
            let m: f64 = c.iter().zip(exps).map(|(c, e)| c * x.powf(*e)).sum();
            (m - v * x.powf(-gamma)).powi(2)
        })
        .sum()
}

/// Least squares by Householder QR; `None` when the columns are dependent.
fn householder_lsq<const K: usize>(a: &mut [[f64; K]], y: &mut [f64]) -> Option<[f64; K]> {
    let m = a.len();
    if m < K {
        return None;
    }
    for j in 0..K {
        let norm = (j..m).map(|i| a[i][j] * a[i][j]).sum::<f64>().sqrt();
        let col_scale = (0..m).map(|i| a[i][j].abs()).fold(0.0, f64::max);
        if norm <= 1e-13 * col_scale.max(f64::MIN_POSITIVE) || norm == 0.0 {
            return None;
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..m).map(|i| a[i][j]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        for col in j..K {
            let d: f64 = (j..m).map(|i| v[i - j] * a[i][col]).sum::<f64>() * 2.0 / vv;
            for i in j..m {
                a[i][col] -= d * v[i - j];
            }
        }
        let d: f64 = (j..m).map(|i| v[i - j] * y[i]).sum::<f64>() * 2.0 / vv;
        for i in j..m {
            y[i] -= d * v[i - j];
        }
    }
    let mut x = [0.0; K];
    for row in (0..K).rev() {
        let s: f64 = (row + 1..K).map(|k| a[row][k] * x[k]).sum();
        if a[row][row] == 0.0 {
            return None;
        }
        x[row] = (y[row] - s) / a[row][row];
    }
    Some(x)
}

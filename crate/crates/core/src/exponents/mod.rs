//! Critical exponents, admissibility conditions and parameter windows.
//!
//! Arithmetic is exact on rational inputs; irrational quantities such as
//! `p_c` fall back to `f64` with the tolerance of [`num::REAL_TOLERANCE`].

pub mod num;
pub mod window;

use std::str::FromStr;

use crate::error::{Error, Result};
pub use num::Num;
pub use window::{AdmissibilityWindow, Bound, Interval, WINDOW_CSV_HEADER};

fn n_num(n: u32) -> Num {
    Num::int(n as i64)
}

fn half() -> Num {
    Num::ratio(1, 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    Wave,
    Schrodinger,
}

impl FromStr for Equation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wave" => Ok(Equation::Wave),
            "schrodinger" | "schro" => Ok(Equation::Schrodinger),
            _ => Err(Error::Invalid(format!("unknown equation {s:?} (wave|schrodinger)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WaveExponents {
    pub n: u32,
    pub p_conf: Num,
    pub p_h: Num,
    /// Root `> 1` of `(n-1)p^2 - (n+1)p - 2 = 0`.
    pub p_c: Num,
}

impl WaveExponents {
    pub fn s_c(&self, p: Num) -> Num {
        n_num(self.n) * half() - Num::int(2) / (p - Num::int(1))
    }

    pub fn s_sb(&self, p: Num) -> Num {
        half() - p.recip()
    }
}

pub fn wave_exponents(n: u32) -> Result<WaveExponents> {
    if n < 2 {
        return Err(Error::Invalid(format!("n = {n} must be >= 2")));
    }
    let nn = n_num(n);
    let one = Num::int(1);
    let p_conf = one + Num::int(4) / (nn - one);
    let p_h = one + Num::int(4) * nn / ((nn + one) * (nn - one));
    let (a, b) = ((n - 1) as f64, (n + 1) as f64);
    let p_c = Num::real((b + (b * b + 8.0 * a).sqrt()) / (2.0 * a));
    Ok(WaveExponents { n, p_conf, p_h, p_c })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchroExponents {
    pub n: u32,
    pub p_l2: Num,
    pub p_l: Num,
}

impl SchroExponents {
    pub fn s_c(&self, p: Num) -> Num {
        n_num(self.n) * half() - Num::int(2) / (p - Num::int(1))
    }
}

pub fn schro_exponents(n: u32) -> Result<SchroExponents> {
    if n < 2 {
        return Err(Error::Invalid(format!("n = {n} must be >= 2")));
    }
    let one = Num::int(1);
    let p_l = one + exact_sqrt(Num::int(2) / Num::int(n as i64 - 1));
    Ok(SchroExponents {
        n,
        p_l2: one + Num::int(4) / n_num(n),
        p_l,
    })
}

/// Square root, exact when the argument is the square of a rational.
fn exact_sqrt(x: Num) -> Num {
    if let Num::Rational(r) = x {
        let root = |v: i64| {
            let s = (v as f64).sqrt().round() as i64;
            (s * s == v).then_some(s)
        };
        if let (Some(a), Some(b)) = (root(*r.numer()), root(*r.denom())) {
            return Num::ratio(a, b);
        }
    }
    x.sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    pub reason: String,
}

fn check_range(name: &str, x: Num, lo: i64) -> Result<()> {
    if x < Num::int(lo) {
        return Err(Error::Invalid(format!("{name} = {x} must lie in [{lo}, inf]")));
    }
    Ok(())
}

/// Classical Strichartz admissibility of `(q, r)`.
pub fn classical_admissible(eq: Equation, q: Num, r: Num, n: u32) -> Result<Admissibility> {
    check_range("q", q, 1)?;
    check_range("r", r, 1)?;
    let nn = n_num(n);
    let (iq, ir) = (q.recip(), r.recip());
    let gap = half() - ir;
    let slope = match eq {
        Equation::Wave => (nn - Num::int(1)) * half(),
        Equation::Schrodinger => nn * half(),
    };
    let bound = half().min(slope * gap);
    let excluded: Vec<Num> = match eq {
        Equation::Wave => vec![Num::int(2).max(Num::int(4) / (nn - Num::int(1))), Num::infinity()],
        Equation::Schrodinger => vec![Num::int(2), Num::infinity()],
    };
    if r.is_infinite() && excluded.iter().any(|e| *e == q || (e.is_infinite() && q.is_infinite())) {
        return Ok(Admissibility {
            admissible: false,
            reason: format!("(q, r) = ({q}, inf) is an excluded endpoint"),
        });
    }
    let admissible = iq <= bound;
    let reason = if admissible {
        format!("1/q = {iq} <= {bound}")
    } else {
        format!("1/q = {iq} > {bound}")
    };
    Ok(Admissibility { admissible, reason })
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneralizedWindow {
    pub in_window: bool,
    /// `1/q` sits on an edge of the open window.
    pub on_boundary: bool,
    pub s: Num,
    pub s_kn: Num,
    /// The Schrödinger window is conjectural.
    pub conjectural: bool,
}

/// The open window `lo < 1/q < hi` of the generalized Strichartz estimates
/// with the regularity `s` and the angular threshold `s_kn`. The wave path
/// takes the angular integrability equal to `r`.
pub fn generalized_window(eq: Equation, q: Num, r: Num, p_ang: Num, n: u32) -> Result<GeneralizedWindow> {
    check_range("q", q, 2)?;
    check_range("r", r, 2)?;
    check_range("p_ang", p_ang, 2)?;
    let nn = n_num(n);
    let one = Num::int(1);
    let two = Num::int(2);
    let (iq, ir) = (q.recip(), r.recip());
    let gap = half() - ir;
    let (lo, hi, s, s_kn) = match eq {
        Equation::Wave => (
            (nn - one) * half() * gap,
            (nn - one) * gap,
            nn * gap - iq,
            two * iq - (nn - one) * gap,
        ),
        Equation::Schrodinger => (
            nn * half() * gap,
            (two * nn - one) * half() * gap,
            nn * half() - two * iq - nn * ir,
            two * iq + (two * nn - one) * ir - (nn - one) * p_ang.recip() - nn * half(),
        ),
    };
    Ok(GeneralizedWindow {
        in_window: lo < iq && iq < hi,
        on_boundary: iq == lo || iq == hi,
        s,
        s_kn,
        conjectural: eq == Equation::Schrodinger,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Thm18Params {
    pub s: Num,
    pub s1: Num,
    pub valid: bool,
}

/// Regularities of the Morawetz-Strichartz estimate with weight `|x|^{-alpha}`
/// in `L^q_{t,|x|}`; `valid` when `n/q - alpha` lies in `(0, (n-1)/2)`.
pub fn thm18_params(q: Num, alpha: Num, n: u32, a: Num) -> Result<Thm18Params> {
    check_range("q", q, 2)?;
    let nn = n_num(n);
    let iq = q.recip();
    let s = (nn + a) * iq - nn * half() - alpha;
    let s1 = (nn - Num::int(1)) * half() + alpha - nn * iq;
    let m = nn * iq - alpha;
    Ok(Thm18Params {
        s,
        s1,
        valid: m > Num::int(0) && m < (nn - Num::int(1)) * half(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct StraussSetup {
    pub n: u32,
    pub p: Num,
    pub s_c: Num,
    pub s_sb: Num,
    pub alpha: Num,
    pub s1: Num,
    pub s2: Num,
    /// Exponent of the Moser estimate on the sphere.
    pub moser_a: Num,
    pub p_c: Num,
    pub p_conf: Num,
    pub p_range_ok: bool,
    pub gap_ok: bool,
    pub moser_ok: bool,
    pub half_minus_sc_ok: bool,
}

impl StraussSetup {
    pub fn valid(&self) -> bool {
        self.p_range_ok && self.gap_ok && self.moser_ok && self.half_minus_sc_ok
    }
}

fn open_in(x: Num, lo: Num, hi: Num) -> bool {
    lo < x && x < hi
}

pub fn strauss_setup(n: u32, p: Num) -> Result<StraussSetup> {
    if !(2..=4).contains(&n) {
        return Err(Error::Invalid(format!("the rough-data setup needs 2 <= n <= 4, got {n}")));
    }
    let one = Num::int(1);
    if p <= one {
        return Err(Error::Invalid(format!("p = {p} must be > 1")));
    }
    let w = wave_exponents(n)?;
    let nn = n_num(n);
    let s_c = w.s_c(p);
    let s_sb = w.s_sb(p);
    let s1 = one / (p - one);
    let top = (nn - one) * half();
    let moser_a = top - s1;
    let zero = Num::int(0);
    Ok(StraussSetup {
        n,
        p,
        s_c,
        s_sb,
        alpha: (nn + one) / p - Num::int(2) / (p - one),
        s1,
        s2: s1 + s_c - s_sb,
        moser_a,
        p_c: w.p_c,
        p_conf: w.p_conf,
        p_range_ok: open_in(p, w.p_c, w.p_conf),
        gap_ok: open_in(s_c - s_sb, zero, top),
        moser_ok: moser_a >= zero && moser_a < top,
        half_minus_sc_ok: open_in(half() - s_c, zero, top),
    })
}

/// Admissible values of `2/q` for the small-data Schrödinger problem.
pub fn nls_q_window(n: u32, p: Num) -> Result<AdmissibilityWindow> {
    if n < 3 {
        return Err(Error::Invalid(format!("n = {n} must be >= 3")));
    }
    let one = Num::int(1);
    if p <= one {
        return Err(Error::Invalid(format!("p = {p} must be > 1")));
    }
    let nn = n_num(n);
    let two = Num::int(2);
    let ip = p.recip();
    let ipm = (p - one).recip();
    let constraints = vec![
        Interval::new(Bound::closed(ip), Bound::closed(one), "q in [2, 2p]"),
        Interval::new(
            Bound::open(two * ipm - (nn - one) * half()),
            Bound::open(two * ipm - (nn + one) / (two * p)),
            "regularity gap",
        ),
        Interval::new(
            Bound::closed(ipm - (nn - one) / (two * p)),
            Bound::open(ipm - (nn - Num::int(3)) / (two * p)),
            "weight window",
        ),
    ];
    Ok(AdmissibilityWindow::new("2/q", constraints))
}

/// Endpoint pairs of the interpolation: `(q0, r0)` classical, `(q1, r1)`
/// generalized.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationEndpoints {
    pub q0: Num,
    pub r0: Num,
    pub q1: Num,
    pub r1: Num,
}

impl InterpolationEndpoints {
    pub fn for_dimension(n: u32) -> Result<Self> {
        let two = Num::int(2);
        let pair = |num: i64, den: i64| {
            if den == 0 {
                Num::infinity()
            } else {
                Num::ratio(2 * num, den)
            }
        };
        let n = n as i64;
        match n {
            2 => Ok(Self {
                q0: Num::int(4),
                r0: Num::infinity(),
                q1: two,
                r1: Num::infinity(),
            }),
            3.. => Ok(Self {
                q0: two,
                r0: pair(n - 1, n - 3),
                q1: two,
                r1: pair(n - 1, n - 2),
            }),
            _ => Err(Error::Invalid(format!("n = {n} must be >= 2"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interpolation {
    pub t_eta: Num,
    pub condition_met: bool,
    /// `lim_{eta -> 0} (1/2 + eta) t_eta`.
    pub limit: Num,
    pub s_kn: Num,
}

/// Interpolation between the classical endpoint and a pair
/// `(q_eta, r_eta)` approaching the generalized endpoint. The pair moves
/// linearly: `1/q_eta = 1/q1 - eta` with `r_eta = inf` for `n = 2`, and
/// `1/r_eta = 1/r1 - eta` with `q_eta = 2` for `n >= 3`. Only the reduced
/// cases are accepted: `r = inf`, `q in (q1, q0]` for `n = 2` and `q = 2`,
/// `r in (r1, r0]` for `n >= 3`.
pub fn interpolation_bookkeeping(
    n: u32,
    q: Num,
    r: Num,
    eta: Num,
    ends: &InterpolationEndpoints,
    epsilon: Num,
) -> Result<Interpolation> {
    let zero = Num::int(0);
    if eta < zero {
        return Err(Error::Invalid(format!("eta = {eta} must be >= 0")));
    }
    let violation = |d: String| Error::window("interpolation", d);
    let (x, x0, x1) = if n == 2 {
        if !r.is_infinite() {
            return Err(violation(format!("n = 2 needs r = inf, got {r}")));
        }
        (q.recip(), ends.q0.recip(), ends.q1.recip())
    } else {
        if q != Num::int(2) {
            return Err(violation(format!("n >= 3 needs q = 2, got {q}")));
        }
        (r.recip(), ends.r0.recip(), ends.r1.recip())
    };
    if !(x0 <= x && x < x1) {
        return Err(violation(format!("exponent 1/{x} outside the reduced range")));
    }
    let x_eta = x1 - eta;
    if x_eta < x {
        return Err(violation(format!("eta = {eta} moves the pair past ({q}, {r})")));
    }
    let t_eta = (x - x0) / (x_eta - x0);
    let limit = half() * (x - x0) / (x1 - x0);
    let s_kn = generalized_window(Equation::Wave, q, r, r, n)?.s_kn;
    Ok(Interpolation {
        condition_met: (half() + eta) * t_eta <= s_kn + epsilon,
        t_eta,
        limit,
        s_kn,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmseOberlin {
    pub in_window: bool,
    pub r: Num,
}

/// Window `(n+1)/(2n) - 2/(n+1) < 1/q < (n-1)/(2n)` and the paired `r`
/// solving `(n+1)/r - (n+1)/q = 2`.
pub fn harmse_oberlin_check(q: Num, n: u32) -> Result<HarmseOberlin> {
    if !(q > Num::int(1)) || q.is_infinite() {
        return Err(Error::Invalid(format!("q = {q} must lie in (1, inf)")));
    }
    let nn = n_num(n);
    let one = Num::int(1);
    let two = Num::int(2);
    let iq = q.recip();
    let lo = (nn + one) / (two * nn) - two / (nn + one);
    let hi = (nn - one) / (two * nn);
    Ok(HarmseOberlin {
        in_window: lo < iq && iq < hi,
        r: (nn + one) / (two + (nn + one) * iq),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thm18_identity_example() {
        let t = thm18_params(Num::int(2), Num::int(0), 3, Num::int(2)).unwrap();
        assert_eq!(t.s.to_string(), "1");
        assert_eq!(t.s1.to_string(), "-1/2");
    }
}

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, ToPrimitive, Zero};

use crate::error::Error;

/// Comparisons involving a real operand treat values this close as equal.
pub const REAL_TOLERANCE: f64 = 1e-12;

/// An exponent: exact rational while possible, real otherwise.
#[derive(Debug, Clone, Copy)]
pub enum Num {
    Rational(Ratio<i64>),
    Real(f64),
}

impl Num {
    pub fn int(n: i64) -> Self {
        Num::Rational(Ratio::from_integer(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Num::Rational(Ratio::new(num, den))
    }

    pub fn real(x: f64) -> Self {
        Num::Real(x)
    }

    pub fn infinity() -> Self {
        Num::Real(f64::INFINITY)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Num::Rational(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Num::Real(x) if x.is_infinite())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Num::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Num::Real(x) => *x,
        }
    }

    /// `1/x` with `1/inf = 0` exactly.
    pub fn recip(self) -> Self {
        match self {
            Num::Real(x) if x.is_infinite() => Num::int(0),
            other => Num::int(1) / other,
        }
    }

    pub fn sqrt(self) -> Self {
        Num::Real(self.to_f64().sqrt())
    }

    pub fn min(self, other: Self) -> Self {
        if other < self { other } else { self }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self { other } else { self }
    }

    fn lift(self) -> f64 {
        self.to_f64()
    }

    /// Exact comparison for two rationals, tolerant otherwise.
    pub fn compare(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Num::Rational(a), Num::Rational(b)) => a.cmp(b),
            _ => {
                let (a, b) = (self.lift(), other.lift());
                if a.is_infinite() || b.is_infinite() {
                    return a.partial_cmp(&b).unwrap_or(Ordering::Equal);
                }
                let scale = 1f64.max(a.abs()).max(b.abs());
                if (a - b).abs() <= REAL_TOLERANCE * scale {
                    Ordering::Equal
                } else {
                    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
                }
            }
        }
    }
}

impl PartialEq for Num {
    fn eq(&self, other: &Self) -> bool {
        self.compare(other) == Ordering::Equal
    }
}

impl PartialOrd for Num {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.compare(other))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident, $op:tt) => {
        impl $trait for Num {
            type Output = Num;
            fn $method(self, rhs: Num) -> Num {
                if let (Num::Rational(a), Num::Rational(b)) = (self, rhs) {
                    if let Some(v) = a.$checked(&b) {
                        return Num::Rational(v);
                    }
                }
                Num::Real(self.lift() $op rhs.lift())
            }
        }
    };
}

binop!(Add, add, checked_add, +);
binop!(Sub, sub, checked_sub, -);
binop!(Mul, mul, checked_mul, *);

impl Div for Num {
    type Output = Num;
    fn div(self, rhs: Num) -> Num {
        if let (Num::Rational(a), Num::Rational(b)) = (self, rhs) {
            if !b.is_zero() {
                if let Some(v) = a.checked_div(&b) {
                    return Num::Rational(v);
                }
            }
        }
        Num::Real(self.lift() / rhs.lift())
    }
}

impl Neg for Num {
    type Output = Num;
    fn neg(self) -> Num {
        match self {
            Num::Rational(r) => Num::Rational(-r),
            Num::Real(x) => Num::Real(-x),
        }
    }
}

impl From<i64> for Num {
    fn from(n: i64) -> Self {
        Num::int(n)
    }
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Rational(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Num::Rational(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Num::Real(x) if x.is_infinite() => f.write_str(if *x > 0.0 { "inf" } else { "-inf" }),
            Num::Real(x) => write!(f, "{x:?}"),
        }
    }
}

/// Accepts `inf`, integers, `a/b` and decimals; decimals with at most 15
/// fractional digits are read exactly.
impl FromStr for Num {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("cannot read exponent {s:?}"));
        match s {
            "inf" | "infinity" | "∞" => return Ok(Num::infinity()),
            _ => {}
        }
        if let Some((a, b)) = s.split_once('/') {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            return Ok(Num::ratio(a, b));
        }
        if let Ok(n) = s.parse::<i64>() {
            return Ok(Num::int(n));
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        if let Some((int, frac)) = s.split_once('.') {
            let digits = frac.len();
            if digits <= 15 && !frac.contains(['e', 'E']) && !int.contains(['e', 'E']) {
                let joined = format!("{int}{frac}");
                if let Ok(num) = joined.parse::<i64>() {
                    return Ok(Num::ratio(num, 10i64.pow(digits as u32)));
                }
            }
        }
        Ok(Num::Real(x))
    }
}

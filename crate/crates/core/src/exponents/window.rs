use std::cmp::Ordering;
use std::fmt;

use super::num::Num;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub value: Num,
    pub closed: bool,
}

impl Bound {
    pub fn closed(value: Num) -> Self {
        Self { value, closed: true }
    }

    pub fn open(value: Num) -> Self {
        Self { value, closed: false }
    }
}

/// An interval with explicit endpoint types and a tag naming its origin.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub lo: Bound,
    pub hi: Bound,
    pub tag: String,
}

impl Interval {
    pub fn new(lo: Bound, hi: Bound, tag: impl Into<String>) -> Self {
        Self { lo, hi, tag: tag.into() }
    }

    pub fn is_empty(&self) -> bool {
        match self.lo.value.compare(&self.hi.value) {
            Ordering::Less => false,
            Ordering::Equal => !(self.lo.closed && self.hi.closed),
            Ordering::Greater => true,
        }
    }

    pub fn contains(&self, x: Num) -> bool {
        let above = match x.compare(&self.lo.value) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo.closed,
            Ordering::Less => false,
        };
        let below = match x.compare(&self.hi.value) {
            Ordering::Less => true,
            Ordering::Equal => self.hi.closed,
            Ordering::Greater => false,
        };
        above && below
    }

    /// `x` is an endpoint of the interval.
    pub fn touches(&self, x: Num) -> bool {
        x == self.lo.value || x == self.hi.value
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let lo = match self.lo.value.compare(&other.lo.value) {
            Ordering::Greater => self.lo,
            Ordering::Less => other.lo,
            Ordering::Equal => Bound {
                value: self.lo.value,
                closed: self.lo.closed && other.lo.closed,
            },
        };
        let hi = match self.hi.value.compare(&other.hi.value) {
            Ordering::Less => self.hi,
            Ordering::Greater => other.hi,
            Ordering::Equal => Bound {
                value: self.hi.value,
                closed: self.hi.closed && other.hi.closed,
            },
        };
        Interval::new(lo, hi, "intersection")
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo.closed { '[' } else { '(' },
            self.lo.value,
            self.hi.value,
            if self.hi.closed { ']' } else { ')' },
        )
    }
}

/// The set of admissible values of one exponent variable, kept as the list
/// of constraints it came from together with their intersection.
#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityWindow {
    pub variable: String,
    pub constraints: Vec<Interval>,
    /// `None` when the constraints have no common point.
    pub intersection: Option<Interval>,
    pub empty: bool,
}

impl AdmissibilityWindow {
    pub fn new(variable: impl Into<String>, constraints: Vec<Interval>) -> Self {
        let mut acc: Option<Interval> = None;
        for c in &constraints {
            acc = Some(match acc {
                None => Interval::new(c.lo, c.hi, "intersection"),
                Some(a) => a.intersect(c),
            });
        }
        let intersection = acc.filter(|i| !i.is_empty());
        Self {
            variable: variable.into(),
            empty: intersection.is_none(),
            constraints,
            intersection,
        }
    }

    pub fn contains(&self, x: Num) -> bool {
        self.constraints.iter().all(|c| c.contains(x))
    }

    /// `interval_list` is the intersection (or `empty`), `provenance` lists
    /// each constraint with its tag.
    pub fn to_csv_row(&self, n: u32, p: Option<Num>, q: Option<Num>, r: Option<Num>) -> String {
        let opt = |x: Option<Num>| x.map(|v| v.to_string()).unwrap_or_default();
        let interval = self
            .intersection
            .as_ref()
            .map(|i| i.to_string())
            .unwrap_or_else(|| "empty".into());
        let provenance = self
            .constraints
            .iter()
            .map(|c| format!("{}: {}", c.tag, c))
            .collect::<Vec<_>>()
            .join("; ");
        [
            n.to_string(),
            opt(p),
            opt(q),
            opt(r),
            self.variable.clone(),
            interval,
            self.empty.to_string(),
            provenance,
        ]
        .iter()
        .map(|s| csv_field(s))
        .collect::<Vec<_>>()
        .join(",")
    }
}

pub const WINDOW_CSV_HEADER: &str = "n,p,q,r,variable,interval_list,empty,provenance";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_types_decide_emptiness() {
        let a = Interval::new(Bound::closed(Num::int(0)), Bound::closed(Num::int(1)), "a");
        let b = Interval::new(Bound::closed(Num::int(1)), Bound::open(Num::int(2)), "b");
        let c = Interval::new(Bound::open(Num::int(1)), Bound::open(Num::int(2)), "c");
        assert!(!AdmissibilityWindow::new("x", vec![a.clone(), b]).empty);
        assert!(AdmissibilityWindow::new("x", vec![a, c]).empty);
    }
}

//! Plain-text record format for [`SpectralFunction`].
//!
//! One record per component, records separated by blank lines, one
//! `key = value` pair per line and `#` starting a comment:
//!
//! ```text
//! # two-mode test function
//! n = 3
//! k = 0
//! kind = gaussian
//! amplitude = 1
//! m = 0
//! sigma = 1
//!
//! n = 3
//! k = 2
//! weight = 5
//! kind = sampled
//! rho = 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8
//! re = 1, 1, 1, 1, 1, 1, 1, 1
//! im = 0, 0, 0, 0, 0, 0, 0, 0
//! ```
//!
//! `weight` defaults to 1 and `im` to all zeros. Sampled records may also set
//! `interp = cubic` (the default) or `interp = blocks 16`, and `origin_power = k`
//! to continue the profile below the first node as `rho^k`. Every record must
//! carry the same `n`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_complex::Complex64;

use super::{Interpolation, RadialProfile, SampledProfile, SpectralFunction};
use crate::error::{Error, Result};

struct Record {
    line: usize,
    fields: BTreeMap<String, (usize, String)>,
}

impl Record {
    fn take(&mut self, key: &str) -> Result<(usize, String)> {
        self.fields.remove(key).ok_or_else(|| Error::Parse {
            line: self.line,
            detail: format!("missing key {key:?}"),
        })
    }

    fn take_opt(&mut self, key: &str) -> Option<(usize, String)> {
        self.fields.remove(key)
    }
}

fn parse_value<T: std::str::FromStr>((line, raw): (usize, String), key: &str) -> Result<T> {
    raw.parse().map_err(|_| Error::Parse {
        line,
        detail: format!("bad value {raw:?} for {key}"),
    })
}

fn parse_list((line, raw): (usize, String), key: &str) -> Result<Vec<f64>> {
    raw.split(',')
        .map(|s| {
            s.trim().parse().map_err(|_| Error::Parse {
                line,
                detail: format!("bad number {s:?} in {key}"),
            })
        })
        .collect()
}

fn records(text: &str) -> Result<Vec<Record>> {
    let mut out = Vec::new();
    let mut current: Option<Record> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            // comment-only lines do not end a record
            if raw.trim().is_empty() {
                out.extend(current.take());
            }
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
            line,
            detail: format!("expected key = value, got {content:?}"),
        })?;
        let rec = current.get_or_insert_with(|| Record {
            line,
            fields: BTreeMap::new(),
        });
        let key = key.trim().to_string();
        if rec.fields.contains_key(&key) {
            return Err(Error::Parse {
                line,
                detail: format!("duplicate key {key:?}"),
            });
        }
        rec.fields.insert(key, (line, value.trim().to_string()));
    }
    out.extend(current);
    Ok(out)
}

/// Parse the text format into a [`SpectralFunction`].
pub fn parse_spectral_function(text: &str) -> Result<SpectralFunction> {
    let mut f: Option<SpectralFunction> = None;
    for mut rec in records(text)? {
        let start = rec.line;
        let n: u32 = parse_value(rec.take("n")?, "n")?;
        let k: u32 = parse_value(rec.take("k")?, "k")?;
        let weight: u64 = match rec.take_opt("weight") {
            Some(v) => parse_value(v, "weight")?,
            None => 1,
        };
        let (kind_line, kind) = rec.take("kind")?;
        let profile = match kind.as_str() {
            "gaussian" => RadialProfile::gaussian(
                parse_value(rec.take("amplitude")?, "amplitude")?,
                parse_value(rec.take("m")?, "m")?,
                parse_value(rec.take("sigma")?, "sigma")?,
            ),
            "sampled" => {
                let rho = parse_list(rec.take("rho")?, "rho")?;
                let re = parse_list(rec.take("re")?, "re")?;
                let im = match rec.take_opt("im") {
                    Some(v) => parse_list(v, "im")?,
                    None => vec![0.0; re.len()],
                };
                if re.len() != rho.len() || im.len() != rho.len() {
                    return Err(Error::Parse {
                        line: start,
                        detail: "rho, re and im must have equal length".into(),
                    });
                }
                let values = re.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
                let mut s = SampledProfile::new(rho, values);
                if let Some((line, rule)) = rec.take_opt("interp") {
                    s = match rule.split_once(' ') {
                        None if rule == "cubic" => s,
                        Some(("blocks", d)) => {
                            let d = parse_value((line, d.trim().to_string()), "interp")?;
                            s.and_then(|s| s.with_blocks(d))
                        }
                        _ => {
                            return Err(Error::Parse {
                                line,
                                detail: format!("unknown interpolation {rule:?}"),
                            })
                        }
                    };
                }
                if let Some(v) = rec.take_opt("origin_power") {
                    let p = parse_value(v, "origin_power")?;
                    s = s.map(|s| s.with_origin_power(p));
                }
                s.map(RadialProfile::Sampled)
            }
            other => {
                return Err(Error::Parse {
                    line: kind_line,
                    detail: format!("unknown kind {other:?}"),
                })
            }
        }
        .map_err(|e| Error::Parse {
            line: start,
            detail: e.to_string(),
        })?;
        if let Some((key, (line, _))) = rec.fields.into_iter().next() {
            return Err(Error::Parse {
                line,
                detail: format!("unexpected key {key:?}"),
            });
        }
        let f = match &mut f {
            Some(f) => f,
            None => f.insert(SpectralFunction::new(n).map_err(|e| Error::Parse {
                line: start,
                detail: e.to_string(),
            })?),
        };
        if f.n != n {
            return Err(Error::Parse {
                line: start,
                detail: format!("dimension {n} differs from earlier records ({})", f.n),
            });
        }
        f.push(k, profile, weight).map_err(|e| Error::Parse {
            line: start,
            detail: e.to_string(),
        })?;
    }
    f.ok_or(Error::Parse {
        line: 0,
        detail: "no components".into(),
    })
}

fn join(values: impl Iterator<Item = f64>) -> String {
    values.map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

/// Serialize in the format read by [`parse_spectral_function`]. Numbers are
/// written in shortest round-trip form.
pub fn write_spectral_function(f: &SpectralFunction) -> String {
    let mut out = String::new();
    for (i, c) in f.components().iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "n = {}\nk = {}\nweight = {}", f.n, c.mode.k, c.weight);
        match &c.profile {
            RadialProfile::Gaussian {
                amplitude,
                power,
                width,
            } => {
                let _ = writeln!(
                    out,
                    "kind = gaussian\namplitude = {amplitude}\nm = {power}\nsigma = {width}"
                );
            }
            RadialProfile::Sampled(s) => {
                let _ = writeln!(out, "kind = sampled");
                if let Interpolation::Blocks(d) = s.rule() {
                    let _ = writeln!(out, "interp = blocks {d}");
                }
                if let Some(p) = s.origin_power() {
                    let _ = writeln!(out, "origin_power = {p}");
                }
                let _ = writeln!(out, "rho = {}", join(s.grid().iter().copied()));
                let _ = writeln!(out, "re = {}", join(s.values().iter().map(|v| v.re)));
                let _ = writeln!(out, "im = {}", join(s.values().iter().map(|v| v.im)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_MODES: &str = "\
# two-mode test function
n = 3
k = 0
kind = gaussian
amplitude = 1
m = 0
sigma = 1

n = 3
k = 2
weight = 5   # all five slots
kind = sampled
rho = 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8
re = 1, 1, 1, 1, 1, 1, 1, 1
";

    #[test]
    fn parses_and_round_trips() {
        let f = parse_spectral_function(TWO_MODES).unwrap();
        assert_eq!(f.n, 3);
        assert_eq!(f.components().len(), 2);
        assert_eq!(f.components()[1].weight, 5);
        let again = parse_spectral_function(&write_spectral_function(&f)).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn reports_line_numbers() {
        let bad = "n = 3\nk = 0\nkind = gaussian\namplitude = x\nm = 0\nsigma = 1\n";
        match parse_spectral_function(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        let unknown = "n = 3\nk = 0\nkind = gaussian\namplitude = 1\nm = 0\nsigma = 1\ncolour = red\n";
        assert!(matches!(
            parse_spectral_function(unknown),
            Err(Error::Parse { line: 7, .. })
        ));
    }

    #[test]
    fn rejects_mixed_dimensions_and_repeated_degree() {
        let mixed = "n = 3\nk = 0\nkind = gaussian\namplitude = 1\nm = 0\nsigma = 1\n\n\
                     n = 2\nk = 1\nkind = gaussian\namplitude = 1\nm = 0\nsigma = 1\n";
        assert!(parse_spectral_function(mixed).is_err());
        let repeated = "n = 3\nk = 0\nkind = gaussian\namplitude = 1\nm = 0\nsigma = 1\n\n\
                        n = 3\nk = 0\nkind = gaussian\namplitude = 2\nm = 0\nsigma = 1\n";
        assert!(parse_spectral_function(repeated).is_err());
        assert!(parse_spectral_function("# nothing\n").is_err());
    }
}

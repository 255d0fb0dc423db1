//! Estimates as computable objects: exact per-mode constants, equivalence
//! tables, endpoint probes and numeric LHS/RHS ratios.

mod morawetz;
mod sobolev;
mod strichartz;
mod trace;

use std::fmt;

use crate::modes::WeightMode;

pub use morawetz::{local_smoothing_ratio, morawetz_mode_ratio_exact, morawetz_ratio, morawetz_ratio_numeric};
pub use sobolev::{sobolev_trace_ratio, zonal_harmonic, SobolevVariant};
pub use strichartz::{strichartz_alpha, strichartz_time_decay, weighted_strichartz_ratio};
pub use trace::{
    endpoint_divergence_probe, equivalence_bounds, log_slope, stirling_limit, trace_mode_constant,
    trace_mode_quadrature, trace_ratio, ws_closed_form, EquivalenceBounds, ProbePoint, TraceMethod,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EstimateId {
    Trace,
    Morawetz,
    MorawetzLocal,
    StrichartzWeighted,
    SobolevInfty,
    SobolevDual,
    SobolevInftyZonal,
}

impl EstimateId {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimateId::Trace => "trace",
            EstimateId::Morawetz => "morawetz",
            EstimateId::MorawetzLocal => "morawetz-local",
            EstimateId::StrichartzWeighted => "strichartz-weighted",
            EstimateId::SobolevInfty => "sobolev-infty",
            EstimateId::SobolevDual => "sobolev-dual",
            EstimateId::SobolevInftyZonal => "sobolev-infty-zonal",
        }
    }
}

impl fmt::Display for EstimateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    ClosedForm,
    Quadrature,
    Simulation,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::ClosedForm => "closed-form",
            Method::Quadrature => "quadrature",
            Method::Simulation => "simulation",
        }
    }
}

/// One evaluated instance of an estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub estimate: EstimateId,
    pub n: u32,
    pub b: Option<f64>,
    pub a: Option<f64>,
    pub k: Option<u32>,
    pub r_exp: Option<f64>,
    pub q_exp: Option<f64>,
    pub alpha: Option<f64>,
    pub weight_mode: WeightMode,
    pub lhs: f64,
    pub rhs: f64,
    /// `None` when `rhs = 0`.
    pub ratio: Option<f64>,
    pub method: Method,
    pub grid_id: String,
}

pub const CSV_HEADER: &str = "estimate_id,n,b,a,k,r_exp,q_exp,alpha,weight_mode,lhs,rhs,ratio,method,grid_id";

/// Shortest round-trip form; `inf` for infinity, empty for absent values.
pub fn format_number(x: Option<f64>) -> String {
    match x {
        None => String::new(),
        Some(v) if v.is_infinite() => if v > 0.0 { "inf".into() } else { "-inf".into() },
        Some(v) => format!("{v:?}"),
    }
}

impl EstimateReport {
    pub(crate) fn new(estimate: EstimateId, n: u32, lhs: f64, rhs: f64, method: Method) -> Self {
        Self {
            estimate,
            n,
            b: None,
            a: None,
            k: None,
            r_exp: None,
            q_exp: None,
            alpha: None,
            weight_mode: WeightMode::ExactLambda,
            lhs,
            rhs,
            ratio: (rhs > 0.0).then(|| lhs / rhs),
            method,
            grid_id: String::new(),
        }
    }

    pub fn to_csv_row(&self) -> String {
        [
            self.estimate.as_str().to_string(),
            self.n.to_string(),
            format_number(self.b),
            format_number(self.a),
            self.k.map(|k| k.to_string()).unwrap_or_default(),
            format_number(self.r_exp),
            format_number(self.q_exp),
            format_number(self.alpha),
            self.weight_mode.as_str().to_string(),
            format_number(Some(self.lhs)),
            format_number(Some(self.rhs)),
            format_number(self.ratio),
            self.method.as_str().to_string(),
            self.grid_id.clone(),
        ]
        .join(",")
    }

    /// Ordering key for deterministic output.
    pub fn sort_key(&self) -> (EstimateId, u32, [u64; 5], Option<u32>) {
        let bits = |x: Option<f64>| x.map_or(0, |v| v.to_bits() ^ (1 << 63));
        (
            self.estimate,
            self.n,
            [bits(self.b), bits(self.a), bits(self.r_exp), bits(self.q_exp), bits(self.alpha)],
            self.k,
        )
    }
}

/// CSV text with header, one row per report.
pub fn reports_to_csv(reports: &[EstimateReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&r.to_csv_row());
        out.push('\n');
    }
    out
}

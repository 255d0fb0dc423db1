use std::collections::BTreeSet;

use angreg::exponents::*;
use angreg::inequalities::*;
use angreg::modes::{parse_spectral_function, RadialProfile, SpectralFunction, WeightMode};
use angreg::parallel;
use angreg::transforms::{Evolution, EvolutionSettings};
use angreg::verify::{self, Status, CHECK_CSV_HEADER};

use crate::output::{Cell, Table};
use crate::{Command, FailureKind, Opts, Outcome, UsageError, VariantName, WeightName};

type Usage<T> = Result<T, UsageError>;

fn usage<T>(msg: impl Into<String>) -> Usage<T> {
    Err(UsageError(msg.into()))
}

pub fn run(command: Command, opts: &Opts) -> Usage<Outcome> {
    if let Some(t) = opts.tol {
        if !(t > 0.0) {
            return usage(format!("tolerance must be positive, got {t}"));
        }
    }
    if opts.threads == Some(0) {
        return usage("--threads must be at least 1");
    }
    match command {
        Command::Trace => trace(opts),
        Command::Morawetz => morawetz(opts),
        Command::Strichartz => strichartz(opts),
        Command::Sobolev => sobolev(opts),
        Command::Divergence => divergence(opts),
        Command::Exponents => exponents(opts),
        Command::VerifyAll => verify_all(opts),
    }
}

/// Sorted, deduplicated copy of a float list.
fn sorted(xs: &[f64], what: &str) -> Usage<Vec<f64>> {
    if let Some(x) = xs.iter().find(|x| !x.is_finite()) {
        return usage(format!("{what} must be finite, got {x}"));
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    Ok(v)
}

fn int_set(xs: &[u32], default: &[u32]) -> Vec<u32> {
    let src = if xs.is_empty() { default } else { xs };
    src.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

fn dims(opts: &Opts, default: &[u32]) -> Usage<Vec<u32>> {
    let n = int_set(&opts.n, default);
    if let Some(bad) = n.iter().find(|&&n| n < 2) {
        return usage(format!("dimension n = {bad} must be at least 2"));
    }
    Ok(n)
}

fn b_grid(opts: &Opts) -> Usage<Vec<f64>> {
    if opts.b.is_empty() {
        return usage("empty b-grid; pass --b");
    }
    sorted(&opts.b, "b")
}

/// `1 + margin <= b <= upper - margin` with both ends strict at zero margin.
fn check_b(b: f64, upper: f64, margin: f64, what: &str) -> Usage<()> {
    let (lo, hi) = (1.0 + margin, upper - margin);
    let ok = if margin > 0.0 { b >= lo && b <= hi } else { b > lo && b < hi };
    if ok {
        Ok(())
    } else {
        usage(format!("b = {b} outside the {what} range ({lo}, {hi})"))
    }
}

fn weight_mode(opts: &Opts) -> WeightMode {
    match opts.weight_mode {
        WeightName::Exact => WeightMode::ExactLambda,
        WeightName::Bracket => WeightMode::BracketK,
    }
}

fn settings(opts: &Opts) -> EvolutionSettings {
    let mut s = EvolutionSettings {
        par: opts.parallelism(),
        ..Default::default()
    };
    if let Some(h) = opts.horizon {
        s.horizon = h;
    }
    if let Some(r) = opts.refine {
        s.refine = r;
    }
    s
}

fn degree(k: Option<u32>) -> String {
    k.map_or("mixed".into(), |k| k.to_string())
}

fn variant_name(v: SobolevVariant) -> String {
    match v {
        SobolevVariant::L2Omega => "l2".into(),
        SobolevVariant::Dual => "dual".into(),
        SobolevVariant::ZonalInfty { s } => format!("zonal s={s}"),
    }
}

fn label(parts: &[(&str, String)]) -> String {
    parts.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn trace(opts: &Opts) -> Usage<Outcome> {
    let ns = dims(opts, &[3])?;
    let bs = b_grid(opts)?;
    let k_max = opts.k_max.unwrap_or(20);
    let tol = opts.tol.unwrap_or(1e-6);
    let mut tuples = Vec::new();
    for &n in &ns {
        for &b in &bs {
            check_b(b, n as f64, opts.margin, &format!("trace (n = {n})"))?;
            tuples.push((n, b));
        }
    }
    let par = opts.parallelism();
    let mut out = Outcome::default();
    let mut header = vec!["n", "b", "k", "c_closed"];
    if opts.quadrature {
        header.extend(["c_quadrature", "rel_diff"]);
    }
    let mut table = Table::new("trace", &header);
    let mut eq = Table::new(
        "equivalence",
        &["n", "b", "k_max", "inf_v", "sup_v", "stirling_limit", "stirling_gap"],
    );
    let rows = parallel::map(&tuples, par, |&(n, b)| {
        let ks: Vec<u32> = (0..=k_max).collect();
        let vals: Vec<_> = ks
            .iter()
            .map(|&k| -> angreg::Result<(u32, f64, Option<f64>)> {
                let c = trace_mode_constant(n, b, k, TraceMethod::ClosedForm)?;
                let q = if opts.quadrature {
                    Some(trace_mode_constant(n, b, k, TraceMethod::Quadrature)?)
                } else {
                    None
                };
                Ok((k, c, q))
            })
            .collect();
        (vals, equivalence_bounds(n, b, k_max.max(10)))
    });
    for (&(n, b), (vals, bounds)) in tuples.iter().zip(rows) {
        for v in vals {
            let item = |k: u32| label(&[("n", n.to_string()), ("b", b.to_string()), ("k", k.to_string())]);
            let (k, c, q): (u32, f64, Option<f64>) = match v {
                Ok(v) => v,
                Err(e) => {
                    out.fail(format!("trace {}", item(0)), FailureKind::of(&e), e.to_string());
                    continue;
                }
            };
            let mut row: Vec<Cell> = vec![n.into(), b.into(), k.into(), c.into()];
            if let Some(q) = q {
                let d = (q / c - 1.0).abs();
                if !(d <= tol) {
                    out.fail(format!("trace {}", item(k)), FailureKind::Tolerance, format!("rel diff {d:e} > {tol:e}"));
                }
                row.extend([q.into(), d.into()]);
            }
            table.push(row);
        }
        match bounds {
            Ok(e) => eq.push(vec![
                n.into(),
                b.into(),
                e.k_max.into(),
                e.inf_v.into(),
                e.sup_v.into(),
                e.stirling_limit.into(),
                e.stirling_gap.into(),
            ]),
            Err(e) => out.fail(format!("equivalence n={n} b={b}"), FailureKind::of(&e), e.to_string()),
        }
    }
    out.tables = vec![table, eq];
    Ok(out)
}

/// Test data for one degree, or the loaded spectral function.
enum Data {
    Gaussian { sigma: f64 },
    File(SpectralFunction),
}

impl Data {
    fn load(opts: &Opts) -> Usage<Self> {
        if !(opts.sigma > 0.0) {
            return usage(format!("sigma must be positive, got {}", opts.sigma));
        }
        match &opts.data {
            None => Ok(Data::Gaussian { sigma: opts.sigma }),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
                let f = parse_spectral_function(&text)
                    .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
                Ok(Data::File(f))
            }
        }
    }

    /// `(n, k)` pairs to run; `k = None` for multi-mode data.
    fn cases(&self, opts: &Opts, default_n: &[u32]) -> Usage<Vec<(u32, Option<u32>)>> {
        match self {
            Data::Gaussian { .. } => {
                let ns = dims(opts, default_n)?;
                let ks = int_set(&opts.k, &[0]);
                Ok(ns.iter().flat_map(|&n| ks.iter().map(move |&k| (n, Some(k)))).collect())
            }
            Data::File(f) => {
                if !opts.n.is_empty() || !opts.k.is_empty() {
                    return usage("--n and --k come from the data file when --data is given");
                }
                let ks: Vec<u32> = f.components().iter().map(|c| c.mode.k).collect();
                Ok(vec![(f.n, if ks.len() == 1 { Some(ks[0]) } else { None })])
            }
        }
    }

    fn function(&self, n: u32, k: Option<u32>) -> angreg::Result<SpectralFunction> {
        match self {
            Data::Gaussian { sigma } => SpectralFunction::single(n, k.unwrap_or(0), RadialProfile::gaussian(1.0, 0, *sigma)?),
            Data::File(f) => Ok(f.clone()),
        }
    }
}

fn lowest_degree(data: &Data, k: Option<u32>) -> u32 {
    match data {
        Data::File(f) => f.components().iter().map(|c| c.mode.k).min().unwrap_or(0),
        Data::Gaussian { .. } => k.unwrap_or(0),
    }
}

fn dispersion(opts: &Opts) -> Usage<Vec<f64>> {
    let a = sorted(if opts.a.is_empty() { &[2.0][..] } else { &opts.a[..] }, "a")?;
    if let Some(bad) = a.iter().find(|&&a| !(a > 0.0)) {
        return usage(format!("a = {bad} must be positive"));
    }
    Ok(a)
}

fn morawetz(opts: &Opts) -> Usage<Outcome> {
    let data = Data::load(opts)?;
    let cases = data.cases(opts, &[3])?;
    let bs = b_grid(opts)?;
    let as_ = dispersion(opts)?;
    let tol = opts.tol.unwrap_or(5e-3);
    let radii = sorted(&opts.radii, "radii")?;
    let mut tuples = Vec::new();
    for &(n, k) in &cases {
        for &b in &bs {
            let upper = (n + 2 * lowest_degree(&data, k)) as f64;
            check_b(b, upper, opts.margin, &format!("Morawetz (n = {n})"))?;
            for &a in &as_ {
                tuples.push((n, k, b, a));
            }
        }
    }
    let settings = settings(opts);
    let par = opts.parallelism();
    let results = parallel::map(&tuples, par, |&(n, k, b, a)| {
        let f = data.function(n, k)?;
        let rep = morawetz_ratio_numeric(&f, b, a, &settings)?;
        let exact = k.map(|k| morawetz_mode_ratio_exact(n, b, a, k));
        Ok::<_, angreg::Error>((rep, exact))
    });
    let mut out = Outcome::default();
    let mut table = Table::new(
        "morawetz",
        &["n", "b", "a", "k", "lhs", "rhs", "ratio_sq", "exact_ratio_sq", "rel_error", "grid_id"],
    );
    for (&(n, k, b, a), res) in tuples.iter().zip(results) {
        let item = format!("morawetz n={n} b={b} a={a} k={}", degree(k));
        let (rep, exact) = match res {
            Ok(v) => v,
            Err(e) => {
                out.fail(item, FailureKind::of(&e), e.to_string());
                continue;
            }
        };
        let sq = rep.ratio.map(|r| r * r);
        let exact = match exact {
            Some(Ok(x)) => Some(x),
            Some(Err(_)) | None => None,
        };
        let err = match (sq, exact) {
            (Some(s), Some(x)) => Some((s / x - 1.0).abs()),
            _ => None,
        };
        if let Some(e) = err {
            if !(e <= tol) {
                out.fail(item, FailureKind::Tolerance, format!("rel error {e:e} > {tol:e}"));
            }
        }
        table.push(vec![
            n.into(),
            b.into(),
            a.into(),
            k.map_or(Cell::Num(None), Cell::from),
            rep.lhs.into(),
            rep.rhs.into(),
            sq.into(),
            exact.into(),
            err.into(),
            rep.grid_id.clone().into(),
        ]);
    }
    out.tables.push(table);
    if !radii.is_empty() {
        let pairs: Vec<(u32, Option<u32>, f64)> = cases
            .iter()
            .flat_map(|&(n, k)| as_.iter().map(move |&a| (n, k, a)))
            .collect();
        let results = parallel::map(&pairs, par, |&(n, k, a)| {
            local_smoothing_ratio(&data.function(n, k)?, a, &radii, &settings)
        });
        let mut reports = Vec::new();
        for (&(n, k, a), r) in pairs.iter().zip(results) {
            match r {
                Ok(r) => reports.extend(r),
                Err(e) => out.fail(format!("local smoothing n={n} a={a} k={}", degree(k)), FailureKind::of(&e), e.to_string()),
            }
        }
        out.tables.push(Table::from_reports("local_smoothing", &reports));
    }
    Ok(out)
}

fn strichartz(opts: &Opts) -> Usage<Outcome> {
    let data = Data::load(opts)?;
    let cases = data.cases(opts, &[3])?;
    let bs = b_grid(opts)?;
    let as_ = dispersion(opts)?;
    let tol = opts.tol.unwrap_or(1e-2);
    let mut rs: Vec<f64> = if opts.r.is_empty() {
        vec![2.0, 4.0, f64::INFINITY]
    } else {
        opts.r.iter().map(|r| r.to_f64()).collect()
    };
    rs.sort_by(f64::total_cmp);
    rs.dedup();
    if let Some(bad) = rs.iter().find(|&&r| !(r >= 2.0)) {
        return usage(format!("r = {bad} must be at least 2"));
    }
    let mut tuples = Vec::new();
    for &(n, k) in &cases {
        for &b in &bs {
            let upper = (n + 2 * lowest_degree(&data, k)) as f64;
            check_b(b, upper, opts.margin, &format!("Strichartz (n = {n})"))?;
            for &a in &as_ {
                tuples.push((n, k, b, a));
            }
        }
    }
    let settings = settings(opts);
    let results = parallel::map(&tuples, opts.parallelism(), |&(n, k, b, a)| {
        let f = data.function(n, k)?;
        let evo = Evolution::new(&f, a, &settings)?;
        rs.iter()
            .map(|&r| weighted_strichartz_ratio(&evo, &f, b, a, r))
            .collect::<angreg::Result<Vec<_>>>()
    });
    let mut out = Outcome::default();
    let mut reports = Vec::new();
    for (&(n, k, b, a), res) in tuples.iter().zip(results) {
        let item = format!("strichartz n={n} b={b} a={a} k={}", degree(k));
        match res {
            Ok(reps) => {
                for rep in &reps {
                    if let (Some(2.0), Some(k), Some(ratio)) = (rep.r_exp, k, rep.ratio) {
                        if let Ok(x) = morawetz_mode_ratio_exact(n, b, a, k) {
                            let e = (ratio * ratio / x - 1.0).abs();
                            if !(e <= tol) {
                                out.fail(format!("{item} r=2"), FailureKind::Tolerance, format!("rel error {e:e} > {tol:e}"));
                            }
                        }
                    }
                }
                reports.extend(reps);
            }
            Err(e) => out.fail(item, FailureKind::of(&e), e.to_string()),
        }
    }
    out.tables.push(Table::from_reports("strichartz", &reports));
    Ok(out)
}

fn sobolev(opts: &Opts) -> Usage<Outcome> {
    let data = Data::load(opts)?;
    let cases = data.cases(opts, &[3])?;
    let bs = b_grid(opts)?;
    let variants: BTreeSet<VariantName> = if opts.variant.is_empty() {
        [VariantName::L2, VariantName::Dual, VariantName::Zonal].into()
    } else {
        opts.variant.iter().copied().collect()
    };
    let mut tuples = Vec::new();
    for &(n, k) in &cases {
        for &b in &bs {
            check_b(b, n as f64, opts.margin, &format!("Sobolev (n = {n})"))?;
            for &v in &variants {
                let variant = match v {
                    VariantName::L2 => SobolevVariant::L2Omega,
                    VariantName::Dual => SobolevVariant::Dual,
                    VariantName::Zonal if n > 3 => {
                        if opts.variant.is_empty() {
                            continue;
                        }
                        return usage(format!("the zonal variant needs n in {{2, 3}}, got {n}"));
                    }
                    VariantName::Zonal => {
                        let s = opts.s.unwrap_or(0.5 * (n as f64 - b) + 0.25);
                        SobolevVariant::ZonalInfty { s }
                    }
                };
                tuples.push((n, k, b, variant));
            }
        }
    }
    let results = parallel::map(&tuples, opts.parallelism(), |&(n, k, b, variant)| {
        sobolev_trace_ratio(&data.function(n, k)?, b, variant)
    });
    let mut out = Outcome::default();
    let mut reports = Vec::new();
    for (&(n, k, b, v), res) in tuples.iter().zip(results) {
        match res {
            Ok(r) => reports.push(r),
            Err(e) => out.fail(format!("sobolev n={n} b={b} k={} {}", degree(k), variant_name(v)), FailureKind::of(&e), e.to_string()),
        }
    }
    reports.sort_by_key(|r| r.sort_key());
    out.tables.push(Table::from_reports("sobolev", &reports));
    if weight_mode(opts) == WeightMode::BracketK {
        // the sphere weight only enters the trace ratio
        out.tables.push(bracket_trace(opts, &cases, &bs)?);
    }
    Ok(out)
}

/// Trace ratios of the constant sphere function under the bracket weight.
fn bracket_trace(opts: &Opts, cases: &[(u32, Option<u32>)], bs: &[f64]) -> Usage<Table> {
    use angreg::modes::SphereFunction;
    let mut reports = Vec::new();
    for &(n, k) in cases {
        for &b in bs {
            let g = SphereFunction::new(n)
                .and_then(|g| g.with(k.unwrap_or(0), 1, 1.0))
                .map_err(|e| UsageError(e.to_string()))?;
            if let Ok(r) = trace_ratio(&g, b, weight_mode(opts)) {
                reports.push(r);
            }
        }
    }
    Ok(Table::from_reports("trace_bracket", &reports))
}

fn divergence(opts: &Opts) -> Usage<Outcome> {
    let ns = dims(opts, &[3])?;
    let bs = b_grid(opts)?;
    let ks = int_set(&opts.k, &[0]);
    let cutoffs = sorted(&opts.cutoffs, "cutoffs")?;
    if cutoffs.iter().any(|&c| !(c > 0.0)) {
        return usage("cutoffs must be positive");
    }
    let mut tuples = Vec::new();
    for &n in &ns {
        for &b in &bs {
            if !(b > 0.0) {
                return usage(format!("b = {b} must be positive"));
            }
            for &k in &ks {
                tuples.push((n, b, k));
            }
        }
    }
    let results = parallel::map(&tuples, opts.parallelism(), |&(n, b, k)| {
        let cuts = if !cutoffs.is_empty() {
            cutoffs.clone()
        } else if b <= 1.0 {
            vec![1e2, 1e3, 1e4]
        } else if b >= n as f64 {
            vec![1e-4, 1e-3, 1e-2]
        } else {
            vec![1e3, 1e4, 1e5]
        };
        endpoint_divergence_probe(n, b, k, &cuts)
    });
    let mut out = Outcome::default();
    let mut probe = Table::new("divergence", &["n", "b", "k", "cutoff", "value", "increment"]);
    let mut slopes = Table::new("log_slope", &["n", "b", "k", "slope"]);
    for (&(n, b, k), res) in tuples.iter().zip(results) {
        match res {
            Ok(pts) => {
                let mut prev: Option<f64> = None;
                for p in &pts {
                    probe.push(vec![n.into(), b.into(), k.into(), p.cutoff.into(), p.value.into(), prev.map(|v| p.value - v).into()]);
                    prev = Some(p.value);
                }
                if pts.len() >= 2 {
                    slopes.push(vec![n.into(), b.into(), k.into(), log_slope(&pts).into()]);
                }
            }
            Err(e) => out.fail(format!("divergence n={n} b={b} k={k}"), FailureKind::of(&e), e.to_string()),
        }
    }
    out.tables = vec![probe, slopes];
    Ok(out)
}

fn num_cell(x: Num) -> Cell {
    Cell::text(x)
}

fn exponents(opts: &Opts) -> Usage<Outcome> {
    if opts.wave == opts.schro {
        return usage("pass exactly one of --wave and --schro");
    }
    let eq = if opts.wave { Equation::Wave } else { Equation::Schrodinger };
    let ns = dims(opts, &[3])?;
    let mut out = Outcome::default();
    let fail = |out: &mut Outcome, item: String, e: angreg::Error| out.fail(item, FailureKind::of(&e), e.to_string());

    if eq == Equation::Wave {
        let mut t = Table::new("wave", &["n", "p_conf", "p_h", "p_c", "p_c_value"]);
        for &n in &ns {
            match wave_exponents(n) {
                Ok(w) => t.push(vec![n.into(), num_cell(w.p_conf), num_cell(w.p_h), num_cell(w.p_c), w.p_c.to_f64().into()]),
                Err(e) => fail(&mut out, format!("wave n={n}"), e),
            }
        }
        out.tables.push(t);
        if !opts.p.is_empty() {
            let mut t = Table::new(
                "strauss",
                &["n", "p", "s_c", "s_sb", "alpha", "s1", "s2", "moser_a", "p_range_ok", "gap_ok", "moser_ok", "half_minus_sc_ok", "valid"],
            );
            for &n in &ns {
                for &p in &opts.p {
                    match strauss_setup(n, p) {
                        Ok(s) => t.push(vec![
                            n.into(),
                            num_cell(p),
                            num_cell(s.s_c),
                            num_cell(s.s_sb),
                            num_cell(s.alpha),
                            num_cell(s.s1),
                            num_cell(s.s2),
                            num_cell(s.moser_a),
                            s.p_range_ok.into(),
                            s.gap_ok.into(),
                            s.moser_ok.into(),
                            s.half_minus_sc_ok.into(),
                            s.valid().into(),
                        ]),
                        Err(e) => fail(&mut out, format!("strauss n={n} p={p}"), e),
                    }
                }
            }
            out.tables.push(t);
        }
    } else {
        let mut t = Table::new("schrodinger", &["n", "p_l2", "p_l", "p_l_value"]);
        for &n in &ns {
            match schro_exponents(n) {
                Ok(s) => t.push(vec![n.into(), num_cell(s.p_l2), num_cell(s.p_l), s.p_l.to_f64().into()]),
                Err(e) => fail(&mut out, format!("schrodinger n={n}"), e),
            }
        }
        out.tables.push(t);
        if !opts.p.is_empty() {
            let header: Vec<&str> = WINDOW_CSV_HEADER.split(',').collect();
            let mut t = Table::new("nls_window", &header);
            for &n in &ns {
                for &p in &opts.p {
                    match nls_q_window(n, p) {
                        Ok(w) => t.push(window_row(&w, n, p)),
                        Err(e) => fail(&mut out, format!("nls window n={n} p={p}"), e),
                    }
                }
            }
            out.tables.push(t);
        }
    }

    if !opts.q.is_empty() && !opts.r.is_empty() {
        let mut t = Table::new(
            "admissibility",
            &["n", "q", "r", "p_ang", "classical", "reason", "generalized", "on_boundary", "s", "s_kn", "conjectural"],
        );
        for &n in &ns {
            for &q in &opts.q {
                for &r in &opts.r {
                    let p_ang = opts.p_ang.unwrap_or(r);
                    let c = classical_admissible(eq, q, r, n);
                    let g = generalized_window(eq, q, r, p_ang, n);
                    match (c, g) {
                        (Ok(c), Ok(g)) => t.push(vec![
                            n.into(),
                            num_cell(q),
                            num_cell(r),
                            num_cell(p_ang),
                            c.admissible.into(),
                            c.reason.into(),
                            g.in_window.into(),
                            g.on_boundary.into(),
                            num_cell(g.s),
                            num_cell(g.s_kn),
                            g.conjectural.into(),
                        ]),
                        (Err(e), _) | (_, Err(e)) => fail(&mut out, format!("admissibility n={n} q={q} r={r}"), e),
                    }
                }
            }
        }
        out.tables.push(t);
        if eq == Equation::Wave {
            let mut t = Table::new("interpolation", &["n", "q", "r", "eta", "t_eta", "condition_met", "limit", "s_kn"]);
            let eta = opts.eta.unwrap_or(Num::int(0));
            for &n in &ns {
                let ends = match InterpolationEndpoints::for_dimension(n) {
                    Ok(e) => e,
                    Err(e) => {
                        fail(&mut out, format!("interpolation n={n}"), e);
                        continue;
                    }
                };
                for &q in &opts.q {
                    for &r in &opts.r {
                        match interpolation_bookkeeping(n, q, r, eta, &ends, Num::int(0)) {
                            Ok(i) => t.push(vec![
                                n.into(),
                                num_cell(q),
                                num_cell(r),
                                num_cell(eta),
                                num_cell(i.t_eta),
                                i.condition_met.into(),
                                num_cell(i.limit),
                                num_cell(i.s_kn),
                            ]),
                            // only the reduced cases are defined; other pairs are simply skipped
                            Err(angreg::Error::Window { .. }) => {}
                            Err(e) => fail(&mut out, format!("interpolation n={n} q={q} r={r}"), e),
                        }
                    }
                }
            }
            out.tables.push(t);
        }
    }

    if eq == Equation::Wave && !opts.q.is_empty() {
        let mut t = Table::new("harmse_oberlin", &["n", "q", "r", "in_window"]);
        for &n in &ns {
            for &q in &opts.q {
                match harmse_oberlin_check(q, n) {
                    Ok(h) => t.push(vec![n.into(), num_cell(q), num_cell(h.r), h.in_window.into()]),
                    Err(e) => fail(&mut out, format!("harmse-oberlin n={n} q={q}"), e),
                }
            }
        }
        out.tables.push(t);
    }

    if !opts.q.is_empty() && !opts.alpha.is_empty() {
        let a = match eq {
            Equation::Wave => Num::int(1),
            Equation::Schrodinger => Num::int(2),
        };
        let mut t = Table::new("morawetz_strichartz", &["n", "q", "alpha", "a", "s", "s1", "valid"]);
        for &n in &ns {
            for &q in &opts.q {
                for &alpha in &opts.alpha {
                    match thm18_params(q, alpha, n, a) {
                        Ok(p) => t.push(vec![n.into(), num_cell(q), num_cell(alpha), num_cell(a), num_cell(p.s), num_cell(p.s1), p.valid.into()]),
                        Err(e) => fail(&mut out, format!("regularities n={n} q={q} alpha={alpha}"), e),
                    }
                }
            }
        }
        out.tables.push(t);
    }
    Ok(out)
}

/// The window CSV row split back into cells.
fn window_row(w: &AdmissibilityWindow, n: u32, p: Num) -> Vec<Cell> {
    let provenance = w
        .constraints
        .iter()
        .map(|c| format!("{}: {c}", c.tag))
        .collect::<Vec<_>>()
        .join("; ");
    vec![
        n.into(),
        num_cell(p),
        Cell::text(""),
        Cell::text(""),
        w.variable.clone().into(),
        w.intersection.as_ref().map_or("empty".to_string(), |i| i.to_string()).into(),
        w.empty.into(),
        provenance.into(),
    ]
}

fn verify_all(opts: &Opts) -> Usage<Outcome> {
    let ids: Vec<u32> = if opts.only.is_empty() {
        verify::CRITERIA.iter().map(|&(id, _)| id).collect()
    } else {
        int_set(&opts.only, &[])
    };
    let criteria = verify::verify(&ids, opts.parallelism()).map_err(|e| UsageError(e.to_string()))?;
    let mut out = Outcome::default();
    let mut summary = Table::new("summary", &["criterion", "title", "status", "checks", "failed"]);
    for c in &criteria {
        eprintln!("{}", c.summary());
        let judged = c.checks.iter().filter(|k| k.status != Status::Excluded).count() as u32;
        let failed = c.failures().count() as u32;
        summary.push(vec![
            c.id.into(),
            c.title.into(),
            if c.passed() { "pass" } else { "fail" }.into(),
            judged.into(),
            failed.into(),
        ]);
        for k in c.failures() {
            let kind = match k.status {
                Status::Budget => FailureKind::Budget,
                Status::Fail => FailureKind::Tolerance,
                _ => FailureKind::Error,
            };
            let detail = if k.note.is_empty() {
                format!("error {:e} > tolerance {:e}", k.error, k.tolerance)
            } else {
                k.note.clone()
            };
            out.fail(format!("criterion {} {}", c.id, k.label), kind, detail);
        }
        if c.checks.iter().all(|k| k.status == Status::Excluded) {
            out.fail(format!("criterion {}", c.id), FailureKind::Error, "no checks ran");
        }
    }
    let header: Vec<&str> = CHECK_CSV_HEADER.split(',').collect();
    let mut table = Table::new("checks", &header);
    for c in &criteria {
        for k in &c.checks {
            table.push(vec![
                c.id.into(),
                k.label.clone().into(),
                k.value.into(),
                k.reference.into(),
                k.error.into(),
                k.tolerance.into(),
                k.status.as_str().into(),
                k.note.clone().into(),
            ]);
        }
    }
    out.tables = vec![summary, table];
    Ok(out)
}

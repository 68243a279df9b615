use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use qeuler::families::{
    classical_euler, euler_weighted, euler_weighted_star, evaluate, EulerFamilySpec, FamilyKind,
};
use qeuler::integrator::{
    multivariate_integral_levels, Integrand, IntegrationContext, MeasureSpec, DEFAULT_BUDGET,
};
use qeuler::lab::{identities, resolve_selection, run_suite, Grid, Status, SuiteReport};
use qeuler::numeric::rational::Rational;
use qeuler::numeric::{Backend, Field, FunctionField, PadicField, Point, RationalField, Valued};

use crate::args::{ComputeArgs, Format, IntegrateArgs, TableArgs, VerifyArgs};
use crate::literal::{parse_list, parse_range, parse_unsigned_range, QLiteral};
use crate::{CliError, Outcome};

const DEFAULT_PRECISION: i64 = 20;

/// Column order of `table` output.
pub const TABLE_COLUMNS: [&str; 9] = ["family", "n", "r", "h", "x", "backend", "p", "q", "value"];

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

enum Scalars {
    Rat(RationalField),
    Func(FunctionField),
    Padic(PadicField),
}

macro_rules! with_field {
    ($s:expr, $f:ident => $body:expr) => {
        match $s {
            Scalars::Rat($f) => $body,
            Scalars::Func($f) => $body,
            Scalars::Padic($f) => $body,
        }
    };
}

struct Resolved {
    scalars: Scalars,
    backend: Backend,
    p: Option<u64>,
    q: Option<String>,
}

fn padic_field(p: Option<u64>, prec: Option<i64>, q: &QLiteral) -> Result<(PadicField, Rational), CliError> {
    let p = p.ok_or_else(|| usage("the padic backend needs --p"))?;
    let q = match q {
        QLiteral::Rational(r) => r.clone(),
        _ => Rational::from_integer((p as i64 + 1).into()),
    };
    let f = PadicField::new(p, prec.unwrap_or(DEFAULT_PRECISION), &q).map_err(|e| usage(e.to_string()))?;
    Ok((f, q))
}

fn resolve(
    backend: Option<&str>,
    q: Option<&str>,
    p: Option<u64>,
    prec: Option<i64>,
) -> Result<Resolved, CliError> {
    let lit = QLiteral::parse(q).map_err(CliError::Usage)?;
    let backend = match backend {
        Some("rat") => Backend::Rational,
        Some("func") => Backend::Function,
        Some("padic") => Backend::Padic,
        Some(other) => return Err(usage(format!("unknown backend '{other}' (rat, func or padic)"))),
        None => match lit {
            QLiteral::Omitted => Backend::Function,
            QLiteral::OnePlusP => Backend::Padic,
            QLiteral::Rational(_) => Backend::Rational,
        },
    };
    if backend != Backend::Padic && (p.is_some() || prec.is_some()) {
        return Err(usage("--p and --prec apply only to the padic backend"));
    }
    match backend {
        Backend::Function => match lit {
            QLiteral::Omitted => Ok(Resolved {
                scalars: Scalars::Func(FunctionField::new()),
                backend,
                p: None,
                q: None,
            }),
            _ => Err(usage("the func backend keeps q symbolic; drop --q")),
        },
        Backend::Rational => match lit {
            QLiteral::Rational(r) => {
                let f = RationalField::new(r.clone()).map_err(|e| usage(e.to_string()))?;
                Ok(Resolved {
                    scalars: Scalars::Rat(f),
                    backend,
                    p: None,
                    q: Some(r.to_string()),
                })
            }
            _ => Err(usage("the rat backend needs --q a/b")),
        },
        Backend::Padic => {
            let (f, q) = padic_field(p, prec, &lit)?;
            Ok(Resolved {
                scalars: Scalars::Padic(f),
                backend,
                p,
                q: Some(q.to_string()),
            })
        }
    }
}

fn family(name: Option<&str>) -> Result<FamilyKind, CliError> {
    let name = name.ok_or_else(|| usage("--family is required"))?;
    FamilyKind::from_name(name).ok_or_else(|| {
        let all: Vec<_> = FamilyKind::ALL.iter().map(|k| k.name()).collect();
        usage(format!("unknown family '{name}' (one of {})", all.join(", ")))
    })
}

fn weight_lists(w: Option<&str>, delta: Option<&str>) -> Result<(Vec<i64>, Vec<i64>), CliError> {
    let w = w.map(parse_list).transpose().map_err(CliError::Usage)?.unwrap_or_default();
    let d = delta.map(parse_list).transpose().map_err(CliError::Usage)?.unwrap_or_default();
    Ok((w, d))
}

fn join(v: &[i64]) -> String {
    v.iter().map(i64::to_string).collect::<Vec<_>>().join(",")
}

/// One evaluated family member.
#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub id: String,
    pub params: BTreeMap<String, String>,
    pub backend: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    pub value: String,
}

fn spec_params(spec: &EulerFamilySpec) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert("n".into(), spec.n.to_string());
    if let Some(r) = spec.r {
        m.insert("r".into(), r.to_string());
    }
    if let Some(h) = spec.h {
        m.insert("h".into(), h.to_string());
    }
    if let Point::Int(x) = spec.x {
        m.insert("x".into(), x.to_string());
    }
    if !spec.weights.is_empty() {
        m.insert("w".into(), join(&spec.weights));
        m.insert("delta".into(), join(&spec.deltas));
    }
    m
}

fn build_spec(
    kind: FamilyKind,
    n: u32,
    r: Option<u32>,
    h: Option<i64>,
    x: i64,
    w: &[i64],
    d: &[i64],
) -> Result<EulerFamilySpec, CliError> {
    let mut spec = EulerFamilySpec::new(kind, n).with_x(x);
    spec.r = r;
    spec.h = h;
    spec.weights = w.to_vec();
    spec.deltas = d.to_vec();
    spec.validate().map_err(|e| usage(e.to_string()))?;
    Ok(spec)
}

fn evaluate_record(kind: FamilyKind, spec: &EulerFamilySpec, res: &Resolved) -> Result<Record, CliError> {
    let value = with_field!(&res.scalars, f => f.render(&evaluate(f, spec)?));
    Ok(Record {
        id: kind.name().to_string(),
        params: spec_params(spec),
        backend: res.backend.name().to_string(),
        p: res.p.map(|p| p.to_string()),
        q: res.q.clone(),
        value,
    })
}

fn classical_record(spec: &EulerFamilySpec) -> Record {
    let Point::Int(x) = spec.x else { unreachable!("integer x") };
    let value = classical_euler(spec.n, &Rational::from_integer(x.into()), spec.r.unwrap_or(1));
    Record {
        id: FamilyKind::Classical.name().to_string(),
        params: spec_params(spec),
        backend: Backend::Rational.name().to_string(),
        p: None,
        q: None,
        value: value.to_string(),
    }
}

fn check_classical(backend: Option<&str>, q: Option<&str>, p: Option<u64>, prec: Option<i64>) -> Result<(), CliError> {
    if !matches!(backend, None | Some("rat")) || q.is_some() || p.is_some() || prec.is_some() {
        return Err(usage("the classical family is exact at q = 1 and takes no backend, q, p or prec"));
    }
    Ok(())
}

pub fn compute(a: &ComputeArgs) -> Result<Outcome, CliError> {
    let kind = family(a.family.as_deref())?;
    let n = a.n.ok_or_else(|| usage("--n is required"))?;
    let (w, d) = weight_lists(a.w.as_deref(), a.delta.as_deref())?;
    let spec = build_spec(kind, n, a.r, a.h, a.x.unwrap_or(0), &w, &d)?;
    let record = if kind == FamilyKind::Classical {
        check_classical(a.backend.as_deref(), a.q.as_deref(), a.p, a.prec)?;
        classical_record(&spec)
    } else {
        let res = resolve(a.backend.as_deref(), a.q.as_deref(), a.p, a.prec)?;
        evaluate_record(kind, &spec, &res)?
    };
    match a.format.unwrap_or(Format::Plain) {
        Format::Plain => Ok(Outcome::ok(format!("{}\n", record.value))),
        Format::Json => Ok(Outcome::ok(format!("{}\n", serde_json::to_string(&record).expect("serializable")))),
        Format::Csv => Err(usage("compute prints plain or json")),
    }
}

fn table_row(r: &Record) -> Vec<String> {
    let param = |k: &str| r.params.get(k).cloned().unwrap_or_default();
    vec![
        r.id.clone(),
        param("n"),
        param("r"),
        param("h"),
        param("x"),
        r.backend.clone(),
        r.p.clone().unwrap_or_default(),
        r.q.clone().unwrap_or_default(),
        r.value.clone(),
    ]
}

fn render_table(records: &[Record], format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Compute(e.to_string());
            w.write_record(TABLE_COLUMNS).map_err(io)?;
            for r in records {
                w.write_record(table_row(r)).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Compute(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("utf-8 cells"))
        }
        Format::Json => {
            let rows: Vec<BTreeMap<&str, String>> = records
                .iter()
                .map(|r| TABLE_COLUMNS.iter().copied().zip(table_row(r)).collect())
                .collect();
            Ok(format!("{}\n", serde_json::to_string_pretty(&rows).expect("serializable")))
        }
        Format::Plain => Err(usage("table writes csv or json")),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<String, CliError> {
    match path {
        None => Ok(text.to_string()),
        Some(p) => {
            let mut file = std::fs::File::create(p)
                .map_err(|e| CliError::Compute(format!("cannot write {}: {e}", p.display())))?;
            file.write_all(text.as_bytes())
                .map_err(|e| CliError::Compute(format!("cannot write {}: {e}", p.display())))?;
            Ok(String::new())
        }
    }
}

pub fn table(a: &TableArgs) -> Result<Outcome, CliError> {
    let kind = family(a.family.as_deref())?;
    let ns = parse_unsigned_range(a.n.as_deref().ok_or_else(|| usage("--n is required"))?).map_err(CliError::Usage)?;
    let rs: Option<Vec<u32>> = a
        .r
        .as_deref()
        .map(|s| parse_unsigned_range(s).map(|r| r.collect()))
        .transpose()
        .map_err(CliError::Usage)?;
    let hs: Option<Vec<i64>> = a
        .h
        .as_deref()
        .map(|s| parse_range(s).map(|r| r.collect()))
        .transpose()
        .map_err(CliError::Usage)?;
    let xs = parse_range(a.x.as_deref().unwrap_or("0")).map_err(CliError::Usage)?;
    let (w, d) = weight_lists(a.w.as_deref(), a.delta.as_deref())?;
    let opt = |v: Option<Vec<u32>>| v.map_or(vec![None], |v| v.into_iter().map(Some).collect());
    let opt_h = |v: Option<Vec<i64>>| v.map_or(vec![None], |v| v.into_iter().map(Some).collect());
    let mut specs = Vec::new();
    for n in ns {
        for r in opt(rs.clone()) {
            for h in opt_h(hs.clone()) {
                for x in xs.clone() {
                    specs.push(build_spec(kind, n, r, h, x, &w, &d)?);
                }
            }
        }
    }
    let records: Vec<Record> = if kind == FamilyKind::Classical {
        check_classical(a.backend.as_deref(), a.q.as_deref(), a.p, a.prec)?;
        specs.par_iter().map(classical_record).collect()
    } else {
        let res = resolve(a.backend.as_deref(), a.q.as_deref(), a.p, a.prec)?;
        specs
            .par_iter()
            .map(|s| evaluate_record(kind, s, &res))
            .collect::<Result<_, _>>()?
    };
    let text = render_table(&records, a.format.unwrap_or(Format::Csv))?;
    Ok(Outcome::ok(write_out(a.out.as_deref(), &text)?))
}

#[derive(Debug, Serialize)]
struct LevelValue {
    level: u32,
    value: String,
}

#[derive(Debug, Serialize)]
struct IntegrateReport {
    p: String,
    q: String,
    n: u32,
    x: i64,
    w: String,
    delta: String,
    a: String,
    levels: Vec<LevelValue>,
    diff_valuations: Vec<String>,
    achieved_precision: i64,
    monotone: bool,
    stabilizing: bool,
    closed_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form_note: Option<String>,
    agreement_valuation: Option<String>,
    agrees: Option<bool>,
}

fn render_valuation(v: Option<i64>) -> String {
    v.map_or_else(|| "inf".to_string(), |v| v.to_string())
}

pub fn integrate(a: &IntegrateArgs) -> Result<Outcome, CliError> {
    let lit = QLiteral::parse(a.q.as_deref()).map_err(CliError::Usage)?;
    let (f, q) = padic_field(a.p, a.prec, &lit)?;
    let p = f.prime();
    let lists = [("--w", &a.w), ("--delta", &a.delta), ("--a", &a.a)]
        .into_iter()
        .map(|(flag, s)| {
            s.as_deref()
                .map(parse_list)
                .transpose()
                .map(|v| (flag, v))
                .map_err(CliError::Usage)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let r = match a.r {
        Some(r) => r as usize,
        None => lists.iter().filter_map(|(_, v)| v.as_ref().map(Vec::len)).max().unwrap_or(1),
    };
    if r == 0 {
        return Err(usage("--r must be at least 1"));
    }
    for (flag, v) in &lists {
        if let Some(v) = v {
            if v.len() != r {
                return Err(usage(format!("{flag} needs {r} entries, got {}", v.len())));
            }
        }
    }
    if a.h.is_some() && a.a.is_some() {
        return Err(usage("--h and --a both set the weight exponents; give one"));
    }
    let w = lists[0].1.clone().unwrap_or_else(|| vec![1; r]);
    let delta = lists[1].1.clone().unwrap_or_else(|| vec![0; r]);
    let weights = match (a.h, lists[2].1.clone()) {
        (Some(h), _) => (1..=r as i64).map(|j| h - j).collect(),
        (None, Some(v)) => v,
        (None, None) => vec![0; r],
    };
    let levels = parse_unsigned_range(a.levels.as_deref().unwrap_or("1..3")).map_err(CliError::Usage)?;
    if levels.is_empty() || *levels.start() == 0 {
        return Err(usage("--levels must be a nonempty range A..B with A >= 1"));
    }
    let n = a.n.unwrap_or(0);
    let x = a.x.unwrap_or(0);
    let ctx = IntegrationContext::new(p, f.precision())
        .map_err(|e| usage(e.to_string()))?
        .with_budget(a.budget.unwrap_or(DEFAULT_BUDGET));
    let g = Integrand::bracket_power(x, w.clone(), n, 0).map_err(|e| usage(e.to_string()))?;
    let m = MeasureSpec::new(delta.clone(), weights.clone()).map_err(|e| usage(e.to_string()))?;
    let res = multivariate_integral_levels(&ctx, &f, &g, &m, levels.clone())?;

    let px = Point::Int(x);
    let closed = if weights.iter().all(|&v| v == 0) {
        Some(euler_weighted(&f, n, &px, &w, &delta))
    } else if delta.iter().all(|&v| v == 0) {
        Some(euler_weighted_star(&f, n, &px, &w, &weights))
    } else {
        None
    };
    let (closed_form, closed_form_note, agreement) = match closed {
        Some(Ok(c)) => {
            let v = f.p_valuation(&f.sub(&c, &res.value), p);
            (Some(f.render(&c)), None, Some(v))
        }
        Some(Err(e)) => (None, Some(e.to_string()), None),
        None => (None, Some("no closed form for mixed measure and weight exponents".into()), None),
    };
    let report = IntegrateReport {
        p: p.to_string(),
        q: q.to_string(),
        n,
        x,
        w: join(&w),
        delta: join(&delta),
        a: join(&weights),
        levels: levels
            .zip(&res.values)
            .map(|(level, v)| LevelValue { level, value: f.render(v) })
            .collect(),
        diff_valuations: res.diff_valuations.iter().map(|v| render_valuation(*v)).collect(),
        achieved_precision: res.achieved_precision,
        monotone: res.monotone,
        stabilizing: res.stabilizing,
        closed_form,
        closed_form_note,
        agreement_valuation: agreement.map(render_valuation),
        agrees: agreement.map(|v| v.map_or(true, |v| v >= res.achieved_precision)),
    };
    let text = match a.format.unwrap_or(Format::Plain) {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report).expect("serializable")),
        Format::Plain => {
            let mut s = String::new();
            for lv in &report.levels {
                s += &format!("level {}: {}\n", lv.level, lv.value);
            }
            for (i, v) in report.diff_valuations.iter().enumerate() {
                let lo = res.first_level + i as u32;
                s += &format!("diff {}->{}: v={}\n", lo, lo + 1, v);
            }
            s += &format!("achieved precision: {}\n", report.achieved_precision);
            s += &format!("monotone: {}\n", report.monotone);
            s += &format!("stabilizing: {}\n", report.stabilizing);
            match (&report.closed_form, &report.closed_form_note) {
                (Some(c), _) => {
                    s += &format!("closed form: {c}\n");
                    s += &format!(
                        "agreement: v={} ({})\n",
                        report.agreement_valuation.as_deref().unwrap_or("?"),
                        if report.agrees == Some(true) { "within achieved precision" } else { "DISAGREES" }
                    );
                }
                (None, Some(note)) => s += &format!("closed form: unavailable ({note})\n"),
                (None, None) => {}
            }
            s
        }
        Format::Csv => return Err(usage("integrate prints plain or json")),
    };
    Ok(Outcome::ok(text))
}

fn parse_backends(s: Option<&str>) -> Result<Vec<Backend>, CliError> {
    let Some(s) = s else { return Ok(Vec::new()) };
    s.split(',')
        .map(|b| match b.trim() {
            "rat" => Ok(Backend::Rational),
            "func" => Ok(Backend::Function),
            "padic" => Ok(Backend::Padic),
            other => Err(usage(format!("unknown backend '{other}' (rat, func or padic)"))),
        })
        .collect()
}

/// One line per identity, the documented discrepancies, and a summary line.
pub fn render_suite(rep: &SuiteReport) -> String {
    let mut s = String::new();
    for i in &rep.summary.identities {
        let status = match (i.pass, i.fail) {
            (_, f) if f > 0 && i.documented => "FAIL (documented)",
            (_, f) if f > 0 => "FAIL",
            (0, 0) => "SKIP",
            _ => "PASS",
        };
        s += &format!(
            "{:<18} {:<30} {}/{} [{}]{}\n",
            status,
            i.id,
            i.pass,
            i.pass + i.fail,
            i.backends.join(","),
            if i.skipped > 0 { format!(" {} skipped", i.skipped) } else { String::new() }
        );
    }
    s += "documented discrepancies:\n";
    if rep.summary.documented_discrepancies.is_empty() {
        s += "  none\n";
    }
    for d in &rep.summary.documented_discrepancies {
        s += &format!("  {}: {}\n", d.id, d.note);
    }
    s += "rejected readings:\n";
    for r in &rep.summary.rejected_readings {
        s += &format!("  {r}\n");
    }
    let undocumented = if rep.summary.undocumented_failures.is_empty() {
        "none".to_string()
    } else {
        rep.summary.undocumented_failures.join(", ")
    };
    s += &format!(
        "summary: {} pass, {} fail, {} skipped; pass rate {}; undocumented failures: {}\n",
        rep.summary.pass,
        rep.summary.fail,
        rep.summary.skipped,
        rep.summary.pass_rate.as_deref().unwrap_or("undefined"),
        undocumented
    );
    s
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome, CliError> {
    if a.list {
        let mut s = String::new();
        for i in identities() {
            s += &format!("{:<30} {}\n", i.id, i.statement);
        }
        return Ok(Outcome::ok(s));
    }
    let selection: Vec<String> = a
        .suite
        .as_deref()
        .unwrap_or("all")
        .split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect();
    resolve_selection(&selection).map_err(CliError::Usage)?;
    let mut grid = Grid::default();
    if let Some(v) = a.max_n {
        grid.max_n = v;
    }
    if let Some(v) = a.max_r {
        grid.max_r = v.max(1);
    }
    if let Some(v) = a.max_x {
        grid.max_x = v;
    }
    if let Some(v) = a.level {
        if v == 0 {
            return Err(usage("--level must be at least 1"));
        }
        grid.level = v;
    }
    if let Some(ps) = &a.primes {
        grid.primes = parse_list(ps)
            .map_err(CliError::Usage)?
            .into_iter()
            .map(|p| {
                u64::try_from(p)
                    .ok()
                    .filter(|&p| qeuler::numeric::rational::is_odd_prime(&p.into()))
                    .ok_or_else(|| usage(format!("--primes: {p} is not an odd prime")))
            })
            .collect::<Result<_, _>>()?;
    }
    let backends = parse_backends(a.backend.as_deref())?;
    let rep = run_suite(&selection, &grid, &backends)?;
    if let Some(path) = &a.report {
        write_out(Some(path), &format!("{}\n", rep.to_json()))?;
    }
    let text = match a.format.unwrap_or(Format::Plain) {
        Format::Plain => render_suite(&rep),
        Format::Json => format!("{}\n", rep.to_json()),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Compute(e.to_string());
            w.write_record(["id", "point", "status", "lhs", "rhs"]).map_err(io)?;
            for r in &rep.results {
                let point: Vec<String> = r.point.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let status = match r.status {
                    Status::Pass => "pass",
                    Status::Fail => "fail",
                    Status::Skipped => "skipped",
                };
                w.write_record([
                    r.id.as_str(),
                    &point.join(" "),
                    status,
                    r.lhs.as_deref().unwrap_or(""),
                    r.rhs.as_deref().unwrap_or(""),
                ])
                .map_err(io)?;
            }
            String::from_utf8(w.into_inner().map_err(|e| CliError::Compute(e.to_string()))?).expect("utf-8")
        }
    };
    Ok(Outcome {
        stdout: text,
        code: if rep.ok() { 0 } else { 1 },
    })
}

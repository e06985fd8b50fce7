//! The `qr` command line front end.
//!
//! Every command prints one report. JSON reports are objects with the keys
//! `command`, `input_sha256`, `gamma`, `seed`, `polarization` and `result`;
//! CSV reports carry the same header as `# key: value` lines above the table.
//! Exit codes: 0 success, 2 failed check, 3 input error, 4 search exhausted.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::character::{FormalCharacter, LatticeBox};
use crate::corpus;
use crate::document::{parse_rational_vector, ModelDocument};
use crate::error::{Error, Result};
use crate::geometry::construct_cone;
use crate::linalg::{fmt_qvec, QVec};
use crate::localization::{is_shifted_antisymmetric, truncated_series_oracle, FixedPointModel, Multiplicities, Polarization};
use crate::quasipoly::{self, FitOptions};
use crate::reduction::{qr_check, LevelDocument, QrCheckOptions, QrMode, ReducedLevelData};
use crate::root_lattice::RootSystem;

#[derive(Parser, Debug)]
#[command(name = "qr", version, about = "Exact index multiplicities and [Q,R]=0 checks from fixed-point data")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct ModelArgs {
    /// Model document (JSON).
    #[arg(long, value_name = "FILE", conflicts_with = "example")]
    model: Option<PathBuf>,
    /// Built-in example model.
    #[arg(long, value_name = "NAME")]
    example: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Seed of the random polarization vector.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Include wall-clock time in the report (makes it non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a built-in model document, or `list` for the names.
    Examples { name: String },
    /// Table of the multiplicities m(k, lambda).
    MultTable {
        #[command(flatten)]
        model: ModelArgs,
        /// `a..b` (inclusive) or a single level.
        #[arg(long, default_value = "1..3")]
        k: String,
        /// `lo:hi` for every coordinate or `lo:hi,lo:hi,...`; defaults to a box
        /// around k times the moment image.
        #[arg(long = "box", allow_hyphen_values = true)]
        region: Option<String>,
        /// Only dominant lambda.
        #[arg(long)]
        dominant: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Fit the quasi-polynomial on the cone over p.
    FitQp {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        period: Option<i64>,
        /// Largest k sampled; the upper half is held out.
        #[arg(long)]
        horizon: Option<i64>,
        /// Use this gamma instead of searching, e.g. `1/2,0`.
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Compare multiplicities against the reduced side.
    QrCheck {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, allow_hyphen_values = true)]
        xi: Option<String>,
        /// vanishing, point-case or fit-case; chosen from the model by default.
        #[arg(long)]
        mode: Option<String>,
        #[arg(long, default_value_t = 20)]
        kmax: i64,
        /// Reduced level data (JSON), for models that are not toric.
        #[arg(long, value_name = "FILE")]
        level: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long)]
        period: Option<i64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Brute-force series expansion of the index character.
    Oracle {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value = "1")]
        k: String,
        #[arg(long = "box", allow_hyphen_values = true)]
        region: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

struct Report {
    header: Vec<(&'static str, Value)>,
    result: Value,
    table: Option<(Vec<String>, Vec<Vec<String>>)>,
}

impl Report {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut obj = Map::new();
                for (k, v) in &self.header {
                    obj.insert((*k).to_string(), v.clone());
                }
                obj.insert("result".into(), self.result.clone());
                let mut s = serde_json::to_string_pretty(&Value::Object(obj)).expect("serialisable");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::new();
                for (k, v) in &self.header {
                    let text = match v {
                        Value::String(t) => t.clone(),
                        other => other.to_string(),
                    };
                    s.push_str(&format!("# {k}: {text}\n"));
                }
                if let Some((head, rows)) = &self.table {
                    s.push_str(&head.join(","));
                    s.push('\n');
                    for r in rows {
                        s.push_str(&r.join(","));
                        s.push('\n');
                    }
                }
                s
            }
        }
    }
}

/// Parses `a..b`, `a..=b` or `n` into an inclusive range.
pub fn parse_k_range(s: &str) -> Result<(i64, i64)> {
    let bad = || Error::Parse(format!("bad k range '{s}', expected a..b or n"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        Ok((a, b))
    } else {
        let n: i64 = s.parse().map_err(|_| bad())?;
        Ok((n, n))
    }
}

fn load_model(args: &ModelArgs) -> Result<(FixedPointModel, ModelDocument)> {
    let doc = match (&args.model, &args.example) {
        (Some(path), _) => ModelDocument::parse(&std::fs::read_to_string(path)?)?,
        (None, Some(name)) => ModelDocument::from_model(&corpus::by_name(name)?),
        (None, None) => return Err(Error::Parse("one of --model FILE or --example NAME is required".into())),
    };
    Ok((doc.to_model()?, doc))
}

/// Box containing the support of `m(k, .)`: the bounding box of `k mu`
/// widened by the sum of the positive roots.
fn default_box(model: &FixedPointModel, rs: &RootSystem, k: i64) -> LatticeBox {
    let r = model.rank();
    let mut lo: Vec<i64> = (0..r).map(|i| model.points.iter().map(|p| k * p.mu[i]).min().expect("nonempty")).collect();
    let mut hi: Vec<i64> = (0..r).map(|i| model.points.iter().map(|p| k * p.mu[i]).max().expect("nonempty")).collect();
    for a in rs.positive_roots() {
        for i in 0..r {
            lo[i] -= a[i].abs();
            hi[i] += a[i].abs();
        }
    }
    LatticeBox { lo, hi }
}

fn thread_pool() -> rayon::ThreadPool {
    let n = std::env::var("QR_THREADS").ok().and_then(|s| s.parse::<usize>().ok()).unwrap_or(0);
    rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("thread pool")
}

fn base_header(argv: &[String], doc: Option<&ModelDocument>) -> Vec<(&'static str, Value)> {
    vec![
        ("command", Value::String(argv.join(" "))),
        ("input_sha256", doc.map(|d| Value::String(d.sha256_hex())).unwrap_or(Value::Null)),
    ]
}

fn polarization_header(h: &mut Vec<(&'static str, Value)>, gamma: Option<&QVec>, seed: Option<u64>, pol: Option<&Polarization>) {
    h.push(("gamma", gamma.map(|g| Value::String(fmt_qvec(g))).unwrap_or(Value::Null)));
    h.push(("seed", seed.map(Value::from).unwrap_or(Value::Null)));
    h.push(("polarization", pol.map(|p| Value::String(fmt_qvec(&p.v))).unwrap_or(Value::Null)));
}

fn character_rows(k: i64, c: &FormalCharacter) -> Vec<Vec<String>> {
    c.iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(x, v)| std::iter::once(k.to_string()).chain(x.iter().map(|a| a.to_string())).chain([v.to_string()]).collect())
        .collect()
}

fn table_header(rank: usize, value: &str) -> Vec<String> {
    std::iter::once("k".to_string()).chain((1..=rank).map(|i| format!("lambda_{i}"))).chain([value.to_string()]).collect()
}

fn rows_json(rows: &[Vec<String>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| {
                json!({
                    "k": r[0].parse::<i64>().expect("k"),
                    "lambda": r[1..r.len() - 1].iter().map(|x| x.parse::<i64>().expect("lambda")).collect::<Vec<_>>(),
                    "value": r[r.len() - 1],
                })
            })
            .collect(),
    )
}

fn mult_table(
    argv: &[String],
    model_args: &ModelArgs,
    k: &str,
    region: Option<&str>,
    dominant: bool,
    out: &OutputArgs,
) -> Result<Report> {
    let (model, doc) = load_model(model_args)?;
    let rs = model.root_system()?;
    let (k0, k1) = parse_k_range(k)?;
    let user_box = region.map(|s| LatticeBox::parse(s, model.rank())).transpose()?;
    let eval = Multiplicities::with_seed(&model, &rs, out.seed)?;
    let per_k: Vec<(i64, FormalCharacter, bool)> = thread_pool().install(|| {
        (k0..=k1)
            .into_par_iter()
            .map(|k| {
                let mut e = eval.clone();
                let b = user_box.clone().unwrap_or_else(|| default_box(&model, &rs, k));
                let c = e.m_character(k, &b);
                let anti = is_shifted_antisymmetric(&c, &rs, &b);
                let c = if dominant { c.iter().filter(|(x, _)| rs.is_dominant_int(x)).map(|(x, v)| (x.clone(), v.clone())).collect() } else { c };
                (k, c, anti)
            })
            .collect()
    });
    let rows: Vec<Vec<String>> = per_k.iter().flat_map(|(k, c, _)| character_rows(*k, c)).collect();
    let antisymmetric = per_k.iter().all(|(_, _, a)| *a);
    let mut header = base_header(argv, Some(&doc));
    polarization_header(&mut header, None, Some(out.seed), Some(eval.polarization()));
    header.push(("antisymmetric", Value::Bool(antisymmetric)));
    Ok(Report {
        header,
        result: json!({ "dominant_only": dominant, "antisymmetric": antisymmetric, "rows": rows_json(&rows) }),
        table: Some((table_header(model.rank(), if dominant { "m_G" } else { "m" }), rows)),
    })
}

fn oracle(argv: &[String], model_args: &ModelArgs, k: &str, region: Option<&str>) -> Result<Report> {
    let (model, doc) = load_model(model_args)?;
    let torus = RootSystem::torus(&model.lattice);
    let (k0, k1) = parse_k_range(k)?;
    let user_box = region.map(|s| LatticeBox::parse(s, model.rank())).transpose()?;
    let rows: Vec<Vec<String>> = thread_pool().install(|| {
        (k0..=k1)
            .into_par_iter()
            .map(|k| {
                let b = user_box.clone().unwrap_or_else(|| default_box(&model, &torus, k));
                character_rows(k, &truncated_series_oracle(&model, k, &b))
            })
            .collect::<Vec<_>>()
            .concat()
    });
    let mut header = base_header(argv, Some(&doc));
    polarization_header(&mut header, None, None, None);
    Ok(Report { header, result: json!({ "rows": rows_json(&rows) }), table: Some((table_header(model.rank(), "index"), rows)) })
}

fn fit_qp(
    argv: &[String],
    model_args: &ModelArgs,
    degree: Option<u32>,
    period: Option<i64>,
    horizon: Option<i64>,
    gamma: Option<&str>,
    out: &OutputArgs,
) -> Result<Report> {
    let (model, doc) = load_model(model_args)?;
    let rs = model.root_system()?;
    let gamma = gamma.map(|g| parse_rational_vector(g, model.rank())).transpose()?;
    let cone = construct_cone(&model, &rs, gamma)?;
    let mut eval = Multiplicities::with_seed(&model, &rs, out.seed)?;
    let mut opts = FitOptions::for_dimension(model.dim());
    if let Some(d) = degree {
        opts.degree_bound = d;
    }
    if let Some(p) = period {
        opts.period_bound = p;
    }
    if let Some(h) = horizon {
        opts.horizon = h;
    }
    let qp = quasipoly::fit(&mut |x: &[i64]| eval.m(x[0], &x[1..]), &cone.region, &opts)?;
    let qdoc = qp.to_document();
    let rows: Vec<Vec<String>> = qdoc
        .cosets
        .iter()
        .flat_map(|c| {
            c.monomial_coefficients.iter().map(move |m| {
                vec![
                    format!("\"{}\"", c.rep.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")),
                    format!("\"{}\"", m.exponents.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")),
                    m.coefficient.clone(),
                ]
            })
        })
        .collect();
    let mut header = base_header(argv, Some(&doc));
    polarization_header(&mut header, Some(&cone.gamma.gamma), Some(out.seed), Some(eval.polarization()));
    header.push(("modulus", Value::from(qp.modulus())));
    header.push(("period_index", Value::from(qp.period_index())));
    header.push(("degree", Value::from(qp.degree())));
    Ok(Report {
        header,
        result: json!({
            "fit": { "degree_bound": opts.degree_bound, "period_bound": opts.period_bound, "horizon": opts.horizon },
            "quasi_polynomial": serde_json::to_value(&qdoc)?,
            "cone": cone.to_json(),
        }),
        table: Some((vec!["coset".into(), "exponents".into(), "coefficient".into()], rows)),
    })
}

#[allow(clippy::too_many_arguments)]
fn qr_check_cmd(
    argv: &[String],
    model_args: &ModelArgs,
    xi: Option<&str>,
    mode: Option<&str>,
    kmax: i64,
    level: Option<&PathBuf>,
    gamma: Option<&str>,
    degree: Option<u32>,
    period: Option<i64>,
    out: &OutputArgs,
) -> Result<(Report, bool)> {
    let (model, doc) = load_model(model_args)?;
    let rs = model.root_system()?;
    let r = model.rank();
    let mode: QrMode = match mode {
        Some(m) => m.parse()?,
        None => {
            let delta = crate::geometry::moment_polytope(&model, &rs)?;
            if delta.contains(&crate::linalg::zeros(r)) {
                QrMode::FitCase
            } else {
                QrMode::Vanishing
            }
        }
    };
    let mut opts = QrCheckOptions::new(mode);
    opts.kmax = kmax;
    opts.seed = out.seed;
    opts.xi = xi.map(|s| parse_rational_vector(s, r)).transpose()?;
    opts.gamma = gamma.map(|s| parse_rational_vector(s, r)).transpose()?;
    if let Some(path) = level {
        let ldoc: LevelDocument = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        opts.level = Some(ReducedLevelData::from_document(&ldoc)?);
    }
    if degree.is_some() || period.is_some() {
        let mut f = FitOptions::for_dimension(model.dim());
        f.degree_bound = degree.unwrap_or(f.degree_bound);
        f.period_bound = period.unwrap_or(f.period_bound);
        opts.fit = Some(f);
    }
    let (cert, passed) = match qr_check(&model, &rs, &opts) {
        Ok(c) => (c, true),
        Err(Error::CheckFailed(c)) => (*c, false),
        Err(e) => return Err(e),
    };
    let pol = Polarization::new(cert.polarization.clone());
    let mut header = base_header(argv, Some(&doc));
    polarization_header(&mut header, cert.gamma.as_ref(), Some(out.seed), Some(&pol));
    header.push(("mode", Value::String(mode.to_string())));
    header.push(("verdict", Value::String(cert.verdict().into())));
    let rows: Vec<Vec<String>> = cert
        .comparisons
        .iter()
        .map(|c| {
            vec![
                c.label.to_string(),
                c.k.to_string(),
                format!("\"{}\"", c.lambda.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")),
                c.left.to_string(),
                c.right.to_string(),
                if c.agrees() { "ok".into() } else { "MISMATCH".into() },
            ]
        })
        .collect();
    let head = ["check", "k", "lambda", "left", "right", "status"].iter().map(|s| s.to_string()).collect();
    Ok((Report { header, result: cert.to_json(), table: Some((head, rows)) }, passed))
}

fn examples(argv: &[String], name: &str) -> Result<String> {
    if name == "list" {
        let list: Vec<Value> = corpus::NAMES.iter().map(|n| json!({ "name": n, "description": corpus::describe(n) })).collect();
        let mut s = serde_json::to_string_pretty(&json!({ "command": argv.join(" "), "examples": list }))?;
        s.push('\n');
        return Ok(s);
    }
    let doc = ModelDocument::from_model(&corpus::by_name(name)?);
    let mut s = serde_json::to_string_pretty(&doc)?;
    s.push('\n');
    Ok(s)
}

fn with_timing(mut report: Report, started: Instant, timing: bool) -> Report {
    if timing {
        report.header.push(("elapsed_ms", Value::from(started.elapsed().as_millis() as u64)));
    }
    report
}

/// Runs the command line `args` (without the program name) and returns the
/// exit code. Reports go to `out`, diagnostics to `err`.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(std::iter::once("qr".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let started = Instant::now();
    let outcome: Result<(String, i32)> = match &cli.command {
        Command::Examples { name } => examples(args, name).map(|s| (s, 0)),
        Command::MultTable { model, k, region, dominant, out: o } => mult_table(args, model, k, region.as_deref(), *dominant, o)
            .map(|r| (with_timing(r, started, o.timing).render(o.format), 0)),
        Command::Oracle { model, k, region, out: o } => {
            oracle(args, model, k, region.as_deref()).map(|r| (with_timing(r, started, o.timing).render(o.format), 0))
        }
        Command::FitQp { model, degree, period, horizon, gamma, out: o } => {
            fit_qp(args, model, *degree, *period, *horizon, gamma.as_deref(), o)
                .map(|r| (with_timing(r, started, o.timing).render(o.format), 0))
        }
        Command::QrCheck { model, xi, mode, kmax, level, gamma, degree, period, out: o } => qr_check_cmd(
            args,
            model,
            xi.as_deref(),
            mode.as_deref(),
            *kmax,
            level.as_ref(),
            gamma.as_deref(),
            *degree,
            *period,
            o,
        )
        .map(|(r, passed)| (with_timing(r, started, o.timing).render(o.format), if passed { 0 } else { 2 })),
    };
    match outcome {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Convenience wrapper returning the exit code and captured output.
pub fn run_captured(args: &[&str]) -> (i32, String, String) {
    let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(&args, &mut out, &mut err);
    (code, String::from_utf8(out).expect("utf-8"), String::from_utf8(err).expect("utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k_ranges() {
        assert_eq!(parse_k_range("1..3").unwrap(), (1, 3));
        assert_eq!(parse_k_range("2..=4").unwrap(), (2, 4));
        assert_eq!(parse_k_range("5").unwrap(), (5, 5));
        assert!(parse_k_range("a..b").is_err());
    }

    #[test]
    fn cp1_table() {
        let (code, out, _) = run_captured(&["mult-table", "--example", "cp1", "--k", "1..3", "--format", "csv"]);
        assert_eq!(code, 0);
        let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
        assert_eq!(rows.len(), 2 + 3 + 4);
        assert!(rows.iter().all(|r| r.ends_with(",1")));
    }

    #[test]
    fn empty_box_gives_empty_table() {
        let (code, out, _) = run_captured(&["mult-table", "--example", "cp2", "--k", "2", "--box", "1:0", "--format", "csv"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().filter(|l| !l.starts_with('#')).count(), 1);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_captured(&["examples", "nope"]).0, 3);
        assert_eq!(run_captured(&["fit-qp", "--example", "cp1-shifted"]).0, 3);
        assert_eq!(run_captured(&["bogus"]).0, 3);
        assert_eq!(run_captured(&["qr-check", "--example", "cp1-shifted", "--kmax", "5"]).0, 0);
    }
}

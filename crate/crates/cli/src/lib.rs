//! Command-line front end for `parafuse`.
//!
//! Exit codes: `0` success, `1` a verification or tolerance failure,
//! `2` invalid input.

pub mod args;
pub mod cache;
pub mod document;
pub mod render;

use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use num_rational::Rational64;
use parafuse::qseries::{pf_character, pf_characters, CentralCharges};
use parafuse::verify::{self, Status};
use parafuse::{
    fusion_table, pf_fuse, qdims, s_matrix_with, CanonicalLabel, Level, PfLabel, Tolerances,
};
use serde_json::{json, Value};

use args::{Cli, Command, Global};
use cache::{write_atomic, Cache, Lookup};
use document::{Kind, OutputDocument, Provenance};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const DEFAULT_CHAR_DEPTH: u32 = 20;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] parafuse::Error),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use parafuse::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Compute(
                E::InvalidLevel(_)
                | E::InvalidLabel { .. }
                | E::InvalidAffineLabel { .. }
                | E::NotCanonical { .. }
                | E::InvalidArgument(_)
                | E::TruncationTooSmall(_),
            ) => EXIT_USAGE,
            CliError::Compute(_) | CliError::Io(_) => EXIT_FAILED,
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_USAGE
                }
            };
            return code;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn tolerances(global: &Global) -> Result<Tolerances, CliError> {
    let mut tol = Tolerances::default();
    if let Some(t) = global.tol {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Usage(format!("--tol must be positive, got {t}")));
        }
        tol.unitarity = t;
        tol.kappa = t;
    }
    Ok(tol)
}

fn parse_label(level: Level, text: &str) -> Result<PfLabel, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let parse = |s: &str| {
        s.parse::<i64>()
            .map_err(|_| CliError::Usage(format!("label must look like m,n; got {text:?}")))
    };
    match parts.as_slice() {
        [m, n] => Ok(PfLabel::new(level, parse(m)?, parse(n)?)?),
        _ => Err(CliError::Usage(format!(
            "label must look like m,n; got {text:?}"
        ))),
    }
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let g = &cli.global;
    let k =
        g.k.ok_or_else(|| CliError::Usage("missing required flag --k".into()))?;
    let level = Level::new(k)?;
    let tol = tolerances(g)?;

    let (doc, code) = match &cli.command {
        Command::Verify => {
            let doc = verify_document(level, tol, g.trunc)?;
            let code = if doc.payload["passed"] == Value::Bool(true) {
                EXIT_OK
            } else {
                EXIT_FAILED
            };
            (doc, code)
        }
        command => {
            let key = cache_key(level, command, g.trunc)?;
            let doc = match &g.cache_dir {
                Some(dir) => {
                    let cache = Cache::new(dir);
                    match cache.lookup(&key, &Provenance::current(tol)) {
                        Lookup::Hit(doc) => doc,
                        lookup => {
                            if let Lookup::Stale(reason) = lookup {
                                let _ = writeln!(stderr, "warning: {reason}; recomputing");
                            }
                            let doc = compute(level, command, tol, g.trunc)?;
                            if let Err(e) = cache.store(&key, &doc) {
                                let _ = writeln!(
                                    stderr,
                                    "warning: cannot write cache entry {key}: {e}"
                                );
                            }
                            doc
                        }
                    }
                }
                None => compute(level, command, tol, g.trunc)?,
            };
            (doc, EXIT_OK)
        }
    };

    let text = render::render(&doc, g.format);
    match &g.out {
        Some(path) => write_atomic(path, text.as_bytes())?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(code)
}

fn cache_key(level: Level, command: &Command, trunc: Option<u32>) -> Result<String, CliError> {
    let k = level.k();
    let canon = |text: &str| -> Result<String, CliError> {
        let l = parse_label(level, text)?;
        Ok(format!("{}-{}", l.m(), l.n()))
    };
    Ok(match command {
        Command::Labels => format!("labels-k{k}"),
        Command::Weights => format!("weights-k{k}"),
        Command::Qdim => format!("qdim-k{k}"),
        Command::Smatrix => format!("smatrix-k{k}"),
        Command::Table => format!("table-k{k}"),
        Command::Fuse { a, b } => format!("fuse-k{k}-{}-{}", canon(a)?, canon(b)?),
        Command::Char { label } => {
            let depth = trunc.unwrap_or(DEFAULT_CHAR_DEPTH);
            match label {
                Some(l) => format!("char-k{k}-d{depth}-{}", canon(l)?),
                None => format!("char-k{k}-d{depth}"),
            }
        }
        Command::Verify => format!("verify-k{k}"),
    })
}

fn pair(m: u32, n: u32) -> Value {
    json!([m, n])
}

fn canon_json(l: CanonicalLabel) -> Value {
    pair(l.m(), l.n())
}

fn frac(r: Rational64) -> Value {
    Value::String(format!("{}/{}", r.numer(), r.denom()))
}

/// Computes the document for every command except `verify`.
pub fn compute(
    level: Level,
    command: &Command,
    tol: Tolerances,
    trunc: Option<u32>,
) -> Result<OutputDocument, CliError> {
    let k = level.k();
    let labels = level.labels();
    let (kind, payload) = match command {
        Command::Labels => {
            let entries: Result<Vec<Value>, CliError> = labels
                .iter()
                .map(|&l| {
                    let partner = level.involution(l.raw())?;
                    Ok(json!({ "label": canon_json(l), "partner": pair(partner.m(), partner.n()) }))
                })
                .collect();
            (Kind::Labels, json!({ "labels": entries? }))
        }
        Command::Weights => {
            let entries: Result<Vec<Value>, CliError> = labels
                .iter()
                .map(|&l| Ok(json!({ "label": canon_json(l), "weight": frac(level.conformal_weight(l)?) })))
                .collect();
            (Kind::Weights, json!({ "weights": entries? }))
        }
        Command::Qdim => {
            let entries: Vec<Value> = qdims(level)
                .into_iter()
                .map(|q| {
                    let (num, den) = q.closed_form;
                    json!({
                        "label": canon_json(q.label),
                        "value": q.value,
                        "closed_form": format!("sin({num}π/{den})/sin(π/{den})"),
                    })
                })
                .collect();
            (Kind::Qdim, json!({ "qdims": entries }))
        }
        Command::Smatrix => {
            let s = s_matrix_with(level, &tol)?;
            let entries: Vec<Value> = (0..s.dim())
                .map(|a| {
                    Value::Array(
                        s.row(a)
                            .iter()
                            .map(|z| json!({ "re": z.re, "im": z.im }))
                            .collect(),
                    )
                })
                .collect();
            (
                Kind::Smatrix,
                json!({
                    "order": labels.iter().map(|&l| canon_json(l)).collect::<Vec<_>>(),
                    "kappa": s.kappa(),
                    "unitarity_residual": s.unitarity_residual(),
                    "entries": entries,
                }),
            )
        }
        Command::Fuse { a, b } => {
            let (la, lb) = (parse_label(level, a)?, parse_label(level, b)?);
            let mut products = pf_fuse(level, la, lb)?;
            products.sort();
            let products: Vec<Value> = products.into_iter().map(canon_json).collect();
            (
                Kind::Fusion,
                json!({
                    "a": pair(la.m(), la.n()),
                    "b": pair(lb.m(), lb.n()),
                    "products": products,
                }),
            )
        }
        Command::Table => {
            let table = fusion_table(level)?;
            let order = table.order();
            let entries: Vec<Value> = table
                .ordered_entries()
                .map(|(a, b, c, n)| {
                    json!({
                        "a": canon_json(order[a]),
                        "b": canon_json(order[b]),
                        "c": canon_json(order[c]),
                        "multiplicity": n,
                    })
                })
                .collect();
            (
                Kind::Fusion,
                json!({
                    "order": order.iter().map(|&l| canon_json(l)).collect::<Vec<_>>(),
                    "entries": entries,
                }),
            )
        }
        Command::Char { label } => {
            let depth = trunc.unwrap_or(DEFAULT_CHAR_DEPTH);
            let selected: Vec<(CanonicalLabel, _)> = match label {
                Some(text) => {
                    let l = level.canonicalize(parse_label(level, text)?)?;
                    vec![(l, pf_character(level, l, depth)?)]
                }
                None => labels
                    .iter()
                    .copied()
                    .zip(pf_characters(level, depth)?)
                    .collect(),
            };
            let characters: Result<Vec<Value>, CliError> = selected
                .iter()
                .map(|(l, ch)| {
                    let terms: Vec<Value> = ch
                        .iter()
                        .map(|(e, c)| json!({ "exponent": frac(e), "coefficient": c.to_string() }))
                        .collect();
                    Ok(json!({
                        "label": canon_json(*l),
                        "weight": frac(level.conformal_weight(*l)?),
                        "lowest_exponent": ch.lowest_exponent().map(frac),
                        "terms": terms,
                    }))
                })
                .collect();
            (
                Kind::Characters,
                json!({
                    "depth": depth,
                    "central_charge": frac(CentralCharges::new(level).c_parafermion),
                    "characters": characters?,
                }),
            )
        }
        Command::Verify => return verify_document(level, tol, trunc),
    };
    Ok(OutputDocument::new(k, kind, payload, tol))
}

fn verify_document(
    level: Level,
    tol: Tolerances,
    trunc: Option<u32>,
) -> Result<OutputDocument, CliError> {
    let mut config = verify::Config {
        tolerances: tol,
        ..verify::Config::default()
    };
    if let Some(depth) = trunc {
        config.depth = depth;
    }
    let report = match verify::run(level, &config) {
        Ok(r) => r,
        // an S-matrix outside tolerance is a verification failure, not a crash
        Err(
            e
            @ (parafuse::Error::UnitarityViolation { .. } | parafuse::Error::Normalization { .. }),
        ) => {
            let payload = json!({
                "passed": false,
                "kappa": Value::Null,
                "checks": [{ "name": "s-matrix", "status": "fail", "metric": Value::Null, "detail": e.to_string() }],
            });
            return Ok(OutputDocument::new(
                level.k(),
                Kind::VerifyReport,
                payload,
                tol,
            ));
        }
        Err(e) => return Err(e.into()),
    };
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "status": c.status.to_string(),
                "metric": c.metric,
                "detail": c.detail,
            })
        })
        .collect();
    let payload = json!({
        "passed": report.passed(),
        "kappa": report.kappa,
        "failed": report.checks.iter().filter(|c| c.status == Status::Fail).count(),
        "checks": checks,
    });
    Ok(OutputDocument::new(
        level.k(),
        Kind::VerifyReport,
        payload,
        tol,
    ))
}

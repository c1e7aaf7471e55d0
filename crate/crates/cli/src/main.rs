//! `sphtd`: command-line front end for the spherical T-duality engine.
//!
//! Exit codes: 0 success, 1 usage, 2 parse error, 3 validation error,
//! 4 a checked assertion failed.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spherical_tduality::bundle::{SphereBundleModel, TwistedClass};
use spherical_tduality::catalog::Scenario;
use spherical_tduality::complex::de_rham_complex;
use spherical_tduality::matrix::Matrix;
use spherical_tduality::model_file::{self, BundleModel, Document};
use spherical_tduality::scalar::{format_scalar, parse_scalar, Scalar};
use spherical_tduality::tduality::{check_isomorphism, dualize, tau_as_chain_map, verify_pair, TDualPair};
use spherical_tduality::twisted::{cup_h_operator, TwistedComplex};
use spherical_tduality::Error;

mod render;

#[derive(Parser)]
#[command(name = "sphtd", version, about = "Exact rational spherical T-duality")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// de Rham cohomology of the base and total space(s).
    Cohomology { model: PathBuf },
    /// Twisted cohomology per residue class and the [H]∪ pages.
    Twisted { model: PathBuf },
    /// Construct the T-dual of a bundle model.
    Dualize {
        model: PathBuf,
        /// Scale of the dual Euler class, as p/q. Defaults to the file's value or 1.
        #[arg(long, value_parser = parse_lambda)]
        lambda: Option<Scalar>,
        /// Write the resulting pair document here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a pair document (or the dual of a bundle model).
    Verify { model: PathBuf },
    /// Run a built-in scenario: hopf, trivial, zero-twist or kahler.
    Example {
        name: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// point, cpN, torusR, sphereM or product:X,Y,...
        #[arg(long)]
        base: Option<String>,
    },
}

fn parse_lambda(text: &str) -> Result<Scalar, String> {
    parse_scalar(text).map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Engine(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(msg) => Failure::Usage(msg),
            Error::ZeroLambda => Failure::Usage("--lambda must be nonzero".into()),
            other => Failure::Engine(other),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (report, outcome) = match run(&cli.command) {
        Ok(r) => (Some(r), Ok(())),
        Err(Failure::Usage(msg)) => (None, Err((1, msg))),
        Err(Failure::Engine(e)) => {
            let code = if matches!(e, Error::Parse(_)) { 2 } else { 3 };
            (None, Err((code, e.to_string())))
        }
    };
    let outcome = match report {
        Some((value, verdict)) => {
            emit(&value, cli.format);
            verdict.map_err(|msg| (4, msg))
        }
        None => outcome,
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn emit(value: &Value, format: Format) {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(value).expect("reports serialize") + "\n",
        Format::Table => render::table(value),
    };
    // a closed pipe is not an error worth reporting
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

/// A report and whether its checked assertions hold.
type Outcome = (Value, Result<(), String>);

fn run(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Cohomology { model } => Ok((cohomology(&load(model)?)?, Ok(()))),
        Command::Twisted { model } => Ok((twisted(&load(model)?)?, Ok(()))),
        Command::Dualize { model, lambda, out } => {
            let Document::Bundle(m) = load(model)? else {
                return Err(Failure::Engine(Error::Parse("dualize expects a bundle document".into())));
            };
            let lambda = lambda.clone().or_else(|| m.lambda.clone()).unwrap_or_else(|| Scalar::from_integer(1.into()));
            let pair = dualize(&m.bundle, &m.twist, &lambda)?;
            if let Some(path) = out {
                std::fs::write(path, model_file::emit_pair(&pair))
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok((dualize_report(&pair, &lambda), Ok(())))
        }
        Command::Verify { model } => {
            let pair = match load(model)? {
                Document::Pair(p) => p,
                Document::Bundle(m) => {
                    let lambda = m.lambda.clone().unwrap_or_else(|| Scalar::from_integer(1.into()));
                    dualize(&m.bundle, &m.twist, &lambda)?
                }
            };
            verify(&pair)
        }
        Command::Example { name, n, k, base } => {
            let scenario = Scenario::from_name(name, *n, *k, base.as_deref())?;
            let report = scenario.run()?;
            let verdict = if report.passed() {
                Ok(())
            } else {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
                Err(format!("failed checks: {}", failed.join(", ")))
            };
            Ok((serde_json::to_value(&report).expect("reports serialize"), verdict))
        }
    }
}

fn load(path: &Path) -> Result<Document, Failure> {
    Ok(model_file::read_document(path)?)
}

fn side_cohomology(bundle: &SphereBundleModel) -> Value {
    json!({
        "fiber_dim": bundle.fiber_dim(),
        "euler": bundle.euler().to_string(),
        "de_rham": bundle.de_rham_dims(),
        "gysin": bundle.gysin_dims(),
        "euler_cup_ranks": bundle.euler_cup_ranks(),
    })
}

fn cohomology(doc: &Document) -> Result<Value, Failure> {
    let (base, sides) = match doc {
        Document::Bundle(m) => (m.bundle.base(), json!({ "bundle": side_cohomology(&m.bundle) })),
        Document::Pair(p) => (
            p.left().base(),
            json!({ "left": side_cohomology(p.left()), "right": side_cohomology(p.right()) }),
        ),
    };
    let mut report = json!({
        "command": "cohomology",
        "base": { "basis": base.names(), "de_rham": de_rham_complex(base).0.cohomology_dims() },
    });
    merge(&mut report, sides);
    Ok(report)
}

fn side_twisted(bundle: &SphereBundleModel, h: &TwistedClass) -> Result<Value, Failure> {
    let total = h.to_total(bundle);
    let complex = TwistedComplex::of_bundle(bundle, h)?;
    let cup = cup_h_operator(bundle.total(), &total, h.degree())?;
    Ok(json!({
        "twist": total.to_string(),
        "degree": h.degree(),
        "modulus": complex.modulus(),
        "twisted_dims": complex.dims(),
        "e1": cup.e1,
        "e2": cup.e2,
        "degenerates_at_e1": cup.e1 == cup.e2,
    }))
}

fn twisted(doc: &Document) -> Result<Value, Failure> {
    let mut report = json!({ "command": "twisted" });
    let sides = match doc {
        Document::Bundle(BundleModel { bundle, twist, .. }) => json!({ "bundle": side_twisted(bundle, twist)? }),
        Document::Pair(p) => json!({
            "left": side_twisted(p.left(), p.h())?,
            "right": side_twisted(p.right(), p.h_hat())?,
        }),
    };
    merge(&mut report, sides);
    Ok(report)
}

fn dualize_report(pair: &TDualPair, lambda: &Scalar) -> Value {
    let w = pair.witness();
    let v = verify_pair(pair);
    json!({
        "command": "dualize",
        "lambda": format_scalar(lambda),
        "dual": {
            "fiber_dim": pair.right().fiber_dim(),
            "euler": pair.right().euler().to_string(),
            "twist": pair.h_hat().to_total(pair.right()).to_string(),
            "degree": pair.h_hat().degree(),
        },
        "witness": {
            "f3": w.f3.to_string(),
            "f2": w.f2.to_string(),
            "f1": w.f1.to_string(),
            "pairing": format_scalar(&w.lambda),
        },
        "verification": v,
        "unimodular": pair.is_unimodular(),
    })
}

fn matrix_value(m: &Matrix) -> Value {
    (0..m.nrows())
        .map(|i| m.row(i).iter().map(format_scalar).collect::<Vec<_>>())
        .collect::<Vec<_>>()
        .into()
}

fn verify(pair: &TDualPair) -> Result<Outcome, Failure> {
    let v = verify_pair(pair);
    let mut report = json!({
        "command": "verify",
        "verification": v,
        "unimodular": pair.is_unimodular(),
        "modulus": pair.modulus(),
        "shift": pair.shift() % pair.modulus(),
    });
    if !v.is_valid() {
        merge(&mut report, json!({ "chain_map": false, "isomorphism": false }));
        return Ok((report, Err(format!("pair verification failed: {}", v.failures.join("; ")))));
    }
    let chain_map = tau_as_chain_map(pair).is_ok();
    let iso = check_isomorphism(pair).ok();
    let isomorphism = iso.as_ref().is_some_and(|c| c.is_isomorphism());
    merge(&mut report, json!({ "chain_map": chain_map, "isomorphism": isomorphism }));
    if let Some(c) = &iso {
        merge(
            &mut report,
            json!({
                "left_dims": c.left_dims,
                "right_dims": c.right_dims,
                "induced_maps": c.induced.matrices.iter().map(matrix_value).collect::<Vec<_>>(),
            }),
        );
    }
    let verdict = if chain_map && isomorphism {
        Ok(())
    } else {
        Err("τ_F is not an isomorphism of twisted complexes".into())
    };
    Ok((report, verdict))
}

fn merge(target: &mut Value, extra: Value) {
    if let (Value::Object(t), Value::Object(e)) = (target, extra) {
        t.extend(e);
    }
}

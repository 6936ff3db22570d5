use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use transproj::cli::{error_report, execute, Options, Outcome, SessionDocument, VERBS};
use transproj::plane::Chart;
use transproj::reduction::ReductionTranscript;
use transproj::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ChartArg {
    Z,
    X,
}

/// Singular transversely projective structures: exact reduction and
/// invariants. Reads a JSON session document, prints a JSON report.
#[derive(Debug, Parser)]
#[command(name = "transproj", version)]
struct Args {
    /// One of: check, polar, component, elm, normalize, replay, compare,
    /// degree, invariant-curve, log-derivative, eccentricity, restrict,
    /// monodromy, lift, corpus.
    verb: String,
    /// Session document (`-` for stdin); for `corpus`: `list` or `run [NAME...]`.
    args: Vec<String>,
    /// Work in the affine chart `z = 1` (default) or `x = 1`.
    #[arg(long, value_enum)]
    chart: Option<ChartArg>,
    /// Allow sections over Q(sqrt(D)).
    #[arg(long, allow_negative_numbers = true)]
    extension: Option<i64>,
    /// Seed for randomized verbs.
    #[arg(long)]
    seed: Option<u64>,
    /// Polar component to inspect or reduce.
    #[arg(long)]
    component: Option<String>,
    /// Override the polar degree (eccentricity).
    #[arg(long)]
    polar: Option<i64>,
    /// Override the foliation degree (eccentricity).
    #[arg(long)]
    degree: Option<i64>,
    /// Second document (compare).
    #[arg(long)]
    other: Option<PathBuf>,
    /// Transcript file (replay).
    #[arg(long)]
    transcript: Option<PathBuf>,
    /// Corpus directory instead of the bundled entries.
    #[arg(long)]
    corpus_dir: Option<PathBuf>,
}

fn read(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Document(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Error::Document(format!("{path}: {e}")))
    }
}

fn run(a: &Args) -> Result<Outcome, Error> {
    if !VERBS.contains(&a.verb.as_str()) {
        return Err(Error::Document(format!(
            "unknown verb `{}` (expected one of {})",
            a.verb,
            VERBS.join(", ")
        )));
    }
    let mut opts = Options {
        chart: a.chart.map(|c| match c {
            ChartArg::Z => Chart::Z,
            ChartArg::X => Chart::X,
        }),
        extension: a.extension,
        seed: a.seed,
        component: a.component.clone(),
        polar: a.polar,
        degree: a.degree,
        corpus_dir: a.corpus_dir.clone(),
        ..Options::default()
    };
    if let Some(p) = &a.other {
        opts.other = Some(SessionDocument::from_json(&read(&p.to_string_lossy())?)?);
    }
    if let Some(p) = &a.transcript {
        let text = read(&p.to_string_lossy())?;
        let tr: ReductionTranscript =
            serde_json::from_str(&text).map_err(|e| Error::Document(format!("transcript: {e}")))?;
        opts.transcript = Some(tr);
    }
    if a.verb == "corpus" {
        return Ok(execute("corpus", &a.args, None, &opts));
    }
    let [path] = a.args.as_slice() else {
        return Err(Error::Document(format!(
            "`{}` takes exactly one document path",
            a.verb
        )));
    };
    let doc = SessionDocument::from_json(&read(path)?)?;
    Ok(execute(&a.verb, &[], Some(&doc), &opts))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let outcome = run(&args).unwrap_or_else(|e| Outcome {
        report: error_report(&e),
        code: e.exit_code(),
    });
    let mut out = io::stdout().lock();
    let _ = out.write_all(outcome.render().as_bytes());
    ExitCode::from(outcome.code as u8)
}

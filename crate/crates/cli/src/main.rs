use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use monogen::instances::{default_bound, parse_json_text, parse_k_elem, RawInstance};
use monogen::products::BRACKET_DEGREE_BOUND;
use serde_json::{json, Map, Value};

mod render;
mod report;

use report::{Context, Outcome, RunError};

#[derive(Parser)]
#[command(name = "monogen", version, about = "Hochschild cohomology of monogenic algebra extensions")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum VerbKind {
    Validate,
    Cohomology,
    Products,
    Theorems,
    Report,
}

#[derive(Subcommand)]
enum Verb {
    /// Structural checks on the instance.
    Validate(Args),
    /// Dimension table and representatives.
    Cohomology(Args),
    /// Cup and bracket tables on class bases.
    Products(Args),
    /// Closed forms against the generic pipeline.
    Theorems(Args),
    /// All of the above.
    Report(Args),
}

#[derive(clap::Args)]
struct Args {
    /// Instance spec (JSON).
    spec: PathBuf,
    #[arg(long)]
    max_degree: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Comma-separated check names.
    #[arg(long, value_delimiter = ',')]
    which: Vec<String>,
    /// Highest degree `r + r'` for which generic brackets are computed.
    #[arg(long)]
    oracle_bound: Option<usize>,
    /// Witness candidate as a JSON element of K, e.g. '{"g": "1"}'.
    #[arg(long)]
    witness: Option<String>,
}

#[derive(ValueEnum, Clone, Copy)]
enum Format {
    Json,
    Text,
    Csv,
}

fn run(kind: VerbKind, args: &Args) -> Result<Outcome, RunError> {
    let text = std::fs::read_to_string(&args.spec).map_err(|e| RunError::Input(format!("{}: {e}", args.spec.display())))?;
    let source = parse_json_text(&text).map_err(|e| RunError::Input(e.to_string()))?;
    let raw = RawInstance::from_json(&source).map_err(|e| RunError::Input(e.to_string()))?;
    let mut sections = Map::new();
    let mut ok = true;
    let probe = args.max_degree.or(raw.max_degree);
    let needs_validate = matches!(kind, VerbKind::Validate | VerbKind::Report);
    let spec = if needs_validate {
        let bound = probe.unwrap_or(6).min(6);
        let (outcome, built) = report::validate(&raw, bound)?;
        ok &= outcome.ok;
        sections.insert("validate".into(), outcome.report);
        match built {
            Some(s) => s,
            None => return Ok(finish(&source, sections, false)),
        }
    } else {
        raw.clone().build().map_err(|e| RunError::Input(e.to_string()))?
    };
    if kind == VerbKind::Validate {
        return Ok(finish(&source, sections, ok));
    }
    let witness = match &args.witness {
        Some(w) => {
            let v: Value = serde_json::from_str(w).map_err(|e| RunError::Input(format!("--witness: {e}")))?;
            Some(parse_k_elem(&spec.algebra.k, &v, "--witness").map_err(|e| RunError::Input(e.to_string()))?)
        }
        None => None,
    };
    spec.witness_candidates().map_err(|e| RunError::Input(e.to_string()))?;
    let max_degree = probe.unwrap_or_else(|| default_bound(&spec.algebra));
    let oracle_bound = args.oracle_bound.or(spec.options.oracle_bound).unwrap_or(BRACKET_DEGREE_BOUND);
    let which: Vec<String> = if args.which.is_empty() { spec.options.checks.clone() } else { args.which.clone() };
    let ctx = Context { spec, max_degree, oracle_bound, witness };
    if matches!(kind, VerbKind::Cohomology | VerbKind::Report) {
        let o = report::cohomology(&ctx)?;
        ok &= o.ok;
        sections.insert("cohomology".into(), o.report);
    }
    if matches!(kind, VerbKind::Products | VerbKind::Report) {
        let o = report::products(&ctx)?;
        ok &= o.ok;
        sections.insert("products".into(), o.report);
    }
    if matches!(kind, VerbKind::Theorems | VerbKind::Report) {
        let o = report::theorems(&ctx, &which)?;
        ok &= o.ok;
        sections.insert("theorems".into(), o.report);
    }
    Ok(finish(&source, sections, ok))
}

fn finish(source: &Value, sections: Map<String, Value>, ok: bool) -> Outcome {
    Outcome { report: json!({"instance": source, "ok": ok, "sections": sections}), ok }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    let (kind, args) = match &cli.verb {
        Verb::Validate(a) => (VerbKind::Validate, a),
        Verb::Cohomology(a) => (VerbKind::Cohomology, a),
        Verb::Products(a) => (VerbKind::Products, a),
        Verb::Theorems(a) => (VerbKind::Theorems, a),
        Verb::Report(a) => (VerbKind::Report, a),
    };
    let outcome = match run(kind, args) {
        Ok(o) => o,
        Err(e @ RunError::Input(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let body = match args.format {
        Format::Json => serde_json::to_string_pretty(&outcome.report).expect("serializable") + "\n",
        Format::Text => render::text(&outcome.report),
        Format::Csv => render::csv(&outcome.report),
    };
    match &args.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{body}"),
    }
    if outcome.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

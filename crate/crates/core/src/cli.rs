//! Command-line front end. [`run`] takes the argument list and the two
//! output streams so commands can be driven in-process by tests.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::arbitration::arbitrate;
use crate::candidates::read_candidates;
use crate::document::{load_model, rules_to_csv, LoadedModel, ModelDocument};
use crate::engine::FuzzyModel;
use crate::radio::{decision_possibility, default_model, rule_label, validate_model, Candidate};
use crate::sweep::{figure_preset, run_sweep, Axis, SweepSpec};

#[derive(Debug, Parser)]
#[command(
    name = "spectrum-fuzzy",
    version,
    about = "Fuzzy spectrum-access decisions for secondary users"
)]
pub struct Cli {
    /// Model document (JSON); the built-in model when absent
    #[arg(long, global = true, value_name = "PATH")]
    pub model: Option<PathBuf>,
    /// Admission threshold, overrides the model document's setting
    #[arg(long, global = true, value_name = "0..1", value_parser = parse_threshold)]
    pub threshold: Option<f64>,
    /// Output-universe samples used for defuzzification
    #[arg(long, global = true, value_name = "N")]
    pub grid_points: Option<usize>,
    /// Write the result here instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[value(alias = "table")]
    Human,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Access possibility for a single secondary user
    Eval(EvalArgs),
    /// Rank a batch of candidates and pick the one granted access
    Arbitrate(ArbitrateArgs),
    /// Decision surface over two inputs, written as CSV
    Sweep(SweepArgs),
    /// Check a model document's rule base for completeness
    Validate(ValidateArgs),
    /// List the rule base in table order
    DumpRules,
    /// Write the model document (JSON) of the model in use
    DumpModel,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, allow_negative_numbers = true, value_parser = parse_finite)]
    pub signal_dbm: f64,
    #[arg(long, allow_negative_numbers = true, value_parser = parse_finite)]
    pub velocity_kmh: f64,
    #[arg(long, allow_negative_numbers = true, value_parser = parse_finite)]
    pub spectrum_ratio: f64,
    #[arg(long, allow_negative_numbers = true, value_parser = parse_finite)]
    pub distance_m: f64,
    #[arg(long, default_value = "candidate")]
    pub id: String,
    /// Print memberships and the strongest rules
    #[arg(long)]
    pub trace: bool,
    /// Rules listed by --trace
    #[arg(long, default_value_t = 5)]
    pub top: usize,
}

#[derive(Debug, Args)]
pub struct ArbitrateArgs {
    /// CSV with header id,signal_dbm,velocity_kmh,spectrum_ratio,distance_m
    pub candidates: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Figure preset (7 to 11)
    #[arg(long, conflicts_with_all = ["axis1", "axis2", "fix"])]
    pub preset: Option<u8>,
    /// Row axis as name:lo:hi[:steps]
    #[arg(long, allow_hyphen_values = true, value_parser = parse_axis)]
    pub axis1: Option<AxisArg>,
    /// Column axis as name:lo:hi[:steps]
    #[arg(long, allow_hyphen_values = true, value_parser = parse_axis)]
    pub axis2: Option<AxisArg>,
    /// Fixed input as name=value, repeated for each non-swept input
    #[arg(long, allow_hyphen_values = true, value_parser = parse_fixed)]
    pub fix: Vec<(String, f64)>,
    /// Samples per axis
    #[arg(long)]
    pub steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Model document to check; falls back to --model, then the built-in model
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxisArg {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub steps: Option<usize>,
}

fn parse_finite(s: &str) -> Result<f64, String> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(format!("`{s}` is not finite")),
        Err(e) => Err(format!("`{s}` is not a number: {e}")),
    }
}

fn parse_threshold(s: &str) -> Result<f64, String> {
    let v = parse_finite(s)?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("threshold {v} outside [0, 1]"))
    }
}

fn parse_axis(s: &str) -> Result<AxisArg, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if !(3..=4).contains(&parts.len()) {
        return Err(format!("`{s}`: expected name:lo:hi[:steps]"));
    }
    let steps = match parts.get(3) {
        Some(p) => Some(
            p.parse::<usize>()
                .map_err(|e| format!("steps `{p}`: {e}"))?,
        ),
        None => None,
    };
    Ok(AxisArg {
        name: parts[0].to_string(),
        lo: parse_finite(parts[1])?,
        hi: parse_finite(parts[2])?,
        steps,
    })
}

fn parse_fixed(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("`{s}`: expected name=value"))?;
    Ok((name.to_string(), parse_finite(value)?))
}

/// Runs one invocation and returns the process exit status: 0 on a valid
/// answer (including "nobody admitted"), 1 on bad input or a failed
/// validation, 2 on a usage error.
pub fn run<I, S, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
            } else {
                let _ = out.write_all(text.as_bytes());
            }
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, &outcome.text)
                    .with_context(|| format!("writing {}", path.display())),
                None => out.write_all(outcome.text.as_bytes()).map_err(Into::into),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e:#}");
                return 1;
            }
            outcome.status
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}

struct Outcome {
    text: String,
    status: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, status: 0 }
    }
}

fn read_model(path: &Path) -> Result<LoadedModel> {
    let text =
        fs::read_to_string(path).with_context(|| format!("reading model {}", path.display()))?;
    load_model(&text).with_context(|| format!("model {}", path.display()))
}

fn load(cli: &Cli, path: Option<&Path>) -> Result<LoadedModel> {
    let mut loaded = match path {
        Some(p) => read_model(p)?,
        None => LoadedModel::with_default_threshold(default_model()),
    };
    if let Some(n) = cli.grid_points {
        loaded.model = loaded.model.with_grid_points(n)?;
    }
    if let Some(t) = cli.threshold {
        loaded.threshold = t;
    }
    Ok(loaded)
}

/// Loads the model and refuses one whose rule base is incomplete.
fn load_checked(cli: &Cli) -> Result<LoadedModel> {
    let loaded = load(cli, cli.model.as_deref())?;
    let report = validate_model(&loaded.model);
    if let Some(first) = report.failures.first() {
        let origin = cli.model.as_ref().map_or_else(
            || "built-in model".to_string(),
            |p| format!("model {}", p.display()),
        );
        bail!("{origin}: {first}");
    }
    Ok(loaded)
}

fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Eval(args) => cmd_eval(cli, args),
        Command::Arbitrate(args) => cmd_arbitrate(cli, args),
        Command::Sweep(args) => cmd_sweep(cli, args),
        Command::Validate(args) => cmd_validate(cli, args),
        Command::DumpRules => cmd_dump_rules(cli),
        Command::DumpModel => cmd_dump_model(cli),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_eval(cli: &Cli, args: &EvalArgs) -> Result<Outcome> {
    let LoadedModel { model, threshold } = load_checked(cli)?;
    let candidate = Candidate::new(
        args.id.clone(),
        args.signal_dbm,
        args.velocity_kmh,
        args.spectrum_ratio,
        args.distance_m,
    );
    let result = decision_possibility(&candidate, &model, threshold, args.trace)?;
    let mut s = String::new();
    match cli.format {
        Format::Csv => {
            s.push_str("id,possibility,admitted,threshold\n");
            s.push_str(&format!(
                "{},{:.6},{},{:.6}\n",
                result.candidate_id, result.possibility, result.admitted, threshold
            ));
        }
        Format::Human => {
            s.push_str(&format!("candidate: {}\n", result.candidate_id));
            s.push_str(&format!("possibility: {:.6}\n", result.possibility));
            s.push_str(&format!(
                "admitted: {} (threshold {:.6})\n",
                yes_no(result.admitted),
                threshold
            ));
        }
    }
    if let Some(trace) = &result.trace {
        if cli.format == Format::Human {
            s.push_str("memberships:\n");
            for ((var, x), degrees) in model
                .inputs()
                .iter()
                .zip(&trace.inputs)
                .zip(&trace.memberships)
            {
                let terms: Vec<String> = var
                    .terms()
                    .iter()
                    .zip(degrees)
                    .map(|(t, d)| format!("{} {:.6}", t.name(), d))
                    .collect();
                s.push_str(&format!(
                    "  {} = {:.6}: {}\n",
                    var.name(),
                    x,
                    terms.join(", ")
                ));
            }
            s.push_str(&format!("strongest rules (top {}):\n", args.top));
            for (i, strength) in trace.strongest_rules(args.top) {
                s.push_str(&format!(
                    "  row {:>2}  strength {:.6}  {}\n",
                    i + 1,
                    strength,
                    rule_label(&model, &model.rules()[i])
                ));
            }
        } else {
            s.push_str("row,strength\n");
            for (i, strength) in trace.strongest_rules(args.top) {
                s.push_str(&format!("{},{:.6}\n", i + 1, strength));
            }
        }
    }
    Ok(Outcome::ok(s))
}

fn cmd_arbitrate(cli: &Cli, args: &ArbitrateArgs) -> Result<Outcome> {
    let LoadedModel { model, threshold } = load_checked(cli)?;
    let file = fs::File::open(&args.candidates)
        .with_context(|| format!("opening candidates {}", args.candidates.display()))?;
    let candidates = read_candidates(file)
        .with_context(|| format!("candidates {}", args.candidates.display()))?;
    let outcome = arbitrate(&candidates, &model, threshold)?;
    let mut s = String::new();
    match cli.format {
        Format::Csv => {
            s.push_str("rank,id,possibility,admitted,winner\n");
            for (k, r) in outcome.ranking.iter().enumerate() {
                let winner = k == 0 && outcome.winner_id.is_some();
                s.push_str(&format!(
                    "{},{},{:.6},{},{}\n",
                    k + 1,
                    r.id,
                    r.possibility,
                    r.possibility >= threshold,
                    winner
                ));
            }
        }
        Format::Human => {
            s.push_str(&format!("threshold: {threshold:.6}\n"));
            let width = outcome
                .ranking
                .iter()
                .map(|r| r.id.len())
                .max()
                .unwrap_or(0);
            for (k, r) in outcome.ranking.iter().enumerate() {
                let mark = if r.possibility >= threshold {
                    "  admitted"
                } else {
                    ""
                };
                s.push_str(&format!(
                    "{:>3}. {:<width$}  {:.6}{}\n",
                    k + 1,
                    r.id,
                    r.possibility,
                    mark
                ));
            }
            match &outcome.winner_id {
                Some(id) => s.push_str(&format!("winner: {id}\n")),
                None => s.push_str("no candidate admitted\n"),
            }
        }
    }
    Ok(Outcome::ok(s))
}

fn sweep_spec(args: &SweepArgs) -> Result<SweepSpec<f64>> {
    let mut spec = match (args.preset, &args.axis1, &args.axis2) {
        (Some(fig), _, _) => figure_preset(fig)?,
        (None, Some(a1), Some(a2)) => {
            let steps = args.steps.unwrap_or(crate::sweep::PRESET_STEPS);
            let axis =
                |a: &AxisArg| Axis::new(a.name.clone(), a.lo, a.hi, a.steps.unwrap_or(steps));
            let mut fixed = BTreeMap::new();
            for (name, value) in &args.fix {
                if fixed.insert(name.clone(), *value).is_some() {
                    bail!("`{name}` fixed more than once");
                }
            }
            return Ok(SweepSpec {
                axis1: axis(a1),
                axis2: axis(a2),
                fixed,
            });
        }
        _ => return Err(anyhow!("sweep needs --preset or both --axis1 and --axis2")),
    };
    if let Some(steps) = args.steps {
        spec = spec.with_steps(steps);
    }
    Ok(spec)
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> Result<Outcome> {
    let LoadedModel { model, .. } = load_checked(cli)?;
    let spec = sweep_spec(args)?;
    let result = run_sweep(&spec, &model)?;
    Ok(Outcome::ok(result.to_csv()))
}

fn cmd_validate(cli: &Cli, args: &ValidateArgs) -> Result<Outcome> {
    let path = args.path.as_deref().or(cli.model.as_deref());
    let loaded = load(cli, path)?;
    let report = validate_model(&loaded.model);
    if report.is_complete() {
        return Ok(Outcome::ok(format!(
            "{} rules, complete\n",
            report.rule_count
        )));
    }
    let mut s = String::new();
    for f in &report.failures {
        s.push_str(&f.to_string());
        s.push('\n');
    }
    s.push_str(&format!(
        "{} rules, {} failure(s)\n",
        report.rule_count,
        report.failures.len()
    ));
    Ok(Outcome { text: s, status: 1 })
}

fn rules_table(model: &FuzzyModel<f64>) -> String {
    let names: Vec<&str> = model.inputs().iter().map(|v| v.name()).collect();
    let mut s = format!("row  {} → {}\n", names.join(", "), model.output().name());
    for (i, rule) in model.rules().iter().enumerate() {
        s.push_str(&format!("{:>2}.  {}", i + 1, rule_label(model, rule)));
        if rule.weight != 1.0 {
            s.push_str(&format!("  (weight {:.6})", rule.weight));
        }
        s.push('\n');
    }
    s
}

fn cmd_dump_rules(cli: &Cli) -> Result<Outcome> {
    let loaded = load(cli, cli.model.as_deref())?;
    let text = match cli.format {
        Format::Csv => rules_to_csv(&loaded.model),
        Format::Human => rules_table(&loaded.model),
    };
    Ok(Outcome::ok(text))
}

fn cmd_dump_model(cli: &Cli) -> Result<Outcome> {
    let loaded = load(cli, cli.model.as_deref())?;
    Ok(Outcome::ok(
        ModelDocument::from_model(&loaded.model, loaded.threshold).to_json(),
    ))
}

//! The `olk` command.
//!
//! Exit status: 0 on success, 1 on a domain error, 2 on a usage error. Every
//! error is printed to stderr as `error[<class>]: <message>`.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use olk_core::geometry::{self, Predictions};
use olk_core::norms::{self, WeightedProfile};
use olk_core::{
    GeometryError, NormError, OrliczError, Regime, SpaceConfig, StepError, StepFunction,
};
use serde_json::{json, Map, Value};

use crate::config::{load_space, ConfigError};
use crate::parallel::{map_indexed, worker_count};
use crate::report::{self, fmt_sig};
use crate::steps::{read_steps, StepsError};

#[derive(Debug, Parser)]
#[command(
    name = "olk",
    version,
    about = "Norms and geometry of Orlicz-Lorentz spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Space definition (TOML).
    #[arg(long)]
    space: PathBuf,
    /// Also write a JSON report here.
    #[arg(long)]
    json_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Sampling {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    samples: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    Luxemburg,
    Orlicz,
    Both,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Luxemburg and Orlicz norms of a step function, with K(x).
    Norm {
        #[command(flatten)]
        common: Common,
        /// Step function (`.steps`).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        which: Which,
    },
    /// Decreasing rearrangement of |x|.
    Rearrange {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: PathBuf,
    },
    /// The complementary function, optionally evaluated at points.
    Conjugate {
        #[command(flatten)]
        common: Common,
        /// Evaluate ψ, q and ψ⁻¹ here (repeatable).
        #[arg(long = "at", allow_negative_numbers = true)]
        at: Vec<f64>,
    },
    /// Δ₂ classification of φ and of ψ.
    Classify {
        #[command(flatten)]
        common: Common,
    },
    /// Predicted geometric properties.
    Predict {
        #[command(flatten)]
        common: Common,
    },
    /// Explicit square pair for a space that is not non-square.
    Witness {
        #[command(flatten)]
        common: Common,
    },
    /// Seeded search for near-square pairs on the unit sphere.
    Probe {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Sampled local non-squareness constant at a unit vector.
    Luns {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        sampling: Sampling,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Norm { .. } => "norm",
            Command::Rearrange { .. } => "rearrange",
            Command::Conjugate { .. } => "conjugate",
            Command::Classify { .. } => "classify",
            Command::Predict { .. } => "predict",
            Command::Witness { .. } => "witness",
            Command::Probe { .. } => "probe",
            Command::Luns { .. } => "luns",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Norm { common, .. }
            | Command::Rearrange { common, .. }
            | Command::Conjugate { common, .. }
            | Command::Classify { common }
            | Command::Predict { common }
            | Command::Witness { common }
            | Command::Probe { common, .. }
            | Command::Luns { common, .. } => common,
        }
    }
}

/// A failed run: exit status 1 (domain) or 2 (usage).
#[derive(Debug)]
struct Failure {
    code: u8,
    class: &'static str,
    message: String,
}

impl Failure {
    fn usage(class: &'static str, message: impl ToString) -> Self {
        Self {
            code: 2,
            class,
            message: message.to_string(),
        }
    }

    fn domain(class: &'static str, message: impl ToString) -> Self {
        Self {
            code: 1,
            class,
            message: message.to_string(),
        }
    }
}

fn step_class(_: &StepError) -> &'static str {
    "invalid_step"
}

fn orlicz_class(e: &OrliczError) -> &'static str {
    match e {
        OrliczError::InvalidParameter { .. } | OrliczError::InvalidTable(_) => "invalid_parameter",
        OrliczError::NegativeArgument(_) => "negative_argument",
        OrliczError::HorizonExceeded { .. } => "horizon_exceeded",
    }
}

fn norm_class(e: &NormError) -> &'static str {
    match e {
        NormError::OutsideSpace => "outside_space",
        NormError::ZeroFunction => "zero_function",
        NormError::HorizonExceeded { .. } => "horizon_exceeded",
        NormError::OutsideDualBall { .. } => "outside_dual_ball",
        NormError::NormAboveOne { .. } => "norm_above_one",
        NormError::RouteDisagreement { .. } => "route_disagreement",
        NormError::DomainMismatch { .. } => "domain_mismatch",
        NormError::Step(s) => step_class(s),
    }
}

impl From<NormError> for Failure {
    fn from(e: NormError) -> Self {
        Failure::domain(norm_class(&e), e)
    }
}

impl From<OrliczError> for Failure {
    fn from(e: OrliczError) -> Self {
        Failure::domain(orlicz_class(&e), e)
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        let class = match &e {
            GeometryError::Precondition(_) => "precondition",
            GeometryError::OutsideBall { .. } => "outside_ball",
            GeometryError::NotUnit { .. } => "not_unit",
            GeometryError::Norm(n) => norm_class(n),
            GeometryError::Orlicz(o) => orlicz_class(o),
            GeometryError::Step(s) => step_class(s),
        };
        Failure::domain(class, e)
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { .. } => Failure::usage("io", e),
            _ => Failure::usage("config", e),
        }
    }
}

impl From<StepsError> for Failure {
    fn from(e: StepsError) -> Self {
        match &e {
            StepsError::Io { .. } => Failure::usage("io", e),
            StepsError::Syntax { .. } => Failure::usage("steps_syntax", e),
            StepsError::Invalid(s) => Failure::domain(step_class(s), e),
        }
    }
}

/// Text for stdout plus the fields of the JSON document.
struct Outcome {
    text: String,
    fields: Map<String, Value>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            text: String::new(),
            fields: Map::new(),
        }
    }

    fn line(&mut self, label: &str, value: impl AsRef<str>) {
        let _ = writeln!(self.text, "{:<20}{}", format!("{label}:"), value.as_ref());
    }

    fn field(&mut self, key: &str, value: Value) {
        self.fields.insert(key.into(), value);
    }
}

fn predictions_text(out: &mut Outcome, pred: &Predictions) {
    for (prop, v) in pred {
        let _ = writeln!(
            out.text,
            "{}: {} ({}){}",
            prop.name(),
            v.status.name(),
            v.reason,
            if v.heuristic { " [heuristic]" } else { "" }
        );
    }
}

fn steps_text(out: &mut Outcome, label: &str, x: &StepFunction) {
    let _ = writeln!(out.text, "{label}:");
    for p in x.pieces() {
        let _ = writeln!(
            out.text,
            "  {} {} {}",
            fmt_sig(p.start),
            fmt_sig(p.len),
            fmt_sig(p.value)
        );
    }
}

fn load_input(cfg: &SpaceConfig, path: &Path) -> Result<StepFunction, Failure> {
    Ok(read_steps(path, cfg.domain())?)
}

fn norm(cfg: &SpaceConfig, x: &StepFunction, which: Which) -> Result<Outcome, Failure> {
    let mut out = Outcome::new();
    out.field("input", report::step_json(x));
    if matches!(which, Which::Luxemburg | Which::Both) {
        let l = norms::luxemburg_norm(cfg, x)?;
        out.line("luxemburg", fmt_sig(l));
        out.field("luxemburg", report::num(l));
    }
    if matches!(which, Which::Orlicz | Which::Both) {
        if x.is_zero() {
            out.line("orlicz", fmt_sig(0.0));
            out.field("orlicz", report::num(0.0));
        } else {
            let prof = WeightedProfile::of(cfg, x);
            let value = norms::orlicz_of_profile(cfg, &prof)?;
            let detail = norms::orlicz_norm_detailed_of_profile(cfg, &prof)?;
            out.line("orlicz", fmt_sig(value));
            out.line("k_star", fmt_sig(detail.k.k_star));
            out.line("k_double_star", fmt_sig(detail.k.k_double_star));
            out.field("orlicz", report::orlicz_json(&detail));
        }
    }
    Ok(out)
}

fn rearrange(x: &StepFunction) -> Outcome {
    let mut out = Outcome::new();
    let r = x.rearrange();
    out.text.push_str("# start length value\n");
    for (a, b, v) in r.intervals() {
        let _ = writeln!(out.text, "{} {} {}", fmt_sig(a), fmt_sig(b - a), fmt_sig(v));
    }
    out.field("input", report::step_json(x));
    out.field("levels", report::levels_json(r.levels()));
    out.field("support_measure", report::num(r.total_measure()));
    out
}

fn conjugate(cfg: &SpaceConfig, at: &[f64]) -> Result<Outcome, Failure> {
    let mut out = Outcome::new();
    out.line("phi", report::phi_text(cfg.phi()));
    out.line("psi", report::phi_text(cfg.psi()));
    let points: &[f64] = if at.is_empty() { &[0.5, 1.0, 2.0] } else { at };
    let mut evals = Vec::new();
    for &v in points {
        if !(v >= 0.0) {
            return Err(Failure::domain(
                "negative_argument",
                format!("evaluation point {v} must be non-negative"),
            ));
        }
        let psi = cfg.psi().try_eval(v)?;
        let q = cfg.pair.q(v);
        let inv = cfg.pair.psi_inverse(v, cfg.tol_root)?;
        let _ = writeln!(
            out.text,
            "v={}  psi(v)={}  q(v)={}  psi_inv(v)={}",
            fmt_sig(v),
            fmt_sig(psi),
            fmt_sig(q),
            fmt_sig(inv)
        );
        evals.push(json!({
            "v": report::num(v),
            "psi": report::num(psi),
            "q": report::num(q),
            "psi_inverse": report::num(inv),
        }));
    }
    out.field("evaluations", Value::Array(evals));
    Ok(out)
}

fn classification_text(c: &olk_core::Classification) -> String {
    let mut s = String::from(if c.holds { "holds" } else { "fails" });
    if let Some(k) = c.constant {
        let _ = write!(s, " (K={})", fmt_sig(k));
    } else if let Some((u, r)) = c.observed {
        let _ = write!(s, " (ratio {} at u={})", fmt_sig(r), fmt_sig(u));
    }
    if c.heuristic {
        s.push_str(" [heuristic]");
    }
    s
}

fn classify(cfg: &SpaceConfig) -> Outcome {
    let mut out = Outcome::new();
    let mut fields = Map::new();
    for (key, f) in [("phi", cfg.phi()), ("psi", cfg.psi())] {
        for (rname, regime) in [("all", Regime::AllValues), ("large", Regime::LargeValues)] {
            let c = f.classify_delta2_with(regime, &cfg.delta2);
            out.line(&format!("{key} delta2({rname})"), classification_text(&c));
            fields.insert(
                format!("{key}_delta2_{rname}"),
                report::classification_json(&c),
            );
        }
    }
    out.field("classification", Value::Object(fields));
    out
}

fn predicted(cfg: &SpaceConfig, out: &mut Outcome) -> Predictions {
    let pred = geometry::predict(cfg);
    predictions_text(out, &pred);
    out.field("predicted", report::predictions_json(&pred));
    pred
}

fn witness(cfg: &SpaceConfig) -> Result<Outcome, Failure> {
    let mut out = Outcome::new();
    predicted(cfg, &mut out);
    let w = geometry::build_witness(cfg)?;
    out.line("amplitude", fmt_sig(w.amplitude));
    steps_text(&mut out, "x", &w.x);
    steps_text(&mut out, "y", &w.y);
    for (label, n) in ["norm x", "norm y", "norm (x+y)/2", "norm (x-y)/2"]
        .iter()
        .zip(w.norms)
    {
        out.line(label, fmt_sig(n));
    }
    out.field("witness", report::witness_json(&w));
    out.field("search", Value::Null);
    Ok(out)
}

fn probe(cfg: &SpaceConfig, s: &Sampling) -> Result<Outcome, Failure> {
    let mut out = Outcome::new();
    predicted(cfg, &mut out);
    geometry::check_probe_precondition(cfg)?;
    let defects = map_indexed(s.samples, worker_count(), |i| {
        geometry::probe_defect(cfg, s.seed, i)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let stats = geometry::summarize_probe(cfg, s.seed, &defects)?;
    out.line("seed", s.seed.to_string());
    out.line("samples", s.samples.to_string());
    out.line(
        "max defect",
        stats.max_defect.map_or("none".into(), fmt_sig),
    );
    out.line(
        "argmax index",
        stats.argmax_index.map_or("none".into(), |i| i.to_string()),
    );
    out.line("violations", stats.violations.to_string());
    out.line(
        "all below one",
        if stats.strictly_below_one() {
            "yes"
        } else {
            "no"
        },
    );
    out.field("witness", Value::Null);
    out.field("search", report::search_json(&stats));
    Ok(out)
}

fn luns(cfg: &SpaceConfig, x: &StepFunction, s: &Sampling) -> Result<Outcome, Failure> {
    let mut out = Outcome::new();
    predicted(cfg, &mut out);
    let exploratory = geometry::check_luns_precondition(cfg, x)?;
    let samples = map_indexed(s.samples, worker_count(), |i| {
        geometry::luns_sample(cfg, x, s.seed, i)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let est = geometry::summarize_luns(cfg, x, s.seed, &samples, exploratory)?;
    out.line("seed", s.seed.to_string());
    out.line("samples", s.samples.to_string());
    out.line("delta_hat", fmt_sig(est.delta_hat));
    out.line("max defect", fmt_sig(est.max_defect));
    out.line("argmax index", est.argmax_index.to_string());
    out.line("xi1_hat", fmt_sig(est.xi1_hat));
    out.line("xi2_hat", fmt_sig(est.xi2_hat));
    out.line("exploratory", if exploratory { "yes" } else { "no" });
    out.field("input", report::step_json(x));
    out.field("luns", report::luns_json(&est));
    Ok(out)
}

fn execute(cmd: &Command) -> Result<Outcome, Failure> {
    let cfg = load_space(&cmd.common().space)?;
    match cmd {
        Command::Norm { input, which, .. } => norm(&cfg, &load_input(&cfg, input)?, *which),
        Command::Rearrange { input, .. } => Ok(rearrange(&load_input(&cfg, input)?)),
        Command::Conjugate { at, .. } => conjugate(&cfg, at),
        Command::Classify { .. } => Ok(classify(&cfg)),
        Command::Predict { .. } => {
            let mut out = Outcome::new();
            predicted(&cfg, &mut out);
            Ok(out)
        }
        Command::Witness { .. } => witness(&cfg),
        Command::Probe { sampling, .. } => probe(&cfg, sampling),
        Command::Luns {
            input, sampling, ..
        } => luns(&cfg, &load_input(&cfg, input)?, sampling),
    }
    .map(|mut out| {
        let mut doc = Map::new();
        doc.insert("command".into(), json!(cmd.name()));
        doc.insert("space".into(), report::space_json(&cfg));
        doc.append(&mut out.fields);
        out.fields = doc;
        out
    })
}

fn write_json(path: &Path, fields: Map<String, Value>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(&Value::Object(fields))
        .map_err(|e| Failure::domain("serialization", e))?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Failure::usage("io", format!("{}: {e}", path.display())))
}

fn fail(f: Failure) -> ExitCode {
    eprintln!("error[{}]: {}", f.class, f.message);
    ExitCode::from(f.code)
}

/// Parses `argv` (including the program name) and runs the subcommand.
pub fn run<I, T>(argv: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            if !e.use_stderr() {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let rendered = e.render().to_string();
            let msg = rendered
                .strip_prefix("error: ")
                .unwrap_or(&rendered)
                .trim_end();
            return fail(Failure::usage("usage", msg));
        }
    };
    match execute(&cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            if let Some(path) = &cli.command.common().json_out {
                if let Err(f) = write_json(path, out.fields) {
                    return fail(f);
                }
            }
            ExitCode::SUCCESS
        }
        Err(f) => fail(f),
    }
}

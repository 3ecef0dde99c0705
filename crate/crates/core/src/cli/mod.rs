//! The `mutsched` command line.
//!
//! Exit codes: 0 success, 1 malformed input or usage, 2 I/O failure,
//! 3 deadline miss during `simulate`, 4 empty operator set.

mod config;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::analysis::{
    parse_report_csv, render_score, render_table, run_campaign, AnalysisError, Baseline,
    CampaignOptions, OraclePolicy, TableRow,
};
use crate::engine::{
    derive_gantt, parse_events_tsv, render_ascii, render_svg, run, write_accesses_tsv,
    write_events_tsv, write_gantt_csv, write_outputs_tsv, SimError, Trace,
};
use crate::model::{parse_model, serialize_model, Semantics, SystemModel, Tick};
use crate::mutation::{
    apply_mutant, enumerate_mutants, write_manifest, DeltaConfig, MutationError, OperatorSet,
};

pub use config::{parse_campaign, CampaignFile, NameList, CAMPAIGN_SCHEMA};

#[derive(Parser, Debug)]
#[command(
    name = "mutsched",
    version,
    about = "Task-set scheduling simulator and model mutation-testing tool"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Simulate a model and write its trace.
    Simulate(SimulateArgs),
    /// List (and optionally write) the first-order mutants of a model.
    Mutate(MutateArgs),
    /// Run a mutation campaign and report kills per operator class.
    Analyze(AnalyzeArgs),
    /// Render a Gantt chart from an event log.
    Gantt(GanttArgs),
    /// Render a campaign CSV as a table.
    Report(ReportArgs),
}

#[derive(Args, Debug)]
struct SimOverrides {
    /// time-aware or zero-time
    #[arg(long)]
    semantics: Option<Semantics>,
    /// Simulation horizon in ticks.
    #[arg(long)]
    horizon: Option<u64>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    model: PathBuf,
    #[command(flatten)]
    sim: SimOverrides,
    /// Write events.tsv, accesses.tsv, outputs.tsv, gantt.csv and gantt.svg here.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    #[arg(long)]
    events: Option<PathBuf>,
    #[arg(long)]
    accesses: Option<PathBuf>,
    #[arg(long)]
    outputs: Option<PathBuf>,
    #[arg(long)]
    gantt_csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Print an ASCII Gantt chart instead of the event log.
    #[arg(long)]
    ascii: bool,
}

#[derive(Args, Debug)]
struct MutationArgs {
    /// Operators: keys (mITO), classes (period), `all` or `none`, comma-separated.
    #[arg(long)]
    ops: Option<String>,
    /// δ values for every parameterized class, e.g. `1,2,3`.
    #[arg(long, value_delimiter = ',')]
    delta: Option<Vec<u64>>,
    /// Campaign configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct MutateArgs {
    model: PathBuf,
    #[command(flatten)]
    mutation: MutationArgs,
    /// Write the manifest here instead of stdout.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Write every mutant as a model file named by its id.
    #[arg(long)]
    emit_models: bool,
    #[arg(long, default_value = "mutants")]
    out_dir: PathBuf,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    model: PathBuf,
    #[command(flatten)]
    mutation: MutationArgs,
    #[command(flatten)]
    sim: SimOverrides,
    /// same or zero-time
    #[arg(long)]
    baseline: Option<Baseline>,
    /// Oracles to consult: deadline, access, output or all.
    #[arg(long)]
    oracles: Option<String>,
    #[arg(long)]
    threads: Option<usize>,
    /// Write the class CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write the rendered table here.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Write per-mutant verdicts here.
    #[arg(long)]
    details: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GanttArgs {
    /// Event log written by `simulate`.
    trace: PathBuf,
    #[arg(long)]
    svg: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReportArgs {
    report: PathBuf,
    /// Echo the validated CSV instead of a table.
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("no mutation operator enabled")]
    EmptyOperatorSet,
    #[error("deadline missed")]
    DeadlineMiss,
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Input { .. } | CliError::Invalid(_) => 1,
            CliError::Io { .. } => 2,
            CliError::DeadlineMiss => 3,
            CliError::EmptyOperatorSet => 4,
        }
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<MutationError> for CliError {
    fn from(e: MutationError) -> Self {
        match e {
            MutationError::EmptyOperatorSet => CliError::EmptyOperatorSet,
            e => CliError::Invalid(e.to_string()),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Mutation(e) => e.into(),
            e => CliError::Invalid(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
}

fn load_model(path: &Path, sim: Option<&SimOverrides>) -> Result<SystemModel, CliError> {
    let text = read(path)?;
    let mut model = parse_model(&text).map_err(|e| CliError::Input {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    if let Some(sim) = sim {
        if let Some(s) = sim.semantics {
            model.config.semantics = s;
        }
        if let Some(h) = sim.horizon {
            model.config.horizon = Tick(h);
        }
    }
    Ok(model)
}

fn load_config(path: Option<&Path>) -> Result<CampaignFile, CliError> {
    match path {
        None => Ok(CampaignFile::default()),
        Some(p) => parse_campaign(&read(p)?).map_err(|message| CliError::Input {
            path: p.to_owned(),
            message,
        }),
    }
}

/// Operator set and δ values from flags, falling back to the config file.
fn mutation_settings(
    args: &MutationArgs,
    cfg: &CampaignFile,
) -> Result<(OperatorSet, DeltaConfig), CliError> {
    let spec = match (&args.ops, &cfg.operators) {
        (Some(s), _) => s.clone(),
        (None, Some(list)) => list.joined(),
        (None, None) => "all".to_owned(),
    };
    let enabled = OperatorSet::parse(&spec).map_err(CliError::Usage)?;
    let deltas = match (&args.delta, &cfg.deltas) {
        (Some(d), _) => DeltaConfig::uniform(d.clone()),
        (None, Some(d)) => d.clone(),
        (None, None) => DeltaConfig::default(),
    };
    Ok((enabled, deltas))
}

/// Runs the command line with `args` (including the program name) and
/// returns the process exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Simulate(a) => simulate(a, out, err),
        Command::Mutate(a) => mutate(a, out),
        Command::Analyze(a) => analyze(a, out),
        Command::Gantt(a) => gantt(a, out),
        Command::Report(a) => report(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "mutsched: {e}");
            e.code()
        }
    }
}

/// Entry point of the `mutsched` binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn simulate(a: SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let model = load_model(&a.model, Some(&a.sim))?;
    let trace = run(&model)?;

    let mut files: Vec<(PathBuf, String)> = Vec::new();
    if let Some(dir) = &a.out_dir {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.clone(),
            source,
        })?;
        files.push((dir.join("events.tsv"), write_events_tsv(&trace)));
        files.push((dir.join("accesses.tsv"), write_accesses_tsv(&trace)));
        files.push((dir.join("outputs.tsv"), write_outputs_tsv(&trace)));
        files.push((dir.join("gantt.csv"), write_gantt_csv(&trace.gantt)));
        files.push((
            dir.join("gantt.svg"),
            render_svg(&trace.gantt, trace.horizon),
        ));
    }
    let single = [
        (&a.events, write_events_tsv as fn(&Trace) -> String),
        (&a.accesses, write_accesses_tsv),
        (&a.outputs, write_outputs_tsv),
        (&a.gantt_csv, |t: &Trace| write_gantt_csv(&t.gantt)),
        (&a.svg, |t: &Trace| render_svg(&t.gantt, t.horizon)),
    ];
    for (path, render) in single {
        if let Some(p) = path {
            files.push((p.clone(), render(&trace)));
        }
    }
    for (path, text) in &files {
        write(path, text)?;
    }
    if a.ascii {
        emit(out, &render_ascii(&trace.gantt, trace.horizon))?;
    } else if files.is_empty() {
        emit(out, &write_events_tsv(&trace))?;
    }

    let misses: Vec<String> = trace
        .deadline_misses()
        .map(|e| format!("{}#{}@{}", e.task, e.instance, e.time))
        .collect();
    if misses.is_empty() {
        Ok(())
    } else {
        let _ = writeln!(err, "deadline misses: {}", misses.join(" "));
        Err(CliError::DeadlineMiss)
    }
}

fn mutate(a: MutateArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load_config(a.mutation.config.as_deref())?;
    let (enabled, deltas) = mutation_settings(&a.mutation, &cfg)?;
    if enabled.is_empty() {
        return Err(CliError::EmptyOperatorSet);
    }
    let model = load_model(&a.model, None)?;
    let mutants = enumerate_mutants(&model, &deltas, &enabled)?;

    let manifest = write_manifest(&mutants);
    match &a.manifest {
        Some(p) => write(p, &manifest)?,
        None => emit(out, &manifest)?,
    }
    if a.emit_models {
        fs::create_dir_all(&a.out_dir).map_err(|source| CliError::Io {
            path: a.out_dir.clone(),
            source,
        })?;
        for d in &mutants {
            let mutant = apply_mutant(&model, d)?;
            write(
                &a.out_dir.join(format!("{}.json", d.id)),
                &serialize_model(&mutant),
            )?;
        }
    }
    Ok(())
}

fn analyze(a: AnalyzeArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = load_config(a.mutation.config.as_deref())?;
    let (enabled, deltas) = mutation_settings(&a.mutation, &cfg)?;
    if enabled.is_empty() {
        return Err(CliError::EmptyOperatorSet);
    }
    let sim = SimOverrides {
        semantics: a.sim.semantics.or(cfg.semantics),
        horizon: a.sim.horizon.or(cfg.horizon.map(Tick::get)),
    };
    let model = load_model(&a.model, Some(&sim))?;
    let policy = match (&a.oracles, &cfg.oracles) {
        (Some(s), _) => OraclePolicy::parse(s).map_err(CliError::Usage)?,
        (None, Some(list)) => list.iter().copied().collect(),
        (None, None) => OraclePolicy::all(),
    };
    let opts = CampaignOptions {
        deltas,
        enabled,
        policy,
        baseline: a.baseline.or(cfg.baseline).unwrap_or_default(),
        threads: a.threads.or(cfg.threads),
    };
    let report = run_campaign(&model, &opts)?;

    let rendered = report.render();
    if let Some(p) = &a.csv {
        write(p, &report.to_csv())?;
    }
    if let Some(p) = &a.table {
        write(p, &rendered)?;
    }
    if let Some(p) = &a.details {
        write(p, &report.details_tsv())?;
    }
    emit(out, &rendered)?;
    emit(
        out,
        &format!("mutation_score={}\n", render_score(report.score())),
    )
}

fn gantt(a: GanttArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = read(&a.trace)?;
    let input = |message: String| CliError::Input {
        path: a.trace.clone(),
        message,
    };
    let events = parse_events_tsv(&text).map_err(|e| input(e.to_string()))?;
    let trace = Trace::from_events(events);
    let chart = derive_gantt(&trace).map_err(|e| input(e.to_string()))?;
    let rendered = if a.svg {
        render_svg(&chart, trace.horizon)
    } else {
        render_ascii(&chart, trace.horizon)
    };
    match &a.output {
        Some(p) => write(p, &rendered),
        None => emit(out, &rendered),
    }
}

fn report(a: ReportArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let text = read(&a.report)?;
    let rows = parse_report_csv(&text).map_err(|e| CliError::Input {
        path: a.report.clone(),
        message: e.to_string(),
    })?;
    if a.csv {
        return emit(out, &crate::analysis::write_report_csv(&rows));
    }
    let mut rendered = render_table(&rows);
    if let Some(TableRow {
        counts: Some(total),
        ..
    }) = rows.iter().find(|r| r.label == "total")
    {
        rendered.push_str(&format!(
            "mutation score: {} ({}/{})\n",
            render_score(total.score()),
            total.kills_total,
            total.mutants
        ));
    }
    emit(out, &rendered)
}

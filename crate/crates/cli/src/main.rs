use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use vrpsd_core::cuts::CutKind;
use vrpsd_core::generate::{generate, GeneratorConfig};
use vrpsd_core::lp::write_model;
use vrpsd_core::model::{parse_instance, write_instance};
use vrpsd_core::solver::{solve, Mode, SolveReport, SolverConfig};
use vrpsd_core::verify::{run_battery, Fault, Sizes};
use vrpsd_core::{FirstStage, RecourseKind, WeightScheme};

#[derive(Parser)]
#[command(name = "vrpsd", version, about = "Exact solver for the vehicle routing problem with stochastic demands")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one or more instance files.
    Solve(SolveArgs),
    /// Write a random instance.
    Gen(GenArgs),
    /// Run the oracle property battery.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    Cvrp,
    Subtour,
}

#[derive(Clone, Copy, ValueEnum)]
enum RecourseArg {
    Classical,
    Scenopt,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Ils,
    Sri,
    #[value(name = "ils+sri")]
    IlsSri,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightsArg {
    Classical,
    Preventive,
}

#[derive(Clone, Copy, ValueEnum)]
enum SizesArg {
    Tiny,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    Phi,
}

#[derive(clap::Args)]
struct SolveArgs {
    #[arg(required = true)]
    instances: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "ils")]
    mode: ModeArg,
    #[arg(long = "first-stage", value_enum, default_value = "cvrp")]
    first_stage: StageArg,
    #[arg(long, value_enum, default_value = "scenopt")]
    recourse: RecourseArg,
    /// Seconds.
    #[arg(long = "time-limit", default_value_t = 1800.0)]
    time_limit: f64,
    /// Seconds for the first root phase.
    #[arg(long = "phase1-limit", default_value_t = 60.0)]
    phase1_limit: f64,
    #[arg(long = "b", default_value_t = 1, value_parser = clap::value_parser!(i64).range(1..=2))]
    bound: i64,
    #[arg(long, value_enum, default_value = "classical")]
    weights: WeightsArg,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write every generated cut, one per line (single instance only).
    #[arg(long = "dump-cuts")]
    dump_cuts: Option<PathBuf>,
    /// Write the final model in LP format (single instance only).
    #[arg(long = "dump-model")]
    dump_model: Option<PathBuf>,
    /// Directory for per-instance JSON reports.
    #[arg(long)]
    report: Option<PathBuf>,
    /// CSV results table to append to.
    #[arg(long)]
    results: Option<PathBuf>,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(short = 'n', long = "customers")]
    customers: usize,
    #[arg(short = 'N', long = "scenarios")]
    scenarios: usize,
    #[arg(long, default_value_t = 30)]
    capacity: i64,
    #[arg(long)]
    spread: Option<i64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "full")]
    sizes: SizesArg,
    #[arg(long = "inject-fault", value_enum)]
    inject_fault: Option<FaultArg>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

const HEADER: [&str; 15] = [
    "instance",
    "first_stage",
    "recourse",
    "mode",
    "status",
    "value",
    "bound",
    "gap_pct",
    "root_gap_pct",
    "time_s",
    "cuts_rci",
    "cuts_sri",
    "cuts_proj_sri",
    "cuts_set",
    "cuts_partial",
];

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn solver_config(a: &SolveArgs) -> SolverConfig {
    SolverConfig {
        first_stage: match a.first_stage {
            StageArg::Cvrp => FirstStage::Cvrp,
            StageArg::Subtour => FirstStage::Subtour,
        },
        recourse: match a.recourse {
            RecourseArg::Classical => RecourseKind::Classical,
            RecourseArg::Scenopt => RecourseKind::ScenarioOptimal,
        },
        mode: match a.mode {
            ModeArg::Ils => Mode::Ils,
            ModeArg::Sri => Mode::Sri,
            ModeArg::IlsSri => Mode::IlsPlusSri,
        },
        time_limit: Duration::from_secs_f64(a.time_limit.max(0.0)),
        phase1_limit: Duration::from_secs_f64(a.phase1_limit.max(0.0)),
        weights: match a.weights {
            WeightsArg::Classical => WeightScheme::Classical,
            WeightsArg::Preventive => WeightScheme::Preventive,
        },
        bound: a.bound,
        seed: a.seed,
        ..SolverConfig::default()
    }
}

fn cmd_solve(a: SolveArgs) -> Result<ExitCode> {
    let cfg = solver_config(&a);
    if let Err(e) = cfg.validate() {
        eprintln!("usage error: {e}");
        return Ok(ExitCode::from(2));
    }
    if a.instances.len() > 1 && (a.dump_cuts.is_some() || a.dump_model.is_some()) {
        eprintln!("usage error: --dump-cuts and --dump-model need a single instance");
        return Ok(ExitCode::from(2));
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(a.jobs.max(1)).build()?;
    let outcomes: Vec<Result<(String, SolveReport)>> = pool.install(|| {
        a.instances
            .par_iter()
            .map(|path| {
                let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                let inst = parse_instance(&text).with_context(|| format!("parsing {}", path.display()))?;
                let report = solve(&inst, &cfg).with_context(|| format!("solving {}", path.display()))?;
                Ok((inst.name().to_string(), report))
            })
            .collect()
    });
    let mut failed = false;
    let mut rows = Vec::new();
    for (path, outcome) in a.instances.iter().zip(outcomes) {
        let (name, report) = match outcome {
            Ok(r) => r,
            Err(e) => {
                eprintln!("error: {e:#}");
                failed = true;
                continue;
            }
        };
        println!(
            "{name}: {} value={} bound={:.6} gap={:.4}% root_gap={:.4}% time={:.2}s",
            report.status.label(),
            report.value.as_ref().map_or("-".into(), vrpsd_core::rational::fmt_rat),
            report.bound,
            report.gap_pct().unwrap_or(f64::NAN),
            report.root_gap_pct().unwrap_or(f64::NAN),
            report.total_time.as_secs_f64()
        );
        if let Some(dir) = &a.report {
            fs::create_dir_all(dir)?;
            let stem = path.file_stem().map_or("instance".into(), |s| s.to_string_lossy().into_owned());
            let file = dir.join(format!("{stem}.report.json"));
            fs::write(&file, format!("{:#}\n", report.to_json()))?;
        }
        if let Some(p) = &a.dump_cuts {
            let lines: Vec<String> = report.cuts.iter().map(|c| c.to_string()).collect();
            fs::write(p, lines.join("\n") + "\n")?;
        }
        if let Some(p) = &a.dump_model {
            write_model(&report.model, p)?;
        }
        rows.push(result_row(&name, &cfg, &report));
    }
    if let Some(p) = &a.results {
        append_results(p, &rows)?;
    }
    Ok(if failed { ExitCode::FAILURE } else { ExitCode::SUCCESS })
}

fn result_row(name: &str, cfg: &SolverConfig, r: &SolveReport) -> Vec<String> {
    let opt = |v: Option<f64>| v.map_or(String::new(), |v| format!("{v:.6}"));
    vec![
        name.to_string(),
        match cfg.first_stage {
            FirstStage::Cvrp => "cvrp",
            FirstStage::Subtour => "subtour",
        }
        .into(),
        match cfg.recourse {
            RecourseKind::Classical => "classical",
            RecourseKind::ScenarioOptimal => "scenopt",
        }
        .into(),
        cfg.mode.label().into(),
        r.status.label().into(),
        opt(r.value_f64()),
        format!("{:.6}", r.bound),
        opt(r.gap_pct()),
        opt(r.root_gap_pct()),
        format!("{:.3}", r.total_time.as_secs_f64()),
        r.cuts_of(&[CutKind::Rci, CutKind::Sec]).to_string(),
        r.cuts_of(&[CutKind::Sri, CutKind::AggregatedSri]).to_string(),
        r.cuts_of(&[CutKind::ProjectedSri, CutKind::ProjectedAggregatedSri]).to_string(),
        r.cuts_of(&[CutKind::SetCut]).to_string(),
        r.cuts_of(&[CutKind::PartialRouteCut, CutKind::PathCut, CutKind::RouteCut]).to_string(),
    ]
}

fn append_results(path: &Path, rows: &[Vec<String>]) -> Result<()> {
    let fresh = fs::metadata(path).map_or(true, |m| m.len() == 0);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::Writer::from_writer(file);
    if fresh {
        w.write_record(HEADER)?;
    }
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

fn cmd_gen(a: GenArgs) -> Result<ExitCode> {
    if a.customers == 0 || a.scenarios == 0 {
        bail!("-n and -N must be positive");
    }
    let cfg = GeneratorConfig { spread: a.spread, ..GeneratorConfig::new(a.customers, a.scenarios, a.capacity, a.seed) };
    let text = write_instance(&generate(&cfg)?);
    match a.out {
        Some(p) => fs::write(&p, text).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode> {
    let sizes = match a.sizes {
        SizesArg::Tiny => Sizes::Tiny,
        SizesArg::Full => Sizes::Full,
    };
    let fault = match a.inject_fault {
        Some(FaultArg::Phi) => Fault::Phi,
        None => Fault::None,
    };
    let mut ok = true;
    for r in run_battery(sizes, fault, a.seed) {
        match &r.failure {
            None => println!("PASS {} ({} cases, {:.2}s)", r.name, r.cases, r.seconds),
            Some(why) => {
                ok = false;
                println!("FAIL {} ({} cases, {:.2}s)", r.name, r.cases, r.seconds);
                println!("  counterexample: {why}");
            }
        }
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

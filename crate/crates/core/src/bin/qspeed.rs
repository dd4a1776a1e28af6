//! Command-line front end: one subcommand per figure table plus the
//! sampler audit and the oracle cross-checks.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use qspeed::config::{ConfigOverrides, Format, Output, RunConfig};
use qspeed::experiments::{
    alpha_table_rows, run_fig1a, run_fig1b, run_fig2, run_fig3, run_fig4, run_fig5,
    run_sample_audit, AuditCheck, Fig1aParams, Fig1bParams, Fig4Params, Fig5Params,
    SampleAuditParams, Table, CURVE_POINTS,
};
use qspeed::qsl::DEFAULT_ALPHA_GRID;
use qspeed::validate::{run_validation, ValidateParams};
use qspeed::{AlphaTable, LocalHamiltonian};

const AFTER_HELP: &str = "\
Output columns:
  fig1a         c_bin_lo,c_bin_hi,count,ratio_min,ratio_max (first row: C = 0 exactly)
  fig1b         concurrence,f_min,tau,t_energy,t_spread,ratio,branch
  fig2          f_min,concurrence
  fig3          f_min,ratio_energy,ratio_spread
  fig4          slice,f_kind,c_bin_lo,c_bin_hi,count,mean_ratio,std_ratio
  fig5          series,c,count,ratio,std_ratio,f_min
  alpha-table   f,alpha,beta
  sample-audit  check,samples,statistic,threshold,passed
  validate      check,kind,cases,statistic,tolerance,passed,note

A file given with --out gets a <out>.meta.json sidecar with the run parameters.
Exit status: 0 success, 1 usage error, 2 runtime error.";

#[derive(Parser)]
#[command(name = "qspeed", version, about = "Speed-limit ratios of two-qubit states under local Hamiltonians", after_help = AFTER_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    /// Base seed of every random stream [default: 1]
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Sample count; its meaning and default depend on the subcommand (see each subcommand's help)
    #[arg(long, global = true)]
    samples: Option<u64>,
    /// hI, hII or custom:<delta_a>,<delta_b>; fig4 and fig5 only [default: hI for fig4, hII for fig5]
    #[arg(long, global = true)]
    hamiltonian: Option<String>,
    /// Fidelity scan step in Ω [default: π/200]
    #[arg(long, global = true)]
    scan_step: Option<f64>,
    /// Tolerance of minimum and crossing refinement [default: 1e-10]
    #[arg(long, global = true)]
    refine_tol: Option<f64>,
    /// Output file, or - for standard output (JSON only) [required except for validate and sample-audit]
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv or json [default: csv]
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Worker threads [default: available cores]
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Concurrence bins on [0, 1] for fig4 and fig5 [default: 20]
    #[arg(long, global = true)]
    c_bins: Option<usize>,
    /// Fidelity bins on [0, 1] for the fig4 grid [default: 20]
    #[arg(long, global = true)]
    f_bins: Option<usize>,
    /// Smallest window count reported by fig4 and fig5 [default: 50]
    #[arg(long, global = true)]
    min_count: Option<usize>,
    /// JSON file with any of the settings above (snake_case keys); flags win
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Orthogonal-family sweep under hI; --samples = Ω nodes [default: 101]
    Fig1a,
    /// Random pure states with F_min in [0.35, 0.4] under hI; --samples = raw draws [default: 1000000]
    Fig1b,
    /// Concurrence of the fast states; --samples = curve points [default: 1001]
    Fig2,
    /// Branch ratios of the fast states; --samples = curve points [default: 1001]
    Fig3,
    /// Random mixed states, window means of τ/T; --samples = draws [default: 200000]
    Fig4,
    /// MEMS curve and filtered IH bin means; --samples = accepted IH draws [default: 100000]
    Fig5,
    /// α(F) and β(F) at the table nodes; --samples = nodes [default: 2001]
    AlphaTable,
    /// Statistical checks of the samplers; --samples = KS draws, moments use 10x [default: 100000]
    SampleAudit,
    /// Closed forms against oracles, and audits of printed forms; --samples = pure-state cases [default: 10000]
    Validate,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Fig1a => "fig1a",
            Command::Fig1b => "fig1b",
            Command::Fig2 => "fig2",
            Command::Fig3 => "fig3",
            Command::Fig4 => "fig4",
            Command::Fig5 => "fig5",
            Command::AlphaTable => "alpha-table",
            Command::SampleAudit => "sample-audit",
            Command::Validate => "validate",
        }
    }

    fn default_samples(self) -> u64 {
        match self {
            Command::Fig1a => 101,
            Command::Fig1b => 1_000_000,
            Command::Fig2 | Command::Fig3 => CURVE_POINTS as u64,
            Command::Fig4 => 200_000,
            Command::Fig5 | Command::SampleAudit => 100_000,
            Command::AlphaTable => DEFAULT_ALPHA_GRID as u64,
            Command::Validate => 10_000,
        }
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn overrides(a: &CommonArgs) -> Result<ConfigOverrides, Failure> {
    let file = match &a.config {
        Some(p) => ConfigOverrides::from_json_file(p).map_err(usage)?,
        None => ConfigOverrides::default(),
    };
    let flags = ConfigOverrides {
        seed: a.seed,
        samples: a.samples,
        hamiltonian: a.hamiltonian.clone(),
        scan_step: a.scan_step,
        refine_tol: a.refine_tol,
        out: a.out.clone(),
        format: a.format,
        workers: a.workers,
        c_bins: a.c_bins,
        f_bins: a.f_bins,
        min_count: a.min_count,
    };
    Ok(file.merged(flags))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cmd = cli.command;
    let o = overrides(&cli.common)?;
    if o.hamiltonian.is_some() && !matches!(cmd, Command::Fig4 | Command::Fig5) {
        return Err(usage(format!(
            "--hamiltonian applies to fig4 and fig5 only; {} is defined for hI",
            cmd.name()
        )));
    }
    let default_h = if cmd == Command::Fig5 {
        LocalHamiltonian::h_ii()
    } else {
        LocalHamiltonian::h_i()
    };
    let cfg = RunConfig::resolve(o, cmd.default_samples(), default_h).map_err(usage)?;
    if cfg.out == Output::None && !matches!(cmd, Command::Validate | Command::SampleAudit) {
        return Err(usage(format!(
            "{} needs --out <file> (or --out - with --format json)",
            cmd.name()
        )));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build_global()
        .map_err(runtime)?;

    let (table, extra) = execute(cmd, &cfg)?;
    write_table(&table, &cfg)?;
    if let Output::File(path) = &cfg.out {
        write_sidecar(path, cmd, &cfg, extra)?;
    }
    Ok(())
}

fn samples_usize(cfg: &RunConfig) -> Result<usize, Failure> {
    usize::try_from(cfg.samples).map_err(usage)
}

fn execute(cmd: Command, cfg: &RunConfig) -> Result<(Table, Value), Failure> {
    let alpha = AlphaTable::shared();
    match cmd {
        Command::Fig1a => {
            let p = Fig1aParams {
                n_omega: samples_usize(cfg)?,
                ..Default::default()
            };
            let r = run_fig1a(&p, alpha).map_err(runtime)?;
            log::info!(
                "fig1a: {} points, separable row min {:.9} max {:.9}",
                r.points.len(),
                r.separable.ratio_min,
                r.separable.ratio_max
            );
            Ok((r.table(), json!(p)))
        }
        Command::Fig1b => {
            let p = Fig1bParams {
                seed: cfg.seed,
                samples: cfg.samples,
                scan: cfg.scan(),
                ..Default::default()
            };
            let r = run_fig1b(&p, alpha).map_err(runtime)?;
            let fastest = |x: Option<qspeed::experiments::Fig1bRecord>| {
                x.map_or(f64::NAN, |v| v.record.ratio)
            };
            log::info!(
                "fig1b: {} accepted of {}; fastest energy-branch ratio {:.4}, spread-branch ratio {:.4}; \
                 {} states above C = √(1 - F_min), {} with 2|c0 c3| above it",
                r.records.len(),
                r.raw_samples,
                fastest(r.fastest_energy),
                fastest(r.fastest_spread),
                r.boundary_violations().len(),
                r.outer_boundary_violations()
            );
            Ok((r.table(), json!(p)))
        }
        Command::Fig2 => Ok((
            run_fig2(samples_usize(cfg)?, alpha).map_err(runtime)?,
            json!({}),
        )),
        Command::Fig3 => Ok((
            run_fig3(samples_usize(cfg)?, alpha).map_err(runtime)?,
            json!({}),
        )),
        Command::Fig4 => {
            let p = Fig4Params {
                seed: cfg.seed,
                samples: cfg.samples,
                hamiltonian: cfg.hamiltonian,
                scan: cfg.scan(),
                f_bins: cfg.f_bins,
                c_bins: cfg.c_bins,
                min_count: cfg.min_count,
                ..Default::default()
            };
            let r = run_fig4(&p, alpha).map_err(runtime)?;
            for s in &r.slices {
                log::info!(
                    "fig4 {}: Spearman(C, mean ratio) = {:.3} over {} windows",
                    s.label,
                    s.trend(),
                    s.reliable().count()
                );
            }
            Ok((r.table(), json!(p)))
        }
        Command::Fig5 => {
            let p = Fig5Params {
                seed: cfg.seed,
                hamiltonian: cfg.hamiltonian,
                ih_samples: cfg.samples,
                c_bins: cfg.c_bins,
                min_count: cfg.min_count,
                ..Default::default()
            };
            let r = run_fig5(&p, alpha).map_err(runtime)?;
            log::info!(
                "fig5: {} IH draws passed the filter out of {}",
                r.ih_accepted,
                r.ih_draws
            );
            Ok((r.table(), json!(p)))
        }
        Command::AlphaTable => {
            let n = samples_usize(cfg)?;
            let t = AlphaTable::build(n).map_err(usage)?;
            Ok((alpha_table_rows(&t), json!({ "grid_size": n })))
        }
        Command::SampleAudit => {
            let p = SampleAuditParams {
                seed: cfg.seed,
                ks_samples: cfg.samples,
                moment_samples: cfg.samples.saturating_mul(10),
            };
            let checks = run_sample_audit(&p);
            for c in &checks {
                eprintln!(
                    "{:<40} {:>12.4e} <= {:<12.4e} {}",
                    c.name,
                    c.statistic,
                    c.threshold,
                    if c.passed { "PASS" } else { "FAIL" }
                );
            }
            let table = AuditCheck::table(&checks);
            if let Some(bad) = checks.iter().find(|c| !c.passed) {
                write_table(&table, cfg)?;
                return Err(runtime(format!("sampler check {} failed", bad.name)));
            }
            Ok((table, json!(p)))
        }
        Command::Validate => {
            let p = ValidateParams {
                seed: cfg.seed,
                pure_cases: samples_usize(cfg)?,
                ..Default::default()
            };
            let report = run_validation(&p);
            for c in &report.checks {
                eprintln!(
                    "{:<40} {:<12} {:>12.4e} {}  {}",
                    c.name,
                    c.kind.label(),
                    c.statistic,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.note
                );
            }
            let table = report.table();
            if !report.all_passed() {
                write_table(&table, cfg)?;
                return Err(runtime("oracle checks failed"));
            }
            Ok((table, json!(p)))
        }
    }
}

fn write_table(table: &Table, cfg: &RunConfig) -> Result<(), Failure> {
    let write = |w: &mut dyn Write| -> Result<(), Failure> {
        match cfg.format {
            Format::Csv => table.write_csv(&mut *w).map_err(runtime)?,
            Format::Json => {
                serde_json::to_writer_pretty(&mut *w, &table.to_json()).map_err(runtime)?;
                writeln!(w).map_err(runtime)?;
            }
        }
        w.flush().map_err(runtime)
    };
    match &cfg.out {
        Output::None => Ok(()),
        Output::Stdout => write(&mut io::stdout().lock()),
        Output::File(path) => {
            let f = File::create(path)
                .map_err(|e| runtime(format!("cannot create {}: {e}", path.display())))?;
            write(&mut BufWriter::new(f))
        }
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

fn write_sidecar(out: &Path, cmd: Command, cfg: &RunConfig, extra: Value) -> Result<(), Failure> {
    let mut meta = Map::new();
    meta.insert("command".into(), cmd.name().into());
    meta.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    meta.insert("timestamp".into(), chrono::Utc::now().to_rfc3339().into());
    meta.insert("seed".into(), cfg.seed.into());
    meta.insert("samples".into(), cfg.samples.into());
    meta.insert("hamiltonian".into(), cfg.hamiltonian.to_string().into());
    meta.insert("delta_a".into(), cfg.hamiltonian.delta_a().into());
    meta.insert("delta_b".into(), cfg.hamiltonian.delta_b().into());
    meta.insert("scan_step".into(), cfg.scan_step.into());
    meta.insert("refine_tol".into(), cfg.refine_tol.into());
    meta.insert("format".into(), json!(cfg.format));
    meta.insert("workers".into(), cfg.workers.into());
    meta.insert("c_bins".into(), cfg.c_bins.into());
    meta.insert("f_bins".into(), cfg.f_bins.into());
    meta.insert("min_count".into(), cfg.min_count.into());
    meta.insert("out".into(), out.display().to_string().into());
    // pipeline parameters, flattened with a prefix so the object stays flat
    if let Value::Object(m) = extra {
        for (k, v) in m {
            let v = match v {
                Value::Object(inner) => Value::String(Value::Object(inner).to_string()),
                other => other,
            };
            meta.insert(format!("param_{k}"), v);
        }
    }
    let path = sidecar_path(out);
    let f = File::create(&path)
        .map_err(|e| runtime(format!("cannot create {}: {e}", path.display())))?;
    serde_json::to_writer_pretty(BufWriter::new(f), &Value::Object(meta)).map_err(runtime)
}

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use relpower::scenario::output::{manifest, manifest_bytes, resolve_base, sha256_hex, tolerances, write_result_dir};
use relpower::scenario::sweep::{sweep, SweepAxis};
use relpower::scenario::table::Tables;
use relpower::scenario::{bundled, config, run_checks, ScenarioConfig};
use relpower::{Error, Result};

#[derive(Parser)]
#[command(name = "relpower", version, about = "Relative power and configurational balance checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of one scenario file, every *.json in a directory,
    /// or with --all and no path the bundled scenarios.
    Run {
        path: Option<PathBuf>,
        #[arg(long)]
        all: bool,
        /// Output base directory (overrides RELPOWER_OUT_DIR and the config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Repeat a scenario across quadrature orders or difference steps.
    Sweep {
        path: PathBuf,
        #[arg(long, value_enum)]
        axis: Axis,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the shipped presets.
    ListPresets {
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    Quad,
    Fd,
}

struct Source {
    label: String,
    text: String,
}

fn read(path: &Path) -> Result<Source> {
    Ok(Source {
        label: path.display().to_string(),
        text: fs::read_to_string(path)?,
    })
}

fn sources(path: Option<&Path>, all: bool) -> Result<Vec<Source>> {
    match path {
        None if all => Ok(bundled::BUNDLED
            .iter()
            .map(|(n, t)| Source {
                label: format!("bundled:{n}"),
                text: t.to_string(),
            })
            .collect()),
        None => Err(Error::ConfigInvalid("give a scenario path or --all".into())),
        Some(p) if p.is_dir() => {
            let mut files: Vec<PathBuf> = fs::read_dir(p)?
                .map(|e| e.map(|e| e.path()))
                .collect::<std::io::Result<_>>()?;
            files.retain(|f| f.extension().is_some_and(|e| e == "json"));
            files.sort();
            if files.is_empty() {
                return Err(Error::ConfigInvalid(format!("no *.json files in {}", p.display())));
            }
            files.iter().map(|f| read(f)).collect()
        }
        Some(p) => Ok(vec![read(p)?]),
    }
}

fn run_one(src: &Source, out: Option<&Path>) -> Result<()> {
    let cfg = ScenarioConfig::from_json(&src.text)?;
    let report = run_checks(&cfg)?;
    let m = manifest(&report, src.text.as_bytes());
    let base = resolve_base(out, cfg.output_dir.as_deref());
    let dir = write_result_dir(&base, &cfg.name, &report.tables, &manifest_bytes(&m)?)?;
    for o in &report.outcomes {
        let tag = if o.passed() { "ok  " } else { "FAIL" };
        println!("  [{tag}] {}", o.check);
        for metric in o.metrics.iter().filter(|m| !m.passed) {
            println!("         {} = {:e} (threshold {:e})", metric.name, metric.value, metric.threshold);
        }
    }
    println!("  -> {}", dir.display());
    if report.passed() {
        Ok(())
    } else {
        Err(Error::ToleranceFailure {
            failed: report.failed_checks(),
        })
    }
}

fn run(path: Option<&Path>, all: bool, out: Option<&Path>) -> i32 {
    let list = match sources(path, all) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let mut code = 0;
    for src in &list {
        println!("{}", src.label);
        if let Err(e) = run_one(src, out) {
            eprintln!("error: {}: {e}", src.label);
            code = code.max(e.exit_code());
        }
    }
    code
}

#[derive(Serialize)]
struct SweepManifest {
    scenario: String,
    config_sha256: String,
    version: &'static str,
    axis: SweepAxis,
    tolerances: std::collections::BTreeMap<&'static str, f64>,
    files: Vec<String>,
}

fn run_sweep(path: &Path, axis: SweepAxis, out: Option<&Path>) -> Result<PathBuf> {
    let src = read(path)?;
    let cfg = ScenarioConfig::from_json(&src.text)?;
    let table = sweep(&cfg, axis)?;
    let name = format!("{}-sweep-{}", cfg.name, axis.name());
    let m = SweepManifest {
        scenario: cfg.name.clone(),
        config_sha256: sha256_hex(src.text.as_bytes()),
        version: env!("CARGO_PKG_VERSION"),
        axis,
        tolerances: tolerances(),
        files: vec!["convergence.csv".into()],
    };
    let base = resolve_base(out, cfg.output_dir.as_deref());
    write_result_dir(&base, &name, &Tables(vec![table]), &manifest_bytes(&m)?)
}

fn list_presets(json: bool) -> i32 {
    let l = config::preset_listing();
    let mut out = std::io::stdout().lock();
    if json {
        let _ = writeln!(out, "{}", serde_json::to_string_pretty(&l).expect("listing serializes"));
        return 0;
    }
    for (title, entries) in [
        ("materials", &l.materials),
        ("motions", &l.motions),
        ("fields", &l.fields),
        ("potentials", &l.potentials),
        ("moduli", &l.moduli),
        ("checks", &l.checks),
    ] {
        let _ = writeln!(out, "{title}:");
        for e in entries {
            let _ = writeln!(out, "  {:<22} [{}]  {}", e.name, e.parameters.join(", "), e.doc);
        }
    }
    0
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run { path, all, out } => run(path.as_deref(), all, out.as_deref()),
        Command::Sweep { path, axis, out } => {
            let axis = match axis {
                Axis::Quad => SweepAxis::Quad,
                Axis::Fd => SweepAxis::Fd,
            };
            match run_sweep(&path, axis, out.as_deref()) {
                Ok(dir) => {
                    println!("{}", dir.display());
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
        Command::ListPresets { json } => list_presets(json),
    };
    ExitCode::from(code as u8)
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ghostlight::experiments::{
    labelled_path, preset, run_scenario, run_sweep, scan_csv, scan_gnuplot, sweep_csv,
    sweep_gnuplot, verify, write_file, Scenario, ScenarioResult, SweepTable,
};
use ghostlight::source::{fit_coherence_width, BlackbodySpectrumParams};
use ghostlight::{EngineKind, Error, ErrorKind};

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_VERIFY: u8 = 3;

/// Thermal-light ghost imaging simulator.
#[derive(Parser)]
#[command(name = "ghostlight", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the scenario in a TOML config and write the correlation scan as CSV.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Output CSV (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        engine: Option<EngineKind>,
        /// Also write a gnuplot script next to the CSV.
        #[arg(long)]
        emit_plot: bool,
    },
    /// Run a built-in scenario.
    Preset {
        name: String,
        /// Output CSV. Sweep presets write one file per series and default
        /// to `<name>.csv` in the working directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        emit_plot: bool,
    },
    /// Run the `[sweep]` section of a config.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        emit_plot: bool,
    },
    /// Cross-check the analytic engine against brute-force quadrature.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        rtol: Option<f64>,
    },
    /// Print the coherence width fitted to the blackbody kernel.
    Blackbody {
        #[arg(long)]
        temperature: f64,
    },
}

enum Failure {
    Error(Error),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_CONFIG)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_CONFIG);
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(Failure::Error(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.kind() {
                ErrorKind::Config | ErrorKind::Io => EXIT_CONFIG,
                ErrorKind::Numerical => EXIT_NUMERICAL,
            })
        }
    }
}

/// Applies `GHOSTLIGHT_THREADS` to the global worker pool.
fn configure_threads() -> Result<(), Error> {
    let Ok(raw) = std::env::var("GHOSTLIGHT_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config {
            path: "GHOSTLIGHT_THREADS".into(),
            message: format!("expected a positive integer, got `{raw}`"),
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config {
            path: "GHOSTLIGHT_THREADS".into(),
            message: e.to_string(),
        })
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Simulate {
            config,
            out,
            engine,
            emit_plot,
        } => {
            let mut scenario = Scenario::from_file(&config)?;
            if let Some(kind) = engine {
                scenario.engine.engine = kind;
            }
            simulate(&scenario, out.as_deref(), emit_plot, &stem(&config))
        }
        Command::Preset {
            name,
            out,
            emit_plot,
        } => {
            let p = preset(&name)?;
            let is_sweep = p.runs.iter().any(|r| r.scenario.sweep.is_some());
            if is_sweep {
                let out = out.unwrap_or_else(|| PathBuf::from(format!("{name}.csv")));
                for run in &p.runs {
                    let path = labelled_path(&out, &run.label);
                    sweep(&run.scenario, &path, emit_plot)?;
                }
                Ok(())
            } else {
                simulate(&p.runs[0].scenario, out.as_deref(), emit_plot, &name)
            }
        }
        Command::Sweep {
            config,
            out,
            emit_plot,
        } => sweep(&Scenario::from_file(&config)?, &out, emit_plot),
        Command::Verify { config, rtol } => {
            let scenario = Scenario::from_file(&config)?;
            let report = verify(&scenario, rtol)?;
            println!(
                "points {}  gamma {:.3e}  I1 {:.3e}  I2 {:.3e}  rtol {:.1e}",
                report.points, report.gamma, report.i1, report.i2, report.rtol
            );
            if report.passed() {
                println!("engines agree");
                Ok(())
            } else {
                Err(Failure::Verification(format!(
                    "max deviation {:.3e} exceeds rtol {:.1e}",
                    report.max(),
                    report.rtol
                )))
            }
        }
        Command::Blackbody { temperature } => {
            let params = BlackbodySpectrumParams::new(temperature).map_err(|e| Error::Config {
                path: "--temperature".into(),
                message: e.to_string(),
            })?;
            let fit = fit_coherence_width(&params)?;
            println!("{:.6e}", fit.sigma_g);
            eprintln!(
                "T = {temperature} K: sigma_g = {:.6e} mm (rms residual {:.4}, {} samples)",
                fit.sigma_g,
                fit.rms_residual,
                fit.samples.len()
            );
            Ok(())
        }
    }
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into())
}

fn summarize(r: &ScenarioResult) {
    eprintln!("sigma_g = {:.6e} mm", r.sigma_g);
    match &r.visibility {
        Ok(v) => eprintln!("V = {v:.6}"),
        Err(e) => eprintln!("V undefined: {e}"),
    }
    match &r.quality {
        Some(Ok(q)) => eprintln!("Q = {:.6}", q.q),
        Some(Err(e)) => eprintln!("Q undefined: {e}"),
        None => eprintln!("Q not computed: layout is not an imaging configuration"),
    }
    let peaks: Vec<String> = r.peaks.iter().map(|p| format!("{p:.6}")).collect();
    eprintln!("peaks (mm): [{}]", peaks.join(", "));
}

fn simulate(
    scenario: &Scenario,
    out: Option<&Path>,
    emit_plot: bool,
    title: &str,
) -> Result<(), Failure> {
    let result = run_scenario(scenario)?;
    let csv = scan_csv(&result.scan);
    match out {
        Some(path) => {
            write_file(path, &csv)?;
            if emit_plot {
                let script = scan_gnuplot(&file_name(path), title);
                write_file(&path.with_extension("gp"), &script)?;
            }
        }
        None => print!("{csv}"),
    }
    summarize(&result);
    // an all-zero image still produces its CSV, then reports the failure
    if let Err(e) = result.visibility {
        if matches!(e, Error::UndefinedVisibility(_)) {
            return Err(e.into());
        }
    }
    Ok(())
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn sweep(scenario: &Scenario, out: &Path, emit_plot: bool) -> Result<(), Failure> {
    let plan = scenario.sweep.as_ref().ok_or_else(|| Error::Config {
        path: "sweep".into(),
        message: "the config has no [sweep] section".into(),
    })?;
    let table: SweepTable = run_sweep(scenario, plan)?;
    write_file(out, &sweep_csv(&table))?;
    if emit_plot {
        write_file(
            &out.with_extension("gp"),
            &sweep_gnuplot(&file_name(out), &table.parameter, table.metrics),
        )?;
    }
    let failed = table.rows.iter().filter(|r| r.error.is_some()).count();
    eprintln!(
        "{}: {} rows, {} with errors",
        out.display(),
        table.rows.len(),
        failed
    );
    Ok(())
}

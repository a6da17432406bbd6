use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use lefcorr_harness::config::{Cp1Family, SweepConfig, SweepModel};
use lefcorr_harness::single::{self, LatticeMode};
use lefcorr_harness::sweep::{exhaustive_gaussian, exhaustive_generic};
use lefcorr_harness::{emit_report, integral_audit, sweep, Format};
use lefcorr_core::VerificationReport;

/// Verify Lefschetz-type fixed point identities on model correspondences.
///
/// Exit status: 0 when both sides agree, 2 on any mismatch, 1 on usage or
/// validation errors.
#[derive(Parser)]
#[command(name = "lefcorr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ReportArgs {
    /// Output format for single runs.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Also write the report to this file.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Affine correspondence Ax ≡ By + c on the real torus.
    Torus {
        /// Integer matrix, rows separated by ';', entries by ','.
        #[arg(long = "A", allow_hyphen_values = true)]
        a: String,
        #[arg(long = "B", allow_hyphen_values = true)]
        b: String,
        /// Offset vector, e.g. "1/2,0". Defaults to zero.
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Holomorphic correspondence a z ≡ b w + c on C/Λ.
    Ctorus {
        #[arg(long, value_enum, default_value_t = LatticeMode::Gaussian)]
        mode: LatticeMode,
        /// Lattice generator "x+y*i" with y > 0 (generic mode).
        #[arg(long, allow_hyphen_values = true)]
        tau: Option<String>,
        /// Multiplier "m" or "m+ni".
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// Offset as lattice coordinates "x,y" or a complex number "u+v*i".
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Möbius map [v] ↦ [g v] on CP¹ lifted to O(d), or a union of such graphs.
    Cp1 {
        /// 2x2 matrix; complex entries as "x+y*i".
        #[arg(long, allow_hyphen_values = true)]
        g: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        /// Additional branch of a union (repeatable).
        #[arg(long, allow_hyphen_values = true)]
        branch: Vec<String>,
        /// Evaluate the fixed-point side in floating point.
        #[arg(long)]
        floating: bool,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Seeded random sweep, one JSON line per verified trial.
    Sweep {
        #[arg(value_enum)]
        model: SweepModel,
        #[command(flatten)]
        bounds: SweepArgs,
        /// ctorus only: every Gaussian pair with norms ≤ norm-bound, then
        /// every integer pair in [-int-bound, int-bound] on a generic lattice.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 100)]
        offsets_per_pair: u64,
        #[arg(long, default_value_t = 20)]
        int_bound: i64,
    },
    /// Diagonal-class integral against the alternating trace on torus draws.
    AuditIntegral {
        #[command(flatten)]
        bounds: SweepArgs,
    },
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, env = "LEFCORR_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    dim_max: usize,
    #[arg(long, default_value_t = 9)]
    entry_bound: i64,
    #[arg(long, default_value_t = 12)]
    denominator_max: i64,
    #[arg(long, default_value_t = 25)]
    norm_bound: u64,
    #[arg(long, default_value_t = 12)]
    d_max: u32,
    #[arg(long, value_enum, default_value_t = Cp1Family::Triangular)]
    family: Cp1Family,
    #[arg(long, default_value_t = 5)]
    branches_max: usize,
    #[arg(long, default_value_t = 0.1)]
    min_gap: f64,
    /// JSON Lines destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
}

impl SweepArgs {
    fn config(&self, model: SweepModel) -> SweepConfig {
        SweepConfig {
            model,
            trials: self.trials,
            seed: self.seed,
            dim_max: self.dim_max,
            entry_bound: self.entry_bound,
            denominator_max: self.denominator_max,
            norm_bound: self.norm_bound,
            d_max: self.d_max,
            family: self.family,
            branches_max: self.branches_max,
            min_gap: self.min_gap,
            output: self.output.clone(),
        }
    }
}

fn finish_single(report: VerificationReport, args: &ReportArgs) -> Result<ExitCode> {
    let mut bytes = emit_report(&report, args.format);
    if args.format == Format::Json {
        bytes.push(b'\n');
    }
    io::stdout().write_all(&bytes)?;
    if let Some(path) = &args.output {
        std::fs::write(path, &bytes).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if report.matches { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

/// Report lines go to the output file if given, else stdout; the summary
/// goes wherever the lines do not.
fn run_streaming<S: serde::Serialize>(
    output: &Option<PathBuf>,
    run: impl FnOnce(&mut dyn Write) -> Result<S>,
    mismatches: impl Fn(&S) -> u64,
) -> Result<ExitCode> {
    let summary = match output {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = BufWriter::new(file);
            let s = run(&mut w)?;
            w.flush()?;
            println!("{}", serde_json::to_string(&s)?);
            s
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            let s = run(&mut w)?;
            w.flush()?;
            eprintln!("{}", serde_json::to_string(&s)?);
            s
        }
    };
    Ok(if mismatches(&summary) > 0 { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Torus { a, b, c, report } => {
            finish_single(single::torus(&a, &b, c.as_deref())?, &report)
        }
        Command::Ctorus { mode, tau, a, b, c, report } => finish_single(
            single::ctorus(mode, tau.as_deref(), &a, &b, c.as_deref())?,
            &report,
        ),
        Command::Cp1 { g, d, branch, floating, report } => {
            finish_single(single::cp1(g.as_deref(), d, &branch, floating)?, &report)
        }
        Command::Sweep { model, bounds, exhaustive, offsets_per_pair, int_bound } => {
            let cfg = bounds.config(model);
            cfg.validate()?;
            if exhaustive {
                anyhow::ensure!(model == SweepModel::Ctorus, "--exhaustive applies to ctorus only");
                anyhow::ensure!(offsets_per_pair > 0, "offsets-per-pair must be positive");
                anyhow::ensure!(int_bound > 0, "int-bound must be positive");
                return run_streaming(
                    &cfg.output,
                    |w| {
                        let g = exhaustive_gaussian(&cfg, offsets_per_pair, Some(&mut *w))?;
                        let n = exhaustive_generic(&cfg, int_bound, offsets_per_pair, g.trials, Some(w))?;
                        Ok(g.merge(n))
                    },
                    |s| s.mismatches,
                );
            }
            run_streaming(&cfg.output, |w| sweep(&cfg, Some(w)), |s| s.mismatches)
        }
        Command::AuditIntegral { bounds } => {
            let cfg = bounds.config(SweepModel::Torus);
            cfg.validate()?;
            run_streaming(&cfg.output, |w| integral_audit(&cfg, Some(w)), |s| s.mismatches)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use mcube::Kind;
use mcube_bench::{emit, run_precision, run_speed, verify, BenchConfig, BenchError, Format, FunctionId};

#[derive(Parser)]
#[command(name = "bench", about = "Grid interpolation precision and speed harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare interpolated values with direct function evaluation.
    Precision(RunArgs),
    /// Measure query throughput of the recursive path.
    Speed {
        #[command(flatten)]
        run: RunArgs,
        /// Also time the staged baseline on the same queries.
        #[arg(long)]
        compare_iterative: bool,
        /// Minimum seconds spent timing each path.
        #[arg(long, default_value_t = 0.5)]
        min_seconds: f64,
    },
    /// Run the equivalence and counter audits.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 12)]
    size: usize,
    /// One or more grid spacings, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.5")]
    spacing: Vec<f64>,
    #[arg(long)]
    kind: Kind,
    #[arg(long)]
    order: usize,
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long)]
    allow_extrapolation: bool,
    /// r6, sum, quadratic or smooth; r6 in six dimensions, smooth otherwise.
    #[arg(long)]
    function: Option<FunctionId>,
    /// Centre of the sampled region.
    #[arg(long, allow_hyphen_values = true)]
    anchor: Option<f64>,
    #[arg(long, default_value = "tsv")]
    format: Format,
}

impl RunArgs {
    fn config(&self) -> BenchConfig {
        BenchConfig {
            dim: self.dim,
            size: self.size,
            spacings: self.spacing.clone(),
            anchor: self.anchor,
            function: self.function.unwrap_or(FunctionId::default_for(self.dim)),
            kind: self.kind,
            order: self.order,
            samples: self.samples,
            seed: self.seed,
            allow_extrapolation: self.allow_extrapolation,
        }
    }
}

fn run(cli: Cli) -> Result<bool, BenchError> {
    match cli.command {
        Command::Precision(args) => {
            let rows = run_precision(&args.config())?;
            print!("{}", emit(&rows, args.format));
            Ok(true)
        }
        Command::Speed {
            run,
            compare_iterative,
            min_seconds,
        } => {
            if !(min_seconds.is_finite() && min_seconds >= 0.0) {
                return Err(BenchError::Config("--min-seconds must be non-negative".into()));
            }
            let reports = run_speed(
                &run.config(),
                compare_iterative,
                Duration::from_secs_f64(min_seconds),
            )?;
            let rows: Vec<_> = reports.iter().map(|r| r.row.clone()).collect();
            print!("{}", emit(&rows, run.format));
            for r in &reports {
                if let (Some(qps), Some(prep)) = (r.iterative_qps, r.iterative_prepares_per_query) {
                    println!(
                        "# spacing {}: iterative {:.1} qps, {} prepares/query, speedup {:.2}x, prepare ratio {:.1}",
                        r.row.spacing,
                        qps,
                        prep,
                        r.speedup().unwrap_or(f64::NAN),
                        r.prepare_ratio().unwrap_or(f64::NAN),
                    );
                }
            }
            Ok(true)
        }
        Command::Verify { seed } => {
            let lines = verify(seed)?;
            for line in &lines {
                println!("{line}");
            }
            Ok(lines.iter().all(|l| l.passed))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

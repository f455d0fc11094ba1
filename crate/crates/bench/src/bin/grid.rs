use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mcube::Grid;
use mcube_bench::{layout, BenchConfig, BenchError, FunctionId};

#[derive(Parser)]
#[command(name = "grid", about = "Build, save and inspect grid files")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a benchmark function onto a grid and write it to PATH.
    Save {
        path: PathBuf,
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 12)]
        size: usize,
        #[arg(long, default_value_t = 0.5)]
        spacing: f64,
        #[arg(long)]
        function: Option<FunctionId>,
        #[arg(long, allow_hyphen_values = true)]
        anchor: Option<f64>,
    },
    /// Read a grid file and print its shape and value range.
    Load { path: PathBuf },
}

fn run(cli: Cli) -> Result<(), BenchError> {
    match cli.command {
        Command::Save {
            path,
            dim,
            size,
            spacing,
            function,
            anchor,
        } => {
            let mut config = BenchConfig::new(dim, mcube::Kind::Linear, 2);
            config.size = size;
            config.spacings = vec![spacing];
            config.anchor = anchor;
            config.function = function.unwrap_or(FunctionId::default_for(dim));
            config.validate()?;
            let f = config.benchmark_function()?;
            let grid = layout(&config, &f, spacing)?.build_grid(size, &f)?;
            let mut out = BufWriter::new(File::create(&path)?);
            grid.save(&mut out)?;
            out.flush()?;
            println!(
                "wrote {} ({} values)",
                path.display(),
                grid.data().data().len()
            );
        }
        Command::Load { path } => {
            let grid = Grid::load(BufReader::new(File::open(&path)?))?;
            let spec = grid.data().spec();
            println!("dimensions\t{}", grid.ndim());
            println!("sizes\t{:?}", spec.sizes());
            println!("offsets\t{:?}", spec.offsets());
            for (d, axis) in grid.mesh().axes().iter().enumerate() {
                println!("axis{}\t[{}, {}]", d + 1, axis[0], axis[axis.len() - 1]);
            }
            let data = grid.data().data();
            let lo = data.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = data.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            println!("values\t[{lo:e}, {hi:e}]");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod output;
mod parse;

use output::Output;

#[derive(Parser, Debug)]
#[command(
    name = "nlmkdv",
    version,
    about = "Scattering, solitons and long-time asymptotics for the nonlocal mKdV equation"
)]
struct Cli {
    /// Directory for output files (created if missing).
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,

    /// Worker threads for the parallel parts (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Also write intermediate quantities as JSON.
    #[arg(long, global = true)]
    dump_intermediates: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stationary points and signature table of Re(2iθ) on a ray.
    Phase(commands::phase::PhaseArgs),
    /// Direct scattering of a sampled initial datum.
    Scatter(commands::scatter::ScatterArgs),
    /// Reflectionless solution on an (x, t) grid.
    Soliton(commands::soliton::SolitonArgs),
    /// Long-time asymptotics along a ray.
    Asym(commands::asym::AsymArgs),
    /// Independent checks.
    #[command(subcommand)]
    Verify(commands::verify::VerifyCommand),
}

fn exit_code(err: &anyhow::Error) -> u8 {
    err.chain()
        .find_map(|e| e.downcast_ref::<nlmkdv::Error>())
        .map(|e| e.exit_code() as u8)
        .unwrap_or(1)
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let out = Output::new(cli.out_dir, cli.dump_intermediates)?;
    match cli.command {
        Command::Phase(a) => commands::phase::run(&a, &out),
        Command::Scatter(a) => commands::scatter::run(&a, &out),
        Command::Soliton(a) => commands::soliton::run(&a, &out),
        Command::Asym(a) => commands::asym::run(&a, &out),
        Command::Verify(v) => commands::verify::run(&v, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

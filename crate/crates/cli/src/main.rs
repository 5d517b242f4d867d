mod family_cmd;
mod output;
mod search_cmd;
mod verify_cmd;

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Exact verification and exhaustive search for intersecting set families.
#[derive(Parser, Debug)]
#[command(name = "setfam", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run verification claims and print their reports.
    Verify(verify_cmd::VerifyArgs),
    /// Exhaustive search over up-sets or initial families.
    Search(search_cmd::SearchArgs),
    /// Utilities over family files and named constructions.
    Family {
        #[command(subcommand)]
        cmd: family_cmd::FamilyCmd,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_REFUTED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INCOMPLETE: u8 = 3;

/// `--threads`, then `SETFAM_THREADS` (through clap), then the machine.
pub fn resolve_threads(flag: Option<usize>) -> usize {
    flag.filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

pub fn install_pool(threads: usize) {
    // a second call in the same process is harmless
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Verify(a) => verify_cmd::run(a),
        Command::Search(a) => search_cmd::run(a),
        Command::Family { cmd } => family_cmd::run(cmd),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

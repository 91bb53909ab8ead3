use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pvkit_cli::{emit_json, emit_text, run_program, Options};

#[derive(Parser)]
#[command(name = "pvkit", version, about = "Difference Galois theory for diagonalizable systems")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a session script (`-` reads standard input).
    Run {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "degree-cap")]
        degree_cap: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Cmd::Run { file, json, trace, seed, degree_cap } = cli.command;
    let text = if file.as_os_str() == "-" {
        let mut s = String::new();
        if let Err(e) = std::io::stdin().read_to_string(&mut s) {
            eprintln!("error: cannot read standard input: {e}");
            return ExitCode::from(1);
        }
        s
    } else {
        match std::fs::read_to_string(&file) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", file.display());
                return ExitCode::from(1);
            }
        }
    };
    let mut opts = Options { seed, trace, ..Options::default() };
    if let Some(cap) = degree_cap {
        opts.degree_cap = cap;
    }
    let (reports, err) = run_program(&text, &opts);
    let out = if json { emit_json(&reports, trace) } else { emit_text(&reports, trace) };
    print!("{out}");
    match err {
        None => ExitCode::SUCCESS,
        Some(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

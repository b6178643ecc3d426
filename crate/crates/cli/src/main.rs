use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use nplectic_cli::{io::render_text, run, CliError, Command, Mode, Options, OutFormat, SignFlag};

/// Exact multisymplectic geometry workbench.
#[derive(Parser, Debug)]
#[command(name = "nplectic", version)]
struct Args {
    /// What to compute.
    #[arg(value_enum)]
    command: Command,
    /// JSON payload file; stdin when omitted or `-`.
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Hamiltonian sign convention.
    #[arg(long, value_enum, default_value_t = SignFlag::Hdw)]
    sign: SignFlag,
    #[arg(long, value_enum, default_value_t = OutFormat::Json)]
    out: OutFormat,
    /// Seed for randomized inputs (random `move` targets).
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn read_input(path: Option<&PathBuf>) -> Result<String, CliError> {
    let mut s = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            s = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?
        }
        _ => {
            std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(e.to_string()))?;
        }
    }
    Ok(s)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = Options { mode: args.mode, sign: args.sign, seed: args.seed };
    let (report, code) = match read_input(args.input.as_ref()) {
        Ok(src) => run(args.command, &src, &opts),
        Err(e) => (e.to_json(), e.exit_code()),
    };
    match args.out {
        OutFormat::Json => println!("{}", serde_json::to_string(&report).expect("serializable")),
        OutFormat::Text => print!("{}", render_text(&report)),
    }
    ExitCode::from(code as u8)
}

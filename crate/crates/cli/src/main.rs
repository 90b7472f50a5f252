use std::io::Write;
use std::time::Instant;

use clap::Parser;
use nalg_cli::{run, Cli, Outcome, INPUT_ERROR};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let outcome = match Cli::try_parse_from(&args) {
        Ok(cli) => match configure_threads(cli.par) {
            Ok(()) => {
                let start = Instant::now();
                let out = run(&cli);
                eprintln!("time: {} ms", start.elapsed().as_millis());
                out
            }
            Err(msg) => Outcome {
                code: INPUT_ERROR,
                stdout: String::new(),
                stderr: format!("error: {msg}\n"),
            },
        },
        Err(_) => nalg_cli::run_args(&args),
    };
    print!("{}", outcome.stdout);
    eprint!("{}", outcome.stderr);
    std::io::stdout().flush().ok();
    std::process::exit(outcome.code);
}

fn configure_threads(par: Option<usize>) -> Result<(), String> {
    match par {
        None => Ok(()),
        Some(0) => Err("--par must be positive".into()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string()),
    }
}

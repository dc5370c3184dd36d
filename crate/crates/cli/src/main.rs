//! Command-line front end. Exit codes: 0 success, 1 the checked set is not
//! a community, 2 invalid input, 3 budget or solver failure.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if threads == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .expect("thread pool is configured once");
    }
    let seed = cli.rng_seed;
    let result = match cli.command {
        Command::Generate(g) => commands::generate(g.kind, seed),
        Command::Lift(a) => commands::lift_cmd(a),
        Command::Verify(a) => commands::verify(a),
        Command::Enumerate(a) => commands::enumerate(a, seed),
        Command::Local(a) => commands::local(a, seed),
        Command::Reduce(a) => commands::reduce_cmd(a),
        Command::Facets(a) => commands::facets(a, seed),
        Command::Oracle(a) => commands::oracle(a),
        Command::Report(a) => commands::report(a, seed),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

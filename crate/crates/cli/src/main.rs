mod cli;
mod commands;
mod output;

use clap::Parser;

use cli::{Cli, Command, Format};
use output::Failure;

fn configure_threads() {
    if let Some(n) = std::env::var("WAVELOCK_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn main() {
    let cli = Cli::parse();
    configure_threads();
    let json = matches!(
        &cli.command,
        Command::Bound(a) if a.format == Format::Json
    ) || matches!(&cli.command, Command::Verify(a) if a.format == Format::Json);
    let result = match &cli.command {
        Command::Bound(a) => commands::bound::run(a, cli.timing),
        Command::Profile(a) => commands::profile::run(a),
        Command::Grid(a) => commands::grid::run(a),
        Command::Verify(a) => commands::verify::run(a, cli.timing),
        Command::Scan(a) => commands::scan::run(a),
    };
    if let Err(f) = result {
        report_failure(&f, json);
        std::process::exit(f.exit_code());
    }
}

fn report_failure(f: &Failure, json: bool) {
    eprintln!("error ({}): {}", f.kind(), f.message());
    // A verification breach has already printed its full report.
    if json && !matches!(f, Failure::Tolerance(_)) {
        let payload = serde_json::json!({
            "schema": wavelock::SCHEMA,
            "error": { "kind": f.kind(), "message": f.message(), "exit_code": f.exit_code() },
        });
        println!("{payload:#}");
    }
}

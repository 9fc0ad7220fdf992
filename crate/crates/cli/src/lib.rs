//! Command line front end of the `masscalc` library.
//!
//! Exit codes: 0 on success, 1 for argument errors and unsupported
//! requests, 2 when a computation ran but one of the identities it verifies
//! failed.

pub mod args;
pub mod commands;
pub mod report;

use std::io::Write;

use clap::Parser;
use masscalc::Error;

use args::Cli;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "MASSCALC_THREADS";

fn thread_count(value: Option<String>) -> Result<Option<usize>, String> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(Some(k)),
            _ => Err(format!("{THREADS_VAR} must be a positive integer, got `{v}`")),
        },
    }
}

/// Sizes the global worker pool from `MASSCALC_THREADS`. Only the first
/// call in a process has an effect.
pub fn configure_threads() -> Result<(), String> {
    if let Some(k) = thread_count(std::env::var(THREADS_VAR).ok())? {
        // a second initialisation attempt is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    Ok(())
}

/// Parses `argv`, runs the subcommand and writes the report to `stdout` or
/// to the `--output` file. Diagnostics go to `stderr`. Returns the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    if let Err(msg) = configure_threads() {
        let _ = writeln!(stderr, "masscalc: error: {msg}");
        return EXIT_USAGE;
    }
    let outcome = match commands::execute(&cli.command, cli.common.seed, cli.common.dump_spectral.is_some()) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(stderr, "masscalc: error: {}", one_line(&e.to_string()));
            return match e {
                Error::Consistency(_) => EXIT_VERIFICATION,
                _ => EXIT_USAGE,
            };
        }
    };
    if let (Some(path), Some(dump)) = (&cli.common.dump_spectral, &outcome.spectral) {
        let text = serde_json::to_string_pretty(dump).expect("spectral dump serializes") + "\n";
        if let Err(e) = std::fs::write(path, text) {
            let _ = writeln!(stderr, "masscalc: error: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    let text = outcome.rendered.render(cli.common.format);
    let written = match &cli.common.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => stdout.write_all(text.as_bytes()).map_err(|e| format!("cannot write output: {e}")),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "masscalc: error: {msg}");
        return EXIT_USAGE;
    }
    if outcome.failed {
        let _ = writeln!(stderr, "masscalc: verification failed, see the report");
        EXIT_VERIFICATION
    } else {
        EXIT_OK
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

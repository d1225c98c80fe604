//! Thin command-line front end.
//!
//! ```text
//! spiralflow run <config-file> [--set section.key=value]... [--out DIR]
//! spiralflow verify-all [--jobs N]
//! ```
//!
//! Exit codes: 0 pass, 2 experiment/acceptance failure, 1 runtime error.

use std::path::PathBuf;
use std::process::ExitCode;

fn usage() -> String {
    "usage:\n  spiralflow run <config-file> [--set section.key=value]... [--out DIR]\n  spiralflow verify-all [--jobs N]\n\nThe SPIRALFLOW_SEED environment variable overrides the config seed."
        .to_string()
}

fn run_command(args: &[String]) -> Result<i32, String> {
    let mut config_path: Option<PathBuf> = None;
    let mut overrides: Vec<(String, String)> = Vec::new();
    let mut out_dir: Option<PathBuf> = None;
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--set" => {
                let kv = it.next().ok_or("--set needs section.key=value")?;
                let (k, v) = kv.split_once('=').ok_or("--set needs section.key=value")?;
                overrides.push((k.trim().to_string(), v.trim().to_string()));
            }
            "--out" => {
                let dir = it.next().ok_or("--out needs a directory")?;
                out_dir = Some(PathBuf::from(dir));
            }
            other if config_path.is_none() && !other.starts_with('-') => {
                config_path = Some(PathBuf::from(other));
            }
            other => return Err(format!("unexpected argument `{other}`\n{}", usage())),
        }
    }
    let config_path = config_path.ok_or_else(|| format!("missing config file\n{}", usage()))?;
    let text = std::fs::read_to_string(&config_path)
        .map_err(|e| format!("cannot read {}: {e}", config_path.display()))?;
    let config = spiralflow::config::parse_config_with_overrides(&text, &overrides)
        .map_err(|e| e.to_string())?;
    let outcome = spiralflow::scenario::run_scenario(&config, out_dir.as_deref())
        .map_err(|e| e.to_string())?;
    println!(
        "scenario `{}` finished with status {} (outputs in {})",
        config.kind.as_str(),
        outcome.exit_code,
        outcome.out_dir.display()
    );
    Ok(outcome.exit_code)
}

fn verify_all_command(args: &[String]) -> Result<i32, String> {
    let mut jobs: Option<usize> = None;
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        match arg.as_str() {
            "--jobs" => {
                let n = it.next().ok_or("--jobs needs a count")?;
                jobs = Some(n.parse::<usize>().map_err(|_| "--jobs needs an integer")?);
            }
            other => return Err(format!("unexpected argument `{other}`\n{}", usage())),
        }
    }
    let (_, all_pass) = spiralflow::acceptance::run_all(jobs);
    Ok(if all_pass { 0 } else { 2 })
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let result = match args.first().map(|s| s.as_str()) {
        Some("run") => run_command(&args[1..]),
        Some("verify-all") => verify_all_command(&args[1..]),
        Some("--help") | Some("-h") | None => {
            println!("{}", usage());
            Ok(0)
        }
        Some(other) => Err(format!("unknown subcommand `{other}`\n{}", usage())),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

//! Drive the library through the same plain-text configuration the
//! `spiralflow` binary consumes, and inspect the files it writes.
//!
//! Run: `cargo run --release --example scenario_files`

use spiralflow::config::parse_config;
use spiralflow::scenario::run_scenario;

const CONFIG: &str = "\
[scenario]
kind = evolve_polar
seed = 11

[params]
c = 1.0

[grid]
lo = 0.0
hi = 10.0
n = 201

[initial]
name = zero
mollify_eps = 0.1

[scheme]
t_end = 0.005
record_every = 100
";

fn main() -> spiralflow::Result<()> {
    let config = parse_config(CONFIG)?;
    let out = std::env::temp_dir().join("spiralflow-example-out");
    let outcome = run_scenario(&config, Some(&out))?;
    println!("exit status {} with outputs in {}", outcome.exit_code, outcome.out_dir.display());
    for entry in std::fs::read_dir(&outcome.out_dir)? {
        let entry = entry?;
        println!("  {:>12} bytes  {}", entry.metadata()?.len(), entry.file_name().to_string_lossy());
    }
    let report = std::fs::read_to_string(outcome.out_dir.join("report.json"))?;
    println!("\nreport.json:\n{report}");
    Ok(())
}

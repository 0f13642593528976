//! Runs a sweep job from a JSON configuration in-process, the way the `srq`
//! binary does, and prints the CSV it would write.
//!
//! Run with `cargo run --example config_job`.

use std::error::Error;

use srq::cli::{parse_config_with, run_job};

const JOB: &str = r#"{
    "system": {"n_qubits": 3, "rabi": 2.0e6, "j": 3.0e6, "gamma": 1.0e6, "nbar": 0.05, "omega_scale": 5.0e9},
    "run": {"mode": "sweep", "parameter": "gamma_all",
            "grid": {"min": 2.0e5, "max": 8.0e6, "points": 8},
            "measures": ["signal_x", "eof:1:2", "eof:1:3", "coherence:2"]}
}"#;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // Overrides use the same dotted paths as `--set` on the command line.
    let cfg = parse_config_with(JOB, &["run.grid.points=6".into()])?;
    let outcome = run_job(&cfg, true)?;
    print!("{}", outcome.table.render());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

//! Sweeps the decay rate of a four-qubit chain and tabulates pair
//! entanglement: only nearest neighbours ever become entangled.
//!
//! Run with `cargo run --example chain_sweep`.

use std::error::Error;

use srq::sweep::{run_sweep, Grid, Measure, SweepParameter, SweepSpec};
use srq::ChainParams;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let spec = SweepSpec {
        base: ChainParams::resonant(4, 1.5, 1.0, 0.0)?,
        parameter: SweepParameter::GammaAll,
        grid: Grid::linear(0.1, 3.0, 15),
        measures: vec![
            Measure::Eof(1, 2),
            Measure::Eof(2, 3),
            Measure::Eof(1, 3),
            Measure::Eof(1, 4),
            Measure::MutualInformation(1, 2),
            Measure::SignalX,
        ],
    };
    let header: Vec<String> = spec.measures.iter().map(|m| format!("{m:>13}")).collect();
    println!("{:>6} {}", "Γ/Ω", header.join(""));
    for rec in run_sweep(&spec)? {
        if let Some(reason) = &rec.failure {
            println!("{:>6.3} failed: {reason}", rec.parameter_value);
            continue;
        }
        let cells: Vec<String> = rec.values.iter().map(|(_, v)| format!("{v:>13.3e}")).collect();
        println!("{:>6.3} {}", rec.parameter_value, cells.join(""));
        let far = rec
            .get(&Measure::Eof(1, 3))
            .unwrap()
            .max(rec.get(&Measure::Eof(1, 4)).unwrap());
        if far > 1e-9 {
            return Err("entanglement leaked beyond nearest neighbours".into());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

//! Steady-state coherence of a single detuned qubit, against its Bloch-equation
//! closed form. A resonant qubit has none.
//!
//! Run with `cargo run --example detuned_qubit`.

use std::error::Error;

use srq::measures::single_qubit_coherence;
use srq::{steady_state_of, ChainParams};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("{:>6} {:>6} {:>12} {:>12}", "δ/Ω", "Γ/Ω", "<σx>", "Bloch form");
    for delta in [0.0, 0.3, 1.0] {
        for gamma in [0.2, 1.0, 4.0] {
            let rho = steady_state_of(&ChainParams::uniform(1, 1.0, delta, 0.0, gamma, 0.0)?)?;
            let x = single_qubit_coherence(&rho, 1)?;
            // With drive Ωσx and population decay 2Γ.
            let bloch = 2.0 * delta / (delta * delta + gamma * gamma + 2.0);
            println!("{delta:>6.2} {gamma:>6.2} {x:>12.8} {bloch:>12.8}");
            if (x.abs() - bloch).abs() > 1e-9 {
                return Err("coherence differs from the Bloch form".into());
            }
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

//! Locates the decay rate above which a qubit pair becomes entangled, by
//! bisection on the smallest partial-transpose eigenvalue.
//!
//! Run with `cargo run --example noise_threshold`.

use std::error::Error;

use srq::oracle;
use srq::sweep::{find_ppt_threshold, pair_pt_eigenvalue};
use srq::ChainParams;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("two qubits: numeric threshold against Ω²/(2J)");
    for s in [0.5, 1.0, 1.5, 3.0] {
        let base = ChainParams::resonant(2, s, 1.0, 0.0)?;
        let found = find_ppt_threshold(&base, (1, 2), (0.01, 5.0), 1e-10)?;
        let exact = oracle::gamma_threshold(1.0, s)?;
        println!("  J/Ω = {s:<4} Γ_th = {found:.9}  exact {exact:.9}");
        if (found - exact).abs() > 1e-6 {
            return Err(format!("threshold off by {:e}", found - exact).into());
        }
    }

    println!("pair (1,2) threshold against chain length, J/Ω = 1.5");
    let mut thresholds = Vec::new();
    for n in 2..=4 {
        let base = ChainParams::resonant(n, 1.5, 1.0, 0.0)?;
        let found = find_ppt_threshold(&base, (1, 2), (0.05, 2.0), 1e-9)?;
        let below = pair_pt_eigenvalue(&base, (1, 2), 0.9 * found)?;
        let above = pair_pt_eigenvalue(&base, (1, 2), 1.1 * found)?;
        println!("  N = {n}: Γ_th = {found:.9} (min PT eigenvalue {below:+.2e} below, {above:+.2e} above)");
        thresholds.push(found);
    }
    // Not monotone: the three-qubit value sits above the two-qubit one.
    if thresholds[2] >= thresholds[0] {
        return Err("the four-qubit threshold is not below the two-qubit one".into());
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

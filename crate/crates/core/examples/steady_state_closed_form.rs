//! Solves the resonant two-qubit chain numerically and compares it with the
//! closed-form steady state, entry by entry.
//!
//! Run with `cargo run --example steady_state_closed_form`.

use std::error::Error;

use srq::oracle::{self, AnalyticParams};
use srq::{steady_state_of, ChainParams};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!(
        "{:>6} {:>6} {:>12} {:>12} {:>10}",
        "r", "s", "<sx> num", "<sx> exact", "max dev"
    );
    for s in [0.5, 1.5, 3.0] {
        for r in [0.2, 1.0, std::f64::consts::SQRT_2, 4.0] {
            // Ω = 1, so r = Γ/Ω and s = J/Ω.
            let rho = steady_state_of(&ChainParams::resonant(2, s, r, 0.0)?)?;
            let p = AnalyticParams::new(r, s)?;
            let exact = oracle::steady_state_2q(p);
            let dev = rho.matrix().max_abs_diff(exact.matrix());
            let sx = srq::measures::single_qubit_coherence(&rho, 1)?;
            println!("{r:>6.3} {s:>6.2} {sx:>12.8} {:>12.8} {dev:>10.1e}", oracle::signal2(p));
            if dev > 1e-9 {
                return Err(format!("numeric state deviates by {dev:e} at r={r}, s={s}").into());
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

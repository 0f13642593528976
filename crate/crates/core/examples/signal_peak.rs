//! Scans the collective signal of a resonant pair against the decay rate and
//! refines its maximum, which sits at Γ = √2 Ω whatever the coupling.
//!
//! Run with `cargo run --example signal_peak`.

use std::error::Error;
use std::f64::consts::SQRT_2;

use srq::measures::{signal, Axis};
use srq::sweep::{find_ppt_threshold, try_find_peak, SweepError};
use srq::{steady_state_of, ChainParams};

fn pair_signal(s: f64, gamma: f64) -> Result<f64, SweepError> {
    let rho = steady_state_of(&ChainParams::resonant(2, s, gamma, 0.0)?)?;
    Ok(signal(&rho, Axis::X)?)
}

pub fn run_example() -> Result<(), Box<dyn Error>> {
    for s in [0.5, 1.5, 3.0] {
        let peak = try_find_peak(|g| pair_signal(s, g), (0.1, 5.0), 1e-9)?;
        println!(
            "J/Ω = {s:<4} peak at Γ/Ω = {:.7} (√2 = {SQRT_2:.7}), height {:.9} (s/(2+s²) = {:.9})",
            peak.location,
            peak.value,
            s / (2.0 + s * s)
        );
    }

    // At J = Ω/√8 the best operating point is exactly where entanglement appears.
    let s = 1.0 / 8f64.sqrt();
    let peak = try_find_peak(|g| pair_signal(s, g), (0.1, 5.0), 1e-9)?;
    let threshold = find_ppt_threshold(&ChainParams::resonant(2, s, 1.0, 0.0)?, (1, 2), (0.1, 5.0), 1e-10)?;
    println!(
        "J/Ω = 1/√8: peak {:.8}, entanglement threshold {threshold:.8}",
        peak.location
    );
    if (peak.location - threshold).abs() > 1e-6 {
        return Err("peak and threshold do not coincide".into());
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

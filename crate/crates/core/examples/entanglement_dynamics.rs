//! Integrates the master equation from the ground state and follows the
//! signal and pair entanglement until they settle on the steady state.
//!
//! Run with `cargo run --example entanglement_dynamics`.

use std::error::Error;

use srq::dynamics::linear_time_grid;
use srq::measures::{concurrence, entanglement_of_formation, signal, Axis};
use srq::{build_liouvillian, evolve, steady_state_of, ChainParams, DensityMatrix};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = ChainParams::resonant(2, 1.5, 1.0, 0.0)?;
    let grid = linear_time_grid(50.0, 501);
    let traj = evolve(&DensityMatrix::ground(2), &build_liouvillian(&params), &grid)?;
    let signal_t = traj.series(|rho| signal(rho, Axis::X))?;
    let eof_t = traj.series(|rho| entanglement_of_formation(concurrence(rho)?))?;

    println!("{:>6} {:>12} {:>12}", "Ωt", "<Sx>", "E_F(1,2)");
    for k in (0..grid.len()).step_by(50) {
        println!("{:>6.1} {:>12.8} {:>12.8}", grid[k], signal_t[k], eof_t[k]);
    }
    let gap = traj.last().matrix().max_abs_diff(steady_state_of(&params)?.matrix());
    println!("distance to steady state at Ωt = 50: {gap:.2e}");
    println!(
        "largest substep {:.3e}, trace drift {:.1e}, error estimate {:.1e}",
        traj.max_step, traj.max_trace_drift, traj.error_estimate
    );
    if gap > 1e-6 {
        return Err("trajectory did not converge".into());
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

//! Trajectory of the point states as V0 is swept across [-2, 0] at t0 = 0.5,
//! with the class transitions located by bisection.
//!
//! Run: cargo run --example spectrum_sweep

use impurity_chain::spectrum::{locate_transitions, sweep_spectrum};
use impurity_chain::Result;

fn main() -> Result<()> {
    let t0 = 0.5;
    let rows = sweep_spectrum(t0, -2.0, 0.0, 201)?;
    for row in rows.iter().step_by(20) {
        let spec = row.spectrum.as_ref().expect("t0 = 0.5 is never degenerate");
        let states: Vec<String> = spec
            .states
            .iter()
            .map(|s| format!("{} K=({:+.5}, {:+.5})", s.class.name(), s.k.re, s.k.im))
            .collect();
        println!("V0 = {:+.2}  {}", row.v0, states.join("  "));
    }
    println!();
    for v0 in locate_transitions(&rows, t0) {
        println!("class signature changes at V0 = {v0:.12}");
    }
    Ok(())
}

//! Point states in each regime of the impurity chain.
//!
//! Run: cargo run --example point_spectrum

use impurity_chain::spectrum::{band_edge_crossings, exceptional_points, solve_point_spectrum};
use impurity_chain::{ModelParams, Result};

fn main() -> Result<()> {
    let t0 = 0.5;
    let (lower, upper) = band_edge_crossings(t0);
    let (ep_lo, ep_hi) = exceptional_points(t0).expect("t0 < 1/sqrt2 has exceptional points");
    println!("t0 = {t0}: band-edge crossings at V0 = {lower}, {upper}; exceptional points at V0 = {ep_lo:.12}, {ep_hi:.12}");
    println!();
    println!(
        "{:>7} {:>13} {:>12} {:>12} {:>12} {:>12}",
        "V0", "class", "Re K", "Im K", "Re E", "Im E"
    );
    for v0 in [-2.0, -1.5, -1.45, -std::f64::consts::SQRT_2, -0.8, 0.0, 1.8] {
        let spec = solve_point_spectrum(ModelParams::new(t0, v0)?)?;
        for s in &spec.states {
            println!(
                "{v0:>7.4} {:>13} {:>12.8} {:>12.8} {:>12.8} {:>12.8}",
                s.class.name(),
                s.k.re,
                s.k.im,
                s.energy.re,
                s.energy.im
            );
        }
    }
    Ok(())
}

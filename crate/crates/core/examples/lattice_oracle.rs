//! Exact survival amplitude from a truncated chain, its horizon, and a check
//! against the uniform chain where A(t) = J0(2t).
//!
//! Run: cargo run --release --example lattice_oracle

use impurity_chain::lattice::{impurity_weights, survival_oracle, OracleConfig};
use impurity_chain::{Error, ModelParams, Result};

fn main() -> Result<()> {
    let p = ModelParams::new(0.5, -0.8)?;
    let cfg = OracleConfig::default();
    println!("L = {}, horizon = {}", cfg.half_length, cfg.horizon());

    let weights = impurity_weights(&p, cfg.half_length)?;
    println!("sum of impurity weights = {:.15}", weights.total_weight());

    let times = [0.0, 5.0, 20.0, 40.0];
    let a400 = survival_oracle(&p, &cfg, &times)?;
    let a800 = survival_oracle(
        &p,
        &OracleConfig {
            half_length: 800,
            ..cfg
        },
        &times,
    )?;
    for ((t, a), b) in times.iter().zip(&a400).zip(&a800) {
        println!(
            "t = {t:>4}: A = {a:.10e}   |A_400 - A_800| = {:.1e}",
            (a - b).norm()
        );
    }

    match survival_oracle(&p, &cfg, &[250.0]) {
        Err(Error::HorizonExceeded { t, horizon }) => {
            println!("t = {t} refused: reflections return after {horizon}")
        }
        other => println!("unexpected: {other:?}"),
    }

    let uniform = ModelParams::new(1.0, 0.0)?;
    let a = survival_oracle(&uniform, &cfg, &[2.404825557695773 / 2.0])?;
    println!(
        "uniform chain at the first zero of J0(2t): |A| = {:.1e}",
        a[0].norm()
    );
    Ok(())
}

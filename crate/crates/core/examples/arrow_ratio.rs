//! Ratio of resonant to anti-resonant weight, r(t) = |chi_res|^2 / |chi_ar|^2.
//! Equal weights at t = 0 and r(t) r(-t) = 1 by time reversal.
//!
//! Run: cargo run --release --example arrow_ratio

use impurity_chain::dynamics::{ratio_series, ContourConfig};
use impurity_chain::numeric::symmetric_grid;
use impurity_chain::{ModelParams, Result};

fn main() -> Result<()> {
    let p = ModelParams::new(0.5, -0.8)?;
    let times = symmetric_grid(12.0, 121);
    let series = ratio_series(&p, &times, &ContourConfig::default())?;
    let r = series.ratio.expect("ratio column");
    let n = times.len();
    let worst = (0..n)
        .map(|i| (r[i] * r[n - 1 - i] - 1.0).abs())
        .fold(0.0, f64::max);
    for i in (n / 2..n).step_by(4) {
        println!(
            "t = {:>5.1}  r = {:>12.5e}  r(-t) = {:>12.5e}",
            times[i],
            r[i],
            r[n - 1 - i]
        );
    }
    println!("max |r(t) r(-t) - 1| = {worst:.1e}");
    Ok(())
}

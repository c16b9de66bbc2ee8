//! Probability balance of the resonant state over growing windows [-L, L]:
//! the partial norm decays at rate -2 Im E exactly as fast as current leaves
//! through the two ends.
//!
//! Run: cargo run --example resonance_conservation

use impurity_chain::siegert::{
    boundary_current, boundary_current_left, build_siegert_state, conservation_sides, partial_norm,
    partial_norm_leading, quadratic_form_partial, NormConvention,
};
use impurity_chain::spectrum::solve_point_spectrum;
use impurity_chain::{ModelParams, Result, StateClass};

fn main() -> Result<()> {
    let p = ModelParams::new(0.5, -0.8)?;
    let spec = solve_point_spectrum(p)?;
    let ps = spec
        .first_of_class(StateClass::Resonant)
        .expect("resonant regime");
    let s = build_siegert_state(&p, ps, NormConvention::Unnormalized)?;
    println!("resonance: E = {:.12}, K = {:.12}", s.energy, s.k);
    println!(
        "exact / leading-order partial norm tends to exp(-Im K) = {:.12}",
        (-s.k.im).exp()
    );
    println!();
    println!(
        "{:>3} {:>14} {:>14} {:>14} {:>14} {:>10} {:>12}",
        "L", "<psi|psi>_L", "J(L)", "J(-L)", "-2ImE N", "residual", "exact/lead"
    );
    for l in [1usize, 5, 10, 15, 20, 25, 30] {
        let sides = conservation_sides(&s, l)?;
        println!(
            "{l:>3} {:>14.6e} {:>14.6e} {:>14.6e} {:>14.6e} {:>10.1e} {:>12.9}",
            partial_norm(&s, l),
            boundary_current(&s, l),
            boundary_current_left(&s, l),
            sides.norm_decay,
            sides.relative_residual(),
            partial_norm(&s, l) / partial_norm_leading(&s, l)
        );
    }
    let q = quadratic_form_partial(&p, &s.sample(20));
    println!();
    println!(
        "<psi|H|psi>_20 = {q:.6e}  (complex: the outgoing boundary condition is not Hermitian)"
    );
    Ok(())
}

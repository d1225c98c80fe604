//! Lipschitz estimate at work: slopes of the evolving spiral stay inside the
//! box `[-max(1, L0), L1]` (for `c >= 0`), up to the discretization slack.
//!
//! Run: `cargo run --release --example gradient_bounds`

use rand::SeedableRng;
use spiralflow::verify::gradient_experiment;
use spiralflow::{Grid1D, InitialProfile, Params, SchemeConfig};

fn main() -> spiralflow::Result<()> {
    let grid = Grid1D::polar(0.0, 10.0, 400)?;
    let cfg = SchemeConfig::new(0.05)?.with_record_every(10)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(404);
    let u0 = InitialProfile::random_lipschitz(&mut rng, 0.3);
    println!("initial slopes within [-{:.3}, {:.3}]", u0.lip_lower, u0.lip_upper);
    for c in [1.0, 0.0, -1.0] {
        let rep = gradient_experiment(&u0, &grid, &Params::new(c)?, &cfg)?;
        println!(
            "c = {c:>4}: gradients in [{:>8.4}, {:>8.4}], bounds [{:>8.4}, {:>8.4}] -> {}",
            rep.measured["grad_min"],
            rep.measured["grad_max"],
            rep.measured["bound_lo"],
            rep.measured["bound_hi"],
            if rep.pass { "inside" } else { "VIOLATED" }
        );
    }
    println!("\nnegative forcing runs through the sign symmetry (u, c) -> (-u, -c)");
    Ok(())
}

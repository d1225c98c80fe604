//! The structural assumption behind the comparison principle for the
//! generalized family `u_t = e^{-x} b(e^{-x} u_x, u_x) + e^{-2x} s^2(u_x) u_xx`
//! is `||sigma||^2 < 2 delta2`. Check it by sampling for the spiral
//! coefficients and for radial heat flow in several dimensions.
//!
//! Run: `cargo run --release --example bs_assumptions`

use spiralflow::pde::GenCoeffs;
use spiralflow::verify::check_bs_assumptions;
use spiralflow::Params;

fn main() -> spiralflow::Result<()> {
    println!(
        "{:<22} {:>8} {:>8} {:>8} {:>8} {:>10} {:>8} {:>6}",
        "coefficients", "delta1", "delta2", "delta3", "delta4", "sigma_inf", "margin", "pass"
    );
    let spiral = GenCoeffs::spiral(&Params::new(1.0)?);
    for coeffs in [
        spiral,
        GenCoeffs::radial_heat(2.0),
        GenCoeffs::radial_heat(3.0),
        GenCoeffs::radial_heat(4.0),
        GenCoeffs::pure_diffusion(),
    ] {
        let rep = check_bs_assumptions(&coeffs, 10.0, 10.0);
        println!(
            "{:<22} {:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>10.4} {:>8.4} {:>6}",
            rep.label, rep.delta1, rep.delta2, rep.delta3, rep.delta4, rep.sigma_inf, rep.margin,
            rep.passes
        );
    }
    println!("\nradial heat satisfies the assumption iff 1 < 2(n-2): n = 2 fails, n >= 3 passes");
    Ok(())
}

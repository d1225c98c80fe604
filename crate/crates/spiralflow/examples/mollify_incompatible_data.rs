//! Mollification of incompatible initial data: blend the datum near the
//! origin with a compatible jet so the compatibility condition holds, with
//! bounds independent of the blending scale.
//!
//! Run: `cargo run --release --example mollify_incompatible_data`

use spiralflow::barriers::{compatibility_check, mollifier_claim_constant, mollify_initial};
use spiralflow::{Grid1D, InitialProfile, Params};

fn main() -> spiralflow::Result<()> {
    let params = Params::new(1.0)?;
    let grid = Grid1D::polar(0.0, 10.0, 801)?;
    let u0 = InitialProfile::zero();

    let before = compatibility_check(&u0, &params, &grid)?;
    println!("u0 = 0 with c = 1: compatible = {}", before.compatible);
    println!("claim bound constant (eps-independent): {:.4}\n", mollifier_claim_constant(&u0, &params));

    println!(
        "{:>6} {:>12} {:>14} {:>16} {:>12}",
        "eps", "slope at 0", "compatible", "sup r|u_eps''|", "u(3 eps)"
    );
    for eps in [0.2, 0.1, 0.05, 0.025] {
        let m = mollify_initial(&u0, eps, &params)?;
        let compat = compatibility_check(&m, &params, &grid)?;
        let mut sup: f64 = 0.0;
        for k in 0..=100_000 {
            let r = 2.0 * k as f64 / 100_000.0;
            sup = sup.max((r * m.d2(r)).abs());
        }
        println!(
            "{eps:>6} {:>12.6} {:>14} {sup:>16.6} {:>12.3e}",
            m.d1(0.0),
            compat.compatible,
            m.eval(3.0 * eps)
        );
    }
    println!("\nslope at the origin is -c/2; the datum is untouched beyond 2 eps;");
    println!("the measured curvature-scale bound does not depend on eps");
    Ok(())
}

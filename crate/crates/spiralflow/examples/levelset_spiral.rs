//! Level-set cross-validation: evolve the angle field `U = theta + u(t, r)`
//! on an annulus alongside the 1D graph solver and compare the extracted
//! zero-level curve with the sampled spiral.
//!
//! Run: `cargo run --release --example levelset_spiral`

use spiralflow::interp::MonotoneCubic;
use spiralflow::levelset::{extract_zero_level, hausdorff_restricted, run_levelset_coupled};
use spiralflow::{Grid1D, InitialProfile, Params, SchemeConfig};

fn main() -> spiralflow::Result<()> {
    let params = Params::new(1.0)?;
    let (a, b, n2d) = (0.5, 4.0, 192);
    let grid1d = Grid1D::polar(0.0, 8.0, 321)?;
    let cfg = SchemeConfig::new(0.02)?;
    let u0 = InitialProfile::linear(1.0);

    let (field, state) = run_levelset_coupled(&u0, &grid1d, a, b, n2d, &params, &cfg, 2e-6)?;
    let contour = extract_zero_level(&field)?;
    println!(
        "2D grid {n2d}^2 on [{:.1}, {:.1}], cell size {:.4}; extracted {} zero-level points at t = {:.3}",
        -b, b, field.h, contour.points.len(), field.t
    );

    let interp = MonotoneCubic::fit_uniform(grid1d.lo(), grid1d.spacing(), &state.values);
    let graph: Vec<[f64; 2]> = (0..4001)
        .map(|k| {
            let r = 0.45 + (3.7 - 0.45) * k as f64 / 4000.0;
            let u = interp.eval(r);
            [r * u.cos(), -r * u.sin()]
        })
        .collect();
    let d = hausdorff_restricted(&contour.points, &graph, 1.2 * a, 0.8 * b);
    println!(
        "Hausdorff distance to the graph spiral on [{:.2}, {:.2}]: {d:.4} = {:.2} cells",
        1.2 * a,
        0.8 * b,
        d / field.h
    );
    println!("\nfirst few contour points (ordered by radius):");
    for p in contour.points.iter().take(8) {
        println!("  ({:>8.4}, {:>8.4})  r = {:.4}", p[0], p[1], p[0].hypot(p[1]));
    }
    Ok(())
}

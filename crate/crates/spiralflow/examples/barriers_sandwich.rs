//! Barriers sandwiching the solution: `u0 +/- Cbar t` for compatible data and
//! `u0 +/- Cbar t / r +/- B(t)` without the compatibility condition, both
//! verified as discrete super/subsolutions and against a solver run.
//!
//! Run: `cargo run --release --example barriers_sandwich`

use spiralflow::barriers::{
    barrier_constant, barrier_no_compat, mollify_initial, verify_subsolution,
    verify_supersolution,
};
use spiralflow::{run, Grid1D, InitialProfile, Params, SchemeConfig};

fn main() -> spiralflow::Result<()> {
    let params = Params::new(1.0)?;
    let grid = Grid1D::polar(0.0, 10.0, 801)?;
    let h = grid.spacing();

    // compatible case: mollified zero datum
    let u0 = mollify_initial(&InitialProfile::zero(), 0.1, &params)?;
    let spec = barrier_constant(&u0, &params, &grid)?;
    println!("compatible case: Cbar = {:.4} ({})", spec.cbar, spec.computed_on);
    let times = [0.01, 0.03, 0.05];
    let up = {
        let (u0, cbar) = (u0.clone(), spec.cbar);
        move |t: f64, r: f64| u0.eval(r) + cbar * t
    };
    let down = {
        let (u0, cbar) = (u0.clone(), spec.cbar);
        move |t: f64, r: f64| u0.eval(r) - cbar * t
    };
    println!(
        "  supersolution violation {:.3e}, subsolution violation {:.3e} (tol 10h = {:.3e})",
        verify_supersolution(&up, &grid, &times, &params),
        verify_subsolution(&down, &grid, &times, &params),
        10.0 * h
    );
    let cfg = SchemeConfig::new(0.05)?.with_record_every(50)?;
    let traj = run(&u0, &grid, &params, &cfg)?;
    let base = &traj.snapshots[0].values;
    let mut worst: f64 = 0.0;
    for snap in traj.snapshots.iter().skip(1) {
        for (a, b) in snap.values.iter().zip(base) {
            worst = worst.max((a - b).abs() / (spec.cbar * snap.t + 10.0 * h));
        }
    }
    println!("  solver stays within Cbar t + 10h of u0 (worst ratio {worst:.3})");

    // incompatible case: u0 = 0 with c = 1
    let spec = barrier_no_compat(&InitialProfile::zero(), &params)?;
    println!("\nincompatible case (u0 = 0): Cbar = {} and B(t) = Cbar t (1 + Cbar t/2)", spec.cbar);
    let cfg = SchemeConfig::new(0.01)?.with_record_every(50)?;
    let traj = run(&InitialProfile::zero(), &grid, &params, &cfg)?;
    println!("{:>10} {:>12} {:>24}", "t", "max |u|", "max |u|/(Cbar t/r + B)");
    for snap in traj.snapshots.iter().skip(1) {
        let mut amp: f64 = 0.0;
        let mut ratio: f64 = 0.0;
        for i in 1..grid.len() {
            let r = grid.node(i);
            if r <= 8.0 {
                amp = amp.max(snap.values[i].abs());
                ratio = ratio
                    .max(snap.values[i].abs() / (spec.cbar * snap.t / r + spec.b_of_t(snap.t)));
            }
        }
        println!("{:>10.5} {amp:>12.6} {ratio:>24.3}", snap.t);
    }
    Ok(())
}

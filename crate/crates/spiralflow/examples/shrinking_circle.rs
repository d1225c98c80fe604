//! Sanity oracle for the level-set kernel: with zero forcing, a circle of
//! radius `R0` shrinks by curvature as `R(t) = sqrt(R0^2 - 2t)`.
//!
//! Run: `cargo run --release --example shrinking_circle`

use spiralflow::levelset::run_shrinking_circle;

fn main() -> spiralflow::Result<()> {
    let r0 = 1.0;
    let samples = run_shrinking_circle(r0, 1.3, 160, 0.5, 1e-6, 10)?;
    println!("{:>10} {:>12} {:>12} {:>12}", "t", "measured R", "exact R", "rel error");
    let mut worst: f64 = 0.0;
    for (t, measured, exact) in samples {
        let rel = (measured - exact).abs() / exact;
        worst = worst.max(rel);
        println!("{t:>10.5} {measured:>12.6} {exact:>12.6} {rel:>12.3e}");
    }
    println!("\nworst relative error until R = R0/2: {worst:.3e} (threshold 2e-2)");
    Ok(())
}

//! Cartesian level-set cross-validator on an annulus.
//!
//! The spiral is the zero level of `U(t, X) = theta + u(t, r)`, which evolves
//! by the degenerate parabolic equation
//!
//! ```text
//! U_t = c |DU| + (DU^perp/|DU|) . D^2 U . (DU^perp/|DU|)
//! ```
//!
//! The angle is multivalued, so `U` is stored single-valued with one branch
//! cut placed at `theta = -u(t, r) + pi` (farthest from the zero level); every
//! finite difference crossing the cut is corrected by `+/- 2 pi`. The annulus
//! boundary rings are Dirichlet-refreshed from a reference (the concurrently
//! run 1D polar solution, or an analytic field in sanity tests), so the
//! comparison isolates interior discretization error.

use crate::error::{Error, Result};
use crate::grid::{Params, ProfileState, SpiralCurve};
use crate::interp::MonotoneCubic;
use crate::profile::InitialProfile;
use crate::solver::{cfl_dt, sample_initial, step_polar, SchemeConfig};
use rayon::prelude::*;
use std::f64::consts::{PI, TAU};

/// Node role inside the masked annulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Role {
    Outside,
    /// masked but with part of its 3x3 stencil outside: Dirichlet-refreshed
    Ring,
    Interior,
}

/// Sampled level-set field on a square grid covering the annulus `a <= |X| <= b`
/// (`a = 0` gives the full-disk variant).
#[derive(Debug, Clone)]
pub struct LevelSetField {
    pub n: usize,
    pub h: f64,
    /// lower-left corner coordinate (the grid is `[-b, b]^2`)
    pub lo: f64,
    pub a: f64,
    pub b: f64,
    pub t: f64,
    pub values: Vec<f64>,
    roles: Vec<Role>,
}

impl LevelSetField {
    /// Build from a closure of the plane; masked-out nodes hold NaN.
    pub fn from_fn(a: f64, b: f64, n: usize, t: f64, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if !(b > 0.0) || a < 0.0 || a >= b {
            return Err(Error::Domain(format!("annulus radii 0 <= a < b required, got [{a}, {b}]")));
        }
        if n < 16 {
            return Err(Error::Domain("level-set grid needs n >= 16".into()));
        }
        let lo = -b;
        let h = 2.0 * b / (n - 1) as f64;
        let masked = |i: isize, j: isize| -> bool {
            if i < 0 || j < 0 || i >= n as isize || j >= n as isize {
                return false;
            }
            let x = lo + h * i as f64;
            let y = lo + h * j as f64;
            let r = x.hypot(y);
            r >= a && r <= b
        };
        let mut roles = vec![Role::Outside; n * n];
        let mut values = vec![f64::NAN; n * n];
        for j in 0..n {
            for i in 0..n {
                if !masked(i as isize, j as isize) {
                    continue;
                }
                let mut interior = true;
                for dj in -1..=1 {
                    for di in -1..=1 {
                        interior &= masked(i as isize + di, j as isize + dj);
                    }
                }
                roles[j * n + i] = if interior { Role::Interior } else { Role::Ring };
                let x = lo + h * i as f64;
                let y = lo + h * j as f64;
                values[j * n + i] = f(x, y);
            }
        }
        Ok(LevelSetField { n, h, lo, a, b, t, values, roles })
    }

    pub fn coords(&self, i: usize, j: usize) -> (f64, f64) {
        (self.lo + self.h * i as f64, self.lo + self.h * j as f64)
    }

    pub fn is_masked(&self, i: usize, j: usize) -> bool {
        self.roles[j * self.n + i] != Role::Outside
    }
}

/// Smallest representative of `d` modulo `2 pi` (branch-cut correction).
#[inline]
fn wrap(d: f64) -> f64 {
    d - TAU * (d / TAU).round()
}

/// Angle near the reference `-u(r)` branch plus the graph value: the
/// single-valued representative of `theta + u(r)` in `(-pi, pi]`.
fn unwrapped_value(x: f64, y: f64, u_at_r: f64) -> f64 {
    let theta_raw = y.atan2(x);
    let k = ((-u_at_r - theta_raw) / TAU).round();
    theta_raw + TAU * k + u_at_r
}

/// Initialize `U = theta + u0(|X|)` from a 1D polar profile on the annulus
/// `a <= |X| <= b`, with the branch cut opposite the zero level.
pub fn init_from_profile(profile: &ProfileState, a: f64, b: f64, n: usize) -> Result<LevelSetField> {
    if !(a > profile.grid.lo() && b < profile.grid.hi()) {
        return Err(Error::Range(format!(
            "annulus [{a}, {b}] must sit strictly inside the profile range [{}, {}]",
            profile.grid.lo(),
            profile.grid.hi()
        )));
    }
    let interp = MonotoneCubic::fit_uniform(profile.grid.lo(), profile.grid.spacing(), &profile.values);
    LevelSetField::from_fn(a, b, n, profile.t, |x, y| {
        let r = x.hypot(y);
        unwrapped_value(x, y, interp.eval(r))
    })
}

/// CFL-stable step for the 2D scheme: `min(h^2/4, h/(2|c|))` scaled by `safety`.
pub fn cfl_dt_levelset(field: &LevelSetField, params: &Params, safety: f64) -> f64 {
    let h = field.h;
    safety * (0.25 * h * h).min(h / (2.0 * params.c.abs() + 1e-300))
}

/// One forward-Euler step: monotone one-sided gradient for `c |DU|`, central
/// differences for the curvature-direction term with `|DU|^2` regularized by
/// `eps_reg^2`, and Dirichlet refresh of the boundary rings from `boundary`.
pub fn step_levelset(
    field: &LevelSetField,
    dt: f64,
    params: &Params,
    eps_reg: f64,
    boundary: &(impl Fn(f64, f64, f64) -> f64 + Sync),
) -> Result<LevelSetField> {
    if !(eps_reg > 0.0) {
        return Err(Error::Domain("eps_reg must be positive".into()));
    }
    let bound = cfl_dt_levelset(field, params, 1.0);
    if dt > bound * (1.0 + 1e-9) {
        return Err(Error::RejectedStep { dt, bound });
    }
    let (n, h, c) = (field.n, field.h, params.c);
    let v = &field.values;
    let roles = &field.roles;
    let t_new = field.t + dt;
    let eps2 = eps_reg * eps_reg;
    let mut out = vec![f64::NAN; n * n];
    out.par_chunks_mut(n).enumerate().for_each(|(j, row)| {
        for (i, slot) in row.iter_mut().enumerate() {
            let id = j * n + i;
            match roles[id] {
                Role::Outside => {}
                Role::Ring => {
                    let (x, y) = (field.lo + h * i as f64, field.lo + h * j as f64);
                    *slot = boundary(t_new, x, y);
                }
                Role::Interior => {
                    let vc = v[id];
                    let de = wrap(v[id + 1] - vc);
                    let dw = wrap(v[id - 1] - vc);
                    let dn = wrap(v[id + n] - vc);
                    let ds = wrap(v[id - n] - vc);
                    let dne = wrap(v[id + n + 1] - vc);
                    let dnw = wrap(v[id + n - 1] - vc);
                    let dse = wrap(v[id - n + 1] - vc);
                    let dsw = wrap(v[id - n - 1] - vc);
                    let dpx = de / h;
                    let dmx = -dw / h;
                    let dpy = dn / h;
                    let dmy = -ds / h;
                    let s = if c >= 0.0 {
                        dpx.max(0.0).powi(2)
                            + dmx.min(0.0).powi(2)
                            + dpy.max(0.0).powi(2)
                            + dmy.min(0.0).powi(2)
                    } else {
                        dpx.min(0.0).powi(2)
                            + dmx.max(0.0).powi(2)
                            + dpy.min(0.0).powi(2)
                            + dmy.max(0.0).powi(2)
                    };
                    let grad_term = c * s.sqrt();
                    let gx = (de - dw) / (2.0 * h);
                    let gy = (dn - ds) / (2.0 * h);
                    let uxx = (de + dw) / (h * h);
                    let uyy = (dn + ds) / (h * h);
                    let uxy = (dne - dnw - dse + dsw) / (4.0 * h * h);
                    let curv_term =
                        (gy * gy * uxx - 2.0 * gx * gy * uxy + gx * gx * uyy)
                            / (gx * gx + gy * gy + eps2);
                    *slot = vc + dt * (grad_term + curv_term);
                }
            }
        }
    });
    for (id, role) in roles.iter().enumerate() {
        if *role != Role::Outside && !out[id].is_finite() {
            return Err(Error::Diverged { t: field.t });
        }
    }
    Ok(LevelSetField { n, h, lo: field.lo, a: field.a, b: field.b, t: t_new, values: out, roles: roles.clone() })
}

/// Marching-squares extraction of the zero level, branch-cut aware (edges
/// whose endpoint difference exceeds `pi` belong to the cut, not the level
/// set). Points are returned ordered by radius.
pub fn extract_zero_level(field: &LevelSetField) -> Result<SpiralCurve> {
    let n = field.n;
    let mut points: Vec<[f64; 2]> = Vec::new();
    let mut push_edge = |x0: f64, y0: f64, v0: f64, x1: f64, y1: f64, v1: f64| {
        if !(v0.is_finite() && v1.is_finite()) {
            return;
        }
        if (v0 - v1).abs() >= PI {
            return; // crossing the branch cut
        }
        if v0 == 0.0 {
            points.push([x0, y0]);
        } else if v0 * v1 < 0.0 {
            let s = v0 / (v0 - v1);
            points.push([x0 + s * (x1 - x0), y0 + s * (y1 - y0)]);
        }
    };
    for j in 0..n - 1 {
        for i in 0..n - 1 {
            let id = j * n + i;
            if !(field.is_masked(i, j)
                && field.is_masked(i + 1, j)
                && field.is_masked(i, j + 1)
                && field.is_masked(i + 1, j + 1))
            {
                continue;
            }
            let (x0, y0) = field.coords(i, j);
            let (x1, y1) = field.coords(i + 1, j + 1);
            let v00 = field.values[id];
            let v10 = field.values[id + 1];
            let v01 = field.values[id + n];
            // bottom and left edges only: each interior edge visited once
            push_edge(x0, y0, v00, x1, y0, v10);
            push_edge(x0, y0, v00, x0, y1, v01);
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyContour);
    }
    points.sort_by(|p, q| (p[0].hypot(p[1])).total_cmp(&q[0].hypot(q[1])));
    Ok(SpiralCurve { t: field.t, points })
}

fn directed_hausdorff(from: &[[f64; 2]], to: &[[f64; 2]]) -> f64 {
    let mut worst: f64 = 0.0;
    for p in from {
        let mut best = f64::INFINITY;
        for q in to {
            let d2 = (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2);
            best = best.min(d2);
        }
        worst = worst.max(best);
    }
    worst.sqrt()
}

/// Symmetric Hausdorff distance between two point clouds.
pub fn hausdorff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// Hausdorff distance with the *tested* points restricted to the annulus
/// `rlo <= |X| <= rhi`; nearest neighbours are searched in the full clouds so
/// the restriction cannot inflate distances at its own rim.
pub fn hausdorff_restricted(a: &[[f64; 2]], b: &[[f64; 2]], rlo: f64, rhi: f64) -> f64 {
    let filter = |pts: &[[f64; 2]]| -> Vec<[f64; 2]> {
        pts.iter().copied().filter(|p| {
            let r = p[0].hypot(p[1]);
            r >= rlo && r <= rhi
        }).collect()
    };
    directed_hausdorff(&filter(a), b).max(directed_hausdorff(&filter(b), a))
}

/// Evolve the level-set field and the 1D polar reference in lockstep with a
/// shared time step; the annulus rings take Dirichlet data from the 1D run.
/// Returns the final field and the final 1D state.
pub fn run_levelset_coupled(
    initial: &InitialProfile,
    grid1d: &crate::grid::Grid1D,
    a: f64,
    b: f64,
    n2d: usize,
    params: &Params,
    cfg: &SchemeConfig,
    eps_reg: f64,
) -> Result<(LevelSetField, ProfileState)> {
    let mut state = sample_initial(initial, grid1d)?;
    let mut field = init_from_profile(&state, a, b, n2d)?;
    let mut steps = 0usize;
    while field.t < cfg.t_end * (1.0 - 1e-12) {
        let dt = cfl_dt_levelset(&field, params, cfg.cfl_safety)
            .min(cfl_dt(&state, params, cfg)?)
            .min(cfg.t_end - field.t);
        state = step_polar(&state, dt, params, cfg)?;
        let interp =
            MonotoneCubic::fit_uniform(state.grid.lo(), state.grid.spacing(), &state.values);
        field = step_levelset(&field, dt, params, eps_reg, &|_t, x, y| {
            let r = x.hypot(y);
            unwrapped_value(x, y, interp.eval(r))
        })?;
        steps += 1;
        if steps > 2_000_000 {
            return Err(Error::State("level-set step budget exhausted".into()));
        }
    }
    Ok((field, state))
}

/// Shrinking-circle sanity run (`c = 0`, initial `|X| - r0` on the full
/// disk): returns `(t, extracted mean radius, exact radius)` samples until
/// the exact radius reaches `r0/2`.
pub fn run_shrinking_circle(
    r0: f64,
    b: f64,
    n2d: usize,
    safety: f64,
    eps_reg: f64,
    samples: usize,
) -> Result<Vec<(f64, f64, f64)>> {
    let params = Params::new(0.0).unwrap();
    let mut field = LevelSetField::from_fn(0.0, b, n2d, 0.0, |x, y| x.hypot(y) - r0)?;
    let t_end = 3.0 * r0 * r0 / 8.0; // exact radius halves here
    let exact = |t: f64, x: f64, y: f64| ((x.hypot(y)).powi(2) + 2.0 * t).sqrt() - r0;
    let mut out = Vec::new();
    let sample_times: Vec<f64> = (1..=samples).map(|k| t_end * k as f64 / samples as f64).collect();
    let mut next_sample = 0usize;
    while field.t < t_end * (1.0 - 1e-12) {
        let dt = cfl_dt_levelset(&field, &params, safety).min(t_end - field.t);
        field = step_levelset(&field, dt, &params, eps_reg, &|t, x, y| exact(t, x, y))?;
        if next_sample < sample_times.len() && field.t >= sample_times[next_sample] * (1.0 - 1e-12) {
            let contour = extract_zero_level(&field)?;
            let mean_r = contour.points.iter().map(|p| p[0].hypot(p[1])).sum::<f64>()
                / contour.points.len() as f64;
            out.push((field.t, mean_r, (r0 * r0 - 2.0 * field.t).max(0.0).sqrt()));
            next_sample += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid1D;

    fn profile(f: impl Fn(f64) -> f64) -> ProfileState {
        let grid = Grid1D::polar(0.1, 6.0, 601).unwrap();
        ProfileState::sample(&grid, 0.0, f).unwrap()
    }

    #[test]
    fn init_zero_profile_gives_angle_field() {
        let field = init_from_profile(&profile(|_| 0.0), 0.5, 4.0, 128).unwrap();
        // zero level = positive x-axis ray
        let contour = extract_zero_level(&field).unwrap();
        assert!(!contour.points.is_empty());
        for p in &contour.points {
            assert!(p[0] > 0.0, "zero level on the positive x-axis, got {p:?}");
            assert!(p[1].abs() <= field.h, "off-axis point {p:?}");
        }
    }

    #[test]
    fn init_constant_pi_flips_the_ray() {
        let field = init_from_profile(&profile(|_| std::f64::consts::PI), 0.5, 4.0, 128).unwrap();
        let contour = extract_zero_level(&field).unwrap();
        for p in &contour.points {
            assert!(p[0] < 0.0, "zero level on the negative x-axis, got {p:?}");
            assert!(p[1].abs() <= field.h);
        }
    }

    #[test]
    fn init_archimedean_zero_level_satisfies_theta_plus_r() {
        let field = init_from_profile(&profile(|r| r), 0.5, 4.0, 256).unwrap();
        let contour = extract_zero_level(&field).unwrap();
        assert!(contour.points.len() > 50);
        for p in &contour.points {
            let r = p[0].hypot(p[1]);
            let theta = p[1].atan2(p[0]);
            let misfit = wrap(theta + r);
            assert!(misfit.abs() < 3.0 * field.h, "theta + r != 0 (mod 2pi): {misfit}");
        }
    }

    #[test]
    fn rotation_equivariance_of_extraction() {
        let base = init_from_profile(&profile(|r| 0.5 * r), 0.5, 4.0, 192).unwrap();
        let alpha = 0.7;
        let rotated = init_from_profile(&profile(|r| 0.5 * r + alpha), 0.5, 4.0, 192).unwrap();
        let ca = extract_zero_level(&base).unwrap();
        let cb = extract_zero_level(&rotated).unwrap();
        // rotate the base contour by -alpha and compare
        let rot: Vec<[f64; 2]> = ca
            .points
            .iter()
            .map(|p| {
                [
                    p[0] * alpha.cos() + p[1] * alpha.sin(),
                    -p[0] * alpha.sin() + p[1] * alpha.cos(),
                ]
            })
            .collect();
        let d = hausdorff_restricted(&rot, &cb.points, 0.7, 3.5);
        assert!(d <= 2.0 * base.h, "rotation equivariance broken: {d}");
    }

    #[test]
    fn linear_field_is_static_without_forcing() {
        let params = Params::new(0.0).unwrap();
        let field = LevelSetField::from_fn(0.5, 3.0, 96, 0.0, |x, y| 0.3 * x - 0.8 * y + 0.1).unwrap();
        let dt = cfl_dt_levelset(&field, &params, 0.5);
        let next = step_levelset(&field, dt, &params, 1e-6, &|_, x, y| 0.3 * x - 0.8 * y + 0.1).unwrap();
        for (a, b) in field.values.iter().zip(&next.values) {
            if a.is_finite() {
                assert!((a - b).abs() < 1e-13, "linear level lines must not move");
            }
        }
    }

    #[test]
    fn pure_angle_field_rotates_at_rate_c_over_r() {
        // U = theta: |DU| = 1/r and rays have zero curvature, so U_t = c/r
        let params = Params::new(1.0).unwrap();
        let field = init_from_profile(&profile(|_| 0.0), 0.5, 4.0, 256).unwrap();
        let dt = cfl_dt_levelset(&field, &params, 0.5);
        let next = step_levelset(&field, dt, &params, 1e-6, &|_, x, y| unwrapped_value(x, y, 0.0)).unwrap();
        let n = field.n;
        for j in 0..n {
            for i in 0..n {
                let id = j * n + i;
                if field.roles[id] != Role::Interior {
                    continue;
                }
                let (x, y) = field.coords(i, j);
                let r = x.hypot(y);
                let rate = (next.values[id] - field.values[id]) / dt;
                let tol = 4.0 * field.h / (r * r) + 1e-9;
                assert!(
                    (rate - 1.0 / r).abs() <= tol,
                    "rate {rate} vs c/r = {} at r = {r}",
                    1.0 / r
                );
            }
        }
    }

    #[test]
    fn shrinking_circle_tracks_the_exact_law() {
        let samples = run_shrinking_circle(1.0, 1.3, 128, 0.5, 1e-6, 8).unwrap();
        assert_eq!(samples.len(), 8);
        for &(t, measured, exact) in &samples {
            assert!(
                (measured - exact).abs() / exact <= 0.02,
                "at t = {t}: R = {measured} vs exact {exact}"
            );
        }
    }

    #[test]
    fn extraction_without_zero_level_errors() {
        let field = LevelSetField::from_fn(0.5, 2.0, 48, 0.0, |x, y| x.hypot(y) + 1.0).unwrap();
        let err = extract_zero_level(&field).unwrap_err();
        assert!(matches!(err, crate::error::Error::EmptyContour));
    }

    #[test]
    fn annulus_outside_profile_range_is_rejected() {
        let err = init_from_profile(&profile(|_| 0.0), 0.05, 4.0, 64).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
        let err = init_from_profile(&profile(|_| 0.0), 0.5, 7.0, 64).unwrap_err();
        assert!(matches!(err, Error::Range(_)));
    }
}

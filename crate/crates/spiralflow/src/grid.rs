//! Domain types: physical parameters, 1D grids, sampled profiles, spiral
//! curves, and the change of coordinates between the polar radius `r` and the
//! logarithmic variable `x = ln r`.

use crate::error::{Error, Result};
use crate::interp::MonotoneCubic;
use serde::Serialize;

/// Physical driving constant and compatibility radius.
///
/// `c` is the constant forcing in `V_n = c + kappa` (any sign); `r0 > 0` is
/// the radius below which the compatibility condition `|c + kappa| <= C r`
/// is checked.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Params {
    pub c: f64,
    pub r0: f64,
}

impl Params {
    pub fn new(c: f64) -> Result<Self> {
        Self::with_r0(c, 1.0)
    }

    pub fn with_r0(c: f64, r0: f64) -> Result<Self> {
        if !c.is_finite() {
            return Err(Error::Domain(format!("driving constant c = {c} must be finite")));
        }
        if !(r0 > 0.0) || !r0.is_finite() {
            return Err(Error::Domain(format!("compatibility radius r0 = {r0} must be positive")));
        }
        Ok(Params { c, r0 })
    }
}

/// Which coordinate a 1D grid discretizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CoordKind {
    /// polar radius `r >= 0`
    PolarR,
    /// logarithmic variable `x = ln r`
    LogX,
}

/// Uniform 1D grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid1D {
    coord: CoordKind,
    lo: f64,
    hi: f64,
    n: usize,
}

impl Grid1D {
    pub fn polar(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if lo < 0.0 {
            return Err(Error::Domain(format!("polar grid lower bound {lo} must be >= 0")));
        }
        Self::build(CoordKind::PolarR, lo, hi, n)
    }

    pub fn log(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Self::build(CoordKind::LogX, lo, hi, n)
    }

    fn build(coord: CoordKind, lo: f64, hi: f64, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Domain(format!("grid bounds [{lo}, {hi}] must be finite with lo < hi")));
        }
        if n < 3 {
            return Err(Error::Domain(format!("grid needs n >= 3 nodes, got {n}")));
        }
        Ok(Grid1D { coord, lo, hi, n })
    }

    pub fn coord(&self) -> CoordKind {
        self.coord
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.hi - self.lo) / (self.n - 1) as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        debug_assert!(i < self.n);
        self.lo + self.spacing() * i as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }

    /// True for a polar grid whose first node sits exactly at the origin.
    pub fn includes_origin(&self) -> bool {
        self.coord == CoordKind::PolarR && self.lo == 0.0
    }

    /// Refined copy with `factor`-times finer spacing (same endpoints).
    pub fn refine(&self, factor: usize) -> Grid1D {
        Grid1D {
            coord: self.coord,
            lo: self.lo,
            hi: self.hi,
            n: (self.n - 1) * factor.max(1) + 1,
        }
    }
}

/// Time-stamped sampled profile on a [`Grid1D`].
///
/// `values[i]` is `u(t, node_i)` in the grid's own coordinate.
#[derive(Debug, Clone)]
pub struct ProfileState {
    pub grid: Grid1D,
    pub t: f64,
    pub values: Vec<f64>,
}

impl ProfileState {
    pub fn new(grid: Grid1D, t: f64, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::State(format!(
                "value count {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        if !(t >= 0.0) {
            return Err(Error::State(format!("time {t} must be >= 0")));
        }
        let state = ProfileState { grid, t, values };
        if !state.is_finite() {
            return Err(Error::State("profile contains non-finite values".into()));
        }
        Ok(state)
    }

    /// Sample a function of the grid coordinate at `t`.
    pub fn sample(grid: &Grid1D, t: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&z| f(z)).collect();
        Self::new(grid.clone(), t, values)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    /// Forward-difference gradients, length `n - 1`.
    pub fn forward_gradients(&self) -> Vec<f64> {
        let h = self.grid.spacing();
        self.values.windows(2).map(|w| (w[1] - w[0]) / h).collect()
    }
}

/// Sampled planar spiral `{ r e^{-i u(r)} }` at one time.
#[derive(Debug, Clone)]
pub struct SpiralCurve {
    pub t: f64,
    pub points: Vec<[f64; 2]>,
}

/// Cartesian sample points of the spiral for a profile in polar coordinates:
/// node `i` maps to `r_i (cos u_i, -sin u_i)`.
pub fn spiral_points(profile: &ProfileState) -> Result<SpiralCurve> {
    if profile.grid.coord() != CoordKind::PolarR {
        return Err(Error::State("spiral_points expects a polar-radius profile".into()));
    }
    let points = profile
        .values
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let r = profile.grid.node(i);
            [r * u.cos(), -r * u.sin()]
        })
        .collect();
    Ok(SpiralCurve { t: profile.t, points })
}

/// Resample a polar profile onto a logarithmic grid: `u(x) = ubar(e^x)`.
///
/// The source grid must exclude the origin and cover the image of the target
/// interval; values are moved with monotone cubic interpolation.
pub fn to_log(profile: &ProfileState, x_lo: f64, x_hi: f64, n: usize) -> Result<ProfileState> {
    if profile.grid.coord() != CoordKind::PolarR {
        return Err(Error::State("to_log expects a polar-radius profile".into()));
    }
    if profile.grid.lo() <= 0.0 {
        return Err(Error::Range("to_log needs a source grid with lo > 0 (origin excluded)".into()));
    }
    let target = Grid1D::log(x_lo, x_hi, n)?;
    let (r_min, r_max) = (x_lo.exp(), x_hi.exp());
    let tol = 1e-12 * (1.0 + profile.grid.hi().abs());
    if r_min < profile.grid.lo() - tol || r_max > profile.grid.hi() + tol {
        return Err(Error::Range(format!(
            "target radii [{r_min:.6e}, {r_max:.6e}] fall outside source range [{:.6e}, {:.6e}]",
            profile.grid.lo(),
            profile.grid.hi()
        )));
    }
    let interp = MonotoneCubic::fit_uniform(profile.grid.lo(), profile.grid.spacing(), &profile.values);
    ProfileState::sample(&target, profile.t, |x| interp.eval(x.exp()))
}

/// Resample a logarithmic profile onto a polar grid: `ubar(r) = u(ln r)`.
pub fn to_polar(profile: &ProfileState, r_lo: f64, r_hi: f64, n: usize) -> Result<ProfileState> {
    if profile.grid.coord() != CoordKind::LogX {
        return Err(Error::State("to_polar expects a log-coordinate profile".into()));
    }
    if r_lo <= 0.0 {
        return Err(Error::Range("to_polar target must have r_lo > 0".into()));
    }
    let target = Grid1D::polar(r_lo, r_hi, n)?;
    let (x_min, x_max) = (r_lo.ln(), r_hi.ln());
    let tol = 1e-12 * (1.0 + profile.grid.hi().abs());
    if x_min < profile.grid.lo() - tol || x_max > profile.grid.hi() + tol {
        return Err(Error::Range(format!(
            "target log-range [{x_min:.6e}, {x_max:.6e}] falls outside source range [{:.6e}, {:.6e}]",
            profile.grid.lo(),
            profile.grid.hi()
        )));
    }
    let interp = MonotoneCubic::fit_uniform(profile.grid.lo(), profile.grid.spacing(), &profile.values);
    ProfileState::sample(&target, profile.t, |r| interp.eval(r.ln()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn polar_profile(lo: f64, hi: f64, n: usize, f: impl Fn(f64) -> f64) -> ProfileState {
        let grid = Grid1D::polar(lo, hi, n).unwrap();
        ProfileState::sample(&grid, 0.0, f).unwrap()
    }

    #[test]
    fn to_log_identity_profile_at_r_one() {
        // ubar(r) = r on [1/e, e]: u(0) = ubar(1) = 1
        let p = polar_profile(1.0 / E, E, 201, |r| r);
        let q = to_log(&p, -0.5, 0.5, 101).unwrap();
        let mid = q.values[50];
        assert!((mid - 1.0).abs() < 1e-6, "u(0) = {mid}");
    }

    #[test]
    fn to_log_maps_log_profile_to_linear() {
        let p = polar_profile(0.2, 8.0, 400, |r| r.ln());
        let q = to_log(&p, -1.0, 2.0, 61).unwrap();
        for (i, &v) in q.values.iter().enumerate() {
            let x = q.grid.node(i);
            assert!((v - x).abs() < 2e-5, "u({x}) = {v}");
        }
    }

    #[test]
    fn to_log_quadratic_example() {
        // ubar(r) = r^2 on [0.5, 2]: u(ln 1.5) = 2.25 up to interpolation error
        let p = polar_profile(0.5, 2.0, 301, |r| r * r);
        let q = to_log(&p, (0.6f64).ln(), (1.9f64).ln(), 257);
        let q = q.unwrap();
        let x_query = (1.5f64).ln();
        let i = ((x_query - q.grid.lo()) / q.grid.spacing()).round() as usize;
        let x_near = q.grid.node(i);
        assert!((q.values[i] - x_near.exp().powi(2)).abs() < 1e-4);
    }

    #[test]
    fn to_log_rejects_out_of_range_target() {
        let p = polar_profile(0.5, 2.0, 51, |r| r);
        let err = to_log(&p, -2.0, 0.5, 11).unwrap_err();
        assert!(matches!(err, Error::Range(_)), "{err}");
    }

    #[test]
    fn to_polar_linear_and_constant_examples() {
        let grid = Grid1D::log(-1.0, 1.0, 201).unwrap();
        // u(x) = x -> ubar(r) = ln r
        let p = ProfileState::sample(&grid, 0.0, |x| x).unwrap();
        let q = to_polar(&p, 0.5, 2.5, 41).unwrap();
        for (i, &v) in q.values.iter().enumerate() {
            assert!((v - q.grid.node(i).ln()).abs() < 1e-6);
        }
        // u = 0 -> ubar = 0
        let p0 = ProfileState::sample(&grid, 0.0, |_| 0.0).unwrap();
        let q0 = to_polar(&p0, 0.5, 2.5, 41).unwrap();
        assert!(q0.values.iter().all(|&v| v.abs() < 1e-13));
    }

    #[test]
    fn to_polar_exponential_example() {
        // u(x) = e^x on [-1, 1] means ubar(r) = u(ln r) = r, so the value e is
        // attained at radius e (direct evaluation oracle).
        let grid = Grid1D::log(-1.0, 1.0, 401).unwrap();
        let p = ProfileState::sample(&grid, 0.0, |x| x.exp()).unwrap();
        let q = to_polar(&p, 0.5, E, 301).unwrap();
        for (i, &v) in q.values.iter().enumerate() {
            assert!((v - q.grid.node(i)).abs() < 1e-6, "ubar(r)=r for u=e^x");
        }
        assert!((q.values[300] - E).abs() < 1e-6, "ubar(e) = e");
    }

    #[test]
    fn round_trip_second_order_under_refinement() {
        // to_polar(to_log(P)) back on the original nodes: order >= 1.9 over 3 levels
        let mut errs = Vec::new();
        for lvl in 0..3 {
            let n = 100 * (1 << lvl) + 1;
            let p = polar_profile(0.5, 4.0, n, |r| (1.0 + r).ln() + 0.3 * r);
            let logd = to_log(&p, (0.55f64).ln(), (3.9f64).ln(), 2 * n).unwrap();
            let back = to_polar(&logd, 0.6, 3.8, n).unwrap();
            let mut e: f64 = 0.0;
            for (i, &v) in back.values.iter().enumerate() {
                let r = back.grid.node(i);
                e = e.max((v - ((1.0 + r).ln() + 0.3 * r)).abs());
            }
            errs.push(e);
        }
        let order = (errs[0] / errs[2]).log2() / 2.0;
        assert!(order >= 1.9, "round-trip order {order:.2}, errors {errs:?}");
    }

    #[test]
    fn spiral_points_flat_ray_and_rotation() {
        let grid = Grid1D::polar(0.0, 2.0, 3).unwrap();
        let p = ProfileState::sample(&grid, 0.0, |_| 0.0).unwrap();
        let s = spiral_points(&p).unwrap();
        assert_eq!(s.points.len(), 3);
        for (i, pt) in s.points.iter().enumerate() {
            assert!((pt[0] - i as f64).abs() < 1e-15 && pt[1].abs() < 1e-15);
        }
        // constant angle pi/2: points on the negative-y axis
        let q = ProfileState::sample(&grid, 0.0, |_| PI / 2.0).unwrap();
        let s = spiral_points(&q).unwrap();
        for (i, pt) in s.points.iter().enumerate() {
            let r = i as f64;
            assert!(pt[0].abs() < 1e-12 && (pt[1] + r).abs() < 1e-12);
        }
    }

    #[test]
    fn spiral_points_archimedean_node() {
        // ubar(r) = r: the node at r = pi maps to (pi cos pi, -pi sin pi) = (-pi, 0)
        let grid = Grid1D::polar(0.0, PI, 5).unwrap();
        let p = ProfileState::sample(&grid, 0.0, |r| r).unwrap();
        let s = spiral_points(&p).unwrap();
        let last = s.points.last().unwrap();
        assert!((last[0] + PI).abs() < 1e-12 && last[1].abs() < 1e-12);
    }

    #[test]
    fn spiral_points_preserve_radius_exactly() {
        let grid = Grid1D::polar(0.0, 5.0, 41).unwrap();
        let p = ProfileState::sample(&grid, 0.0, |r| 0.7 * r + (1.0 + r).ln()).unwrap();
        let s = spiral_points(&p).unwrap();
        for (i, pt) in s.points.iter().enumerate() {
            let r = grid.node(i);
            assert!((pt[0].hypot(pt[1]) - r).abs() <= 4.0 * f64::EPSILON * (1.0 + r));
        }
    }

    #[test]
    fn grid_invariants_rejected() {
        assert!(Grid1D::polar(-0.1, 1.0, 10).is_err());
        assert!(Grid1D::polar(1.0, 1.0, 10).is_err());
        assert!(Grid1D::log(0.0, 1.0, 2).is_err());
        assert!(Params::with_r0(1.0, 0.0).is_err());
        assert!(Params::new(f64::NAN).is_err());
    }
}

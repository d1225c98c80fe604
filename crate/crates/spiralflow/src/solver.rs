//! Explicit monotone upwind time steppers for the spiral equation in polar
//! and logarithmic coordinates, a generalized `(b, sigma)` scheme, CFL
//! control, and origin/far-field boundary handling.
//!
//! Discretization of `u_t = Fbar(r, u_r, u_rr)/r`: each term is evaluated on
//! the one-sided difference that makes the update non-decreasing in every
//! neighboring value, using the exact regrouping
//!
//! ```text
//! Fbar/r = (c + 2q)/r                                   forward (coefficient 2/r > 0)
//!        + (c/r)(sqrt(1+(r q_a)^2) - 1)                 one-sided by the sign of c
//!        + (c/r)(sqrt(1+(r q_b)^2) - 1)
//!        - r q^3/(1+(rq)^2)                             backward (derivative <= 0)
//!        + [arctan(r q+) - arctan(r q-)]/(r h)          conservative diffusion
//! ```
//!
//! so the scheme satisfies a discrete comparison principle under the CFL
//! bound while staying exactly consistent with the continuous right-hand
//! side (`(c+2q)/r` kept as one fraction also guards the near-origin
//! cancellation `c + 2 u_r -> 0`). At `r = 0` the embedded Neumann condition
//! is enforced by a ghost node with `u_r(0) = -c/2`, which yields the origin
//! update `u_t(0) = 3 u_rr(0+)`.

use crate::error::{Error, Result};
use crate::grid::{CoordKind, Grid1D, Params, ProfileState};
use crate::pde::{self, GenCoeffs, GradientFlux};
use crate::profile::InitialProfile;
use serde::Serialize;

/// Treatment of the attached end of the domain.
///
/// On a polar grid containing `r = 0` the ghost-Neumann origin rule applies;
/// on a logarithmic grid the left boundary imposes the asymptotic slope
/// `u_x = q0 e^x` by a ghost node. The two variants name the same embedded
/// condition seen from either coordinate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OriginBoundary {
    GhostNeumann,
    LogAsymptotic,
}

/// Far-field treatment at the last node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FarBoundary {
    /// ghost node by linear extrapolation: zero second difference at the end
    LinearExtrapolation,
    /// ghost node with the slope frozen at its initial value
    FrozenInitialSlope,
}

/// Scheme controls for one run.
#[derive(Debug, Clone, Serialize)]
pub struct SchemeConfig {
    /// fraction of the stability bound actually used, in `(0, 1]`
    pub cfl_safety: f64,
    pub t_end: f64,
    pub boundary_origin: OriginBoundary,
    pub boundary_far: FarBoundary,
    /// record every k-th step (the initial and final states always are)
    pub record_every: usize,
    /// slope used by [`FarBoundary::FrozenInitialSlope`]; `run` fills it from
    /// the initial state when absent
    pub frozen_far_slope: Option<f64>,
    /// same for the left boundary of an origin-free polar grid
    pub frozen_near_slope: Option<f64>,
}

impl SchemeConfig {
    pub fn new(t_end: f64) -> Result<Self> {
        let cfg = SchemeConfig {
            cfl_safety: 0.5,
            t_end,
            boundary_origin: OriginBoundary::GhostNeumann,
            boundary_far: FarBoundary::LinearExtrapolation,
            record_every: 1,
            frozen_far_slope: None,
            frozen_near_slope: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_safety(mut self, safety: f64) -> Result<Self> {
        self.cfl_safety = safety;
        self.validate()?;
        Ok(self)
    }

    pub fn with_record_every(mut self, k: usize) -> Result<Self> {
        self.record_every = k;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::Domain(format!(
                "cfl_safety = {} must lie in (0, 1]",
                self.cfl_safety
            )));
        }
        if !(self.t_end > 0.0) || !self.t_end.is_finite() {
            return Err(Error::Domain(format!("t_end = {} must be positive", self.t_end)));
        }
        if self.record_every == 0 {
            return Err(Error::Domain("record_every must be >= 1".into()));
        }
        Ok(())
    }
}

/// Ordered snapshots of one run plus the accepted step sizes.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub snapshots: Vec<ProfileState>,
    pub dt_history: Vec<f64>,
}

impl Trajectory {
    pub fn new() -> Self {
        Trajectory::default()
    }

    pub fn push(&mut self, state: ProfileState) -> Result<()> {
        if let Some(last) = self.snapshots.last() {
            if state.t <= last.t {
                return Err(Error::State(format!(
                    "snapshot times must increase: {} after {}",
                    state.t, last.t
                )));
            }
            if state.grid != last.grid {
                return Err(Error::State("all snapshots must share one grid".into()));
            }
        }
        self.snapshots.push(state);
        Ok(())
    }

    pub fn last(&self) -> &ProfileState {
        self.snapshots.last().expect("trajectory holds at least the initial state")
    }
}

#[inline]
fn phat(p: f64) -> f64 {
    p / (1.0 + p * p).sqrt()
}

/// `|dW/dq|` for `W(q) = -r q^3/(1+(rq)^2)`.
#[inline]
fn w_prime_abs(r: f64, q: f64) -> f64 {
    let p = r * q;
    let s = 1.0 + p * p;
    r * q * q * (3.0 + p * p) / (s * s)
}

/// Monotone advective flux of the polar equation at radius `r > 0`.
#[inline]
fn polar_adv(c: f64, r: f64, qm: f64, qp: f64) -> f64 {
    let (qa, qb) = if c >= 0.0 { (qp.max(0.0), qm.min(0.0)) } else { (qm.max(0.0), qp.min(0.0)) };
    let (pa, pb) = (r * qa, r * qb);
    let forcing = c * r
        * (qa * qa / (1.0 + (1.0 + pa * pa).sqrt()) + qb * qb / (1.0 + (1.0 + pb * pb).sqrt()));
    let pm = r * qm;
    let w = -r * qm * qm * qm / (1.0 + pm * pm);
    (c + 2.0 * qp) / r + forcing + w
}

/// Conservative diffusion flux `[arctan(r q+) - arctan(r q-)]/(r h)`.
#[inline]
fn polar_diff(r: f64, qm: f64, qp: f64, h: f64) -> f64 {
    pde::atan_diff(r * qp, r * qm) / (r * h)
}

/// One-sided gradients at a boundary node per the far-field rule.
#[inline]
fn far_gradients(rule: FarBoundary, inner: f64, frozen: Option<f64>) -> (f64, f64) {
    match rule {
        FarBoundary::LinearExtrapolation => (inner, inner),
        FarBoundary::FrozenInitialSlope => (inner, frozen.unwrap_or(inner)),
    }
}

/// Per-node CFL bound: `min(h^2 (1 + (rq)^2)/2, h/(|a| + tiny))` with the
/// gradient taken one-sided and `|a|` a rigorous bound on the advective
/// coefficient at this node.
#[inline]
fn polar_node_bound(c: f64, r: f64, qm: f64, qp: f64, h: f64) -> f64 {
    let (pm, pp) = (r * qm, r * qp);
    let diffusive = 0.5 * h * h * (1.0 + (pm * pm).min(pp * pp));
    let a = 2.0 / r + c.abs() * (phat(pm).abs() + phat(pp).abs()) + w_prime_abs(r, qm);
    let advective = h / (a + 1e-300);
    diffusive.min(advective)
}

/// CFL-stable step size for the current state (already scaled by
/// `cfg.cfl_safety`). Dispatches on the grid coordinate; logarithmic grids
/// use the spiral coefficients.
pub fn cfl_dt(state: &ProfileState, params: &Params, cfg: &SchemeConfig) -> Result<f64> {
    match state.grid.coord() {
        CoordKind::PolarR => cfl_dt_polar(state, params, cfg),
        CoordKind::LogX => cfl_dt_general(state, &GenCoeffs::spiral(params), cfg),
    }
}

fn cfl_dt_polar(state: &ProfileState, params: &Params, cfg: &SchemeConfig) -> Result<f64> {
    if state.grid.coord() != CoordKind::PolarR {
        return Err(Error::State("polar CFL needs a polar grid".into()));
    }
    if !state.is_finite() {
        return Err(Error::State("CFL of a non-finite state".into()));
    }
    let grid = &state.grid;
    let (n, h, c) = (grid.len(), grid.spacing(), params.c);
    let y = &state.values;
    let mut bound = f64::INFINITY;
    for i in 1..n - 1 {
        let r = grid.node(i);
        let qm = (y[i] - y[i - 1]) / h;
        let qp = (y[i + 1] - y[i]) / h;
        bound = bound.min(polar_node_bound(c, r, qm, qp, h));
    }
    if grid.includes_origin() {
        // origin update u_t(0) = 3 u_rr(0): diffusion coefficient 3
        bound = bound.min(h * h / 6.0);
    } else {
        let qp = (y[1] - y[0]) / h;
        let (qp0, qm0) = far_gradients(cfg.boundary_far, qp, cfg.frozen_near_slope);
        bound = bound.min(polar_node_bound(c, grid.node(0), qm0, qp0, h));
    }
    let inner = (y[n - 1] - y[n - 2]) / h;
    let (qm, qp) = far_gradients(cfg.boundary_far, inner, cfg.frozen_far_slope);
    bound = bound.min(polar_node_bound(c, grid.node(n - 1), qm, qp, h));
    Ok(cfg.cfl_safety * bound)
}

/// CFL-stable step size for the generalized logarithmic scheme.
pub fn cfl_dt_general(state: &ProfileState, coeffs: &GenCoeffs, cfg: &SchemeConfig) -> Result<f64> {
    if state.grid.coord() != CoordKind::LogX {
        return Err(Error::State("generalized scheme runs on logarithmic grids".into()));
    }
    if !state.is_finite() {
        return Err(Error::State("CFL of a non-finite state".into()));
    }
    let grid = &state.grid;
    let (n, h) = (grid.len(), grid.spacing());
    let y = &state.values;
    let node_bound = |x: f64, pm: f64, pp: f64| -> f64 {
        let e2x = (2.0 * x).exp();
        let em2x = 1.0 / e2x;
        let sig = coeffs.sigma(pm).powi(2).max(coeffs.sigma(pp).powi(2));
        let diffusive = 0.5 * h * h * e2x / sig.max(1e-300);
        let a = match coeffs.flux {
            GradientFlux::ForcedDrift { c, drift } => {
                c.abs() * (-x).exp() * (phat(pm).abs() + phat(pp).abs()) + drift.abs() * em2x
            }
            GradientFlux::LinearDrift { drift } => drift.abs() * em2x,
        };
        diffusive.min(h / (a + 1e-300))
    };
    let mut bound = f64::INFINITY;
    for i in 1..n - 1 {
        let pm = (y[i] - y[i - 1]) / h;
        let pp = (y[i + 1] - y[i]) / h;
        bound = bound.min(node_bound(grid.node(i), pm, pp));
    }
    // left boundary: ghost with the asymptotic slope
    let x0 = grid.node(0);
    let pp0 = (y[1] - y[0]) / h;
    let pm0 = 2.0 * coeffs.origin_slope * x0.exp() - pp0;
    bound = bound.min(node_bound(x0, pm0, pp0));
    let inner = (y[n - 1] - y[n - 2]) / h;
    let (pm, pp) = far_gradients(cfg.boundary_far, inner, cfg.frozen_far_slope);
    bound = bound.min(node_bound(grid.node(n - 1), pm, pp));
    Ok(cfg.cfl_safety * bound)
}

fn check_step_preconditions(state: &ProfileState, dt: f64, bound: f64) -> Result<()> {
    if !state.is_finite() {
        return Err(Error::State("cannot step a non-finite state".into()));
    }
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Domain(format!("dt = {dt} must be positive")));
    }
    if dt > bound * (1.0 + 1e-9) {
        return Err(Error::RejectedStep { dt, bound });
    }
    Ok(())
}

/// One forward-Euler step of the polar equation `r u_t = Fbar(r, u_r, u_rr)`.
///
/// Grids starting at `r = 0` get the origin rule `u_t(0) = 3 u_rr(0+)` with
/// a ghost node enforcing `u_r(0) = -c/2`.
pub fn step_polar(
    state: &ProfileState,
    dt: f64,
    params: &Params,
    cfg: &SchemeConfig,
) -> Result<ProfileState> {
    if state.grid.coord() != CoordKind::PolarR {
        return Err(Error::State("step_polar needs a polar grid".into()));
    }
    let bound = cfl_dt_polar(state, params, cfg)?;
    check_step_preconditions(state, dt, bound)?;
    let grid = state.grid.clone();
    let (n, h, c) = (grid.len(), grid.spacing(), params.c);
    let y = &state.values;
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        let r = grid.node(i);
        let qm = (y[i] - y[i - 1]) / h;
        let qp = (y[i + 1] - y[i]) / h;
        out[i] = y[i] + dt * (polar_adv(c, r, qm, qp) + polar_diff(r, qm, qp, h));
    }
    if grid.includes_origin() {
        // ghost node u_{-1} = u_1 + c h enforces u_r(0) = -c/2;
        // second difference gives u_t(0) = 3 (2 u_1 - 2 u_0 + c h)/h^2
        out[0] = y[0] + dt * 3.0 * (2.0 * y[1] - 2.0 * y[0] + c * h) / (h * h);
    } else {
        let inner = (y[1] - y[0]) / h;
        let (qp0, qm0) = far_gradients(cfg.boundary_far, inner, cfg.frozen_near_slope);
        let r = grid.node(0);
        out[0] = y[0] + dt * (polar_adv(c, r, qm0, qp0) + polar_diff(r, qm0, qp0, h));
    }
    {
        let inner = (y[n - 1] - y[n - 2]) / h;
        let (qm, qp) = far_gradients(cfg.boundary_far, inner, cfg.frozen_far_slope);
        let r = grid.node(n - 1);
        out[n - 1] = y[n - 1] + dt * (polar_adv(c, r, qm, qp) + polar_diff(r, qm, qp, h));
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::Diverged { t: state.t });
    }
    ProfileState::new(grid, state.t + dt, out)
}

/// One forward-Euler step of the generalized logarithmic equation
/// `u_t = e^{-x} b(e^{-x} u_x, u_x) + e^{-2x} sigma^2(u_x) u_xx`.
pub fn step_general(
    state: &ProfileState,
    dt: f64,
    coeffs: &GenCoeffs,
    cfg: &SchemeConfig,
) -> Result<ProfileState> {
    let bound = cfl_dt_general(state, coeffs, cfg)?;
    check_step_preconditions(state, dt, bound)?;
    let grid = state.grid.clone();
    let (n, h) = (grid.len(), grid.spacing());
    let y = &state.values;
    let rhs = |x: f64, pm: f64, pp: f64| -> f64 {
        let emx = (-x).exp();
        let em2x = emx * emx;
        let adv = match coeffs.flux {
            GradientFlux::ForcedDrift { c, drift } => {
                let (pa, pb) =
                    if c >= 0.0 { (pp.max(0.0), pm.min(0.0)) } else { (pm.max(0.0), pp.min(0.0)) };
                let forcing =
                    c * emx * ((1.0 + pa * pa).sqrt() + (1.0 + pb * pb).sqrt() - 1.0);
                let up = if drift >= 0.0 { pp } else { pm };
                forcing + em2x * drift * up
            }
            GradientFlux::LinearDrift { drift } => {
                em2x * drift * (if drift >= 0.0 { pp } else { pm })
            }
        };
        adv + em2x * (coeffs.sigma_sq_prim(pp) - coeffs.sigma_sq_prim(pm)) / h
    };
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        let pm = (y[i] - y[i - 1]) / h;
        let pp = (y[i + 1] - y[i]) / h;
        out[i] = y[i] + dt * rhs(grid.node(i), pm, pp);
    }
    {
        // asymptotic ghost: u_x(x_lo) = q0 e^{x_lo} via u_{-1} = u_1 - 2 h s
        let x0 = grid.node(0);
        let pp = (y[1] - y[0]) / h;
        let pm = 2.0 * coeffs.origin_slope * x0.exp() - pp;
        out[0] = y[0] + dt * rhs(x0, pm, pp);
    }
    {
        let inner = (y[n - 1] - y[n - 2]) / h;
        let (pm, pp) = far_gradients(cfg.boundary_far, inner, cfg.frozen_far_slope);
        out[n - 1] = y[n - 1] + dt * rhs(grid.node(n - 1), pm, pp);
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::Diverged { t: state.t });
    }
    ProfileState::new(grid, state.t + dt, out)
}

/// One step of the spiral equation in logarithmic coordinates; this is the
/// generalized scheme wired with the spiral coefficients, so the two share
/// every stencil decision bit for bit.
pub fn step_log(
    state: &ProfileState,
    dt: f64,
    params: &Params,
    cfg: &SchemeConfig,
) -> Result<ProfileState> {
    step_general(state, dt, &GenCoeffs::spiral(params), cfg)
}

/// Sample an initial profile on a grid (log grids evaluate at `r = e^x`).
pub fn sample_initial(initial: &InitialProfile, grid: &Grid1D) -> Result<ProfileState> {
    let state = match grid.coord() {
        CoordKind::PolarR => ProfileState::sample(grid, 0.0, |r| initial.eval(r)),
        CoordKind::LogX => ProfileState::sample(grid, 0.0, |x| initial.eval(x.exp())),
    }?;
    Ok(state)
}

const MAX_STEPS: usize = 5_000_000;

/// Adaptive explicit integration to `cfg.t_end`, recording every
/// `cfg.record_every`-th step plus the initial and final states.
pub fn run(
    initial: &InitialProfile,
    grid: &Grid1D,
    params: &Params,
    cfg: &SchemeConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    if !initial.bounds_hold_on(grid) {
        return Err(Error::Precondition(format!(
            "initial profile `{}` violates its declared gradient bounds on the grid",
            initial.name
        )));
    }
    let mut state = sample_initial(initial, grid)?;
    let mut cfg = cfg.clone();
    if cfg.boundary_far == FarBoundary::FrozenInitialSlope {
        let h = grid.spacing();
        let n = grid.len();
        if cfg.frozen_far_slope.is_none() {
            cfg.frozen_far_slope = Some((state.values[n - 1] - state.values[n - 2]) / h);
        }
        if cfg.frozen_near_slope.is_none() && !grid.includes_origin() {
            cfg.frozen_near_slope = Some((state.values[1] - state.values[0]) / h);
        }
    }
    let mut traj = Trajectory::new();
    traj.push(state.clone())?;
    let mut steps = 0usize;
    while state.t < cfg.t_end * (1.0 - 1e-12) {
        let bound = match grid.coord() {
            CoordKind::PolarR => cfl_dt_polar(&state, params, &cfg)?,
            CoordKind::LogX => cfl_dt_general(&state, &GenCoeffs::spiral(params), &cfg)?,
        };
        let dt = bound.min(cfg.t_end - state.t);
        state = match grid.coord() {
            CoordKind::PolarR => step_polar(&state, dt, params, &cfg)?,
            CoordKind::LogX => step_general(&state, dt, &GenCoeffs::spiral(params), &cfg)?,
        };
        traj.dt_history.push(dt);
        steps += 1;
        let done = state.t >= cfg.t_end * (1.0 - 1e-12);
        if steps % cfg.record_every == 0 || done {
            traj.push(state.clone())?;
        }
        if steps >= MAX_STEPS {
            return Err(Error::State(format!("step budget {MAX_STEPS} exhausted at t = {}", state.t)));
        }
    }
    Ok(traj)
}

/// Integrate the generalized scheme from a closure `u0(x)` on a log grid.
pub fn run_general(
    u0: impl Fn(f64) -> f64,
    grid: &Grid1D,
    coeffs: &GenCoeffs,
    cfg: &SchemeConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    let mut state = ProfileState::sample(grid, 0.0, u0)?;
    let mut cfg = cfg.clone();
    if cfg.boundary_far == FarBoundary::FrozenInitialSlope && cfg.frozen_far_slope.is_none() {
        let (n, h) = (grid.len(), grid.spacing());
        cfg.frozen_far_slope = Some((state.values[n - 1] - state.values[n - 2]) / h);
    }
    let mut traj = Trajectory::new();
    traj.push(state.clone())?;
    let mut steps = 0usize;
    while state.t < cfg.t_end * (1.0 - 1e-12) {
        let bound = cfl_dt_general(&state, coeffs, &cfg)?;
        let dt = bound.min(cfg.t_end - state.t);
        state = step_general(&state, dt, coeffs, &cfg)?;
        traj.dt_history.push(dt);
        steps += 1;
        let done = state.t >= cfg.t_end * (1.0 - 1e-12);
        if steps % cfg.record_every == 0 || done {
            traj.push(state.clone())?;
        }
        if steps >= MAX_STEPS {
            return Err(Error::State("step budget exhausted".into()));
        }
    }
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn params(c: f64) -> Params {
        Params::new(c).unwrap()
    }

    fn cfg(t_end: f64) -> SchemeConfig {
        SchemeConfig::new(t_end).unwrap()
    }

    #[test]
    fn cfl_flat_state_matches_diffusive_bound() {
        // flat state, h = 0.01, safety 0.5: dt = 0.5 h^2/2 = 2.5e-5
        let grid = Grid1D::polar(1.0, 3.0, 201).unwrap();
        let state = ProfileState::sample(&grid, 0.0, |_| 0.0).unwrap();
        let dt = cfl_dt(&state, &params(1.0), &cfg(1.0)).unwrap();
        assert!((dt - 2.5e-5).abs() < 1e-18, "dt = {dt:e}");
        // safety 1 doubles it
        let dt2 = cfl_dt(&state, &params(1.0), &cfg(1.0).with_safety(1.0).unwrap()).unwrap();
        assert!((dt2 - 2.0 * dt).abs() < 1e-18);
    }

    #[test]
    fn cfl_advective_bound_binds_for_steep_states() {
        // coarse grid so the advective limit undercuts the diffusive one
        let grid = Grid1D::polar(4.0, 10.0, 7).unwrap();
        let h = grid.spacing();
        let p = params(3.0);
        let flat = ProfileState::sample(&grid, 0.0, |_| 0.0).unwrap();
        let steep = ProfileState::sample(&grid, 0.0, |r| 30.0 * r).unwrap();
        let dt_flat = cfl_dt(&flat, &p, &cfg(1.0)).unwrap();
        let dt_steep = cfl_dt(&steep, &p, &cfg(1.0)).unwrap();
        assert!((dt_flat - 0.5 * h * h / 2.0).abs() < 1e-15);
        assert!(dt_steep < 0.5 * dt_flat, "steep {dt_steep} vs flat {dt_flat}");
        // direct formula evaluation: the advective bound at the worst node
        let mut a_max: f64 = 0.0;
        for i in 0..grid.len() {
            let r = grid.node(i);
            let q = 30.0;
            let pp = r * q;
            a_max = a_max.max(2.0 / r + 3.0 * 2.0 * (pp / (1.0 + pp * pp).sqrt()).abs()
                + w_prime_abs(r, q));
        }
        assert!((dt_steep - 0.5 * h / a_max).abs() < 1e-12 * dt_steep);
    }

    #[test]
    fn rejected_step_and_state_errors() {
        let grid = Grid1D::polar(0.0, 5.0, 101).unwrap();
        let state = ProfileState::sample(&grid, 0.0, |_| 0.0).unwrap();
        let p = params(1.0);
        let bound = cfl_dt(&state, &p, &cfg(1.0)).unwrap();
        let err = step_polar(&state, 10.0 * bound, &p, &cfg(1.0)).unwrap_err();
        assert!(matches!(err, Error::RejectedStep { .. }));
    }

    #[test]
    fn zero_forcing_flat_profile_is_steady() {
        let grid = Grid1D::polar(0.0, 10.0, 201).unwrap();
        let p = params(0.0);
        let traj = run(&InitialProfile::zero(), &grid, &p, &cfg(0.01)).unwrap();
        for s in &traj.snapshots {
            assert!(s.values.iter().all(|&v| v == 0.0), "flat state must not move");
        }
    }

    #[test]
    fn origin_update_matches_taylor_oracle() {
        // u0 = -r/2 + r^2 (compatible at 0 for c = 1, u_rr(0) = 2):
        // one step changes u(0) by exactly 3 * u_rr(0) * dt = 6 dt
        let grid = Grid1D::polar(0.0, 2.0, 101).unwrap();
        let p = params(1.0);
        let state = ProfileState::sample(&grid, 0.0, |r| -0.5 * r + r * r).unwrap();
        let dt = cfl_dt(&state, &p, &cfg(1.0)).unwrap();
        let next = step_polar(&state, dt, &p, &cfg(1.0)).unwrap();
        let delta = next.values[0] - state.values[0];
        assert!(
            (delta - 6.0 * dt).abs() <= 1e-12 * dt.max(1e-30),
            "origin increment {delta:e} vs 6 dt = {:e}",
            6.0 * dt
        );
    }

    #[test]
    fn single_step_is_monotone_nodewise() {
        // v <= w stays ordered after one shared step (outside the far node)
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for trial in 0..60 {
            let c = [-1.0, 0.0, 1.0][trial % 3];
            let p = params(c);
            let lo = if trial % 2 == 0 { 0.0 } else { 0.7 };
            let grid = Grid1D::polar(lo, 10.0, 120).unwrap();
            let mut v = Vec::with_capacity(120);
            let mut w = Vec::with_capacity(120);
            let mut acc_v: f64 = rng.gen_range(-1.0..1.0);
            let mut acc_w = acc_v + rng.gen_range(0.0..0.2);
            for _ in 0..120 {
                v.push(acc_v);
                w.push(acc_w);
                let h = grid.spacing();
                acc_v += rng.gen_range(-1.2..1.2) * h;
                acc_w = (acc_w + rng.gen_range(-1.2..1.2) * h).max(acc_v);
            }
            let sv = ProfileState::new(grid.clone(), 0.0, v).unwrap();
            let sw = ProfileState::new(grid.clone(), 0.0, w).unwrap();
            let scheme = cfg(1.0);
            let dt = cfl_dt(&sv, &p, &scheme)
                .unwrap()
                .min(cfl_dt(&sw, &p, &scheme).unwrap());
            let nv = step_polar(&sv, dt, &p, &scheme).unwrap();
            let nw = step_polar(&sw, dt, &p, &scheme).unwrap();
            for i in 0..grid.len() - 1 {
                assert!(
                    nv.values[i] <= nw.values[i] + 1e-12,
                    "trial {trial}: crossing {:e} at node {i}",
                    nv.values[i] - nw.values[i]
                );
            }
        }
    }

    #[test]
    fn log_step_is_general_step_with_spiral_coefficients() {
        let grid = Grid1D::log(-2.0, 1.5, 81).unwrap();
        let p = params(1.0);
        let state = ProfileState::sample(&grid, 0.0, |x| 0.3 * x.exp() + 0.1 * x.sin()).unwrap();
        let scheme = cfg(1.0);
        let dt = cfl_dt(&state, &p, &scheme).unwrap();
        let a = step_log(&state, dt, &p, &scheme).unwrap();
        let b = step_general(&state, dt, &GenCoeffs::spiral(&p), &scheme).unwrap();
        assert_eq!(a.values, b.values, "shared code path must agree bitwise");
    }

    #[test]
    fn log_left_boundary_cancellation() {
        // symbolic substitution of u_x = u_xx = -(c/2) e^x into F: the three
        // singular O(e^{-x}) terms cancel, leaving a remainder O(e^{x})
        let p = params(1.0);
        for i in 0..=60 {
            let x = -8.0 + 6.0 * i as f64 / 60.0;
            let slope = -0.5 * x.exp();
            let f = pde::eval_f_log(x, slope, slope, &p);
            assert!(
                f.abs() <= x.exp(),
                "cancellation failed at x = {x}: F = {f:e} vs scale {:e}",
                x.exp()
            );
        }
        // discretely, the ghost removes the singular parts: the boundary rate
        // is O(h e^{-x0}) (each raw term is O(e^{-x0})) and halves with h
        let mut rates = Vec::new();
        for &n in &[241usize, 481] {
            let grid = Grid1D::log(-6.0, 0.0, n).unwrap();
            let state = ProfileState::sample(&grid, 0.0, |x| -0.5 * x.exp()).unwrap();
            let scheme = cfg(1.0);
            let dt = cfl_dt(&state, &p, &scheme).unwrap();
            let next = step_log(&state, dt, &p, &scheme).unwrap();
            let rate0 = (next.values[0] - state.values[0]) / dt;
            let h = grid.spacing();
            let raw_scale = (-grid.lo()).exp();
            assert!(
                rate0.abs() <= h * raw_scale,
                "boundary rate {rate0:e} not reduced to O(h e^-x0) = {:e}",
                h * raw_scale
            );
            rates.push(rate0.abs());
        }
        assert!(rates[1] <= 0.7 * rates[0], "boundary rate must shrink with h: {rates:?}");
    }

    #[test]
    fn pure_diffusion_preserves_constants() {
        let grid = Grid1D::log(-1.0, 2.0, 61).unwrap();
        let coeffs = GenCoeffs::pure_diffusion();
        let traj = run_general(|_| 0.7, &grid, &coeffs, &cfg(0.01)).unwrap();
        for s in &traj.snapshots {
            assert!(s.values.iter().all(|&v| (v - 0.7).abs() < 1e-14));
        }
    }

    #[test]
    fn radial_heat_hump_decays_in_max_norm() {
        // discrete maximum principle for the n = 3 radial heat scheme
        let grid = Grid1D::log(-1.0, 2.0, 121).unwrap();
        let coeffs = GenCoeffs::radial_heat(3.0);
        let traj = run_general(
            |x| (-(x - 0.5) * (x - 0.5) / 0.08).exp(),
            &grid,
            &coeffs,
            &cfg(0.02).with_record_every(10).unwrap(),
        )
        .unwrap();
        let mut prev = f64::INFINITY;
        for s in &traj.snapshots {
            let m = s.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
            assert!(m <= prev + 1e-12, "max norm grew: {m} > {prev}");
            prev = m;
        }
        let first = traj.snapshots.first().unwrap();
        let last = traj.last();
        let m0 = first.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        let m1 = last.values.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        assert!(m1 < 0.95 * m0, "hump should decay measurably: {m0} -> {m1}");
    }

    #[test]
    fn sign_symmetry_of_runs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u0 = InitialProfile::random_lipschitz(&mut rng, 0.8);
        let grid = Grid1D::polar(0.0, 10.0, 201).unwrap();
        let scheme = cfg(0.01).with_record_every(20).unwrap();
        let a = run(&u0, &grid, &params(1.0), &scheme).unwrap();
        let b = run(&u0.negated(), &grid, &params(-1.0), &scheme).unwrap();
        assert_eq!(a.snapshots.len(), b.snapshots.len());
        for (sa, sb) in a.snapshots.iter().zip(&b.snapshots) {
            assert!((sa.t - sb.t).abs() < 1e-15);
            for (va, vb) in sa.values.iter().zip(&sb.values) {
                assert!((va + vb).abs() <= 1e-12, "asymmetry {va} vs {vb}");
            }
        }
    }

    #[test]
    fn log_constant_state_is_steady_without_forcing() {
        let grid = Grid1D::log(-2.0, 1.0, 61).unwrap();
        let state = ProfileState::sample(&grid, 0.0, |_| 0.4).unwrap();
        let p = params(0.0);
        let scheme = cfg(1.0);
        let dt = cfl_dt(&state, &p, &scheme).unwrap();
        let next = step_log(&state, dt, &p, &scheme).unwrap();
        assert_eq!(state.values, next.values, "c = 0 constant state must not move");
    }

    #[test]
    fn gradient_max_norm_nonincreasing_without_forcing() {
        // with c = 0 and Lipschitz data, the discrete gradient max norm
        // never rises above its initial value (1e-6 drift allowance)
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let u0 = InitialProfile::random_lipschitz(&mut rng, 0.8);
        let grid = Grid1D::polar(0.0, 10.0, 400).unwrap();
        let scheme = cfg(0.05).with_record_every(25).unwrap();
        let traj = run(&u0, &grid, &params(0.0), &scheme).unwrap();
        let max_grad = |s: &ProfileState| -> f64 {
            s.forward_gradients()
                .iter()
                .enumerate()
                .filter(|(i, _)| grid.node(i + 1) <= 8.0)
                .fold(0.0f64, |m, (_, g)| m.max(g.abs()))
        };
        let mut prev = max_grad(&traj.snapshots[0]);
        for s in traj.snapshots.iter().skip(1) {
            let m = max_grad(s);
            assert!(m <= prev + 1e-6, "gradient max norm rose: {m} > {prev}");
            prev = m;
        }
    }

    #[test]
    fn constant_shift_invariance() {
        // the equation has no zeroth-order term: shifted data evolve shifted
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u0 = InitialProfile::random_lipschitz(&mut rng, 0.5);
        let grid = Grid1D::polar(0.0, 8.0, 161).unwrap();
        let scheme = cfg(0.005).with_record_every(50).unwrap();
        let p = params(1.0);
        let a = run(&u0, &grid, &p, &scheme).unwrap();
        let b = run(&u0.shifted(1.0), &grid, &p, &scheme).unwrap();
        for (sa, sb) in a.snapshots.iter().zip(&b.snapshots) {
            for (va, vb) in sa.values.iter().zip(&sb.values) {
                assert!((vb - va - 1.0).abs() <= 1e-11, "shift not preserved");
            }
        }
    }
}

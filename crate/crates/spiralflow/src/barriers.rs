//! Barrier constants and functions, compatibility checking, supersolution
//! verification, and mollification of incompatible initial data.
//!
//! Two barrier families sandwich the solution:
//!
//! * compatible data: `u0(r) +/- Cbar t` with
//!   `Cbar = sup_r |Fbar(r, u0', u0'')| / r`;
//! * general data with `|u0'| <= C0` and `|kappa_{u0}| <= C0`:
//!   `u0(r) +/- Cbar t / r +/- B(t)` where `Cbar` depends only on `C0` through
//!   the explicit case constants of the proof and `B(t) = Cbar t (1 + Cbar t/2)`
//!   saturates `B' >= Cbar (1 + Cbar t)`.

use crate::error::{Error, Result};
use crate::grid::{CoordKind, Grid1D, Params};
use crate::pde;
use crate::profile::InitialProfile;

/// Smooth cutoff machinery built from the `exp(-1/s)` bump.
pub mod bump {
    use std::sync::OnceLock;

    fn g(s: f64) -> f64 {
        if s > 0.0 {
            (-1.0 / s).exp()
        } else {
            0.0
        }
    }

    fn g1(s: f64) -> f64 {
        if s > 0.0 {
            (-1.0 / s).exp() / (s * s)
        } else {
            0.0
        }
    }

    fn g2(s: f64) -> f64 {
        if s > 0.0 {
            (-1.0 / s).exp() * (1.0 - 2.0 * s) / (s * s * s * s)
        } else {
            0.0
        }
    }

    /// Smooth non-decreasing transition: 0 for `s <= 0`, 1 for `s >= 1`.
    pub fn transition(s: f64) -> f64 {
        if s <= 0.0 {
            0.0
        } else if s >= 1.0 {
            1.0
        } else {
            let (a, b) = (g(s), g(1.0 - s));
            a / (a + b)
        }
    }

    pub fn transition_d1(s: f64) -> f64 {
        if s <= 0.0 || s >= 1.0 {
            0.0
        } else {
            let (a, b) = (g(s), g(1.0 - s));
            let d = a + b;
            (g1(s) * b + a * g1(1.0 - s)) / (d * d)
        }
    }

    pub fn transition_d2(s: f64) -> f64 {
        if s <= 0.0 || s >= 1.0 {
            0.0
        } else {
            let (a, b) = (g(s), g(1.0 - s));
            let (a1, b1) = (g1(s), -g1(1.0 - s));
            let (a2, b2) = (g2(s), g2(1.0 - s));
            let d = a + b;
            let d1 = a1 + b1;
            let d2 = a2 + b2;
            a2 / d - 2.0 * a1 * d1 / (d * d) - a * d2 / (d * d) + 2.0 * a * d1 * d1 / (d * d * d)
        }
    }

    /// `Psi_1`: smooth non-increasing, 1 for `rho <= 1`, 0 for `rho >= 2`.
    pub fn psi1(rho: f64) -> f64 {
        1.0 - transition(rho - 1.0)
    }

    pub fn psi1_d1(rho: f64) -> f64 {
        -transition_d1(rho - 1.0)
    }

    pub fn psi1_d2(rho: f64) -> f64 {
        -transition_d2(rho - 1.0)
    }

    fn sup_on_support(f: impl Fn(f64) -> f64) -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..=200_000 {
            let rho = 1.0 + i as f64 / 200_000.0;
            m = m.max(f(rho).abs());
        }
        m
    }

    /// `c1 = sup_rho rho |Psi_1'(rho)|`.
    pub fn c1_const() -> f64 {
        static C1: OnceLock<f64> = OnceLock::new();
        *C1.get_or_init(|| sup_on_support(|rho| rho * psi1_d1(rho)))
    }

    /// `c3 = sup_rho rho^2 |Psi_1''(rho)|`.
    pub fn c3_const() -> f64 {
        static C3: OnceLock<f64> = OnceLock::new();
        *C3.get_or_init(|| sup_on_support(|rho| rho * rho * psi1_d2(rho)))
    }
}

/// Which barrier family a spec describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum BarrierKind {
    /// `u0 +/- Cbar t`
    ConstantRate,
    /// `u0 +/- Cbar t / r +/- B(t)`
    InverseR,
}

/// A computed barrier: the rate constant plus, for the inverse-radius family,
/// the time offset `B(t) = Cbar t (1 + Cbar t / 2)`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct BarrierSpec {
    pub kind: BarrierKind,
    pub cbar: f64,
    /// description of the sampling used for the supremum
    pub computed_on: String,
}

impl BarrierSpec {
    /// `B(t)`; identically zero for the constant-rate family.
    pub fn b_of_t(&self, t: f64) -> f64 {
        match self.kind {
            BarrierKind::ConstantRate => 0.0,
            BarrierKind::InverseR => self.cbar * t * (1.0 + 0.5 * self.cbar * t),
        }
    }
}

/// Result of the compatibility check `|c + kappa_{u0}| <= C r` on `(0, r0]`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Compatibility {
    pub compatible: bool,
    /// smallest sampled `C` when compatible
    pub constant: Option<f64>,
}

/// Check `|c + kappa_{u0}(r)| <= C r` on the grid nodes in `(0, r0]`.
///
/// Divergence of the ratio as `r -> 0` (log-log slope `<= -1/4` over the
/// three finest nodes, or a plainly unbounded ratio) marks the datum
/// incompatible.
pub fn compatibility_check(
    initial: &InitialProfile,
    params: &Params,
    grid: &Grid1D,
) -> Result<Compatibility> {
    if grid.coord() != CoordKind::PolarR {
        return Err(Error::State("compatibility check needs a polar grid".into()));
    }
    let mut samples: Vec<(f64, f64)> = Vec::new();
    for &r in &grid.nodes() {
        if r > 0.0 && r <= params.r0 {
            let g = (params.c + initial.curvature(r)).abs() / r;
            samples.push((r, g));
        }
    }
    if samples.len() < 3 {
        return Err(Error::Range(format!(
            "grid must cover (0, r0 = {}] with at least 3 nodes",
            params.r0
        )));
    }
    samples.sort_by(|a, b| a.0.total_cmp(&b.0));
    let cmax = samples.iter().fold(0.0f64, |m, &(_, g)| m.max(g));
    if cmax <= 1e-12 {
        return Ok(Compatibility { compatible: true, constant: Some(cmax) });
    }
    if cmax > 1e8 {
        return Ok(Compatibility { compatible: false, constant: None });
    }
    // log-log slope of the ratio over the three finest nodes
    let fine: Vec<(f64, f64)> = samples.iter().take(3).map(|&(r, g)| (r, g.max(1e-300))).collect();
    let slope = {
        let xs: Vec<f64> = fine.iter().map(|&(r, _)| r.ln()).collect();
        let ys: Vec<f64> = fine.iter().map(|&(_, g)| g.ln()).collect();
        let xm = xs.iter().sum::<f64>() / 3.0;
        let ym = ys.iter().sum::<f64>() / 3.0;
        let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - xm) * (y - ym)).sum();
        let den: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
        num / den
    };
    if slope <= -0.25 {
        Ok(Compatibility { compatible: false, constant: None })
    } else {
        Ok(Compatibility { compatible: true, constant: Some(cmax) })
    }
}

/// Barrier constant for compatible data:
/// `Cbar = sup_r |Fbar(r, u0'(r), u0''(r))| / r`,
/// maximized on an 8x refinement of `grid` with the grouped form, plus the
/// analytic `r = 0` endpoint `3 |u0''(0)|` when the grid starts at the origin.
pub fn barrier_constant(
    initial: &InitialProfile,
    params: &Params,
    grid: &Grid1D,
) -> Result<BarrierSpec> {
    let compat = compatibility_check(initial, params, &grid.refine(8))?;
    if !compat.compatible {
        return Err(Error::Incompatible(
            "sup |Fbar/r| is unbounded without the compatibility condition".into(),
        ));
    }
    let fine = grid.refine(8);
    let mut cbar: f64 = 0.0;
    for &r in &fine.nodes() {
        if r == 0.0 {
            cbar = cbar.max(3.0 * initial.d2(0.0).abs());
        } else {
            let v = pde::eval_fbar_over_r_grouped(r, initial.d1(r), initial.d2(r), params)?;
            cbar = cbar.max(v.abs());
        }
    }
    Ok(BarrierSpec {
        kind: BarrierKind::ConstantRate,
        cbar,
        computed_on: format!("polar[{},{}]x{} (8x refined)", grid.lo(), grid.hi(), grid.len()),
    })
}

/// Constant `d` with `c/r - 1/(2 r^2) <= d r` for all `r > 0`: the numeric
/// supremum of `(c/r - 1/(2r^2))/r` (any `d' >= d` also works). Analytically
/// `16 c^3 / 27` for `c > 0` and `0` for `c <= 0`.
pub fn inverse_r_case_constant_d(c: f64) -> f64 {
    if c <= 0.0 {
        return 0.0;
    }
    let mut d: f64 = 0.0;
    // log-spaced sweep plus a fine pass around the interior maximum
    for i in 0..=20_000 {
        let r = 10f64.powf(-4.0 + 8.0 * i as f64 / 20_000.0);
        d = d.max((c / r - 0.5 / (r * r)) / r);
    }
    let r_star = 3.0 / (4.0 * c);
    for i in 0..=20_000 {
        let r = r_star * (0.5 + i as f64 / 20_000.0);
        d = d.max((c / r - 0.5 / (r * r)) / r);
    }
    d
}

/// Barrier constant for data that need not satisfy the compatibility
/// condition, from the explicit case constants of the proof:
///
/// ```text
/// Cbar = max(c + 2 C0 + 4 c1,  3 c C0 + 8 c1 C0^2,
///            3 c + 2 C0 + 4 c1,  c C0 + 16 c1 C0,  d)
/// ```
///
/// with `c1` the smallest constant in `|r u0''| <= c1 (1 + (r u0')^2)^{3/2}`
/// and `c >= 0` (the `c < 0` case runs through the sign symmetry of the
/// equation, so `|c|` is used). `B(t) = Cbar t (1 + Cbar t / 2)`.
pub fn barrier_no_compat(initial: &InitialProfile, params: &Params) -> Result<BarrierSpec> {
    let declared = initial
        .lip_lower
        .max(initial.lip_upper)
        .max(initial.curv_bound.unwrap_or(0.0));
    if !declared.is_finite() {
        return Err(Error::Precondition(
            "inverse-r barrier needs finite declared Lipschitz and curvature bounds".into(),
        ));
    }
    // verify the declared box and measure c1 on a wide sampling range
    let n_samples = 4000;
    let r_max = 50.0;
    let mut c0 = declared;
    let mut c1: f64 = 0.0;
    for i in 0..=n_samples {
        let r = r_max * i as f64 / n_samples as f64;
        let d1 = initial.d1(r);
        let kappa = initial.curvature(r);
        let tol = 1e-6 * (1.0 + declared);
        if d1.abs() > declared + tol || kappa.abs() > declared + tol {
            return Err(Error::Precondition(format!(
                "declared bound C0 = {declared} violated at r = {r}: |u0'| = {}, |kappa| = {}",
                d1.abs(),
                kappa.abs()
            )));
        }
        c0 = c0.max(d1.abs()).max(kappa.abs());
        let p = r * d1;
        c1 = c1.max((r * initial.d2(r)).abs() / (1.0 + p * p).powf(1.5));
    }
    let c = params.c.abs();
    let d = inverse_r_case_constant_d(c);
    let cbar = (c + 2.0 * c0 + 4.0 * c1)
        .max(3.0 * c * c0 + 8.0 * c1 * c0 * c0)
        .max(3.0 * c + 2.0 * c0 + 4.0 * c1)
        .max(c * c0 + 16.0 * c1 * c0)
        .max(d);
    Ok(BarrierSpec {
        kind: BarrierKind::InverseR,
        cbar,
        computed_on: format!("[0,{r_max}]x{} samples", n_samples + 1),
    })
}

/// Maximal positive part of `Fbar(r, Dc, D^2 c) - r dc/dt` over the interior
/// grid nodes and the given times, all derivatives by centered differences.
/// A valid supersolution stays below `tol(h) = 10 h` when smooth.
pub fn verify_supersolution(
    candidate: &dyn Fn(f64, f64) -> f64,
    grid: &Grid1D,
    times: &[f64],
    params: &Params,
) -> f64 {
    supersolution_violation(candidate, grid, times, params, 1.0)
}

/// Mirrored sign: maximal positive part of `r dc/dt - Fbar(r, Dc, D^2 c)`.
pub fn verify_subsolution(
    candidate: &dyn Fn(f64, f64) -> f64,
    grid: &Grid1D,
    times: &[f64],
    params: &Params,
) -> f64 {
    supersolution_violation(candidate, grid, times, params, -1.0)
}

fn supersolution_violation(
    candidate: &dyn Fn(f64, f64) -> f64,
    grid: &Grid1D,
    times: &[f64],
    params: &Params,
    sign: f64,
) -> f64 {
    let h = grid.spacing();
    let mut worst: f64 = 0.0;
    for &t in times {
        let dt_fd = if t > 0.0 { (1e-5f64).min(0.5 * t) } else { 1e-7 };
        for i in 1..grid.len() - 1 {
            let r = grid.node(i);
            if r <= 0.0 {
                continue;
            }
            let ut = (candidate(t + dt_fd, r) - candidate(t.max(dt_fd) - dt_fd, r))
                / (t.min(dt_fd) + dt_fd);
            let q = (candidate(t, r + h) - candidate(t, r - h)) / (2.0 * h);
            let y = (candidate(t, r + h) - 2.0 * candidate(t, r) + candidate(t, r - h)) / (h * h);
            let fbar = match pde::eval_fbar(r, q, y, params) {
                Ok(v) => v,
                Err(_) => continue,
            };
            worst = worst.max(sign * (fbar - r * ut));
        }
    }
    worst
}

/// Mollified initial datum
/// `u0^eps = Psi_eps U0 + (1 - Psi_eps) u0`,
/// `U0(r) = u0(0) - (c/2) r chi(r)`, `Psi_eps(r) = Psi_1(r/eps)`, with `chi`
/// the same smooth cutoff (1 on `[0,1]`, 0 on `[2,inf)`).
///
/// The result has slope `-c/2` at the origin (so it satisfies the
/// compatibility condition), agrees with `u0` for `r >= 2 eps`, and its
/// declared bounds are recomputed from the new evaluators.
pub fn mollify_initial(
    initial: &InitialProfile,
    eps: f64,
    params: &Params,
) -> Result<InitialProfile> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Domain(format!("mollification scale eps = {eps} must be positive")));
    }
    let c = params.c;
    let u00 = initial.eval(0.0);
    if !u00.is_finite() {
        return Err(Error::Precondition("u0(0) must be finite".into()));
    }
    let u0 = initial.clone();
    let (u0a, u0b) = (initial.clone(), initial.clone());

    let big_u = move |r: f64| u00 - (c / 2.0) * r * bump::psi1(r);
    let big_u1 = move |r: f64| -(c / 2.0) * (bump::psi1(r) + r * bump::psi1_d1(r));
    let big_u2 = move |r: f64| -(c / 2.0) * (2.0 * bump::psi1_d1(r) + r * bump::psi1_d2(r));
    let (bu_a, bu1_a, bu2_a) = (big_u, big_u1, big_u2);

    let eval = move |r: f64| {
        let psi = bump::psi1(r / eps);
        psi * bu_a(r) + (1.0 - psi) * u0.eval(r)
    };
    let d1 = move |r: f64| {
        let psi = bump::psi1(r / eps);
        let psi1 = bump::psi1_d1(r / eps) / eps;
        psi1 * (bu_a(r) - u0a.eval(r)) + psi * bu1_a(r) + (1.0 - psi) * u0a.d1(r)
    };
    let d2 = move |r: f64| {
        let psi = bump::psi1(r / eps);
        let psi1 = bump::psi1_d1(r / eps) / eps;
        let psi2 = bump::psi1_d2(r / eps) / (eps * eps);
        psi2 * (bu_a(r) - u0b.eval(r)) + 2.0 * psi1 * (bu1_a(r) - u0b.d1(r)) + psi * bu2_a(r)
            + (1.0 - psi) * u0b.d2(r)
    };

    // recompute declared bounds on a dense sampling of the modified region
    let r_hi = (2.0 * eps).max(4.0);
    let mut lo: f64 = -initial.d1(r_hi).min(0.0);
    let mut hi: f64 = initial.d1(r_hi).max(0.0);
    let mut curv: f64 = 0.0;
    for i in 0..=8000 {
        let r = r_hi * i as f64 / 8000.0;
        let d = d1(r);
        lo = lo.max(-d);
        hi = hi.max(d);
        curv = curv.max(pde::curvature(r, d, d2(r)).abs());
    }
    let lip_lower = initial.lip_lower.max(lo) * 1.0000001 + 1e-12;
    let lip_upper = initial.lip_upper.max(hi) * 1.0000001 + 1e-12;
    let curv_bound = Some(initial.curv_bound.unwrap_or(0.0).max(curv) * 1.0000001 + 1e-12);
    Ok(InitialProfile::new(
        format!("{}~mollified(eps={eps})", initial.name),
        eval,
        d1,
        d2,
        lip_lower,
        lip_upper,
        curv_bound,
    ))
}

/// The constant of the mollification claim,
/// `C0bar = 2 C0 c3 + 4 C0 c1 + C0 + c2`, which bounds `|r (u0^eps)''|` for
/// `r <= 2` independently of `eps`. `C0` is the declared bound of the datum
/// raised to `|c|/2` when smaller (the construction needs `C0 >= c/2`), and
/// `c2 = sup_{r <= 2} r |u0''(r)|`.
pub fn mollifier_claim_constant(initial: &InitialProfile, params: &Params) -> f64 {
    let c0 = initial
        .lip_lower
        .max(initial.lip_upper)
        .max(initial.curv_bound.unwrap_or(0.0))
        .max(params.c.abs() / 2.0);
    let mut c2: f64 = 0.0;
    for i in 0..=4000 {
        let r = 2.0 * i as f64 / 4000.0;
        c2 = c2.max((r * initial.d2(r)).abs());
    }
    2.0 * c0 * bump::c3_const() + 4.0 * c0 * bump::c1_const() + c0 + c2
}

/// Worked example from the a-priori penalization estimate: the explicit
/// supremum `sup_{r>0} (r - (r - pi/3)_+^2)`, by brute-force maximization.
/// Analytic value: `pi/3 + 1/4`.
pub fn penalization_sup_c2() -> f64 {
    let mut m: f64 = 0.0;
    for i in 0..=400_000 {
        let r = 4.0 * i as f64 / 400_000.0;
        let plus = (r - std::f64::consts::FRAC_PI_3).max(0.0);
        m = m.max(r - plus * plus);
    }
    m
}

//! Analytic initial data with declared slope and curvature bounds, plus a
//! registry of named profiles and seeded random Lipschitz generators.

use crate::error::{Error, Result};
use crate::grid::Grid1D;
use crate::interp::MonotoneCubic;
use crate::pde;
use rand::Rng;
use std::sync::Arc;

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Initial datum `u0(r)` with evaluators for the first two derivatives and
/// declared global bounds `-L0 <= u0' <= L1` and (optionally) `|kappa| <= C0`.
#[derive(Clone)]
pub struct InitialProfile {
    pub name: String,
    eval: Eval,
    d1: Eval,
    d2: Eval,
    /// `L0 >= 0` such that `u0' >= -L0`
    pub lip_lower: f64,
    /// `L1 >= 0` such that `u0' <= L1`
    pub lip_upper: f64,
    /// bound on `|kappa_{u0}|` when known
    pub curv_bound: Option<f64>,
}

impl std::fmt::Debug for InitialProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("InitialProfile")
            .field("name", &self.name)
            .field("lip_lower", &self.lip_lower)
            .field("lip_upper", &self.lip_upper)
            .field("curv_bound", &self.curv_bound)
            .finish()
    }
}

impl InitialProfile {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        d2: impl Fn(f64) -> f64 + Send + Sync + 'static,
        lip_lower: f64,
        lip_upper: f64,
        curv_bound: Option<f64>,
    ) -> Self {
        InitialProfile {
            name: name.into(),
            eval: Arc::new(eval),
            d1: Arc::new(d1),
            d2: Arc::new(d2),
            lip_lower,
            lip_upper,
            curv_bound,
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        (self.eval)(r)
    }

    pub fn d1(&self, r: f64) -> f64 {
        (self.d1)(r)
    }

    pub fn d2(&self, r: f64) -> f64 {
        (self.d2)(r)
    }

    /// Mean curvature `kappa_{u0}(r)` from the analytic derivatives.
    pub fn curvature(&self, r: f64) -> f64 {
        pde::curvature(r, self.d1(r), self.d2(r))
    }

    /// Check the declared gradient box on the nodes of `grid`.
    pub fn bounds_hold_on(&self, grid: &Grid1D) -> bool {
        let tol = 1e-9 * (1.0 + self.lip_lower.abs() + self.lip_upper.abs());
        grid.nodes().iter().all(|&r| {
            let radius = if grid.coord() == crate::grid::CoordKind::LogX { r.exp() } else { r };
            let d = self.d1(radius);
            d >= -self.lip_lower - tol && d <= self.lip_upper + tol
        })
    }

    /// `u0 + shift` (no effect on derivative bounds).
    pub fn shifted(&self, shift: f64) -> InitialProfile {
        let base = self.clone();
        InitialProfile {
            name: format!("{}+{}", self.name, shift),
            eval: Arc::new(move |r| (base.eval)(r) + shift),
            d1: self.d1.clone(),
            d2: self.d2.clone(),
            lip_lower: self.lip_lower,
            lip_upper: self.lip_upper,
            curv_bound: self.curv_bound,
        }
    }

    /// Pointwise sum; bounds add conservatively, curvature bound is dropped.
    pub fn plus(&self, other: &InitialProfile) -> InitialProfile {
        let (a, b) = (self.clone(), other.clone());
        let (a1, b1) = (self.clone(), other.clone());
        let (a2, b2) = (self.clone(), other.clone());
        InitialProfile {
            name: format!("{}+{}", self.name, other.name),
            eval: Arc::new(move |r| a.eval(r) + b.eval(r)),
            d1: Arc::new(move |r| a1.d1(r) + b1.d1(r)),
            d2: Arc::new(move |r| a2.d2(r) + b2.d2(r)),
            lip_lower: self.lip_lower + other.lip_lower,
            lip_upper: self.lip_upper + other.lip_upper,
            curv_bound: None,
        }
    }

    /// `-u0(r)` with swapped Lipschitz bounds (sign-symmetry runs).
    pub fn negated(&self) -> InitialProfile {
        let (a, a1, a2) = (self.clone(), self.clone(), self.clone());
        InitialProfile {
            name: format!("-({})", self.name),
            eval: Arc::new(move |r| -a.eval(r)),
            d1: Arc::new(move |r| -a1.d1(r)),
            d2: Arc::new(move |r| -a2.d2(r)),
            lip_lower: self.lip_upper,
            lip_upper: self.lip_lower,
            curv_bound: self.curv_bound,
        }
    }

    // ---- registry ------------------------------------------------------

    /// `u0 = 0`.
    pub fn zero() -> InitialProfile {
        InitialProfile::new("zero", |_| 0.0, |_| 0.0, |_| 0.0, 0.0, 0.0, Some(0.0))
    }

    /// `u0 = a r`; `|kappa| <= 2|a|` (the maximum sits at the origin).
    pub fn linear(a: f64) -> InitialProfile {
        InitialProfile::new(
            format!("linear(a={a})"),
            move |r| a * r,
            move |_| a,
            |_| 0.0,
            (-a).max(0.0),
            a.max(0.0),
            Some(2.0 * a.abs()),
        )
    }

    /// `u0 = ln r`; unbounded slope near the origin, so no global Lipschitz
    /// or curvature bound is declared. Mainly for coordinate-change tests.
    pub fn logarithmic() -> InitialProfile {
        InitialProfile::new(
            "logarithmic",
            |r| r.ln(),
            |r| 1.0 / r,
            |r| -1.0 / (r * r),
            0.0,
            f64::INFINITY,
            None,
        )
    }

    /// Gaussian bump `A exp(-((r-center)/width)^2)`: smooth with bounded
    /// slope; declared bounds are numeric maxima over a generous range.
    pub fn smooth_bump(amplitude: f64, center: f64, width: f64) -> InitialProfile {
        assert!(width > 0.0, "bump width must be positive");
        let f = move |r: f64| amplitude * (-((r - center) / width).powi(2)).exp();
        let f1 = move |r: f64| {
            let z = (r - center) / width;
            -2.0 * amplitude * z / width * (-z * z).exp()
        };
        let f2 = move |r: f64| {
            let z = (r - center) / width;
            2.0 * amplitude / (width * width) * (2.0 * z * z - 1.0) * (-z * z).exp()
        };
        let (mut lo, mut hi, mut curv): (f64, f64, f64) = (0.0, 0.0, 0.0);
        let r_max = (center + 12.0 * width).max(1.0);
        for i in 0..=20_000 {
            let r = r_max * i as f64 / 20_000.0;
            let d = f1(r);
            lo = lo.min(d);
            hi = hi.max(d);
            curv = curv.max(pde::curvature(r, d, f2(r)).abs());
        }
        InitialProfile::new(
            format!("smooth_bump(A={amplitude},c={center},w={width})"),
            f,
            f1,
            f2,
            (-lo).max(0.0) * 1.0000001,
            hi.max(0.0) * 1.0000001,
            Some(curv * 1.0000001),
        )
    }

    /// Compatible ramp `-(c/2) r chi(r)` with a smooth cutoff `chi` equal to
    /// 1 on `[0, 1]` and 0 on `[2, inf)`: slope `-c/2` at the origin, flat for
    /// large radii, satisfies the compatibility condition for forcing `c`.
    pub fn compatible_ramp(c: f64) -> InitialProfile {
        let f = move |r: f64| -(c / 2.0) * r * crate::barriers::bump::psi1(r);
        let f1 = move |r: f64| {
            -(c / 2.0) * (crate::barriers::bump::psi1(r) + r * crate::barriers::bump::psi1_d1(r))
        };
        let f2 = move |r: f64| {
            -(c / 2.0)
                * (2.0 * crate::barriers::bump::psi1_d1(r) + r * crate::barriers::bump::psi1_d2(r))
        };
        let (mut lo, mut hi, mut curv): (f64, f64, f64) = (0.0, 0.0, 0.0);
        for i in 0..=20_000 {
            let r = 3.0 * i as f64 / 20_000.0;
            let d = f1(r);
            lo = lo.min(d);
            hi = hi.max(d);
            curv = curv.max(pde::curvature(r, d, f2(r)).abs());
        }
        InitialProfile::new(
            format!("compatible_ramp(c={c})"),
            f,
            f1,
            f2,
            (-lo).max(0.0) * 1.0000001 + 1e-12,
            hi.max(0.0) * 1.0000001 + 1e-12,
            Some(curv * 1.0000001 + 1e-12),
        )
    }

    /// Wrap sampled values with monotone-cubic evaluation and second-order
    /// finite-difference derivative evaluators.
    pub fn from_samples(grid: &Grid1D, values: &[f64], name: impl Into<String>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::State("sample count does not match grid".into()));
        }
        let h = grid.spacing();
        let interp = MonotoneCubic::fit_uniform(grid.lo(), h, values);
        let (i0, i1, i2) = (interp.clone(), interp.clone(), interp.clone());
        let delta = 0.5 * h;
        let (mut lo, mut hi): (f64, f64) = (0.0, 0.0);
        for w in values.windows(2) {
            let d = (w[1] - w[0]) / h;
            lo = lo.min(d);
            hi = hi.max(d);
        }
        Ok(InitialProfile::new(
            name,
            move |r| i0.eval(r),
            move |r| (i1.eval(r + delta) - i1.eval(r - delta)) / (2.0 * delta),
            move |r| {
                (i2.eval(r + delta) - 2.0 * i2.eval(r) + i2.eval(r - delta)) / (delta * delta)
            },
            (-lo).max(0.0) + 1e-9,
            hi.max(0.0) + 1e-9,
            None,
        ))
    }

    /// Seeded random globally Lipschitz profile: a few smooth waves plus one
    /// kink, with total slope within `slope_bound`.
    pub fn random_lipschitz(rng: &mut impl Rng, slope_bound: f64) -> InitialProfile {
        let n_waves = 3;
        let mut amps = Vec::new();
        let mut omegas = Vec::new();
        let mut phases = Vec::new();
        // split the slope budget: 70% waves, 20% kink, 10% headroom
        let wave_budget = 0.7 * slope_bound / n_waves as f64;
        for _ in 0..n_waves {
            let omega = rng.gen_range(0.3..2.5);
            let slope = rng.gen_range(0.2..1.0) * wave_budget;
            amps.push(slope / omega);
            omegas.push(omega);
            phases.push(rng.gen_range(0.0..std::f64::consts::TAU));
        }
        let kink_slope = rng.gen_range(0.0..0.2 * slope_bound);
        let kink_at = rng.gen_range(1.0..9.0);
        let offset = rng.gen_range(-1.0..1.0);
        let (a2, o2, p2) = (amps.clone(), omegas.clone(), phases.clone());
        let (a3, o3, p3) = (amps.clone(), omegas.clone(), phases.clone());
        let eval = move |r: f64| {
            let mut v = offset + kink_slope * (r - kink_at).abs();
            for k in 0..amps.len() {
                v += amps[k] * (omegas[k] * r + phases[k]).sin();
            }
            v
        };
        let d1 = move |r: f64| {
            let mut v = kink_slope * (r - kink_at).signum();
            for k in 0..a2.len() {
                v += a2[k] * o2[k] * (o2[k] * r + p2[k]).cos();
            }
            v
        };
        let d2 = move |r: f64| {
            let mut v = 0.0;
            for k in 0..a3.len() {
                v -= a3[k] * o3[k] * o3[k] * (o3[k] * r + p3[k]).sin();
            }
            v
        };
        let total = 0.7 * slope_bound + kink_slope;
        InitialProfile::new("random_lipschitz", eval, d1, d2, total, total, None)
    }

    /// Seeded random non-negative gap with non-negative values and slope
    /// within `slope_bound`; used to build ordered pairs `(v, v + gap)`.
    pub fn random_gap(rng: &mut impl Rng, slope_bound: f64) -> InitialProfile {
        let base = rng.gen_range(0.0..0.5);
        let omega = rng.gen_range(0.3..2.0);
        let amp = rng.gen_range(0.0..slope_bound / omega) / 2.0;
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        InitialProfile::new(
            "random_gap",
            move |r| base + amp * (1.0 + (omega * r + phase).sin()),
            move |r| amp * omega * (omega * r + phase).cos(),
            move |r| -amp * omega * omega * (omega * r + phase).sin(),
            amp * omega,
            amp * omega,
            None,
        )
    }

    /// Look up a registry profile by name with numeric parameters.
    pub fn by_name(
        name: &str,
        args: &std::collections::BTreeMap<String, f64>,
        c: f64,
    ) -> Result<InitialProfile> {
        let get = |key: &str, default: f64| args.get(key).copied().unwrap_or(default);
        match name {
            "zero" => Ok(InitialProfile::zero()),
            "linear" => Ok(InitialProfile::linear(get("a", 0.5))),
            "logarithmic" => Ok(InitialProfile::logarithmic()),
            "smooth_bump" => Ok(InitialProfile::smooth_bump(
                get("amplitude", 1.0),
                get("center", 3.0),
                get("width", 1.0),
            )),
            "compatible_ramp" => Ok(InitialProfile::compatible_ramp(c)),
            _ => Err(Error::Config(format!(
                "unknown initial profile `{name}` (known: zero, linear, logarithmic, smooth_bump, compatible_ramp)"
            ))),
        }
    }
}

//! Pointwise right-hand sides of the spiral equation and its relatives.
//!
//! Polar form (graph of the angle over the radius):
//!
//! ```text
//! r u_t = Fbar(r, u_r, u_rr)
//! Fbar(r, q, Y) = c sqrt(1 + r^2 q^2) + q (2 + r^2 q^2)/(1 + r^2 q^2) + r Y/(1 + r^2 q^2)
//! ```
//!
//! Logarithmic form with `x = ln r`, `p = u_x`, `X = u_xx`:
//!
//! ```text
//! u_t = F(x, p, X) = c e^{-x} sqrt(1 + p^2) + e^{-2x} p + e^{-2x} X/(1 + p^2)
//! ```
//!
//! The two are tied by `F(ln r, r u_r, r u_r + r^2 u_rr) = Fbar(r, u_r, u_rr)/r`.
//! The generalized family `u_t = e^{-x} b(e^{-x} u_x, u_x) + e^{-2x} sigma^2(u_x) u_xx`
//! covers the spiral case with `b(q, p) = c sqrt(1+p^2) + q`, `sigma(p) = (1+p^2)^{-1/2}`,
//! and radial heat flow with `b(q, p) = (n-2) q`, `sigma = 1`.

use crate::error::{Error, Result};
use crate::grid::Params;
use std::sync::Arc;

/// `sqrt(1 + p^2) - 1` without cancellation for small `p`.
#[inline]
pub fn sqrt1p_m1(p: f64) -> f64 {
    let p2 = p * p;
    p2 / (1.0 + (1.0 + p2).sqrt())
}

/// `arctan(a) - arctan(b)`, using the difference identity when it is the
/// better-conditioned route (valid on the principal branch iff `a*b > -1`).
#[inline]
pub fn atan_diff(a: f64, b: f64) -> f64 {
    let ab = a * b;
    if ab > -0.5 {
        ((a - b) / (1.0 + ab)).atan()
    } else {
        a.atan() - b.atan()
    }
}

/// Right-hand side `Fbar(r, q, Y)` of the polar equation (requires `r > 0`).
pub fn eval_fbar(r: f64, q: f64, y: f64, params: &Params) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("eval_fbar needs r > 0, got {r}")));
    }
    let p = r * q;
    let s = 1.0 + p * p;
    Ok(params.c * s.sqrt() + q * (2.0 + p * p) / s + r * y / s)
}

/// `Fbar(r, q, Y)/r` in the algebraically regrouped form
///
/// ```text
/// (c + 2q)/r  +  c r q^2/(1 + sqrt(1+p^2))  -  r q^3/(1+p^2)  +  Y/(1+p^2)
/// ```
///
/// which keeps the singular part as the single fraction `(c + 2q)/r` so that
/// no catastrophic cancellation occurs near the origin where `c + 2q -> 0`.
pub fn eval_fbar_over_r_grouped(r: f64, q: f64, y: f64, params: &Params) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("grouped Fbar/r needs r > 0, got {r}")));
    }
    let p = r * q;
    let s = 1.0 + p * p;
    Ok((params.c + 2.0 * q) / r + params.c * r * q * q / (1.0 + s.sqrt()) - r * q * q * q / s
        + y / s)
}

/// Right-hand side `F(x, p, X)` of the logarithmic equation.
///
/// Total on finite inputs; extreme `x` overflows to an infinite value, which
/// the solver flags as divergence rather than erroring here.
pub fn eval_f_log(x: f64, p: f64, big_x: f64, params: &Params) -> f64 {
    let emx = (-x).exp();
    let em2x = emx * emx;
    let s = 1.0 + p * p;
    params.c * emx * s.sqrt() + em2x * p + em2x * big_x / s
}

/// Scale of the terms entering `F`, used to normalize roundoff residuals.
fn f_log_term_scale(x: f64, p: f64, big_x: f64, params: &Params) -> f64 {
    let emx = (-x).exp();
    let em2x = emx * emx;
    let s = 1.0 + p * p;
    (params.c * emx * s.sqrt()).abs() + (em2x * p).abs() + (em2x * big_x / s).abs()
}

/// Relative residual of the chain-rule identity
/// `F(ln r, r u_r, r u_r + r^2 u_rr) = Fbar(r, u_r, u_rr)/r`, both sides
/// evaluated independently. Contract: `<= 1e-12` on `|r|, |u_r|, |u_rr| <= 10`
/// with `r >= 0.1`.
pub fn chain_rule_identity_residual(r: f64, ur: f64, urr: f64, params: &Params) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("chain rule identity needs r > 0, got {r}")));
    }
    let x = r.ln();
    let p = r * ur;
    let big_x = r * ur + r * r * urr;
    let lhs = eval_f_log(x, p, big_x, params);
    let rhs = eval_fbar(r, ur, urr, params)? / r;
    let scale = f_log_term_scale(x, p, big_x, params).max(1e-300);
    Ok((lhs - rhs).abs() / scale)
}

/// Mean curvature of the spiral graph at radius `r` with `q = u_r`, `Y = u_rr`:
///
/// ```text
/// kappa = q (2 + (rq)^2)/(1 + (rq)^2)^{3/2} + r Y/(1 + (rq)^2)^{3/2}
/// ```
///
/// Regular at `r = 0`, where it reduces to `2q`.
pub fn curvature(r: f64, q: f64, y: f64) -> f64 {
    let p = r * q;
    let s = 1.0 + p * p;
    let s32 = s * s.sqrt();
    q * (2.0 + p * p) / s32 + r * y / s32
}

/// Normal velocity of the interface: `V_n = r u_t / sqrt(1 + r^2 u_r^2)`.
///
/// For exact solutions of the polar equation this equals `c + kappa`.
pub fn normal_velocity(r: f64, ut: f64, ur: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("normal_velocity needs r > 0, got {r}")));
    }
    let p = r * ur;
    Ok(r * ut / (1.0 + p * p).sqrt())
}

/// Monotone structure of the gradient part of a generalized right-hand side,
/// used by the scheme to pick the one-sided difference per term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GradientFlux {
    /// `b(q, p) = c sqrt(1 + p^2) + drift * q`
    ForcedDrift { c: f64, drift: f64 },
    /// `b(q, p) = drift * q`
    LinearDrift { drift: f64 },
}

/// Coefficient pair `(b, sigma)` of the generalized equation
/// `u_t = e^{-x} b(e^{-x} u_x, u_x) + e^{-2x} sigma^2(u_x) u_xx`,
/// with the extra pieces the explicit scheme needs: the antiderivative of
/// `sigma^2` (conservative diffusion flux) and the slope solving the embedded
/// Neumann relation `b(q, 0) + sigma^2(0) q = 0` at the origin.
#[derive(Clone)]
pub struct GenCoeffs {
    pub label: String,
    b: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
    sigma: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    sigma_sq_prim: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub flux: GradientFlux,
    pub origin_slope: f64,
}

impl std::fmt::Debug for GenCoeffs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GenCoeffs")
            .field("label", &self.label)
            .field("flux", &self.flux)
            .field("origin_slope", &self.origin_slope)
            .finish()
    }
}

impl GenCoeffs {
    /// Spiral coefficients: `b(q,p) = c sqrt(1+p^2) + q`, `sigma = (1+p^2)^{-1/2}`.
    pub fn spiral(params: &Params) -> Self {
        let c = params.c;
        GenCoeffs {
            label: format!("spiral(c={c})"),
            b: Arc::new(move |q, p| c * (1.0 + p * p).sqrt() + q),
            sigma: Arc::new(|p| 1.0 / (1.0 + p * p).sqrt()),
            sigma_sq_prim: Arc::new(|p| p.atan()),
            flux: GradientFlux::ForcedDrift { c, drift: 1.0 },
            origin_slope: -c / 2.0,
        }
    }

    /// Radially symmetric heat flow on `R^n \ {0}`: after removing the
    /// `sigma^2 q` share, `b(q, p) = (n - 2) q` with `sigma = 1`.
    pub fn radial_heat(n: f64) -> Self {
        let drift = n - 2.0;
        GenCoeffs {
            label: format!("radial_heat(n={n})"),
            b: Arc::new(move |q, _| drift * q),
            sigma: Arc::new(|_| 1.0),
            sigma_sq_prim: Arc::new(|p| p),
            flux: GradientFlux::LinearDrift { drift },
            origin_slope: 0.0,
        }
    }

    /// `b = 0`, `sigma = 1`: pure exponentially weighted diffusion.
    pub fn pure_diffusion() -> Self {
        GenCoeffs {
            label: "pure_diffusion".into(),
            b: Arc::new(|_, _| 0.0),
            sigma: Arc::new(|_| 1.0),
            sigma_sq_prim: Arc::new(|p| p),
            flux: GradientFlux::LinearDrift { drift: 0.0 },
            origin_slope: 0.0,
        }
    }

    pub fn custom(
        label: impl Into<String>,
        b: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        sigma: impl Fn(f64) -> f64 + Send + Sync + 'static,
        sigma_sq_prim: impl Fn(f64) -> f64 + Send + Sync + 'static,
        flux: GradientFlux,
        origin_slope: f64,
    ) -> Self {
        GenCoeffs {
            label: label.into(),
            b: Arc::new(b),
            sigma: Arc::new(sigma),
            sigma_sq_prim: Arc::new(sigma_sq_prim),
            flux,
            origin_slope,
        }
    }

    pub fn b(&self, q: f64, p: f64) -> f64 {
        (self.b)(q, p)
    }

    pub fn sigma(&self, p: f64) -> f64 {
        (self.sigma)(p)
    }

    pub fn sigma_sq_prim(&self, p: f64) -> f64 {
        (self.sigma_sq_prim)(p)
    }
}

/// Generalized right-hand side `e^{-x} b(e^{-x} p, p) + e^{-2x} sigma^2(p) X`.
pub fn eval_gen_rhs_log(x: f64, p: f64, big_x: f64, coeffs: &GenCoeffs) -> f64 {
    let emx = (-x).exp();
    let em2x = emx * emx;
    let sig = coeffs.sigma(p);
    emx * coeffs.b(emx * p, p) + em2x * sig * sig * big_x
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::SQRT_2;

    fn params(c: f64) -> Params {
        Params::new(c).unwrap()
    }

    #[test]
    fn fbar_trivial_and_substituted_values() {
        let p1 = params(1.0);
        // all gradient terms vanish
        assert!((eval_fbar(1.0, 0.0, 0.0, &p1).unwrap() - 1.0).abs() < 1e-15);
        // direct substitution: c sqrt2 + 1*(3/2) + 0
        let v = eval_fbar(1.0, 1.0, 0.0, &p1).unwrap();
        assert!((v - (SQRT_2 + 1.5)).abs() < 1e-14);
        assert!(eval_fbar(0.0, 1.0, 0.0, &p1).is_err());
        assert!(eval_fbar(-1.0, 1.0, 0.0, &p1).is_err());
    }

    #[test]
    fn fbar_over_r_vanishes_when_neumann_relation_holds() {
        // q = -c/2 with Y = 0: the grouped value tends to 0 as r -> 0
        let p1 = params(1.0);
        for &r in &[1e-2, 1e-4, 1e-8] {
            let v = eval_fbar_over_r_grouped(r, -0.5, 0.0, &p1).unwrap();
            assert!(v.abs() <= 0.3 * r, "grouped Fbar/r = {v} at r = {r}");
        }
    }

    #[test]
    fn grouped_form_matches_naive_division() {
        let p = params(0.7);
        let mut worst: f64 = 0.0;
        for i in 0..50 {
            for j in 0..20 {
                for k in 0..20 {
                    let r = 0.1 + 9.9 * i as f64 / 49.0;
                    let q = -10.0 + j as f64;
                    let y = -10.0 + k as f64;
                    let a = eval_fbar(r, q, y, &p).unwrap() / r;
                    let b = eval_fbar_over_r_grouped(r, q, y, &p).unwrap();
                    worst = worst.max((a - b).abs() / (1.0 + a.abs()));
                }
            }
        }
        assert!(worst < 1e-12, "grouped vs naive mismatch {worst:.3e}");
    }

    #[test]
    fn f_log_examples() {
        let p1 = params(1.0);
        assert!((eval_f_log(0.0, 0.0, 0.0, &p1) - 1.0).abs() < 1e-15);
        let v = eval_f_log(0.0, 1.0, 1.0, &p1);
        assert!((v - (SQRT_2 + 1.0 + 0.5)).abs() < 1e-14);
    }

    #[test]
    fn chain_rule_identity_examples() {
        let p1 = params(1.0);
        // F(0,1,1) = Fbar(1,1,0)/1 exactly
        assert!(chain_rule_identity_residual(1.0, 1.0, 0.0, &p1).unwrap() < 1e-15);
        // gradient-free case at r = e
        assert!(
            chain_rule_identity_residual(std::f64::consts::E, 0.0, 0.0, &p1).unwrap() < 1e-15
        );
    }

    #[test]
    fn curvature_examples() {
        // r = 0 limit: kappa = 2 a regardless of u_rr
        for &a in &[-1.5, 0.0, 0.3, 2.0] {
            assert!((curvature(0.0, a, 123.0) - 2.0 * a).abs() < 1e-14);
        }
        // straight ray
        assert_eq!(curvature(3.7, 0.0, 0.0), 0.0);
        // ubar = a r at general r: a (2 + a^2 r^2)/(1 + a^2 r^2)^{3/2}
        let (a, r): (f64, f64) = (0.8, 2.3);
        let p2 = a * a * r * r;
        let expect = a * (2.0 + p2) / (1.0 + p2).powf(1.5);
        assert!((curvature(r, a, 0.0) - expect).abs() < 1e-14);
    }

    #[test]
    fn normal_velocity_examples() {
        assert_eq!(normal_velocity(2.0, 0.0, 0.5).unwrap(), 0.0);
        // rotating ansatz u_t = lambda at r = 1, flat gradient
        assert!((normal_velocity(1.0, 0.25, 0.0).unwrap() - 0.25).abs() < 1e-15);
        assert!(normal_velocity(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn gen_rhs_matches_spiral_f() {
        let p = params(-0.6);
        let coeffs = GenCoeffs::spiral(&p);
        for i in 0..200 {
            let x = -2.0 + 4.0 * i as f64 / 199.0;
            let pp = -3.0 + 6.0 * ((i * 7) % 200) as f64 / 199.0;
            let xx = -5.0 + 10.0 * ((i * 13) % 200) as f64 / 199.0;
            let a = eval_gen_rhs_log(x, pp, xx, &coeffs);
            let b = eval_f_log(x, pp, xx, &p);
            assert!((a - b).abs() <= 1e-14 * (1.0 + a.abs()), "x={x} p={pp} X={xx}");
        }
    }

    #[test]
    fn gen_rhs_radial_heat_style_coefficients() {
        // literal b(q,p) = (n-1) q with n = 3 gives 2 e^{-2x} p + e^{-2x} X
        let coeffs = GenCoeffs::custom(
            "two_q",
            |q, _| 2.0 * q,
            |_| 1.0,
            |p| p,
            GradientFlux::LinearDrift { drift: 2.0 },
            0.0,
        );
        let (x, p, big_x): (f64, f64, f64) = (0.4, -1.3, 2.2);
        let em2x = (-2.0 * x).exp();
        let v = eval_gen_rhs_log(x, p, big_x, &coeffs);
        assert!((v - (2.0 * em2x * p + em2x * big_x)).abs() < 1e-14);
        // pure diffusion keeps only the weighted second-derivative term
        let pd = GenCoeffs::pure_diffusion();
        let v = eval_gen_rhs_log(x, p, big_x, &pd);
        assert!((v - em2x * big_x).abs() < 1e-15);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn chain_rule_residual_below_contract(
            r in 0.1f64..10.0,
            q in -10.0f64..10.0,
            y in -10.0f64..10.0,
            c in -2.0f64..2.0,
        ) {
            let res = chain_rule_identity_residual(r, q, y, &params(c)).unwrap();
            prop_assert!(res <= 1e-12, "residual {res:.3e}");
        }

        #[test]
        fn geometric_law_identity(
            r in 0.1f64..10.0,
            q in -10.0f64..10.0,
            y in -10.0f64..10.0,
            c in -2.0f64..2.0,
        ) {
            // Fbar / sqrt(1 + r^2 q^2) = c + kappa
            let p = params(c);
            let fb = eval_fbar(r, q, y, &p).unwrap();
            let lhs = fb / (1.0 + r * r * q * q).sqrt();
            let rhs = c + curvature(r, q, y);
            let scale = 1.0 + lhs.abs().max(rhs.abs());
            prop_assert!((lhs - rhs).abs() / scale <= 1e-12);
        }

        #[test]
        fn fbar_sign_symmetry(
            r in 0.1f64..10.0,
            q in -10.0f64..10.0,
            y in -10.0f64..10.0,
            c in -2.0f64..2.0,
        ) {
            // the equation is unchanged under (w, c) -> (-w, -c)
            let a = eval_fbar(r, -q, -y, &params(-c)).unwrap();
            let b = eval_fbar(r, q, y, &params(c)).unwrap();
            prop_assert!((a + b).abs() <= 1e-12 * (1.0 + b.abs()));
        }

        #[test]
        fn curvature_is_odd(r in 0.0f64..10.0, q in -10.0f64..10.0, y in -10.0f64..10.0) {
            let a = curvature(r, -q, -y);
            let b = curvature(r, q, y);
            prop_assert!((a + b).abs() <= 1e-12 * (1.0 + b.abs()));
        }

        #[test]
        fn normal_velocity_of_exact_rhs_is_forcing_plus_curvature(
            r in 0.1f64..10.0,
            q in -10.0f64..10.0,
            y in -10.0f64..10.0,
            c in -2.0f64..2.0,
        ) {
            let p = params(c);
            let ut = eval_fbar(r, q, y, &p).unwrap() / r;
            let vn = normal_velocity(r, ut, q).unwrap();
            let rhs = c + curvature(r, q, y);
            prop_assert!((vn - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }
    }
}

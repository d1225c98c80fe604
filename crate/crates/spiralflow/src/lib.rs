//! Spirals attached at the origin moving by forced mean curvature flow `V_n = c + kappa`.
//!
//! A spiral is the curve `{ r e^{-i u(t,r)} : r >= 0 }` for a single-valued angle
//! function `u` of the radius. The geometric law turns into a quasi-linear
//! parabolic equation for `u`, singular at the attachment point `r = 0`:
//!
//! ```text
//! r u_t = c sqrt(1 + r^2 u_r^2) + u_r (2 + r^2 u_r^2)/(1 + r^2 u_r^2) + r u_rr/(1 + r^2 u_r^2)
//! ```
//!
//! This crate provides:
//!
//! * the pointwise right-hand sides in polar and logarithmic (`x = ln r`)
//!   coordinates, the curvature of a spiral graph, and a generalized
//!   `(b, sigma)` family ([`pde`]);
//! * explicit monotone upwind time steppers with CFL control, an embedded
//!   Neumann treatment of the origin, and far-field boundary options
//!   ([`solver`]);
//! * barrier constants and functions, supersolution verification,
//!   compatibility checking and mollification of incompatible initial data
//!   ([`barriers`]);
//! * a Cartesian level-set cross-validator on an annulus with marching-squares
//!   contour extraction ([`levelset`]);
//! * experiment drivers that turn comparison, gradient and time-regularity
//!   statements into reproducible desk-scale checks ([`verify`]);
//! * a plain-text scenario runner with CSV/JSON outputs ([`config`],
//!   [`scenario`]) behind the `spiralflow` binary, and the acceptance suite
//!   ([`acceptance`]).
//!
//! The `examples/` directory has one runnable example per capability; start
//! with `cargo run --release --example evolve_polar`.

pub mod acceptance;
pub mod barriers;
pub mod config;
pub mod error;
pub mod grid;
pub mod interp;
pub mod levelset;
pub mod pde;
pub mod profile;
pub mod scenario;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use grid::{spiral_points, to_log, to_polar, CoordKind, Grid1D, Params, ProfileState, SpiralCurve};
pub use profile::InitialProfile;
pub use solver::{cfl_dt, run, step_general, step_log, step_polar, SchemeConfig, Trajectory};

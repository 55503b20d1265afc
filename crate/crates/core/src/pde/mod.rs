//! Finite differences for convection-diffusion problems.
//!
//! Two-point boundary value problems are written
//!
//! ```text
//! sigma(x) u'' + mu(x) u' + b(x) u = f(x),   u(A) = beta0, u(B) = beta1
//! ```
//!
//! and the parabolic problem in remaining time `tau` (time to expiry) is
//!
//! ```text
//! u_tau = sigma(x,tau) u_xx + mu(x,tau) u_x + b(x,tau) u - f(x,tau)
//! u(x,0) = phi(x),  u(A,tau) = g0(tau),  u(B,tau) = g1(tau)
//! ```
//!
//! so `f` always enters with the same sign as in the BVP. With `b <= 0`,
//! non-negative boundary data and `f <= 0`, the fitted scheme yields
//! non-negative discrete solutions.

pub mod bvp;
pub mod fitting;
pub mod mesh;
pub mod option;
pub mod parabolic;
pub mod tridiagonal;

pub use bvp::{BvpSolution, TwoPointBVP};
pub use fitting::FittingVariant;
pub use mesh::Mesh1D;
pub use option::{ExerciseStyle, OptionGrid, OptionKind, OptionSpec, Volatility};
pub use parabolic::{ParabolicProblem, ParabolicSolution, TimeStepping};
pub use tridiagonal::TridiagonalSystem;

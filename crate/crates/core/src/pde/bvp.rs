//! Two-point boundary value problems: classical schemes on the model
//! problem and the fitted scheme for variable coefficients.
//!
//! The model problem is `sigma u'' + 2 u' = 0` on `(A, B)` with `u(A) = 1`,
//! `u(B) = 0`. Its solution has a boundary layer of width `O(sigma)` at `A`.
//! The centered scheme has discrete solution
//! `U_j = (lambda^j - lambda^J) / (1 - lambda^J)` with
//! `lambda = (1 - h/sigma) / (1 + h/sigma)`, which is negative (and the
//! solution oscillates) once `sigma < h`. The upwind scheme has
//! `lambda = 1 / (1 + 2h/sigma)`: never oscillates, but smears the layer.

use crate::error::{domain, Error, Result};
use crate::pde::fitting::{fitted_row, FittingVariant};
use crate::pde::mesh::Mesh1D;
use crate::pde::tridiagonal::TridiagonalSystem;

pub type Coefficient = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// `sigma(x) u'' + mu(x) u' + b(x) u = f(x)`, `u(A) = beta0`, `u(B) = beta1`.
pub struct TwoPointBVP {
    sigma: Coefficient,
    mu: Coefficient,
    b: Coefficient,
    f: Coefficient,
    beta0: f64,
    beta1: f64,
}

impl std::fmt::Debug for TwoPointBVP {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TwoPointBVP")
            .field("beta0", &self.beta0)
            .field("beta1", &self.beta1)
            .finish_non_exhaustive()
    }
}

impl TwoPointBVP {
    pub fn new(
        sigma: impl Fn(f64) -> f64 + Send + Sync + 'static,
        mu: impl Fn(f64) -> f64 + Send + Sync + 'static,
        b: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        beta0: f64,
        beta1: f64,
    ) -> Self {
        Self {
            sigma: Box::new(sigma),
            mu: Box::new(mu),
            b: Box::new(b),
            f: Box::new(f),
            beta0,
            beta1,
        }
    }

    /// `sigma u'' + mu u' = 0` with constant coefficients.
    pub fn constant(sigma: f64, mu: f64, beta0: f64, beta1: f64) -> Self {
        Self::new(move |_| sigma, move |_| mu, |_| 0.0, |_| 0.0, beta0, beta1)
    }

    pub fn beta0(&self) -> f64 {
        self.beta0
    }

    pub fn beta1(&self) -> f64 {
        self.beta1
    }
}

/// Mesh values including both boundary points.
#[derive(Debug, Clone, PartialEq)]
pub struct BvpSolution {
    pub x: Vec<f64>,
    pub u: Vec<f64>,
    /// True when the scheme's discrete solution alternates in sign pattern
    /// (centered scheme with `sigma < h`).
    pub oscillation: bool,
}

/// Continuous solution of `sigma u'' + mu u' = 0`, `u(a) = 1`, `u(b) = 0`.
pub fn model_exact(sigma: f64, mu: f64, a: f64, b: f64, x: f64) -> f64 {
    let k = mu / sigma;
    let tail = (-k * (b - a)).exp();
    ((-k * (x - a)).exp() - tail) / -(-k * (b - a)).exp_m1()
}

fn discrete_power_solution(lambda: f64, j: usize, big_j: usize) -> f64 {
    let lj = lambda.powi(big_j as i32);
    (lambda.powi(j as i32) - lj) / (1.0 - lj)
}

/// Closed-form centered-scheme solution of the model problem.
pub fn centered_exact(sigma: f64, mesh: &Mesh1D, j: usize) -> f64 {
    let r = mesh.h() / sigma;
    discrete_power_solution((1.0 - r) / (1.0 + r), j, mesh.intervals())
}

/// Closed-form upwind-scheme solution of the model problem.
pub fn upwind_exact(sigma: f64, mesh: &Mesh1D, j: usize) -> f64 {
    discrete_power_solution(1.0 / (1.0 + 2.0 * mesh.h() / sigma), j, mesh.intervals())
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("sigma must be positive, got {sigma}")))
    }
}

fn solve_model(mesh: &Mesh1D, row: (f64, f64, f64), oscillation: bool) -> Result<BvpSolution> {
    let n = mesh.intervals() - 1;
    let (lo, di, up) = row;
    let mut rhs = vec![0.0; n];
    // u(A) = 1 moves to the right-hand side; u(B) = 0 contributes nothing.
    rhs[0] = -lo;
    let sys = TridiagonalSystem::new(vec![lo; n], vec![di; n], vec![up; n], rhs)?;
    let inner = sys.solve_pivoted()?;
    let mut u = Vec::with_capacity(mesh.len());
    u.push(1.0);
    u.extend(inner);
    u.push(0.0);
    Ok(BvpSolution {
        x: mesh.points(),
        u,
        oscillation,
    })
}

/// Centered differences on the model problem.
pub fn solve_centered(sigma: f64, mesh: &Mesh1D) -> Result<BvpSolution> {
    check_sigma(sigma)?;
    let h = mesh.h();
    let s = sigma / (h * h);
    solve_model(mesh, (s - 1.0 / h, -2.0 * s, s + 1.0 / h), sigma < h)
}

/// Forward (upwind) differences for the convection term on the model problem.
pub fn solve_upwind(sigma: f64, mesh: &Mesh1D) -> Result<BvpSolution> {
    check_sigma(sigma)?;
    let h = mesh.h();
    let s = sigma / (h * h);
    solve_model(mesh, (s, -2.0 * s - 2.0 / h, s + 2.0 / h), false)
}

/// Assembles the fitted scheme's interior system and checks the
/// monotone-matrix structure row by row.
pub fn assemble_fitted(
    bvp: &TwoPointBVP,
    mesh: &Mesh1D,
    variant: FittingVariant,
) -> Result<TridiagonalSystem> {
    let h = mesh.h();
    let n = mesh.intervals() - 1;
    let (mut sub, mut diag, mut sup, mut rhs) = (
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
        Vec::with_capacity(n),
    );
    for j in 1..=n {
        let x = mesh.x(j);
        let (sg, mu, b, f) = ((bvp.sigma)(x), (bvp.mu)(x), (bvp.b)(x), (bvp.f)(x));
        if !(sg >= 0.0) || !sg.is_finite() {
            return Err(domain(format!("sigma({x}) = {sg} must be non-negative")));
        }
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(domain(format!("mu({x}) = {mu} must be positive")));
        }
        if !(b <= 0.0) {
            return Err(domain(format!("b({x}) = {b} must be non-positive")));
        }
        if !f.is_finite() {
            return Err(domain(format!("f({x}) is not finite")));
        }
        let (lo, di, up) = fitted_row(variant, sg, mu, b, h);
        // Large |q| can underflow an off-diagonal to exactly zero, so the
        // check is sub >= 0, sup >= 0, diag < 0.
        if !(lo >= 0.0 && up >= 0.0 && di < 0.0) {
            return Err(Error::Numeric(format!(
                "monotone-matrix invariant violated at row {j}: ({lo}, {di}, {up})"
            )));
        }
        let mut r = f;
        if j == 1 {
            r -= lo * bvp.beta0;
        }
        if j == n {
            r -= up * bvp.beta1;
        }
        sub.push(lo);
        diag.push(di);
        sup.push(up);
        rhs.push(r);
    }
    TridiagonalSystem::new(sub, diag, sup, rhs)
}

/// Exponentially fitted scheme for the general problem.
pub fn solve_fitted(bvp: &TwoPointBVP, mesh: &Mesh1D, variant: FittingVariant) -> Result<Vec<f64>> {
    let sys = assemble_fitted(bvp, mesh, variant)?;
    let inner = sys.solve()?;
    let mut u = Vec::with_capacity(mesh.len());
    u.push(bvp.beta0);
    u.extend(inner);
    u.push(bvp.beta1);
    Ok(u)
}

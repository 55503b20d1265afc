//! Theta-scheme time stepping for the fitted parabolic problem.
//!
//! Time runs forward in `tau`, the time remaining to the horizon. For an
//! option, `tau = 0` is expiry (where `phi` is the payoff) and `tau = T` is
//! today. Each step solves
//!
//! ```text
//! (I - theta k A(tau+k)) U^{n+1} = (I + (1-theta) k A(tau)) U^n + boundary and source terms
//! ```
//!
//! with `A` the fitted spatial operator. By default the first two steps are
//! each replaced by two fully implicit half-steps (Rannacher start-up) to
//! damp the oscillations Crank-Nicolson leaves behind a payoff kink.

use crate::error::{domain, Error, Result};
use crate::pde::fitting::{fitted_row, FittingVariant};
use crate::pde::mesh::Mesh1D;
use crate::pde::tridiagonal::TridiagonalSystem;

pub type SpaceTimeFn = Box<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type SpaceFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// `u_tau = sigma u_xx + mu u_x + b u - f` on `[A, B] x (0, T]`.
pub struct ParabolicProblem {
    sigma: SpaceTimeFn,
    mu: SpaceTimeFn,
    b: SpaceTimeFn,
    f: SpaceTimeFn,
    phi: SpaceFn,
    g0: SpaceFn,
    g1: SpaceFn,
    horizon: f64,
}

impl std::fmt::Debug for ParabolicProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ParabolicProblem")
            .field("horizon", &self.horizon)
            .finish_non_exhaustive()
    }
}

impl ParabolicProblem {
    /// Pure diffusion problem; drift, reaction and source default to zero.
    pub fn new(
        horizon: f64,
        sigma: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        phi: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g0: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g1: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if !(horizon > 0.0 && horizon.is_finite()) {
            return Err(domain(format!("horizon must be positive, got {horizon}")));
        }
        Ok(Self {
            sigma: Box::new(sigma),
            mu: Box::new(|_, _| 0.0),
            b: Box::new(|_, _| 0.0),
            f: Box::new(|_, _| 0.0),
            phi: Box::new(phi),
            g0: Box::new(g0),
            g1: Box::new(g1),
            horizon,
        })
    }

    pub fn with_mu(mut self, mu: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.mu = Box::new(mu);
        self
    }

    pub fn with_b(mut self, b: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.b = Box::new(b);
        self
    }

    pub fn with_f(mut self, f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.f = Box::new(f);
        self
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeStepping {
    pub steps: usize,
    /// 1/2 is Crank-Nicolson, 1 fully implicit.
    pub theta: f64,
    /// Leading steps replaced by two implicit half-steps each.
    pub startup_steps: usize,
    pub variant: FittingVariant,
}

impl TimeStepping {
    /// Crank-Nicolson with a two-step (four half-step) implicit start.
    pub fn crank_nicolson(steps: usize) -> Self {
        Self {
            steps,
            theta: 0.5,
            startup_steps: 2,
            variant: FittingVariant::Ilin,
        }
    }

    pub fn implicit(steps: usize) -> Self {
        Self {
            steps,
            theta: 1.0,
            startup_steps: 0,
            variant: FittingVariant::Ilin,
        }
    }
}

/// Mesh values at every full time level, `levels[0]` being `phi`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParabolicSolution {
    pub x: Vec<f64>,
    pub tau: Vec<f64>,
    pub levels: Vec<Vec<f64>>,
}

impl ParabolicSolution {
    pub fn terminal(&self) -> &[f64] {
        self.levels.last().expect("at least the initial level")
    }
}

const CORNER_TOL: f64 = 1e-8;

struct Operator {
    sub: Vec<f64>,
    diag: Vec<f64>,
    sup: Vec<f64>,
    src: Vec<f64>,
}

fn operator(
    prob: &ParabolicProblem,
    mesh: &Mesh1D,
    variant: FittingVariant,
    tau: f64,
) -> Result<Operator> {
    let n = mesh.intervals() - 1;
    let h = mesh.h();
    let mut op = Operator {
        sub: Vec::with_capacity(n),
        diag: Vec::with_capacity(n),
        sup: Vec::with_capacity(n),
        src: Vec::with_capacity(n),
    };
    for j in 1..=n {
        let x = mesh.x(j);
        let sg = (prob.sigma)(x, tau);
        if !(sg >= 0.0) || !sg.is_finite() {
            return Err(domain(format!(
                "sigma({x}, {tau}) = {sg} must be non-negative"
            )));
        }
        let (lo, di, up) = fitted_row(variant, sg, (prob.mu)(x, tau), (prob.b)(x, tau), h);
        op.sub.push(lo);
        op.diag.push(di);
        op.sup.push(up);
        op.src.push((prob.f)(x, tau));
    }
    Ok(op)
}

// One theta step of length k from tau to tau + k; `u` includes boundaries.
fn theta_step(
    prob: &ParabolicProblem,
    mesh: &Mesh1D,
    variant: FittingVariant,
    u: &[f64],
    tau: f64,
    k: f64,
    theta: f64,
) -> Result<Vec<f64>> {
    let n = mesh.intervals() - 1;
    let new_tau = tau + k;
    let old = operator(prob, mesh, variant, tau)?;
    let new = if theta > 0.0 {
        operator(prob, mesh, variant, new_tau)?
    } else {
        Operator {
            sub: vec![0.0; n],
            diag: vec![0.0; n],
            sup: vec![0.0; n],
            src: vec![0.0; n],
        }
    };
    let g0 = (prob.g0)(new_tau);
    let g1 = (prob.g1)(new_tau);
    let mut rhs = Vec::with_capacity(n);
    for i in 0..n {
        let j = i + 1;
        let explicit =
            old.sub[i] * u[j - 1] + old.diag[i] * u[j] + old.sup[i] * u[j + 1] - old.src[i];
        let mut r = u[j] + (1.0 - theta) * k * explicit - theta * k * new.src[i];
        if i == 0 {
            r += theta * k * new.sub[i] * g0;
        }
        if i == n - 1 {
            r += theta * k * new.sup[i] * g1;
        }
        rhs.push(r);
    }
    let next_inner = if theta > 0.0 {
        let tk = theta * k;
        TridiagonalSystem::new(
            new.sub.iter().map(|v| -tk * v).collect(),
            new.diag.iter().map(|v| 1.0 - tk * v).collect(),
            new.sup.iter().map(|v| -tk * v).collect(),
            rhs,
        )?
        .solve()?
    } else {
        rhs
    };
    let mut next = Vec::with_capacity(mesh.len());
    next.push(g0);
    next.extend(next_inner);
    next.push(g1);
    Ok(next)
}

/// Advances the problem to its horizon.
///
/// With `obstacle`, every (half-)step is followed by the projection
/// `U_j <- max(U_j, obstacle(x_j))` on interior nodes.
pub fn solve(
    prob: &ParabolicProblem,
    mesh: &Mesh1D,
    stepping: &TimeStepping,
    obstacle: Option<&dyn Fn(f64) -> f64>,
) -> Result<ParabolicSolution> {
    if stepping.steps == 0 {
        return Err(domain("need at least one time step"));
    }
    if !(0.0..=1.0).contains(&stepping.theta) {
        return Err(domain(format!(
            "theta must lie in [0, 1], got {}",
            stepping.theta
        )));
    }
    let x = mesh.points();
    let u0: Vec<f64> = x.iter().map(|&xi| (prob.phi)(xi)).collect();
    let (a0, b0) = ((prob.g0)(0.0), (prob.g1)(0.0));
    let n_last = u0.len() - 1;
    for (what, phi, g) in [("left", u0[0], a0), ("right", u0[n_last], b0)] {
        if (phi - g).abs() > CORNER_TOL * (1.0 + phi.abs()) {
            return Err(domain(format!(
                "{what} corner mismatch: initial value {phi} vs boundary value {g}"
            )));
        }
    }

    let obstacle_vals: Option<Vec<f64>> = obstacle.map(|g| x.iter().map(|&xi| g(xi)).collect());
    let project = |u: &mut [f64]| {
        if let Some(ob) = &obstacle_vals {
            let last = u.len() - 1;
            for (v, o) in u[1..last].iter_mut().zip(&ob[1..last]) {
                if *v < *o {
                    *v = *o;
                }
            }
        }
    };

    let k = prob.horizon / stepping.steps as f64;
    let mut levels = Vec::with_capacity(stepping.steps + 1);
    let mut taus = Vec::with_capacity(stepping.steps + 1);
    levels.push(u0);
    taus.push(0.0);
    for n in 0..stepping.steps {
        let tau = n as f64 * k;
        let prev = levels.last().expect("non-empty");
        let mut u = if n < stepping.startup_steps {
            let mut half = theta_step(prob, mesh, stepping.variant, prev, tau, 0.5 * k, 1.0)?;
            project(&mut half);
            theta_step(
                prob,
                mesh,
                stepping.variant,
                &half,
                tau + 0.5 * k,
                0.5 * k,
                1.0,
            )?
        } else {
            theta_step(prob, mesh, stepping.variant, prev, tau, k, stepping.theta)?
        };
        project(&mut u);
        if let Some(j) = u.iter().position(|v| !v.is_finite()) {
            return Err(Error::Numeric(format!(
                "non-finite value at step {} (tau = {}), node {j}",
                n + 1,
                tau + k
            )));
        }
        levels.push(u);
        taus.push(if n + 1 == stepping.steps {
            prob.horizon
        } else {
            tau + k
        });
    }
    Ok(ParabolicSolution {
        x,
        tau: taus,
        levels,
    })
}

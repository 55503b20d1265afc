//! European and American options on the fitted Black-Scholes grid.
//!
//! In the asset price `S` and remaining time `tau` the Black-Scholes
//! equation is
//!
//! ```text
//! V_tau = 1/2 vol(tau)^2 S^2 V_SS + (r - D) S V_S - r V
//! ```
//!
//! solved on `[0, s_max]` with `s_max = 4K` unless overridden. Boundary
//! values: a call is 0 at `S = 0` and `s_max e^{-D tau} - K e^{-r tau}` at
//! `s_max`; a put is `K e^{-r tau}` at `S = 0` and 0 at `s_max`. American
//! contracts take the larger of these and the payoff.

use crate::error::{domain, Result};
use crate::pde::bvp::Coefficient;
use crate::pde::mesh::Mesh1D;
use crate::pde::parabolic::{solve, ParabolicProblem, TimeStepping};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptionKind {
    Call,
    Put,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExerciseStyle {
    European,
    American,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Volatility {
    Constant(f64),
    /// `sigma0 exp(-alpha (T - tau))`: `sigma0` today, decaying towards expiry.
    Decaying {
        sigma0: f64,
        alpha: f64,
    },
}

impl Volatility {
    pub fn at(&self, tau: f64, expiry: f64) -> f64 {
        match *self {
            Volatility::Constant(v) => v,
            Volatility::Decaying { sigma0, alpha } => sigma0 * (-alpha * (expiry - tau)).exp(),
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Volatility::Constant(v) => v >= 0.0 && v.is_finite(),
            Volatility::Decaying { sigma0, alpha } => {
                sigma0 >= 0.0 && sigma0.is_finite() && alpha.is_finite()
            }
        };
        if ok {
            Ok(())
        } else {
            Err(domain(format!("invalid volatility specification {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptionSpec {
    pub kind: OptionKind,
    pub strike: f64,
    pub rate: f64,
    /// Continuous dividend yield (carry).
    pub dividend: f64,
    pub vol: Volatility,
    pub expiry: f64,
    /// Far boundary; `None` means `4 * strike`.
    pub s_max: Option<f64>,
}

impl OptionSpec {
    pub fn new(kind: OptionKind, strike: f64, rate: f64, vol: f64, expiry: f64) -> Self {
        Self {
            kind,
            strike,
            rate,
            dividend: 0.0,
            vol: Volatility::Constant(vol),
            expiry,
            s_max: None,
        }
    }

    pub fn s_max(&self) -> f64 {
        self.s_max.unwrap_or(4.0 * self.strike)
    }

    pub fn payoff(&self, s: f64) -> f64 {
        match self.kind {
            OptionKind::Call => (s - self.strike).max(0.0),
            OptionKind::Put => (self.strike - s).max(0.0),
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.strike > 0.0 && self.strike.is_finite()) {
            return Err(domain(format!(
                "strike must be positive, got {}",
                self.strike
            )));
        }
        if !(self.expiry > 0.0 && self.expiry.is_finite()) {
            return Err(domain(format!(
                "expiry must be positive, got {}",
                self.expiry
            )));
        }
        if !self.rate.is_finite() || !self.dividend.is_finite() {
            return Err(domain("rate and dividend must be finite"));
        }
        if !(self.s_max() > self.strike) || !self.s_max().is_finite() {
            return Err(domain(format!(
                "s_max ({}) must exceed the strike ({})",
                self.s_max(),
                self.strike
            )));
        }
        self.vol.validate()
    }
}

/// Grid resolution: `space` subintervals in S, `time` steps in tau.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub space: usize,
    pub time: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptionGrid {
    pub s: Vec<f64>,
    pub tau: Vec<f64>,
    /// `values[n][j]` at `tau[n]`, `s[j]`; the last level is today.
    pub values: Vec<Vec<f64>>,
    /// Per level, the early-exercise boundary: the largest exercised S for a
    /// put, the smallest for a call. Empty for European contracts.
    pub exercise_boundary: Vec<Option<f64>>,
}

impl OptionGrid {
    pub fn today(&self) -> &[f64] {
        self.values.last().expect("at least one level")
    }

    /// Linear interpolation of today's values.
    pub fn value_at(&self, s: f64) -> Result<f64> {
        interpolate(&self.s, self.today(), s)
    }
}

pub(crate) fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> Result<f64> {
    let (first, last) = (xs[0], xs[xs.len() - 1]);
    if !(x >= first && x <= last) {
        return Err(domain(format!("point {x} outside grid [{first}, {last}]")));
    }
    let k = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1);
    let w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    Ok(ys[k - 1] + w * (ys[k] - ys[k - 1]))
}

fn price(spec: &OptionSpec, grid: GridSpec, style: ExerciseStyle) -> Result<OptionGrid> {
    spec.validate()?;
    let s_max = spec.s_max();
    let mesh = Mesh1D::new(0.0, s_max, grid.space)?;
    let OptionSpec {
        kind,
        strike: k,
        rate: r,
        dividend: d,
        vol,
        expiry,
        ..
    } = *spec;
    let american = style == ExerciseStyle::American;
    let (g0, g1): (Coefficient, Coefficient) = match (kind, american) {
        (OptionKind::Call, false) => (
            Box::new(|_| 0.0),
            Box::new(move |tau| s_max * (-d * tau).exp() - k * (-r * tau).exp()),
        ),
        (OptionKind::Call, true) => (
            Box::new(|_| 0.0),
            Box::new(move |tau| (s_max * (-d * tau).exp() - k * (-r * tau).exp()).max(s_max - k)),
        ),
        (OptionKind::Put, false) => (Box::new(move |tau| k * (-r * tau).exp()), Box::new(|_| 0.0)),
        (OptionKind::Put, true) => (
            Box::new(move |tau| (k * (-r * tau).exp()).max(k)),
            Box::new(|_| 0.0),
        ),
    };
    let payoff = move |s: f64| spec_payoff(kind, k, s);
    let prob = ParabolicProblem::new(
        expiry,
        move |s, tau| {
            let v = vol.at(tau, expiry);
            0.5 * v * v * s * s
        },
        payoff,
        g0,
        g1,
    )?
    .with_mu(move |s, _| (r - d) * s)
    .with_b(move |_, _| -r);

    let stepping = TimeStepping::crank_nicolson(grid.time);
    let obstacle: Option<&dyn Fn(f64) -> f64> = if american { Some(&payoff) } else { None };
    let sol = solve(&prob, &mesh, &stepping, obstacle)?;

    let exercise_boundary = if american {
        sol.levels
            .iter()
            .map(|level| exercise_point(kind, k, &sol.x, level))
            .collect()
    } else {
        Vec::new()
    };
    Ok(OptionGrid {
        s: sol.x,
        tau: sol.tau,
        values: sol.levels,
        exercise_boundary,
    })
}

fn spec_payoff(kind: OptionKind, k: f64, s: f64) -> f64 {
    match kind {
        OptionKind::Call => (s - k).max(0.0),
        OptionKind::Put => (k - s).max(0.0),
    }
}

fn exercise_point(kind: OptionKind, k: f64, s: &[f64], level: &[f64]) -> Option<f64> {
    let tol = 1e-12 * k;
    let last = s.len() - 1;
    let exercised = |j: &usize| {
        let p = spec_payoff(kind, k, s[*j]);
        p > 0.0 && level[*j] <= p + tol
    };
    match kind {
        OptionKind::Put => (1..last).rev().find(exercised).map(|j| s[j]),
        OptionKind::Call => (1..last).find(exercised).map(|j| s[j]),
    }
}

pub fn price_european(spec: &OptionSpec, grid: GridSpec) -> Result<OptionGrid> {
    price(spec, grid, ExerciseStyle::European)
}

/// American contract by projection onto the payoff after every step.
pub fn price_american(spec: &OptionSpec, grid: GridSpec) -> Result<OptionGrid> {
    price(spec, grid, ExerciseStyle::American)
}

pub fn price_option(spec: &OptionSpec, grid: GridSpec, style: ExerciseStyle) -> Result<OptionGrid> {
    price(spec, grid, style)
}

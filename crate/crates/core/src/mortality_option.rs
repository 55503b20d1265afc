//! The option to hold a settlement position only when it pays.
//!
//! Two valuations are reported side by side and never merged:
//!
//! - Monte Carlo: draw the death year `T` from the table and average
//!   `exp(-r T) max(LSV(T), 0)`.
//! - PDE: a notional log-normal index `S` starts at the complete expectation
//!   of life `e_x`, diffuses with volatility equal to the volatility of life
//!   expectancy, and pays `max(LSV(clamp(round(S), 1, n)), 0)` on exercise,
//!   where `n = omega - x + 1` is the longest possible horizon. The American
//!   value on `[0, s_max]` over `n` years is read off at `S = e_x`.

use crate::error::{domain, Result};
use crate::life_table::LifeTable;
use crate::monte_carlo::{DeathYearSampler, RunningMoments};
use crate::pde::mesh::Mesh1D;
use crate::pde::option::interpolate;
use crate::pde::parabolic::{solve, ParabolicProblem, TimeStepping};
use crate::rng::RngStream;
use crate::settlement::{lsv, lsv_schedule, FlatPolicy, PolicySchedule};

/// The settlement position whose value at death drives the payoff.
#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    Flat(FlatPolicy),
    /// Death years beyond the schedule use its last period.
    Schedule(PolicySchedule),
}

impl Policy {
    /// Settlement value if death occurs in year `year >= 1`.
    pub fn value_at_death(&self, year: u32) -> Result<f64> {
        match self {
            Policy::Flat(p) => lsv(p, f64::from(year)),
            Policy::Schedule(s) => lsv_schedule(s, (year as usize).clamp(1, s.len())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MortalityOptionConfig {
    pub n_paths: u64,
    /// Space and time resolution of the PDE grid.
    pub space_steps: usize,
    pub time_steps: usize,
}

impl Default for MortalityOptionConfig {
    fn default() -> Self {
        Self {
            n_paths: 100_000,
            space_steps: 400,
            time_steps: 400,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MortalityOptionValue {
    pub mc_value: f64,
    pub mc_std_error: f64,
    pub pde_value: f64,
}

#[allow(clippy::too_many_arguments)]
pub fn price_mortality_option(
    policy: &Policy,
    table: &LifeTable,
    x: u32,
    vole_sigma: f64,
    r: f64,
    config: &MortalityOptionConfig,
    rng: &mut RngStream,
) -> Result<MortalityOptionValue> {
    if !(0.0..1.0).contains(&vole_sigma) {
        return Err(domain(format!(
            "volatility must lie in [0, 1), got {vole_sigma}"
        )));
    }
    if !(r.is_finite() && r >= 0.0) {
        return Err(domain(format!("rate must be non-negative, got {r}")));
    }
    if config.n_paths == 0 {
        return Err(domain("need at least one path"));
    }
    let sampler = DeathYearSampler::new(table, x)?;
    let horizon = sampler.max_year();
    let payoffs = (1..=horizon)
        .map(|t| Ok(policy.value_at_death(t)?.max(0.0)))
        .collect::<Result<Vec<f64>>>()?;

    let mut moments = RunningMoments::default();
    for _ in 0..config.n_paths {
        let t = sampler.sample(rng);
        moments.push((-r * f64::from(t)).exp() * payoffs[t as usize - 1]);
    }
    let mc = moments.estimate();

    let s0 = table.complete_expectation(x)?;
    let pde_value = pde_value(&payoffs, s0, vole_sigma, r, config)?;
    Ok(MortalityOptionValue {
        mc_value: mc.mean,
        mc_std_error: mc.std_error,
        pde_value,
    })
}

fn pde_value(
    payoffs: &[f64],
    s0: f64,
    vol: f64,
    r: f64,
    config: &MortalityOptionConfig,
) -> Result<f64> {
    let n = payoffs.len();
    let horizon = n as f64;
    let s_max = (4.0 * s0).max(horizon + 1.0);
    let mesh = Mesh1D::new(0.0, s_max, config.space_steps)?;
    let table: Vec<f64> = payoffs.to_vec();
    let payoff = move |s: f64| {
        let year = s.round().clamp(1.0, n as f64) as usize;
        table[year - 1]
    };
    let (left, right) = (payoff(0.0), payoff(s_max));
    let prob = ParabolicProblem::new(
        horizon,
        move |s, _| 0.5 * vol * vol * s * s,
        payoff.clone(),
        move |_| left,
        move |_| right,
    )?
    .with_mu(move |s, _| r * s)
    .with_b(move |_, _| -r);
    let sol = solve(
        &prob,
        &mesh,
        &TimeStepping::crank_nicolson(config.time_steps),
        Some(&payoff),
    )?;
    interpolate(&sol.x, sol.terminal(), s0)
}

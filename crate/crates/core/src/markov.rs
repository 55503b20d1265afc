//! Two-state (alive/dead) continuous-time Markov mortality model.
//!
//! A single life dies at constant rate `d1`. State 1 is alive, state 0 is
//! dead (absorbing), so the transition matrix is
//!
//! ```text
//! R(t) = | 1                 0           |
//!        | 1 - exp(-d1 t)    exp(-d1 t)  |
//! ```
//!
//! and the time until death is exponential with mean `1/d1`.

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoStateModel {
    d1: f64,
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 {
        Ok(())
    } else {
        Err(domain(format!("time must be non-negative, got {t}")))
    }
}

impl TwoStateModel {
    pub fn new(d1: f64) -> Result<Self> {
        if d1 > 0.0 && d1.is_finite() {
            Ok(Self { d1 })
        } else {
            Err(domain(format!(
                "death rate must be positive and finite, got {d1}"
            )))
        }
    }

    /// Calibrates the rate from the mean time until transition: `d1 = 1 / mean`.
    pub fn rate_from_mean(mean_time: f64) -> Result<Self> {
        if !(mean_time > 0.0) {
            return Err(domain(format!(
                "mean time must be positive, got {mean_time}"
            )));
        }
        Self::new(1.0 / mean_time)
    }

    pub fn rate(&self) -> f64 {
        self.d1
    }

    /// Row-stochastic transition matrix, rows/columns ordered (dead, alive).
    pub fn transition_matrix(&self, t: f64) -> Result<[[f64; 2]; 2]> {
        let stay = self.survival(t)?;
        Ok([[1.0, 0.0], [-(-self.d1 * t).exp_m1(), stay]])
    }

    /// `Pr(G > t) = exp(-d1 t)`.
    pub fn survival(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok((-self.d1 * t).exp())
    }

    /// Exponential density `d1 exp(-d1 t)`.
    pub fn pdf(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.d1 * (-self.d1 * t).exp())
    }

    /// `(1/d1, 1/d1^2)`.
    pub fn mean_and_variance(&self) -> (f64, f64) {
        let mean = 1.0 / self.d1;
        (mean, mean * mean)
    }

    /// Inverse-CDF draw `-ln(u) / d1` for `u` in `(0, 1)`.
    pub fn sample_lifetime(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(domain(format!(
                "uniform deviate must lie in (0, 1), got {u}"
            )));
        }
        Ok(-u.ln() / self.d1)
    }
}

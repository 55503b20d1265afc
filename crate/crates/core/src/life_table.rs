//! Life tables and the curtate/complete lifetime machinery.
//!
//! A [`LifeTable`] stores one-year death probabilities `q_x` for consecutive
//! integer ages ending at the terminal age `omega`, where `q_omega = 1`.
//! Continuous quantities are bridged from the discrete table with the uniform
//! distribution of deaths (UDD) approximation: the continuous lifetime is
//! `T = T~ - U` with `T~` the curtate death year and `U ~ Uniform(0, 1)`
//! independent of `T~`, so `E[T] = E[T~] - 1/2` and `Var[T] = Var[T~] + 1/12`.

use crate::error::{data, domain, Result};

/// One-year mortality rates for consecutive integer ages.
#[derive(Debug, Clone, PartialEq)]
pub struct LifeTable {
    first_age: u32,
    qx: Vec<f64>,
}

/// Underwriting adjustments applied on top of a base table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MortalityAssumptions {
    multiplier: f64,
    improvement: f64,
}

/// Probabilities of death in each future policy year for a life aged `start_age`.
///
/// `probs[i - 1]` is the probability that death occurs in year `i`, i.e. in
/// the interval `(i - 1, i]` measured from `start_age`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeathDistribution {
    pub start_age: u32,
    pub probs: Vec<f64>,
}

/// Which second-moment formula [`LifeTable::lifetime_variance`] evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LifetimeVarianceMode {
    /// `Var(T~) + 1/12`, deviations measured from the curtate mean `E[T~]`.
    #[default]
    Corrected,
    /// `sum (e - i)^2 Pr(d_i) + 1/12` with `e` the complete expectation.
    ///
    /// Centering integer death years on the continuous mean adds exactly
    /// `1/4` to the corrected value.
    AsWritten,
}

impl LifeTable {
    /// Builds a table from `(age, q_x)` pairs.
    ///
    /// Ages must be strictly consecutive, every rate must lie in `[0, 1]` and
    /// the last rate must be exactly 1.
    pub fn new(entries: &[(u32, f64)]) -> Result<Self> {
        let (first_age, _) = *entries
            .first()
            .ok_or_else(|| data("life table has no rows"))?;
        for (k, &(age, _)) in entries.iter().enumerate() {
            let expected = first_age as u64 + k as u64;
            if age as u64 != expected {
                return Err(data(format!(
                    "ages must be consecutive: expected {expected}, found {age}"
                )));
            }
        }
        Self::from_qx(first_age, entries.iter().map(|&(_, q)| q).collect())
    }

    /// Builds a table whose first row is `first_age`.
    pub fn from_qx(first_age: u32, qx: Vec<f64>) -> Result<Self> {
        if qx.is_empty() {
            return Err(data("life table has no rows"));
        }
        for (k, &q) in qx.iter().enumerate() {
            if !(0.0..=1.0).contains(&q) {
                return Err(data(format!(
                    "qx at age {} is {q}, outside [0, 1]",
                    first_age as usize + k
                )));
            }
        }
        let last = *qx.last().unwrap();
        if last != 1.0 {
            return Err(data(format!(
                "terminal qx at age {} must equal 1 (death certain in final year), found {last}",
                first_age as usize + qx.len() - 1
            )));
        }
        Ok(Self { first_age, qx })
    }

    /// The bundled synthetic table (see [`GompertzPlateau`]).
    pub fn sample() -> Self {
        crate::io::read_life_table(SAMPLE_TABLE_CSV.as_bytes())
            .expect("bundled sample table is valid")
    }

    pub fn first_age(&self) -> u32 {
        self.first_age
    }

    /// Terminal age.
    pub fn omega(&self) -> u32 {
        self.first_age + self.qx.len() as u32 - 1
    }

    pub fn len(&self) -> usize {
        self.qx.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qx.is_empty()
    }

    /// `q_x` for a single age.
    pub fn qx(&self, age: u32) -> Result<f64> {
        Ok(self.qx[self.offset(age)?])
    }

    /// Iterates `(age, q_x)` in ascending age order.
    pub fn entries(&self) -> impl Iterator<Item = (u32, f64)> + '_ {
        self.qx
            .iter()
            .enumerate()
            .map(move |(k, &q)| (self.first_age + k as u32, q))
    }

    fn offset(&self, age: u32) -> Result<usize> {
        if age < self.first_age || age > self.omega() {
            return Err(domain(format!(
                "age {age} outside table range {}..={}",
                self.first_age,
                self.omega()
            )));
        }
        Ok((age - self.first_age) as usize)
    }

    /// `tpx`, the probability that a life aged `x` survives `t` more years.
    ///
    /// Valid for `0 <= t <= omega - x + 1`.
    pub fn survival_probability(&self, x: u32, t: u32) -> Result<f64> {
        let start = self.offset(x)?;
        let horizon = self.qx.len() - start;
        if t as usize > horizon {
            return Err(domain(format!(
                "survival horizon {t} exceeds omega + 1 - x = {horizon}"
            )));
        }
        Ok(self.qx[start..start + t as usize]
            .iter()
            .map(|q| 1.0 - q)
            .product())
    }

    /// Curtate death-year distribution `Pr(d_i) = (i-1)px * q_{x+i-1}`.
    pub fn death_distribution(&self, x: u32) -> Result<DeathDistribution> {
        let start = self.offset(x)?;
        let mut alive = 1.0;
        let probs = self.qx[start..]
            .iter()
            .map(|&q| {
                let p = alive * q;
                alive *= 1.0 - q;
                p
            })
            .collect();
        Ok(DeathDistribution {
            start_age: x,
            probs,
        })
    }

    /// `E[T~] = sum_{k >= 0} kpx`, the mean curtate death year.
    pub fn curtate_expectation(&self, x: u32) -> Result<f64> {
        let start = self.offset(x)?;
        let mut alive = 1.0;
        let mut total = 0.0;
        for &q in &self.qx[start..] {
            total += alive;
            alive *= 1.0 - q;
        }
        Ok(total)
    }

    /// Complete expectation of life, `E[T~] - 1/2` under UDD.
    pub fn complete_expectation(&self, x: u32) -> Result<f64> {
        Ok(self.curtate_expectation(x)? - 0.5)
    }

    /// Variance of the continuous remaining lifetime.
    pub fn lifetime_variance(&self, x: u32, mode: LifetimeVarianceMode) -> Result<f64> {
        let dist = self.death_distribution(x)?;
        let center = match mode {
            LifetimeVarianceMode::Corrected => dist.mean(),
            LifetimeVarianceMode::AsWritten => self.complete_expectation(x)?,
        };
        let second: f64 = dist
            .probs
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let dev = center - (k + 1) as f64;
                dev * dev * p
            })
            .sum();
        Ok(second + 1.0 / 12.0)
    }

    /// Applies a multiplier and a flat annual improvement rate.
    ///
    /// `q'_{x+t} = min(1, m * q_{x+t} * (1 - imp)^t)` where `t` counts years
    /// from the table's first age. The terminal rate stays at 1.
    pub fn apply_assumptions(&self, a: &MortalityAssumptions) -> LifeTable {
        let last = self.qx.len() - 1;
        let qx = self
            .qx
            .iter()
            .enumerate()
            .map(|(t, &q)| {
                if t == last {
                    1.0
                } else {
                    (a.multiplier * q * (1.0 - a.improvement).powi(t as i32)).min(1.0)
                }
            })
            .collect();
        LifeTable {
            first_age: self.first_age,
            qx,
        }
    }
}

impl MortalityAssumptions {
    pub fn new(multiplier: f64, improvement: f64) -> Result<Self> {
        if !(multiplier > 0.0 && multiplier.is_finite()) {
            return Err(domain(format!(
                "multiplier must be positive, got {multiplier}"
            )));
        }
        if !(0.0..1.0).contains(&improvement) {
            return Err(domain(format!(
                "improvement must lie in [0, 1), got {improvement}"
            )));
        }
        Ok(Self {
            multiplier,
            improvement,
        })
    }

    pub fn multiplier(&self) -> f64 {
        self.multiplier
    }

    pub fn improvement(&self) -> f64 {
        self.improvement
    }
}

impl Default for MortalityAssumptions {
    fn default() -> Self {
        Self {
            multiplier: 1.0,
            improvement: 0.0,
        }
    }
}

impl DeathDistribution {
    /// Number of possible death years, `omega - x + 1`.
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Mean curtate death year `sum i * Pr(d_i)`.
    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(k, p)| (k + 1) as f64 * p)
            .sum()
    }

    /// Cumulative probabilities; the last entry is pinned to exactly 1.
    pub fn cdf(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out: Vec<f64> = self
            .probs
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        if let Some(last) = out.last_mut() {
            *last = 1.0;
        }
        out
    }
}

/// Gompertz hazard `B c^x` capped at a late-life plateau.
///
/// The force of mortality is `mu(x) = min(B c^x, plateau)`; one-year rates
/// are `q_x = 1 - exp(-(H(x+1) - H(x)))` with `H` the integrated hazard, and
/// the terminal rate is forced to 1. The plateau reproduces the mortality
/// deceleration seen at extreme ages, which is what makes the remaining
/// lifetime of very old lives heavier-tailed than at younger ages.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GompertzPlateau {
    pub b: f64,
    pub c: f64,
    pub plateau: f64,
    pub first_age: u32,
    pub omega: u32,
}

impl Default for GompertzPlateau {
    /// Calibrated so the complete expectation at 70 is close to 15 years.
    fn default() -> Self {
        Self {
            b: 1.2e-4,
            c: 1.08,
            plateau: 0.2,
            first_age: 20,
            omega: 120,
        }
    }
}

impl GompertzPlateau {
    fn cumulative_hazard(&self, x: f64) -> f64 {
        let ln_c = self.c.ln();
        let knee = (self.plateau / self.b).ln() / ln_c;
        let gompertz = |y: f64| self.b * (self.c.powf(y) - 1.0) / ln_c;
        if x <= knee {
            gompertz(x)
        } else {
            gompertz(knee) + self.plateau * (x - knee)
        }
    }

    pub fn to_table(&self) -> Result<LifeTable> {
        if !(self.b > 0.0 && self.c > 1.0 && self.plateau > 0.0) {
            return Err(domain(
                "Gompertz parameters must satisfy b > 0, c > 1, plateau > 0",
            ));
        }
        if self.omega <= self.first_age {
            return Err(domain("omega must exceed the first age"));
        }
        let qx = (self.first_age..=self.omega)
            .map(|age| {
                if age == self.omega {
                    1.0
                } else {
                    let x = age as f64;
                    let dh = self.cumulative_hazard(x + 1.0) - self.cumulative_hazard(x);
                    -(-dh).exp_m1()
                }
            })
            .collect();
        LifeTable::from_qx(self.first_age, qx)
    }
}

/// CSV text of the bundled sample table, generated from [`GompertzPlateau::default`].
pub const SAMPLE_TABLE_CSV: &str = include_str!("../data/sample_table.csv");

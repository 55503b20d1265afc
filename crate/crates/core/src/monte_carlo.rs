//! Seeded Monte Carlo: Box-Muller normals, death-year simulation, V.O.L.E.
//! and exact log-normal stepping with a randomized death horizon.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::life_table::LifeTable;
use crate::rng::RngStream;

/// Maps two uniforms on `(0, 1)` to two independent standard normals.
pub fn box_muller(r1: f64, r2: f64) -> Result<(f64, f64)> {
    if !(r1 > 0.0 && r1 < 1.0 && r2 > 0.0 && r2 < 1.0) {
        return Err(domain(format!(
            "Box-Muller inputs must lie in (0, 1), got ({r1}, {r2})"
        )));
    }
    let radius = (-2.0 * r1.ln()).sqrt();
    let (s, c) = (2.0 * PI * r2).sin_cos();
    Ok((radius * c, radius * s))
}

/// Inverse-CDF sampler over a life's curtate death-year distribution.
///
/// Building the CDF once and binary-searching it is what makes large
/// simulations cheap; the result is identical to a linear scan.
#[derive(Debug, Clone)]
pub struct DeathYearSampler {
    cdf: Vec<f64>,
}

impl DeathYearSampler {
    pub fn new(table: &LifeTable, x: u32) -> Result<Self> {
        Ok(Self {
            cdf: table.death_distribution(x)?.cdf(),
        })
    }

    /// Largest possible death year, `omega - x + 1`.
    pub fn max_year(&self) -> u32 {
        self.cdf.len() as u32
    }

    /// Smallest year `i` with `F(i) >= u`.
    pub fn year_for(&self, u: f64) -> u32 {
        let k = self.cdf.partition_point(|&c| c < u);
        (k.min(self.cdf.len() - 1) + 1) as u32
    }

    pub fn sample(&self, rng: &mut RngStream) -> u32 {
        self.year_for(rng.uniform())
    }
}

/// Draws one death year in `1..=omega - x + 1`.
pub fn sample_death_year(table: &LifeTable, x: u32, rng: &mut RngStream) -> Result<u32> {
    Ok(DeathYearSampler::new(table, x)?.sample(rng))
}

/// Summary of a batch of simulated death years.
///
/// All statistics derive from the integer histogram, so merging partial
/// summaries is exact and independent of grouping.
#[derive(Debug, Clone, PartialEq)]
pub struct SimSummary {
    pub n: u64,
    /// Most frequent death year; ties go to the earlier year.
    pub mode: u32,
    /// Latest simulated death year.
    pub max: u32,
    /// Mean simulated death year.
    pub mean: f64,
    /// `histogram[i - 1]` counts deaths in year `i`.
    pub histogram: Vec<u64>,
}

impl SimSummary {
    pub fn from_histogram(histogram: Vec<u64>) -> Result<Self> {
        let n: u64 = histogram.iter().sum();
        if n == 0 {
            return Err(domain("summary needs at least one draw"));
        }
        let mut mode = 0usize;
        for (k, &c) in histogram.iter().enumerate() {
            if c > histogram[mode] {
                mode = k;
            }
        }
        let max = histogram.iter().rposition(|&c| c > 0).unwrap();
        let weighted: u128 = histogram
            .iter()
            .enumerate()
            .map(|(k, &c)| (k as u128 + 1) * c as u128)
            .sum();
        Ok(Self {
            n,
            mode: mode as u32 + 1,
            max: max as u32 + 1,
            mean: weighted as f64 / n as f64,
            histogram,
        })
    }

    /// Combines two summaries of disjoint samples.
    pub fn merge(&self, other: &SimSummary) -> SimSummary {
        let len = self.histogram.len().max(other.histogram.len());
        let hist = (0..len)
            .map(|k| {
                self.histogram.get(k).copied().unwrap_or(0)
                    + other.histogram.get(k).copied().unwrap_or(0)
            })
            .collect();
        SimSummary::from_histogram(hist).expect("merged summaries are non-empty")
    }

    /// `(year, count)` rows for every year in the support of the table.
    pub fn histogram_rows(&self) -> impl Iterator<Item = (u32, u64)> + '_ {
        self.histogram
            .iter()
            .enumerate()
            .map(|(k, &c)| (k as u32 + 1, c))
    }
}

/// Simulates `n` independent death years for a life aged `x`.
pub fn simulate_deaths(
    table: &LifeTable,
    x: u32,
    n: u64,
    rng: &mut RngStream,
) -> Result<SimSummary> {
    if n == 0 {
        return Err(domain("number of simulations must be at least 1"));
    }
    let sampler = DeathYearSampler::new(table, x)?;
    let mut hist = vec![0u64; sampler.max_year() as usize];
    for _ in 0..n {
        hist[sampler.sample(rng) as usize - 1] += 1;
    }
    SimSummary::from_histogram(hist)
}

/// Runs `n` draws split across `streams` independent streams of `seed` in
/// parallel threads.
///
/// Stream `i` performs `n / streams` draws, plus one if `i < n % streams`.
/// The result equals simulating stream 0, then stream 1, ... sequentially
/// and concatenating, whatever the thread scheduling.
pub fn simulate_deaths_partitioned(
    table: &LifeTable,
    x: u32,
    n: u64,
    seed: u64,
    streams: u64,
) -> Result<SimSummary> {
    if n == 0 {
        return Err(domain("number of simulations must be at least 1"));
    }
    if streams == 0 || streams > n {
        return Err(domain(format!(
            "stream count must lie in 1..={n}, got {streams}"
        )));
    }
    let sampler = DeathYearSampler::new(table, x)?;
    let base = n / streams;
    let extra = n % streams;
    let parts: Vec<Vec<u64>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..streams)
            .map(|id| {
                let sampler = &sampler;
                scope.spawn(move || {
                    let mut rng = RngStream::new(seed, id);
                    let draws = base + u64::from(id < extra);
                    let mut hist = vec![0u64; sampler.max_year() as usize];
                    for _ in 0..draws {
                        hist[sampler.sample(&mut rng) as usize - 1] += 1;
                    }
                    hist
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut total = vec![0u64; sampler.max_year() as usize];
    for part in parts {
        for (t, c) in total.iter_mut().zip(part) {
            *t += c;
        }
    }
    SimSummary::from_histogram(total)
}

/// Volatility of life expectancy, `1 - e / max`.
pub fn vole(e_complete: f64, max_death: f64) -> Result<f64> {
    if !(max_death > 0.0 && max_death.is_finite()) {
        return Err(domain(format!(
            "maximum death time must be positive, got {max_death}"
        )));
    }
    if !(e_complete > 0.0) {
        return Err(domain(format!(
            "life expectancy must be positive, got {e_complete}"
        )));
    }
    if e_complete > max_death {
        return Err(domain(format!(
            "life expectancy {e_complete} exceeds maximum death time {max_death}"
        )));
    }
    Ok(1.0 - e_complete / max_death)
}

/// Log-normal dynamics `d(log S) = (r - sigma^2/2) dt + sigma dX`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbmParams {
    pub s0: f64,
    pub r: f64,
    pub sigma: f64,
}

impl GbmParams {
    pub fn new(s0: f64, r: f64, sigma: f64) -> Result<Self> {
        if !(s0 > 0.0 && s0.is_finite()) {
            return Err(domain(format!("initial value must be positive, got {s0}")));
        }
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(domain(format!(
                "volatility must be non-negative, got {sigma}"
            )));
        }
        if !r.is_finite() {
            return Err(domain("rate must be finite"));
        }
        Ok(Self { s0, r, sigma })
    }

    /// Exact step from `s` over `dt` driven by the normal deviate `eps`.
    pub fn step(&self, s: f64, dt: f64, eps: f64) -> Result<f64> {
        if !(dt >= 0.0) {
            return Err(domain(format!("time step must be non-negative, got {dt}")));
        }
        let drift = (self.r - 0.5 * self.sigma * self.sigma) * dt;
        Ok(s * (drift + self.sigma * dt.sqrt() * eps).exp())
    }

    /// Samples `S(t)` in a single exact jump from `s0`.
    pub fn terminal(&self, t: f64, rng: &mut RngStream) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(domain(format!("horizon must be non-negative, got {t}")));
        }
        if t == 0.0 {
            return Ok(self.s0);
        }
        self.step(self.s0, t, rng.standard_normal())
    }

    /// Samples `S(t)` by composing `steps` exact sub-steps.
    pub fn path_terminal(&self, t: f64, steps: usize, rng: &mut RngStream) -> Result<f64> {
        if steps == 0 {
            return Err(domain("path needs at least one step"));
        }
        if !(t >= 0.0) {
            return Err(domain(format!("horizon must be non-negative, got {t}")));
        }
        let dt = t / steps as f64;
        let mut s = self.s0;
        for _ in 0..steps {
            s = self.step(s, dt, rng.standard_normal())?;
        }
        Ok(s)
    }
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: u64,
}

/// Streaming mean/variance accumulator (Welford).
#[derive(Debug, Clone, Copy, Default)]
pub struct RunningMoments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance.
    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn estimate(&self) -> McEstimate {
        McEstimate {
            mean: self.mean,
            std_error: (self.variance() / self.n as f64).sqrt(),
            n: self.n,
        }
    }
}

/// Expected payoff when the horizon is the simulated death year.
///
/// Each path draws `T` from the life's death-year distribution, then
/// `S(T)` in one exact jump, and evaluates `payoff(S(T), T)`. Discounting is
/// up to the payoff.
pub fn randomized_horizon_payoff<F>(
    params: &GbmParams,
    table: &LifeTable,
    x: u32,
    payoff: F,
    n: u64,
    rng: &mut RngStream,
) -> Result<McEstimate>
where
    F: Fn(f64, u32) -> f64,
{
    if n < 2 {
        return Err(domain("need at least 2 paths for a standard error"));
    }
    let sampler = DeathYearSampler::new(table, x)?;
    let mut acc = RunningMoments::default();
    for _ in 0..n {
        let year = sampler.sample(rng);
        let s = params.terminal(year as f64, rng)?;
        acc.push(payoff(s, year));
    }
    Ok(acc.estimate())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_muller_closed_forms() {
        let (y1, y2) = box_muller((-0.5f64).exp(), 0.5).unwrap();
        assert!((y1 + 1.0).abs() < 1e-15 && y2.abs() < 1e-15);
        let (y1, y2) = box_muller((-2.0f64).exp(), 0.25).unwrap();
        assert!(y1.abs() < 1e-15 && (y2 - 2.0).abs() < 1e-15);
        assert!(box_muller(0.0, 0.5).is_err());
        assert!(box_muller(0.5, 1.0).is_err());
    }

    #[test]
    fn certain_death_always_year_one() {
        let t = LifeTable::from_qx(90, vec![1.0, 1.0]).unwrap();
        let mut rng = RngStream::new(1, 0);
        for _ in 0..100 {
            assert_eq!(sample_death_year(&t, 90, &mut rng).unwrap(), 1);
        }
        let s = simulate_deaths(&t, 90, 100, &mut rng).unwrap();
        assert_eq!((s.mode, s.max, s.n), (1, 1, 100));
    }

    #[test]
    fn mode_ties_go_to_earlier_year() {
        let s = SimSummary::from_histogram(vec![2, 5, 5, 1]).unwrap();
        assert_eq!((s.mode, s.max), (2, 4));
        assert!(SimSummary::from_histogram(vec![0, 0]).is_err());
    }

    #[test]
    fn vole_arithmetic() {
        assert_eq!(vole(10.0, 10.0).unwrap(), 0.0);
        assert_eq!(vole(5.0, 20.0).unwrap(), 0.75);
        assert!(vole(21.0, 20.0).is_err());
        assert!(vole(1.0, 0.0).is_err());
    }

    #[test]
    fn gbm_deterministic_cases() {
        let p = GbmParams::new(100.0, 0.05, 0.0).unwrap();
        assert!((p.step(100.0, 2.0, 3.7).unwrap() - 100.0 * 0.1f64.exp()).abs() < 1e-12);
        let q = GbmParams::new(100.0, 0.05, 0.2).unwrap();
        let drift_only = 100.0 * ((0.05 - 0.02) * 1.0f64).exp();
        assert!((q.step(100.0, 1.0, 0.0).unwrap() - drift_only).abs() < 1e-12);
        let mut rng = RngStream::new(3, 0);
        assert_eq!(q.terminal(0.0, &mut rng).unwrap(), 100.0);
        assert!((p.terminal(1.0, &mut rng).unwrap() - 100.0 * 0.05f64.exp()).abs() < 1e-12);
        assert!(q.step(1.0, -1.0, 0.0).is_err());
        assert!(GbmParams::new(0.0, 0.0, 0.1).is_err());
        assert!(GbmParams::new(1.0, 0.0, -0.1).is_err());
    }

    #[test]
    fn constant_payoff_has_zero_error() {
        let t = LifeTable::sample();
        let p = GbmParams::new(1.0, 0.03, 0.2).unwrap();
        let mut rng = RngStream::new(5, 0);
        let est = randomized_horizon_payoff(&p, &t, 70, |_, _| 1.0, 1000, &mut rng).unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.std_error, 0.0);
        assert!(randomized_horizon_payoff(&p, &t, 70, |_, _| 1.0, 1, &mut rng).is_err());
    }

    #[test]
    fn partitioned_requires_sane_stream_count() {
        let t = LifeTable::sample();
        assert!(simulate_deaths_partitioned(&t, 70, 10, 1, 0).is_err());
        assert!(simulate_deaths_partitioned(&t, 70, 10, 1, 11).is_err());
        assert!(simulate_deaths(&t, 70, 0, &mut RngStream::new(1, 0)).is_err());
    }
}

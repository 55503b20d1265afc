//! Independent reference values used across the integration tests.
#![allow(dead_code)]

use longevity_core::pde::option::OptionKind;
use statrs::distribution::{ContinuousCDF, Normal};

/// Black-Scholes price without dividends.
pub fn black_scholes(kind: OptionKind, s: f64, k: f64, r: f64, vol: f64, t: f64) -> f64 {
    let n = Normal::new(0.0, 1.0).unwrap();
    let sd = vol * t.sqrt();
    let d1 = ((s / k).ln() + (r + 0.5 * vol * vol) * t) / sd;
    let d2 = d1 - sd;
    let df = (-r * t).exp();
    match kind {
        OptionKind::Call => s * n.cdf(d1) - k * df * n.cdf(d2),
        OptionKind::Put => k * df * n.cdf(-d2) - s * n.cdf(-d1),
    }
}

/// Cox-Ross-Rubinstein tree with continuous dividend yield `q`.
#[allow(clippy::too_many_arguments)]
pub fn binomial(
    kind: OptionKind,
    s: f64,
    k: f64,
    r: f64,
    q: f64,
    vol: f64,
    t: f64,
    steps: usize,
    american: bool,
) -> f64 {
    let dt = t / steps as f64;
    let u = (vol * dt.sqrt()).exp();
    let d = 1.0 / u;
    let p = (((r - q) * dt).exp() - d) / (u - d);
    let disc = (-r * dt).exp();
    let payoff = |x: f64| match kind {
        OptionKind::Call => (x - k).max(0.0),
        OptionKind::Put => (k - x).max(0.0),
    };
    let mut v: Vec<f64> = (0..=steps)
        .map(|i| payoff(s * u.powi(i as i32) * d.powi((steps - i) as i32)))
        .collect();
    for n in (0..steps).rev() {
        for i in 0..=n {
            let cont = disc * (p * v[i + 1] + (1.0 - p) * v[i]);
            v[i] = if american {
                cont.max(payoff(s * u.powi(i as i32) * d.powi((n - i) as i32)))
            } else {
                cont
            };
        }
    }
    v[0]
}

pub fn binomial_american(
    kind: OptionKind,
    s: f64,
    k: f64,
    r: f64,
    vol: f64,
    t: f64,
    steps: usize,
) -> f64 {
    binomial(kind, s, k, r, 0.0, vol, t, steps, true)
}

/// Inverse of the chi-square 0.999 quantile lookup via statrs.
pub fn chi_square_critical(dof: f64, p: f64) -> f64 {
    use statrs::distribution::ChiSquared;
    ChiSquared::new(dof).unwrap().inverse_cdf(p)
}

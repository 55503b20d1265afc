//! Exponential fitting factors.
//!
//! With cell Péclet number `q = mu h / (2 sigma)` the fitted scheme replaces
//! the diffusion `sigma` by `sigma * rho(q)`. The Il'in factor
//! `rho = q coth q` makes the scheme exact for constant coefficients; the
//! rational and square-root variants share its limits (`rho -> 1` as
//! `q -> 0`, `rho ~ |q|` as `|q| -> inf`).
//!
//! Assembly needs `rho - q` and `rho + q`, which for large `|q|` are the
//! difference of two nearly equal numbers. [`split`] evaluates both in
//! cancellation-free form.

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FittingVariant {
    /// `q coth q`.
    #[default]
    Ilin,
    /// `1 + q^2 / (1 + |q|)`.
    Rational,
    /// `sqrt(1 + q^2)`.
    Sqrt,
}

const SERIES_CUTOFF: f64 = 1e-4;

/// `q coth q`, by its Taylor series near zero.
pub fn q_coth_q(q: f64) -> f64 {
    if q.abs() < SERIES_CUTOFF {
        let q2 = q * q;
        1.0 + q2 / 3.0 - q2 * q2 / 45.0
    } else {
        q / q.tanh()
    }
}

/// The Il'in factor for drift `mu`, spacing `h` and diffusion `sigma`.
///
/// `sigma = 0` returns infinity: the fitted stencil degenerates to the
/// pure upwind stencil, which the assembly routines handle separately.
pub fn fitting_factor(mu: f64, h: f64, sigma: f64) -> Result<f64> {
    if !(sigma >= 0.0) || !(h > 0.0) || !mu.is_finite() {
        return Err(domain(format!(
            "fitting factor needs sigma >= 0, h > 0 and finite mu (got sigma={sigma}, h={h}, mu={mu})"
        )));
    }
    if sigma == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(q_coth_q(mu * h / (2.0 * sigma)))
}

/// `(rho0, rho1, rho2)`: the rational, square-root and Il'in factors at `q`.
pub fn fitting_factor_variants(q: f64) -> (f64, f64, f64) {
    let aq = q.abs();
    (1.0 + q * q / (1.0 + aq), 1f64.hypot(q), q_coth_q(q))
}

impl FittingVariant {
    pub fn rho(self, q: f64) -> f64 {
        let (r0, r1, r2) = fitting_factor_variants(q);
        match self {
            FittingVariant::Rational => r0,
            FittingVariant::Sqrt => r1,
            FittingVariant::Ilin => r2,
        }
    }
}

/// `(rho - q, rho + q)`, both non-negative.
pub fn split(variant: FittingVariant, q: f64) -> (f64, f64) {
    match variant {
        FittingVariant::Ilin => {
            if q.abs() < SERIES_CUTOFF {
                let rho = q_coth_q(q);
                (rho - q, rho + q)
            } else {
                (2.0 * q / (2.0 * q).exp_m1(), -2.0 * q / (-2.0 * q).exp_m1())
            }
        }
        FittingVariant::Rational | FittingVariant::Sqrt => {
            let aq = q.abs();
            // rho - |q| without cancellation.
            let small = match variant {
                FittingVariant::Rational => 1.0 / (1.0 + aq),
                _ => 1.0 / (1f64.hypot(aq) + aq),
            };
            let large = small + 2.0 * aq;
            if q >= 0.0 {
                (small, large)
            } else {
                (large, small)
            }
        }
    }
}

/// Fitted stencil `(sub, diag, sup)` for `sigma u'' + mu u' + b u` at one
/// node with spacing `h`. `sigma = 0` gives the first-order upwind stencil.
pub fn fitted_row(variant: FittingVariant, sigma: f64, mu: f64, b: f64, h: f64) -> (f64, f64, f64) {
    let (sub, sup) = if sigma == 0.0 {
        (mu.min(0.0).abs() / h, mu.max(0.0) / h)
    } else {
        let q = mu * h / (2.0 * sigma);
        let (lo, hi) = split(variant, q);
        let s = sigma / (h * h);
        (s * lo, s * hi)
    };
    (sub, -(sub + sup) + b, sup)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_limits() {
        assert_eq!(q_coth_q(0.0), 1.0);
        assert!((q_coth_q(1.0) - 1.0 / 1f64.tanh()).abs() < 1e-15);
        assert!((q_coth_q(1.0) - 1.313035285499331).abs() < 1e-12);
        assert!((q_coth_q(10.0) - 10.0).abs() < 1e-7);
        assert_eq!(q_coth_q(-2.0), q_coth_q(2.0));
        // Series and direct forms meet continuously at the cutoff.
        let q = SERIES_CUTOFF * 0.999_999;
        assert!((q_coth_q(q) - q / q.tanh()).abs() < 1e-15);
    }

    #[test]
    fn factor_from_parameters() {
        assert!((fitting_factor(2.0, 0.01, 0.01).unwrap() - q_coth_q(1.0)).abs() < 1e-15);
        assert_eq!(fitting_factor(2.0, 0.01, 0.0).unwrap(), f64::INFINITY);
        assert!(fitting_factor(2.0, 0.01, -1.0).is_err());
    }

    #[test]
    fn variants() {
        assert_eq!(fitting_factor_variants(0.0), (1.0, 1.0, 1.0));
        let (r0, r1, r2) = fitting_factor_variants(1.0);
        assert_eq!(r0, 1.5);
        assert!((r1 - 2f64.sqrt()).abs() < 1e-15);
        assert!((r2 - 1.0 / 1f64.tanh()).abs() < 1e-15);
        for q in [1e-3, 1e-2, 0.05] {
            let (a, b, c) = fitting_factor_variants(q);
            // All three agree with 1 + O(q^2) near zero.
            for v in [a, b, c] {
                assert!((v - 1.0).abs() <= q * q, "q={q} v={v}");
            }
        }
    }

    #[test]
    fn split_matches_naive_where_safe() {
        for v in [
            FittingVariant::Ilin,
            FittingVariant::Rational,
            FittingVariant::Sqrt,
        ] {
            for q in [-3.0, -0.5, -1e-5, 0.0, 1e-5, 0.3, 2.0] {
                let rho = v.rho(q);
                let (lo, hi) = split(v, q);
                assert!((lo - (rho - q)).abs() < 1e-12, "{v:?} q={q}");
                assert!((hi - (rho + q)).abs() < 1e-12, "{v:?} q={q}");
            }
            let (lo, hi) = split(v, 1e6);
            assert!((0.0..1e-5).contains(&lo));
            assert!((hi - 2e6).abs() < 1.0);
        }
    }

    #[test]
    fn zero_diffusion_is_upwind() {
        assert_eq!(
            fitted_row(FittingVariant::Ilin, 0.0, 2.0, -1.0, 0.5),
            (0.0, -5.0, 4.0)
        );
        assert_eq!(
            fitted_row(FittingVariant::Ilin, 0.0, -2.0, 0.0, 0.5),
            (4.0, -4.0, 0.0)
        );
    }
}

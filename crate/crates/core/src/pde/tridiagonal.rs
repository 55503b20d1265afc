//! Tridiagonal linear systems.

use crate::error::{domain, Error, Result};

/// `sub[i] x[i-1] + diag[i] x[i] + sup[i] x[i+1] = rhs[i]`.
///
/// All four vectors have length `n`; `sub[0]` and `sup[n-1]` are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
}

impl TridiagonalSystem {
    pub fn new(sub: Vec<f64>, diag: Vec<f64>, sup: Vec<f64>, rhs: Vec<f64>) -> Result<Self> {
        let n = diag.len();
        if n == 0 || sub.len() != n || sup.len() != n || rhs.len() != n {
            return Err(domain(format!(
                "inconsistent tridiagonal dimensions: sub {}, diag {n}, sup {}, rhs {}",
                sub.len(),
                sup.len(),
                rhs.len()
            )));
        }
        Ok(Self {
            sub,
            diag,
            sup,
            rhs,
        })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Thomas algorithm (no pivoting). Intended for diagonally dominant or
    /// M-matrix systems.
    pub fn solve(&self) -> Result<Vec<f64>> {
        let n = self.len();
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];
        let mut pivot = self.diag[0];
        check_pivot(pivot, 0)?;
        c[0] = self.sup[0] / pivot;
        d[0] = self.rhs[0] / pivot;
        for i in 1..n {
            pivot = self.diag[i] - self.sub[i] * c[i - 1];
            check_pivot(pivot, i)?;
            c[i] = self.sup[i] / pivot;
            d[i] = (self.rhs[i] - self.sub[i] * d[i - 1]) / pivot;
        }
        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        finite(d)
    }

    /// Gaussian elimination with partial pivoting (the LAPACK `gtsv`
    /// scheme). Stable for any nonsingular tridiagonal matrix.
    pub fn solve_pivoted(&self) -> Result<Vec<f64>> {
        let n = self.len();
        let mut d = self.diag.clone();
        let mut b = self.rhs.clone();
        if n == 1 {
            check_pivot(d[0], 0)?;
            return finite(vec![b[0] / d[0]]);
        }
        // dl[i] = A[i+1][i], du[i] = A[i][i+1], du2[i] = A[i][i+2] (fill-in).
        let mut dl: Vec<f64> = self.sub[1..].to_vec();
        let mut du: Vec<f64> = self.sup[..n - 1].to_vec();
        let mut du2 = vec![0.0; n];
        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                check_pivot(d[i], i)?;
                let fact = dl[i] / d[i];
                d[i + 1] -= fact * du[i];
                b[i + 1] -= fact * b[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                let temp = d[i + 1];
                d[i + 1] = du[i] - fact * temp;
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du2[i];
                }
                du[i] = temp;
                let tb = b[i];
                b[i] = b[i + 1];
                b[i + 1] = tb - fact * b[i + 1];
            }
            dl[i] = 0.0;
        }
        check_pivot(d[n - 1], n - 1)?;
        let mut x = vec![0.0; n];
        x[n - 1] = b[n - 1] / d[n - 1];
        x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
        for i in (0..n.saturating_sub(2)).rev() {
            x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
        }
        finite(x)
    }

    /// `A x - rhs`.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i] - self.rhs[i];
                if i > 0 {
                    v += self.sub[i] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.sup[i] * x[i + 1];
                }
                v
            })
            .collect()
    }
}

fn check_pivot(p: f64, row: usize) -> Result<()> {
    if p == 0.0 || !p.is_finite() {
        Err(Error::Numeric(format!(
            "zero or non-finite pivot at row {row}"
        )))
    } else {
        Ok(())
    }
}

fn finite(x: Vec<f64>) -> Result<Vec<f64>> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(Error::Numeric(format!(
            "non-finite solution component at row {i}"
        ))),
        None => Ok(x),
    }
}

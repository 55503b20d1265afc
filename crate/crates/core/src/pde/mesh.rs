//! Uniform one-dimensional meshes and divided differences.

use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh1D {
    a: f64,
    b: f64,
    intervals: usize,
    h: f64,
}

impl Mesh1D {
    /// `intervals` subintervals (`intervals + 1` points) on `[a, b]`.
    pub fn new(a: f64, b: f64, intervals: usize) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(domain(format!("mesh needs finite a < b, got [{a}, {b}]")));
        }
        if intervals < 2 {
            return Err(domain(format!(
                "mesh needs at least 2 intervals, got {intervals}"
            )));
        }
        Ok(Self {
            a,
            b,
            intervals,
            h: (b - a) / intervals as f64,
        })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// `J`, the number of subintervals.
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    /// `J + 1`, the number of mesh points.
    pub fn len(&self) -> usize {
        self.intervals + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x(&self, j: usize) -> f64 {
        if j == self.intervals {
            self.b
        } else {
            self.a + j as f64 * self.h
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.x(j)).collect()
    }
}

/// The four divided differences at an interior point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DifferenceOps {
    /// `(u[j+1] - u[j]) / h`
    pub d_plus: f64,
    /// `(u[j] - u[j-1]) / h`
    pub d_minus: f64,
    /// `(u[j+1] - u[j-1]) / 2h`
    pub d_zero: f64,
    /// `(u[j+1] - 2u[j] + u[j-1]) / h^2`
    pub d_plus_minus: f64,
}

pub fn difference_ops(u: &[f64], j: usize, h: f64) -> Result<DifferenceOps> {
    if j == 0 || j + 1 >= u.len() {
        return Err(domain(format!(
            "divided differences need an interior index, got {j} of {}",
            u.len()
        )));
    }
    if !(h > 0.0) {
        return Err(domain(format!("spacing must be positive, got {h}")));
    }
    let (um, u0, up) = (u[j - 1], u[j], u[j + 1]);
    Ok(DifferenceOps {
        d_plus: (up - u0) / h,
        d_minus: (u0 - um) / h,
        d_zero: (up - um) / (2.0 * h),
        d_plus_minus: (up - 2.0 * u0 + um) / (h * h),
    })
}

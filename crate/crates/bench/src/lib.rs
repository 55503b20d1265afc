//! Shared fixtures for the kernel benchmarks.

use longevity_core::pde::tridiagonal::TridiagonalSystem;
use longevity_core::{CashflowSeries, LifeTable};

/// Premium outflows of a settlement bought with eight years of premiums left.
pub const OUTFLOWS: [f64; 8] = [
    -958_446.94,
    -739_049.07,
    -802_335.09,
    -841_135.87,
    -887_803.04,
    -939_592.16,
    -1_002_515.01,
    -1_050_658.79,
];

/// All eight premiums followed by a 9,000,000 death benefit.
pub fn long_cashflows() -> CashflowSeries {
    let mut flows = OUTFLOWS.to_vec();
    flows.push(9_000_000.0);
    CashflowSeries::new(flows)
}

pub fn sample_table() -> LifeTable {
    LifeTable::sample()
}

/// Diagonally dominant `n x n` system with a smooth right-hand side.
pub fn dominant_system(n: usize) -> TridiagonalSystem {
    let rhs = (0..n).map(|i| (i as f64 * 0.01).sin()).collect();
    TridiagonalSystem::new(vec![-1.0; n], vec![4.0; n], vec![-1.0; n], rhs)
        .expect("consistent dimensions")
}

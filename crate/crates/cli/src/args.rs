//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "longevity",
    version,
    about = "Longevity-risk valuation toolkit"
)]
pub struct Cli {
    /// Emit tabular results as CSV instead of key=value lines.
    #[arg(long, global = true)]
    pub csv: bool,

    /// Write standard output to this file instead.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate death years for one life and summarise them.
    Simulate(SimulateArgs),
    /// Volatility of life expectancy, 1 - e/max.
    Vole(VoleArgs),
    /// Survival curve of the two-state exponential model (CSV `t,survival`).
    Markov(MarkovArgs),
    /// Estimate the stable tail index from a sample file.
    FitStable(FitStableArgs),
    /// Tail index of simulated death times by age (CSV `age,alpha_hat`).
    AlphaProfile(AlphaProfileArgs),
    /// Settlement value at a death horizon.
    PriceLsv(PriceLsvArgs),
    /// Duration measures of a flat policy.
    Duration(FlatArgs),
    /// Horizon at which the duration is stationary.
    CriticalTime(CriticalTimeArgs),
    /// Internal rate of return of a cash-flow file.
    Irr(IrrArgs),
    /// European or American option on the fitted Black-Scholes grid.
    PriceOption(PriceOptionArgs),
    /// Mortality option by Monte Carlo and by the PDE engine.
    PriceMortalityOption(MortalityOptionArgs),
    /// Centered, upwind and fitted schemes on sigma u'' + 2u' = 0, u(0) = 1, u(L) = 0 (CSV `x,numeric,exact,error`).
    FdmDemo(FdmDemoArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct TableArgs {
    /// Life table CSV with header `age,qx`; defaults to the bundled synthetic table.
    #[arg(long, value_name = "PATH")]
    pub table: Option<PathBuf>,

    /// Multiplier applied to every qx (dimensionless, >= 0).
    #[arg(long, default_value_t = 1.0)]
    pub multiplier: f64,

    /// Annual mortality improvement (fraction per year of age above the first, in [0, 1)).
    #[arg(long, default_value_t = 0.0)]
    pub improvement: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub table: TableArgs,

    /// Issue age (integer years).
    #[arg(long)]
    pub age: u32,

    /// Number of simulated lives.
    #[arg(long)]
    pub n: u64,

    /// Random seed.
    #[arg(long)]
    pub seed: u64,

    /// Independent streams the draws are split across; the result depends on this count.
    #[arg(long, default_value_t = 1)]
    pub streams: u64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct VoleArgs {
    /// Complete expectation of life (years); use with --max.
    #[arg(long, requires = "max", conflicts_with_all = ["age", "n", "seed"])]
    pub e: Option<f64>,

    /// Maximum death time (years); use with --e.
    #[arg(long, requires = "e")]
    pub max: Option<f64>,

    #[command(flatten)]
    pub table: TableArgs,

    /// Issue age (integer years); simulates the maximum.
    #[arg(long, required_unless_present = "e", requires_all = ["n", "seed"])]
    pub age: Option<u32>,

    /// Number of simulated lives.
    #[arg(long)]
    pub n: Option<u64>,

    /// Random seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct MarkovArgs {
    /// Death rate d1 (per year).
    #[arg(long, required_unless_present = "mean", conflicts_with = "mean")]
    pub rate: Option<f64>,

    /// Mean lifetime (years); sets d1 = 1/mean.
    #[arg(long)]
    pub mean: Option<f64>,

    /// Last time point of the curve (years).
    #[arg(long)]
    pub horizon: f64,

    /// Spacing of the curve (years).
    #[arg(long, default_value_t = 1.0)]
    pub step: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FitStableArgs {
    /// File with one sample per line; standard input when absent or `-`.
    #[arg(long, value_name = "PATH")]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct AlphaProfileArgs {
    #[command(flatten)]
    pub table: TableArgs,

    /// Inclusive age range `a..b` (integer years).
    #[arg(long, value_parser = parse_age_range)]
    pub ages: (u32, u32),

    /// Simulated death times per age (at least 1000).
    #[arg(long)]
    pub n: usize,

    /// Random seed.
    #[arg(long)]
    pub seed: u64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FlatArgs {
    /// Premium per period (currency).
    #[arg(long)]
    pub premium: f64,

    /// Death benefit (currency).
    #[arg(long)]
    pub benefit: f64,

    /// Discount rate per period (decimal, e.g. 0.05).
    #[arg(long)]
    pub rate: f64,

    /// Death horizon (periods).
    #[arg(long)]
    pub t: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct PriceLsvArgs {
    /// Premium per period (currency).
    #[arg(
        long,
        required_unless_present = "schedule",
        conflicts_with = "schedule"
    )]
    pub premium: Option<f64>,

    /// Death benefit (currency).
    #[arg(
        long,
        required_unless_present = "schedule",
        conflicts_with = "schedule"
    )]
    pub benefit: Option<f64>,

    /// Schedule CSV with header `period,premium,benefit`; --t must then be an integer.
    #[arg(long, value_name = "PATH")]
    pub schedule: Option<PathBuf>,

    /// Discount rate per period (decimal).
    #[arg(long)]
    pub rate: f64,

    /// Death horizon (periods).
    #[arg(long)]
    pub t: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct CriticalTimeArgs {
    /// Premium per period (currency).
    #[arg(long)]
    pub premium: f64,

    /// Death benefit (currency).
    #[arg(long)]
    pub benefit: f64,

    /// Discount rate per period (decimal).
    #[arg(long)]
    pub rate: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct IrrArgs {
    /// Cash-flow CSV with header `period,amount`, periods from 0.
    #[arg(long, value_name = "PATH")]
    pub cashflows: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum KindArg {
    Put,
    Call,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StyleArg {
    European,
    American,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct GridArgs {
    /// Grid size `J,N`: space intervals and time steps.
    #[arg(long, value_parser = parse_grid, default_value = "400,400")]
    pub grid: (usize, usize),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct PriceOptionArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,

    #[arg(long, value_enum, default_value = "european")]
    pub style: StyleArg,

    /// Strike (currency).
    #[arg(long)]
    pub strike: f64,

    /// Spot price (currency); defaults to the strike.
    #[arg(long)]
    pub spot: Option<f64>,

    /// Risk-free rate (continuous, per year).
    #[arg(long)]
    pub rate: f64,

    /// Dividend yield (continuous, per year).
    #[arg(long, default_value_t = 0.0)]
    pub dividend: f64,

    /// Volatility (per sqrt year); with --decay this is today's value.
    #[arg(long)]
    pub vol: f64,

    /// Exponential decay rate of the volatility (per year).
    #[arg(long)]
    pub decay: Option<f64>,

    /// Time to expiry (years).
    #[arg(long)]
    pub expiry: f64,

    /// Far boundary of the asset grid (currency); defaults to 4 x strike.
    #[arg(long)]
    pub s_max: Option<f64>,

    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct MortalityOptionArgs {
    #[command(flatten)]
    pub table: TableArgs,

    /// Issue age (integer years).
    #[arg(long)]
    pub age: u32,

    /// Random seed.
    #[arg(long)]
    pub seed: u64,

    /// Premium per period (currency).
    #[arg(
        long,
        required_unless_present = "schedule",
        conflicts_with = "schedule"
    )]
    pub premium: Option<f64>,

    /// Death benefit (currency).
    #[arg(
        long,
        required_unless_present = "schedule",
        conflicts_with = "schedule"
    )]
    pub benefit: Option<f64>,

    /// Schedule CSV with header `period,premium,benefit`.
    #[arg(long, value_name = "PATH")]
    pub schedule: Option<PathBuf>,

    /// Policy discount rate per period (decimal).
    #[arg(long)]
    pub policy_rate: f64,

    /// Option discount rate (continuous, per year).
    #[arg(long)]
    pub rate: f64,

    /// Volatility of life expectancy in [0, 1); simulated from the table when absent.
    #[arg(long)]
    pub vole: Option<f64>,

    /// Monte Carlo paths.
    #[arg(long, default_value_t = 100_000)]
    pub n: u64,

    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SchemeArg {
    Centered,
    Upwind,
    Fitted,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Ilin,
    Rational,
    Sqrt,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct FdmDemoArgs {
    #[arg(long, value_enum)]
    pub scheme: SchemeArg,

    /// Diffusion coefficient (> 0).
    #[arg(long)]
    pub sigma: f64,

    /// Number of mesh intervals.
    #[arg(long = "J", value_name = "J")]
    pub intervals: usize,

    /// Length of the interval [0, L].
    #[arg(long, default_value_t = 1.0)]
    pub length: f64,

    /// Fitting factor for the fitted scheme.
    #[arg(long, value_enum, default_value = "ilin")]
    pub variant: VariantArg,
}

fn parse_age_range(s: &str) -> Result<(u32, u32), String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected `a..b`, got `{s}`"))?;
    let a: u32 = a
        .trim()
        .parse()
        .map_err(|_| format!("bad start age `{a}`"))?;
    let b: u32 = b.trim().parse().map_err(|_| format!("bad end age `{b}`"))?;
    if a > b {
        return Err(format!("empty age range {a}..{b}"));
    }
    Ok((a, b))
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (j, n) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `J,N`, got `{s}`"))?;
    let j: usize = j
        .trim()
        .parse()
        .map_err(|_| format!("bad space size `{j}`"))?;
    let n: usize = n
        .trim()
        .parse()
        .map_err(|_| format!("bad time size `{n}`"))?;
    if j < 2 || n < 1 {
        return Err(format!("grid needs J >= 2 and N >= 1, got {j},{n}"));
    }
    Ok((j, n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn grammar_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn range_and_grid_parsers() {
        assert_eq!(parse_age_range("60..95"), Ok((60, 95)));
        assert!(parse_age_range("95..60").is_err());
        assert!(parse_age_range("60-95").is_err());
        assert_eq!(parse_grid("400,200"), Ok((400, 200)));
        assert!(parse_grid("1,1").is_err());
    }
}

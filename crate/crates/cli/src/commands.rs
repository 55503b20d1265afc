//! Subcommand handlers. Each returns the complete output; nothing is
//! written until the command has succeeded.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use longevity_core::io::{read_cashflows, read_life_table, read_samples, read_schedule};
use longevity_core::monte_carlo::{simulate_deaths, simulate_deaths_partitioned, vole};
use longevity_core::mortality_option::{price_mortality_option, MortalityOptionConfig, Policy};
use longevity_core::pde::bvp::{model_exact, solve_centered, solve_fitted, solve_upwind};
use longevity_core::pde::option::{price_option, GridSpec};
use longevity_core::pde::{
    ExerciseStyle, FittingVariant, Mesh1D, OptionKind, OptionSpec, TwoPointBVP, Volatility,
};
use longevity_core::settlement::{
    critical_time, duration_derivative, irr, le_duration, lsv, lsv_schedule, macaulay_duration,
    present_value,
};
use longevity_core::stable::{alpha_age_profile, estimate_alpha};
use longevity_core::{FlatPolicy, LifeTable, MortalityAssumptions, RngStream, TwoStateModel};

use crate::args::*;
use crate::output::Output;
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

pub fn dispatch(cmd: &Command, csv: bool, stderr: &mut dyn Write) -> Result<Output> {
    match cmd {
        Command::Simulate(a) => simulate(a, csv),
        Command::Vole(a) => vole_cmd(a),
        Command::Markov(a) => markov(a),
        Command::FitStable(a) => fit_stable(a),
        Command::AlphaProfile(a) => alpha_profile(a, stderr),
        Command::PriceLsv(a) => price_lsv(a),
        Command::Duration(a) => duration(a),
        Command::CriticalTime(a) => critical(a),
        Command::Irr(a) => irr_cmd(a),
        Command::PriceOption(a) => price_option_cmd(a, csv),
        Command::PriceMortalityOption(a) => mortality_option(a),
        Command::FdmDemo(a) => fdm_demo(a, stderr),
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_table(a: &TableArgs) -> Result<LifeTable> {
    let table = match &a.table {
        Some(path) => read_life_table(open(path)?)?,
        None => LifeTable::sample(),
    };
    let assumptions = MortalityAssumptions::new(a.multiplier, a.improvement)?;
    Ok(table.apply_assumptions(&assumptions))
}

fn simulate(a: &SimulateArgs, csv: bool) -> Result<Output> {
    let table = load_table(&a.table)?;
    let sim = simulate_deaths_partitioned(&table, a.age, a.n, a.seed, a.streams)?;
    if csv {
        let mut out = Output::csv(&["year", "count"]);
        for (year, count) in sim.histogram_rows() {
            out.row(vec![year.to_string(), count.to_string()]);
        }
        return Ok(out);
    }
    let e = table.complete_expectation(a.age)?;
    Ok(Output::kv()
        .put("age", a.age)
        .put("n", sim.n)
        .put("seed", a.seed)
        .put("streams", a.streams)
        .put("mean_death_year", sim.mean)
        .put("mode", sim.mode)
        .put("max", sim.max)
        .put("e_complete", e)
        .put("vole", vole(e, f64::from(sim.max))?))
}

fn vole_cmd(a: &VoleArgs) -> Result<Output> {
    if let (Some(e), Some(max)) = (a.e, a.max) {
        return Ok(Output::kv().put("vole", vole(e, max)?));
    }
    let (age, n, seed) = match (a.age, a.n, a.seed) {
        (Some(age), Some(n), Some(seed)) => (age, n, seed),
        _ => {
            return Err(CliError::Usage(
                "give --e and --max, or --age, --n and --seed".into(),
            ))
        }
    };
    let table = load_table(&a.table)?;
    let e = table.complete_expectation(age)?;
    let sim = simulate_deaths_partitioned(&table, age, n, seed, 1)?;
    Ok(Output::kv()
        .put("e_complete", e)
        .put("max", sim.max)
        .put("vole", vole(e, f64::from(sim.max))?))
}

fn markov(a: &MarkovArgs) -> Result<Output> {
    let model = match (a.rate, a.mean) {
        (Some(r), _) => TwoStateModel::new(r)?,
        (None, Some(m)) => TwoStateModel::rate_from_mean(m)?,
        (None, None) => return Err(CliError::Usage("give --rate or --mean".into())),
    };
    if !(a.horizon >= 0.0 && a.horizon.is_finite()) {
        return Err(CliError::Usage(format!(
            "--horizon must be non-negative, got {}",
            a.horizon
        )));
    }
    if !(a.step > 0.0 && a.step.is_finite()) {
        return Err(CliError::Usage(format!(
            "--step must be positive, got {}",
            a.step
        )));
    }
    let points = (a.horizon / a.step + 1e-9).floor() as u64;
    let mut out = Output::csv(&["t", "survival"]);
    for k in 0..=points {
        let t = k as f64 * a.step;
        out.row(vec![t.to_string(), model.survival(t)?.to_string()]);
    }
    Ok(out)
}

fn fit_stable(a: &FitStableArgs) -> Result<Output> {
    let samples = match a.input.as_deref() {
        Some(p) if p != Path::new("-") => read_samples(open(p)?)?,
        _ => read_samples(std::io::stdin().lock())?,
    };
    let est = estimate_alpha(&samples)?;
    Ok(Output::kv()
        .put("n", samples.len())
        .put("alpha_hat", est.alpha)
        .put("nu_alpha", est.nu_alpha)
        .put("nu_beta", est.nu_beta)
        .put("clamped", est.clamped))
}

fn alpha_profile(a: &AlphaProfileArgs, stderr: &mut dyn Write) -> Result<Output> {
    let table = load_table(&a.table)?;
    let ages: Vec<u32> = (a.ages.0..=a.ages.1).collect();
    let mut rng = RngStream::new(a.seed, 0);
    let profile = alpha_age_profile(&table, &ages, a.n, &mut rng)?;
    let mut out = Output::csv(&["age", "alpha_hat"]);
    for row in profile {
        let value = match row.estimate {
            Ok(est) => est.alpha.to_string(),
            Err(e) => {
                let _ = writeln!(stderr, "note: age {}: {e}", row.age);
                String::new()
            }
        };
        out.row(vec![row.age.to_string(), value]);
    }
    Ok(out)
}

fn integer_horizon(t: f64) -> Result<usize> {
    if t >= 0.0 && t.fract() == 0.0 && t <= u32::MAX as f64 {
        Ok(t as usize)
    } else {
        Err(CliError::Usage(format!(
            "--t must be a non-negative integer here, got {t}"
        )))
    }
}

fn price_lsv(a: &PriceLsvArgs) -> Result<Output> {
    let value = match (&a.schedule, a.premium, a.benefit) {
        (Some(path), _, _) => {
            let schedule = read_schedule(open(path)?, a.rate)?;
            lsv_schedule(&schedule, integer_horizon(a.t)?)?
        }
        (None, Some(p), Some(b)) => lsv(&FlatPolicy::new(p, b, a.rate)?, a.t)?,
        _ => {
            return Err(CliError::Usage(
                "give --premium and --benefit, or --schedule".into(),
            ))
        }
    };
    Ok(Output::kv().put("lsv", value))
}

fn duration(a: &FlatArgs) -> Result<Output> {
    let pol = FlatPolicy::new(a.premium, a.benefit, a.rate)?;
    let mut out = Output::kv()
        .put("lsv", lsv(&pol, a.t)?)
        .put("le_duration", le_duration(&pol, a.t)?);
    if a.t >= 1.0 && a.t.fract() == 0.0 {
        let t = integer_horizon(a.t)? as u32;
        out = out
            .put("present_value", present_value(&pol, t)?)
            .put("macaulay_duration", macaulay_duration(&pol, t)?);
    }
    Ok(out.put("duration_derivative", duration_derivative(&pol, a.t)?))
}

fn critical(a: &CriticalTimeArgs) -> Result<Output> {
    let pol = FlatPolicy::new(a.premium, a.benefit, a.rate)?;
    Ok(Output::kv().put("t_star", critical_time(&pol)?))
}

fn irr_cmd(a: &IrrArgs) -> Result<Output> {
    let flows = read_cashflows(open(&a.cashflows)?)?;
    let r = irr(&flows)?;
    Ok(Output::kv()
        .put("irr", format!("{r:.6}"))
        .put("irr_percent", format!("{:.4}", 100.0 * r)))
}

fn price_option_cmd(a: &PriceOptionArgs, csv: bool) -> Result<Output> {
    let kind = match a.kind {
        KindArg::Put => OptionKind::Put,
        KindArg::Call => OptionKind::Call,
    };
    let style = match a.style {
        StyleArg::European => ExerciseStyle::European,
        StyleArg::American => ExerciseStyle::American,
    };
    let mut spec = OptionSpec::new(kind, a.strike, a.rate, a.vol, a.expiry);
    spec.dividend = a.dividend;
    spec.s_max = a.s_max;
    if let Some(alpha) = a.decay {
        spec.vol = Volatility::Decaying {
            sigma0: a.vol,
            alpha,
        };
    }
    let (space, time) = a.grid.grid;
    let result = price_option(&spec, GridSpec { space, time }, style)?;
    if csv {
        let mut out = Output::csv(&["s", "value"]);
        for (s, v) in result.s.iter().zip(result.today()) {
            out.row(vec![s.to_string(), v.to_string()]);
        }
        return Ok(out);
    }
    let spot = a.spot.unwrap_or(a.strike);
    let mut out = Output::kv().put("price", result.value_at(spot)?);
    if let Some(Some(boundary)) = result.exercise_boundary.last() {
        out = out.put("exercise_boundary", boundary);
    }
    Ok(out)
}

fn mortality_option(a: &MortalityOptionArgs) -> Result<Output> {
    let table = load_table(&a.table)?;
    let policy = match (&a.schedule, a.premium, a.benefit) {
        (Some(path), _, _) => Policy::Schedule(read_schedule(open(path)?, a.policy_rate)?),
        (None, Some(p), Some(b)) => Policy::Flat(FlatPolicy::new(p, b, a.policy_rate)?),
        _ => {
            return Err(CliError::Usage(
                "give --premium and --benefit, or --schedule".into(),
            ))
        }
    };
    let e = table.complete_expectation(a.age)?;
    let sigma = match a.vole {
        Some(v) => v,
        None => {
            // Stream 1 sizes the volatility; stream 0 is kept for pricing.
            let sim = simulate_deaths(&table, a.age, a.n, &mut RngStream::new(a.seed, 1))?;
            vole(e, f64::from(sim.max))?
        }
    };
    let (space, time) = a.grid.grid;
    let config = MortalityOptionConfig {
        n_paths: a.n,
        space_steps: space,
        time_steps: time,
    };
    let mut rng = RngStream::new(a.seed, 0);
    let v = price_mortality_option(&policy, &table, a.age, sigma, a.rate, &config, &mut rng)?;
    Ok(Output::kv()
        .put("e_complete", e)
        .put("vole", sigma)
        .put("mc_value", v.mc_value)
        .put("mc_std_error", v.mc_std_error)
        .put("pde_value", v.pde_value))
}

fn fdm_demo(a: &FdmDemoArgs, stderr: &mut dyn Write) -> Result<Output> {
    let mesh = Mesh1D::new(0.0, a.length, a.intervals)?;
    let (x, u) = match a.scheme {
        SchemeArg::Centered | SchemeArg::Upwind => {
            let sol = match a.scheme {
                SchemeArg::Centered => solve_centered(a.sigma, &mesh)?,
                _ => solve_upwind(a.sigma, &mesh)?,
            };
            if sol.oscillation {
                let _ = writeln!(
                    stderr,
                    "note: sigma < h, the centered solution oscillates between mesh points"
                );
            }
            (sol.x, sol.u)
        }
        SchemeArg::Fitted => {
            let variant = match a.variant {
                VariantArg::Ilin => FittingVariant::Ilin,
                VariantArg::Rational => FittingVariant::Rational,
                VariantArg::Sqrt => FittingVariant::Sqrt,
            };
            let bvp = TwoPointBVP::constant(a.sigma, 2.0, 1.0, 0.0);
            (mesh.points(), solve_fitted(&bvp, &mesh, variant)?)
        }
    };
    let mut out = Output::csv(&["x", "numeric", "exact", "error"]);
    for (xj, uj) in x.iter().zip(&u) {
        let exact = model_exact(a.sigma, 2.0, 0.0, a.length, *xj);
        out.row(vec![
            xj.to_string(),
            uj.to_string(),
            exact.to_string(),
            (uj - exact).to_string(),
        ]);
    }
    Ok(out)
}

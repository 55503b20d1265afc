//! Life-settlement valuation: present value at a death horizon, its time
//! sensitivity, Macaulay duration, the critical time, and IRR.
//!
//! With discount factor `a = 1/(1+r)`, an investor who pays premium `p` at
//! the end of each period and collects death benefit `b` at period `t` holds
//!
//! ```text
//! LSV(t) = -p * sum_{i=1..t} a^i + b a^t = a^t (p/r + b) - p/r
//! ```
//!
//! Durations keep the sign convention of the defining sum: premium-weighted
//! times enter positively, the benefit term negatively, all over the present
//! value. A benefit-dominated position therefore has negative Macaulay
//! duration (the textbook convention would flip the sign of every flow).

use crate::error::{data, domain, Error, Result};

/// Level premium, level benefit, flat rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatPolicy {
    p: f64,
    b: f64,
    r: f64,
}

impl FlatPolicy {
    pub fn new(premium: f64, benefit: f64, rate: f64) -> Result<Self> {
        if !(premium >= 0.0 && premium.is_finite()) {
            return Err(domain(format!(
                "premium must be non-negative, got {premium}"
            )));
        }
        if !(benefit > 0.0 && benefit.is_finite()) {
            return Err(domain(format!("benefit must be positive, got {benefit}")));
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(domain(format!("rate must be positive, got {rate}")));
        }
        Ok(Self {
            p: premium,
            b: benefit,
            r: rate,
        })
    }

    pub fn premium(&self) -> f64 {
        self.p
    }

    pub fn benefit(&self) -> f64 {
        self.b
    }

    pub fn rate(&self) -> f64 {
        self.r
    }

    /// `a = 1 / (1 + r)`.
    pub fn discount_factor(&self) -> f64 {
        1.0 / (1.0 + self.r)
    }

    // a^t and ln a, computed from ln(1+r) to keep precision for small r.
    fn ln_a(&self) -> f64 {
        -self.r.ln_1p()
    }

    fn a_pow(&self, t: f64) -> f64 {
        (t * self.ln_a()).exp()
    }

    /// `C = a p / (a - 1)^2 = p (1 + r) / r^2`.
    fn c(&self) -> f64 {
        self.p * (1.0 + self.r) / (self.r * self.r)
    }

    /// `K = C (a - 1) - DB`.
    fn k(&self) -> f64 {
        -self.p / self.r - self.b
    }
}

/// Premium and benefit vectors indexed by period `1..=len`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicySchedule {
    premiums: Vec<f64>,
    benefits: Vec<f64>,
    r: f64,
}

impl PolicySchedule {
    pub fn new(premiums: Vec<f64>, benefits: Vec<f64>, rate: f64) -> Result<Self> {
        if premiums.is_empty() || premiums.len() != benefits.len() {
            return Err(data(format!(
                "premium and benefit vectors must have the same non-zero length ({} vs {})",
                premiums.len(),
                benefits.len()
            )));
        }
        if let Some(k) = premiums
            .iter()
            .chain(&benefits)
            .position(|v| !(*v >= 0.0 && v.is_finite()))
        {
            let (which, i) = if k < premiums.len() {
                ("premium", k)
            } else {
                ("benefit", k - premiums.len())
            };
            return Err(data(format!(
                "{which} for period {} must be non-negative",
                i + 1
            )));
        }
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(domain(format!("rate must be positive, got {rate}")));
        }
        Ok(Self {
            premiums,
            benefits,
            r: rate,
        })
    }

    /// Constant vectors of length `len` from a flat policy.
    pub fn from_flat(pol: &FlatPolicy, len: usize) -> Result<Self> {
        Self::new(vec![pol.p; len], vec![pol.b; len], pol.r)
    }

    pub fn len(&self) -> usize {
        self.premiums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.premiums.is_empty()
    }

    pub fn rate(&self) -> f64 {
        self.r
    }

    pub fn premiums(&self) -> &[f64] {
        &self.premiums
    }

    pub fn benefits(&self) -> &[f64] {
        &self.benefits
    }

    /// Investor cash flows when death occurs at period `t`, premiums paid in
    /// advance: `-premiums[k+1]` at time `k` for `k < t`, then `benefits[t]`
    /// at time `t`. This is the layout of the bundled `settlement_cf*.csv` fixtures.
    pub fn cashflows_for_death_at(&self, t: usize) -> Result<CashflowSeries> {
        self.check_period(t)?;
        let mut flows: Vec<f64> = self.premiums[..t].iter().map(|p| -p).collect();
        flows.push(self.benefits[t - 1]);
        Ok(CashflowSeries::new(flows))
    }

    fn check_period(&self, t: usize) -> Result<()> {
        if (1..=self.len()).contains(&t) {
            Ok(())
        } else {
            Err(domain(format!(
                "period must lie in 1..={}, got {t}",
                self.len()
            )))
        }
    }
}

/// Signed cash flows, index 0 at time zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CashflowSeries {
    flows: Vec<f64>,
}

impl CashflowSeries {
    pub fn new(flows: Vec<f64>) -> Self {
        Self { flows }
    }

    pub fn flows(&self) -> &[f64] {
        &self.flows
    }

    /// `sum flows[i] / (1 + rate)^i`.
    pub fn npv(&self, rate: f64) -> f64 {
        npv_growth(&self.flows, 1.0 + rate)
    }
}

// NPV as a function of the growth factor g = 1 + r, by Horner in 1/g.
fn npv_growth(flows: &[f64], g: f64) -> f64 {
    let v = 1.0 / g;
    flows.iter().rev().fold(0.0, |acc, f| acc * v + f)
}

// Sum |flows[i]| / g^i: the natural scale for NPV at g.
fn npv_scale(flows: &[f64], g: f64) -> f64 {
    let v = 1.0 / g;
    flows.iter().rev().fold(0.0, |acc, f| acc * v + f.abs())
}

fn check_horizon(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("horizon must be non-negative, got {t}")))
    }
}

/// `a^t (p/r + b) - p/r`.
pub fn lsv(pol: &FlatPolicy, t: f64) -> Result<f64> {
    check_horizon(t)?;
    let pr = pol.p / pol.r;
    Ok(pol.a_pow(t) * (pr + pol.b) - pr)
}

/// `-sum_{i=1..t} premiums[i] a^i + benefits[t] a^t`.
pub fn lsv_schedule(s: &PolicySchedule, t: usize) -> Result<f64> {
    s.check_period(t)?;
    let a = 1.0 / (1.0 + s.r);
    let mut disc = 1.0;
    let mut pv = 0.0;
    for p in &s.premiums[..t] {
        disc *= a;
        pv -= p * disc;
    }
    Ok(pv + s.benefits[t - 1] * disc)
}

/// `dLSV/dt = (p/r + b) a^t ln a`, negative for every valid policy.
pub fn lsv_dt(pol: &FlatPolicy, t: f64) -> Result<f64> {
    check_horizon(t)?;
    Ok((pol.p / pol.r + pol.b) * pol.a_pow(t) * pol.ln_a())
}

/// Elasticity of LSV with respect to the horizon: `t LSV'(t) / LSV(t)`.
pub fn le_duration(pol: &FlatPolicy, t: f64) -> Result<f64> {
    let v = lsv(pol, t)?;
    let pr = pol.p / pol.r;
    if v == 0.0 || v.abs() <= 1e-13 * (pol.a_pow(t) * (pr + pol.b) + pr) {
        return Err(Error::Singular(format!("LSV vanishes at t={t}")));
    }
    Ok(t * lsv_dt(pol, t)? / v)
}

fn present_value_checked(pol: &FlatPolicy, t: u32) -> Result<f64> {
    if t == 0 {
        return Err(domain("duration horizon must be at least 1 period"));
    }
    let p = lsv(pol, f64::from(t))?;
    let scale = pol.b * pol.a_pow(f64::from(t)) + pol.p / pol.r;
    if p == 0.0 || p.abs() <= 1e-13 * scale {
        return Err(Error::Singular(format!("present value vanishes at t={t}")));
    }
    Ok(p)
}

/// Present value `P = -p sum_{i=1..t} a^i + DB a^t`; identical to [`lsv`]
/// at integer horizons.
pub fn present_value(pol: &FlatPolicy, t: u32) -> Result<f64> {
    lsv(pol, f64::from(t))
}

/// Macaulay duration in closed form:
/// `(1/P) { t a^t [C(a-1) - DB] - a^t C + C }` with `C = a p / (a-1)^2`.
pub fn macaulay_duration(pol: &FlatPolicy, t: u32) -> Result<f64> {
    let pv = present_value_checked(pol, t)?;
    let tf = f64::from(t);
    let at = pol.a_pow(tf);
    let c = pol.c();
    Ok((tf * at * pol.k() - at * c + c) / pv)
}

/// Macaulay duration by direct summation:
/// `(sum_{i=1..t} i p a^i - t DB a^t) / P`.
pub fn macaulay_duration_direct(pol: &FlatPolicy, t: u32) -> Result<f64> {
    let pv = present_value_checked(pol, t)?;
    let a = pol.discount_factor();
    let mut disc = 1.0;
    let mut weighted = 0.0;
    for i in 1..=t {
        disc *= a;
        weighted += f64::from(i) * pol.p * disc;
    }
    Ok((weighted - f64::from(t) * pol.b * disc) / pv)
}

/// Time derivative of the Macaulay numerator over a frozen present value:
/// `a^t { t K ln a + K - C ln a } / P` with `K = C(a-1) - DB`.
/// `P` is evaluated at the nearest integer horizon `max(1, round(t))`.
pub fn duration_derivative(pol: &FlatPolicy, t: f64) -> Result<f64> {
    check_horizon(t)?;
    let pv = present_value_checked(pol, (t.round() as u32).max(1))?;
    Ok(pol.a_pow(t) * duration_bracket(pol, t) / pv)
}

/// The braced factor `t K ln a + K - C ln a` of [`duration_derivative`].
pub fn duration_bracket(pol: &FlatPolicy, t: f64) -> f64 {
    let (k, c, ln_a) = (pol.k(), pol.c(), pol.ln_a());
    t * k * ln_a + k - c * ln_a
}

/// Horizon where the duration derivative vanishes:
/// `t* = -1/ln a + a p / [a p (a-1) - DB (a-1)^2]`.
pub fn critical_time(pol: &FlatPolicy) -> Result<f64> {
    let a = pol.discount_factor();
    let am1 = -pol.r * a;
    let denom = a * pol.p * am1 - pol.b * am1 * am1;
    if denom == 0.0 || !denom.is_finite() {
        return Err(Error::Singular("critical-time denominator vanishes".into()));
    }
    Ok(-1.0 / pol.ln_a() + a * pol.p / denom)
}

const IRR_G_MIN: f64 = 1e-3;
const IRR_G_MAX: f64 = 1e6 + 1.0;
const IRR_SCAN_POINTS: usize = 4000;

/// Internal rate of return.
///
/// The growth factor `g = 1 + r` is scanned on a geometric grid of 4000
/// points from `0.001` to `10^6 + 1` (rates `-0.999` to `10^6`). The first
/// bracket with a sign change, lowest rate first, is refined by bisection
/// to machine precision, so with several roots the smallest one found wins.
pub fn irr(cf: &CashflowSeries) -> Result<f64> {
    let flows = cf.flows();
    if flows.iter().any(|f| !f.is_finite()) {
        return Err(data("cash flows must be finite"));
    }
    let has_neg = flows.iter().any(|&f| f < 0.0);
    let has_pos = flows.iter().any(|&f| f > 0.0);
    if !(has_neg && has_pos) {
        return Err(data(
            "cash flows must contain both a negative and a positive entry",
        ));
    }

    let ratio = (IRR_G_MAX / IRR_G_MIN).powf(1.0 / (IRR_SCAN_POINTS - 1) as f64);
    let mut lo = IRR_G_MIN;
    let mut f_lo = npv_growth(flows, lo);
    for k in 1..IRR_SCAN_POINTS {
        if f_lo == 0.0 {
            return Ok(lo - 1.0);
        }
        let hi = if k == IRR_SCAN_POINTS - 1 {
            IRR_G_MAX
        } else {
            IRR_G_MIN * ratio.powi(k as i32)
        };
        let f_hi = npv_growth(flows, hi);
        if f_hi == 0.0 || f_lo.signum() != f_hi.signum() {
            let g = bisect_growth(flows, lo, hi, f_lo);
            let resid = npv_growth(flows, g).abs();
            if resid > 1e-6 * npv_scale(flows, g) {
                return Err(Error::Convergence(format!(
                    "IRR refinement stalled with |NPV| = {resid:e}"
                )));
            }
            return Ok(g - 1.0);
        }
        lo = hi;
        f_lo = f_hi;
    }
    Err(Error::Convergence(
        "no IRR root with rate in (-0.999, 1e6)".into(),
    ))
}

fn bisect_growth(flows: &[f64], mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = npv_growth(flows, mid);
        if f_mid == 0.0 {
            return mid;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    // Return whichever end has the smaller residual.
    if npv_growth(flows, lo).abs() <= npv_growth(flows, hi).abs() {
        lo
    } else {
        hi
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pol(p: f64, b: f64, r: f64) -> FlatPolicy {
        FlatPolicy::new(p, b, r).unwrap()
    }

    #[test]
    fn policy_validation() {
        assert!(FlatPolicy::new(-1.0, 1.0, 0.05).is_err());
        assert!(FlatPolicy::new(0.0, 0.0, 0.05).is_err());
        assert!(FlatPolicy::new(0.0, 1.0, 0.0).is_err());
        assert!(PolicySchedule::new(vec![], vec![], 0.05).is_err());
        assert!(PolicySchedule::new(vec![1.0], vec![1.0, 2.0], 0.05).is_err());
        assert!(PolicySchedule::new(vec![-1.0], vec![1.0], 0.05).is_err());
    }

    #[test]
    fn lsv_special_cases() {
        let p = pol(123.0, 1000.0, 0.07);
        assert_eq!(lsv(&p, 0.0).unwrap(), 1000.0);
        let pure = pol(0.0, 1000.0, 0.05);
        let v = lsv(&pure, 10.0).unwrap();
        assert!((v - 1000.0 / 1.05f64.powi(10)).abs() < 1e-10);
        assert!(lsv(&p, -1.0).is_err());
    }

    #[test]
    fn lsv_dt_at_origin() {
        let v = lsv_dt(&pol(0.0, 1.0, 0.05), 0.0).unwrap();
        assert!((v - (1.0 / 1.05f64).ln()).abs() < 1e-15);
    }

    #[test]
    fn le_duration_pure_discount() {
        let p = pol(0.0, 500.0, 0.05);
        let d = le_duration(&p, 7.0).unwrap();
        assert!((d - 7.0 * (1.0 / 1.05f64).ln()).abs() < 1e-13);
    }

    #[test]
    fn le_duration_singular_at_zero_lsv() {
        // b a^t = p sum a^i at t = 1 when p a = b a, i.e. p = b.
        let p = pol(1000.0, 1000.0, 0.05);
        assert!(matches!(le_duration(&p, 1.0), Err(Error::Singular(_))));
    }

    #[test]
    fn macaulay_pure_discount_is_minus_t() {
        let p = pol(0.0, 250.0, 0.04);
        assert!((macaulay_duration(&p, 12).unwrap() + 12.0).abs() < 1e-12);
        assert!((macaulay_duration_direct(&p, 12).unwrap() + 12.0).abs() < 1e-12);
        assert!(macaulay_duration(&p, 0).is_err());
    }

    #[test]
    fn critical_time_pure_discount() {
        let p = pol(0.0, 1000.0, 0.05);
        let t = critical_time(&p).unwrap();
        assert!((t + 1.0 / (1.0 / 1.05f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn schedule_cashflows_layout() {
        let s =
            PolicySchedule::new(vec![10.0, 20.0, 30.0], vec![100.0, 200.0, 300.0], 0.05).unwrap();
        assert_eq!(
            s.cashflows_for_death_at(1).unwrap().flows(),
            &[-10.0, 100.0]
        );
        assert_eq!(
            s.cashflows_for_death_at(3).unwrap().flows(),
            &[-10.0, -20.0, -30.0, 300.0]
        );
        assert!(s.cashflows_for_death_at(0).is_err());
        assert!(s.cashflows_for_death_at(4).is_err());
        assert!(lsv_schedule(&s, 0).is_err());
    }

    #[test]
    fn irr_single_period() {
        let r = irr(&CashflowSeries::new(vec![-100.0, 110.0])).unwrap();
        assert!((r - 0.10).abs() < 1e-12);
    }

    #[test]
    fn irr_errors() {
        assert!(matches!(
            irr(&CashflowSeries::new(vec![1.0, 2.0])),
            Err(Error::Data(_))
        ));
        assert!(matches!(
            irr(&CashflowSeries::new(vec![])),
            Err(Error::Data(_))
        ));
        // Root at r = 2e6, beyond the scan.
        let far = CashflowSeries::new(vec![-1.0, 2e6 + 1.0]);
        assert!(matches!(irr(&far), Err(Error::Convergence(_))));
    }

    #[test]
    fn irr_picks_smallest_root() {
        // (1 + r - 1.1)(1 + r - 1.5) expanded in v = 1/(1+r): roots at 10% and 50%.
        let cf = CashflowSeries::new(vec![1.0, -2.6, 1.65]);
        let r = irr(&cf).unwrap();
        assert!((r - 0.10).abs() < 1e-12, "{r}");
    }
}

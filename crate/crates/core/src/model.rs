//! Cycle profit, threshold increments, demand feasibility and optimal thresholds.
//!
//! One dispatch cycle consists of a boarding phase (until `n` passengers have
//! queued, expected length `n/λ`) and a round trip of length `2T`. During the
//! outbound leg the vehicle admits roadside requests into its `k = capacity − n`
//! free seats, each paying half the fare. The long-run profit rate is
//!
//! ```text
//! π(n) = A(n)/B(n) − C,   A(n) = p_I·(n + ½·θ·g(k; λT)),   B(n) = n/λ + 2T.
//! ```
//!
//! Under full acceptance the sign of `Δπ(n) = π(n+1) − π(n)` equals the sign of
//!
//! ```text
//! N(n) = p_I·[2T − (T + n/(2λ))·Δg(k) − g(k)/(2λ)].
//! ```

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::poisson;
use crate::roots::{bisect, RootResult};

/// Seats in the incumbent vehicle unless stated otherwise.
pub const DEFAULT_CAPACITY: u32 = 6;
/// Seats in an entrant vehicle. Informational only.
pub const DEFAULT_ENTRANT_CAPACITY: u32 = 3;

/// Slack added to the wait comparison in [`feasible_set`].
pub const FEASIBILITY_SLACK: f64 = 1e-12;
/// Slack added before flooring in [`demand_ceiling`].
pub const CEILING_SLACK: f64 = 1e-9;

/// How the acceptance probability enters expected mid-route admissions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MidrouteModel {
    /// `θ·g(k; λT)`: revenue scales linearly in θ.
    #[default]
    Linear,
    /// `g(k; θλT)`: admitted requests form a θ-thinned Poisson stream.
    Thinned,
}

/// Market primitives.
///
/// `tolerance` (the maximum wait `w̄` a passenger accepts before defecting) is
/// the primary quantity; `entrant_fare` is kept consistent with it through
/// `w̄ = (p_P − p_I)/c` by the `with_*` builders.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MarketParams {
    /// Terminal arrival rate λ (passengers per hour); also the roadside request rate.
    pub arrival_rate: f64,
    /// One-way travel time T (hours).
    pub travel_time: f64,
    /// Incumbent fare p_I.
    pub fare: f64,
    /// Entrant fare p_P.
    pub entrant_fare: f64,
    /// Passenger waiting cost c per hour.
    pub wait_cost: f64,
    /// Operating cost C per hour.
    pub operating_cost: f64,
    /// Waiting tolerance w̄ (hours).
    pub tolerance: f64,
    /// Incumbent seats.
    pub capacity: u32,
    /// Entrant seats.
    pub entrant_capacity: u32,
    /// Probability θ of admitting a roadside request when a seat is free.
    pub acceptance: f64,
    /// Gross willingness to pay. Carried for completeness; never used.
    pub gross_value: Option<f64>,
    /// Mid-route admission model.
    pub midroute: MidrouteModel,
}

impl MarketParams {
    /// Parameters with unit fare, zero operating cost, unit waiting cost,
    /// a half-hour tolerance, six seats and full acceptance.
    pub fn new(arrival_rate: f64, travel_time: f64) -> Self {
        MarketParams {
            arrival_rate,
            travel_time,
            fare: 1.0,
            entrant_fare: 1.5,
            wait_cost: 1.0,
            operating_cost: 0.0,
            tolerance: 0.5,
            capacity: DEFAULT_CAPACITY,
            entrant_capacity: DEFAULT_ENTRANT_CAPACITY,
            acceptance: 1.0,
            gross_value: None,
            midroute: MidrouteModel::Linear,
        }
    }

    /// Set the incumbent fare, keeping `w̄` fixed.
    pub fn with_fare(mut self, fare: f64) -> Self {
        self.fare = fare;
        self.entrant_fare = fare + self.wait_cost * self.tolerance;
        self
    }

    /// Set the waiting cost, keeping `w̄` fixed.
    pub fn with_wait_cost(mut self, wait_cost: f64) -> Self {
        self.wait_cost = wait_cost;
        self.entrant_fare = self.fare + wait_cost * self.tolerance;
        self
    }

    /// Set `w̄` directly; the entrant fare follows.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.entrant_fare = self.fare + self.wait_cost * tolerance;
        self
    }

    /// Set the entrant fare; `w̄ = (p_P − p_I)/c` follows.
    pub fn with_entrant_fare(mut self, entrant_fare: f64) -> Self {
        self.entrant_fare = entrant_fare;
        self.tolerance = (entrant_fare - self.fare) / self.wait_cost;
        self
    }

    /// Set the operating cost per hour.
    pub fn with_operating_cost(mut self, cost: f64) -> Self {
        self.operating_cost = cost;
        self
    }

    /// Set the acceptance probability θ.
    pub fn with_acceptance(mut self, theta: f64) -> Self {
        self.acceptance = theta;
        self
    }

    /// Set the vehicle capacity.
    pub fn with_capacity(mut self, capacity: u32) -> Self {
        self.capacity = capacity;
        self
    }

    /// Select the mid-route admission model.
    pub fn with_midroute(mut self, model: MidrouteModel) -> Self {
        self.midroute = model;
        self
    }

    /// Poisson mean `λT` of roadside requests per outbound leg.
    pub fn poisson_mean(&self) -> f64 {
        self.arrival_rate * self.travel_time
    }

    /// Check every parameter invariant.
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.arrival_rate) {
            return Err(Error::InvalidParams("arrival rate must be positive"));
        }
        if !positive(self.travel_time) {
            return Err(Error::InvalidParams("travel time must be positive"));
        }
        if !positive(self.fare) {
            return Err(Error::InvalidParams("fare must be positive"));
        }
        if !(self.entrant_fare.is_finite() && self.entrant_fare > self.fare) {
            return Err(Error::InvalidParams(
                "entrant fare must exceed the incumbent fare",
            ));
        }
        if !positive(self.wait_cost) {
            return Err(Error::InvalidParams("waiting cost must be positive"));
        }
        if !(self.operating_cost.is_finite() && self.operating_cost >= 0.0) {
            return Err(Error::InvalidParams("operating cost must be non-negative"));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::InvalidParams("waiting tolerance must be positive"));
        }
        if self.capacity == 0 {
            return Err(Error::InvalidParams("capacity must be at least one seat"));
        }
        if !(0.0..=1.0).contains(&self.acceptance) {
            return Err(Error::InvalidParams(
                "acceptance probability must lie in [0, 1]",
            ));
        }
        Ok(())
    }

    fn check_threshold(&self, n: u32, max: u32) -> Result<()> {
        if (1..=max).contains(&n) {
            Ok(())
        } else {
            Err(Error::ThresholdOutOfRange { n, max })
        }
    }
}

/// Expected terminal wait per passenger, `(n − 1)/(2λ)`.
pub fn expected_wait(n: u32, arrival_rate: f64) -> Result<f64> {
    if !(arrival_rate.is_finite() && arrival_rate > 0.0) {
        return Err(Error::Domain {
            name: "lambda",
            value: arrival_rate,
        });
    }
    if n == 0 {
        return Err(Error::ThresholdOutOfRange { n, max: u32::MAX });
    }
    Ok(f64::from(n - 1) / (2.0 * arrival_rate))
}

/// Expected admitted roadside riders per cycle at threshold `n`.
pub fn expected_midroute(params: &MarketParams, n: u32) -> Result<f64> {
    params.validate()?;
    params.check_threshold(n, params.capacity)?;
    let k = params.capacity - n;
    let mu = params.poisson_mean();
    Ok(match params.midroute {
        MidrouteModel::Linear => params.acceptance * poisson::g(k, mu)?,
        MidrouteModel::Thinned => poisson::g(k, params.acceptance * mu)?,
    })
}

/// Expected cycle revenue `A(n)`.
pub fn cycle_revenue(params: &MarketParams, n: u32) -> Result<f64> {
    let mid = expected_midroute(params, n)?;
    Ok(params.fare * (f64::from(n) + 0.5 * mid))
}

/// Expected cycle length `B(n) = n/λ + 2T`.
pub fn cycle_length(params: &MarketParams, n: u32) -> Result<f64> {
    params.validate()?;
    params.check_threshold(n, params.capacity)?;
    Ok(f64::from(n) / params.arrival_rate + 2.0 * params.travel_time)
}

/// Long-run profit per hour `π(n) = A(n)/B(n) − C`.
pub fn profit_rate(params: &MarketParams, n: u32) -> Result<f64> {
    Ok(cycle_revenue(params, n)? / cycle_length(params, n)? - params.operating_cost)
}

/// `Δπ(n) = π(n+1) − π(n)` for `1 <= n <= capacity − 1`.
pub fn increment(params: &MarketParams, n: u32) -> Result<f64> {
    params.validate()?;
    params.check_threshold(n, params.capacity.saturating_sub(1))?;
    Ok(profit_rate(params, n + 1)? - profit_rate(params, n)?)
}

/// `N(n)/p_I` as a function of `(λ, T)` alone.
fn unit_numerator(n: u32, arrival_rate: f64, travel_time: f64, capacity: u32) -> Result<f64> {
    let k = capacity - n;
    let m = poisson::moments(k, arrival_rate * travel_time)?;
    let half_inv = 1.0 / (2.0 * arrival_rate);
    Ok(2.0 * travel_time - (travel_time + f64::from(n) * half_inv) * m.delta_g - m.g * half_inv)
}

/// Closed-form numerator `N(n) = A(n+1)B(n) − A(n)B(n+1)` under full acceptance.
///
/// `Δπ(n) = N(n)/(B(n)·B(n+1))`, so the two always share a sign.
pub fn numerator(params: &MarketParams, n: u32) -> Result<f64> {
    params.validate()?;
    params.check_threshold(n, params.capacity.saturating_sub(1))?;
    if params.acceptance != 1.0 {
        return Err(Error::Unsupported(
            "closed-form numerator assumes full acceptance",
        ));
    }
    Ok(params.fare * unit_numerator(n, params.arrival_rate, params.travel_time, params.capacity)?)
}

/// Everything computed for a single threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CycleEvaluation {
    /// Threshold.
    pub n: u32,
    /// Expected cycle revenue `A(n)`.
    pub revenue: f64,
    /// Expected cycle length `B(n)`.
    pub length: f64,
    /// Expected admitted roadside riders.
    pub midroute: f64,
    /// `π(n)`.
    pub profit_rate: f64,
    /// `Δπ(n)`; absent at full capacity.
    pub increment: Option<f64>,
    /// `N(n)`; absent at full capacity or when `θ ≠ 1`.
    pub numerator: Option<f64>,
    /// `E[W(n)]`.
    pub expected_wait: f64,
    /// Whether passengers keep joining at this threshold.
    pub feasible: bool,
}

/// Evaluate one threshold.
pub fn evaluate(params: &MarketParams, n: u32) -> Result<CycleEvaluation> {
    params.validate()?;
    params.check_threshold(n, params.capacity)?;
    let below_full = n < params.capacity;
    let expected_wait = expected_wait(n, params.arrival_rate)?;
    Ok(CycleEvaluation {
        n,
        revenue: cycle_revenue(params, n)?,
        length: cycle_length(params, n)?,
        midroute: expected_midroute(params, n)?,
        profit_rate: profit_rate(params, n)?,
        increment: if below_full {
            Some(increment(params, n)?)
        } else {
            None
        },
        numerator: if below_full && params.acceptance == 1.0 {
            Some(numerator(params, n)?)
        } else {
            None
        },
        expected_wait,
        feasible: expected_wait <= params.tolerance + FEASIBILITY_SLACK,
    })
}

/// Evaluate every threshold `1..=capacity`.
pub fn evaluate_all(params: &MarketParams) -> Result<Vec<CycleEvaluation>> {
    (1..=params.capacity).map(|n| evaluate(params, n)).collect()
}

/// Thresholds at which expected wait stays within the tolerance. Never empty.
pub fn feasible_set(params: &MarketParams) -> Result<Vec<u32>> {
    params.validate()?;
    let mut out = Vec::new();
    for n in 1..=params.capacity {
        if expected_wait(n, params.arrival_rate)? <= params.tolerance + FEASIBILITY_SLACK {
            out.push(n);
        }
    }
    Ok(out)
}

fn ceiling_for(arrival_rate: f64, tolerance: f64) -> u64 {
    libm::floor(2.0 * arrival_rate * tolerance + 1.0 + CEILING_SLACK) as u64
}

/// Largest threshold passengers tolerate, `⌊2λw̄ + 1⌋`.
pub fn demand_ceiling(params: &MarketParams) -> Result<u64> {
    params.validate()?;
    Ok(ceiling_for(params.arrival_rate, params.tolerance))
}

/// A root of `N(n; ·, T)` in the arrival rate.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CriticalRate {
    /// Smallest located root `λ†`.
    pub root: RootResult,
    /// False when more than one sign change was seen, or `N` starts positive.
    pub unique: bool,
}

const RATE_FLOOR: f64 = 1e-9;
const SCAN_POINTS_PER_DOUBLING: u32 = 16;

/// Critical arrival rate at which `Δπ(n; ·, T)` changes sign.
///
/// Because `g` and `Δg` depend on `μ = λT`, the rearranged ratio
/// `(nΔg + g)/(4T − 2TΔg)` is only an implicit fixed point, so the operative
/// definition is the root of `N`. The rate is bracketed on `(1e−9, λ_hi)` with
/// `λ_hi` doubled until `N > 0`, scanned geometrically for sign changes, and
/// the first change is bisected.
pub fn critical_arrival_rate(n: u32, travel_time: f64, capacity: u32) -> Result<CriticalRate> {
    if !(travel_time.is_finite() && travel_time > 0.0) {
        return Err(Error::Domain {
            name: "T",
            value: travel_time,
        });
    }
    if !(1..capacity).contains(&n) {
        return Err(Error::ThresholdOutOfRange {
            n,
            max: capacity.saturating_sub(1),
        });
    }
    let f = |lambda: f64| unit_numerator(n, lambda, travel_time, capacity).unwrap_or(f64::NAN);

    let mut hi = 1.0;
    let mut doublings = 0;
    while f(hi) <= 0.0 {
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::NoSignChange { lo: RATE_FLOOR, hi });
        }
    }

    let steps = (libm::ceil(libm::log2(hi / RATE_FLOOR)) as u32).max(1) * SCAN_POINTS_PER_DOUBLING;
    let ratio = libm::pow(hi / RATE_FLOOR, 1.0 / f64::from(steps));
    let mut prev_x = RATE_FLOOR;
    let mut prev_f = f(prev_x);
    let starts_negative = prev_f < 0.0;
    let mut first: Option<(f64, f64)> = None;
    let mut changes = 0u32;
    for i in 1..=steps {
        let x = if i == steps {
            hi
        } else {
            RATE_FLOOR * libm::pow(ratio, f64::from(i))
        };
        let fx = f(x);
        if (prev_f < 0.0) != (fx < 0.0) {
            changes += 1;
            if first.is_none() {
                first = Some((prev_x, x));
            }
        }
        prev_x = x;
        prev_f = fx;
    }
    let (a, b) = first.ok_or(Error::NoSignChange { lo: RATE_FLOOR, hi })?;
    let root = bisect(f, a, b, 0.0)?;
    Ok(CriticalRate {
        root,
        unique: changes == 1 && starts_negative,
    })
}

/// The rearranged ratio `(nΔg + g)/(4T − 2TΔg)` evaluated at `μ = λT`.
///
/// At a root of `N` this returns the same `λ`.
pub fn critical_rate_ratio(
    n: u32,
    arrival_rate: f64,
    travel_time: f64,
    capacity: u32,
) -> Result<f64> {
    if !(1..capacity).contains(&n) {
        return Err(Error::ThresholdOutOfRange {
            n,
            max: capacity.saturating_sub(1),
        });
    }
    let m = poisson::moments(capacity - n, arrival_rate * travel_time)?;
    Ok((f64::from(n) * m.delta_g + m.g) / (4.0 * travel_time - 2.0 * travel_time * m.delta_g))
}

/// Profit-maximising threshold ignoring demand feasibility.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UnconstrainedOptimum {
    /// `min{m : Δπ(m) <= 0}`, or capacity when every increment is positive.
    pub first_crossing: u32,
    /// Brute-force `argmax π` over `1..=capacity` (smallest index on ties).
    pub argmax: u32,
}

impl UnconstrainedOptimum {
    /// True when the first-crossing rule and the global maximiser disagree,
    /// i.e. `Δπ` is not single-crossing.
    pub fn diverges(&self) -> bool {
        self.first_crossing != self.argmax
    }
}

/// Unconstrained optimum by the first-crossing rule, with the brute-force
/// maximiser alongside.
pub fn n_star_unconstrained(params: &MarketParams) -> Result<UnconstrainedOptimum> {
    params.validate()?;
    let evals = evaluate_all(params)?;
    let first_crossing = evals
        .iter()
        .find(|e| e.increment.is_some_and(|d| d <= 0.0))
        .map_or(params.capacity, |e| e.n);
    let argmax = argmax_over(&evals, |_| true);
    Ok(UnconstrainedOptimum {
        first_crossing,
        argmax,
    })
}

fn argmax_over(evals: &[CycleEvaluation], keep: impl Fn(&CycleEvaluation) -> bool) -> u32 {
    let mut best: Option<&CycleEvaluation> = None;
    for e in evals.iter().filter(|e| keep(e)) {
        if best.is_none_or(|b| e.profit_rate > b.profit_rate) {
            best = Some(e);
        }
    }
    best.map_or(1, |e| e.n)
}

/// Which bound determines the constrained threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Binding {
    /// The profit-maximising threshold.
    Profit,
    /// Passenger tolerance.
    Demand,
    /// Vehicle seats.
    Capacity,
}

/// Unconstrained optimum, demand ceiling and the resulting operative threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThresholdSolution {
    /// `ñ*`.
    pub n_unconstrained: u32,
    /// `⌊2λw̄ + 1⌋`.
    pub demand_ceiling: u64,
    /// `n* = min{ñ*, ceiling, capacity}`.
    pub n_constrained: u32,
    /// The active minimum; ties resolve profit, then demand, then capacity.
    pub binding: Binding,
    /// First-crossing and argmax rules disagree.
    pub divergence: bool,
}

fn constrain(capacity: u32, optimum: UnconstrainedOptimum, ceiling: u64) -> ThresholdSolution {
    let profit = u64::from(optimum.first_crossing);
    let cap = u64::from(capacity);
    let n = profit.min(ceiling).min(cap).max(1);
    let binding = if profit <= ceiling && profit <= cap {
        Binding::Profit
    } else if ceiling <= cap {
        Binding::Demand
    } else {
        Binding::Capacity
    };
    ThresholdSolution {
        n_unconstrained: optimum.first_crossing,
        demand_ceiling: ceiling,
        n_constrained: n as u32,
        binding,
        divergence: optimum.diverges(),
    }
}

/// Operative threshold under the participation constraint.
pub fn n_star_constrained(params: &MarketParams) -> Result<ThresholdSolution> {
    let optimum = n_star_unconstrained(params)?;
    Ok(constrain(params.capacity, optimum, demand_ceiling(params)?))
}

/// Entrant fare that captures exactly the passengers who would otherwise wait.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntrantPricing {
    /// `p_P* = p_I + c·(n − 1)/(2λ)`.
    pub price: f64,
    /// Tolerance implied by that fare; equals the incumbent's expected wait.
    pub implied_tolerance: f64,
}

/// Entrant's best response to an incumbent dispatching at `n`.
pub fn endogenous_price(params: &MarketParams, n: u32) -> Result<EntrantPricing> {
    let wait = expected_wait(n, params.arrival_rate)?;
    Ok(EntrantPricing {
        price: params.fare + params.wait_cost * wait,
        implied_tolerance: wait,
    })
}

/// Thresholds under an exogenous entrant fare and under the entrant's best response.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PricingComparison {
    /// Solution with the given `w̄`.
    pub exogenous: ThresholdSolution,
    /// Solution once the entrant prices against the exogenous threshold.
    pub endogenous: ThresholdSolution,
    /// The entrant's fare and the tolerance it implies.
    pub pricing: EntrantPricing,
}

/// Compare the exogenous-fare threshold with the best-response-fare threshold.
///
/// The entrant prices against the incumbent's status-quo threshold `n*_exo`,
/// so the implied tolerance is `E[W(n*_exo)] <= w̄` and the endogenous feasible
/// set is contained in the exogenous one.
pub fn compare_pricing_regimes(params: &MarketParams) -> Result<PricingComparison> {
    compare_pricing_regimes_with_undercut(params, 0.0)
}

/// As [`compare_pricing_regimes`], with the entrant charging only a fraction
/// `1 − undercut` of the waiting-cost premium.
pub fn compare_pricing_regimes_with_undercut(
    params: &MarketParams,
    undercut: f64,
) -> Result<PricingComparison> {
    if !(0.0..1.0).contains(&undercut) {
        return Err(Error::Domain {
            name: "undercut",
            value: undercut,
        });
    }
    let optimum = n_star_unconstrained(params)?;
    let exogenous = constrain(params.capacity, optimum, demand_ceiling(params)?);
    let best_response = endogenous_price(params, exogenous.n_constrained)?;
    let implied = (1.0 - undercut) * best_response.implied_tolerance;
    let pricing = EntrantPricing {
        price: params.fare + params.wait_cost * implied,
        implied_tolerance: implied,
    };
    let endogenous = constrain(
        params.capacity,
        optimum,
        ceiling_for(params.arrival_rate, implied),
    );
    Ok(PricingComparison {
        exogenous,
        endogenous,
        pricing,
    })
}

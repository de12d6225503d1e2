//! Property suite behind the `verify` command.
//!
//! PASS-class checks gate the exit code; REPORT-class checks only print findings.

use std::fmt;
use std::time::Instant;

use batchdispatch_core::conditions::{self, ConditionForm, SignConvention, Verdict, TABLE_B_AXIS};
use batchdispatch_core::model::{self, Binding, MidrouteModel};
use batchdispatch_core::sim::{self, SimConfig};
use batchdispatch_core::{poisson, Error, MarketParams};
use rand::Rng;

use crate::parallel;

/// Whether a check can fail the run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Class {
    /// Gates the exit code.
    Pass,
    /// Informational finding.
    Report,
}

/// Outcome of one suite item.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    /// Short identifier.
    pub name: String,
    /// PASS or REPORT.
    pub class: Class,
    /// Result; always true for REPORT items.
    pub passed: bool,
    /// Human-readable summary.
    pub detail: String,
}

impl Check {
    fn pass(name: &str, passed: bool, detail: String) -> Self {
        Check {
            name: name.to_owned(),
            class: Class::Pass,
            passed,
            detail,
        }
    }

    fn report(name: &str, detail: String) -> Self {
        Check {
            name: name.to_owned(),
            class: Class::Report,
            passed: true,
            detail,
        }
    }

    /// `PASS`, `FAIL` or `REPORT`.
    pub fn status(&self) -> &'static str {
        match (self.class, self.passed) {
            (Class::Report, _) => "REPORT",
            (Class::Pass, true) => "PASS",
            (Class::Pass, false) => "FAIL",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<6} {}: {}", self.status(), self.name, self.detail)
    }
}

/// Sizes and seeds for a suite run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteConfig {
    /// Draws for the sign-equivalence property.
    pub sign_draws: usize,
    /// Draws for the remaining random properties.
    pub draws: usize,
    /// Cycles per simulation cell.
    pub sim_cycles: u64,
    /// Base seed.
    pub seed: u64,
    /// Simulation worker threads.
    pub threads: Option<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            sign_draws: 10_000,
            draws: 1_000,
            sim_cycles: 20_000,
            seed: 2024,
            threads: None,
        }
    }
}

/// Run every item.
pub fn run_suite(cfg: &SuiteConfig) -> Vec<Check> {
    let mut out = roots();
    out.push(table_b_patterns());
    out.push(figure2_facts());
    out.push(sign_equivalence(cfg.sign_draws, cfg.seed));
    out.extend(critical_rates(cfg.draws, cfg.seed.wrapping_add(1)));
    out.push(acceptance_monotonicity(cfg.draws, cfg.seed.wrapping_add(2)));
    out.push(pricing_regimes(cfg.draws, cfg.seed.wrapping_add(3)));
    out.extend(monotonicity_sweeps());
    out.extend(equivalence_checks());
    out.extend(single_seat_claims());
    out.push(wait_grid(
        cfg.sim_cycles,
        cfg.seed.wrapping_add(4),
        cfg.threads,
    ));
    out.push(closed_form_grid(
        cfg.sim_cycles,
        cfg.seed.wrapping_add(5),
        cfg.threads,
    ));
    out
}

/// True when no PASS-class item failed.
pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

fn rng(seed: u64) -> impl Rng {
    sim::seeded_stream(seed, u64::MAX)
}

/// Root tolerance against the published three-decimal values.
pub const ROOT_TOLERANCE: f64 = 1e-3;
/// Largest acceptable residual at a located root.
pub const ROOT_RESIDUAL: f64 = 1e-10;

/// `μ*`, `μ†₁`, `μ†₂`.
pub fn roots() -> Vec<Check> {
    let start = Instant::now();
    let mut found = vec![("mu_star", 1.146, Ok(conditions::mu_star()))];
    found.push(("mu_dagger_1", 1.793, conditions::mu_dagger(1)));
    found.push(("mu_dagger_2", 0.807, conditions::mu_dagger(2)));
    let elapsed = start.elapsed();
    found
        .into_iter()
        .map(|(name, target, r)| match r {
            Ok(r) => Check::pass(
                name,
                (r.value - target).abs() <= ROOT_TOLERANCE && r.residual.abs() < ROOT_RESIDUAL,
                format!(
                    "{:.4} (target {target} ± {ROOT_TOLERANCE}, residual {:.1e}, {} halvings, all roots in {:.1} ms)",
                    r.value,
                    r.residual,
                    r.iterations,
                    elapsed.as_secs_f64() * 1e3
                ),
            ),
            Err(e) => Check::pass(name, false, e.to_string()),
        })
        .collect()
}

/// Yes cells of the default travel-time tables for `n = 3, 4, 5`.
pub fn table_b_patterns() -> Check {
    let expected_n5 = [(1.0, 2.0), (2.0, 1.0), (2.0, 2.0)];
    let mut problems = Vec::new();
    let mut counts = Vec::new();
    for n in 3..=5 {
        let t = match conditions::table_b(n, &TABLE_B_AXIS, &TABLE_B_AXIS) {
            Ok(t) => t,
            Err(e) => return Check::pass("table_b", false, e.to_string()),
        };
        counts.push(format!("n={n}: {}/{}", t.yes_count(), t.len()));
        for (i, &l) in t.arrival_rates.iter().enumerate() {
            for (j, &tt) in t.travel_times.iter().enumerate() {
                let want = n < 5 || expected_n5.contains(&(l, tt));
                if t.cells[i][j] != want {
                    problems.push(format!("n={n} λ={l} T={tt}"));
                }
            }
        }
    }
    let detail = if problems.is_empty() {
        counts.join(", ")
    } else {
        format!(
            "{}; mismatches at {}",
            counts.join(", "),
            problems.join("; ")
        )
    };
    Check::pass("table_b", problems.is_empty(), detail)
}

/// Demand ceiling, threshold and binding bound at the figure's defaults.
pub fn figure2_facts() -> Check {
    let p = MarketParams::new(1.0, 0.33).with_tolerance(0.5);
    match model::n_star_constrained(&p) {
        Ok(s) => Check::pass(
            "figure2",
            s.demand_ceiling == 2 && s.n_constrained == 2 && s.binding == Binding::Demand,
            format!(
                "ceiling {}, n* {}, binding {:?}, unconstrained {}",
                s.demand_ceiling, s.n_constrained, s.binding, s.n_unconstrained
            ),
        ),
        Err(e) => Check::pass("figure2", false, e.to_string()),
    }
}

/// `sign Δπ(n) = sign N(n)` over random `(λ, T, n)`.
pub fn sign_equivalence(draws: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut violations = Vec::new();
    let mut negative = 0;
    for _ in 0..draws {
        let lambda = rng.random_range(0.05..5.0);
        let t = rng.random_range(0.05..3.0);
        let n = rng.random_range(1..=5u32);
        let fare = rng.random_range(0.1..10.0);
        let p = MarketParams::new(lambda, t).with_fare(fare);
        let (d, num) = match (model::increment(&p, n), model::numerator(&p, n)) {
            (Ok(d), Ok(num)) => (d, num),
            _ => {
                violations.push(format!("error at λ={lambda} T={t} n={n}"));
                continue;
            }
        };
        if d < 0.0 {
            negative += 1;
        }
        // Values within 1e-10 relative of zero count as either sign.
        let scale = model::profit_rate(&p, n + 1)
            .unwrap_or(1.0)
            .abs()
            .max(1e-300);
        let tiny = d.abs() <= 1e-10 * scale;
        if !tiny && d.signum() != num.signum() {
            violations.push(format!("λ={lambda} T={t} n={n} Δπ={d:e} N={num:e}"));
        }
    }
    Check::pass(
        "sign_equivalence",
        violations.is_empty(),
        format!(
            "{} violations over {draws} draws ({negative} with Δπ < 0){}",
            violations.len(),
            first(&violations)
        ),
    )
}

fn first(v: &[String]) -> String {
    v.first()
        .map(|s| format!("; first: {s}"))
        .unwrap_or_default()
}

/// Sign change of `Δπ` across `λ†ₙ`, and the six-seat threshold falling below it.
pub fn critical_rates(draws: usize, seed: u64) -> Vec<Check> {
    let mut rng = rng(seed);
    let mut bracket_violations = Vec::new();
    let mut with_root = 0;
    let mut without_root = [0usize; 5];
    for _ in 0..draws {
        let t = rng.random_range(0.05..3.0);
        let n = rng.random_range(1..=5u32);
        let root = match model::critical_arrival_rate(n, t, model::DEFAULT_CAPACITY) {
            Ok(r) => r.root.value,
            Err(Error::NoSignChange { .. }) => {
                without_root[n as usize - 1] += 1;
                continue;
            }
            Err(e) => {
                bracket_violations.push(format!("T={t} n={n}: {e}"));
                continue;
            }
        };
        with_root += 1;
        let at =
            |lambda: f64| model::increment(&MarketParams::new(lambda, t), n).unwrap_or(f64::NAN);
        let (below, above) = (at(0.99 * root), at(1.01 * root));
        if !(below < 0.0 && above > 0.0) {
            bracket_violations.push(format!("T={t} n={n} λ†={root}: Δπ {below:e} / {above:e}"));
        }
    }

    let mut drop_violations = Vec::new();
    let mut six = 0;
    for _ in 0..draws {
        let t = rng.random_range(0.05..3.0);
        let Ok(r) = model::critical_arrival_rate(5, t, model::DEFAULT_CAPACITY) else {
            drop_violations.push(format!("no λ†₅ at T={t}"));
            continue;
        };
        let l5 = r.root.value;
        let lambda = l5 * rng.random_range(1.0..4.0);
        let lower = l5 * rng.random_range(0.01..1.0);
        let n_at = |l: f64| {
            model::n_star_unconstrained(&MarketParams::new(l, t)).map(|o| o.first_crossing)
        };
        match (n_at(lambda), n_at(lower)) {
            (Ok(6), Ok(m)) => {
                six += 1;
                if m > 5 {
                    drop_violations.push(format!("T={t} λ̃={lower} n*={m}"));
                }
            }
            (Ok(_), Ok(_)) => {}
            _ => drop_violations.push(format!("error at T={t}")),
        }
    }

    vec![
        Check::pass(
            "critical_rate_bracket",
            bracket_violations.is_empty() && with_root > 0,
            format!(
                "{} violations over {with_root} draws with a sign change; draws without one by n=1..5: {:?}{}",
                bracket_violations.len(),
                without_root,
                first(&bracket_violations)
            ),
        ),
        Check::pass(
            "six_seat_drop",
            drop_violations.is_empty() && six > 0,
            format!(
                "{} violations over {six} draws with n* = 6{}",
                drop_violations.len(),
                first(&drop_violations)
            ),
        ),
    ]
}

/// Grid of acceptance probabilities for the monotonicity check.
pub const THETA_GRID: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// `π` strictly increasing in θ under both mid-route models.
pub fn acceptance_monotonicity(draws: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut violations = Vec::new();
    let mut eligible = 0;
    for _ in 0..draws {
        let lambda = rng.random_range(0.05..5.0);
        let t = rng.random_range(0.05..3.0);
        let n = rng.random_range(1..=5u32);
        let fare = rng.random_range(0.1..10.0);
        let cost = rng.random_range(0.0..2.0);
        let g = poisson::g(model::DEFAULT_CAPACITY - n, lambda * t).unwrap_or(0.0);
        if g <= 1e-9 {
            continue;
        }
        eligible += 1;
        for midroute in [MidrouteModel::Linear, MidrouteModel::Thinned] {
            let base = MarketParams::new(lambda, t)
                .with_fare(fare)
                .with_operating_cost(cost)
                .with_midroute(midroute);
            let profits: Vec<f64> = THETA_GRID
                .iter()
                .map(|&th| model::profit_rate(&base.with_acceptance(th), n).unwrap_or(f64::NAN))
                .collect();
            if !profits.windows(2).all(|w| w[1] > w[0]) {
                violations.push(format!("{midroute:?} λ={lambda} T={t} n={n}: {profits:?}"));
            }
        }
    }
    Check::pass(
        "acceptance_monotonicity",
        violations.is_empty() && eligible > 0,
        format!(
            "{} violations over {eligible} eligible draws{}",
            violations.len(),
            first(&violations)
        ),
    )
}

/// Endogenous entrant pricing never raises the operative threshold.
pub fn pricing_regimes(draws: usize, seed: u64) -> Check {
    let mut rng = rng(seed);
    let mut violations = Vec::new();
    let mut strict = 0;
    for _ in 0..draws {
        let lambda = rng.random_range(0.05..5.0);
        let t = rng.random_range(0.05..3.0);
        let wbar = rng.random_range(0.01..3.0);
        let undercut = if rng.random_bool(0.5) {
            0.0
        } else {
            rng.random_range(0.0..0.9)
        };
        let p = MarketParams::new(lambda, t).with_tolerance(wbar);
        match model::compare_pricing_regimes_with_undercut(&p, undercut) {
            Ok(c) => {
                if c.endogenous.n_constrained > c.exogenous.n_constrained {
                    violations.push(format!("λ={lambda} T={t} w̄={wbar} undercut={undercut}"));
                } else if c.endogenous.n_constrained < c.exogenous.n_constrained {
                    strict += 1;
                }
            }
            Err(e) => violations.push(e.to_string()),
        }
    }
    Check::pass(
        "pricing_regimes",
        violations.is_empty(),
        format!(
            "{} violations over {draws} draws ({strict} strict){}",
            violations.len(),
            first(&violations)
        ),
    )
}

fn geometric(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let r = (hi / lo).powf(1.0 / (points - 1) as f64);
    (0..points).map(|i| lo * r.powi(i as i32)).collect()
}

fn condition_m_everywhere(lambda: f64, t: f64) -> bool {
    (1..=5).all(|n| {
        conditions::condition_m_direct(n, lambda, t, SignConvention::Positive)
            .is_ok_and(|c| c.holds())
    })
}

fn b1_everywhere(lambda: f64, t: f64) -> bool {
    (1..=5).all(|n| conditions::condition_b1(n, lambda * t).is_ok_and(|c| c.holds()))
}

fn n_star(lambda: f64, t: f64, wbar: f64) -> Option<u32> {
    model::n_star_constrained(&MarketParams::new(lambda, t).with_tolerance(wbar))
        .ok()
        .map(|s| s.n_constrained)
}

/// Travel times of the arrival-rate sweep.
pub const SWEEP_TRAVEL_TIMES: [f64; 6] = [0.1, 0.33, 0.5, 1.0, 2.0, 3.0];
/// Arrival rates of the travel-time sweep.
pub const SWEEP_ARRIVAL_RATES: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];

/// `n*` weakly increasing in λ and in T where the sufficient conditions hold,
/// and bounded by four on the calibration window.
pub fn monotonicity_sweeps() -> Vec<Check> {
    let wbar = 0.5;
    let mut out = Vec::new();

    let rates = geometric(0.05, 200.0, 80);
    let (mut eligible, mut violations, mut unrestricted) = (0, Vec::new(), 0);
    for &t in &SWEEP_TRAVEL_TIMES {
        for w in rates.windows(2) {
            let (a, b) = (n_star(w[0], t, wbar), n_star(w[1], t, wbar));
            let decreasing =
                matches!((a, b), (Some(a), Some(b)) if b < a) || a.is_none() || b.is_none();
            if decreasing {
                unrestricted += 1;
            }
            if condition_m_everywhere(w[0], t) && condition_m_everywhere(w[1], t) {
                eligible += 1;
                if decreasing {
                    violations.push(format!("T={t} λ {}→{}: {a:?}→{b:?}", w[0], w[1]));
                }
            }
        }
    }
    out.push(Check::pass(
        "monotone_in_lambda",
        violations.is_empty() && eligible > 0,
        format!(
            "{} violations over {eligible} adjacent pairs where Condition M holds for all n <= 5 ({} decreases over all {} pairs)",
            violations.len(),
            unrestricted,
            SWEEP_TRAVEL_TIMES.len() * (rates.len() - 1)
        ),
    ));

    let times = geometric(0.05, 10.0, 60);
    let (mut eligible, mut violations, mut unrestricted) = (0, Vec::new(), 0);
    for &l in &SWEEP_ARRIVAL_RATES {
        for w in times.windows(2) {
            let (a, b) = (n_star(l, w[0], wbar), n_star(l, w[1], wbar));
            let decreasing =
                matches!((a, b), (Some(a), Some(b)) if b < a) || a.is_none() || b.is_none();
            if decreasing {
                unrestricted += 1;
            }
            if b1_everywhere(l, w[0]) && b1_everywhere(l, w[1]) {
                eligible += 1;
                if decreasing {
                    violations.push(format!("λ={l} T {}→{}: {a:?}→{b:?}", w[0], w[1]));
                }
            }
        }
    }
    out.push(Check::pass(
        "monotone_in_travel_time",
        violations.is_empty() && eligible > 0,
        format!(
            "{} violations over {eligible} adjacent pairs where the travel-time condition holds for all n <= 5 ({} decreases over all {} pairs)",
            violations.len(),
            unrestricted,
            SWEEP_ARRIVAL_RATES.len() * (times.len() - 1)
        ),
    ));

    // λ ∈ [1, 2] at T = 0.33 spans λT ∈ [0.33, 0.66].
    let t = 0.33;
    let window: Vec<f64> = (0..=20).map(|i| 1.0 + f64::from(i) / 20.0).collect();
    let constrained: Vec<Option<u32>> = window.iter().map(|&l| n_star(l, t, wbar)).collect();
    let worst = constrained.iter().flatten().max().copied();
    out.push(Check::pass(
        "calibration_window",
        constrained.iter().all(|n| n.is_some_and(|n| n <= 4)),
        format!("largest n* over λT ∈ [0.33, 0.66] with w̄ = {wbar}: {worst:?}"),
    ));
    let unconstrained: Vec<u32> = window
        .iter()
        .filter_map(|&l| model::n_star_unconstrained(&MarketParams::new(l, t)).ok())
        .map(|o| o.first_crossing)
        .collect();
    out.push(Check::report(
        "calibration_window_unconstrained",
        format!(
            "ignoring passenger tolerance, the profit-maximising threshold over the same window ranges {:?}..={:?}",
            unconstrained.iter().min(),
            unconstrained.iter().max()
        ),
    ));
    out
}

/// Agreement among the Condition M forms.
pub fn equivalence_checks() -> Vec<Check> {
    let thresholds: Vec<u32> = (1..=5).collect();
    let means = conditions::default_mean_grid();
    let mut out = Vec::new();
    for convention in SignConvention::ALL {
        let r = match conditions::equivalence_grid(&thresholds, &means, convention) {
            Ok(r) => r,
            Err(e) => {
                out.push(Check::pass("equivalence_grid", false, e.to_string()));
                continue;
            }
        };
        let label = convention.label();
        out.push(Check::pass(
            &format!("direct_vs_probabilistic_{label}"),
            r.direct_probabilistic_agreement == r.total(),
            format!(
                "{}/{} cells agree",
                r.direct_probabilistic_agreement,
                r.total()
            ),
        ));
        if convention == SignConvention::Positive {
            let row: Vec<_> = r.cells.iter().filter(|c| c.n == 5).collect();
            let agree = row
                .iter()
                .filter(|c| c.verdicts[0] == c.verdicts[2])
                .count();
            out.push(Check::pass(
                "single_seat_exp_bound",
                agree == row.len() && !row.is_empty(),
                format!(
                    "n = 5: probabilistic and exponential-bound verdicts agree at {agree}/{} means",
                    row.len()
                ),
            ));
        }
        let pairs = [
            (ConditionForm::Probabilistic, ConditionForm::Factorial),
            (ConditionForm::Probabilistic, ConditionForm::ExpBound),
            (ConditionForm::Factorial, ConditionForm::ExpBound),
        ];
        let counts: Vec<String> = pairs
            .iter()
            .map(|&(a, b)| {
                format!(
                    "{}~{} {}/{}",
                    a.label(),
                    b.label(),
                    r.matches(a, b),
                    r.total()
                )
            })
            .collect();
        out.push(Check::report(
            &format!("table_c_{label}"),
            format!(
                "{}; {} divergent pairs{}",
                counts.join(", "),
                r.divergences.len(),
                {
                    r.divergences
                        .first()
                        .map(|d| {
                            format!(
                                "; first at n={} μ={} {}≠{}",
                                d.n,
                                d.mu,
                                d.form_a.label(),
                                d.form_b.label()
                            )
                        })
                        .unwrap_or_default()
                }
            ),
        ));
    }
    out
}

/// Where Condition M fails for `n >= 3`, per sign convention.
pub fn single_seat_claims() -> Vec<Check> {
    let means = conditions::default_mean_grid();
    SignConvention::ALL
        .iter()
        .map(|&convention| {
            let mut fails = Vec::new();
            for n in 3..=5 {
                let bad: Vec<f64> = means
                    .iter()
                    .copied()
                    .filter(|&mu| {
                        conditions::condition_m_probabilistic(n, mu, convention)
                            .map_or(true, |c| c.verdict() != Verdict::Holds)
                    })
                    .collect();
                if !bad.is_empty() {
                    fails.push(format!(
                        "n={n} fails at {} of {} means (μ from {} to {})",
                        bad.len(),
                        means.len(),
                        bad[0],
                        bad[bad.len() - 1]
                    ));
                }
            }
            let detail = if fails.is_empty() {
                format!(
                    "Condition M holds for n >= 3 at every μ in 0.1..=5.0 under the {} convention",
                    convention.label()
                )
            } else {
                format!("{} convention: {}", convention.label(), fails.join("; "))
            };
            Check::report(
                &format!("condition_m_n_ge_3_{}", convention.label()),
                detail,
            )
        })
        .collect()
}

/// Thresholds and arrival rates of the waiting-time grid.
pub const WAIT_GRID: ([u32; 5], [f64; 3]) = ([2, 3, 4, 5, 6], [0.5, 1.0, 2.0]);

/// Simulated mean wait against `(n − 1)/(2λ)`; passes with at most one excursion.
pub fn wait_grid(cycles: u64, seed: u64, threads: Option<usize>) -> Check {
    let (ns, rates) = WAIT_GRID;
    let mut hits = 0;
    let mut misses = Vec::new();
    let mut cell = 0u64;
    for &n in &ns {
        for &l in &rates {
            let cfg = SimConfig::new(
                MarketParams::new(l, 1.0),
                n,
                cycles,
                seed.wrapping_add(cell),
            );
            cell += 1;
            let target = f64::from(n - 1) / (2.0 * l);
            match parallel::simulate(&cfg, threads) {
                Ok(r) if r.mean_wait.within(target, 3.0) => hits += 1,
                Ok(r) => misses.push(format!("n={n} λ={l} z={:?}", r.mean_wait.z_score(target))),
                Err(e) => misses.push(e.to_string()),
            }
        }
    }
    let total = ns.len() * rates.len();
    Check::pass(
        "simulated_wait",
        hits + 1 >= total,
        format!(
            "{hits}/{total} cells within 3 SE at {cycles} cycles{}",
            first(&misses)
        ),
    )
}

/// Poisson means of the closed-form simulation grid.
pub const MEAN_GRID: [f64; 4] = [0.33, 0.66, 1.0, 2.0];

/// Simulated admissions and profit rate against `g(k; λT)` and the closed form.
pub fn closed_form_grid(cycles: u64, seed: u64, threads: Option<usize>) -> Check {
    let mut misses = Vec::new();
    let mut compared = 0;
    let mut cell = 0u64;
    for n in 1..=6u32 {
        for &mu in &MEAN_GRID {
            let p = MarketParams::new(1.0, mu);
            let cfg = SimConfig::new(p, n, cycles, seed.wrapping_add(cell));
            cell += 1;
            let targets = (poisson::g(6 - n, mu), model::profit_rate(&p, n));
            match (parallel::simulate(&cfg, threads), targets) {
                (Ok(r), (Ok(g), Ok(pi))) => {
                    for (what, est, target) in [
                        ("midroute", r.mean_midroute, g),
                        ("profit", r.profit_rate, pi),
                    ] {
                        compared += 1;
                        if !est.within(target, 3.0) {
                            misses
                                .push(format!("n={n} λT={mu} {what} z={:?}", est.z_score(target)));
                        }
                    }
                }
                _ => misses.push(format!("error at n={n} λT={mu}")),
            }
        }
    }
    Check::pass(
        "simulated_closed_forms",
        misses.is_empty(),
        format!(
            "{}/{compared} comparisons within 3 SE at {cycles} cycles{}",
            compared - misses.len(),
            if misses.is_empty() {
                String::new()
            } else {
                format!("; outside: {}", misses.join(", "))
            }
        ),
    )
}

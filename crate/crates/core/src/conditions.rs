//! Regularity inequalities behind the comparative statics of the optimal threshold.
//!
//! With `k = 6 − n` slack seats and `M ~ Poisson(μ)`, `μ = λT`:
//!
//! - **Condition M** (`∂N/∂λ > 0`), in three algebraic forms:
//!   direct `nΔg + g > 2λ²T(T + n/(2λ))Δg′ + λTg′`, probabilistic
//!   `nP(M≥k) + E[min{M,k}] > (2μ² + nμ)P(M=k−1) + μP(M<k)`, and the finite
//!   factorial sum obtained by multiplying through by `e^μ`;
//! - the exponential bound `e^μ > 1 + μ + 2μ²/(n+1)`;
//! - the travel-time condition (`∂N/∂T > 0`):
//!   `2(1 − ½Δg) > μΔg′ + (n/2)Δg′ + ½g′`.
//!
//! The derivative `dΔg/dμ = P(M = k−1)` is positive; a negated convention is
//! also supported so that both readings of the printed algebra can be
//! compared side by side.

use alloc::vec::Vec;

use crate::error::{check_mean, Error, Result};
use crate::model::DEFAULT_CAPACITY;
use crate::poisson;
use crate::roots::{bisect, RootResult};

/// Seats assumed throughout the condition forms (the factorial form hard-codes it).
pub const SEATS: u32 = DEFAULT_CAPACITY;

/// `|lhs − rhs|` below this is reported as a boundary case.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// Arrival-rate and travel-time axis used by the validity tables.
pub const TABLE_B_AXIS: [f64; 5] = [0.10, 0.25, 0.50, 1.00, 2.00];

/// Sign attached to `dΔg/dμ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SignConvention {
    /// `dΔg/dμ = +P(M = k−1)`; matches finite differences.
    Positive,
    /// `dΔg/dμ = −P(M = k−1)`.
    Negative,
}

impl SignConvention {
    /// Both conventions, positive first.
    pub const ALL: [SignConvention; 2] = [SignConvention::Positive, SignConvention::Negative];

    fn factor(self) -> f64 {
        match self {
            SignConvention::Positive => 1.0,
            SignConvention::Negative => -1.0,
        }
    }

    /// Short label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            SignConvention::Positive => "positive",
            SignConvention::Negative => "negative",
        }
    }
}

/// Outcome of a strict inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    /// `lhs > rhs` by more than the boundary tolerance.
    Holds,
    /// `lhs < rhs` by more than the boundary tolerance.
    Fails,
    /// `|lhs − rhs| < BOUNDARY_TOLERANCE`.
    Boundary,
}

/// Both sides of a strict inequality `lhs > rhs`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Inequality {
    /// Left-hand side.
    pub lhs: f64,
    /// Right-hand side.
    pub rhs: f64,
}

impl Inequality {
    /// Classify with [`BOUNDARY_TOLERANCE`].
    pub fn verdict(&self) -> Verdict {
        let gap = self.lhs - self.rhs;
        if gap.abs() < BOUNDARY_TOLERANCE {
            Verdict::Boundary
        } else if gap > 0.0 {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }

    /// True only for a strict, non-boundary pass.
    pub fn holds(&self) -> bool {
        self.verdict() == Verdict::Holds
    }
}

fn slack_seats(n: u32) -> Result<u32> {
    if (1..SEATS).contains(&n) {
        Ok(SEATS - n)
    } else {
        Err(Error::ThresholdOutOfRange { n, max: SEATS - 1 })
    }
}

/// Condition M in the `(λ, T)` form.
pub fn condition_m_direct(
    n: u32,
    arrival_rate: f64,
    travel_time: f64,
    convention: SignConvention,
) -> Result<Inequality> {
    let k = slack_seats(n)?;
    if !(arrival_rate > 0.0 && travel_time > 0.0) {
        return Err(Error::InvalidParams(
            "arrival rate and travel time must be positive",
        ));
    }
    let (l, t) = (arrival_rate, travel_time);
    let m = poisson::moments(k, l * t)?;
    let nf = f64::from(n);
    let delta_prime = convention.factor() * m.delta_g_prime;
    Ok(Inequality {
        lhs: nf * m.delta_g + m.g,
        rhs: 2.0 * l * l * t * (t + nf / (2.0 * l)) * delta_prime + l * t * m.g_prime,
    })
}

/// Condition M in the Poisson-mean form `L(k) > R(k)`.
pub fn condition_m_probabilistic(
    n: u32,
    mu: f64,
    convention: SignConvention,
) -> Result<Inequality> {
    let k = slack_seats(n)?;
    check_mean(mu)?;
    let nf = f64::from(n);
    let at_least = poisson::survival(k, mu)?;
    let truncated = poisson::g(k, mu)?;
    let point = poisson::pmf(k - 1, mu)?;
    let below = 1.0 - at_least;
    Ok(Inequality {
        lhs: nf * at_least + truncated,
        rhs: convention.factor() * (2.0 * mu * mu + nf * mu) * point + mu * below,
    })
}

/// Condition M as the finite factorial sum
/// `6e^μ > Σ_{j=0}^{k−2}(6−j+μ)μ^j/j! + [(n+1) + (n+1)μ + 2μ²]μ^{k−1}/(k−1)!`.
///
/// This is the probabilistic form multiplied by `e^μ`, so it carries the
/// positive sign of `dΔg/dμ`.
pub fn condition_m_factorial(n: u32, mu: f64) -> Result<Inequality> {
    let k = slack_seats(n)?;
    check_mean(mu)?;
    let six = f64::from(SEATS);
    // μ^j/j! built by recurrence.
    let mut term = 1.0;
    let mut sum = 0.0;
    for j in 0..k.saturating_sub(1) {
        sum += (six - f64::from(j) + mu) * term;
        term *= mu / f64::from(j + 1);
    }
    let n1 = f64::from(n + 1);
    sum += (n1 + n1 * mu + 2.0 * mu * mu) * term;
    Ok(Inequality {
        lhs: six * libm::exp(mu),
        rhs: sum,
    })
}

/// Exponential bound `e^μ > 1 + μ + (2/(n+1))μ²`.
pub fn exp_bound(n: u32, mu: f64) -> Result<Inequality> {
    slack_seats(n)?;
    check_mean(mu)?;
    Ok(Inequality {
        lhs: libm::exp(mu),
        rhs: 1.0 + mu + 2.0 / f64::from(n + 1) * mu * mu,
    })
}

/// Travel-time condition `2(1 − ½Δg) > μΔg′ + (n/2)Δg′ + ½g′`, positive convention.
pub fn condition_b1(n: u32, mu: f64) -> Result<Inequality> {
    let k = slack_seats(n)?;
    let m = poisson::moments(k, mu)?;
    let nf = f64::from(n);
    Ok(Inequality {
        lhs: 2.0 * (1.0 - 0.5 * m.delta_g),
        rhs: mu * m.delta_g_prime + 0.5 * nf * m.delta_g_prime + 0.5 * m.g_prime,
    })
}

/// Travel-time condition at one slack seat, reduced to `e^μ > μ + 2`.
pub fn condition_b1_single_seat(mu: f64) -> Inequality {
    Inequality {
        lhs: libm::exp(mu),
        rhs: mu + 2.0,
    }
}

/// Every form evaluated at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionVerdict {
    /// Threshold.
    pub n: u32,
    /// Poisson mean `λT`.
    pub mu: f64,
    /// Condition M, `(λ, T)` form.
    pub direct_m: bool,
    /// Condition M, probabilistic form.
    pub prob_m: bool,
    /// Condition M, factorial form.
    pub factorial_m: bool,
    /// Exponential bound.
    pub exp_bound: bool,
    /// Travel-time condition.
    pub b1: bool,
    /// Sign used for `dΔg/dμ` in the direct and probabilistic forms.
    pub sign_convention: SignConvention,
}

impl ConditionVerdict {
    /// Evaluate every form at `(n, λ, T)`.
    pub fn evaluate(
        n: u32,
        arrival_rate: f64,
        travel_time: f64,
        sign_convention: SignConvention,
    ) -> Result<Self> {
        let mu = arrival_rate * travel_time;
        Ok(ConditionVerdict {
            n,
            mu,
            direct_m: condition_m_direct(n, arrival_rate, travel_time, sign_convention)?.holds(),
            prob_m: condition_m_probabilistic(n, mu, sign_convention)?.holds(),
            factorial_m: condition_m_factorial(n, mu)?.holds(),
            exp_bound: exp_bound(n, mu)?.holds(),
            b1: condition_b1(n, mu)?.holds(),
            sign_convention,
        })
    }
}

/// Root `μ*` of `e^μ = μ + 2`, where the travel-time condition switches on for one slack seat.
pub fn mu_star() -> RootResult {
    bisect(|mu| libm::exp(mu) - mu - 2.0, 0.5, 2.0, 0.0)
        .expect("e^mu - mu - 2 changes sign on [0.5, 2]")
}

/// Positive root `μ†ₙ` of `e^μ = 1 + μ + (2/(n+1))μ²` for `n ∈ {1, 2}`.
///
/// For `n >= 3` the bound holds for every `μ > 0` and
/// [`Error::NoPositiveRoot`] is returned.
pub fn mu_dagger(n: u32) -> Result<RootResult> {
    slack_seats(n)?;
    if n >= 3 {
        return Err(Error::NoPositiveRoot { n });
    }
    let b = 2.0 / f64::from(n + 1);
    // Near zero the gap behaves like (½ − b)μ² < 0; at μ = 5 it is positive.
    bisect(|mu| libm::exp(mu) - 1.0 - mu - b * mu * mu, 1e-3, 5.0, 0.0)
}

/// Yes/No grid of the travel-time condition over arrival rate (rows) and travel time (columns).
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConditionTable {
    /// Threshold.
    pub n: u32,
    /// Row axis.
    pub arrival_rates: Vec<f64>,
    /// Column axis.
    pub travel_times: Vec<f64>,
    /// `cells[i][j]` is the verdict at `(arrival_rates[i], travel_times[j])`.
    pub cells: Vec<Vec<bool>>,
}

impl ConditionTable {
    /// Number of cells where the inequality holds.
    pub fn yes_count(&self) -> usize {
        self.cells.iter().flatten().filter(|&&c| c).count()
    }

    /// Total number of cells.
    pub fn len(&self) -> usize {
        self.arrival_rates.len() * self.travel_times.len()
    }

    /// True for an empty grid.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Tabulate the travel-time condition for threshold `n` on the given axes.
pub fn table_b(n: u32, arrival_rates: &[f64], travel_times: &[f64]) -> Result<ConditionTable> {
    let mut cells = Vec::with_capacity(arrival_rates.len());
    for &l in arrival_rates {
        let mut row = Vec::with_capacity(travel_times.len());
        for &t in travel_times {
            row.push(condition_b1(n, l * t)?.holds());
        }
        cells.push(row);
    }
    Ok(ConditionTable {
        n,
        arrival_rates: arrival_rates.to_vec(),
        travel_times: travel_times.to_vec(),
        cells,
    })
}

/// Forms compared in the equivalence grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ConditionForm {
    /// Probabilistic Condition M.
    Probabilistic,
    /// Factorial finite-sum Condition M.
    Factorial,
    /// Exponential bound.
    ExpBound,
}

impl ConditionForm {
    /// Matrix order.
    pub const ALL: [ConditionForm; 3] = [
        ConditionForm::Probabilistic,
        ConditionForm::Factorial,
        ConditionForm::ExpBound,
    ];

    /// Short label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            ConditionForm::Probabilistic => "probabilistic",
            ConditionForm::Factorial => "factorial",
            ConditionForm::ExpBound => "exp_bound",
        }
    }
}

/// Verdicts of every form at one `(n, μ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EquivalenceCell {
    /// Threshold.
    pub n: u32,
    /// Poisson mean.
    pub mu: f64,
    /// Verdicts in [`ConditionForm::ALL`] order.
    pub verdicts: [Verdict; 3],
    /// Direct form evaluated at `(λ, T) = (μ, 1)`.
    pub direct: Verdict,
}

/// A pair of forms that disagree at one grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Divergence {
    /// Threshold.
    pub n: u32,
    /// Poisson mean.
    pub mu: f64,
    /// First form.
    pub form_a: ConditionForm,
    /// Second form.
    pub form_b: ConditionForm,
    /// Verdict of the first form.
    pub verdict_a: Verdict,
    /// Verdict of the second form.
    pub verdict_b: Verdict,
}

/// Pairwise agreement of the Condition M forms over an `(n, μ)` grid.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EquivalenceReport {
    /// Sign used for `dΔg/dμ` in the probabilistic and direct forms.
    pub convention: SignConvention,
    /// Threshold axis.
    pub thresholds: Vec<u32>,
    /// Mean axis.
    pub means: Vec<f64>,
    /// One entry per `(n, μ)`, thresholds outer.
    pub cells: Vec<EquivalenceCell>,
    /// `agreement[a][b]` counts cells where forms `a` and `b` give the same boolean.
    pub agreement: [[usize; 3]; 3],
    /// Cells where the direct and probabilistic forms agree.
    pub direct_probabilistic_agreement: usize,
    /// Every disagreeing pair, in grid order.
    pub divergences: Vec<Divergence>,
}

impl EquivalenceReport {
    /// Number of grid cells.
    pub fn total(&self) -> usize {
        self.cells.len()
    }

    /// Agreement count for a pair of forms.
    pub fn matches(&self, a: ConditionForm, b: ConditionForm) -> usize {
        self.agreement[a as usize][b as usize]
    }
}

/// `0.1, 0.2, ..., 5.0`.
pub fn default_mean_grid() -> Vec<f64> {
    (1..=50).map(|i| f64::from(i) / 10.0).collect()
}

/// Evaluate the three Condition M forms on every `(n, μ)` and tally agreement.
pub fn equivalence_grid(
    thresholds: &[u32],
    means: &[f64],
    convention: SignConvention,
) -> Result<EquivalenceReport> {
    let mut cells = Vec::with_capacity(thresholds.len() * means.len());
    let mut agreement = [[0usize; 3]; 3];
    let mut direct_probabilistic_agreement = 0;
    let mut divergences = Vec::new();
    for &n in thresholds {
        for &mu in means {
            let verdicts = [
                condition_m_probabilistic(n, mu, convention)?.verdict(),
                condition_m_factorial(n, mu)?.verdict(),
                exp_bound(n, mu)?.verdict(),
            ];
            let direct = if mu > 0.0 {
                condition_m_direct(n, mu, 1.0, convention)?.verdict()
            } else {
                verdicts[0]
            };
            let truth = verdicts.map(|v| v == Verdict::Holds);
            for a in 0..3 {
                for b in 0..3 {
                    if truth[a] == truth[b] {
                        agreement[a][b] += 1;
                    }
                }
            }
            if (direct == Verdict::Holds) == truth[0] {
                direct_probabilistic_agreement += 1;
            }
            for a in 0..3 {
                for b in (a + 1)..3 {
                    if truth[a] != truth[b] {
                        divergences.push(Divergence {
                            n,
                            mu,
                            form_a: ConditionForm::ALL[a],
                            form_b: ConditionForm::ALL[b],
                            verdict_a: verdicts[a],
                            verdict_b: verdicts[b],
                        });
                    }
                }
            }
            cells.push(EquivalenceCell {
                n,
                mu,
                verdicts,
                direct,
            });
        }
    }
    Ok(EquivalenceReport {
        convention,
        thresholds: thresholds.to_vec(),
        means: means.to_vec(),
        cells,
        agreement,
        direct_probabilistic_agreement,
        divergences,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poisson::PmfSeries;
    use proptest::prelude::*;
    use SignConvention::{Negative, Positive};

    // Factorial right-hand side rebuilt from e^μ·P(M = j).
    fn factorial_from_pmf(n: u32, mu: f64) -> Result<f64> {
        let k = slack_seats(n)?;
        let six = f64::from(SEATS);
        let scale = libm::exp(mu);
        let n1 = f64::from(n + 1);
        let mut sum = 0.0;
        for (j, p) in PmfSeries::new(mu).take(k as usize).enumerate() {
            let j = j as u32;
            let weight = if j + 1 == k {
                n1 + n1 * mu + 2.0 * mu * mu
            } else {
                six - f64::from(j) + mu
            };
            sum += weight * p * scale;
        }
        Ok(sum)
    }

    #[test]
    fn direct_examples() {
        let c = condition_m_direct(5, 1.0, 1.0, Positive).unwrap();
        // k = 1 at unit mean: 6(1 − 1/e) against 8/e.
        let e = core::f64::consts::E;
        assert!((c.lhs - 6.0 * (1.0 - 1.0 / e)).abs() < 1e-14, "{c:?}");
        assert!((c.rhs - 8.0 / e).abs() < 1e-14, "{c:?}");
        assert!(c.holds());

        let c = condition_m_direct(4, 1.0, 1.0, Positive).unwrap();
        assert!(
            (c.lhs - 1.9533).abs() < 1e-4 && (c.rhs - 2.9430).abs() < 1e-4,
            "{c:?}"
        );
        assert!(!c.holds());

        let c = condition_m_direct(4, 1.0, 1.0, Negative).unwrap();
        assert!((c.rhs - (-1.4716)).abs() < 1e-4);
        assert!(c.holds());

        assert!(condition_m_direct(6, 1.0, 1.0, Positive).is_err());
        assert!(condition_m_direct(0, 1.0, 1.0, Positive).is_err());
    }

    #[test]
    fn direct_depends_only_on_mean() {
        for n in 1..=5 {
            for conv in SignConvention::ALL {
                for (l, t) in [(1.0, 1.5), (0.3, 2.0), (4.0, 0.2)] {
                    let a = condition_m_direct(n, l, t, conv).unwrap();
                    let b = condition_m_direct(n, 2.0 * l, t / 2.0, conv).unwrap();
                    assert_eq!(a.verdict(), b.verdict());
                    assert!((a.rhs - b.rhs).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn probabilistic_examples() {
        assert!(condition_m_probabilistic(5, 1.0, Positive).unwrap().holds());
        for n in 1..=5 {
            let c = condition_m_probabilistic(n, 0.0, Positive).unwrap();
            assert_eq!(c.verdict(), Verdict::Boundary);
            assert!(!c.holds());
        }
    }

    #[test]
    fn factorial_examples() {
        let c = condition_m_factorial(5, 1.0).unwrap();
        assert!((c.lhs - 6.0 * 1f64.exp()).abs() < 1e-12);
        assert!((c.rhs - 14.0).abs() < 1e-12);
        assert!(c.holds());

        let c = condition_m_factorial(4, 1.0).unwrap();
        assert!((c.rhs - 19.0).abs() < 1e-12);
        assert!(!c.holds());

        // 6 versus (n + 1) = 6 at μ = 0.
        assert_eq!(
            condition_m_factorial(5, 0.0).unwrap().verdict(),
            Verdict::Boundary
        );
    }

    #[test]
    fn factorial_matches_pmf_rewrite() {
        for n in 1..=5 {
            for mu in [0.1, 0.9, 2.5, 5.0] {
                let c = condition_m_factorial(n, mu).unwrap();
                let alt = factorial_from_pmf(n, mu).unwrap();
                assert!((c.rhs - alt).abs() < 1e-10 * c.rhs.max(1.0));
            }
        }
    }

    #[test]
    fn exp_bound_examples() {
        for mu in [1e-3, 0.5, 3.0, 20.0] {
            assert!(exp_bound(3, mu).unwrap().holds());
        }
        let r2 = mu_dagger(2).unwrap().value;
        assert!(!exp_bound(2, r2 - 1e-3).unwrap().holds());
        assert!(exp_bound(2, r2 + 1e-3).unwrap().holds());
        let r1 = mu_dagger(1).unwrap().value;
        assert!(!exp_bound(1, r1 - 1e-3).unwrap().holds());
        assert!(exp_bound(1, r1 + 1e-3).unwrap().holds());
    }

    #[test]
    fn b1_examples() {
        assert!(!condition_b1(5, 1.0).unwrap().holds());
        assert!(condition_b1(5, 2.0).unwrap().holds());
        assert!(condition_b1(3, 4.0).unwrap().holds());
    }

    #[test]
    fn roots() {
        let s = mu_star();
        assert!((s.value - 1.146).abs() < 1e-3);
        assert!(s.residual.abs() < 1e-10);
        // Frozen from an independent Brent solve.
        assert!((s.value - 1.146_193_220_620_582_6).abs() < 1e-12);

        let d2 = mu_dagger(2).unwrap();
        assert!((d2.value - 0.807).abs() < 1e-3 && d2.residual.abs() < 1e-10);
        let d1 = mu_dagger(1).unwrap();
        assert!((d1.value - 1.793).abs() < 1e-3 && d1.residual.abs() < 1e-10);
        for n in 3..=5 {
            assert_eq!(mu_dagger(n), Err(Error::NoPositiveRoot { n }));
        }
        assert!(mu_dagger(6).is_err());
    }

    #[test]
    fn mu_star_function_is_increasing() {
        let f = |mu: f64| mu.exp() - mu - 2.0;
        let xs: Vec<f64> = (0..=150).map(|i| 0.5 + f64::from(i) * 0.01).collect();
        assert!(xs.windows(2).all(|w| f(w[1]) > f(w[0])));
    }

    #[test]
    fn tables_b() {
        let t3 = table_b(3, &TABLE_B_AXIS, &TABLE_B_AXIS).unwrap();
        let t4 = table_b(4, &TABLE_B_AXIS, &TABLE_B_AXIS).unwrap();
        let t5 = table_b(5, &TABLE_B_AXIS, &TABLE_B_AXIS).unwrap();
        assert_eq!((t3.yes_count(), t3.len()), (25, 25));
        assert_eq!(t4.yes_count(), 25);
        assert_eq!(t5.yes_count(), 3);
        assert!(t5.cells[3][4] && t5.cells[4][3] && t5.cells[4][4]);
        let single = table_b(5, &[1.0], &[1.0]).unwrap();
        assert!(!single.cells[0][0]);
        assert!(table_b(5, &[], &TABLE_B_AXIS).unwrap().is_empty());
    }

    #[test]
    fn single_seat_reductions() {
        for mu in default_mean_grid() {
            assert_eq!(
                condition_b1(5, mu).unwrap().holds(),
                condition_b1_single_seat(mu).holds()
            );
            assert_eq!(
                condition_m_probabilistic(5, mu, Positive).unwrap().holds(),
                exp_bound(5, mu).unwrap().holds()
            );
        }
    }

    #[test]
    fn equivalence_single_seat_row() {
        let r = equivalence_grid(&[5], &default_mean_grid(), Positive).unwrap();
        assert_eq!(r.total(), 50);
        assert_eq!(
            r.matches(ConditionForm::Probabilistic, ConditionForm::ExpBound),
            50
        );
        assert!(r.divergences.is_empty());
    }

    #[test]
    fn equivalence_full_grid_counts() {
        let ns = [1, 2, 3, 4, 5];
        let pos = equivalence_grid(&ns, &default_mean_grid(), Positive).unwrap();
        assert_eq!(pos.total(), 250);
        assert_eq!(pos.direct_probabilistic_agreement, 250);
        // The factorial sum is the probabilistic form times e^μ.
        assert_eq!(
            pos.matches(ConditionForm::Probabilistic, ConditionForm::Factorial),
            250
        );
        for a in ConditionForm::ALL {
            assert_eq!(pos.matches(a, a), 250);
        }
        let neg = equivalence_grid(&ns, &default_mean_grid(), Negative).unwrap();
        assert_eq!(neg.direct_probabilistic_agreement, 250);
        assert!(equivalence_grid(&ns, &[], Positive)
            .unwrap()
            .cells
            .is_empty());
    }

    #[test]
    fn verdict_record() {
        let v = ConditionVerdict::evaluate(5, 1.0, 2.0, Positive).unwrap();
        assert!(v.direct_m && v.prob_m && v.factorial_m && v.exp_bound && v.b1);
        let v = ConditionVerdict::evaluate(4, 1.0, 1.0, Negative).unwrap();
        assert!(v.direct_m && v.prob_m && !v.factorial_m);
    }

    proptest! {
        #[test]
        fn direct_equals_probabilistic(
            n in 1u32..6, l in 0.01f64..10.0, t in 0.01f64..5.0, neg in any::<bool>()
        ) {
            let conv = if neg { Negative } else { Positive };
            let d = condition_m_direct(n, l, t, conv).unwrap();
            let p = condition_m_probabilistic(n, l * t, conv).unwrap();
            prop_assert_eq!(d.holds(), p.holds());
        }

        #[test]
        fn exp_bound_always_holds_from_three(n in 3u32..6, mu in 1e-3f64..20.0) {
            prop_assert!(exp_bound(n, mu).unwrap().holds());
        }
    }
}

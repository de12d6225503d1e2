//! Poisson probabilities and the capacity-truncated expectation kernel.
//!
//! For `M ~ Poisson(mu)` and `k` free seats, the kernel is
//! `g(k; mu) = E[min{M, k}]`, the expected number of roadside riders a vehicle
//! can admit. Its first difference in `k` and its derivatives in `mu` have
//! closed forms in terms of Poisson point and tail probabilities:
//!
//! | quantity        | closed form      |
//! |-----------------|------------------|
//! | `Δg(k)`         | `P(M >= k)`      |
//! | `dg/dmu`        | `P(M < k)`       |
//! | `dΔg/dmu`       | `P(M = k - 1)`   |

use crate::error::{check_mean, Error, Result};

/// Above this mean the pmf is evaluated in log space.
const LOG_SPACE_MEAN: f64 = 30.0;

/// Upper summation index used whenever an infinite Poisson series is truncated.
///
/// `⌈mu + 20·sqrt(mu) + 20⌉` leaves tail mass far below `1e-15` for `mu <= 100`.
pub fn series_cutoff(mu: f64) -> u32 {
    libm::ceil(mu + 20.0 * libm::sqrt(mu) + 20.0) as u32
}

/// `P(M = m)` for `M ~ Poisson(mu)`.
pub fn pmf(m: u32, mu: f64) -> Result<f64> {
    check_mean(mu)?;
    Ok(PmfSeries::new(mu).nth(m as usize).unwrap_or(0.0))
}

/// Successive probabilities `P(M = 0), P(M = 1), ...`.
///
/// Below [`LOG_SPACE_MEAN`] terms come from the recurrence `p_m = p_{m-1}·mu/m`;
/// above it each term is computed as `exp(m·ln mu − mu − ln m!)`.
#[derive(Clone, Debug)]
pub struct PmfSeries {
    mu: f64,
    m: u32,
    prev: f64,
}

impl PmfSeries {
    /// Series for mean `mu`. The caller guarantees `mu >= 0`.
    pub fn new(mu: f64) -> Self {
        PmfSeries {
            mu,
            m: 0,
            prev: 0.0,
        }
    }
}

impl Iterator for PmfSeries {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        let mu = self.mu;
        let m = self.m;
        let p = if mu == 0.0 {
            if m == 0 {
                1.0
            } else {
                0.0
            }
        } else if mu > LOG_SPACE_MEAN {
            let mf = f64::from(m);
            libm::exp(mf * libm::log(mu) - mu - libm::lgamma(mf + 1.0))
        } else if m == 0 {
            libm::exp(-mu)
        } else {
            self.prev * mu / f64::from(m)
        };
        self.prev = p;
        self.m = m.saturating_add(1);
        Some(p)
    }
}

/// `P(M < k)`, the lower cumulative sum.
fn cdf_below(k: u32, mu: f64) -> f64 {
    PmfSeries::new(mu).take(k as usize).sum::<f64>().min(1.0)
}

/// Survival probability `P(M >= k)`; equal to `Δg(k)`.
pub fn survival(k: u32, mu: f64) -> Result<f64> {
    check_mean(mu)?;
    Ok((1.0 - cdf_below(k, mu)).max(0.0))
}

/// Truncated expectation `g(k; mu) = E[min{M, k}]`.
///
/// Evaluated as `Σ_{m<k} m·P(M=m) + k·P(M>=k)`.
pub fn g(k: u32, mu: f64) -> Result<f64> {
    check_mean(mu)?;
    let mut below = 0.0;
    let mut head = 0.0;
    for (m, p) in PmfSeries::new(mu).take(k as usize).enumerate() {
        below += p;
        head += m as f64 * p;
    }
    let tail = (1.0 - below.min(1.0)).max(0.0);
    Ok(head + f64::from(k) * tail)
}

/// The kernel and its first difference and mean-derivatives at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoissonMoments {
    /// `g(k; mu)`.
    pub g: f64,
    /// `Δg(k) = g(k) − g(k−1) = P(M >= k)`.
    pub delta_g: f64,
    /// `dg/dmu = P(M < k)`.
    pub g_prime: f64,
    /// `dΔg/dmu = P(M = k−1)`.
    pub delta_g_prime: f64,
}

/// Evaluate [`PoissonMoments`] for `k >= 1` free seats at mean `mu`.
pub fn moments(k: u32, mu: f64) -> Result<PoissonMoments> {
    check_mean(mu)?;
    if k == 0 {
        return Err(Error::ZeroSlack);
    }
    let mut below = 0.0;
    let mut head = 0.0;
    let mut last = 0.0;
    for (m, p) in PmfSeries::new(mu).take(k as usize).enumerate() {
        below += p;
        head += m as f64 * p;
        last = p;
    }
    let below = below.min(1.0);
    let tail = (1.0 - below).max(0.0);
    Ok(PoissonMoments {
        g: head + f64::from(k) * tail,
        delta_g: tail,
        g_prime: below,
        delta_g_prime: last,
    })
}

/// Central finite differences of `g(k; ·)` and `Δg(k; ·)` at `mu` with step `h`.
///
/// Returns `(dg/dmu, dΔg/dmu)`. Requires `0 < h < mu` so both stencil points
/// stay inside the domain.
pub fn fd_check(k: u32, mu: f64, h: f64) -> Result<(f64, f64)> {
    check_mean(mu)?;
    if k == 0 {
        return Err(Error::ZeroSlack);
    }
    if !(h > 0.0 && h < mu) {
        return Err(Error::Domain {
            name: "h",
            value: h,
        });
    }
    let dg = (g(k, mu + h)? - g(k, mu - h)?) / (2.0 * h);
    let dd = (survival(k, mu + h)? - survival(k, mu - h)?) / (2.0 * h);
    Ok((dg, dd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Independent oracles: plain recurrence from e^{-mu}, brute-force series.
    fn oracle_pmf(m: u32, mu: f64) -> f64 {
        let mut p = (-mu).exp();
        for j in 1..=m {
            p *= mu / f64::from(j);
        }
        p
    }

    fn oracle_g(k: u32, mu: f64) -> f64 {
        (0..=series_cutoff(mu))
            .map(|m| f64::from(m.min(k)) * oracle_pmf(m, mu))
            .sum()
    }

    // g as printed with upper index k plus k·(1 − Σ_{m<=k} p_m).
    fn summation_form(k: u32, mu: f64) -> f64 {
        let head: f64 = (0..=k).map(|m| f64::from(m) * oracle_pmf(m, mu)).sum();
        let mass: f64 = (0..=k).map(|m| oracle_pmf(m, mu)).sum();
        head + f64::from(k) * (1.0 - mass)
    }

    fn tail_sum_form(k: u32, mu: f64) -> f64 {
        (1..=k).map(|i| survival(i, mu).unwrap()).sum()
    }

    const GRID: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];

    #[test]
    fn pmf_examples() {
        assert!((pmf(0, 1.0).unwrap() - 0.367_879_441_171_442_3).abs() < 1e-15);
        assert_eq!(pmf(2, 0.0).unwrap(), 0.0);
        assert_eq!(pmf(0, 0.0).unwrap(), 1.0);
        let p = pmf(3, 2.5).unwrap();
        assert!((p - oracle_pmf(3, 2.5)).abs() < 1e-15);
        assert!((p - 0.213_763_017_249_736_5).abs() < 1e-14);
    }

    #[test]
    fn pmf_rejects_negative_mean() {
        assert!(matches!(pmf(1, -0.5), Err(Error::Domain { .. })));
        assert!(survival(1, f64::NAN).is_err());
        assert!(g(1, -1.0).is_err());
    }

    #[test]
    fn pmf_sums_to_one() {
        for mu in [0.01, 0.7, 3.0, 12.0, 29.9, 30.1, 55.0, 100.0] {
            let total: f64 = PmfSeries::new(mu)
                .take(series_cutoff(mu) as usize + 1)
                .sum();
            assert!((total - 1.0).abs() < 1e-12, "mu = {mu}: {total}");
        }
    }

    #[test]
    fn log_space_matches_recurrence() {
        for mu in [30.5, 42.0, 90.0] {
            for m in [0, 5, 30, 45, 120] {
                let direct = pmf(m, mu).unwrap();
                let rec = oracle_pmf(m, mu);
                assert!((direct - rec).abs() <= 1e-12 * rec, "m = {m}, mu = {mu}");
            }
        }
        assert!(pmf(800, 800.0).unwrap() > 0.0);
    }

    #[test]
    fn survival_examples() {
        assert_eq!(survival(0, 3.7).unwrap(), 1.0);
        assert!((survival(1, 1.0).unwrap() - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((survival(1, 1.0).unwrap() - 0.632_120_6).abs() < 1e-7);
        assert!((survival(2, 1.0).unwrap() - 0.264_241_1).abs() < 1e-7);
    }

    #[test]
    fn g_examples() {
        assert_eq!(g(0, 2.0).unwrap(), 0.0);
        assert!((g(1, 1.0).unwrap() - oracle_g(1, 1.0)).abs() < 1e-14);
        assert!((g(1, 1.0).unwrap() - 0.632_120_6).abs() < 1e-7);
        assert!((g(2, 1.0).unwrap() - oracle_g(2, 1.0)).abs() < 1e-14);
        assert!((g(2, 1.0).unwrap() - 0.896_361_676_485_673).abs() < 1e-14);
    }

    #[test]
    fn g_forms_agree() {
        for mu in GRID {
            for k in 0..=6 {
                let v = g(k, mu).unwrap();
                assert!((v - summation_form(k, mu)).abs() < 1e-12, "k={k} mu={mu}");
                assert!((v - tail_sum_form(k, mu)).abs() < 1e-12, "k={k} mu={mu}");
                assert!((v - oracle_g(k, mu)).abs() < 1e-12, "k={k} mu={mu}");
            }
        }
    }

    #[test]
    fn g_tends_to_mean_for_large_capacity() {
        for mu in [0.1, 1.0, 3.3, 7.0, 10.0] {
            assert!((g(40, mu).unwrap() - mu).abs() < 1e-9, "mu = {mu}");
        }
    }

    #[test]
    fn moments_examples() {
        let m = moments(1, 1.0).unwrap();
        let e = (-1.0f64).exp();
        assert!((m.g - (1.0 - e)).abs() < 1e-15);
        assert!((m.delta_g - (1.0 - e)).abs() < 1e-15);
        assert!((m.g_prime - e).abs() < 1e-15);
        assert!((m.delta_g_prime - e).abs() < 1e-15);

        let m = moments(2, 4.0).unwrap();
        assert!((m.delta_g - 0.9084).abs() < 1e-4);
        assert!((m.delta_g_prime - 0.0733).abs() < 1e-4);
        assert!((m.g_prime - 0.0916).abs() < 1e-4);
        assert!((m.delta_g - (1.0 - oracle_pmf(0, 4.0) - oracle_pmf(1, 4.0))).abs() < 1e-15);

        for k in 1..=6 {
            let m = moments(k, 0.0).unwrap();
            assert_eq!(m.g, 0.0);
            assert_eq!(m.delta_g, 0.0);
            assert_eq!(m.g_prime, 1.0);
            assert_eq!(m.delta_g_prime, if k == 1 { 1.0 } else { 0.0 });
        }
        assert_eq!(moments(0, 1.0), Err(Error::ZeroSlack));
    }

    #[test]
    fn moments_match_difference_of_g() {
        for mu in GRID {
            for k in 1..=6 {
                let m = moments(k, mu).unwrap();
                let diff = g(k, mu).unwrap() - g(k - 1, mu).unwrap();
                assert!((m.delta_g - diff).abs() < 1e-12);
                assert!((m.delta_g - survival(k, mu).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn fd_check_examples() {
        let (dg, _) = fd_check(1, 1.0, 1e-5).unwrap();
        assert!((dg - 0.367_879).abs() < 1e-6);
        let (dg, _) = fd_check(3, 2.0, 1e-5).unwrap();
        let below: f64 = (0..3).map(|j| oracle_pmf(j, 2.0)).sum();
        assert!((dg - below).abs() < 1e-6);
        assert!(fd_check(1, 1e-8, 1e-5).is_err());
        assert!(fd_check(1, 1.0, 0.0).is_err());
        assert!(fd_check(1, 1.0, -1e-3).is_err());
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for mu in GRID {
            for k in 1..=6 {
                let m = moments(k, mu).unwrap();
                let (dg, dd) = fd_check(k, mu, 1e-5).unwrap();
                assert!((dg - m.g_prime).abs() < 1e-6, "k={k} mu={mu}");
                assert!((dd - m.delta_g_prime).abs() < 1e-6, "k={k} mu={mu}");
            }
        }
    }

    proptest! {
        #[test]
        fn g_bounded_and_monotone(k in 0u32..12, mu in 0.0f64..40.0) {
            let v = g(k, mu).unwrap();
            prop_assert!(v >= 0.0);
            prop_assert!(v <= f64::from(k).min(mu) + 1e-12);
            prop_assert!(g(k + 1, mu).unwrap() >= v - 1e-12);
            prop_assert!(g(k, mu + 0.25).unwrap() >= v - 1e-12);
        }

        #[test]
        fn moments_are_probabilities(k in 1u32..12, mu in 0.0f64..60.0) {
            let m = moments(k, mu).unwrap();
            for q in [m.delta_g, m.g_prime, m.delta_g_prime] {
                prop_assert!((0.0..=1.0).contains(&q));
            }
            prop_assert!((m.delta_g + m.g_prime - 1.0).abs() < 1e-12);
        }
    }
}

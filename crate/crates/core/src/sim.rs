//! Monte Carlo simulation of dispatch cycles.
//!
//! Each cycle draws `n` exponential inter-arrival gaps at the terminal, records
//! every passenger's wait until the `n`-th arrival, dispatches, and draws the
//! roadside requests met on the outbound leg. Cycle `i` uses its own ChaCha
//! stream `(seed, i)`, so results do not depend on how cycles are partitioned.
//!
//! Totals are accumulated per block of [`BLOCK_CYCLES`] cycles and blocks are
//! merged in index order. Any executor that evaluates the same blocks and
//! merges them in the same order reproduces [`simulate`] bit for bit.

use core::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Exp, Poisson};

use crate::error::{Error, Result};
use crate::model::MarketParams;

/// Cycles per accumulation block.
pub const BLOCK_CYCLES: u64 = 4096;

/// How roadside requests turn into admitted riders.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum MidrouteVariant {
    /// Admit `min{M, k}` and weight the resulting revenue by θ.
    #[default]
    AggregateMin,
    /// Admit each request independently with probability θ, then cap at `k`.
    SequentialThinned,
}

/// A simulation run.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimConfig {
    /// Market primitives.
    pub params: MarketParams,
    /// Dispatch threshold.
    pub threshold: u32,
    /// Number of cycles.
    pub cycles: u64,
    /// Base seed.
    pub seed: u64,
    /// Mid-route admission variant.
    pub variant: MidrouteVariant,
}

impl SimConfig {
    /// Configuration with the default (aggregate) mid-route variant.
    pub fn new(params: MarketParams, threshold: u32, cycles: u64, seed: u64) -> Self {
        SimConfig {
            params,
            threshold,
            cycles,
            seed,
            variant: MidrouteVariant::AggregateMin,
        }
    }

    /// Select the mid-route variant.
    pub fn with_variant(mut self, variant: MidrouteVariant) -> Self {
        self.variant = variant;
        self
    }

    /// Check the configuration.
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(1..=self.params.capacity).contains(&self.threshold) {
            return Err(Error::ThresholdOutOfRange {
                n: self.threshold,
                max: self.params.capacity,
            });
        }
        if self.cycles == 0 {
            return Err(Error::Domain {
                name: "cycles",
                value: 0.0,
            });
        }
        Ok(())
    }
}

/// Deterministic random source for one substream.
pub fn seeded_stream(seed: u64, stream_id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id);
    rng
}

/// Raw sums over a set of cycles.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CycleTotals {
    /// Cycles accumulated.
    pub cycles: u64,
    wait: f64,
    wait_sq: f64,
    midroute: f64,
    midroute_sq: f64,
    revenue: f64,
    revenue_sq: f64,
    length: f64,
    length_sq: f64,
    revenue_length: f64,
}

impl CycleTotals {
    fn record(&mut self, mean_wait: f64, midroute: f64, revenue: f64, length: f64) {
        self.cycles += 1;
        self.wait += mean_wait;
        self.wait_sq += mean_wait * mean_wait;
        self.midroute += midroute;
        self.midroute_sq += midroute * midroute;
        self.revenue += revenue;
        self.revenue_sq += revenue * revenue;
        self.length += length;
        self.length_sq += length * length;
        self.revenue_length += revenue * length;
    }

    /// Add another block's totals.
    pub fn merge(&mut self, other: &CycleTotals) {
        self.cycles += other.cycles;
        self.wait += other.wait;
        self.wait_sq += other.wait_sq;
        self.midroute += other.midroute;
        self.midroute_sq += other.midroute_sq;
        self.revenue += other.revenue;
        self.revenue_sq += other.revenue_sq;
        self.length += other.length;
        self.length_sq += other.length_sq;
        self.revenue_length += other.revenue_length;
    }

    /// Turn totals into estimates with standard errors.
    pub fn finish(&self, operating_cost: f64) -> SimResult {
        let n = self.cycles as f64;
        let mean_se = |sum: f64, sum_sq: f64| {
            let mean = sum / n;
            let se = if self.cycles > 1 {
                let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
                libm::sqrt(var / n)
            } else {
                0.0
            };
            Estimate {
                mean,
                std_error: se,
            }
        };
        // Renewal-reward ratio of means with a delta-method standard error.
        let ratio = self.revenue / self.length;
        let ratio_se = if self.cycles > 1 {
            let resid = self.revenue_sq - 2.0 * ratio * self.revenue_length
                + ratio * ratio * self.length_sq;
            let mean_len = self.length / n;
            libm::sqrt((resid / (n - 1.0)).max(0.0) / n) / mean_len
        } else {
            0.0
        };
        SimResult {
            mean_wait: mean_se(self.wait, self.wait_sq),
            mean_midroute: mean_se(self.midroute, self.midroute_sq),
            profit_rate: Estimate {
                mean: ratio - operating_cost,
                std_error: ratio_se,
            },
            cycles_run: self.cycles,
        }
    }
}

/// A Monte Carlo mean and its standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Estimate {
    /// Point estimate.
    pub mean: f64,
    /// Standard error.
    pub std_error: f64,
}

impl Estimate {
    /// `(mean − target)/std_error`; `None` when the standard error is zero
    /// and the mean differs from the target.
    pub fn z_score(&self, target: f64) -> Option<f64> {
        let diff = self.mean - target;
        if self.std_error > 0.0 {
            Some(diff / self.std_error)
        } else if diff.abs() <= 1e-12 * target.abs().max(1.0) {
            Some(0.0)
        } else {
            None
        }
    }

    /// Within `sigmas` standard errors of `target`.
    pub fn within(&self, target: f64, sigmas: f64) -> bool {
        self.z_score(target).is_some_and(|z| z.abs() <= sigmas)
    }
}

/// Simulation output.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SimResult {
    /// Mean terminal wait per passenger (hours).
    pub mean_wait: Estimate,
    /// Mean admitted roadside riders per cycle (θ-weighted under the aggregate variant).
    pub mean_midroute: Estimate,
    /// Long-run profit per hour.
    pub profit_rate: Estimate,
    /// Cycles simulated.
    pub cycles_run: u64,
}

/// Simulate the cycles with indices in `range`.
pub fn simulate_cycles(config: &SimConfig, range: Range<u64>) -> Result<CycleTotals> {
    config.validate()?;
    let p = &config.params;
    let n = config.threshold;
    let k = u64::from(p.capacity - n);
    let theta = p.acceptance;
    let mu = p.poisson_mean();
    let gaps = Exp::new(p.arrival_rate).map_err(|_| Error::Domain {
        name: "lambda",
        value: p.arrival_rate,
    })?;
    let requests = if mu > 0.0 {
        Some(Poisson::new(mu).map_err(|_| Error::Domain {
            name: "mu",
            value: mu,
        })?)
    } else {
        None
    };

    let mut totals = CycleTotals::default();
    for cycle in range {
        let mut rng = seeded_stream(config.seed, cycle);

        // Passenger j arrives at epoch t_j; everyone leaves at t_n.
        let mut epoch = 0.0;
        let mut epoch_sum = 0.0;
        for _ in 0..n {
            epoch += gaps.sample(&mut rng);
            epoch_sum += epoch;
        }
        let mean_wait = epoch - epoch_sum / f64::from(n);

        let m = requests.map_or(0, |d| d.sample(&mut rng) as u64);
        let admitted = match config.variant {
            MidrouteVariant::AggregateMin => theta * m.min(k) as f64,
            MidrouteVariant::SequentialThinned => {
                let accepted = if theta >= 1.0 {
                    m
                } else if m == 0 || theta <= 0.0 {
                    0
                } else {
                    Binomial::new(m, theta)
                        .map_err(|_| Error::Domain {
                            name: "theta",
                            value: theta,
                        })?
                        .sample(&mut rng)
                };
                accepted.min(k) as f64
            }
        };

        let revenue = p.fare * (f64::from(n) + 0.5 * admitted);
        let length = epoch + 2.0 * p.travel_time;
        totals.record(mean_wait, admitted, revenue, length);
    }
    Ok(totals)
}

/// Block index ranges covering `0..cycles`.
pub fn block_ranges(cycles: u64) -> impl Iterator<Item = Range<u64>> {
    (0..cycles.div_ceil(BLOCK_CYCLES)).map(move |b| {
        let start = b * BLOCK_CYCLES;
        start..(start + BLOCK_CYCLES).min(cycles)
    })
}

/// Run the simulation sequentially.
pub fn simulate(config: &SimConfig) -> Result<SimResult> {
    config.validate()?;
    let mut totals = CycleTotals::default();
    for range in block_ranges(config.cycles) {
        totals.merge(&simulate_cycles(config, range)?);
    }
    Ok(totals.finish(config.params.operating_cost))
}

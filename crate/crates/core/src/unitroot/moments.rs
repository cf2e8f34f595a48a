//! Finite-sample moments of the ADF t-statistic used to standardize t-bar.
//!
//! The built-in table (`data/ips_moments.csv`, columns `T,k,mean_t,var_t`)
//! covers the intercept-no-trend case on a T grid over [10, 100] and
//! k in [0, 8]. It was produced by the `gen-ips-moments` binary in this
//! crate: for each cell, simulate driftless Gaussian random walks of length
//! T, fit the fixed-k ADF regression on its maximal sample, and record the
//! sample mean and variance of the t-statistic (200,000 replications,
//! ChaCha8 seeded with [`MOMENT_SEED`], stream `(T << 8) | k`).
//! Off-grid T values are linearly interpolated; cells outside the table are
//! simulated on demand with [`FALLBACK_REPLICATIONS`] replications.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::adf_fit_fixed;

/// Seed of the shipped moment table and of on-demand simulations.
pub const MOMENT_SEED: u64 = 75_319_846;

/// Replications used when a cell is missing from the shipped table.
pub const FALLBACK_REPLICATIONS: usize = 25_000;

const TABLE_CSV: &str = include_str!("../../data/ips_moments.csv");

/// Where the standardization moments came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentsSource {
    /// Every cell was served by the shipped table (exact or interpolated).
    Table,
    /// At least one cell was simulated on demand.
    Simulated,
}

impl std::fmt::Display for MomentsSource {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MomentsSource::Table => "table",
            MomentsSource::Simulated => "simulated",
        })
    }
}

/// Lookup table keyed by (T, k).
#[derive(Debug)]
pub struct MomentTable {
    cells: BTreeMap<(usize, usize), (f64, f64)>,
}

impl MomentTable {
    /// The table compiled into the crate.
    pub fn builtin() -> &'static MomentTable {
        static TABLE: OnceLock<MomentTable> = OnceLock::new();
        TABLE.get_or_init(|| MomentTable::parse(TABLE_CSV).expect("built-in moment table"))
    }

    pub fn parse(csv: &str) -> Result<MomentTable, String> {
        let mut cells = BTreeMap::new();
        for (i, line) in csv.lines().enumerate() {
            if i == 0 || line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split(',').collect();
            if parts.len() != 4 {
                return Err(format!("moment table line {i}: expected 4 fields"));
            }
            let t: usize = parts[0].trim().parse().map_err(|e| format!("line {i}: {e}"))?;
            let k: usize = parts[1].trim().parse().map_err(|e| format!("line {i}: {e}"))?;
            let mean: f64 = parts[2].trim().parse().map_err(|e| format!("line {i}: {e}"))?;
            let var: f64 = parts[3].trim().parse().map_err(|e| format!("line {i}: {e}"))?;
            cells.insert((t, k), (mean, var));
        }
        Ok(MomentTable { cells })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Moments for (T, k): exact cell if present, otherwise linear
    /// interpolation between the bracketing T grid values that carry the
    /// same k. Returns None outside the table's coverage.
    pub fn lookup(&self, t_len: usize, k: usize) -> Option<(f64, f64)> {
        if let Some(&cell) = self.cells.get(&(t_len, k)) {
            return Some(cell);
        }
        let below = self
            .cells
            .range(..(t_len, k))
            .rev()
            .find(|((_, kk), _)| *kk == k)?;
        let above = self
            .cells
            .range((t_len, k)..)
            .find(|((_, kk), _)| *kk == k)?;
        let (t0, (m0, v0)) = (below.0 .0 as f64, *below.1);
        let (t1, (m1, v1)) = (above.0 .0 as f64, *above.1);
        let w = (t_len as f64 - t0) / (t1 - t0);
        Some((m0 + w * (m1 - m0), v0 + w * (v1 - v0)))
    }
}

/// Simulates the mean and variance of the fixed-k ADF t-statistic under a
/// driftless Gaussian random walk of length `t_len`.
///
/// Deterministic: the RNG stream is derived from (`seed`, T, k), so parallel
/// and serial invocations agree.
pub fn simulate_moments(t_len: usize, k: usize, replications: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((t_len as u64) << 8) | k as u64);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut series = vec![0.0; t_len];
    for _ in 0..replications {
        let mut level = 0.0;
        for z in series.iter_mut() {
            level += standard_normal(&mut rng);
            *z = level;
        }
        let t = adf_fit_fixed(&series, k)
            .expect("random walk ADF regression cannot degenerate")
            .t_stat;
        sum += t;
        sum_sq += t * t;
    }
    let n = replications as f64;
    let mean = sum / n;
    let var = (sum_sq - n * mean * mean) / (n - 1.0);
    (mean, var)
}

/// On-demand moments for a cell missing from the shipped table.
pub(crate) fn fallback_moments(t_len: usize, k: usize) -> (f64, f64) {
    simulate_moments(t_len, k, FALLBACK_REPLICATIONS, MOMENT_SEED)
}

/// Box-Muller standard normal draw; documented here because the moment table
/// must reproduce bit-for-bit from the seed.
pub(crate) fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

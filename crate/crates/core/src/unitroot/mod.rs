//! Per-series ADF regressions with SIC lag selection and the panel
//! unit-root test built on their averaged t-statistics.

mod moments;

pub use moments::{
    simulate_moments, MomentTable, MomentsSource, FALLBACK_REPLICATIONS, MOMENT_SEED,
};

use crate::dataset::{DataError, PanelDataset};
use crate::numeric::{normal_sf, solve_least_squares, Matrix, NumericError};

#[derive(Debug, thiserror::Error)]
pub enum UnitRootError {
    #[error("series too short: need at least {needed} observations, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("constant series: the unit-root regression is degenerate")]
    ConstantSeries,
    #[error("unit-root test failed for entity {entity}: {source}")]
    EntityFailed {
        entity: String,
        source: Box<UnitRootError>,
    },
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Data(#[from] DataError),
}

/// One fitted ADF regression
/// `dz_t = alpha + rho z_{t-1} + sum_{i=1..k} b_i dz_{t-i} + e_t`.
#[derive(Debug, Clone)]
pub struct AdfFit {
    /// Coefficient on the lagged level.
    pub rho: f64,
    /// `rho / se(rho)` with the classical standard error.
    pub t_stat: f64,
    /// Selected (or requested) number of lagged differences.
    pub lag_order: usize,
    pub intercept: f64,
    pub lag_difference_coefficients: Vec<f64>,
    /// Schwarz criterion `ln(RSS/n) + (k+2) ln(n)/n` of the reported
    /// regression on its own maximal sample.
    pub sic: f64,
    /// Regression rows used: `T - 1 - k`.
    pub n_effective: usize,
}

fn check_series(series: &[f64], needed: usize) -> Result<(), UnitRootError> {
    if series.len() < needed {
        return Err(UnitRootError::TooShort {
            needed,
            got: series.len(),
        });
    }
    let first = series[0];
    if series.iter().all(|&v| v == first) {
        return Err(UnitRootError::ConstantSeries);
    }
    Ok(())
}

/// Builds the ADF design and response for lag order `k` on rows
/// `t = start..T-1` (0-based differences), where `start >= k + 1`.
fn adf_design(series: &[f64], k: usize, start: usize) -> (Matrix, Vec<f64>) {
    let t_len = series.len();
    let n = t_len - start;
    let p = k + 2;
    let mut x = Matrix::zeros(n, p);
    let mut y = Vec::with_capacity(n);
    for (row, t) in (start..t_len).enumerate() {
        y.push(series[t] - series[t - 1]);
        x.set(row, 0, 1.0);
        x.set(row, 1, series[t - 1]);
        for i in 1..=k {
            x.set(row, 1 + i, series[t - i] - series[t - i - 1]);
        }
    }
    (x, y)
}

fn sic_value(rss: f64, n: usize, k: usize) -> f64 {
    let nf = n as f64;
    // Guard a perfect fit; the criterion still orders models sensibly.
    (rss.max(1e-300) / nf).ln() + (k + 2) as f64 * nf.ln() / nf
}

/// ADF regression with a fixed lag order, fit on its maximal sample.
pub fn adf_fit_fixed(series: &[f64], k: usize) -> Result<AdfFit, UnitRootError> {
    // n_effective = T - 1 - k must exceed the k + 2 parameters.
    check_series(series, 2 * k + 4)?;
    let (x, y) = adf_design(series, k, k + 1);
    let ls = solve_least_squares(&x, &y)?;
    let n = y.len();
    let p = k + 2;
    let s2 = ls.rss / (n - p) as f64;
    let se_rho = (s2 * ls.xtx_inverse.get(1, 1)).max(0.0).sqrt();
    let rho = ls.coefficients[1];
    let t_stat = if se_rho > 0.0 {
        rho / se_rho
    } else if rho == 0.0 {
        0.0
    } else {
        f64::INFINITY * rho.signum()
    };
    Ok(AdfFit {
        rho,
        t_stat,
        lag_order: k,
        intercept: ls.coefficients[0],
        lag_difference_coefficients: ls.coefficients[2..].to_vec(),
        sic: sic_value(ls.rss, n, k),
        n_effective: n,
    })
}

/// ADF regression with SIC lag selection over `k = 0..=max_lag`.
///
/// All candidates are compared on the common sample aligned to `max_lag`
/// (same effective observations, so the criteria are comparable); the winner
/// is then refit on its own maximal sample. Ties go to the smaller lag.
pub fn adf_fit(series: &[f64], max_lag: usize) -> Result<AdfFit, UnitRootError> {
    check_series(series, 2 * max_lag + 4)?;
    let n_common = series.len() - 1 - max_lag;
    let mut best_k = 0;
    let mut best_sic = f64::INFINITY;
    for k in 0..=max_lag {
        let (x, y) = adf_design(series, k, max_lag + 1);
        let ls = solve_least_squares(&x, &y)?;
        let sic = sic_value(ls.rss, n_common, k);
        if sic < best_sic {
            best_sic = sic;
            best_k = k;
        }
    }
    adf_fit_fixed(series, best_k)
}

/// Result of the panel unit-root test.
#[derive(Debug, Clone)]
pub struct IpsResult {
    /// Arithmetic mean of the per-entity ADF t-statistics.
    pub t_bar: f64,
    /// `sqrt(N) (t_bar - E[t]) / sqrt(Var[t])`, asymptotically standard
    /// normal, with moments averaged over the per-entity (T, k) cells.
    pub standardized: f64,
    /// Left-tail p-value of the standardized statistic.
    pub p_value: f64,
    pub per_entity: Vec<AdfFit>,
    pub moments_source: MomentsSource,
}

/// Default maximum lag: `floor(12 (T/100)^0.25)`, capped so the effective
/// sample keeps `n_effective >= k + 5`.
pub fn default_max_lag(n_periods: usize) -> usize {
    let schwert = (12.0 * (n_periods as f64 / 100.0).powf(0.25)).floor() as usize;
    let cap = (n_periods.saturating_sub(6)) / 2;
    schwert.min(cap)
}

/// Panel unit-root test: per-entity ADF regressions averaged into t-bar and
/// standardized with simulated finite-sample moments.
pub fn ips_test(
    d: &PanelDataset,
    variable: &str,
    max_lag: Option<usize>,
) -> Result<IpsResult, UnitRootError> {
    let var = d.variable_index(variable)?;
    let t_len = d.n_periods();
    let max_lag = max_lag.unwrap_or_else(|| default_max_lag(t_len));

    let mut per_entity = Vec::with_capacity(d.n_entities());
    for (e, name) in d.entities().iter().enumerate() {
        let series = d.series(e, var);
        let fit = adf_fit(&series, max_lag).map_err(|err| UnitRootError::EntityFailed {
            entity: name.clone(),
            source: Box::new(err),
        })?;
        per_entity.push(fit);
    }

    let n = per_entity.len() as f64;
    let t_bar = per_entity.iter().map(|f| f.t_stat).sum::<f64>() / n;

    let table = MomentTable::builtin();
    let mut source = MomentsSource::Table;
    let mut mean_sum = 0.0;
    let mut var_sum = 0.0;
    for fit in &per_entity {
        let (m, v) = match table.lookup(t_len, fit.lag_order) {
            Some(pair) => pair,
            None => {
                source = MomentsSource::Simulated;
                moments::fallback_moments(t_len, fit.lag_order)
            }
        };
        mean_sum += m;
        var_sum += v;
    }
    let e_t = mean_sum / n;
    let var_t = var_sum / n;

    let standardized = n.sqrt() * (t_bar - e_t) / var_t.sqrt();
    let p_value = normal_sf(-standardized);

    Ok(IpsResult {
        t_bar,
        standardized,
        p_value,
        per_entity,
        moments_source: source,
    })
}

/// Subtracts the period-specific cross-entity mean from every observation of
/// `variable`. Opt-in preprocessing for panels whose errors share a common
/// time component.
pub fn demean_cross_section(
    d: &PanelDataset,
    variable: &str,
) -> Result<PanelDataset, UnitRootError> {
    let var = d.variable_index(variable)?;
    let np = d.n_periods();
    let ne = d.n_entities();
    let mut values = d.stacked(var);
    for t in 0..np {
        let mean = (0..ne).map(|e| values[e * np + t]).sum::<f64>() / ne as f64;
        for e in 0..ne {
            values[e * np + t] -= mean;
        }
    }
    Ok(d.replace_variable(var, &values))
}

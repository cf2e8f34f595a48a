//! Stacked design construction shared by the estimators.

use crate::dataset::PanelDataset;
use crate::numeric::Matrix;

use super::{EstimatorError, ModelSpec};

/// Dependent and regressor columns stacked entity-major, period-minor.
pub(crate) struct Stacked {
    pub y: Vec<f64>,
    /// Regressor columns only (no intercept), n_obs x K.
    pub regressors: Vec<Vec<f64>>,
    pub entity_names: Vec<String>,
    pub n_entities: usize,
    pub n_periods: usize,
}

impl Stacked {
    pub fn n_obs(&self) -> usize {
        self.n_entities * self.n_periods
    }

    pub fn k(&self) -> usize {
        self.regressors.len()
    }

    /// Design matrix `[1 | X]` or `[X]` depending on the intercept flag.
    pub fn design(&self, include_intercept: bool) -> Matrix {
        let n = self.n_obs();
        let k = self.k();
        let p = k + usize::from(include_intercept);
        let mut m = Matrix::zeros(n, p);
        for r in 0..n {
            let mut c = 0;
            if include_intercept {
                m.set(r, 0, 1.0);
                c = 1;
            }
            for j in 0..k {
                m.set(r, c + j, self.regressors[j][r]);
            }
        }
        m
    }

    /// LSDV design `[X | D]`: slope columns first, one dummy per entity.
    pub fn lsdv_design(&self) -> Matrix {
        let n = self.n_obs();
        let k = self.k();
        let mut m = Matrix::zeros(n, k + self.n_entities);
        for r in 0..n {
            for j in 0..k {
                m.set(r, j, self.regressors[j][r]);
            }
            m.set(r, k + r / self.n_periods, 1.0);
        }
        m
    }
}

pub(crate) fn stack(d: &PanelDataset, m: &ModelSpec) -> Result<Stacked, EstimatorError> {
    validate_spec(d, m)?;
    let dep = d.variable_index(&m.dependent)?;
    let y = d.stacked(dep);
    let regressors = m
        .regressors
        .iter()
        .map(|name| Ok(d.stacked(d.variable_index(name)?)))
        .collect::<Result<Vec<_>, EstimatorError>>()?;
    Ok(Stacked {
        y,
        regressors,
        entity_names: d.entities().to_vec(),
        n_entities: d.n_entities(),
        n_periods: d.n_periods(),
    })
}

fn validate_spec(d: &PanelDataset, m: &ModelSpec) -> Result<(), EstimatorError> {
    if m.regressors.contains(&m.dependent) {
        return Err(EstimatorError::InvalidSpec(format!(
            "dependent {:?} also appears among the regressors",
            m.dependent
        )));
    }
    for (i, a) in m.regressors.iter().enumerate() {
        if m.regressors[i + 1..].contains(a) {
            return Err(EstimatorError::InvalidSpec(format!(
                "regressor {a:?} listed twice"
            )));
        }
    }
    d.variable_index(&m.dependent)?;
    for name in &m.regressors {
        d.variable_index(name)?;
    }
    Ok(())
}

/// Per-entity means of a stacked column.
pub(crate) fn entity_means(values: &[f64], n_entities: usize, n_periods: usize) -> Vec<f64> {
    (0..n_entities)
        .map(|e| {
            values[e * n_periods..(e + 1) * n_periods].iter().sum::<f64>() / n_periods as f64
        })
        .collect()
}

/// Subtracts `theta` times the entity mean from every observation.
pub(crate) fn quasi_demean(values: &[f64], means: &[f64], n_periods: usize, theta: f64) -> Vec<f64> {
    values
        .iter()
        .enumerate()
        .map(|(r, &v)| v - theta * means[r / n_periods])
        .collect()
}

pub(crate) fn total_sum_of_squares(y: &[f64]) -> f64 {
    let mean = y.iter().sum::<f64>() / y.len() as f64;
    y.iter().map(|v| (v - mean) * (v - mean)).sum()
}

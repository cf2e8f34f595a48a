//! Balanced-panel data model: ingestion, log-floor transform, descriptive
//! statistics, and regional subsetting.

mod describe;
mod io;
mod region;

pub use describe::{describe, SummaryRow};
pub use io::{load_long_csv, write_long_csv, CsvSchema};
pub use region::{subset_region, Region, RegionMap};

/// A cell coordinate used in ingestion diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellRef {
    pub entity: String,
    pub year: i32,
    pub variable: Option<String>,
}

impl std::fmt::Display for CellRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.variable {
            Some(v) => write!(f, "entity={} year={} variable={}", self.entity, self.year, v),
            None => write!(f, "entity={} year={}", self.entity, self.year),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum DataError {
    #[error("balanced-panel violation, {} missing cell(s): {}", .0.len(), format_cells(.0))]
    MissingCell(Vec<CellRef>),
    #[error("duplicate cell: {0}")]
    DuplicateCell(CellRef),
    #[error("unparsable number at row {row}, column {column}: {value:?}")]
    UnparsableNumber {
        row: usize,
        column: String,
        value: String,
    },
    #[error("dataset already log-transformed")]
    DoubleTransform,
    #[error("region {0} has no entities")]
    EmptyRegion(String),
    #[error("region map references unknown entity: {0}")]
    UnknownEntity(String),
    #[error("unknown region code {0:?} (expected one of EU, AS, AF, NA, LA, OC, FC, SS, PS)")]
    UnknownRegion(String),
    #[error("unknown variable: {0}")]
    UnknownVariable(String),
    #[error("periods must be strictly increasing and contiguous, got gap between {0} and {1}")]
    NonContiguousPeriods(i32, i32),
    #[error("invalid schema: {0}")]
    InvalidSchema(String),
    #[error("dataset is empty")]
    Empty,
    #[error("transform floor must be positive, got {0}")]
    InvalidFloor(f64),
    #[error("non-finite value for {0}")]
    NonFinite(CellRef),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

fn format_cells(cells: &[CellRef]) -> String {
    cells
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Balanced entity x period x variable table.
///
/// Invariants enforced at construction: a value exists for every
/// (entity, period, variable) triple, entity identifiers are unique, and
/// periods are strictly increasing contiguous integers. Immutable after
/// load; transforms return new datasets.
#[derive(Debug, Clone, PartialEq)]
pub struct PanelDataset {
    entities: Vec<String>,
    periods: Vec<i32>,
    variables: Vec<String>,
    /// values[(e * periods.len() + t) * variables.len() + v]
    values: Vec<f64>,
    transformed: bool,
}

impl PanelDataset {
    /// Builds a dataset from parts, enforcing every structural invariant.
    pub fn from_parts(
        entities: Vec<String>,
        periods: Vec<i32>,
        variables: Vec<String>,
        values: Vec<f64>,
    ) -> Result<Self, DataError> {
        if entities.is_empty() || periods.is_empty() || variables.is_empty() {
            return Err(DataError::Empty);
        }
        {
            let mut seen = std::collections::HashSet::new();
            for e in &entities {
                if !seen.insert(e) {
                    return Err(DataError::DuplicateCell(CellRef {
                        entity: e.clone(),
                        year: periods[0],
                        variable: None,
                    }));
                }
            }
        }
        for w in periods.windows(2) {
            if w[1] != w[0] + 1 {
                return Err(DataError::NonContiguousPeriods(w[0], w[1]));
            }
        }
        let expected = entities.len() * periods.len() * variables.len();
        if values.len() != expected {
            return Err(DataError::InvalidSchema(format!(
                "expected {expected} values, got {}",
                values.len()
            )));
        }
        let ds = Self {
            entities,
            periods,
            variables,
            values,
            transformed: false,
        };
        for (i, v) in ds.values.iter().enumerate() {
            if !v.is_finite() {
                let nv = ds.variables.len();
                let np = ds.periods.len();
                return Err(DataError::NonFinite(CellRef {
                    entity: ds.entities[i / (np * nv)].clone(),
                    year: ds.periods[(i / nv) % np],
                    variable: Some(ds.variables[i % nv].clone()),
                }));
            }
        }
        Ok(ds)
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    pub fn periods(&self) -> &[i32] {
        &self.periods
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn n_entities(&self) -> usize {
        self.entities.len()
    }

    pub fn n_periods(&self) -> usize {
        self.periods.len()
    }

    /// Total observations: |entities| x |periods|.
    pub fn n_obs(&self) -> usize {
        self.entities.len() * self.periods.len()
    }

    /// Total stored values: |entities| x |periods| x |variables|.
    pub fn n_values(&self) -> usize {
        self.values.len()
    }

    pub fn is_transformed(&self) -> bool {
        self.transformed
    }

    pub fn variable_index(&self, name: &str) -> Result<usize, DataError> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| DataError::UnknownVariable(name.to_string()))
    }

    #[inline]
    pub fn value(&self, entity: usize, period: usize, variable: usize) -> f64 {
        self.values[(entity * self.periods.len() + period) * self.variables.len() + variable]
    }

    /// One entity's time series for a variable, in period order.
    pub fn series(&self, entity: usize, variable: usize) -> Vec<f64> {
        (0..self.periods.len())
            .map(|t| self.value(entity, t, variable))
            .collect()
    }

    /// All observations of a variable stacked entity-major, period-minor.
    pub fn stacked(&self, variable: usize) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.n_obs());
        for e in 0..self.entities.len() {
            for t in 0..self.periods.len() {
                out.push(self.value(e, t, variable));
            }
        }
        out
    }

    /// Applies `x -> ln(max(x, floor))` to the selected variables.
    ///
    /// Errors with [`DataError::DoubleTransform`] if the dataset was already
    /// transformed; the flag travels with every derived dataset.
    pub fn apply_log_floor(&self, policy: &TransformPolicy) -> Result<PanelDataset, DataError> {
        if self.transformed {
            return Err(DataError::DoubleTransform);
        }
        if !(policy.floor > 0.0) {
            return Err(DataError::InvalidFloor(policy.floor));
        }
        let mut selected = vec![false; self.variables.len()];
        for name in &policy.apply_to {
            selected[self.variable_index(name)?] = true;
        }
        let nv = self.variables.len();
        let mut values = self.values.clone();
        for (i, v) in values.iter_mut().enumerate() {
            if selected[i % nv] {
                *v = v.max(policy.floor).ln();
            }
        }
        Ok(PanelDataset {
            entities: self.entities.clone(),
            periods: self.periods.clone(),
            variables: self.variables.clone(),
            values,
            transformed: true,
        })
    }

    /// Raw value storage, ordered entity-major, period, then variable.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn with_transformed_flag(mut self, transformed: bool) -> Self {
        self.transformed = transformed;
        self
    }

    /// Replaces one variable's values, preserving shape. Used by the
    /// cross-sectional demeaning preprocessing step.
    pub(crate) fn replace_variable(&self, variable: usize, new_values: &[f64]) -> PanelDataset {
        assert_eq!(new_values.len(), self.n_obs());
        let mut out = self.clone();
        let nv = self.variables.len();
        let np = self.periods.len();
        for e in 0..self.entities.len() {
            for t in 0..np {
                out.values[(e * np + t) * nv + variable] = new_values[e * np + t];
            }
        }
        out
    }
}

/// Which variables receive the log-floor transform, and the floor itself.
///
/// The default floor of 0.01 makes `x -> ln(max(x, 0.01))` send zero to
/// ln(0.01) = -4.60517.
#[derive(Debug, Clone)]
pub struct TransformPolicy {
    pub floor: f64,
    pub apply_to: Vec<String>,
}

impl TransformPolicy {
    pub const DEFAULT_FLOOR: f64 = 0.01;

    pub fn new(apply_to: Vec<String>) -> Self {
        Self {
            floor: Self::DEFAULT_FLOOR,
            apply_to,
        }
    }

    pub fn with_floor(mut self, floor: f64) -> Self {
        self.floor = floor;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> PanelDataset {
        PanelDataset::from_parts(
            vec!["A".into(), "B".into()],
            vec![2000, 2001],
            vec!["x".into()],
            vec![0.0, 1.0, 2.718281828, 4.0],
        )
        .unwrap()
    }

    #[test]
    fn log_floor_maps_zero_to_ln_floor() {
        let d = tiny();
        let t = d
            .apply_log_floor(&TransformPolicy::new(vec!["x".into()]))
            .unwrap();
        assert!((t.value(0, 0, 0) - (-4.605170185988091)).abs() < 1e-12);
        assert!(t.value(0, 1, 0).abs() < 1e-12); // ln(1) = 0
        assert!((t.value(1, 0, 0) - 1.0).abs() < 1e-9); // ln(e) = 1
        assert!(t.is_transformed());
    }

    #[test]
    fn double_transform_is_rejected() {
        let d = tiny();
        let policy = TransformPolicy::new(vec!["x".into()]);
        let t = d.apply_log_floor(&policy).unwrap();
        assert!(matches!(
            t.apply_log_floor(&policy),
            Err(DataError::DoubleTransform)
        ));
    }

    #[test]
    fn untouched_variables_survive_transform() {
        let d = PanelDataset::from_parts(
            vec!["A".into()],
            vec![1995, 1996],
            vec!["x".into(), "y".into()],
            vec![5.0, 7.0, 5.0, 7.0],
        )
        .unwrap();
        let t = d
            .apply_log_floor(&TransformPolicy::new(vec!["x".into()]))
            .unwrap();
        assert_eq!(t.value(0, 0, 1), 7.0);
        assert_eq!(t.value(0, 1, 1), 7.0);
    }

    #[test]
    fn non_contiguous_periods_rejected() {
        let err = PanelDataset::from_parts(
            vec!["A".into()],
            vec![2000, 2002],
            vec!["x".into()],
            vec![1.0, 2.0],
        )
        .unwrap_err();
        assert!(matches!(err, DataError::NonContiguousPeriods(2000, 2002)));
    }

    #[test]
    fn transform_order_is_irrelevant_across_variables() {
        let d = PanelDataset::from_parts(
            vec!["A".into()],
            vec![1995, 1996],
            vec!["x".into(), "y".into()],
            vec![0.5, 3.0, 0.0, 9.0],
        )
        .unwrap();
        let p1 = TransformPolicy::new(vec!["x".into(), "y".into()]);
        let p2 = TransformPolicy::new(vec!["y".into(), "x".into()]);
        assert_eq!(d.apply_log_floor(&p1).unwrap(), d.apply_log_floor(&p2).unwrap());
    }
}

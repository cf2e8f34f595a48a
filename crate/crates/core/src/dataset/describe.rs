//! Descriptive statistics over pooled observations.
//!
//! Conventions: sample (n-1) denominator for the standard deviation;
//! population (n) central moments inside the skewness and kurtosis ratios;
//! kurtosis is non-excess (Gaussian = 3). A zero-variance series reports
//! skewness and kurtosis of 0 so output never contains non-finite cells.

use super::{DataError, PanelDataset};

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub variable: String,
    pub mean: f64,
    pub median: f64,
    pub max: f64,
    pub min: f64,
    pub std_dev: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub n: usize,
}

/// One summary row per variable, pooled over every (entity, period).
pub fn describe(dataset: &PanelDataset) -> Result<Vec<SummaryRow>, DataError> {
    if dataset.n_obs() == 0 {
        return Err(DataError::Empty);
    }
    let mut rows = Vec::with_capacity(dataset.variables().len());
    for (v, name) in dataset.variables().iter().enumerate() {
        let values = dataset.stacked(v);
        rows.push(summarize(name, &values));
    }
    Ok(rows)
}

fn summarize(name: &str, values: &[f64]) -> SummaryRow {
    let n = values.len();
    let nf = n as f64;
    let mean = values.iter().sum::<f64>() / nf;

    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };

    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    for &x in values {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;

    let std_dev = if n > 1 {
        (m2 * nf / (nf - 1.0)).sqrt()
    } else {
        0.0
    };
    let (skewness, kurtosis) = if m2 > 0.0 {
        (m3 / m2.powf(1.5), m4 / (m2 * m2))
    } else {
        (0.0, 0.0)
    };

    SummaryRow {
        variable: name.to_string(),
        mean,
        median,
        max: sorted[n - 1],
        min: sorted[0],
        std_dev,
        skewness,
        kurtosis,
        n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_entity(values: Vec<f64>) -> PanelDataset {
        let periods: Vec<i32> = (0..values.len() as i32).map(|t| 2000 + t).collect();
        PanelDataset::from_parts(vec!["A".into()], periods, vec!["x".into()], values).unwrap()
    }

    #[test]
    fn constant_series_has_zero_spread_and_shape() {
        let rows = describe(&one_entity(vec![5.0, 5.0, 5.0, 5.0])).unwrap();
        let r = &rows[0];
        assert_eq!(r.mean, 5.0);
        assert_eq!(r.std_dev, 0.0);
        assert_eq!(r.skewness, 0.0);
        assert_eq!(r.kurtosis, 0.0);
    }

    #[test]
    fn symmetric_series_basics() {
        let rows = describe(&one_entity(vec![1.0, 2.0, 3.0, 4.0, 5.0])).unwrap();
        let r = &rows[0];
        assert_eq!(r.mean, 3.0);
        assert_eq!(r.median, 3.0);
        assert_eq!(r.max, 5.0);
        assert_eq!(r.min, 1.0);
        assert_eq!(r.n, 5);
    }

    #[test]
    fn bernoulli_quarter_moments() {
        // (0,0,0,1): m2 = 3/16, m3 = 3/32, m4 = 21/256 by direct expansion.
        let rows = describe(&one_entity(vec![0.0, 0.0, 0.0, 1.0])).unwrap();
        let r = &rows[0];
        assert!((r.skewness - 2.0 / 3.0_f64.sqrt()).abs() < 1e-12, "{}", r.skewness);
        assert!((r.kurtosis - 7.0 / 3.0).abs() < 1e-12, "{}", r.kurtosis);
    }

    #[test]
    fn even_n_median_averages_central_pair() {
        let rows = describe(&one_entity(vec![4.0, 1.0, 3.0, 2.0])).unwrap();
        assert_eq!(rows[0].median, 2.5);
    }
}

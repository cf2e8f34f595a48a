//! The four panel estimators and their shared covariance machinery.

use crate::dataset::PanelDataset;
use crate::numeric::{solve_least_squares, Matrix, NumericError};

use super::design::{entity_means, quasi_demean, stack, total_sum_of_squares, Stacked};
use super::{
    build_coefficient, EffectKind, EstimatorError, FitResult, ModelSpec, VarianceComponents,
};

const DEGENERATE_WEIGHT_FLOOR: f64 = 1e-12;

/// White (HC0) sandwich covariance
/// `(X'X)^-1 (sum_i e_i^2 x_i x_i') (X'X)^-1`,
/// computed on the same (possibly transformed) data the point estimates used.
pub fn white_covariance(
    design: &Matrix,
    xtx_inverse: &Matrix,
    residuals: &[f64],
) -> Result<Matrix, NumericError> {
    let n = design.rows();
    let p = design.cols();
    if residuals.len() != n {
        return Err(NumericError::DimensionMismatch(format!(
            "design has {n} rows but {} residuals were supplied",
            residuals.len()
        )));
    }
    if xtx_inverse.rows() != p || xtx_inverse.cols() != p {
        return Err(NumericError::DimensionMismatch(
            "xtx_inverse shape does not match the design".into(),
        ));
    }
    let mut meat = Matrix::zeros(p, p);
    for r in 0..n {
        let e2 = residuals[r] * residuals[r];
        if e2 == 0.0 {
            continue;
        }
        let row = design.row(r);
        for i in 0..p {
            let w = e2 * row[i];
            if w == 0.0 {
                continue;
            }
            for j in i..p {
                meat.set(i, j, meat.get(i, j) + w * row[j]);
            }
        }
    }
    for i in 0..p {
        for j in 0..i {
            meat.set(i, j, meat.get(j, i));
        }
    }
    xtx_inverse.matmul(&meat)?.matmul(xtx_inverse)
}

/// Diagonal square roots of [`white_covariance`].
pub fn white_se(
    design: &Matrix,
    xtx_inverse: &Matrix,
    residuals: &[f64],
) -> Result<Vec<f64>, NumericError> {
    let cov = white_covariance(design, xtx_inverse, residuals)?;
    Ok((0..cov.rows()).map(|i| cov.get(i, i).max(0.0).sqrt()).collect())
}

/// Classical covariance `s^2 (X'X)^-1` with `s^2 = RSS / (n - p)`.
fn classical_covariance(xtx_inverse: &Matrix, rss: f64, n: usize, p: usize) -> Matrix {
    let s2 = if n > p { rss / (n - p) as f64 } else { 0.0 };
    let mut cov = xtx_inverse.clone();
    for v in cov.data_mut() {
        *v *= s2;
    }
    cov
}

fn submatrix(m: &Matrix, idx: &[usize]) -> Matrix {
    let mut out = Matrix::zeros(idx.len(), idx.len());
    for (a, &i) in idx.iter().enumerate() {
        for (b, &j) in idx.iter().enumerate() {
            out.set(a, b, m.get(i, j));
        }
    }
    out
}

fn combo_variance(cov: &Matrix, w: &[f64]) -> f64 {
    let mut acc = 0.0;
    for i in 0..w.len() {
        if w[i] == 0.0 {
            continue;
        }
        for j in 0..w.len() {
            acc += w[i] * cov.get(i, j) * w[j];
        }
    }
    acc.max(0.0)
}

fn r_squared(rss: f64, tss: f64) -> f64 {
    if tss > 0.0 {
        (1.0 - rss / tss).clamp(0.0, 1.0)
    } else if rss <= 1e-30 {
        1.0
    } else {
        0.0
    }
}

/// Pooled OLS on the stacked panel.
pub fn fit_pooled(d: &PanelDataset, m: &ModelSpec) -> Result<FitResult, EstimatorError> {
    let s = stack(d, m)?;
    if s.n_obs() <= s.k() + 1 {
        return Err(EstimatorError::InsufficientDf(format!(
            "{} observations for {} regressors",
            s.n_obs(),
            s.k()
        )));
    }
    let x = s.design(m.include_intercept);
    let ls = solve_least_squares(&x, &s.y)?;
    let robust = white_covariance(&x, &ls.xtx_inverse, &ls.residuals)?;

    let offset = usize::from(m.include_intercept);
    let mut coefficients = Vec::with_capacity(offset + s.k());
    if m.include_intercept {
        coefficients.push(build_coefficient(
            "C",
            ls.coefficients[0],
            robust.get(0, 0).max(0.0).sqrt(),
        ));
    }
    for (j, name) in m.regressors.iter().enumerate() {
        let c = offset + j;
        coefficients.push(build_coefficient(
            name,
            ls.coefficients[c],
            robust.get(c, c).max(0.0).sqrt(),
        ));
    }

    let tss = if m.include_intercept {
        total_sum_of_squares(&s.y)
    } else {
        s.y.iter().map(|v| v * v).sum()
    };
    let slope_idx: Vec<usize> = (offset..offset + s.k()).collect();
    let classical = classical_covariance(&ls.xtx_inverse, ls.rss, s.n_obs(), x.cols());

    Ok(FitResult {
        effect_kind: EffectKind::Pooled,
        coefficients,
        r2_weighted: None,
        r2_unweighted: r_squared(ls.rss, tss),
        residuals: ls.residuals,
        entity_intercepts: None,
        components: None,
        n_obs: s.n_obs(),
        n_entities: s.n_entities,
        n_periods: s.n_periods,
        slope_names: m.regressors.clone(),
        slopes: slope_idx.iter().map(|&i| ls.coefficients[i]).collect(),
        classical_cov: submatrix(&classical, &slope_idx),
    })
}

/// Fixed effects by least squares with one dummy per entity.
///
/// The global intercept is dropped; the reported "C" is the mean of the
/// entity intercepts, with its standard error taken from the corresponding
/// linear combination of the dummy block.
pub fn fit_fe_lsdv(d: &PanelDataset, m: &ModelSpec) -> Result<FitResult, EstimatorError> {
    let s = stack(d, m)?;
    lsdv_core(&s, m, None, EffectKind::FeLsdv)
}

/// Fixed effects with per-entity inverse-variance (GLS cross-section)
/// weights: a first LSDV pass estimates each entity's residual variance
/// `s_a^2`, then every observation of entity `a` is scaled by `1/s_a` and the
/// regression re-run.
pub fn fit_fe_gls(d: &PanelDataset, m: &ModelSpec) -> Result<FitResult, EstimatorError> {
    let first = fit_fe_lsdv(d, m)?;
    let s = stack(d, m)?;
    let np = s.n_periods;
    let mut weights = Vec::with_capacity(s.n_entities);
    for (e, name) in d.entities().iter().enumerate() {
        let chunk = &first.residuals[e * np..(e + 1) * np];
        let variance = chunk.iter().map(|r| r * r).sum::<f64>() / np as f64;
        if variance < DEGENERATE_WEIGHT_FLOOR {
            return Err(EstimatorError::DegenerateWeight {
                entity: name.clone(),
                variance,
            });
        }
        weights.push(1.0 / variance.sqrt());
    }
    lsdv_core(&s, m, Some(&weights), EffectKind::FeGls)
}

/// Shared LSDV machinery; `weights` scales each entity's rows when present.
fn lsdv_core(
    s: &Stacked,
    m: &ModelSpec,
    weights: Option<&[f64]>,
    kind: EffectKind,
) -> Result<FitResult, EstimatorError> {
    let n = s.n_obs();
    let k = s.k();
    let n_ent = s.n_entities;
    if n_ent < 2 {
        return Err(EstimatorError::InsufficientDf(
            "fixed effects need at least 2 entities".into(),
        ));
    }
    if n <= n_ent + k {
        return Err(EstimatorError::InsufficientDf(format!(
            "NT - N - K = {} must be positive",
            n as i64 - n_ent as i64 - k as i64
        )));
    }

    let x_raw = s.lsdv_design();
    let (x, y) = match weights {
        None => (x_raw.clone(), s.y.clone()),
        Some(w) => {
            let mut x = x_raw.clone();
            let mut y = s.y.clone();
            for r in 0..n {
                let scale = w[r / s.n_periods];
                for c in 0..x.cols() {
                    x.set(r, c, x.get(r, c) * scale);
                }
                y[r] *= scale;
            }
            (x, y)
        }
    };

    let ls = solve_least_squares(&x, &y)?;
    let robust = white_covariance(&x, &ls.xtx_inverse, &ls.residuals)?;

    let slopes: Vec<f64> = ls.coefficients[..k].to_vec();
    let alphas: Vec<f64> = ls.coefficients[k..].to_vec();
    let c_value = alphas.iter().sum::<f64>() / n_ent as f64;
    let mut w_combo = vec![0.0; k + n_ent];
    for wi in w_combo.iter_mut().skip(k) {
        *wi = 1.0 / n_ent as f64;
    }
    let c_se = combo_variance(&robust, &w_combo).sqrt();

    let mut coefficients = Vec::with_capacity(1 + k);
    coefficients.push(build_coefficient("C", c_value, c_se));
    for (j, name) in m.regressors.iter().enumerate() {
        coefficients.push(build_coefficient(
            name,
            slopes[j],
            robust.get(j, j).max(0.0).sqrt(),
        ));
    }

    // Raw-scale residuals with the final coefficients.
    let fitted_raw = x_raw.matvec(&ls.coefficients)?;
    let residuals_raw: Vec<f64> = s.y.iter().zip(&fitted_raw).map(|(a, b)| a - b).collect();
    let rss_raw: f64 = residuals_raw.iter().map(|r| r * r).sum();
    let r2_unweighted = r_squared(rss_raw, total_sum_of_squares(&s.y));
    let r2_weighted = weights.map(|_| r_squared(ls.rss, total_sum_of_squares(&y)));

    let slope_idx: Vec<usize> = (0..k).collect();
    let classical = classical_covariance(&ls.xtx_inverse, ls.rss, n, k + n_ent);

    Ok(FitResult {
        effect_kind: kind,
        coefficients,
        r2_weighted,
        r2_unweighted,
        residuals: residuals_raw,
        entity_intercepts: Some(
            s.entity_names
                .iter()
                .cloned()
                .zip(alphas.iter().copied())
                .collect(),
        ),
        components: None,
        n_obs: n,
        n_entities: n_ent,
        n_periods: s.n_periods,
        slope_names: m.regressors.clone(),
        slopes,
        classical_cov: submatrix(&classical, &slope_idx),
    })
}

/// Swamy-Arora floor rule: `sigma_u^2 = max(0, s_b^2 - sigma_e^2 / T)`.
pub(crate) fn sigma_u_squared(s_b2: f64, sigma_e2: f64, t: f64) -> f64 {
    (s_b2 - sigma_e2 / t).max(0.0)
}

/// Quasi-demeaning weight `theta = 1 - sqrt(sigma_e^2 / (sigma_e^2 + T sigma_u^2))`.
pub(crate) fn quasi_theta(sigma_u2: f64, sigma_e2: f64, t: f64) -> f64 {
    let denom = sigma_e2 + t * sigma_u2;
    if denom <= 0.0 {
        0.0
    } else {
        1.0 - (sigma_e2 / denom).sqrt()
    }
}

/// Swamy-Arora variance components from the within and between regressions.
pub fn estimate_variance_components(
    d: &PanelDataset,
    m: &ModelSpec,
) -> Result<VarianceComponents, EstimatorError> {
    let s = stack(d, m)?;
    let n_ent = s.n_entities;
    let np = s.n_periods;
    let k = s.k();
    if n_ent < 2 || np < 2 {
        return Err(EstimatorError::InsufficientDf(
            "variance components need N >= 2 and T >= 2".into(),
        ));
    }
    let df_within = n_ent as i64 * (np as i64 - 1) - k as i64;
    if df_within <= 0 {
        return Err(EstimatorError::InsufficientDf(format!(
            "within regression df N(T-1) - K = {df_within}"
        )));
    }
    let p_between = k + usize::from(m.include_intercept);
    if n_ent <= p_between {
        return Err(EstimatorError::InsufficientDf(format!(
            "between regression needs more than {p_between} entities, got {n_ent}"
        )));
    }

    // Within: everything demeaned by entity.
    let y_means = entity_means(&s.y, n_ent, np);
    let y_within = quasi_demean(&s.y, &y_means, np, 1.0);
    let within_rss = if k == 0 {
        y_within.iter().map(|v| v * v).sum()
    } else {
        let mut x = Matrix::zeros(s.n_obs(), k);
        for (j, col) in s.regressors.iter().enumerate() {
            let means = entity_means(col, n_ent, np);
            let dm = quasi_demean(col, &means, np, 1.0);
            for (r, v) in dm.iter().enumerate() {
                x.set(r, j, *v);
            }
        }
        solve_least_squares(&x, &y_within)?.rss
    };
    let sigma_e2 = within_rss / df_within as f64;

    // Between: entity means.
    let between_rss = {
        let mut x = Matrix::zeros(n_ent, p_between);
        for e in 0..n_ent {
            let mut c = 0;
            if m.include_intercept {
                x.set(e, 0, 1.0);
                c = 1;
            }
            for (j, col) in s.regressors.iter().enumerate() {
                let means = entity_means(col, n_ent, np);
                x.set(e, c + j, means[e]);
            }
        }
        solve_least_squares(&x, &y_means)?.rss
    };
    let s_b2 = between_rss / (n_ent - p_between) as f64;

    let sigma_u2 = sigma_u_squared(s_b2, sigma_e2, np as f64);
    let theta = quasi_theta(sigma_u2, sigma_e2, np as f64);
    let total = sigma_u2 + sigma_e2;
    let rho_u = if total > 0.0 { sigma_u2 / total } else { 0.0 };

    Ok(VarianceComponents {
        sigma_u: sigma_u2.sqrt(),
        sigma_e: sigma_e2.sqrt(),
        rho_u,
        rho_e: 1.0 - rho_u,
        theta,
    })
}

/// Random effects by feasible GLS: quasi-demean every series by
/// `theta x entity mean` (the intercept column becomes `1 - theta`) and run
/// least squares on the transformed data.
pub fn fit_re(d: &PanelDataset, m: &ModelSpec) -> Result<FitResult, EstimatorError> {
    let comps = estimate_variance_components(d, m)?;
    let s = stack(d, m)?;
    let n = s.n_obs();
    let k = s.k();
    let np = s.n_periods;
    let theta = comps.theta;

    let y_means = entity_means(&s.y, s.n_entities, np);
    let y_t = quasi_demean(&s.y, &y_means, np, theta);

    let offset = usize::from(m.include_intercept);
    let p = k + offset;
    let mut x_t = Matrix::zeros(n, p);
    if m.include_intercept {
        for r in 0..n {
            x_t.set(r, 0, 1.0 - theta);
        }
    }
    for (j, col) in s.regressors.iter().enumerate() {
        let means = entity_means(col, s.n_entities, np);
        let dm = quasi_demean(col, &means, np, theta);
        for (r, v) in dm.iter().enumerate() {
            x_t.set(r, offset + j, *v);
        }
    }

    let ls = solve_least_squares(&x_t, &y_t)?;
    let robust = white_covariance(&x_t, &ls.xtx_inverse, &ls.residuals)?;

    let mut coefficients = Vec::with_capacity(p);
    if m.include_intercept {
        coefficients.push(build_coefficient(
            "C",
            ls.coefficients[0],
            robust.get(0, 0).max(0.0).sqrt(),
        ));
    }
    for (j, name) in m.regressors.iter().enumerate() {
        let c = offset + j;
        coefficients.push(build_coefficient(
            name,
            ls.coefficients[c],
            robust.get(c, c).max(0.0).sqrt(),
        ));
    }

    // Raw-scale fit with the final coefficients (common intercept, no entity
    // effects in the fitted values).
    let mut fitted_raw = vec![
        if m.include_intercept {
            ls.coefficients[0]
        } else {
            0.0
        };
        n
    ];
    for (j, col) in s.regressors.iter().enumerate() {
        let beta = ls.coefficients[offset + j];
        for (r, v) in col.iter().enumerate() {
            fitted_raw[r] += beta * v;
        }
    }
    let residuals_raw: Vec<f64> = s.y.iter().zip(&fitted_raw).map(|(a, b)| a - b).collect();
    let rss_raw: f64 = residuals_raw.iter().map(|r| r * r).sum();

    let slope_idx: Vec<usize> = (offset..p).collect();
    let classical = classical_covariance(&ls.xtx_inverse, ls.rss, n, p);

    Ok(FitResult {
        effect_kind: EffectKind::RandomEffects,
        coefficients,
        r2_weighted: Some(r_squared(ls.rss, total_sum_of_squares(&y_t))),
        r2_unweighted: r_squared(rss_raw, total_sum_of_squares(&s.y)),
        residuals: residuals_raw,
        entity_intercepts: None,
        components: Some(comps),
        n_obs: n,
        n_entities: s.n_entities,
        n_periods: np,
        slope_names: m.regressors.clone(),
        slopes: slope_idx.iter().map(|&i| ls.coefficients[i]).collect(),
        classical_cov: submatrix(&classical, &slope_idx),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::PanelDataset;

    fn panel(entities: usize, values: Vec<(&str, Vec<f64>)>, n_periods: usize) -> PanelDataset {
        let names: Vec<String> = (0..entities).map(|i| format!("E{i}")).collect();
        let periods: Vec<i32> = (0..n_periods as i32).map(|t| 2000 + t).collect();
        let variables: Vec<String> = values.iter().map(|(n, _)| n.to_string()).collect();
        let n_obs = entities * n_periods;
        let mut flat = Vec::with_capacity(n_obs * variables.len());
        for r in 0..n_obs {
            for (_, col) in &values {
                flat.push(col[r]);
            }
        }
        PanelDataset::from_parts(names, periods, variables, flat).unwrap()
    }

    #[test]
    fn pooled_recovers_exact_proportionality() {
        let x: Vec<f64> = (1..=8).map(|v| v as f64).collect();
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let d = panel(2, vec![("y", y), ("x", x)], 4);
        let m = ModelSpec::new("y", vec!["x".into()]);
        let fit = fit_pooled(&d, &m).unwrap();
        assert!((fit.coefficient("x").unwrap().value - 2.0).abs() < 1e-10);
        assert!((fit.r2_unweighted - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pooled_intercept_only_returns_mean() {
        let y = vec![1.0, 2.0, 3.0, 6.0];
        let d = panel(2, vec![("y", y)], 2);
        let m = ModelSpec::new("y", vec![]);
        let fit = fit_pooled(&d, &m).unwrap();
        assert!((fit.coefficient("C").unwrap().value - 3.0).abs() < 1e-12);
    }

    #[test]
    fn pooled_constant_regressor_with_intercept_is_rank_deficient() {
        let y = vec![1.0, 2.0, 3.0, 4.0];
        let c = vec![5.0, 5.0, 5.0, 5.0];
        let d = panel(2, vec![("y", y), ("c", c)], 2);
        let m = ModelSpec::new("y", vec!["c".into()]);
        assert!(matches!(
            fit_pooled(&d, &m),
            Err(EstimatorError::Numeric(NumericError::RankDeficient { .. }))
        ));
    }

    #[test]
    fn lsdv_recovers_entity_shifts_and_unit_slope() {
        // y_at = a + x_at with entity levels 10 and -10.
        let x: Vec<f64> = vec![1.0, 2.0, 3.0, 4.0, 1.0, 2.0, 3.0, 4.0];
        let y: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(r, v)| if r < 4 { 10.0 + v } else { -10.0 + v })
            .collect();
        let d = panel(2, vec![("y", y), ("x", x)], 4);
        let m = ModelSpec::new("y", vec!["x".into()]);
        let fit = fit_fe_lsdv(&d, &m).unwrap();
        assert!((fit.coefficient("x").unwrap().value - 1.0).abs() < 1e-10);
        let alphas = fit.entity_intercepts.as_ref().unwrap();
        assert!((alphas[0].1 - 10.0).abs() < 1e-9);
        assert!((alphas[1].1 - (-10.0)).abs() < 1e-9);
        assert!((fit.coefficient("C").unwrap().value - 0.0).abs() < 1e-9);
    }

    #[test]
    fn lsdv_rejects_time_invariant_regressor() {
        let x = vec![3.0, 3.0, 3.0, 7.0, 7.0, 7.0];
        let y = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        let d = panel(2, vec![("y", y), ("x", x)], 3);
        let m = ModelSpec::new("y", vec!["x".into()]);
        assert!(matches!(
            fit_fe_lsdv(&d, &m),
            Err(EstimatorError::Numeric(NumericError::RankDeficient { .. }))
        ));
    }

    #[test]
    fn gls_equals_lsdv_when_entity_variances_match_exactly() {
        // Identical residual patterns per entity make the weights cancel.
        let x = vec![1.0, 2.0, 3.0, 4.0, 5.0, 1.0, 2.0, 3.0, 4.0, 5.0];
        let noise = [0.5, -0.3, 0.1, -0.4, 0.1];
        let mut y = Vec::new();
        for e in 0..2 {
            for t in 0..5 {
                y.push(3.0 * e as f64 + 2.0 * x[e * 5 + t] + noise[t]);
            }
        }
        let d = panel(2, vec![("y", y), ("x", x)], 5);
        let m = ModelSpec::new("y", vec!["x".into()]);
        let lsdv = fit_fe_lsdv(&d, &m).unwrap();
        let gls = fit_fe_gls(&d, &m).unwrap();
        let a = lsdv.coefficient("x").unwrap().value;
        let b = gls.coefficient("x").unwrap().value;
        assert!((a - b).abs() < 1e-6, "lsdv {a} vs gls {b}");
        assert!(gls.r2_weighted.is_some());
    }

    #[test]
    fn gls_flags_perfectly_fit_entity() {
        // Shared slope plus entity shifts with no noise: the first pass fits
        // every entity exactly, so the weights are undefined.
        let x = vec![1.0, 2.0, 3.0, 1.0, 2.0, 3.0];
        let y = vec![2.0, 4.0, 6.0, 7.0, 9.0, 11.0];
        let d = panel(2, vec![("y", y), ("x", x)], 3);
        let m = ModelSpec::new("y", vec!["x".into()]);
        match fit_fe_gls(&d, &m) {
            Err(EstimatorError::DegenerateWeight { .. }) => {}
            other => panic!("expected DegenerateWeight, got {other:?}"),
        }
    }

    #[test]
    fn swamy_arora_formulas() {
        assert!((sigma_u_squared(0.25, 1.0, 10.0) - 0.15).abs() < 1e-15);
        assert_eq!(sigma_u_squared(0.05, 1.0, 10.0), 0.0); // floored at zero
        assert_eq!(quasi_theta(0.0, 1.0, 10.0), 0.0);
        let th = quasi_theta(1.0, 1.0, 4.0); // 1 - sqrt(1/5)
        assert!((th - (1.0 - (0.2_f64).sqrt())).abs() < 1e-15);
    }

    #[test]
    fn re_equals_pooled_when_sigma_u_estimates_zero() {
        // Entity means sit exactly on the between line, so the between RSS
        // vanishes and sigma_u estimates to zero.
        let pattern = [0.5, -0.2, -0.6, 0.3];
        let bases = [0.0, 2.0, 5.0];
        let mut x = Vec::new();
        let mut y = Vec::new();
        for base in bases {
            for (t, p) in pattern.iter().enumerate() {
                let xv = base + t as f64;
                x.push(xv);
                y.push(2.0 * xv + p);
            }
        }
        let d = panel(3, vec![("y", y), ("x", x)], 4);
        let m = ModelSpec::new("y", vec!["x".into()]);
        let comps = estimate_variance_components(&d, &m).unwrap();
        assert_eq!(comps.sigma_u, 0.0);
        assert_eq!(comps.theta, 0.0);
        let re = fit_re(&d, &m).unwrap();
        let pooled = fit_pooled(&d, &m).unwrap();
        for (a, b) in re.coefficients.iter().zip(&pooled.coefficients) {
            assert!((a.value - b.value).abs() < 1e-10);
        }
    }

    #[test]
    fn white_se_hand_case_mean_only() {
        // X = ones(4,1), e = (1,-1,1,-1): sandwich collapses to sqrt(sum e^2)/n.
        let x = Matrix::new(4, 1, vec![1.0; 4]).unwrap();
        let xtx_inv = Matrix::new(1, 1, vec![0.25]).unwrap();
        let se = white_se(&x, &xtx_inv, &[1.0, -1.0, 1.0, -1.0]).unwrap();
        assert!((se[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn white_se_zero_residuals_gives_zero() {
        let x = Matrix::new(3, 1, vec![1.0; 3]).unwrap();
        let xtx_inv = Matrix::new(1, 1, vec![1.0 / 3.0]).unwrap();
        let se = white_se(&x, &xtx_inv, &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(se[0], 0.0);
    }

    #[test]
    fn duplicate_regressor_is_invalid_spec() {
        let d = panel(2, vec![("y", vec![1.0; 4]), ("x", vec![2.0; 4])], 2);
        let m = ModelSpec::new("y", vec!["x".into(), "x".into()]);
        assert!(matches!(
            fit_pooled(&d, &m),
            Err(EstimatorError::InvalidSpec(_))
        ));
    }

    #[test]
    fn shift_of_one_entity_moves_only_its_intercept() {
        let x = vec![0.4, 1.9, 2.4, 3.1, 0.9, 2.2, 3.3, 4.8, 1.4, 2.0, 2.9, 4.1];
        let y: Vec<f64> = x.iter().map(|v| 1.5 * v + 0.3).collect();
        let d1 = panel(3, vec![("y", y.clone()), ("x", x.clone())], 4);
        let mut y2 = y;
        for v in y2.iter_mut().take(8).skip(4) {
            *v += 7.0; // constant shift of entity 1
        }
        let d2 = panel(3, vec![("y", y2), ("x", x)], 4);
        let m = ModelSpec::new("y", vec!["x".into()]);
        let f1 = fit_fe_lsdv(&d1, &m).unwrap();
        let f2 = fit_fe_lsdv(&d2, &m).unwrap();
        let s1 = f1.coefficient("x").unwrap().value;
        let s2 = f2.coefficient("x").unwrap().value;
        assert!((s1 - s2).abs() < 1e-10);
        let a1 = f1.entity_intercepts.as_ref().unwrap();
        let a2 = f2.entity_intercepts.as_ref().unwrap();
        assert!((a2[1].1 - a1[1].1 - 7.0).abs() < 1e-9);
        assert!((a2[0].1 - a1[0].1).abs() < 1e-9);
        assert!((a2[2].1 - a1[2].1).abs() < 1e-9);
    }
}

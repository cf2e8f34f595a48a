//! Specification tests (redundant fixed effects, Breusch-Pagan / Honda LM,
//! Hausman), Durbin-Watson, and the model-selection decision engine.

use crate::dataset::PanelDataset;
use crate::estimators::{
    fit_fe_lsdv, fit_pooled, fit_re, EffectKind, EstimatorError, FitResult, ModelSpec,
};
use crate::numeric::{
    chi2_sf, clipped_psd_pseudoinverse, f_sf, normal_sf, Matrix, NumericError,
};

#[derive(Debug, thiserror::Error)]
pub enum DiagnosticsError {
    #[error("fits do not match: {0}")]
    MismatchedFits(String),
    #[error("specification mismatch: {0}")]
    SpecMismatch(String),
    #[error("residual sum of squares is zero; the test statistic is undefined")]
    ZeroResidualSs,
    #[error("{0} observations per entity are too few (need at least 2)")]
    TooFewPeriods(usize),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
}

/// Reference distribution of a test statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefDistribution {
    ChiSquare(usize),
    F(usize, usize),
    StdNormal,
}

impl std::fmt::Display for RefDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RefDistribution::ChiSquare(df) => write!(f, "ChiSquare({df})"),
            RefDistribution::F(d1, d2) => write!(f, "F({d1}, {d2})"),
            RefDistribution::StdNormal => write!(f, "StdNormal"),
        }
    }
}

/// A named test statistic with its reference distribution and decision.
#[derive(Debug, Clone)]
pub struct TestResult {
    pub name: &'static str,
    pub statistic: f64,
    pub distribution: RefDistribution,
    pub p_value: f64,
    pub alpha: f64,
    pub reject: bool,
}

impl TestResult {
    fn new(
        name: &'static str,
        statistic: f64,
        distribution: RefDistribution,
        p_value: f64,
        alpha: f64,
    ) -> Self {
        Self {
            name,
            statistic,
            distribution,
            p_value,
            alpha,
            reject: p_value < alpha,
        }
    }
}

/// Which of the three panel models the decision table picked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelChoice {
    Pooled,
    FixedEffects,
    RandomEffects,
}

impl std::fmt::Display for ModelChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelChoice::Pooled => "Pooled",
            ModelChoice::FixedEffects => "FE",
            ModelChoice::RandomEffects => "RE",
        })
    }
}

/// Decision trail of [`select_model`].
#[derive(Debug, Clone)]
pub struct SelectionOutcome {
    pub decision: ModelChoice,
    pub rfe: TestResult,
    pub bplm: TestResult,
    /// Present exactly when both the RFE and BP LM nulls were rejected.
    pub hausman: Option<TestResult>,
}

fn check_same_panel(a: &FitResult, b: &FitResult) -> Result<(), DiagnosticsError> {
    if a.n_obs != b.n_obs || a.n_entities != b.n_entities || a.n_periods != b.n_periods {
        return Err(DiagnosticsError::MismatchedFits(format!(
            "panel shapes differ: {}x{} vs {}x{}",
            a.n_entities, a.n_periods, b.n_entities, b.n_periods
        )));
    }
    Ok(())
}

/// F test of the joint significance of the entity dummies:
/// `F = [(R2_FE - R2_pooled)/(N-1)] / [(1 - R2_FE)/(NT - N - K)]`
/// against `F(N-1, NT-N-K)`. The null is "no fixed effect".
pub fn redundant_fe_test(
    pooled: &FitResult,
    fe: &FitResult,
    alpha: f64,
) -> Result<TestResult, DiagnosticsError> {
    if pooled.effect_kind != EffectKind::Pooled {
        return Err(DiagnosticsError::MismatchedFits(
            "first argument must be the pooled fit".into(),
        ));
    }
    if fe.effect_kind != EffectKind::FeLsdv {
        return Err(DiagnosticsError::MismatchedFits(
            "second argument must be the unweighted LSDV fit".into(),
        ));
    }
    check_same_panel(pooled, fe)?;
    if pooled.slope_names != fe.slope_names {
        return Err(DiagnosticsError::MismatchedFits(
            "fits use different regressor sets".into(),
        ));
    }
    let n = fe.n_entities;
    let k = fe.slope_names.len();
    let df1 = n - 1;
    let df2 = fe.n_obs - n - k;
    let r2_fe = fe.r2_unweighted;
    let r2_pooled = pooled.r2_unweighted;
    let statistic = if r2_fe >= 1.0 {
        f64::INFINITY
    } else {
        (((r2_fe - r2_pooled) / df1 as f64) / ((1.0 - r2_fe) / df2 as f64)).max(0.0)
    };
    let p_value = if statistic.is_finite() {
        f_sf(statistic, df1, df2)?
    } else {
        0.0
    };
    Ok(TestResult::new(
        "Redundant Fixed Effects",
        statistic,
        RefDistribution::F(df1, df2),
        p_value,
        alpha,
    ))
}

/// Sum ratio `A = sum_a (sum_t e_at)^2 / sum_at e_at^2` shared by the two
/// LM tests for random effects, plus the scale factor `NT / (2(T-1))`.
fn lm_ratio(
    residuals: &[f64],
    n_entities: usize,
    n_periods: usize,
) -> Result<(f64, f64), DiagnosticsError> {
    let total_ss: f64 = residuals.iter().map(|e| e * e).sum();
    if total_ss <= 0.0 {
        return Err(DiagnosticsError::ZeroResidualSs);
    }
    let mut numer = 0.0;
    for e in 0..n_entities {
        let s: f64 = residuals[e * n_periods..(e + 1) * n_periods].iter().sum();
        numer += s * s;
    }
    let a = numer / total_ss;
    let nt = (n_entities * n_periods) as f64;
    let scale = nt / (2.0 * (n_periods as f64 - 1.0));
    Ok((a, scale))
}

/// Breusch-Pagan LM test for random effects from pooled residuals:
/// `BP = [NT / (2(T-1))] (A - 1)^2`, chi-square with 1 degree of freedom.
pub fn bp_lm_from_residuals(
    residuals: &[f64],
    n_entities: usize,
    n_periods: usize,
    alpha: f64,
) -> Result<TestResult, DiagnosticsError> {
    let (a, scale) = lm_ratio(residuals, n_entities, n_periods)?;
    let statistic = scale * (a - 1.0) * (a - 1.0);
    let p_value = chi2_sf(statistic, 1)?;
    Ok(TestResult::new(
        "Breusch-Pagan LM",
        statistic,
        RefDistribution::ChiSquare(1),
        p_value,
        alpha,
    ))
}

/// [`bp_lm_from_residuals`] applied to a pooled fit.
pub fn bp_lm_test(pooled: &FitResult, alpha: f64) -> Result<TestResult, DiagnosticsError> {
    bp_lm_from_residuals(&pooled.residuals, pooled.n_entities, pooled.n_periods, alpha)
}

/// Honda's one-sided variant: `sqrt(NT / (2(T-1))) (A - 1)` against the
/// upper tail of the standard normal.
pub fn honda_from_residuals(
    residuals: &[f64],
    n_entities: usize,
    n_periods: usize,
    alpha: f64,
) -> Result<TestResult, DiagnosticsError> {
    let (a, scale) = lm_ratio(residuals, n_entities, n_periods)?;
    let statistic = scale.sqrt() * (a - 1.0);
    let p_value = normal_sf(statistic);
    Ok(TestResult::new(
        "Honda LM",
        statistic,
        RefDistribution::StdNormal,
        p_value,
        alpha,
    ))
}

/// [`honda_from_residuals`] applied to a pooled fit.
pub fn honda_test(pooled: &FitResult, alpha: f64) -> Result<TestResult, DiagnosticsError> {
    honda_from_residuals(&pooled.residuals, pooled.n_entities, pooled.n_periods, alpha)
}

/// Hausman specification test
/// `H = q' pinv(V_FE - V_RE) q` with `q = beta_FE - beta_RE`.
///
/// Covariances are the classical (non-robust) ones carried by the fits, the
/// difference is taken FE-minus-RE (FE is the less efficient estimator under
/// the null), and negative eigenvalues are clipped to zero before
/// pseudoinversion, so `H >= 0` always.
pub fn hausman_test(
    fe: &FitResult,
    re: &FitResult,
    alpha: f64,
) -> Result<TestResult, DiagnosticsError> {
    if !matches!(fe.effect_kind, EffectKind::FeLsdv | EffectKind::FeGls) {
        return Err(DiagnosticsError::SpecMismatch(
            "first argument must be a fixed-effects fit".into(),
        ));
    }
    if re.effect_kind != EffectKind::RandomEffects {
        return Err(DiagnosticsError::SpecMismatch(
            "second argument must be the random-effects fit".into(),
        ));
    }
    check_same_panel(fe, re).map_err(|e| DiagnosticsError::SpecMismatch(e.to_string()))?;

    // Align the RE slopes to the FE ordering; the statistic is invariant to
    // the common permutation.
    let k = fe.slope_names.len();
    if k == 0 {
        return Err(DiagnosticsError::SpecMismatch(
            "no slope coefficients to compare".into(),
        ));
    }
    let mut align = Vec::with_capacity(k);
    for name in &fe.slope_names {
        match re.slope_names.iter().position(|n| n == name) {
            Some(i) => align.push(i),
            None => {
                return Err(DiagnosticsError::SpecMismatch(format!(
                    "regressor {name:?} missing from the RE fit"
                )))
            }
        }
    }
    if align.len() != re.slope_names.len() {
        return Err(DiagnosticsError::SpecMismatch(
            "fits use different regressor sets".into(),
        ));
    }

    let q: Vec<f64> = (0..k)
        .map(|i| fe.slopes[i] - re.slopes[align[i]])
        .collect();
    let mut v_diff = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            v_diff.set(
                i,
                j,
                fe.classical_cov.get(i, j) - re.classical_cov.get(align[i], align[j]),
            );
        }
    }
    let v_pinv = clipped_psd_pseudoinverse(&v_diff)?;
    let hq = v_pinv.matvec(&q)?;
    let statistic: f64 = q.iter().zip(&hq).map(|(a, b)| a * b).sum::<f64>().max(0.0);
    let p_value = chi2_sf(statistic, k)?;
    Ok(TestResult::new(
        "Hausman",
        statistic,
        RefDistribution::ChiSquare(k),
        p_value,
        alpha,
    ))
}

/// Panel Durbin-Watson: squared consecutive residual differences taken
/// within each entity only, divided by the total residual sum of squares.
pub fn durbin_watson(residuals: &[f64], n_periods: usize) -> Result<f64, DiagnosticsError> {
    if n_periods < 2 {
        return Err(DiagnosticsError::TooFewPeriods(n_periods));
    }
    if residuals.is_empty() || residuals.len() % n_periods != 0 {
        return Err(DiagnosticsError::MismatchedFits(format!(
            "{} residuals do not divide into periods of {n_periods}",
            residuals.len()
        )));
    }
    let total_ss: f64 = residuals.iter().map(|e| e * e).sum();
    if total_ss <= 0.0 {
        return Err(DiagnosticsError::ZeroResidualSs);
    }
    let mut diff_ss = 0.0;
    for chunk in residuals.chunks_exact(n_periods) {
        for t in 1..n_periods {
            let d = chunk[t] - chunk[t - 1];
            diff_ss += d * d;
        }
    }
    Ok(diff_ss / total_ss)
}

/// Pure decision table over the three test p-values.
///
/// `hausman_p` is consulted only when both the RFE and BP LM nulls are
/// rejected; in that cell a rejected Hausman null picks FE, otherwise RE.
pub fn decide_from_p_values(
    rfe_p: f64,
    bplm_p: f64,
    hausman_p: Option<f64>,
    alpha: f64,
) -> ModelChoice {
    match (rfe_p < alpha, bplm_p < alpha) {
        (false, false) => ModelChoice::Pooled,
        (true, false) => ModelChoice::FixedEffects,
        (false, true) => ModelChoice::RandomEffects,
        (true, true) => match hausman_p {
            Some(p) if p < alpha => ModelChoice::FixedEffects,
            Some(_) => ModelChoice::RandomEffects,
            // Both effects detected but no Hausman supplied: fall back to FE,
            // the consistent estimator under either hypothesis.
            None => ModelChoice::FixedEffects,
        },
    }
}

/// Runs the full decision table: pooled and LSDV fits, the RFE and BP LM
/// tests, and the Hausman test when both effects are detected.
pub fn select_model(
    d: &PanelDataset,
    m: &ModelSpec,
    alpha: f64,
) -> Result<SelectionOutcome, DiagnosticsError> {
    let pooled = fit_pooled(d, m)?;
    let fe = fit_fe_lsdv(d, m)?;
    let rfe = redundant_fe_test(&pooled, &fe, alpha)?;
    let bplm = bp_lm_test(&pooled, alpha)?;
    let hausman = if rfe.reject && bplm.reject {
        let re = fit_re(d, m)?;
        Some(hausman_test(&fe, &re, alpha)?)
    } else {
        None
    };
    let decision = decide_from_p_values(
        rfe.p_value,
        bplm.p_value,
        hausman.as_ref().map(|h| h.p_value),
        alpha,
    );
    Ok(SelectionOutcome {
        decision,
        rfe,
        bplm,
        hausman,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn synthetic_fit(
        kind: EffectKind,
        names: &[&str],
        slopes: &[f64],
        cov: Matrix,
    ) -> FitResult {
        FitResult {
            effect_kind: kind,
            coefficients: Vec::new(),
            r2_weighted: None,
            r2_unweighted: 0.5,
            residuals: vec![0.1; 8],
            entity_intercepts: None,
            components: None,
            n_obs: 8,
            n_entities: 2,
            n_periods: 4,
            slope_names: names.iter().map(|s| s.to_string()).collect(),
            slopes: slopes.to_vec(),
            classical_cov: cov,
        }
    }

    #[test]
    fn hausman_scalar_hand_case() {
        // H = (1.2 - 1.0)^2 / (0.04 - 0.02) = 2.0, p = chi2_sf(2, 1) ~ 0.157.
        let fe = synthetic_fit(
            EffectKind::FeLsdv,
            &["x"],
            &[1.2],
            Matrix::new(1, 1, vec![0.04]).unwrap(),
        );
        let re = synthetic_fit(
            EffectKind::RandomEffects,
            &["x"],
            &[1.0],
            Matrix::new(1, 1, vec![0.02]).unwrap(),
        );
        let h = hausman_test(&fe, &re, 0.05).unwrap();
        assert!((h.statistic - 2.0).abs() < 1e-10);
        assert!((h.p_value - 0.1573).abs() < 5e-4);
        assert!(!h.reject);
    }

    #[test]
    fn hausman_identical_estimates_give_zero() {
        let cov_fe = Matrix::new(2, 2, vec![0.05, 0.01, 0.01, 0.06]).unwrap();
        let cov_re = Matrix::new(2, 2, vec![0.02, 0.005, 0.005, 0.03]).unwrap();
        let fe = synthetic_fit(EffectKind::FeLsdv, &["a", "b"], &[1.5, -0.7], cov_fe);
        let re = synthetic_fit(EffectKind::RandomEffects, &["a", "b"], &[1.5, -0.7], cov_re);
        let h = hausman_test(&fe, &re, 0.05).unwrap();
        assert_eq!(h.statistic, 0.0);
        assert_eq!(h.p_value, 1.0);
    }

    #[test]
    fn hausman_is_invariant_to_regressor_order() {
        let cov_fe = Matrix::new(2, 2, vec![0.05, 0.01, 0.01, 0.06]).unwrap();
        let cov_re = Matrix::new(2, 2, vec![0.02, 0.005, 0.005, 0.03]).unwrap();
        let fe = synthetic_fit(EffectKind::FeLsdv, &["a", "b"], &[1.5, -0.7], cov_fe);
        let re = synthetic_fit(
            EffectKind::RandomEffects,
            &["a", "b"],
            &[1.3, -0.5],
            cov_re.clone(),
        );
        let h1 = hausman_test(&fe, &re, 0.05).unwrap();

        // Same fits with the RE regressors listed in the opposite order.
        let cov_re_swapped = Matrix::new(2, 2, vec![0.03, 0.005, 0.005, 0.02]).unwrap();
        let re_swapped = synthetic_fit(
            EffectKind::RandomEffects,
            &["b", "a"],
            &[-0.5, 1.3],
            cov_re_swapped,
        );
        let h2 = hausman_test(&fe, &re_swapped, 0.05).unwrap();
        assert!((h1.statistic - h2.statistic).abs() < 1e-12);
    }

    #[test]
    fn hausman_clips_indefinite_difference_to_nonnegative() {
        // V_FE - V_RE has a negative eigenvalue here; clipping keeps H >= 0.
        let cov_fe = Matrix::new(2, 2, vec![0.05, 0.0, 0.0, 0.01]).unwrap();
        let cov_re = Matrix::new(2, 2, vec![0.02, 0.0, 0.0, 0.04]).unwrap();
        let fe = synthetic_fit(EffectKind::FeLsdv, &["a", "b"], &[1.0, 2.0], cov_fe);
        let re = synthetic_fit(EffectKind::RandomEffects, &["a", "b"], &[0.8, 2.5], cov_re);
        let h = hausman_test(&fe, &re, 0.05).unwrap();
        assert!(h.statistic >= 0.0);
        // Only the first direction survives: H = 0.2^2 / 0.03.
        assert!((h.statistic - 0.04 / 0.03).abs() < 1e-10);
    }

    #[test]
    fn hausman_rejects_mismatched_regressor_sets() {
        let fe = synthetic_fit(
            EffectKind::FeLsdv,
            &["a"],
            &[1.0],
            Matrix::new(1, 1, vec![0.04]).unwrap(),
        );
        let re = synthetic_fit(
            EffectKind::RandomEffects,
            &["z"],
            &[1.0],
            Matrix::new(1, 1, vec![0.02]).unwrap(),
        );
        assert!(matches!(
            hausman_test(&fe, &re, 0.05),
            Err(DiagnosticsError::SpecMismatch(_))
        ));
    }

    #[test]
    fn published_hausman_reproduces_the_fe_decision() {
        // Statistic 22.4197 on 6 df gives p ~ 0.0010 and an FE decision.
        let p = chi2_sf(22.4197, 6).unwrap();
        assert!((p - 0.0010).abs() <= 2e-4);
        assert_eq!(
            decide_from_p_values(0.0, 0.0, Some(p), 0.05),
            ModelChoice::FixedEffects
        );
    }

    #[test]
    fn bp_lm_hand_case_two_by_two() {
        // Residuals (1,1) and (-1,-1): A = (2^2 + 2^2)/4 = 2,
        // BP = [4/(2*1)] (2-1)^2 = 2, Honda = sqrt(2).
        let e = [1.0, 1.0, -1.0, -1.0];
        let bp = bp_lm_from_residuals(&e, 2, 2, 0.05).unwrap();
        assert!((bp.statistic - 2.0).abs() < 1e-12);
        let honda = honda_from_residuals(&e, 2, 2, 0.05).unwrap();
        assert!((honda.statistic - 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn bp_lm_zero_entity_sums_gives_scale() {
        // Residuals summing to zero within every entity: A = 0, so
        // BP = NT/(2(T-1)).
        let e = [1.0, -1.0, 2.0, -2.0];
        let bp = bp_lm_from_residuals(&e, 2, 2, 0.05).unwrap();
        assert!((bp.statistic - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bp_and_honda_agree_on_positive_a_alternatives() {
        // For A > 1, BP = Honda^2, so BP at alpha matches Honda at alpha/2.
        let e = [1.0, 1.2, 0.8, -1.1, -0.9, -1.3, 0.4, 0.6, 0.5];
        let bp = bp_lm_from_residuals(&e, 3, 3, 0.05).unwrap();
        let honda = honda_from_residuals(&e, 3, 3, 0.025).unwrap();
        assert!(honda.statistic > 0.0);
        assert_eq!(bp.reject, honda.reject);
        assert!((bp.p_value - 2.0 * honda.p_value).abs() < 1e-12);
    }

    #[test]
    fn durbin_watson_alternating_hand_case() {
        let dw = durbin_watson(&[1.0, -1.0, 1.0, -1.0], 4).unwrap();
        assert_eq!(dw, 3.0);
    }

    #[test]
    fn durbin_watson_constant_residuals_is_zero() {
        let dw = durbin_watson(&[0.7, 0.7, 0.7, 0.7, 0.7, 0.7], 3).unwrap();
        assert_eq!(dw, 0.0);
    }

    #[test]
    fn durbin_watson_never_crosses_entity_boundaries() {
        // Two entities whose junction would add a huge jump if differenced.
        let within = durbin_watson(&[1.0, 1.1, -5.0, -5.1], 2).unwrap();
        let joined = durbin_watson(&[1.0, 1.1, -5.0, -5.1], 4).unwrap();
        assert!(within < joined);
    }

    #[test]
    fn durbin_watson_zero_residuals_errors() {
        assert!(matches!(
            durbin_watson(&[0.0, 0.0, 0.0, 0.0], 2),
            Err(DiagnosticsError::ZeroResidualSs)
        ));
    }

    #[test]
    fn decision_table_covers_all_four_cells() {
        let a = 0.05;
        assert_eq!(decide_from_p_values(0.5, 0.5, None, a), ModelChoice::Pooled);
        assert_eq!(
            decide_from_p_values(0.01, 0.5, None, a),
            ModelChoice::FixedEffects
        );
        assert_eq!(
            decide_from_p_values(0.5, 0.01, None, a),
            ModelChoice::RandomEffects
        );
        assert_eq!(
            decide_from_p_values(0.01, 0.01, Some(0.001), a),
            ModelChoice::FixedEffects
        );
        assert_eq!(
            decide_from_p_values(0.01, 0.01, Some(0.2), a),
            ModelChoice::RandomEffects
        );
    }

    #[test]
    fn published_regional_p_values_reproduce_the_decision_row() {
        let rows = [
            ("EU", 0.0000, 0.0000, 0.0120, ModelChoice::FixedEffects),
            ("AS", 0.0000, 0.0000, 0.0030, ModelChoice::FixedEffects),
            ("AF", 0.0000, 0.0000, 0.0009, ModelChoice::FixedEffects),
            ("NA", 0.0000, 0.0000, 0.1076, ModelChoice::RandomEffects),
            ("LA", 0.0000, 0.0000, 0.0000, ModelChoice::FixedEffects),
            ("OC", 0.0000, 0.0000, 0.0596, ModelChoice::RandomEffects),
            ("FC", 0.0000, 0.0000, 0.2953, ModelChoice::RandomEffects),
            ("SS", 0.0000, 0.0000, 0.0020, ModelChoice::FixedEffects),
            ("PS", 0.0000, 0.0000, 0.0909, ModelChoice::RandomEffects),
        ];
        for (region, rfe, bp, hausman, expected) in rows {
            let got = decide_from_p_values(rfe, bp, Some(hausman), 0.05);
            assert_eq!(got, expected, "wrong decision for {region}");
        }
    }
}

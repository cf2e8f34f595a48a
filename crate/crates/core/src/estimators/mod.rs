//! Panel estimators: pooled OLS, fixed effects (LSDV and cross-section GLS
//! weights), and random effects by Swamy-Arora feasible GLS, all with White
//! (HC0) robust standard errors.

mod design;
mod fit;

pub use fit::{
    estimate_variance_components, fit_fe_gls, fit_fe_lsdv, fit_pooled, fit_re, white_covariance,
    white_se,
};

use crate::dataset::DataError;
use crate::numeric::{normal_sf, Matrix, NumericError};

#[derive(Debug, thiserror::Error)]
pub enum EstimatorError {
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error("invalid model specification: {0}")]
    InvalidSpec(String),
    #[error("insufficient degrees of freedom: {0}")]
    InsufficientDf(String),
    #[error("degenerate GLS weight: entity {entity} fits perfectly (residual variance {variance:.3e})")]
    DegenerateWeight { entity: String, variance: f64 },
}

/// Which estimator produced a [`FitResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EffectKind {
    Pooled,
    FeLsdv,
    FeGls,
    RandomEffects,
}

impl std::fmt::Display for EffectKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EffectKind::Pooled => "Pooled",
            EffectKind::FeLsdv => "FE (LSDV)",
            EffectKind::FeGls => "FE (GLS)",
            EffectKind::RandomEffects => "RE",
        })
    }
}

/// Dependent variable, ordered regressors, and intercept flag.
#[derive(Debug, Clone)]
pub struct ModelSpec {
    pub dependent: String,
    pub regressors: Vec<String>,
    pub include_intercept: bool,
}

impl ModelSpec {
    pub fn new(dependent: impl Into<String>, regressors: Vec<String>) -> Self {
        Self {
            dependent: dependent.into(),
            regressors,
            include_intercept: true,
        }
    }

    pub fn without_intercept(mut self) -> Self {
        self.include_intercept = false;
        self
    }
}

/// Swamy-Arora variance components of the random-effects error
/// `u_at = omega_a + e_at`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceComponents {
    /// Cross-section component std-dev (omega_a).
    pub sigma_u: f64,
    /// Idiosyncratic component std-dev (e_at).
    pub sigma_e: f64,
    /// Share sigma_u^2 / (sigma_u^2 + sigma_e^2).
    pub rho_u: f64,
    /// Share sigma_e^2 / (sigma_u^2 + sigma_e^2).
    pub rho_e: f64,
    /// Quasi-demeaning weight 1 - sqrt(sigma_e^2 / (sigma_e^2 + T sigma_u^2)).
    pub theta: f64,
}

/// One estimated coefficient with its robust inference columns.
#[derive(Debug, Clone)]
pub struct Coefficient {
    pub name: String,
    pub value: f64,
    /// White (HC0) standard error.
    pub std_error: f64,
    pub t_stat: f64,
    /// Two-sided p-value under asymptotic normality.
    pub p_value: f64,
    pub stars: &'static str,
}

/// Full output of one panel fit.
#[derive(Debug, Clone)]
pub struct FitResult {
    pub effect_kind: EffectKind,
    /// Intercept (reported as "C") first when present, then regressors in
    /// model order.
    pub coefficients: Vec<Coefficient>,
    /// R-squared of the weighted/transformed regression; only defined for
    /// FE (GLS) and RE.
    pub r2_weighted: Option<f64>,
    /// 1 - RSS/TSS on the untransformed scale, clamped to [0, 1].
    pub r2_unweighted: f64,
    /// Raw-scale residuals, ordered entity-major then period.
    pub residuals: Vec<f64>,
    /// Per-entity intercepts (LSDV-based fits only).
    pub entity_intercepts: Option<Vec<(String, f64)>>,
    /// Variance components (RE only).
    pub components: Option<VarianceComponents>,
    pub n_obs: usize,
    pub n_entities: usize,
    pub n_periods: usize,
    /// Slope coefficient names (intercept and entity dummies excluded), in
    /// model order. Inputs to the specification tests.
    pub slope_names: Vec<String>,
    /// Slope values aligned with `slope_names`.
    pub slopes: Vec<f64>,
    /// Classical (non-robust) covariance of the slopes, for the Hausman test.
    pub classical_cov: Matrix,
}

impl FitResult {
    pub fn coefficient(&self, name: &str) -> Option<&Coefficient> {
        self.coefficients.iter().find(|c| c.name == name)
    }
}

/// Significance stars: *** at 1%, ** at 5%, * at 10%.
pub fn significance_stars(p_value: f64) -> &'static str {
    if p_value <= 0.01 {
        "***"
    } else if p_value <= 0.05 {
        "**"
    } else if p_value <= 0.10 {
        "*"
    } else {
        ""
    }
}

pub(crate) fn build_coefficient(name: &str, value: f64, std_error: f64) -> Coefficient {
    let t_stat = if std_error > 0.0 {
        value / std_error
    } else if value == 0.0 {
        0.0
    } else {
        f64::INFINITY * value.signum()
    };
    let p_value = if t_stat.is_finite() {
        2.0 * normal_sf(t_stat.abs())
    } else {
        0.0
    };
    Coefficient {
        name: name.to_string(),
        value,
        std_error,
        t_stat,
        p_value,
        stars: significance_stars(p_value),
    }
}

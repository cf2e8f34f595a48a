//! panelfit: balanced-panel econometrics.
//!
//! The crate covers the full pipeline for a balanced entity x year panel:
//!
//! - [`dataset`]: CSV ingestion, the log-floor transform, descriptive
//!   statistics, and balanced regional subsetting;
//! - [`unitroot`]: per-series ADF regressions with SIC lag selection and the
//!   panel unit-root test built on their averaged t-statistics;
//! - [`estimators`]: pooled OLS, fixed effects (LSDV and GLS cross-section
//!   weights), and Swamy-Arora random effects, all with White (HC0) standard
//!   errors;
//! - [`diagnostics`]: redundant-FE, Breusch-Pagan/Honda LM, and Hausman
//!   specification tests plus the model-selection decision table;
//! - [`synthlab`]: seeded synthetic panels and a Monte-Carlo harness that
//!   measures estimator bias, test size, and test power;
//! - [`numeric`]: the dense least-squares / pseudoinverse / tail-probability
//!   kernel everything above is built on.

pub mod dataset;
pub mod diagnostics;
pub mod estimators;
pub mod numeric;
pub mod synthlab;
pub mod unitroot;

pub use dataset::{
    describe, load_long_csv, subset_region, write_long_csv, CsvSchema, DataError, PanelDataset,
    Region, RegionMap, SummaryRow, TransformPolicy,
};
pub use diagnostics::{
    bp_lm_test, decide_from_p_values, durbin_watson, hausman_test, honda_test, redundant_fe_test,
    select_model, DiagnosticsError, ModelChoice, RefDistribution, SelectionOutcome, TestResult,
};
pub use estimators::{
    estimate_variance_components, fit_fe_gls, fit_fe_lsdv, fit_pooled, fit_re, significance_stars,
    Coefficient, EffectKind, EstimatorError, FitResult, ModelSpec, VarianceComponents,
};
pub use synthlab::{generate, run_experiment, DgpSpec, McReport, Pipeline, SynthError};
pub use unitroot::{
    adf_fit, adf_fit_fixed, demean_cross_section, ips_test, AdfFit, IpsResult, MomentsSource,
    UnitRootError,
};

//! Synthetic panel data-generating processes and the Monte-Carlo experiment
//! harness used to validate every estimator and test.
//!
//! All randomness flows through ChaCha8 with Box-Muller normal draws, so a
//! `DgpSpec` (including its seed) pins the generated data bit for bit on any
//! platform. Replication `i` of an experiment uses RNG stream `i`, which
//! makes parallel and serial execution produce identical aggregates.

use indexmap::IndexMap;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::dataset::PanelDataset;
use crate::diagnostics::{bp_lm_test, hausman_test, honda_test, redundant_fe_test};
use crate::estimators::{fit_fe_gls, fit_fe_lsdv, fit_pooled, fit_re, FitResult, ModelSpec};
use crate::unitroot::ips_test;

/// AR(1) coefficient of the stationary regressor process.
const REGRESSOR_AR: f64 = 0.5;
/// Strength of the entity-intercept / regressor correlation in
/// `fixed_effect_mode`.
const FE_CORRELATION: f64 = 0.8;
/// First simulated year; panels mirror an annual layout.
const START_YEAR: i32 = 1995;

#[derive(Debug, thiserror::Error)]
pub enum SynthError {
    #[error("invalid DGP spec: {0}")]
    InvalidSpec(String),
    #[error("replication {index} failed: {message}")]
    ReplicationFailed { index: usize, message: String },
}

/// A synthetic panel data-generating process.
///
/// The dependent variable is assembled as
/// `y_at = intercept + sum_j beta_j x_j,at + alpha_a + e_at` where
/// `alpha_a ~ N(0, sigma_u^2)` (or is correlated with the first regressor in
/// `fixed_effect_mode`) and `e_at ~ N(0, sigma_e^2)`. Regressors follow a
/// stationary AR(1) with coefficient 0.5 and unit innovation variance,
/// independent across entities; `unit_root_mode` replaces them with driftless
/// random walks.
#[derive(Debug, Clone, Deserialize)]
pub struct DgpSpec {
    pub n_entities: usize,
    pub n_periods: usize,
    #[serde(default)]
    pub intercept: f64,
    pub true_beta: IndexMap<String, f64>,
    pub sigma_u: f64,
    pub sigma_e: f64,
    #[serde(default)]
    pub fixed_effect_mode: bool,
    #[serde(default)]
    pub unit_root_mode: bool,
    pub seed: u64,
    #[serde(default = "default_dependent")]
    pub dependent: String,
}

fn default_dependent() -> String {
    "y".to_string()
}

impl DgpSpec {
    fn validate(&self) -> Result<(), SynthError> {
        if self.n_entities < 2 {
            return Err(SynthError::InvalidSpec("n_entities must be >= 2".into()));
        }
        if self.n_periods < 3 {
            return Err(SynthError::InvalidSpec("n_periods must be >= 3".into()));
        }
        if self.sigma_u < 0.0 || self.sigma_e < 0.0 {
            return Err(SynthError::InvalidSpec(
                "sigma_u and sigma_e must be nonnegative".into(),
            ));
        }
        if self.true_beta.contains_key(&self.dependent) {
            return Err(SynthError::InvalidSpec(format!(
                "dependent {:?} collides with a regressor name",
                self.dependent
            )));
        }
        if self.fixed_effect_mode && self.true_beta.is_empty() {
            return Err(SynthError::InvalidSpec(
                "fixed_effect_mode needs at least one regressor".into(),
            ));
        }
        Ok(())
    }

    /// The model specification matching this DGP.
    pub fn model_spec(&self) -> ModelSpec {
        ModelSpec::new(
            self.dependent.clone(),
            self.true_beta.keys().cloned().collect(),
        )
    }
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    use rand::Rng;
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Generates the panel for `spec` (RNG stream 0).
pub fn generate(spec: &DgpSpec) -> Result<PanelDataset, SynthError> {
    generate_stream(spec, 0)
}

/// Generates the panel for replication `stream` of an experiment.
///
/// Draw order per entity: regressor series in declaration order, then the
/// entity effect, then the idiosyncratic errors. Shock draws are taken
/// unconditionally and scaled, so changing a sigma rescales rather than
/// reshuffles the sample.
pub fn generate_stream(spec: &DgpSpec, stream: u64) -> Result<PanelDataset, SynthError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(stream);

    let ne = spec.n_entities;
    let np = spec.n_periods;
    let k = spec.true_beta.len();
    let betas: Vec<f64> = spec.true_beta.values().copied().collect();

    let mut values = vec![0.0; ne * np * (k + 1)];
    let nv = k + 1;
    let stationary_sd = (1.0 / (1.0 - REGRESSOR_AR * REGRESSOR_AR)).sqrt();

    for e in 0..ne {
        // Regressors first.
        let mut x = vec![vec![0.0; np]; k];
        for series in x.iter_mut() {
            if spec.unit_root_mode {
                let mut level = 0.0;
                for v in series.iter_mut() {
                    level += standard_normal(&mut rng);
                    *v = level;
                }
            } else {
                let mut level = stationary_sd * standard_normal(&mut rng);
                series[0] = level;
                for v in series.iter_mut().skip(1) {
                    level = REGRESSOR_AR * level + standard_normal(&mut rng);
                    *v = level;
                }
            }
        }

        // Entity effect.
        let shock = spec.sigma_u * standard_normal(&mut rng);
        let alpha = if spec.fixed_effect_mode {
            let x1_mean: f64 = x[0].iter().sum::<f64>() / np as f64;
            FE_CORRELATION * x1_mean + shock
        } else {
            shock
        };

        // Dependent.
        for t in 0..np {
            let noise = spec.sigma_e * standard_normal(&mut rng);
            let mut y = spec.intercept + alpha + noise;
            for j in 0..k {
                y += betas[j] * x[j][t];
            }
            let base = (e * np + t) * nv;
            values[base] = y;
            for j in 0..k {
                values[base + 1 + j] = x[j][t];
            }
        }
    }

    let mut variables = Vec::with_capacity(nv);
    variables.push(spec.dependent.clone());
    variables.extend(spec.true_beta.keys().cloned());
    PanelDataset::from_parts(
        (0..ne).map(|i| format!("E{:03}", i + 1)).collect(),
        (0..np as i32).map(|t| START_YEAR + t).collect(),
        variables,
        values,
    )
    .map_err(|e| SynthError::InvalidSpec(e.to_string()))
}

/// Which estimation or testing path a Monte-Carlo experiment exercises.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Pipeline {
    Pooled,
    FeLsdv,
    FeGls,
    RandomEffects,
    /// Redundant-FE, BP LM, Honda, and Hausman rejection rates.
    SpecificationTests,
    /// Panel unit-root rejection rate for one variable.
    UnitRoot { variable: String },
}

impl Pipeline {
    fn needs_rate_sample(&self) -> bool {
        matches!(self, Pipeline::SpecificationTests | Pipeline::UnitRoot { .. })
    }
}

#[derive(Debug, Clone)]
pub struct CoefficientStat {
    pub name: String,
    pub estimate_mean: f64,
    pub estimate_sd: f64,
    /// Fraction of replications whose 95% normal interval covered the truth.
    pub coverage_95: f64,
}

/// Aggregated Monte-Carlo experiment output.
#[derive(Debug, Clone)]
pub struct McReport {
    pub replications: usize,
    pub seed: u64,
    pub coefficient_stats: Vec<CoefficientStat>,
    pub rejection_rates: Vec<(String, f64)>,
}

impl McReport {
    /// Tidy `section,name,value` CSV with 4-decimal values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("section,name,value\n");
        out.push_str(&format!("meta,replications,{}\n", self.replications));
        out.push_str(&format!("meta,seed,{}\n", self.seed));
        for c in &self.coefficient_stats {
            out.push_str(&format!("estimate_mean,{},{:.4}\n", c.name, c.estimate_mean));
            out.push_str(&format!("estimate_sd,{},{:.4}\n", c.name, c.estimate_sd));
            out.push_str(&format!("coverage_95,{},{:.4}\n", c.name, c.coverage_95));
        }
        for (name, rate) in &self.rejection_rates {
            out.push_str(&format!("rejection_rate,{name},{rate:.4}\n"));
        }
        out
    }
}

fn truth_for(spec: &DgpSpec, name: &str) -> f64 {
    if name == "C" {
        spec.intercept
    } else {
        spec.true_beta.get(name).copied().unwrap_or(f64::NAN)
    }
}

/// Runs `replications` independent generate-fit(-test) cycles and aggregates
/// them. Deterministic given the spec's master seed; replication `i` uses
/// RNG stream `i`.
pub fn run_experiment(
    spec: &DgpSpec,
    pipeline: &Pipeline,
    replications: usize,
    alpha: f64,
) -> Result<McReport, SynthError> {
    spec.validate()?;
    if replications == 0 {
        return Err(SynthError::InvalidSpec("replications must be >= 1".into()));
    }
    if pipeline.needs_rate_sample() && replications < 50 {
        return Err(SynthError::InvalidSpec(
            "rejection-rate experiments need at least 50 replications".into(),
        ));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(SynthError::InvalidSpec("alpha must lie in (0, 1)".into()));
    }

    let model = spec.model_spec();
    // estimates[name] -> (sum, sum of squares, covered count)
    let mut estimates: IndexMap<String, (f64, f64, usize)> = IndexMap::new();
    let mut rejections: IndexMap<String, usize> = IndexMap::new();

    for rep in 0..replications {
        let fail = |message: String| SynthError::ReplicationFailed {
            index: rep,
            message,
        };
        let d = generate_stream(spec, rep as u64)?;
        match pipeline {
            Pipeline::Pooled
            | Pipeline::FeLsdv
            | Pipeline::FeGls
            | Pipeline::RandomEffects => {
                let fit: FitResult = match pipeline {
                    Pipeline::Pooled => fit_pooled(&d, &model),
                    Pipeline::FeLsdv => fit_fe_lsdv(&d, &model),
                    Pipeline::FeGls => fit_fe_gls(&d, &model),
                    Pipeline::RandomEffects => fit_re(&d, &model),
                    _ => unreachable!(),
                }
                .map_err(|e| fail(e.to_string()))?;
                for c in &fit.coefficients {
                    let truth = truth_for(spec, &c.name);
                    let slot = estimates.entry(c.name.clone()).or_insert((0.0, 0.0, 0));
                    slot.0 += c.value;
                    slot.1 += c.value * c.value;
                    if (c.value - truth).abs() <= 1.96 * c.std_error {
                        slot.2 += 1;
                    }
                }
            }
            Pipeline::SpecificationTests => {
                let pooled = fit_pooled(&d, &model).map_err(|e| fail(e.to_string()))?;
                let fe = fit_fe_lsdv(&d, &model).map_err(|e| fail(e.to_string()))?;
                let re = fit_re(&d, &model).map_err(|e| fail(e.to_string()))?;
                let rfe = redundant_fe_test(&pooled, &fe, alpha).map_err(|e| fail(e.to_string()))?;
                let bp = bp_lm_test(&pooled, alpha).map_err(|e| fail(e.to_string()))?;
                let honda = honda_test(&pooled, alpha).map_err(|e| fail(e.to_string()))?;
                let hausman = hausman_test(&fe, &re, alpha).map_err(|e| fail(e.to_string()))?;
                for (name, t) in [
                    ("rfe", rfe),
                    ("bp_lm", bp),
                    ("honda", honda),
                    ("hausman", hausman),
                ] {
                    *rejections.entry(name.to_string()).or_insert(0) +=
                        usize::from(t.reject);
                }
            }
            Pipeline::UnitRoot { variable } => {
                let res = ips_test(&d, variable, None).map_err(|e| fail(e.to_string()))?;
                *rejections.entry("ips".to_string()).or_insert(0) +=
                    usize::from(res.p_value < alpha);
            }
        }
    }

    let n = replications as f64;
    let coefficient_stats = estimates
        .into_iter()
        .map(|(name, (sum, sum_sq, covered))| {
            let mean = sum / n;
            let sd = if replications > 1 {
                ((sum_sq - n * mean * mean).max(0.0) / (n - 1.0)).sqrt()
            } else {
                0.0
            };
            CoefficientStat {
                name,
                estimate_mean: mean,
                estimate_sd: sd,
                coverage_95: covered as f64 / n,
            }
        })
        .collect();
    let rejection_rates = rejections
        .into_iter()
        .map(|(name, count)| (name, count as f64 / n))
        .collect();

    Ok(McReport {
        replications,
        seed: spec.seed,
        coefficient_stats,
        rejection_rates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_spec() -> DgpSpec {
        let mut beta = IndexMap::new();
        beta.insert("x".to_string(), 2.0);
        DgpSpec {
            n_entities: 4,
            n_periods: 6,
            intercept: 1.0,
            true_beta: beta,
            sigma_u: 0.0,
            sigma_e: 0.0,
            fixed_effect_mode: false,
            unit_root_mode: false,
            seed: 99,
            dependent: "y".to_string(),
        }
    }

    #[test]
    fn noiseless_dgp_is_exactly_affine() {
        let spec = base_spec();
        let d = generate(&spec).unwrap();
        let fit = fit_pooled(&d, &spec.model_spec()).unwrap();
        assert!((fit.coefficient("x").unwrap().value - 2.0).abs() < 1e-10);
        assert!((fit.coefficient("C").unwrap().value - 1.0).abs() < 1e-10);
        assert!((fit.r2_unweighted - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identical_specs_generate_identical_datasets() {
        let spec = DgpSpec {
            sigma_u: 0.7,
            sigma_e: 1.3,
            ..base_spec()
        };
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a, b);
        // A different stream must differ.
        let c = generate_stream(&spec, 1).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn entity_mean_error_variance_obeys_total_variance_law() {
        // Var(mean_t u_at) = sigma_u^2 + sigma_e^2 / T = 1 + 1/8.
        let spec = DgpSpec {
            n_entities: 2000,
            n_periods: 8,
            sigma_u: 1.0,
            sigma_e: 1.0,
            seed: 1234,
            ..base_spec()
        };
        let d = generate(&spec).unwrap();
        let yi = d.variable_index("y").unwrap();
        let xi = d.variable_index("x").unwrap();
        let mut means = Vec::with_capacity(spec.n_entities);
        for e in 0..spec.n_entities {
            let mut acc = 0.0;
            for t in 0..spec.n_periods {
                let u = d.value(e, t, yi) - spec.intercept - 2.0 * d.value(e, t, xi);
                acc += u;
            }
            means.push(acc / spec.n_periods as f64);
        }
        let grand = means.iter().sum::<f64>() / means.len() as f64;
        let var = means.iter().map(|v| (v - grand) * (v - grand)).sum::<f64>()
            / (means.len() - 1) as f64;
        let expected = 1.0 + 1.0 / spec.n_periods as f64;
        assert!(
            (var - expected).abs() < 0.15,
            "entity-mean variance {var:.4}, expected about {expected:.4}"
        );
    }

    #[test]
    fn experiment_is_deterministic() {
        let spec = DgpSpec {
            sigma_u: 0.5,
            sigma_e: 1.0,
            n_entities: 6,
            n_periods: 8,
            ..base_spec()
        };
        let a = run_experiment(&spec, &Pipeline::RandomEffects, 5, 0.05).unwrap();
        let b = run_experiment(&spec, &Pipeline::RandomEffects, 5, 0.05).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
    }

    #[test]
    fn single_replication_report_is_allowed_for_estimators() {
        let spec = DgpSpec {
            sigma_e: 0.5,
            ..base_spec()
        };
        let r = run_experiment(&spec, &Pipeline::Pooled, 1, 0.05).unwrap();
        assert_eq!(r.replications, 1);
        let x = r
            .coefficient_stats
            .iter()
            .find(|c| c.name == "x")
            .unwrap();
        assert_eq!(x.estimate_sd, 0.0);
    }

    #[test]
    fn rate_experiments_demand_fifty_replications() {
        let spec = DgpSpec {
            sigma_e: 1.0,
            ..base_spec()
        };
        assert!(matches!(
            run_experiment(&spec, &Pipeline::SpecificationTests, 10, 0.05),
            Err(SynthError::InvalidSpec(_))
        ));
    }

    #[test]
    fn invalid_specs_are_rejected() {
        let mut s = base_spec();
        s.n_entities = 1;
        assert!(generate(&s).is_err());
        let mut s = base_spec();
        s.sigma_e = -1.0;
        assert!(generate(&s).is_err());
        let mut s = base_spec();
        s.dependent = "x".into();
        assert!(generate(&s).is_err());
    }
}

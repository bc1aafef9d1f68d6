use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Method, SimConfig};
use super::data::simulate_dataset;
use super::presets::{preset_by_name, ModelPreset};
use crate::error::{invalid_arg, Error, Result};
use crate::regression::{
    build_split_design, cv_on_path, lasso_path, mean_sd, nonnegative_garrote, DesignConfig, PathScaling,
    ResponseScaling,
};
use crate::selection::{
    annotate_path, model_error, second_moment, select_lars_ols, select_lasso, select_maic, select_model,
    AnnotationContext, BettiPreset, CriterionConfig, ErrorMode, MethodOutcome,
};
use crate::terms::enumerate_candidate_terms;

/// One method on one replication.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodRun {
    pub method: Method,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub model_error: Option<f64>,
    pub support_size: Option<usize>,
    pub error: Option<String>,
}

impl MethodRun {
    fn failed(method: Method, e: &Error) -> Self {
        Self { method, lambda: None, mu: None, model_error: None, support_size: None, error: Some(e.to_string()) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub sd: f64,
}

impl Moments {
    fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let (mean, sd) = mean_sd(values.iter().copied());
        Some(Self { mean, sd })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub label: String,
    pub completed: usize,
    pub failures: usize,
    pub model_error: Option<Moments>,
    pub support_size: Option<Moments>,
    /// `(replication, message)` for every failure.
    pub failure_notes: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub sigma: f64,
    pub rho: f64,
    pub replications: usize,
    pub methods: Vec<MethodSummary>,
}

impl CellReport {
    pub fn method(&self, m: Method) -> Option<&MethodSummary> {
        self.methods.iter().find(|s| s.method == m)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub preset: String,
    pub preset_description: String,
    pub true_terms: usize,
    pub candidate_terms: usize,
    pub config: ExperimentConfig,
    pub cells: Vec<CellReport>,
}

impl ExperimentReport {
    pub fn cell(&self, sigma: f64, rho: f64) -> Option<&CellReport> {
        self.cells.iter().find(|c| c.sigma == sigma && c.rho == rho)
    }
}

fn fold_seed(seed: u64, replication: u64) -> u64 {
    seed ^ replication.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Runs every method on replication `replication` of one cell.
///
/// All methods share the design: standardised mains, centred interaction
/// products and a centred response, fitted on the training rows. The true
/// coefficients are re-expressed over those columns, so a non-hierarchical
/// model picks up small coefficients on its missing sub-terms. Model error
/// uses the validation second moment; the criterion weight μ is chosen by
/// test-split model error.
pub fn run_replication(
    cfg: &SimConfig,
    preset: &ModelPreset,
    methods: &[Method],
    cv_folds: usize,
    replication: u64,
) -> Vec<MethodRun> {
    match replication_inner(cfg, preset, methods, cv_folds, replication) {
        Ok(runs) => runs,
        Err(e) => methods.iter().map(|&m| MethodRun::failed(m, &e)).collect(),
    }
}

fn replication_inner(
    cfg: &SimConfig,
    preset: &ModelPreset,
    methods: &[Method],
    cv_folds: usize,
    replication: u64,
) -> Result<Vec<MethodRun>> {
    let candidate = enumerate_candidate_terms(cfg.p, cfg.k)?;
    let data = simulate_dataset(cfg, preset, replication)?;
    let config = DesignConfig::standard().with_response(ResponseScaling::Center);
    let design = build_split_design(&data, &candidate, config)?;
    // The raw-scale true model, expanded exactly over the training-standardised columns.
    let truth = design.train.standardizer.coefficients_to_design(&preset.support, &preset.coefficients)?;
    let (xt, yt) = (&design.train.x, &design.train.y);
    let path = lasso_path(xt, yt, &candidate, PathScaling::PerObservation)?;
    let annotated = annotate_path(
        &path,
        AnnotationContext {
            train: (xt, yt),
            validation: (&design.validation.0, &design.validation.1),
            held_out: Some((&design.test.0, &design.test.1)),
            betti_len: cfg.k,
            truth: Some(&truth),
        },
    )?;
    let m_validation = second_moment(&design.validation.0);
    let score = |o: MethodOutcome, method: Method| -> Result<MethodRun> {
        Ok(MethodRun {
            method,
            lambda: o.lambda,
            mu: o.mu,
            model_error: Some(model_error(&o.coefficients, &truth, &m_validation)?),
            support_size: Some(o.support_size()),
            error: None,
        })
    };

    let run = |method: Method| -> Result<MethodRun> {
        let mode = ErrorMode::Oracle;
        match method {
            Method::Cc(p) => {
                let c = CriterionConfig::preset(p, cfg.k, mode)?;
                score(select_model(&annotated, &c)?.outcome(), method)
            }
            Method::Maic => {
                let c = CriterionConfig::preset(BettiPreset::AllCycles, cfg.k, mode)?;
                score(select_maic(&annotated, &c)?.outcome(), method)
            }
            Method::LarsOls => score(select_lars_ols(&annotated, mode)?.outcome(), method),
            Method::Lasso => score(select_lasso(&annotated, mode)?, method),
            Method::LassoCv => {
                let cv = cv_on_path(&path, xt, yt, cv_folds, fold_seed(cfg.seed, replication))?;
                let o = MethodOutcome {
                    method: method.name(),
                    lambda: Some(cv.lambda),
                    mu: None,
                    coefficients: cv.coefficients,
                };
                score(o, method)
            }
            Method::Nng => {
                let g = nonnegative_garrote(xt, yt, None)?;
                let mut best: Option<(usize, f64)> = None;
                // Grid is decreasing: strict improvement keeps the larger λ.
                for (i, c) in g.coefficients.iter().enumerate() {
                    let me = model_error(c, &truth, &m_validation)?;
                    if best.map_or(true, |(_, b)| me < b) {
                        best = Some((i, me));
                    }
                }
                let (i, _) = best.ok_or_else(|| Error::SelectionFailed("empty garrote grid".into()))?;
                let o = MethodOutcome {
                    method: method.name(),
                    lambda: Some(g.lambdas[i]),
                    mu: None,
                    coefficients: g.coefficients[i].clone(),
                };
                score(o, method)
            }
        }
    };
    Ok(methods.iter().map(|&m| run(m).unwrap_or_else(|e| MethodRun::failed(m, &e))).collect())
}

fn summarise(method: Method, runs: &[&MethodRun]) -> MethodSummary {
    let ok: Vec<&&MethodRun> = runs.iter().filter(|r| r.error.is_none()).collect();
    let me: Vec<f64> = ok.iter().filter_map(|r| r.model_error).collect();
    let size: Vec<f64> = ok.iter().filter_map(|r| r.support_size).map(|s| s as f64).collect();
    let failure_notes = runs
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.error.clone().map(|e| (i, e)))
        .collect::<Vec<_>>();
    MethodSummary {
        method,
        label: method.label(),
        completed: ok.len(),
        failures: failure_notes.len(),
        model_error: Moments::of(&me),
        support_size: Moments::of(&size),
        failure_notes,
    }
}

/// Runs one cell, fanning replications out over `pool`.
fn run_cell(cfg: &SimConfig, preset: &ModelPreset, exp: &ExperimentConfig, pool: &rayon::ThreadPool) -> CellReport {
    let runs: Vec<Vec<MethodRun>> = pool.install(|| {
        (0..cfg.replications as u64)
            .into_par_iter()
            .map(|r| run_replication(cfg, preset, &exp.methods, exp.cv_folds, r))
            .collect()
    });
    let methods = exp
        .methods
        .iter()
        .enumerate()
        .map(|(j, &m)| summarise(m, &runs.iter().map(|r| &r[j]).collect::<Vec<_>>()))
        .collect();
    CellReport { sigma: cfg.sigma, rho: cfg.rho, replications: cfg.replications, methods }
}

/// Runs every (ρ, σ) cell of `exp`. Output is independent of `jobs`;
/// `None` uses all cores.
pub fn run_experiment(exp: &ExperimentConfig, jobs: Option<usize>) -> Result<ExperimentReport> {
    exp.validate()?;
    let preset = preset_by_name(&exp.preset)?;
    if preset.support.max_degree() > exp.order {
        return Err(invalid_arg(format!(
            "preset {} has degree-{} terms but the order is {}",
            preset.name,
            preset.support.max_degree(),
            exp.order
        )));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(invalid_arg("jobs must be at least 1"));
        }
        builder = builder.num_threads(j);
    }
    let pool = builder.build().map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let cells = exp.cells(preset.p()).iter().map(|cfg| run_cell(cfg, &preset, exp, &pool)).collect();
    Ok(ExperimentReport {
        preset: preset.name.clone(),
        preset_description: preset.description.clone(),
        true_terms: preset.support.len(),
        candidate_terms: enumerate_candidate_terms(preset.p(), exp.order)?.len(),
        config: exp.clone(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(sigma: f64) -> SimConfig {
        SimConfig { p: 8, k: 3, rho: 0.3, sigma, n: 625, splits: [0.6, 0.2, 0.2], replications: 1, seed: 11 }
    }

    #[test]
    fn near_noiseless_lars_ols_recovers_model3() {
        let preset = preset_by_name("model3").unwrap();
        let runs = run_replication(&small(1e-3), &preset, &[Method::LarsOls], 5, 0);
        let r = &runs[0];
        assert!(r.error.is_none(), "{:?}", r.error);
        assert!(r.model_error.unwrap() < 0.5, "{:?}", r.model_error);
        assert!(r.support_size.unwrap() >= 20);
    }

    #[test]
    fn every_method_runs() {
        let preset = preset_by_name("model2").unwrap();
        let runs = run_replication(&small(3.0), &preset, &Method::all(), 5, 0);
        for r in &runs {
            assert!(r.error.is_none(), "{}: {:?}", r.method.name(), r.error);
            assert!(r.model_error.unwrap() >= 0.0);
        }
    }

    #[test]
    fn lasso_and_cv_agree_when_lambdas_agree() {
        let preset = preset_by_name("model2").unwrap();
        for rep in 0..4 {
            let runs = run_replication(&small(3.0), &preset, &[Method::Lasso, Method::LassoCv], 5, rep);
            if runs[0].lambda == runs[1].lambda {
                assert_eq!(runs[0].model_error, runs[1].model_error);
            }
        }
    }

    #[test]
    fn reports_are_reproducible_and_job_independent() {
        let exp = ExperimentConfig {
            preset: "model3".into(),
            sigmas: vec![1.0],
            rhos: vec![0.0],
            replications: 3,
            methods: vec![Method::LarsOls, Method::Cc(BettiPreset::NoZeroCycles)],
            ..ExperimentConfig::default()
        };
        let a = run_experiment(&exp, Some(1)).unwrap();
        let b = run_experiment(&exp, Some(3)).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        let cell = &a.cells[0];
        assert_eq!(cell.replications, 3);
        assert!(cell.methods.iter().all(|m| m.completed + m.failures == 3));
        assert!(cell.methods.iter().all(|m| m.model_error.map_or(true, |s| s.sd >= 0.0)));
    }

    #[test]
    fn order_too_small_for_preset() {
        let exp = ExperimentConfig { order: 2, ..ExperimentConfig::default() };
        assert!(run_experiment(&exp, Some(1)).is_err());
    }
}

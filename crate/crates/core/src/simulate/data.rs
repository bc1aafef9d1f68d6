use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::config::SimConfig;
use super::presets::ModelPreset;
use crate::error::Result;
use crate::regression::Dataset;

/// Independent stream `stream` of the generator seeded by `seed`.
pub fn replication_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// `n × p` centred Gaussian rows with covariance `ρ^|i−j|`, drawn as `Z Lᵀ`
/// with `L` the lower Cholesky factor. Deterministic in
/// `(seed, replication)`.
pub fn gen_design(cfg: &SimConfig, replication: u64) -> DMatrix<f64> {
    let p = cfg.p;
    let sigma = DMatrix::from_fn(p, p, |i, j| cfg.rho.powi((i as i32 - j as i32).abs()));
    // Positive definite for 0 ≤ ρ < 1.
    let l = sigma.cholesky().expect("ρ^|i−j| is positive definite").unpack();
    let mut rng = replication_rng(cfg.seed, 2 * replication);
    let z = DMatrix::from_fn(cfg.n, p, |_, _| rng.sample::<f64, _>(StandardNormal));
    z * l.transpose()
}

/// `Y = Σ θ_t Π_{j∈t} x_j + σ ε`, no intercept.
pub fn gen_response<R: Rng>(x: &DMatrix<f64>, preset: &ModelPreset, sigma: f64, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(x.nrows(), |i, _| {
        let signal: f64 = preset
            .support
            .iter()
            .zip(&preset.coefficients)
            .map(|(t, c)| c * t.indices().map(|j| x[(i, j)]).product::<f64>())
            .sum();
        signal + sigma * rng.sample::<f64, _>(StandardNormal)
    })
}

/// Design, response and contiguous splits for one replication.
pub fn simulate_dataset(cfg: &SimConfig, preset: &ModelPreset, replication: u64) -> Result<Dataset> {
    let x = gen_design(cfg, replication);
    let mut rng = replication_rng(cfg.seed, 2 * replication + 1);
    let y = gen_response(&x, preset, cfg.sigma, &mut rng);
    Dataset::new(x, y)?.with_contiguous_splits(cfg.splits)
}

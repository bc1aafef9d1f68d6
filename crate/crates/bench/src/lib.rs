//! Seeded inputs for the kernel benchmarks.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use topolasso::homology::{boundary_matrix, d_closed_complex, BoundaryMatrix, SimplicialComplex};
use topolasso::{build_design, enumerate_candidate_terms, Dataset, DesignConfig, ModelSupport};

/// Standardized interaction design over `p` Gaussian variables up to
/// order `k`, with a sparse interaction signal plus noise.
pub fn interaction_design(n: usize, p: usize, k: usize, seed: u64) -> (DMatrix<f64>, DVector<f64>, ModelSupport) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = DMatrix::from_fn(n, p, |_, _| rng.sample(StandardNormal));
    let y = DVector::from_fn(n, |i, _| {
        let noise: f64 = rng.sample(StandardNormal);
        x[(i, 0)] - 2.0 * x[(i, 1)] + 1.5 * x[(i, 0)] * x[(i, 1)] + noise
    });
    let terms = enumerate_candidate_terms(p, k).expect("valid order");
    let d = build_design(&Dataset::new(x, y).expect("finite"), &terms, DesignConfig::standard()).expect("design");
    (d.x, d.y, terms)
}

/// Every `k`-face over `m` vertices with its closure.
pub fn closed_complex(k: usize, m: usize) -> SimplicialComplex {
    d_closed_complex(k, m).expect("valid sizes")
}

/// `∂_d` of the `k`-closed complex on `m` vertices.
pub fn boundary(k: usize, m: usize, d: usize) -> BoundaryMatrix {
    boundary_matrix(&closed_complex(k, m), d).expect("dimension in range")
}

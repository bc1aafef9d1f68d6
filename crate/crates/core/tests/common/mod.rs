//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use topolasso::homology::{Simplex, SimplicialComplex};

/// Rank over Z2 by forward elimination on packed rows.
pub fn z2_rank(rows: &[Vec<bool>]) -> usize {
    let mut packed: Vec<u128> = rows
        .iter()
        .map(|r| r.iter().enumerate().fold(0u128, |acc, (j, &b)| acc | (u128::from(b) << j)))
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    assert!(cols <= 128, "oracle handles at most 128 columns");
    let mut rank = 0;
    for j in 0..cols {
        let Some(pivot) = (rank..packed.len()).find(|&i| packed[i] >> j & 1 == 1) else {
            continue;
        };
        packed.swap(rank, pivot);
        let p = packed[rank];
        for (i, row) in packed.iter_mut().enumerate() {
            if i != rank && *row >> j & 1 == 1 {
                *row ^= p;
            }
        }
        rank += 1;
    }
    rank
}

/// `∂_d` as a dense boolean matrix, built straight from vertex masks.
pub fn dense_boundary(c: &SimplicialComplex, d: usize) -> Vec<Vec<bool>> {
    let rows = c.simplices(d - 1);
    let cols = c.simplices(d);
    rows.iter()
        .map(|r| {
            cols.iter()
                .map(|s| (r.mask() & s.mask()) == r.mask() && (s.mask() ^ r.mask()).count_ones() == 1)
                .collect()
        })
        .collect()
}

pub fn dense_product_is_zero(a: &[Vec<bool>], b: &[Vec<bool>]) -> bool {
    let inner = b.len();
    a.iter().all(|row| {
        (0..b.first().map_or(0, Vec::len))
            .all(|j| (0..inner).filter(|&k| row[k] && b[k][j]).count() % 2 == 0)
    })
}

/// Downward-closed complex from up to eight random faces on at most 10
/// vertices, each with at most five vertices.
pub fn random_complex<R: Rng>(rng: &mut R) -> SimplicialComplex {
    let v = rng.gen_range(1..=10);
    let faces: Vec<Simplex> = (0..rng.gen_range(0..=8))
        .filter_map(|_| {
            let size = rng.gen_range(1..=5.min(v));
            let mut mask = 0u64;
            while (mask.count_ones() as usize) < size {
                mask |= 1 << rng.gen_range(0..v);
            }
            Simplex::from_mask(mask)
        })
        .collect();
    SimplicialComplex::from_maximal_faces(v, faces).unwrap()
}

/// Cyclic coordinate descent for `(1/2n)‖y − Xb‖² + λ‖b‖₁`.
pub fn cd_lasso(x: &DMatrix<f64>, y: &DVector<f64>, lambda: f64) -> Vec<f64> {
    let (n, p) = x.shape();
    let nf = n as f64;
    let g = x.transpose() * x / nf;
    let c = x.transpose() * y / nf;
    let mut b = DVector::<f64>::zeros(p);
    for _ in 0..200_000 {
        let mut delta: f64 = 0.0;
        for j in 0..p {
            if g[(j, j)] <= 0.0 {
                continue;
            }
            let rho = c[j] - g.column(j).dot(&b) + g[(j, j)] * b[j];
            let new = soft(rho, lambda) / g[(j, j)];
            delta = delta.max((new - b[j]).abs());
            b[j] = new;
        }
        if delta < 1e-14 {
            break;
        }
    }
    b.iter().copied().collect()
}

fn soft(z: f64, t: f64) -> f64 {
    z.signum() * (z.abs() - t).max(0.0)
}

/// Gaussian design with a random amount of column correlation and a
/// sparse-ish linear response.
pub fn random_regression<R: Rng>(rng: &mut R, n: usize, p: usize) -> (DMatrix<f64>, DVector<f64>) {
    let shared = rng.gen_range(0.0..0.7);
    let common = DVector::<f64>::from_fn(n, |_, _| rng.sample(StandardNormal));
    let x = DMatrix::from_fn(n, p, |i, _| {
        let e: f64 = rng.sample(StandardNormal);
        shared * common[i] + e
    });
    let beta = DVector::from_fn(p, |_, _| if rng.gen_bool(0.4) { rng.gen_range(-3.0..3.0) } else { 0.0 });
    let noise = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let mut y = &x * beta + noise;
    let m = y.mean();
    y.add_scalar_mut(-m);
    let mut x = x;
    for mut col in x.column_iter_mut() {
        let m = col.mean();
        col.add_scalar_mut(-m);
    }
    (x, y)
}

/// Garrote objective `(1/2n)‖y − Z d‖² + λ Σ d` on two columns minimised by
/// a coarse grid, then two rounds of finer local grids.
pub fn garrote_grid_2d(z: &DMatrix<f64>, y: &DVector<f64>, lambda: f64) -> [f64; 2] {
    let n = z.nrows() as f64;
    let g = z.transpose() * z / n;
    let b = z.transpose() * y / n;
    let f = |d0: f64, d1: f64| {
        0.5 * (g[(0, 0)] * d0 * d0 + 2.0 * g[(0, 1)] * d0 * d1 + g[(1, 1)] * d1 * d1)
            - b[0] * d0
            - b[1] * d1
            + lambda * (d0 + d1)
    };
    let mut best = (0.0, 0.0, f(0.0, 0.0));
    let scan = |lo: [f64; 2], hi: [f64; 2], steps: usize, best: &mut (f64, f64, f64)| {
        for i in 0..=steps {
            let d0 = (lo[0] + (hi[0] - lo[0]) * i as f64 / steps as f64).max(0.0);
            for j in 0..=steps {
                let d1 = (lo[1] + (hi[1] - lo[1]) * j as f64 / steps as f64).max(0.0);
                let v = f(d0, d1);
                if v < best.2 {
                    *best = (d0, d1, v);
                }
            }
        }
    };
    scan([0.0, 0.0], [3.0, 3.0], 600, &mut best);
    for width in [0.01, 0.0002] {
        let c = [best.0, best.1];
        scan([c[0] - width, c[1] - width], [c[0] + width, c[1] + width], 200, &mut best);
    }
    [best.0, best.1]
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

/// Boundary entries, `∂∂ = 0`, rank against elimination, rank–nullity and
/// the Euler characteristic on one random complex.
pub fn check_complex(seed: u64) -> Result<(), String> {
    use rand::SeedableRng;
    use topolasso::homology::{betti_numbers, boundary_matrix, z2_reduce};

    let c = random_complex(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
    let top = c.dim().unwrap_or(0);
    for d in 1..=top {
        let ours = boundary_matrix(&c, d).map_err(|e| e.to_string())?;
        let dense = dense_boundary(&c, d);
        for (i, row) in dense.iter().enumerate() {
            for (j, &b) in row.iter().enumerate() {
                ensure!(ours.entries.get(i, j) == b, "seed {seed}: ∂_{d} entry ({i},{j})");
            }
        }
        ensure!(z2_reduce(&ours) == z2_rank(&dense), "seed {seed}: rank of ∂_{d}");
        if d < top {
            let next = dense_boundary(&c, d + 1);
            ensure!(dense_product_is_zero(&dense, &next), "seed {seed}: ∂_{d}∂_{} ≠ 0", d + 1);
            let upper = boundary_matrix(&c, d + 1).map_err(|e| e.to_string())?;
            ensure!(ours.entries.mul(&upper.entries).is_zero(), "seed {seed}: packed ∂∂ ≠ 0");
        }
    }
    let (betti, summary) = betti_numbers(&c, top);
    for d in 0..=top {
        let s = &summary.dims[d];
        let image_below = if d == 0 { 0 } else { summary.dims[d - 1].boundaries };
        ensure!(s.simplices == s.cycles + image_below, "seed {seed}: rank–nullity in dimension {d}");
        ensure!(s.cycles >= s.boundaries, "seed {seed}: negative Betti number in dimension {d}");
    }
    let alt = |v: &[usize]| -> i64 { v.iter().enumerate().map(|(d, &m)| if d % 2 == 0 { m as i64 } else { -(m as i64) }).sum() };
    ensure!(alt(&c.face_counts()) == alt(betti.values()), "seed {seed}: Euler characteristic");
    Ok(())
}

fn sign(v: f64) -> i8 {
    if v > 1e-9 {
        1
    } else if v < -1e-9 {
        -1
    } else {
        0
    }
}

/// Allowed `(P1, P3, P2)` sign patterns for a coefficient at two
/// consecutive breakpoints and a point strictly between them.
pub const SIGN_PATTERNS: [(i8, i8, i8); 7] =
    [(1, 1, 1), (1, 1, 0), (0, 1, 1), (0, -1, -1), (-1, -1, 0), (-1, -1, -1), (0, 0, 0)];

/// Random regression instance `seed`: `n ≤ 100`, at most 50 columns; every
/// fourth instance is an interaction design from a few raw variables.
pub fn lasso_instance(seed: u64) -> (DMatrix<f64>, DVector<f64>) {
    use rand::SeedableRng;
    use topolasso::{build_design, enumerate_candidate_terms, Dataset, DesignConfig};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    if seed % 4 == 3 {
        let vars = rng.gen_range(3..=5);
        let n = rng.gen_range(40..=100);
        let (x, y) = random_regression(&mut rng, n, vars);
        let terms = enumerate_candidate_terms(vars, 3).unwrap();
        let d = build_design(&Dataset::new(x, y).unwrap(), &terms, DesignConfig::standard()).unwrap();
        return (d.x, d.y);
    }
    let n = rng.gen_range(20..=100);
    let p = rng.gen_range(1..=50.min(n - 5));
    random_regression(&mut rng, n, p)
}

/// KKT at every breakpoint, sign patterns between breakpoints, agreement
/// with coordinate descent at 20 random penalties, and full shrinkage above
/// `λ_max`.
pub fn check_lasso_instance(seed: u64) -> Result<(), String> {
    use rand::SeedableRng;
    use topolasso::{lasso_path, ModelSupport, PathScaling, Term};

    let (x, y) = lasso_instance(seed);
    let (n, p) = x.shape();
    let terms = ModelSupport::from_terms(p.max(1), (0..p).map(|j| Term::from_indices(&[j]).unwrap()))
        .map_err(|e| e.to_string())?;
    let path = lasso_path(&x, &y, &terms, PathScaling::PerObservation).map_err(|e| e.to_string())?;
    let nf = n as f64;
    let corr = x.transpose() * &y / nf;
    let lmax = corr.amax();
    let tol = 1e-8 * lmax.max(1.0);
    ensure!((path.lambda_max() - lmax).abs() <= tol, "seed {seed}: λ_max {} vs {lmax}", path.lambda_max());

    for bp in &path.breakpoints {
        let b = DVector::from_column_slice(&bp.coefficients);
        let c = x.transpose() * (&y - &x * &b) / nf;
        for j in 0..p {
            ensure!(c[j].abs() <= bp.lambda + tol, "seed {seed}: |c_{j}| = {} > λ = {}", c[j].abs(), bp.lambda);
            if b[j] != 0.0 {
                ensure!((c[j] - bp.lambda * b[j].signum()).abs() <= tol, "seed {seed}: active c_{j} = {} at λ = {}", c[j], bp.lambda);
            }
        }
    }

    for w in path.breakpoints.windows(2) {
        let mid = 0.5 * (w[0].lambda + w[1].lambda);
        let m = cd_lasso(&x, &y, mid);
        for j in 0..p {
            let pattern = (sign(w[0].coefficients[j]), sign(m[j]), sign(w[1].coefficients[j]));
            let mirrored = (pattern.2, pattern.1, pattern.0);
            ensure!(
                SIGN_PATTERNS.contains(&pattern) || SIGN_PATTERNS.contains(&mirrored),
                "seed {seed}: sign pattern {pattern:?} for column {j} on [{}, {}]",
                w[0].lambda,
                w[1].lambda
            );
        }
    }

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xABCD);
    for _ in 0..20 {
        let lambda = rng.gen_range(0.0..1.2) * lmax;
        let ours = path.coefficients_at(lambda).map_err(|e| e.to_string())?;
        let oracle = cd_lasso(&x, &y, lambda);
        for j in 0..p {
            ensure!((ours[j] - oracle[j]).abs() <= 1e-6, "seed {seed}: λ = {lambda}, column {j}: {} vs {}", ours[j], oracle[j]);
        }
    }

    for factor in [1.0 + 1e-9, 1.5, 10.0] {
        let above = path.coefficients_at(lmax * factor).map_err(|e| e.to_string())?;
        ensure!(above.iter().all(|v| *v == 0.0), "seed {seed}: nonzero coefficients above λ_max");
        ensure!(cd_lasso(&x, &y, lmax * factor).iter().all(|v| *v == 0.0), "seed {seed}: oracle disagrees on λ_max");
    }
    Ok(())
}

/// Garrote endpoints on a random instance; on two columns also the grid
/// oracle at a few penalties.
pub fn check_garrote_instance(seed: u64) -> Result<(), String> {
    use rand::SeedableRng;
    use topolasso::regression::nonnegative_garrote;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let p = if seed % 2 == 0 { 2 } else { rng.gen_range(1..=8) };
    let n = rng.gen_range(p + 10..=80);
    let (x, y) = random_regression(&mut rng, n, p);
    let g = nonnegative_garrote(&x, &y, None).map_err(|e| e.to_string())?;
    let last = g.lambdas.len() - 1;
    ensure!(g.lambdas[last] == 0.0, "seed {seed}: grid does not end at 0");
    ensure!(g.shrink[last].iter().all(|d| *d == 1.0), "seed {seed}: D ≠ 1 at λ = 0");
    ensure!(g.shrink[0].iter().all(|d| *d == 0.0), "seed {seed}: D ≠ 0 at λ_max");
    let big = nonnegative_garrote(&x, &y, Some(&[g.lambdas[0] * 10.0])).map_err(|e| e.to_string())?;
    ensure!(big.shrink[0].iter().all(|d| *d == 0.0), "seed {seed}: D ≠ 0 at large λ");
    if p == 2 {
        let mut z = x.clone();
        for j in 0..2 {
            z.column_mut(j).scale_mut(g.ols[j]);
        }
        let picks = [g.lambdas[0] * 0.8, g.lambdas[0] * 0.4, g.lambdas[0] * 0.1];
        let fit = nonnegative_garrote(&x, &y, Some(&picks)).map_err(|e| e.to_string())?;
        for (i, &lambda) in picks.iter().enumerate() {
            let oracle = garrote_grid_2d(&z, &y, lambda);
            for j in 0..2 {
                ensure!(
                    (fit.shrink[i][j] - oracle[j]).abs() <= 1e-3,
                    "seed {seed}: λ = {lambda}, d_{j} = {} vs grid {}",
                    fit.shrink[i][j],
                    oracle[j]
                );
            }
        }
    }
    Ok(())
}

/// Annotated path of a random regression with an interaction signal, split
/// 60/20/20, candidate terms up to order 3.
pub fn selection_instance(seed: u64) -> topolasso::AnnotatedPath {
    use rand::SeedableRng;
    use topolasso::regression::build_split_design;
    use topolasso::selection::AnnotationContext;
    use topolasso::{annotate_path, enumerate_candidate_terms, lasso_path, Dataset, DesignConfig, PathScaling};

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let p = rng.gen_range(3..=6);
    let n = rng.gen_range(60..=150);
    let (x, y) = random_regression(&mut rng, n, p);
    // An interaction signal makes the paths visit non-trivial complexes.
    let y = DVector::from_fn(n, |i, _| y[i] + 2.0 * x[(i, 0)] * x[(i, 1)]);
    let data = Dataset::new(x, y).unwrap().with_random_splits([0.6, 0.2, 0.2], seed).unwrap();
    let terms = enumerate_candidate_terms(p, 3).unwrap();
    let d = build_split_design(&data, &terms, DesignConfig::standard()).unwrap();
    let path = lasso_path(&d.train.x, &d.train.y, &terms, PathScaling::PerObservation).unwrap();
    annotate_path(
        &path,
        AnnotationContext {
            train: (&d.train.x, &d.train.y),
            validation: (&d.validation.0, &d.validation.1),
            held_out: Some((&d.test.0, &d.test.1)),
            betti_len: 3,
            truth: None,
        },
    )
    .unwrap()
}

/// μ = 0 against LARS-OLS, surfaces inside [0, 1] and argmin invariance
/// under a positive rescaling of the errors, on one instance.
pub fn check_selection_instance(seed: u64) -> Result<(), String> {
    use topolasso::selection::{
        compound_criterion, maic, select_lars_ols, select_model, CriterionConfig, ErrorMode, MuSelection,
    };

    let cfg = |mu: Vec<f64>, w: Vec<f64>| {
        CriterionConfig::new(mu, w, ErrorMode::Validation, MuSelection::Joint).map_err(|e| e.to_string())
    };
    let a = selection_instance(seed);
    let cc = select_model(&a, &cfg(vec![0.0], vec![1.0, 1.0, 1.0])?).map_err(|e| e.to_string())?;
    let lo = select_lars_ols(&a, ErrorMode::Validation).map_err(|e| e.to_string())?;
    ensure!(cc.breakpoint == lo.breakpoint, "seed {seed}: μ = 0 picks {} vs LARS-OLS {}", cc.breakpoint, lo.breakpoint);
    ensure!(cc.coefficients == lo.coefficients, "seed {seed}: μ = 0 coefficients differ from LARS-OLS");

    let grid: Vec<f64> = (0..=20).map(|i| i as f64 / 20.0).collect();
    for w in [vec![1.0, 1.0, 1.0], vec![0.0, 1.0, 1.0]] {
        let c = cfg(grid.clone(), w)?;
        for s in [compound_criterion(&a, &c), maic(&a, &c)] {
            let s = s.map_err(|e| e.to_string())?;
            for v in s.values.iter().flatten().flatten() {
                ensure!((0.0..=1.0).contains(v), "seed {seed}: criterion value {v} outside [0, 1]");
            }
        }
        let mut scaled = a.clone();
        for e in scaled.entries.iter_mut() {
            if let Some(r) = e.refit_errors.as_mut() {
                r.validation_rss *= 37.5;
            }
        }
        let x = select_model(&a, &c).map_err(|e| e.to_string())?;
        let y = select_model(&scaled, &c).map_err(|e| e.to_string())?;
        ensure!((x.breakpoint, x.mu_star) == (y.breakpoint, y.mu_star), "seed {seed}: rescaled errors move the argmin");
    }
    Ok(())
}

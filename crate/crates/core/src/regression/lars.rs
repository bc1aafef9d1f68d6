//! Least angle regression with the LASSO modification.
//!
//! Works on the unscaled objective `½‖y − Xβ‖² + t‖β‖₁`. Along the path
//! every active variable keeps `|x_jᵀr| = t`; the direction solves
//! `X_Aᵀ X_A w = s_A`, so all active correlations shrink at unit rate. A
//! step ends when an inactive variable reaches the same correlation (it
//! enters), an active coefficient reaches zero (it is dropped) or `t`
//! reaches zero.

use nalgebra::{DMatrix, DVector};

/// Kink of the unscaled path.
#[derive(Clone, Debug)]
pub(crate) struct RawBreakpoint {
    pub t: f64,
    pub beta: DVector<f64>,
}

const MAX_STEPS_FACTOR: usize = 8;

pub(crate) fn lars_lasso(x: &DMatrix<f64>, y: &DVector<f64>) -> Vec<RawBreakpoint> {
    let p = x.ncols();
    let gram = x.transpose() * x;
    let xty = x.transpose() * y;
    let mut beta = DVector::<f64>::zeros(p);
    let mut corr = xty.clone();

    let c0 = corr.amax();
    let mut out = vec![RawBreakpoint { t: c0, beta: beta.clone() }];
    if !(c0 > 0.0) {
        return out;
    }
    let tiny = 1e-12 * c0;
    let col_norm2: Vec<f64> = (0..p).map(|j| gram[(j, j)]).collect();

    let mut active: Vec<usize> = Vec::new();
    let mut signs: Vec<f64> = Vec::new();
    let mut is_active = vec![false; p];
    // Collinear with the active set or identically zero.
    let mut excluded: Vec<bool> = col_norm2.iter().map(|&g| g <= 1e-14 * max_of(&col_norm2)).collect();
    let mut level = c0;
    let mut entering: Option<usize> = argmax_abs(&corr, &is_active, &excluded);
    // A dropped variable sits exactly on the boundary with its old sign;
    // only an entry with the opposite sign is admissible on the next step.
    let mut just_dropped: Option<(usize, f64)> = None;

    for _ in 0..MAX_STEPS_FACTOR * (p + 1) {
        if let Some(j) = entering.take() {
            if schur_complement(&gram, &active, j) <= 1e-10 * col_norm2[j] {
                excluded[j] = true;
            } else {
                active.push(j);
                signs.push(corr[j].signum());
                is_active[j] = true;
            }
        }
        if active.is_empty() {
            entering = argmax_abs(&corr, &is_active, &excluded);
            if entering.is_none() {
                break;
            }
            continue;
        }

        let Some(w) = solve_active(&gram, &active, &signs) else {
            // Numerically singular: drop the newest variable for good.
            let j = active.pop().expect("nonempty");
            signs.pop();
            is_active[j] = false;
            excluded[j] = true;
            continue;
        };
        // a_j = x_jᵀ u with u = X_A w.
        let mut a = DVector::<f64>::zeros(p);
        for (k, &i) in active.iter().enumerate() {
            a.axpy(w[k], &gram.column(i).into_owned(), 1.0);
        }

        let mut gamma = level;
        let mut event = Event::Zero;
        for j in 0..p {
            if is_active[j] || excluded[j] {
                continue;
            }
            let blocked = just_dropped.filter(|(i, _)| *i == j).map(|(_, s)| s);
            for (sign, num, den) in [(1.0, level - corr[j], 1.0 - a[j]), (-1.0, level + corr[j], 1.0 + a[j])] {
                if den > 1e-12 && blocked != Some(sign) {
                    let g = num / den;
                    if g > tiny && g < gamma - tiny {
                        gamma = g;
                        event = Event::Enter(j);
                    }
                }
            }
        }
        for (k, &i) in active.iter().enumerate() {
            if w[k] != 0.0 {
                let g = -beta[i] / w[k];
                if g > tiny && g < gamma - tiny {
                    gamma = g;
                    event = Event::Drop(k);
                }
            }
        }
        if level - gamma <= tiny {
            gamma = level;
            event = Event::Zero;
        }

        for (k, &i) in active.iter().enumerate() {
            beta[i] += gamma * w[k];
        }
        level -= gamma;
        corr = &xty - &gram * &beta;
        just_dropped = None;

        match event {
            Event::Zero => {
                out.push(RawBreakpoint { t: 0.0, beta: beta.clone() });
                break;
            }
            Event::Enter(j) => entering = Some(j),
            Event::Drop(k) => {
                let i = active.remove(k);
                let s = signs.remove(k);
                beta[i] = 0.0;
                is_active[i] = false;
                just_dropped = Some((i, s));
            }
        }
        out.push(RawBreakpoint { t: level, beta: beta.clone() });
    }
    out
}

#[derive(Clone, Copy, Debug)]
enum Event {
    Enter(usize),
    Drop(usize),
    Zero,
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().copied().fold(0.0, f64::max)
}

/// Largest `|corr_j|` among candidates; ties go to the lowest index.
fn argmax_abs(corr: &DVector<f64>, active: &[bool], excluded: &[bool]) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for j in 0..corr.len() {
        if active[j] || excluded[j] {
            continue;
        }
        let v = corr[j].abs();
        if best.map_or(true, |(_, b)| v > b) {
            best = Some((j, v));
        }
    }
    best.filter(|(_, v)| *v > 0.0).map(|(j, _)| j)
}

fn active_gram(gram: &DMatrix<f64>, active: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(active.len(), active.len(), |a, b| gram[(active[a], active[b])])
}

/// `G_jj − g_jᵀ G_AA⁻¹ g_j`; zero when column `j` is in the active span.
fn schur_complement(gram: &DMatrix<f64>, active: &[usize], j: usize) -> f64 {
    if active.is_empty() {
        return gram[(j, j)];
    }
    let g = DVector::from_iterator(active.len(), active.iter().map(|&i| gram[(i, j)]));
    match active_gram(gram, active).cholesky() {
        Some(ch) => gram[(j, j)] - g.dot(&ch.solve(&g)),
        None => 0.0,
    }
}

fn solve_active(gram: &DMatrix<f64>, active: &[usize], signs: &[f64]) -> Option<DVector<f64>> {
    let ch = active_gram(gram, active).cholesky()?;
    let s = DVector::from_column_slice(signs);
    let w = ch.solve(&s);
    w.iter().all(|v| v.is_finite()).then_some(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_variable_path() {
        let x = DMatrix::from_column_slice(4, 1, &[1.0, -1.0, 2.0, -2.0]);
        let y = x.column(0).into_owned() * 0.5;
        let path = lars_lasso(&x, &y);
        assert_eq!(path.len(), 2);
        assert!((path[0].t - 5.0).abs() < 1e-12);
        assert!(path[1].t == 0.0 && (path[1].beta[0] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_response_has_one_breakpoint() {
        let x = DMatrix::from_fn(5, 3, |i, j| ((i + 1) * (j + 2)) as f64 % 3.0);
        let path = lars_lasso(&x, &DVector::zeros(5));
        assert_eq!(path.len(), 1);
        assert_eq!(path[0].t, 0.0);
    }

    #[test]
    fn duplicated_column_is_excluded() {
        let x = DMatrix::from_fn(6, 2, |i, _| [1.0, -2.0, 0.5, 3.0, -1.5, -1.0][i]);
        let y = DVector::from_fn(6, |i, _| x[(i, 0)] * 2.0);
        let path = lars_lasso(&x, &y);
        let last = &path.last().unwrap().beta;
        assert_eq!(path.last().unwrap().t, 0.0);
        assert!((last[0] - 2.0).abs() < 1e-10 && last[1] == 0.0);
    }
}

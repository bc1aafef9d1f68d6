use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_arg, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Validation,
    Test,
}

/// Raw predictors, response and optional per-row split tags.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    x: DMatrix<f64>,
    y: DVector<f64>,
    splits: Option<Vec<Split>>,
}

impl Dataset {
    pub fn new(x: DMatrix<f64>, y: DVector<f64>) -> Result<Self> {
        if x.nrows() != y.len() {
            return Err(Error::DimensionMismatch { expected: x.nrows(), found: y.len() });
        }
        if x.nrows() < 2 {
            return Err(Error::InvalidInput("a dataset needs at least two rows".into()));
        }
        if x.iter().chain(y.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("dataset contains non-finite values".into()));
        }
        Ok(Self { x, y, splits: None })
    }

    pub fn with_splits(mut self, splits: Vec<Split>) -> Result<Self> {
        if splits.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: splits.len() });
        }
        self.splits = Some(splits);
        Ok(self)
    }

    /// Tags rows train/validation/test after a seeded shuffle, with the
    /// given fractions (which must sum to one).
    pub fn with_random_splits(self, fractions: [f64; 3], seed: u64) -> Result<Self> {
        let counts = split_counts(self.n(), fractions)?;
        let mut order: Vec<usize> = (0..self.n()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut tags = vec![Split::Train; self.n()];
        for (pos, &row) in order.iter().enumerate() {
            tags[row] = if pos < counts[0] {
                Split::Train
            } else if pos < counts[0] + counts[1] {
                Split::Validation
            } else {
                Split::Test
            };
        }
        self.with_splits(tags)
    }

    /// Tags the leading rows train, then validation, then test.
    pub fn with_contiguous_splits(self, fractions: [f64; 3]) -> Result<Self> {
        let counts = split_counts(self.n(), fractions)?;
        let tags = (0..self.n())
            .map(|i| {
                if i < counts[0] {
                    Split::Train
                } else if i < counts[0] + counts[1] {
                    Split::Validation
                } else {
                    Split::Test
                }
            })
            .collect();
        self.with_splits(tags)
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    pub fn p(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn y(&self) -> &DVector<f64> {
        &self.y
    }

    pub fn splits(&self) -> Option<&[Split]> {
        self.splits.as_deref()
    }

    /// Row indices carrying `split`; without tags every row is training.
    pub fn rows(&self, split: Split) -> Vec<usize> {
        match &self.splits {
            None if split == Split::Train => (0..self.n()).collect(),
            None => Vec::new(),
            Some(tags) => (0..self.n()).filter(|&i| tags[i] == split).collect(),
        }
    }

    pub fn subset(&self, rows: &[usize]) -> (DMatrix<f64>, DVector<f64>) {
        (self.x.select_rows(rows), self.y.select_rows(rows))
    }
}

pub(crate) fn split_counts(n: usize, fractions: [f64; 3]) -> Result<[usize; 3]> {
    if fractions.iter().any(|f| !(0.0..=1.0).contains(f)) {
        return Err(invalid_arg("split fractions must lie in [0, 1]"));
    }
    let sum: f64 = fractions.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(invalid_arg(format!("split fractions sum to {sum}, not 1")));
    }
    let train = (fractions[0] * n as f64).round() as usize;
    let validation = ((fractions[1] * n as f64).round() as usize).min(n - train);
    let test = n - train - validation;
    if train < 2 {
        return Err(invalid_arg("the training split needs at least two rows"));
    }
    Ok([train, validation, test])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy(n: usize) -> Dataset {
        let x = DMatrix::from_fn(n, 2, |i, j| (i * 3 + j) as f64);
        let y = DVector::from_fn(n, |i, _| i as f64);
        Dataset::new(x, y).unwrap()
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        let x = DMatrix::zeros(3, 1);
        assert!(Dataset::new(x.clone(), DVector::zeros(2)).is_err());
        let mut y = DVector::zeros(3);
        y[1] = f64::NAN;
        assert!(Dataset::new(x, y).is_err());
    }

    #[test]
    fn random_splits_partition_rows() {
        let d = toy(625).with_random_splits([0.6, 0.2, 0.2], 7).unwrap();
        let (a, b, c) = (d.rows(Split::Train), d.rows(Split::Validation), d.rows(Split::Test));
        assert_eq!((a.len(), b.len(), c.len()), (375, 125, 125));
        let mut all: Vec<usize> = a.into_iter().chain(b).chain(c).collect();
        all.sort_unstable();
        assert_eq!(all, (0..625).collect::<Vec<_>>());
    }

    #[test]
    fn splits_are_seed_deterministic() {
        let a = toy(50).with_random_splits([0.6, 0.2, 0.2], 3).unwrap();
        let b = toy(50).with_random_splits([0.6, 0.2, 0.2], 3).unwrap();
        assert_eq!(a.splits(), b.splits());
    }

    #[test]
    fn fractions_must_sum_to_one() {
        assert!(toy(10).with_random_splits([0.5, 0.2, 0.2], 1).is_err());
    }
}

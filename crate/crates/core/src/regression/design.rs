use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::dataset::{Dataset, Split};
use crate::error::{Error, Result};
use crate::terms::{ModelSupport, Term};

/// What interaction columns are multiplied from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InteractionBase {
    /// Products of the standardized main effects.
    Standardized,
    /// Products of the raw variables.
    Raw,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResponseScaling {
    /// Mean 0, sample standard deviation 1.
    Standardize,
    /// Mean 0 only.
    Center,
    None,
}

/// Preprocessing applied when a candidate model is turned into columns.
///
/// Main effects are always centered and scaled to unit sample standard
/// deviation; interaction columns are always centered and never rescaled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DesignConfig {
    pub interactions: InteractionBase,
    pub response: ResponseScaling,
}

impl DesignConfig {
    /// Interactions of standardized mains, standardized response.
    pub fn standard() -> Self {
        Self { interactions: InteractionBase::Standardized, response: ResponseScaling::Standardize }
    }

    /// Interactions of raw variables, as R's `lars` front-end sees them.
    pub fn lars_compat() -> Self {
        Self { interactions: InteractionBase::Raw, response: ResponseScaling::Standardize }
    }

    pub fn with_response(mut self, response: ResponseScaling) -> Self {
        self.response = response;
        self
    }
}

impl Default for DesignConfig {
    fn default() -> Self {
        Self::standard()
    }
}

/// Column statistics learned on the training rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub config: DesignConfig,
    pub terms: ModelSupport,
    pub main_mean: Vec<f64>,
    pub main_sd: Vec<f64>,
    /// Centering offset per design column, in term order.
    pub column_mean: Vec<f64>,
    pub response_mean: f64,
    pub response_scale: f64,
}

impl Standardizer {
    /// Learns statistics from `x` (raw predictors) and `y`.
    pub fn fit(
        x: &DMatrix<f64>,
        y: &DVector<f64>,
        terms: &ModelSupport,
        config: DesignConfig,
    ) -> Result<Self> {
        let (n, p) = x.shape();
        if terms.p() != p {
            return Err(Error::DimensionMismatch { expected: p, found: terms.p() });
        }
        if n < 2 {
            return Err(Error::InvalidInput("standardization needs at least two rows".into()));
        }
        let mut main_mean = Vec::with_capacity(p);
        let mut main_sd = Vec::with_capacity(p);
        for j in 0..p {
            let (m, s) = mean_sd(x.column(j).iter().copied());
            // A zero-variance variable only matters when the model uses it.
            if s <= 1e-12 * (1.0 + m.abs()) && terms.iter().any(|t| t.mask() >> j & 1 == 1) {
                return Err(Error::DegenerateColumn { variable: j + 1 });
            }
            main_mean.push(m);
            main_sd.push(if s > 0.0 { s } else { 1.0 });
        }
        let mut st = Self {
            config,
            terms: terms.clone(),
            main_mean,
            main_sd,
            column_mean: vec![0.0; terms.len()],
            response_mean: 0.0,
            response_scale: 1.0,
        };
        let uncentered = st.uncentered_columns(x);
        st.column_mean = (0..terms.len()).map(|j| uncentered.column(j).mean()).collect();
        let (ym, ys) = mean_sd(y.iter().copied());
        match config.response {
            ResponseScaling::Standardize => {
                st.response_mean = ym;
                st.response_scale = if ys > 0.0 { ys } else { 1.0 };
            }
            ResponseScaling::Center => st.response_mean = ym,
            ResponseScaling::None => {}
        }
        Ok(st)
    }

    fn uncentered_columns(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let n = x.nrows();
        let z = DMatrix::from_fn(n, x.ncols(), |i, j| (x[(i, j)] - self.main_mean[j]) / self.main_sd[j]);
        let base = match self.config.interactions {
            InteractionBase::Standardized => &z,
            InteractionBase::Raw => x,
        };
        let mut out = DMatrix::zeros(n, self.terms.len());
        for (c, t) in self.terms.iter().enumerate() {
            let src = if t.degree() == 1 { &z } else { base };
            for i in 0..n {
                out[(i, c)] = t.indices().map(|v| src[(i, v)]).product();
            }
        }
        out
    }

    /// Design columns for raw predictor rows using the training statistics.
    pub fn transform_x(&self, x: &DMatrix<f64>) -> DMatrix<f64> {
        let mut out = self.uncentered_columns(x);
        for (j, m) in self.column_mean.iter().enumerate() {
            out.column_mut(j).add_scalar_mut(-m);
        }
        out
    }

    pub fn transform_y(&self, y: &DVector<f64>) -> DVector<f64> {
        y.map(|v| (v - self.response_mean) / self.response_scale)
    }

    /// Re-expresses `Σ θ_t Π_{j∈t} x_j` over the raw predictors as
    /// coefficients on the design columns (intercepts dropped). Each factor
    /// `x_j = m_j + s_j z_j` is expanded, so every sub-term of a true term
    /// must be a design column when interactions are built from standardized
    /// mains.
    pub fn coefficients_to_design(&self, support: &ModelSupport, coefficients: &[f64]) -> Result<Vec<f64>> {
        if coefficients.len() != support.len() {
            return Err(Error::DimensionMismatch { expected: support.len(), found: coefficients.len() });
        }
        let mut out = vec![0.0; self.terms.len()];
        let mut add = |mask: u64, value: f64| -> Result<()> {
            let t = Term::from_mask(mask).expect("nonempty mask");
            let j = self
                .terms
                .position(t)
                .ok_or_else(|| Error::InvalidArgument(format!("term {} is not a design column", t.label())))?;
            out[j] += value;
            Ok(())
        };
        for (t, &theta) in support.iter().zip(coefficients) {
            if t.degree() > 1 && self.config.interactions == InteractionBase::Raw {
                add(t.mask(), theta)?;
                continue;
            }
            let full = t.mask();
            // Nonempty submasks of the term.
            let mut sub = full;
            while sub != 0 {
                let factor: f64 = t
                    .indices()
                    .map(|j| if sub >> j & 1 == 1 { self.main_sd[j] } else { self.main_mean[j] })
                    .product();
                add(sub, theta * factor)?;
                sub = (sub - 1) & full;
            }
        }
        Ok(out.into_iter().map(|v| v / self.response_scale).collect())
    }

    /// Maps a standardized response back to the original units.
    pub fn inverse_y(&self, y: f64) -> f64 {
        y * self.response_scale + self.response_mean
    }
}

/// Design columns aligned to a support's canonical term order, plus the
/// statistics that produced them.
#[derive(Clone, Debug)]
pub struct DesignMatrix {
    pub x: DMatrix<f64>,
    pub y: DVector<f64>,
    pub standardizer: Standardizer,
}

impl DesignMatrix {
    pub fn terms(&self) -> &ModelSupport {
        &self.standardizer.terms
    }

    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    /// Columns and response for other raw rows, using training statistics.
    pub fn transform(&self, x: &DMatrix<f64>, y: &DVector<f64>) -> (DMatrix<f64>, DVector<f64>) {
        (self.standardizer.transform_x(x), self.standardizer.transform_y(y))
    }
}

/// Builds the training design. Statistics come from the training rows only
/// (all rows when the dataset carries no split tags).
pub fn build_design(data: &Dataset, terms: &ModelSupport, config: DesignConfig) -> Result<DesignMatrix> {
    let rows = data.rows(Split::Train);
    let (x, y) = data.subset(&rows);
    let standardizer = Standardizer::fit(&x, &y, terms, config)?;
    Ok(DesignMatrix { x: standardizer.transform_x(&x), y: standardizer.transform_y(&y), standardizer })
}

/// Training design together with the validation and test rows transformed
/// by the training statistics.
#[derive(Clone, Debug)]
pub struct SplitDesign {
    pub train: DesignMatrix,
    pub validation: (DMatrix<f64>, DVector<f64>),
    pub test: (DMatrix<f64>, DVector<f64>),
}

pub fn build_split_design(data: &Dataset, terms: &ModelSupport, config: DesignConfig) -> Result<SplitDesign> {
    let train = build_design(data, terms, config)?;
    let transform = |split| {
        let (x, y) = data.subset(&data.rows(split));
        train.transform(&x, &y)
    };
    let validation = transform(Split::Validation);
    let test = transform(Split::Test);
    Ok(SplitDesign { train, validation, test })
}

/// Mean and sample (n - 1) standard deviation.
pub(crate) fn mean_sd(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, var.sqrt())
}

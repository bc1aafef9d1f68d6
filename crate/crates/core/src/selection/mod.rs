//! Model selection along a LASSO path.
//!
//! Each breakpoint is annotated with the Betti numbers of its hierarchical
//! closure and an OLS refit of its raw support. The compound criterion
//! blends the normalised refit error with a normalised weighted Betti score;
//! MAIC uses the support size instead. Error terms are validation residual
//! sums of squares on real data, or the model error against known
//! coefficients in simulations (used as is, not squared again).

mod annotate;
mod criterion;
mod model_error;

pub use annotate::{annotate_path, AnnotatedPath, AnnotationContext, ErrorMode, Errors, PathEntry};
pub use criterion::{
    compound_criterion, default_mu_grid, maic, select_lars_ols, select_lasso, select_maic, select_model,
    support_of, BettiPreset, CriterionConfig, CriterionSurface, MethodOutcome, MuSelection, SelectionReport,
};
pub use model_error::{model_error, second_moment};

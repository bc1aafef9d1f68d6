//! Design construction and sparse regression.
//!
//! Main effects are centered and scaled; interaction columns are formed as
//! products and then centered. The LASSO path is computed exactly by LARS
//! with the LASSO modification, and every downstream method (OLS refits,
//! the non-negative garrote, cross-validated LASSO) reads off the same
//! design.

mod cv;
mod dataset;
mod design;
mod garrote;
mod lars;
mod ols;
mod path;

pub use cv::{cv_lasso, CvResult};
pub(crate) use cv::cv_on_path;
pub use dataset::{Dataset, Split};
pub(crate) use dataset::split_counts;
pub(crate) use design::mean_sd;
pub use design::{
    build_design, build_split_design, DesignConfig, DesignMatrix, InteractionBase, ResponseScaling,
    SplitDesign, Standardizer,
};
pub use garrote::{nonnegative_garrote, GarrotePath, DEFAULT_GRID_SIZE};
pub use ols::{ols_refit, OlsFit};
pub use path::{lasso_path, Breakpoint, LassoPath, PathScaling, BREAKPOINT_TOLERANCE, SUPPORT_TOLERANCE};

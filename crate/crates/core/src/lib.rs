//! Topology-aware model selection for square-free polynomial regression.
//!
//! The crate is organised bottom-up:
//!
//! * [`terms`] - square-free interaction terms, hierarchical closure and the
//!   map from a model support to a simplicial complex.
//! * [`homology`] - Z2 boundary matrices, rank reduction and Betti numbers.
//! * [`regression`] - design construction, the LARS/LASSO path, OLS refits,
//!   the non-negative garrote and cross-validated LASSO.
//! * [`selection`] - Betti-annotated paths, the compound criterion, MAIC and
//!   model error.
//! * [`simulate`] - synthetic designs, the four model presets and the
//!   replication harness.
//!
//! ```
//! use topolasso::terms::{ModelSupport, Term};
//! use topolasso::homology::betti_numbers;
//!
//! // x1, x3, x1x2, x5x6 closes to three components.
//! let support = ModelSupport::from_terms(6, [
//!     Term::from_indices(&[0]).unwrap(),
//!     Term::from_indices(&[2]).unwrap(),
//!     Term::from_indices(&[0, 1]).unwrap(),
//!     Term::from_indices(&[4, 5]).unwrap(),
//! ]).unwrap();
//! let complex = support.hierarchical_closure().to_simplicial_complex().unwrap();
//! let (betti, _) = betti_numbers(&complex, 2);
//! assert_eq!(betti.values(), &[3, 0, 0]);
//! ```

pub mod error;
pub mod homology;
pub mod regression;
pub mod selection;
pub mod simulate;
pub mod terms;

pub use error::{Error, Result};
pub use homology::{betti_numbers, BettiVector, HomologySummary, SimplicialComplex};
pub use regression::{
    build_design, lasso_path, Dataset, DesignConfig, DesignMatrix, LassoPath, PathScaling, Split,
};
pub use selection::{
    annotate_path, compound_criterion, maic, model_error, select_model, AnnotatedPath,
    CriterionConfig, SelectionReport,
};
pub use terms::{enumerate_candidate_terms, ModelSupport, Term};

//! Graded quivers, dg path algebras and their Calabi-Yau style completions,
//! with exact linear algebra for homology computations.
//!
//! The composition convention throughout is "x*y means x after y": in a word
//! `a*b` the letter `b` acts first, so `a*b` is nonzero exactly when the
//! target of `b` is the source of `a`. Words are ordered degree-lexically by
//! length and then by arrow declaration order.

pub mod algebra;
pub mod cohomology;
pub mod completions;
pub mod cyclic;
pub mod dg;
pub mod dsl;
pub mod findim;
pub mod linalg;
pub mod potential;
pub mod presentation;
pub mod rewriting;
pub mod weights;
pub mod quiver;
pub mod rng;
pub mod scalar;

pub use algebra::{AlgebraElement, AlgebraError, PathWord, WeightAssignment};
pub use completions::{
    cy_complete_hereditary, ginzburg3, partial_resolution, relation_completion,
    relative_ginzburg3, relative_preprojective2, CompletionError, IceQuiverWithPotential,
};
pub use cohomology::{cohomology, h0_presentation, stalk_check, with_inferred_weights, CohomologyTable, EngineError, EngineOptions, StalkVerdict};
pub use cyclic::{
    bar_differential, canonical_map_ranks, commutator_quotient, cone_mixed, cyclic,
    hc_dims_from_mixed, hochschild, mixed_complex, negative_cyclic, norm_operator,
    relative_cyclic, rotation, CanonicalRanks, CyclicError, HnReport, MixedComplexData,
    RelativeReport, DEFAULT_TENSOR_CAP,
};
pub use dg::{element_from_named, D2Report, DgError, DgPresentation};
pub use dsl::{parse, print, DiagCode, Diagnostic, QuiverModel};
pub use findim::{random_algebra, AlgebraMorphism, FinDimError, FiniteDimAlgebra};
pub use linalg::{FieldSpec, LinalgError, SparseMat};
pub use potential::{cyclic_normalize, Potential, PotentialError};
pub use presentation::{Presentation, PresentationError};
pub use rewriting::{
    complete, dimension_profile, dims_equal, DimensionProfile, DimsComparison, RewriteError,
    RewriteSystem, TotalDim,
};
pub use quiver::{GradedQuiver, QuiverBuilder, QuiverError};
pub use scalar::{qi, qr, Q};
pub use weights::{infer_weights, WeightError};

//! Exact invariants of isolated hypersurface singularities.
//!
//! The crate computes Milnor numbers, sectional Milnor numbers, polar degrees,
//! cone and Hessian tests, plane-curve branch counts and a coarse
//! classification for projective hypersurfaces with rational coefficients.
//! All arithmetic is exact; randomised steps take explicit seeds.

pub mod classify;
pub mod corpus;
pub mod error;
pub mod linalg;
pub mod local;
pub mod parse;
pub mod planecurve;
pub mod poly;
pub mod projective;
pub mod verify;
pub mod weighted;

pub use classify::{coarse_type, Annotation, CoarseLabel, CoarseType};
pub use corpus::{
    builtin_corpus, find_record, format_corpus, parse_corpus, CorpusRecord, ExpectedPoint,
    RecordFlags,
};
pub use error::{Error, Result};
pub use local::{
    hessian_corank_at_origin, local_compare, milnor_number, mora_normal_form, standard_basis,
    tjurina_number, Budget, Dimension, LocalGerm, LocalOrder, StandardBasisResult,
};
pub use parse::{infer_nvars, parse_poly};
pub use planecurve::{
    branch_count, distinct_intersection_count, lemma16_check, polar_degree_elimination, resultant,
    singular_point_count, tangent_cone_lines, BranchCount, Lemma16Report, TangentConeInfo,
};
pub use poly::{ExponentVector, LinearChange, Polynomial, VarStyle};
pub use projective::{
    apex_space, germ_milnor_sequence, hessian_vanishes, is_cone_with_apex, move_to_origin,
    multiplicity, polar_degree, sectional_milnor_sequence, theorem_checks, ApexSpace,
    HessianVerdict, Hypersurface, ProjectivePoint, Settings, TheoremReport,
};
pub use verify::{verify_all, verify_record, Check, RecordReport, Status, VerificationReport};
pub use weighted::{detect_weights, milnor_orlik, WeightVector};

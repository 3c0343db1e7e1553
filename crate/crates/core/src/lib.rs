//! Finite bicategories, fibrations between them, and the constructions
//! around Cartesian lifts and limit lifting, all decided by enumeration over
//! fully tabulated data.

pub mod bicategory;
pub mod bounds;
pub mod category;
pub mod classical;
pub mod error;
pub mod expfib;
pub mod fibration;
pub mod fixtures;
pub mod functor;
pub mod groth;
pub mod ids;
pub mod limits;
pub mod report;
pub mod validate;

pub use bicategory::{Bicategory, BicategoryBuilder, HomCategory};
pub use bounds::SizeBounds;
pub use category::{
    validate_cat_functor, validate_category, ArrowCategory, CatFunctor, Category, CategoryBuilder,
};
pub use error::{Error, LimitHypothesis, Result};
pub use ids::{Mor, Ob, Obj, One, Two};
pub use report::{Axiom, CoherenceReport, Violation};
pub use validate::{validate_bicategory, validate_bicategory_with};
pub use functor::{
    compose_functors, constant_functor, enumerate_modifications, enumerate_strict_functors,
    enumerate_transformations, identity_modification, identity_transformation, postwhisker,
    tables_equal, validate_functor, validate_icon, validate_modification, validate_transformation,
    vcomp_transformations, Icon, LaxFunctor, Mode, Modification, OplaxTransformation, Variance,
};
pub use fibration::{
    cartesian_lift_1cell, factor_2cell, fibration_report, is_cartesian_1cell_def,
    is_cartesian_1cell_strict, is_cartesian_2cell, is_fibration, is_locally_fibred,
    lift_triple_noninvertible, lift_triple_strict, synthesize_cleavage, unique_2cell_test,
    validate_cleavage, Cleavage, FibrationContext, Lift, LiftProblem, SeedOrder, Verdict,
};
pub use limits::{
    cone_category, fiber, find_limit, is_limit, lift_limit, limit_equivalence, preserves_limit,
    reindex_diagram, Cone, ConeCategory, FiberBicategory, LiftedLimit, LimitCertificate,
    LimitLifter, Reindexing,
};

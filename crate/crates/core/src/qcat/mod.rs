//! Typed sets, relations, categories, distributors and presheaves over a
//! finite quantaloid.

pub mod category;
pub mod complete;
pub mod kan;
pub mod presheaf;
pub mod relation;

pub use category::{
    check_adjunction, check_functor, graph_cograph, is_distributor, is_functor, validate_category,
    FunctorCheck, Preorder, QCategory,
};
pub use presheaf::{Kind, Presheaf, PresheafCat, DEFAULT_CAP};
pub use relation::{QRelation, TypedSet};

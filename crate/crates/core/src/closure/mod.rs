//! Q-closure spaces: closure operators, continuity, initial structures,
//! specialization and the closed-presheaf functor.

pub mod continuity;
pub mod space;
pub mod special;

pub use continuity::{
    check_continuous_functor, continuity_conditions, functor_adjoints, functor_d, functor_i,
    initial_structure, is_sup_preserving, sup_on_closed, FourWay,
};
pub use space::{
    all_closure_spaces, check_closed_category, from_closed_presheaves, from_closed_system,
    generate, validate_closure_space, ClosedCat, ClosureSpace, Mode,
};
pub use special::{
    classical_specialization, ds, is_alexandrov, specialization, specialization_of_relation,
    underlying_discrete,
};

//! Continuous and closed continuous distributors between closure spaces, and
//! their equivalence with sup-preserving maps.

pub mod dist;
pub mod equiv;

pub use dist::{
    check_closure_laws, check_composite_laws, check_continuous_dist, compose_cl, dist_adjoints,
    dist_closure, dist_conditions, final_structure, identity_cl, is_closed_dist, join_cl,
    kan_tables, triangle_map, DistAdjoints,
};
pub use equiv::{
    all_distributors, check_bijection, check_faithfulness, discrete_reduction_witnesses, icl_embed,
    realize_sup_map, sup_maps, sup_preserving_by_criterion, Bijection,
};

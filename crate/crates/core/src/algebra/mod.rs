//! Finite lattices, quantaloids, quantales and the `DQ` construction.

pub mod dq;
pub mod lattice;
pub mod quantale;
pub mod quantaloid;

pub use dq::{build_dq, Dq};
pub use lattice::{Bound, Elem, FiniteLattice};
pub use quantale::{boolean, drastic, godel, lukasiewicz, Divisibility, Quantale};
pub use quantaloid::{build_opposite, validate_quantaloid, Arrow, Obj, Quantaloid, Side};

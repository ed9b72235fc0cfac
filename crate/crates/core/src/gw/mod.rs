//! Grothendieck-Witt coefficient rings and their field images.

mod arith;
pub mod field;
pub mod group_ring;
pub mod hyp_univ;
pub mod residual;
pub mod square_class;
pub mod tilde;
pub mod univ;

pub use field::{specialize_field, Assignment, FieldModel, FieldValue};
pub use group_ring::GroupRingElement;
pub use hyp_univ::{hyp_univ_reduce, HypUnivElement};
pub use residual::{residual_reduce, residual_reduce_tilde, ResidualElement, ResidualTilde};
pub use square_class::{Generator, SquareClassGroup, SquareClassMonomial};
pub use tilde::{
    binomial_product, cascade_decompose, top_coefficient, Cascade, TildeElement, VarSet,
};
pub use univ::{univ_coords, UnivElement};

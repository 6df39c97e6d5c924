//! Inhomogeneous q-difference operators: representation, parsing,
//! serialization, application to sequences, specialization and palindromy.

pub mod expr;
pub mod operator;
pub mod sequence;

pub use expr::TriPoly;
pub use operator::{shift_minus_one, InhomOperator, PalindromyReport, Specialization, OPERATOR_FORMAT};
pub use sequence::{jones_dimension, JonesSequence, SEQUENCE_SIGN};

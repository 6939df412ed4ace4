//! Foundation build (temporary cut-down module list).
pub mod ball;
pub mod curve;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod gf;
pub mod moebius;
pub mod poly;
pub mod ratfunc;
pub mod recognize;
pub mod roots;

pub use ball::{ComplexBall, Dyadic};
pub use cyclotomic::{cyclotomic_poly, euler_phi, CycField, CycNum, Rat};
pub use error::{Error, Result};
pub use field::Field;

//! Exact computations with unipotent Hecke algebras of finite `GL_n(F_q)`, `SL_n(F_q)`
//! and pro-p Iwahori Hecke algebras of split `GL_n`, `SL_n` over a p-adic field.

pub mod cli_reports;
pub mod coxeter;
pub mod error;
pub mod finite_group;
pub mod gf;
pub mod hecke_affine;
pub mod hecke_core;
pub mod hecke_modules;
pub mod linalg;
pub mod monomial;
pub mod rep_finite;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{Fp, Scalar, F11, F13, F2, F3, F5, F7, Q};

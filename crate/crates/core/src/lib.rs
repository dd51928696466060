//! Exact computation with semisimple symmetric Frobenius algebras and the
//! Calabi-Yau structure on their module categories.
//!
//! The crate provides, over the rationals or a prime field:
//!
//! * dense exact linear algebra ([`linalg`]),
//! * algebras by structure constants with Wedderburn data ([`algebra`]),
//! * Frobenius forms and their block weights ([`frobenius`]),
//! * modules, hom spaces, duals and tensor products over an algebra
//!   ([`modules`]),
//! * the Hattori-Stallings trace composed with a Frobenius form, i.e. the
//!   Calabi-Yau trace on finitely generated modules ([`trace`]),
//! * Morita contexts and their compatibility with Frobenius forms
//!   ([`morita`]),
//! * the passage between Frobenius algebras and skeletal Calabi-Yau
//!   presentations in both directions ([`cy`]),
//! * a JSON document model and seeded instance generation ([`doc`],
//!   [`sample`]).
pub mod algebra;
pub mod cy;
pub mod doc;
pub mod error;
pub mod field;
pub mod frobenius;
pub mod linalg;
pub mod modules;
pub mod morita;
pub mod poly;
pub mod report;
pub mod sample;
pub mod trace;

pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};

//! Triangular forms `a_1 P_3(x_1) + ... + a_k P_3(x_k)`: global and p-adic
//! representation, Watson transformations, oldness, and the enumeration
//! pipelines behind the classification of regular forms.

pub mod bits;
pub mod error;
#[macro_use]
pub mod form;
pub mod classify;
pub mod enumerate;
pub mod localrep;
pub mod numth;
pub mod rivers;
pub mod triforms;
pub mod watson;

pub use error::{Error, Result};
pub use form::Form;
pub use numth::OddPrime;

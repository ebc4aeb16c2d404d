//! Free products of rigid C*-2-categories.
//!
//! The crate has two layers. The fusion layer ([`fusion`], [`words`],
//! [`free_fusion`], [`tlj`]) works with Grothendieck-level data: irreducibles,
//! duals, fusion multiplicities and quantum dimensions, and computes the free
//! product of several factors as a ring spanned by reduced words. The
//! realization layer ([`rep_groups`], [`realization`]) builds factor
//! categories from explicit unitary representations of finite groups and
//! realizes the free product on word-graded Hilbert spaces, with a verifier for
//! all coherence identities.

pub mod error;
pub mod free_fusion;
pub mod fusion;
pub mod linalg;
pub mod realization;
pub mod rep_groups;
pub mod scalar;
pub mod tlj;
pub mod words;

use num_rational::Rational64;

pub use error::{Error, Result};
pub use fusion::{Bundle, CategorySpec, IrrId, ZeroCell};
pub use scalar::Scalar;

/// Fusion data with exact rational quantum dimensions.
pub type ExactSpec = CategorySpec<Rational64>;
/// Fusion data with double-precision quantum dimensions.
pub type FloatSpec = CategorySpec<f64>;
pub type ExactAmalgam = words::Amalgam<Rational64>;
pub type FloatAmalgam = words::Amalgam<f64>;

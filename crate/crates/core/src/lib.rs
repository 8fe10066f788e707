//! Exact computation of good basic invariants and Frobenius structures for
//! finite Coxeter groups.
//!
//! Everything runs in exact arithmetic over cyclotomic fields `Q(zeta_N)`:
//! the reflection representation, the graded Taylor morphisms at a regular
//! eigenvector, the good basic invariants they single out, and the flat
//! metric, multiplication, and potential of the associated Frobenius
//! structure, verified as exact polynomial identities.
//!
//! The polynomial and linear-algebra layers are generic over the scalar
//! field ([`scalar::Field`], implemented by `Q` and `Q(zeta_N)`); the
//! concrete aliases below fix the cyclotomic instantiation used by the
//! group pipeline.

pub mod frobenius;
pub mod goodbasis;
pub mod groups;
pub mod jet;
pub mod linalg;
pub mod pipeline;
pub mod polyring;
pub mod report;
pub mod scalar;

/// The working scalar: an element of a cyclotomic field.
pub type Cyc = scalar::CycScalar;
/// Exact rational scalar.
pub type Rational = scalar::Rational;
/// Sparse polynomial over the cyclotomic scalars.
pub type Poly = polyring::MultiPoly<Cyc>;
/// Sparse polynomial over the rationals.
pub type QPoly = polyring::MultiPoly<Rational>;
/// Dense exact matrix over the cyclotomic scalars.
pub type Mat = linalg::Matrix<Cyc>;
/// Truncated Taylor expansion over the cyclotomic scalars.
pub type CycJet = jet::Jet<Cyc>;

pub use groups::{catalog, Family, GroupSpec, ReflectionGroup};
pub use pipeline::{CheckKind, Pipeline};

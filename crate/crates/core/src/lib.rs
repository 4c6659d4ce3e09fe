//! Determined subspaces at infinity for affine point sets over finite fields.
//!
//! A k-subspace `S` of the hyperplane at infinity is *determined* by an
//! affine point set `U ⊂ AG(n,q)` when some affine (k+1)-flat with ideal
//! hyperplane `S` is spanned by the points of `U` it contains. This crate
//! computes determined and undetermined subspaces, builds cones and
//! tangent-at-infinity quadrics, and checks the structural results about
//! extremal sets (`|U| = q^(n-1)`) exhaustively at small orders.

pub mod classify;
pub mod construct;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod pg;
pub mod span;

pub use error::{Error, Result};
pub use gf::{Elem, Field, FieldSpec};

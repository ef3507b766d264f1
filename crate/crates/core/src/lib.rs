//! Exact computer algebra for Rota-Baxter operators on the algebra of
//! upper-triangular 3x3 matrices.
//!
//! The crate is organised bottom-up:
//!
//! * [`rational`], [`matrix`]: exact scalars and the algebra `U_n`.
//! * [`poly`], [`groebner`]: multivariate polynomials, Buchberger's
//!   algorithm, normal forms, ideal membership and elimination.
//! * [`rb`]: linear operators on `U_3`, the Rota-Baxter residual, polynomial
//!   system generation and the split construction.
//! * [`transform`]: automorphisms, the antiautomorphism `Theta_{1,3}`,
//!   operator conjugation, canonical forms and conjugation search.
//! * [`catalog`]: the forty operator families, their certification, the
//!   case driver and the derived invariants.
//! * [`formats`]: the JSON file formats shared with the command-line tool.

pub mod catalog;
pub mod coeff;
pub mod error;
pub mod formats;
pub mod groebner;
pub mod linalg;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod rb;
pub mod transform;

pub use coeff::Coeff;
pub use error::{Error, ParseError, Result};
pub use groebner::{GroebnerBasis, Limits, PolySystem};
pub use matrix::{BasisIndex, UTMatrix};
pub use poly::{Monomial, MonomialOrder, MultiPoly, VarTable};
pub use rational::Rational;
pub use rb::{Operator, RBResidual};
pub use transform::{AlgebraMap, AutoParams, Witness};

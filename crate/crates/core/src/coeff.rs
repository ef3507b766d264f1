//! The coefficient rings matrices and operators are defined over.

use std::fmt;

use crate::poly::{MultiPoly, VarTable};
use crate::rational::Rational;

/// A commutative ring whose elements can be tested for zero exactly.
///
/// Implemented by [`Rational`] (numeric operators) and [`MultiPoly`]
/// (operators with symbolic parameters).
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn scaled(&self, q: &Rational) -> Self;
    fn from_rational(q: Rational) -> Self;
    /// Whether the two values may be combined (same ring instance).
    fn compatible(&self, _other: &Self) -> bool {
        true
    }
    /// The value as a rational number, if it is a constant.
    fn to_rational(&self) -> Option<Rational>;
    /// A polynomial view, used by exact symbolic routines.
    fn to_poly(&self) -> MultiPoly;
}

impl Coeff for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, q: &Rational) -> Self {
        self * q
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn to_poly(&self) -> MultiPoly {
        MultiPoly::constant(&VarTable::empty(), self.clone())
    }
}

impl Coeff for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero(&VarTable::empty())
    }
    fn one() -> Self {
        MultiPoly::one(&VarTable::empty())
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn scaled(&self, q: &Rational) -> Self {
        self.scale(q)
    }
    fn from_rational(q: Rational) -> Self {
        MultiPoly::constant(&VarTable::empty(), q)
    }
    fn compatible(&self, other: &Self) -> bool {
        crate::poly::unify_tables(self.table(), other.table()).is_ok()
    }
    fn to_rational(&self) -> Option<Rational> {
        self.as_constant()
    }
    fn to_poly(&self) -> MultiPoly {
        self.clone()
    }
}

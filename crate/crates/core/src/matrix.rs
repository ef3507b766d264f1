//! The algebra `U_n` of upper-triangular matrices.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::coeff::Coeff;
use crate::error::{Error, ParseError, Result};
use crate::linalg;
use crate::parse;
use crate::poly::{MultiPoly, VarTable};
use crate::rational::Rational;

/// A matrix unit `e_{row,col}` with `row <= col` (1-based).
///
/// The derived order is the canonical basis order
/// `e11 < e12 < e13 < e22 < e23 < e33`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisIndex {
    pub row: u8,
    pub col: u8,
}

impl BasisIndex {
    pub fn new(row: u8, col: u8) -> Self {
        assert!(
            row >= 1 && row <= col,
            "e{row}{col} is not upper-triangular"
        );
        BasisIndex { row, col }
    }

    /// All indices of `U_n` in canonical order.
    pub fn all(n: usize) -> Vec<BasisIndex> {
        let mut out = Vec::with_capacity(n * (n + 1) / 2);
        for i in 1..=n as u8 {
            for j in i..=n as u8 {
                out.push(BasisIndex { row: i, col: j });
            }
        }
        out
    }

    /// Position in the canonical order of `U_n`.
    pub fn position(&self, n: usize) -> usize {
        let i = self.row as usize - 1;
        let j = self.col as usize - 1;
        // Rows before i contribute n + (n-1) + ... + (n-i+1) entries.
        i * n - i * (i.saturating_sub(1)) / 2 + (j - i)
    }

    /// `e_{ij} e_{kl} = delta_{jk} e_{il}`.
    pub fn product(&self, other: &BasisIndex) -> Option<BasisIndex> {
        (self.col == other.row).then_some(BasisIndex {
            row: self.row,
            col: other.col,
        })
    }

    /// Parses `e12`-style names (single-digit indices).
    pub fn parse(s: &str) -> Option<BasisIndex> {
        let b = s.as_bytes();
        if b.len() != 3 || b[0] != b'e' || !b[1].is_ascii_digit() || !b[2].is_ascii_digit() {
            return None;
        }
        let (r, c) = (b[1] - b'0', b[2] - b'0');
        (r >= 1 && r <= c).then_some(BasisIndex { row: r, col: c })
    }

    pub fn is_diagonal(&self) -> bool {
        self.row == self.col
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}{}", self.row, self.col)
    }
}

fn dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// An element of `U_n` over a coefficient ring; absent entries are zero.
#[derive(Clone, PartialEq)]
pub struct UTMatrix<C: Coeff> {
    n: usize,
    entries: BTreeMap<BasisIndex, C>,
}

impl<C: Coeff> UTMatrix<C> {
    pub fn zero(n: usize) -> Self {
        UTMatrix {
            n,
            entries: BTreeMap::new(),
        }
    }

    pub fn unit(n: usize) -> Self {
        assert!(n >= 1);
        let mut m = UTMatrix::zero(n);
        for i in 1..=n as u8 {
            m.entries.insert(BasisIndex::new(i, i), C::one());
        }
        m
    }

    pub fn basis(n: usize, idx: BasisIndex) -> Self {
        let mut m = UTMatrix::zero(n);
        m.set(idx, C::one());
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, idx: BasisIndex) -> C {
        self.entries.get(&idx).cloned().unwrap_or_else(C::zero)
    }

    pub fn set(&mut self, idx: BasisIndex, value: C) {
        assert!(idx.col as usize <= self.n, "{idx} outside U_{}", self.n);
        if value.is_zero() {
            self.entries.remove(&idx);
        } else {
            self.entries.insert(idx, value);
        }
    }

    /// Nonzero entries in canonical basis order.
    pub fn entries(&self) -> impl Iterator<Item = (&BasisIndex, &C)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Coordinates in the canonical basis.
    pub fn to_vector(&self) -> Vec<C> {
        let mut v = vec![C::zero(); dim(self.n)];
        for (idx, c) in &self.entries {
            v[idx.position(self.n)] = c.clone();
        }
        v
    }

    pub fn from_vector(n: usize, v: &[C]) -> Self {
        assert_eq!(v.len(), dim(n));
        let mut m = UTMatrix::zero(n);
        for (idx, c) in BasisIndex::all(n).into_iter().zip(v) {
            m.set(idx, c.clone());
        }
        m
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::Incompatible(format!(
                "U_{} and U_{} operands",
                self.n, other.n
            )));
        }
        for a in self.entries.values() {
            for b in other.entries.values() {
                if !a.compatible(b) {
                    return Err(Error::Incompatible("coefficient rings differ".into()));
                }
            }
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add(other))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "incompatible operands");
        let mut out = self.clone();
        for (idx, c) in &other.entries {
            let v = out.get(*idx).plus(c);
            out.set(*idx, v);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.negated())
    }

    pub fn scale(&self, k: &C) -> Self {
        let mut out = UTMatrix::zero(self.n);
        for (idx, c) in &self.entries {
            out.set(*idx, c.times(k));
        }
        out
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        let mut out = UTMatrix::zero(self.n);
        for (idx, c) in &self.entries {
            out.set(*idx, c.scaled(q));
        }
        out
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> UTMatrix<D> {
        let mut out = UTMatrix::zero(self.n);
        for (idx, c) in &self.entries {
            out.set(*idx, f(c));
        }
        out
    }

    /// Exact product; errors on size or ring mismatch.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul(other))
    }

    /// Product without the compatibility check (panics on mismatch).
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "incompatible operands");
        let mut out = UTMatrix::<C>::zero(self.n);
        for (a, ca) in &self.entries {
            for (b, cb) in other.entries.range(
                BasisIndex {
                    row: a.col,
                    col: a.col,
                }..,
            ) {
                if b.row != a.col {
                    break;
                }
                let idx = BasisIndex {
                    row: a.row,
                    col: b.col,
                };
                let v = out.get(idx).plus(&ca.times(cb));
                out.set(idx, v);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = UTMatrix::unit(self.n);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> C {
        let mut t = C::zero();
        for (idx, c) in &self.entries {
            if idx.is_diagonal() {
                t = t.plus(c);
            }
        }
        t
    }

    /// Least `k >= 1` with `a^k = 0`, or `None` if `a^n != 0`.
    ///
    /// Over polynomial coefficients a power counts as zero only when it
    /// vanishes identically.
    pub fn nilpotency_degree(&self) -> Option<u32> {
        let mut p = self.clone();
        for k in 1..=self.n as u32 {
            if p.is_zero() {
                return Some(k);
            }
            p = p.mul(self);
        }
        None
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }

    pub fn is_strictly_upper(&self) -> bool {
        self.entries.keys().all(|i| !i.is_diagonal())
    }

    /// Dense `n x n` rows (lower part zero).
    pub fn to_dense(&self) -> Vec<Vec<C>> {
        let mut rows = vec![vec![C::zero(); self.n]; self.n];
        for (idx, c) in &self.entries {
            rows[idx.row as usize - 1][idx.col as usize - 1] = c.clone();
        }
        rows
    }
}

impl UTMatrix<Rational> {
    /// Rank as an `n x n` matrix, by exact elimination.
    pub fn rank(&self) -> usize {
        linalg::rank(self.to_dense())
    }

    /// Parses a numeric literal such as `"e12 + 2*e23 - 1/3*e13"`.
    pub fn parse(s: &str, n: usize) -> Result<Self, ParseError> {
        let m = UTMatrix::<MultiPoly>::parse(s, n, &VarTable::empty())?;
        Ok(m.map(|c| c.as_constant().expect("constant coefficient")))
    }
}

impl UTMatrix<MultiPoly> {
    /// Parses a literal whose coefficients may use the variables of `params`.
    pub fn parse(s: &str, n: usize, params: &Arc<VarTable>) -> Result<Self, ParseError> {
        let expr = parse::parse_expr(s)?;
        let mut idents = Vec::new();
        expr.collect_identifiers(&mut idents);
        let mut units = Vec::new();
        for id in &idents {
            if let Some(b) = BasisIndex::parse(id) {
                if b.col as usize > n {
                    return Err(ParseError::new(format!("{id} is outside U_{n}"), 0));
                }
                units.push((id.clone(), b));
            } else if id.len() == 3
                && id.starts_with('e')
                && id[1..].bytes().all(|c| c.is_ascii_digit())
            {
                return Err(ParseError::new(format!("{id} is not upper-triangular"), 0));
            } else if params.index_of(id).is_none() {
                return Err(ParseError::new(format!("unknown parameter `{id}`"), 0));
            }
        }
        let unit_names: Vec<&str> = units.iter().map(|u| u.0.as_str()).collect();
        let full = params
            .extended(&unit_names)
            .map_err(|e| ParseError::new(e.to_string(), 0))?;
        let poly = crate::poly::eval_expr(&expr, &full)?;
        let np = params.len();
        let mut out = UTMatrix::zero(n);
        let mut acc: BTreeMap<BasisIndex, Vec<(crate::poly::Monomial, Rational)>> = BTreeMap::new();
        for (m, c) in poly.terms() {
            let e = m.exponents();
            let unit_part: Vec<usize> = (np..e.len()).filter(|&i| e[i] > 0).collect();
            if unit_part.len() != 1 || e[unit_part[0]] != 1 {
                return Err(ParseError::new(
                    "each term must contain exactly one matrix unit to the first power",
                    0,
                ));
            }
            let b = units[unit_part[0] - np].1;
            let coeff_mon = crate::poly::Monomial::from_exponents(e[..np].to_vec());
            acc.entry(b).or_default().push((coeff_mon, c.clone()));
        }
        for (b, terms) in acc {
            out.set(b, MultiPoly::from_terms(params, terms));
        }
        Ok(out)
    }

    /// Replaces parameters by rational values (all must be assigned).
    pub fn evaluate(&self, values: &[Rational]) -> UTMatrix<Rational> {
        self.map(|c| {
            if c.table().is_empty() {
                c.as_constant().unwrap()
            } else {
                c.eval(values)
            }
        })
    }
}

impl<C: Coeff> fmt::Display for UTMatrix<C> {
    /// Sum-of-terms form, e.g. `e12 + 1/2*e13 - (b + f)*e23`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        let one = C::one();
        let minus_one = one.negated();
        for (k, (idx, c)) in self.entries.iter().enumerate() {
            let (neg, body) = if *c == one {
                (false, idx.to_string())
            } else if *c == minus_one {
                (true, idx.to_string())
            } else {
                let s = c.to_string();
                if s.contains(' ') {
                    (false, format!("({s})*{idx}"))
                } else if let Some(rest) = s.strip_prefix('-') {
                    (true, format!("{rest}*{idx}"))
                } else {
                    (false, format!("{s}*{idx}"))
                }
            };
            match (k, neg) {
                (0, true) => write!(f, "-{body}")?,
                (0, false) => write!(f, "{body}")?,
                (_, true) => write!(f, " - {body}")?,
                (_, false) => write!(f, " + {body}")?,
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for UTMatrix<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UTMatrix[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> UTMatrix<Rational> {
        UTMatrix::<Rational>::parse(s, 3).unwrap()
    }

    #[test]
    fn positions_follow_canonical_order() {
        let all = BasisIndex::all(3);
        for (k, b) in all.iter().enumerate() {
            assert_eq!(b.position(3), k);
        }
        let names: Vec<String> = all.iter().map(|b| b.to_string()).collect();
        assert_eq!(names, ["e11", "e12", "e13", "e22", "e23", "e33"]);
        for (k, b) in BasisIndex::all(5).iter().enumerate() {
            assert_eq!(b.position(5), k);
        }
    }

    #[test]
    fn structure_constants() {
        assert_eq!(q("e12").multiply(&q("e23")).unwrap(), q("e13"));
        assert!(q("e23").multiply(&q("e22")).unwrap().is_zero());
        let a = q("e12 + e23");
        assert_eq!(a.multiply(&a).unwrap(), q("e13"));
    }

    #[test]
    fn unit_laws() {
        let one = UTMatrix::<Rational>::unit(3);
        assert_eq!(one.mul(&q("e13")), q("e13"));
        assert_eq!(one, q("e11 + e22 + e33"));
        assert_eq!(one.trace(), Rational::from_int(3));
    }

    #[test]
    fn mismatched_sizes_are_rejected() {
        let a = UTMatrix::<Rational>::unit(3);
        let b = UTMatrix::<Rational>::unit(2);
        assert!(matches!(a.multiply(&b), Err(Error::Incompatible(_))));
        let t1 = VarTable::new(["x"]).unwrap();
        let t2 = VarTable::new(["y"]).unwrap();
        let p = UTMatrix::<MultiPoly>::parse("x*e12", 3, &t1).unwrap();
        let r = UTMatrix::<MultiPoly>::parse("y*e23", 3, &t2).unwrap();
        assert!(matches!(p.multiply(&r), Err(Error::Incompatible(_))));
    }

    #[test]
    fn nilpotency() {
        assert_eq!(q("e12 + e23").nilpotency_degree(), Some(3));
        assert_eq!(q("e13").nilpotency_degree(), Some(2));
        assert_eq!(q("e11").nilpotency_degree(), None);
        assert_eq!(UTMatrix::<Rational>::zero(3).nilpotency_degree(), Some(1));
    }

    #[test]
    fn idempotents_and_rank() {
        let a = q("e11 + 3*e12 + 5*e13");
        assert!(a.is_idempotent());
        assert_eq!(a.rank(), 1);
        let b = q("e11 + e22");
        assert!(b.is_idempotent());
        assert_eq!(b.rank(), 2);
        let c = q("e12");
        assert!(!c.is_idempotent());
        assert_eq!(c.rank(), 1);
    }

    #[test]
    fn literal_round_trip() {
        let m = q("e12 + 2*e23 - 1/3*e13");
        assert_eq!(m.to_string(), "e12 - 1/3*e13 + 2*e23");
        assert_eq!(q(&m.to_string()), m);
        let t = VarTable::new(["b", "f"]).unwrap();
        let p = UTMatrix::<MultiPoly>::parse("-b*e13 - f*e13 + e23", 3, &t).unwrap();
        assert_eq!(p.to_string(), "(-b - f)*e13 + e23");
        assert_eq!(
            UTMatrix::<MultiPoly>::parse(&p.to_string(), 3, &t).unwrap(),
            p
        );
    }

    #[test]
    fn literal_errors() {
        assert!(UTMatrix::<Rational>::parse("e21", 3).is_err());
        assert!(UTMatrix::<Rational>::parse("e14", 3).is_err());
        assert!(UTMatrix::<Rational>::parse("1 + e12", 3).is_err());
        assert!(UTMatrix::<Rational>::parse("e12*e23", 3).is_err());
        assert!(UTMatrix::<Rational>::parse("x*e12", 3).is_err());
        assert!(UTMatrix::<Rational>::parse("0", 3).unwrap().is_zero());
    }
}

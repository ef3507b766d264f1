//! Multivariate polynomials over the rationals.
//!
//! Every polynomial carries a shared [`VarTable`]; a variable is an index
//! into that table. Two tables are compatible when one is a prefix of the
//! other, which lets constants (empty table) mix freely with anything and
//! lets a polynomial be lifted into a table that extends its own.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, ParseError, Result};
use crate::parse::{self, Expr};
use crate::rational::Rational;

/// Ordered list of distinct variable names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VarTable {
    names: Vec<String>,
}

impl VarTable {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Arc<Self>> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !parse::is_identifier(n) {
                return Err(Error::InvalidArgument(format!(
                    "invalid variable name `{n}`"
                )));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidArgument(format!("duplicate variable `{n}`")));
            }
        }
        Ok(Arc::new(VarTable { names }))
    }

    pub fn empty() -> Arc<Self> {
        static EMPTY: OnceLock<Arc<VarTable>> = OnceLock::new();
        EMPTY
            .get_or_init(|| Arc::new(VarTable { names: Vec::new() }))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_prefix_of(&self, other: &VarTable) -> bool {
        self.names.len() <= other.names.len() && other.names[..self.names.len()] == self.names[..]
    }

    /// A table with `extra` appended (names already present are skipped).
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<Arc<Self>> {
        let mut names = self.names.clone();
        for e in extra {
            if !names.iter().any(|n| n == e.as_ref()) {
                names.push(e.as_ref().to_string());
            }
        }
        VarTable::new(names)
    }
}

/// The larger of two prefix-compatible tables.
pub fn unify_tables(a: &Arc<VarTable>, b: &Arc<VarTable>) -> Result<Arc<VarTable>> {
    if Arc::ptr_eq(a, b) || a.is_prefix_of(b) {
        Ok(b.clone())
    } else if b.is_prefix_of(a) {
        Ok(a.clone())
    } else {
        Err(Error::Incompatible(format!(
            "variable tables [{}] and [{}] differ",
            a.names.join(","),
            b.names.join(",")
        )))
    }
}

/// Exponent vector; its length equals the size of the owning table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u16>,
    deg: u32,
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
            deg: 0,
        }
    }

    pub fn from_exponents(exps: Vec<u16>) -> Self {
        let deg = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, deg }
    }

    pub fn var(nvars: usize, idx: usize, exp: u16) -> Self {
        let mut m = Monomial::one(nvars);
        m.exps[idx] = exp;
        m.deg = exp as u32;
        m
    }

    pub fn exponents(&self) -> &[u16] {
        &self.exps
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        Monomial {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| a + b)
                .collect(),
            deg: self.deg + other.deg,
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial {
            exps: other
                .exps
                .iter()
                .zip(&self.exps)
                .map(|(a, b)| a - b)
                .collect(),
            deg: other.deg - self.deg,
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial::from_exponents(
            self.exps
                .iter()
                .zip(&other.exps)
                .map(|(a, b)| *a.max(b))
                .collect(),
        )
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(&other.exps)
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    fn padded(&self, nvars: usize) -> Monomial {
        if self.exps.len() == nvars {
            return self.clone();
        }
        let mut exps = self.exps.clone();
        exps.resize(nvars, 0);
        Monomial {
            exps,
            deg: self.deg,
        }
    }

    fn fmt_with(&self, table: &VarTable, out: &mut String) {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                out.push('*');
            }
            first = false;
            out.push_str(table.name(i));
            if e > 1 {
                out.push('^');
                out.push_str(&e.to_string());
            }
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.exps)
    }
}

fn grevlex_slice(a: &[u16], b: &[u16]) -> Ordering {
    let da: u32 = a.iter().map(|&e| e as u32).sum();
    let db: u32 = b.iter().map(|&e| e as u32).sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

/// The canonical storage order is graded reverse lexicographic.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| {
            for (x, y) in self.exps.iter().zip(&other.exps).rev() {
                if x != y {
                    return y.cmp(x);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Monomial orders. Variables earlier in the table rank higher.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    Lex,
    Grevlex,
    /// Block order: the first `k` variables (grevlex among themselves)
    /// dominate the rest (grevlex among themselves).
    #[serde(rename = "elim")]
    Elimination(usize),
}

impl MonomialOrder {
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrder::Lex => a.exps.cmp(&b.exps),
            MonomialOrder::Grevlex => a.cmp(b),
            MonomialOrder::Elimination(k) => {
                let k = (*k).min(a.exps.len());
                grevlex_slice(&a.exps[..k], &b.exps[..k])
                    .then_with(|| grevlex_slice(&a.exps[k..], &b.exps[k..]))
            }
        }
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonomialOrder::Lex => f.write_str("lex"),
            MonomialOrder::Grevlex => f.write_str("grevlex"),
            MonomialOrder::Elimination(k) => write!(f, "elim({k})"),
        }
    }
}

impl std::str::FromStr for MonomialOrder {
    type Err = Error;

    /// Accepts `lex`, `grevlex` and `elim:<k>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lex" => Ok(MonomialOrder::Lex),
            "grevlex" => Ok(MonomialOrder::Grevlex),
            _ => s
                .strip_prefix("elim:")
                .and_then(|k| k.parse().ok())
                .map(MonomialOrder::Elimination)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown monomial order `{s}`"))),
        }
    }
}

/// A polynomial with rational coefficients over a shared [`VarTable`].
#[derive(Clone)]
pub struct MultiPoly {
    table: Arc<VarTable>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(table: &Arc<VarTable>) -> Self {
        MultiPoly {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(table: &Arc<VarTable>, c: Rational) -> Self {
        let mut p = MultiPoly::zero(table);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(table.len()), c);
        }
        p
    }

    pub fn one(table: &Arc<VarTable>) -> Self {
        MultiPoly::constant(table, Rational::one())
    }

    pub fn var(table: &Arc<VarTable>, name: &str) -> Result<Self> {
        let idx = table
            .index_of(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(MultiPoly::var_idx(table, idx))
    }

    pub fn var_idx(table: &Arc<VarTable>, idx: usize) -> Self {
        let mut p = MultiPoly::zero(table);
        p.terms
            .insert(Monomial::var(table.len(), idx, 1), Rational::one());
        p
    }

    /// Builds from raw terms; zero coefficients are dropped and duplicates summed.
    pub fn from_terms(
        table: &Arc<VarTable>,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut p = MultiPoly::zero(table);
        for (m, c) in terms {
            assert_eq!(m.nvars(), table.len(), "monomial/table size mismatch");
            p.add_term(m, &c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff the canonical term map is empty; the polynomial vanishes for
    /// every value of every indeterminate.
    pub fn is_zero_identically(&self) -> bool {
        self.is_zero()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending canonical (grevlex) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.deg).max()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value of a constant polynomial.
    pub fn as_constant(&self) -> Option<Rational> {
        if self.is_zero() {
            return Some(Rational::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.table.len()))
            .cloned()
            .unwrap_or_default()
    }

    /// Indices of the variables that occur.
    pub fn variables(&self) -> Vec<usize> {
        let mut used = vec![false; self.table.len()];
        for m in self.terms.keys() {
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        (0..used.len()).filter(|&i| used[i]).collect()
    }

    /// For a polynomial of degree at most one: the coefficient of every
    /// variable and the constant term.
    pub fn linear_coefficients(&self) -> Option<(Vec<Rational>, Rational)> {
        let mut coeffs = vec![Rational::zero(); self.table.len()];
        let mut constant = Rational::zero();
        for (m, c) in &self.terms {
            match m.deg {
                0 => constant = c.clone(),
                1 => {
                    let i = m.exps.iter().position(|&e| e == 1).unwrap();
                    coeffs[i] = c.clone();
                }
                _ => return None,
            }
        }
        Some((coeffs, constant))
    }

    pub fn leading_term(&self, ord: MonomialOrder) -> Result<(Monomial, Rational)> {
        let (m, c) = self
            .terms
            .iter()
            .max_by(|a, b| ord.cmp(a.0, b.0))
            .ok_or(Error::NoLeadingTerm)?;
        Ok((m.clone(), c.clone()))
    }

    /// Same polynomial expressed over `table`, which must extend this
    /// polynomial's table.
    pub fn lift(&self, table: &Arc<VarTable>) -> Result<MultiPoly> {
        if Arc::ptr_eq(&self.table, table) {
            return Ok(self.clone());
        }
        if !self.table.is_prefix_of(table) {
            return Err(Error::Incompatible(format!(
                "cannot lift polynomial over [{}] into [{}]",
                self.table.names.join(","),
                table.names.join(",")
            )));
        }
        let n = table.len();
        Ok(MultiPoly {
            table: table.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.padded(n), c.clone()))
                .collect(),
        })
    }

    /// Rewrites the polynomial over another table by variable name.
    pub fn retarget(&self, table: &Arc<VarTable>) -> Result<MultiPoly> {
        let map: Vec<usize> = self
            .variables()
            .into_iter()
            .map(|i| {
                table
                    .index_of(self.table.name(i))
                    .ok_or_else(|| Error::UnknownVariable(self.table.name(i).to_string()))
            })
            .collect::<Result<_>>()?;
        let used = self.variables();
        let n = table.len();
        let mut out = MultiPoly::zero(table);
        for (m, c) in &self.terms {
            let mut exps = vec![0u16; n];
            for (k, &i) in used.iter().enumerate() {
                exps[map[k]] = m.exps[i];
            }
            out.add_term(Monomial::from_exponents(exps), c);
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        let table = unify_tables(&self.table, &other.table)?;
        let mut out = self.lift(&table)?;
        let n = table.len();
        for (m, c) in &other.terms {
            out.add_term(m.padded(n), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        let table = unify_tables(&self.table, &other.table)?;
        let n = table.len();
        let mut out = MultiPoly::zero(&table);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        let rhs: Vec<(Monomial, &Rational)> =
            other.terms.iter().map(|(m, c)| (m.padded(n), c)).collect();
        for (ma, ca) in &self.terms {
            let ma = ma.padded(n);
            for (mb, cb) in &rhs {
                out.add_term(ma.mul(mb), &(ca * *cb));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, q: &Rational) -> MultiPoly {
        if q.is_zero() {
            return MultiPoly::zero(&self.table);
        }
        MultiPoly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * q)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.table);
        }
        MultiPoly {
            table: self.table.clone(),
            terms: self
                .terms
                .iter()
                .map(|(mm, cc)| (mm.mul(m), cc * c))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.table);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Scales so the leading coefficient under `ord` is one.
    pub fn monic(&self, ord: MonomialOrder) -> MultiPoly {
        match self.leading_term(ord) {
            Ok((_, c)) => self.scale(&c.inv().unwrap()),
            Err(_) => self.clone(),
        }
    }

    /// Ring homomorphism sending each bound variable to its image. Unbound
    /// variables stay as themselves. The images must have compatible tables;
    /// unbound variables missing from them are appended.
    pub fn substitute(&self, bindings: &BTreeMap<String, MultiPoly>) -> Result<MultiPoly> {
        let mut table: Option<Arc<VarTable>> = None;
        for (name, img) in bindings {
            if self.table.index_of(name).is_none() {
                return Err(Error::UnknownVariable(name.clone()));
            }
            table = Some(match table {
                None => img.table.clone(),
                Some(t) => unify_tables(&t, &img.table)?,
            });
        }
        let mut table = table.unwrap_or_else(|| self.table.clone());
        let missing: Vec<String> = self
            .variables()
            .into_iter()
            .map(|i| self.table.name(i).to_string())
            .filter(|n| !bindings.contains_key(n) && table.index_of(n).is_none())
            .collect();
        if !missing.is_empty() {
            table = table.extended(&missing)?;
        }
        let images = self
            .table
            .names()
            .iter()
            .map(|name| match bindings.get(name) {
                Some(img) => img.lift(&table),
                None => Ok(match table.index_of(name) {
                    Some(i) => MultiPoly::var_idx(&table, i),
                    None => MultiPoly::zero(&table),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        self.substitute_images(&images, &table)
    }

    /// Substitutes `images[i]` for variable `i`; the images must live over `target`.
    pub fn substitute_images(
        &self,
        images: &[MultiPoly],
        target: &Arc<VarTable>,
    ) -> Result<MultiPoly> {
        assert_eq!(images.len(), self.table.len());
        let mut cache: HashMap<(usize, u16), MultiPoly> = HashMap::new();
        let mut out = MultiPoly::zero(target);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target, c.clone());
            for (i, &e) in m.exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache
                    .entry((i, e))
                    .or_insert_with(|| images[i].pow(e as u32))
                    .clone();
                t = t.checked_mul(&p)?;
            }
            out = out.checked_add(&t)?;
        }
        out.lift(target)
    }

    /// Substitutes rational values for some variables, keeping the table.
    pub fn specialize(&self, values: &BTreeMap<usize, Rational>) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.table);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = m.exps.clone();
            for (&i, v) in values {
                if exps[i] > 0 {
                    coeff = &coeff * &v.pow(exps[i] as i32);
                    exps[i] = 0;
                }
            }
            out.add_term(Monomial::from_exponents(exps), &coeff);
        }
        out
    }

    /// Evaluates at a full assignment (one value per table variable).
    pub fn eval(&self, values: &[Rational]) -> Rational {
        assert_eq!(values.len(), self.table.len());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps.iter().enumerate() {
                if e > 0 {
                    t = &t * &values[i].pow(e as i32);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Parses `s` over `table`; every identifier must be a table variable.
    pub fn parse(s: &str, table: &Arc<VarTable>) -> Result<MultiPoly, ParseError> {
        let expr = parse::parse_expr(s)?;
        eval_expr(&expr, table)
    }

    /// Parses `s`, building a table from the identifiers in order of first appearance.
    pub fn parse_auto(s: &str) -> Result<MultiPoly, ParseError> {
        let expr = parse::parse_expr(s)?;
        let mut names = Vec::new();
        expr.collect_identifiers(&mut names);
        let table = VarTable::new(names).map_err(|e| ParseError::new(e.to_string(), 0))?;
        eval_expr(&expr, &table)
    }

    pub fn to_string_with_order(&self, ord: MonomialOrder) -> String {
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| ord.cmp(b.0, a.0));
        format_terms(&self.table, terms.into_iter())
    }
}

fn format_terms<'a>(
    table: &VarTable,
    terms: impl Iterator<Item = (&'a Monomial, &'a Rational)>,
) -> String {
    let mut out = String::new();
    for (k, (m, c)) in terms.enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&abs.to_string());
        } else {
            if !abs.is_one() {
                out.push_str(&abs.to_string());
                out.push('*');
            }
            m.fmt_with(table, &mut out);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub(crate) fn eval_expr(expr: &Expr, table: &Arc<VarTable>) -> Result<MultiPoly, ParseError> {
    expr.eval(
        &mut |name, pos| {
            MultiPoly::var(table, name)
                .map_err(|_| ParseError::new(format!("unknown variable `{name}`"), pos))
        },
        &MultiPoly::zero(table),
    )
}

impl fmt::Display for MultiPoly {
    /// Descending grevlex; the output re-parses to the same polynomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_terms(&self.table, self.terms()))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

/// Polynomials are equal when their term maps agree after lifting to a
/// common table. Incompatible tables compare unequal.
impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.table, &other.table) || self.table == other.table {
            return self.terms == other.terms;
        }
        match unify_tables(&self.table, &other.table) {
            Ok(t) => self.lift(&t).unwrap().terms == other.lift(&t).unwrap().terms,
            Err(_) => false,
        }
    }
}

impl Eq for MultiPoly {}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    /// Panics on incompatible tables; see [`MultiPoly::checked_add`].
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_add(rhs).expect("incompatible operands")
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_sub(rhs).expect("incompatible operands")
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        self.checked_mul(rhs).expect("incompatible operands")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        &self + &rhs
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        &self - &rhs
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Arc<VarTable> {
        VarTable::new(["x", "y"]).unwrap()
    }

    fn p(s: &str, t: &Arc<VarTable>) -> MultiPoly {
        MultiPoly::parse(s, t).unwrap()
    }

    #[test]
    fn square_of_binomial() {
        let t = xy();
        let s = p("x + y", &t).pow(2);
        assert_eq!(s, p("x^2 + 2*x*y + y^2", &t));
    }

    #[test]
    fn substitute_constant() {
        let t = xy();
        let mut b = BTreeMap::new();
        b.insert("x".to_string(), MultiPoly::one(&t));
        assert!(p("x^2 - 1", &t).substitute(&b).unwrap().is_zero());
        b.insert("z".to_string(), MultiPoly::one(&t));
        assert!(matches!(
            p("x", &t).substitute(&b),
            Err(Error::UnknownVariable(v)) if v == "z"
        ));
    }

    #[test]
    fn cleared_denominators_after_substitution() {
        // With a = -e*h/k, b = -e*h^2/k^2, c = e^2*h^2/k^3, dividing by k and
        // writing s = e/k, t = h/k must give -s*t, -s*t^2, s^2*t^2. Check
        // k^(j+1) * entry_j(s,t) == numerator_j(e,h,k) under e = s*k, h = t*k.
        let t = VarTable::new(["e", "h", "k", "s", "t"]).unwrap();
        let mut b = BTreeMap::new();
        b.insert("e".to_string(), p("s*k", &t));
        b.insert("h".to_string(), p("t*k", &t));
        let cases = [
            ("-e*h", "k^2*(-s*t)"),
            ("-e*h^2", "k^3*(-s*t^2)"),
            ("e^2*h^2", "k^4*(s^2*t^2)"),
            ("h^2", "k^2*t^2"),
            ("-e^2*h", "k^3*(-s^2*t)"),
        ];
        for (num, cleared) in cases {
            assert_eq!(p(num, &t).substitute(&b).unwrap(), p(cleared, &t), "{num}");
        }
    }

    #[test]
    fn leading_terms_under_orders() {
        let t = xy();
        let lex = MonomialOrder::Lex;
        let grl = MonomialOrder::Grevlex;
        assert_eq!(
            p("x + y^2", &t).leading_term(lex).unwrap().0,
            Monomial::var(2, 0, 1)
        );
        assert_eq!(
            p("x + y^2", &t).leading_term(grl).unwrap().0,
            Monomial::var(2, 1, 2)
        );
        let (m, c) = p("x*y - 1", &t).leading_term(lex).unwrap();
        assert_eq!(m, Monomial::from_exponents(vec![1, 1]));
        assert!(c.is_one());
        assert!(matches!(
            MultiPoly::zero(&t).leading_term(lex),
            Err(Error::NoLeadingTerm)
        ));
    }

    #[test]
    fn identically_zero() {
        let t = VarTable::new(["x", "kappa"]).unwrap();
        assert!(p("(x+1)*(x-1) - x^2 + 1", &t).is_zero_identically());
        assert!(p("kappa*x - x*kappa", &t).is_zero_identically());
        assert!(!p("x - kappa", &t).is_zero_identically());
    }

    #[test]
    fn print_parse_round_trip() {
        let t = VarTable::new(["b_23_11", "b_23_22", "alpha"]).unwrap();
        let s = "b_23_11*b_23_22 - 1/2*alpha^2";
        let q = p(s, &t);
        assert_eq!(p(&q.to_string(), &t), q);
        assert_eq!(p("-x^2 + 3/4", &xy()).to_string(), "-x^2 + 3/4");
        assert_eq!(MultiPoly::zero(&t).to_string(), "0");
    }

    #[test]
    fn constants_mix_with_any_table() {
        let t = xy();
        let c = MultiPoly::constant(&VarTable::empty(), Rational::from_int(3));
        let s = &c + &p("x", &t);
        assert_eq!(s, p("x + 3", &t));
        let other = VarTable::new(["z"]).unwrap();
        assert!(p("x", &t).checked_add(&p("z", &other)).is_err());
    }

    #[test]
    fn elimination_order_blocks() {
        let ord = MonomialOrder::Elimination(1);
        // x dominates any power of y.
        let x = Monomial::var(2, 0, 1);
        let y5 = Monomial::var(2, 1, 5);
        assert_eq!(ord.cmp(&x, &y5), Ordering::Greater);
    }
}

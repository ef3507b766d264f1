//! Automorphisms and antiautomorphisms of `U_3` acting on elements and operators.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::groebner::{buchberger, Limits, PolySystem};
use crate::linalg;
use crate::matrix::{BasisIndex, UTMatrix};
use crate::poly::{MonomialOrder, MultiPoly, VarTable};
use crate::rational::{bigint_divisors, Rational};
use crate::rb::{scale_operator, Operator};

/// Parameters of the automorphism `ψ`; `alpha` and `delta` must be nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutoParams {
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    pub delta: Rational,
    pub epsilon: Rational,
}

impl AutoParams {
    pub fn new(
        alpha: impl Into<Rational>,
        beta: impl Into<Rational>,
        gamma: impl Into<Rational>,
        delta: impl Into<Rational>,
        epsilon: impl Into<Rational>,
    ) -> Self {
        AutoParams {
            alpha: alpha.into(),
            beta: beta.into(),
            gamma: gamma.into(),
            delta: delta.into(),
            epsilon: epsilon.into(),
        }
    }

    pub fn identity() -> Self {
        AutoParams::new(1, 0, 0, 1, 0)
    }
}

impl fmt::Display for AutoParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "psi(alpha={}, beta={}, gamma={}, delta={}, epsilon={})",
            self.alpha, self.beta, self.gamma, self.delta, self.epsilon
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Automorphism,
    Antiautomorphism,
}

/// A bijective linear map of `U_n` that preserves or reverses products.
#[derive(Clone, PartialEq)]
pub struct AlgebraMap {
    kind: MapKind,
    n: usize,
    /// Image of each basis element, canonical order.
    images: Vec<UTMatrix<Rational>>,
}

impl AlgebraMap {
    /// Checks invertibility and (anti)multiplicativity on all basis pairs.
    pub fn new(kind: MapKind, n: usize, images: Vec<UTMatrix<Rational>>) -> Result<Self> {
        let map = AlgebraMap { kind, n, images };
        if linalg::determinant(&map.matrix()).is_zero() {
            return Err(Error::InvalidArgument("map is not invertible".into()));
        }
        let basis = BasisIndex::all(n);
        for &u in &basis {
            for &v in &basis {
                let prod = match u.product(&v) {
                    Some(w) => map.images[w.position(n)].clone(),
                    None => UTMatrix::zero(n),
                };
                let (a, b) = (&map.images[u.position(n)], &map.images[v.position(n)]);
                let expected = match kind {
                    MapKind::Automorphism => a.mul(b),
                    MapKind::Antiautomorphism => b.mul(a),
                };
                if prod != expected {
                    return Err(Error::InvalidArgument(format!(
                        "map is not {}: fails on ({u}, {v})",
                        match kind {
                            MapKind::Automorphism => "multiplicative",
                            MapKind::Antiautomorphism => "antimultiplicative",
                        }
                    )));
                }
            }
        }
        Ok(map)
    }

    pub fn identity(n: usize) -> Self {
        let images = BasisIndex::all(n)
            .into_iter()
            .map(|b| UTMatrix::basis(n, b))
            .collect();
        AlgebraMap {
            kind: MapKind::Automorphism,
            n,
            images,
        }
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn image(&self, idx: BasisIndex) -> &UTMatrix<Rational> {
        &self.images[idx.position(self.n)]
    }

    /// Columns are the images of the basis elements.
    pub fn matrix(&self) -> Vec<Vec<Rational>> {
        let cols: Vec<Vec<Rational>> = self.images.iter().map(|m| m.to_vector()).collect();
        (0..cols.len())
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect()
    }

    fn from_matrix(kind: MapKind, n: usize, m: &[Vec<Rational>]) -> Self {
        let d = m.len();
        let images = (0..d)
            .map(|j| {
                let col: Vec<Rational> = (0..d).map(|i| m[i][j].clone()).collect();
                UTMatrix::from_vector(n, &col)
            })
            .collect();
        AlgebraMap { kind, n, images }
    }

    pub fn apply<C: Coeff>(&self, x: &UTMatrix<C>) -> UTMatrix<C> {
        let mut out = UTMatrix::zero(self.n);
        for (idx, c) in x.entries() {
            let img = &self.images[idx.position(self.n)];
            out = out.add(&img.map(|q| C::from_rational(q.clone())).scale(c));
        }
        out
    }

    pub fn inverse(&self) -> AlgebraMap {
        let inv = linalg::inverse(&self.matrix()).expect("algebra maps are invertible");
        AlgebraMap::from_matrix(self.kind, self.n, &inv)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AlgebraMap) -> AlgebraMap {
        let kind = if self.kind == other.kind {
            MapKind::Automorphism
        } else {
            MapKind::Antiautomorphism
        };
        let images = other.images.iter().map(|m| self.apply(m)).collect();
        AlgebraMap {
            kind,
            n: self.n,
            images,
        }
    }
}

impl fmt::Debug for AlgebraMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[", self.kind)?;
        for (b, img) in BasisIndex::all(self.n).into_iter().zip(&self.images) {
            write!(f, "{b} -> {img}; ")?;
        }
        write!(f, "]")
    }
}

/// The automorphism `ψ` of `U_3` with the given parameters.
pub fn build_psi(p: &AutoParams) -> Result<AlgebraMap> {
    if p.alpha.is_zero() || p.delta.is_zero() {
        return Err(Error::InvalidArgument(
            "psi needs alpha and delta nonzero".into(),
        ));
    }
    let AutoParams {
        alpha: a,
        beta: b,
        gamma: g,
        delta: d,
        epsilon: e,
    } = p;
    let dinv = d.inv().unwrap();
    let col = |terms: Vec<(&str, Rational)>| {
        let mut m = UTMatrix::zero(3);
        for (name, c) in terms {
            let idx = BasisIndex::parse(name).unwrap();
            let v = &m.get(idx) + &c;
            m.set(idx, v);
        }
        m
    };
    let be_d = &(b * e) * &dinv;
    let images = vec![
        col(vec![
            ("e11", Rational::one()),
            ("e12", b.clone()),
            ("e13", g.clone()),
        ]),
        col(vec![("e12", d.clone()), ("e13", e.clone())]),
        col(vec![("e13", a.clone())]),
        col(vec![
            ("e12", -b),
            ("e13", -&be_d),
            ("e22", Rational::one()),
            ("e23", e * &dinv),
        ]),
        col(vec![("e13", -&(&(a * b) * &dinv)), ("e23", a * &dinv)]),
        col(vec![
            ("e13", &be_d - g),
            ("e23", -&(e * &dinv)),
            ("e33", Rational::one()),
        ]),
    ];
    AlgebraMap::new(MapKind::Automorphism, 3, images)
}

/// The antiautomorphism `X -> Z X^T Z` of `U_3`, `Z` the antidiagonal unit.
pub fn theta13() -> AlgebraMap {
    let images = BasisIndex::all(3)
        .into_iter()
        .map(|b| UTMatrix::basis(3, BasisIndex::new(4 - b.col, 4 - b.row)))
        .collect();
    AlgebraMap::new(MapKind::Antiautomorphism, 3, images).expect("theta13")
}

/// `φ⁻¹ ∘ R ∘ φ`; the weight is kept.
pub fn conjugate_operator<C: Coeff>(r: &Operator<C>, phi: &AlgebraMap) -> Operator<C> {
    let inv = phi.inverse();
    let n = r.n();
    let images = BasisIndex::all(n)
        .into_iter()
        .map(|b| {
            let x = phi.image(b).map(|q| C::from_rational(q.clone()));
            inv.apply(&r.apply(&x).expect("compatible operator"))
        })
        .collect();
    Operator::from_images(n, images)
        .expect("shape")
        .with_weight(r.weight().clone())
        .with_params(r.params().clone())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MapSpec {
    #[serde(rename = "psi")]
    Psi(AutoParams),
    #[serde(rename = "theta13")]
    Theta13,
}

impl MapSpec {
    pub fn build(&self) -> Result<AlgebraMap> {
        match self {
            MapSpec::Psi(p) => build_psi(p),
            MapSpec::Theta13 => Ok(theta13()),
        }
    }
}

impl fmt::Display for MapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapSpec::Psi(p) => write!(f, "{p}"),
            MapSpec::Theta13 => write!(f, "theta13"),
        }
    }
}

/// A sequence of maps `[m1, m2, ...]` standing for `φ = m1 ∘ m2 ∘ ...`,
/// and a nonzero scalar `k`.
///
/// On operators the witness acts by `R -> k⁻¹ φ⁻¹ R φ`, which is the same as
/// conjugating by `m1`, then `m2`, and so on. On elements it acts by
/// `x -> φ⁻¹(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub maps: Vec<MapSpec>,
    pub scalar: Rational,
}

impl Witness {
    pub fn identity() -> Self {
        Witness {
            maps: Vec::new(),
            scalar: Rational::one(),
        }
    }

    pub fn from_maps(maps: Vec<MapSpec>) -> Self {
        Witness {
            maps,
            scalar: Rational::one(),
        }
    }

    /// The composite `φ`.
    pub fn map(&self) -> Result<AlgebraMap> {
        let mut phi = AlgebraMap::identity(3);
        for m in &self.maps {
            phi = phi.compose(&m.build()?);
        }
        Ok(phi)
    }

    pub fn apply_element<C: Coeff>(&self, x: &UTMatrix<C>) -> Result<UTMatrix<C>> {
        let mut out = x.clone();
        for m in &self.maps {
            out = m.build()?.inverse().apply(&out);
        }
        Ok(out)
    }

    pub fn apply_operator<C: Coeff>(&self, r: &Operator<C>) -> Result<Operator<C>> {
        let mut out = r.clone();
        for m in &self.maps {
            out = conjugate_operator(&out, &m.build()?);
        }
        scale_operator(&out, &self.scalar)
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.maps.is_empty() {
            write!(f, "identity")?;
        }
        for (i, m) in self.maps.iter().enumerate() {
            if i > 0 {
                write!(f, " then ")?;
            }
            write!(f, "{m}")?;
        }
        if !self.scalar.is_one() {
            write!(f, ", scalar {}", self.scalar)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Canonical forms
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NilpotentForm {
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "e12")]
    E12,
    #[serde(rename = "e13")]
    E13,
    #[serde(rename = "e12+e23")]
    E12PlusE23,
}

impl NilpotentForm {
    pub fn matrix(&self) -> UTMatrix<Rational> {
        let s = match self {
            NilpotentForm::Zero => return UTMatrix::zero(3),
            NilpotentForm::E12 => "e12",
            NilpotentForm::E13 => "e13",
            NilpotentForm::E12PlusE23 => "e12 + e23",
        };
        UTMatrix::<Rational>::parse(s, 3).unwrap()
    }
}

impl fmt::Display for NilpotentForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NilpotentForm::Zero => "0",
            NilpotentForm::E12 => "e12",
            NilpotentForm::E13 => "e13",
            NilpotentForm::E12PlusE23 => "e12+e23",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IdempotentForm {
    #[serde(rename = "e11")]
    E11,
    #[serde(rename = "e22")]
    E22,
    #[serde(rename = "e11+e22")]
    E11PlusE22,
    #[serde(rename = "e11+e33")]
    E11PlusE33,
}

impl IdempotentForm {
    pub fn matrix(&self) -> UTMatrix<Rational> {
        let s = match self {
            IdempotentForm::E11 => "e11",
            IdempotentForm::E22 => "e22",
            IdempotentForm::E11PlusE22 => "e11 + e22",
            IdempotentForm::E11PlusE33 => "e11 + e33",
        };
        UTMatrix::<Rational>::parse(s, 3).unwrap()
    }
}

impl fmt::Display for IdempotentForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdempotentForm::E11 => "e11",
            IdempotentForm::E22 => "e22",
            IdempotentForm::E11PlusE22 => "e11+e22",
            IdempotentForm::E11PlusE33 => "e11+e33",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Canonical<F> {
    pub form: F,
    pub witness: Witness,
}

fn entry(m: &UTMatrix<Rational>, i: u8, j: u8) -> Rational {
    m.get(BasisIndex::new(i, j))
}

fn psi(a: Rational, b: Rational, g: Rational, d: Rational, e: Rational) -> MapSpec {
    MapSpec::Psi(AutoParams {
        alpha: a,
        beta: b,
        gamma: g,
        delta: d,
        epsilon: e,
    })
}

/// Brings a strictly upper-triangular `N` to one of `0, e12, e13, e12+e23`.
pub fn canonicalize_nilpotent(nil: &UTMatrix<Rational>) -> Result<Canonical<NilpotentForm>> {
    if nil.n() != 3 || !nil.is_strictly_upper() {
        return Err(Error::InvalidArgument(format!("{nil} is not nilpotent")));
    }
    let (a, b, c) = (entry(nil, 1, 2), entry(nil, 1, 3), entry(nil, 2, 3));
    let (z, one) = (Rational::zero(), Rational::one());
    let (form, maps) = match (a.is_zero(), b.is_zero(), c.is_zero()) {
        (true, true, true) => (NilpotentForm::Zero, vec![]),
        (false, _, true) => {
            let m = psi(one.clone(), z.clone(), z.clone(), a, b);
            (NilpotentForm::E12, vec![m])
        }
        (true, false, true) => {
            let m = psi(b, z.clone(), z.clone(), one, z);
            (NilpotentForm::E13, vec![m])
        }
        (false, _, false) => {
            let m = psi(&a * &c, z.clone(), z, a, b);
            (NilpotentForm::E12PlusE23, vec![m])
        }
        (true, _, false) => {
            let m = psi(one, z.clone(), z, c, b);
            (NilpotentForm::E12, vec![MapSpec::Theta13, m])
        }
    };
    let maps = maps
        .into_iter()
        .filter(|m| *m != MapSpec::Psi(AutoParams::identity()))
        .collect();
    Ok(Canonical {
        form,
        witness: Witness::from_maps(maps),
    })
}

/// Brings a rank 1 or rank 2 idempotent to one of the four diagonal forms.
pub fn canonicalize_idempotent(a: &UTMatrix<Rational>) -> Result<Canonical<IdempotentForm>> {
    if a.n() != 3 || !a.is_idempotent() {
        return Err(Error::InvalidArgument(format!("{a} is not idempotent")));
    }
    let d: Vec<bool> = (1..=3).map(|i| entry(a, i, i).is_one()).collect();
    let (z, one) = (Rational::zero(), Rational::one());
    let (form, maps) = match (d[0], d[1], d[2]) {
        (true, false, false) => {
            let m = psi(one.clone(), entry(a, 1, 2), entry(a, 1, 3), one, z);
            (IdempotentForm::E11, vec![m])
        }
        (false, true, false) => {
            let m = psi(one.clone(), -entry(a, 1, 2), z, one, entry(a, 2, 3));
            (IdempotentForm::E22, vec![m])
        }
        (false, false, true) => {
            let m = psi(one.clone(), entry(a, 2, 3), entry(a, 1, 3), one, z);
            (IdempotentForm::E11, vec![MapSpec::Theta13, m])
        }
        (true, true, false) => {
            let m = psi(
                one.clone(),
                entry(a, 1, 2),
                entry(a, 1, 3),
                one,
                entry(a, 2, 3),
            );
            (IdempotentForm::E11PlusE22, vec![m])
        }
        (true, false, true) => {
            let m = psi(one.clone(), entry(a, 1, 2), z, one, -entry(a, 2, 3));
            (IdempotentForm::E11PlusE33, vec![m])
        }
        (false, true, true) => {
            let m = psi(one.clone(), z, entry(a, 1, 3), one, entry(a, 1, 2));
            (IdempotentForm::E11PlusE22, vec![MapSpec::Theta13, m])
        }
        _ => {
            return Err(Error::InvalidArgument(format!(
                "{a} has rank 0 or 3; only rank 1 and 2 idempotents have canonical forms"
            )))
        }
    };
    let maps = maps
        .into_iter()
        .filter(|m| *m != MapSpec::Psi(AutoParams::identity()))
        .collect();
    Ok(Canonical {
        form,
        witness: Witness::from_maps(maps),
    })
}

// ---------------------------------------------------------------------------
// Conjugation search
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub allow_theta: bool,
    pub allow_scaling: bool,
    pub limits: Limits,
    /// Cap on the Groebner basis computations spent on back-substitution.
    pub max_solves: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            allow_theta: true,
            allow_scaling: true,
            limits: Limits::unlimited(),
            max_solves: 200,
        }
    }
}

/// Why one branch (with or without `Θ`) produced no witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BranchOutcome {
    pub theta: bool,
    /// The constraint ideal is `⟨1⟩`: no witness exists over any field extension.
    pub inconsistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SearchResult {
    Found(Witness),
    NotFound(Vec<BranchOutcome>),
}

const VARS: [&str; 8] = [
    "u", "dinv", "alpha", "beta", "gamma", "delta", "epsilon", "k",
];

/// Symbolic `ψ` over `VARS`, with `dinv` standing for `1/δ`.
fn symbolic_psi(t: &Arc<VarTable>) -> Vec<Vec<MultiPoly>> {
    let v = |s: &str| MultiPoly::var(t, s).unwrap();
    let (a, b, g, d, e, di) = (
        v("alpha"),
        v("beta"),
        v("gamma"),
        v("delta"),
        v("epsilon"),
        v("dinv"),
    );
    let z = MultiPoly::zero(t);
    let one = MultiPoly::one(t);
    let be_d = &(&b * &e) * &di;
    // Columns in basis order e11, e12, e13, e22, e23, e33.
    let cols = [
        [
            one.clone(),
            b.clone(),
            g.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
        ],
        [
            z.clone(),
            d.clone(),
            e.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
        ],
        [
            z.clone(),
            z.clone(),
            a.clone(),
            z.clone(),
            z.clone(),
            z.clone(),
        ],
        [z.clone(), -&b, -&be_d, one.clone(), &e * &di, z.clone()],
        [
            z.clone(),
            z.clone(),
            -&(&(&a * &b) * &di),
            z.clone(),
            &a * &di,
            z.clone(),
        ],
        [
            z.clone(),
            z.clone(),
            &be_d - &g,
            z.clone(),
            -&(&e * &di),
            one,
        ],
    ];
    (0..6)
        .map(|r| (0..6).map(|c| cols[c][r].clone()).collect())
        .collect()
}

fn poly_matmul(
    a: &[Vec<MultiPoly>],
    b: &[Vec<MultiPoly>],
    t: &Arc<VarTable>,
) -> Vec<Vec<MultiPoly>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut s = MultiPoly::zero(t);
                    for k in 0..n {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            s = &s + &(&a[i][k] * &b[k][j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn constant_matrix(m: &[Vec<Rational>], t: &Arc<VarTable>) -> Vec<Vec<MultiPoly>> {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|q| MultiPoly::constant(t, q.clone()))
                .collect()
        })
        .collect()
}

/// Rational roots of a univariate polynomial given by its coefficients
/// (index = degree).
fn rational_roots(coeffs: &[Rational]) -> Option<Vec<Rational>> {
    let mut c: Vec<Rational> = coeffs.to_vec();
    while c.last().is_some_and(Rational::is_zero) {
        c.pop();
    }
    let mut roots = Vec::new();
    let lead_zeros = c.iter().take_while(|x| x.is_zero()).count();
    if lead_zeros > 0 {
        roots.push(Rational::zero());
        c.drain(..lead_zeros);
    }
    if c.len() <= 1 {
        return Some(roots);
    }
    // Clear denominators.
    let mut l = BigInt::one();
    for x in &c {
        let d = x.denom();
        l = num_integer::Integer::lcm(&l, &d);
    }
    let ints: Vec<BigInt> = c.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let ps = bigint_divisors(&ints[0], 4096)?;
    let qs = bigint_divisors(ints.last().unwrap(), 4096)?;
    let eval = |r: &Rational| {
        let mut acc = Rational::zero();
        for x in c.iter().rev() {
            acc = &(&acc * r) + x;
        }
        acc
    };
    let mut found = std::collections::BTreeSet::new();
    for p in &ps {
        for q in &qs {
            for s in [p.clone(), -p.clone()] {
                let r = Rational::from_bigints(s, q.clone());
                if !found.contains(&r) && eval(&r).is_zero() {
                    found.insert(r);
                }
            }
        }
    }
    roots.extend(found);
    Some(roots)
}

fn free_candidates() -> Vec<Rational> {
    [0, 1, -1, 2, -2, 3]
        .into_iter()
        .map(Rational::from_int)
        .collect()
}

enum Solve {
    Point(Vec<Rational>),
    Inconsistent,
    NoRationalPoint,
}

/// Finds a rational point of the ideal by lex Groebner bases and
/// back-substitution, last variable first.
fn find_point(
    gens: Vec<MultiPoly>,
    table: &Arc<VarTable>,
    limits: &Limits,
    budget: &mut usize,
) -> Result<Solve> {
    if *budget == 0 {
        return Ok(Solve::NoRationalPoint);
    }
    *budget -= 1;
    let sys = PolySystem::new(table.clone(), gens.clone(), MonomialOrder::Lex)?;
    let gb = buchberger(&sys, limits)?;
    if gb.is_unit_ideal() {
        return Ok(Solve::Inconsistent);
    }
    let nv = table.len();
    // Variables already pinned by a basis element `x - c`.
    let mut values: Vec<Option<Rational>> = vec![None; nv];
    for g in &gb.basis {
        if let Some((coeffs, c)) = g.linear_coefficients() {
            let nz: Vec<usize> = (0..nv).filter(|&i| !coeffs[i].is_zero()).collect();
            if nz.len() == 1 {
                values[nz[0]] = Some(-&(&c / &coeffs[nz[0]]));
            }
        }
    }
    let Some(v) = (0..nv).rev().find(|&i| values[i].is_none()) else {
        return Ok(Solve::Point(
            values.into_iter().map(Option::unwrap).collect(),
        ));
    };
    // Substitute the pinned later variables and look for a univariate relation in v.
    let pinned: BTreeMap<usize, Rational> = (v + 1..nv)
        .map(|i| (i, values[i].clone().unwrap()))
        .collect();
    let mut univariate = None;
    for g in &gb.basis {
        let s = g.specialize(&pinned);
        let vars = s.variables();
        if !s.is_zero() && vars == [v] {
            let deg = s.total_degree().unwrap() as usize;
            let mut coeffs = vec![Rational::zero(); deg + 1];
            for (m, c) in s.terms() {
                coeffs[m.exponents()[v] as usize] = c.clone();
            }
            univariate = Some(coeffs);
            break;
        }
    }
    let candidates = match univariate {
        Some(coeffs) => rational_roots(&coeffs).unwrap_or_default(),
        None => free_candidates(),
    };
    for c in candidates {
        let mut next = gb.basis.clone();
        next.push(&MultiPoly::var_idx(table, v) - &MultiPoly::constant(table, c));
        match find_point(next, table, limits, budget)? {
            Solve::Point(p) => return Ok(Solve::Point(p)),
            Solve::Inconsistent | Solve::NoRationalPoint => {}
        }
    }
    Ok(Solve::NoRationalPoint)
}

/// Looks for `φ` (optionally `Θ ∘ ψ`) and `k` with `k⁻¹ φ⁻¹ R φ = S`.
pub fn find_conjugation(
    r: &Operator<Rational>,
    s: &Operator<Rational>,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    if r.n() != 3 || s.n() != 3 {
        return Err(Error::InvalidArgument(
            "conjugation search is for U_3".into(),
        ));
    }
    let table = VarTable::new(VARS)?;
    let var = |name: &str| MultiPoly::var(&table, name).unwrap();
    let psi_m = symbolic_psi(&table);
    let rm = constant_matrix(&r.matrix(), &table);
    let sm = constant_matrix(&s.matrix(), &table);
    let mut outcomes = Vec::new();
    let branches: &[bool] = if opts.allow_theta {
        &[false, true]
    } else {
        &[false]
    };
    for &theta in branches {
        let phi = if theta {
            poly_matmul(
                &constant_matrix(&theta13().matrix(), &table),
                &psi_m,
                &table,
            )
        } else {
            psi_m.clone()
        };
        let lhs = poly_matmul(&rm, &phi, &table);
        let rhs = poly_matmul(&phi, &sm, &table);
        let k = if opts.allow_scaling {
            var("k")
        } else {
            MultiPoly::one(&table)
        };
        let mut gens = Vec::new();
        for i in 0..6 {
            for j in 0..6 {
                let p = &lhs[i][j] - &(&k * &rhs[i][j]);
                if !p.is_zero() {
                    gens.push(p);
                }
            }
        }
        gens.push(&(&var("delta") * &var("dinv")) - &MultiPoly::one(&table));
        let nz = &(&(&var("u") * &var("alpha")) * &var("delta")) * &k;
        gens.push(&nz - &MultiPoly::one(&table));
        if !opts.allow_scaling {
            gens.push(&var("k") - &MultiPoly::one(&table));
        }
        let mut budget = opts.max_solves;
        match find_point(gens, &table, &opts.limits, &mut budget)? {
            Solve::Point(p) => {
                let at = |name: &str| p[table.index_of(name).unwrap()].clone();
                let params = AutoParams {
                    alpha: at("alpha"),
                    beta: at("beta"),
                    gamma: at("gamma"),
                    delta: at("delta"),
                    epsilon: at("epsilon"),
                };
                let mut maps = Vec::new();
                if theta {
                    maps.push(MapSpec::Theta13);
                }
                if params != AutoParams::identity() {
                    maps.push(MapSpec::Psi(params));
                }
                let w = Witness {
                    maps,
                    scalar: at("k"),
                };
                // Replay; a mismatch would be an engine bug.
                if w.apply_operator(r)?.images() != s.images() {
                    return Err(Error::InvalidArgument(format!("witness {w} failed replay")));
                }
                return Ok(SearchResult::Found(w));
            }
            Solve::Inconsistent => outcomes.push(BranchOutcome {
                theta,
                inconsistent: true,
            }),
            Solve::NoRationalPoint => outcomes.push(BranchOutcome {
                theta,
                inconsistent: false,
            }),
        }
    }
    Ok(SearchResult::NotFound(outcomes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(s: &str) -> UTMatrix<Rational> {
        UTMatrix::<Rational>::parse(s, 3).unwrap()
    }

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn psi_columns() {
        let p = AutoParams::new(2, 3, 5, 7, 11);
        let m = build_psi(&p).unwrap();
        assert_eq!(m.image(BasisIndex::new(1, 3)), &e("2*e13"));
        assert_eq!(m.image(BasisIndex::new(2, 3)), &e("2/7*e23 - 6/7*e13"));
        let id = build_psi(&AutoParams::identity()).unwrap();
        assert_eq!(id, AlgebraMap::identity(3));
        assert!(build_psi(&AutoParams::new(0, 0, 0, 1, 0)).is_err());
        assert!(build_psi(&AutoParams::new(1, 0, 0, 0, 0)).is_err());
    }

    #[test]
    fn theta_properties() {
        let t = theta13();
        assert_eq!(t.apply(&e("e12")), e("e23"));
        assert_eq!(t.compose(&t), AlgebraMap::identity(3));
        assert_eq!(t.apply(&e("e13")), e("e13"));
        assert_eq!(t.kind(), MapKind::Antiautomorphism);
    }

    #[test]
    fn conjugation_example_r8() {
        // R(e23) = e22 + t*e12 with t = 3, conjugated by beta = -t.
        let mut r = Operator::<Rational>::zero(3);
        r.set_image(BasisIndex::new(2, 3), e("e22 + 3*e12"));
        assert!(r.is_rb());
        let phi = build_psi(&AutoParams::new(1, -3, 0, 1, 0)).unwrap();
        let c = conjugate_operator(&r, &phi);
        let mut r8 = Operator::<Rational>::zero(3);
        r8.set_image(BasisIndex::new(2, 3), e("e22"));
        assert_eq!(c, r8);
    }

    #[test]
    fn nilpotent_examples() {
        let c = canonicalize_nilpotent(&e("e23")).unwrap();
        assert_eq!(c.form, NilpotentForm::E12);
        assert_eq!(c.witness.maps, vec![MapSpec::Theta13]);
        let c = canonicalize_nilpotent(&e("2*e12 + 6*e13")).unwrap();
        assert_eq!(c.form, NilpotentForm::E12);
        assert_eq!(
            c.witness.apply_element(&e("2*e12 + 6*e13")).unwrap(),
            e("e12")
        );
        let c = canonicalize_nilpotent(&e("e12 + e23")).unwrap();
        assert_eq!(c.witness, Witness::identity());
        assert!(canonicalize_nilpotent(&e("e11")).is_err());
    }

    #[test]
    fn idempotent_examples() {
        let a = e("e11 + 3*e12 + 5*e13");
        let c = canonicalize_idempotent(&a).unwrap();
        assert_eq!(c.form, IdempotentForm::E11);
        assert_eq!(c.witness.maps, vec![psi(q(1), q(3), q(5), q(1), q(0))]);
        let c = canonicalize_idempotent(&e("e33")).unwrap();
        assert_eq!(c.witness.maps, vec![MapSpec::Theta13]);
        assert_eq!(c.form, IdempotentForm::E11);
        assert!(canonicalize_idempotent(&UTMatrix::unit(3)).is_err());
        assert!(canonicalize_idempotent(&e("2*e11")).is_err());
    }

    #[test]
    fn rational_root_search() {
        // 2x^2 - 3x + 1 = (2x - 1)(x - 1)
        let r = rational_roots(&[q(1), q(-3), q(2)]).unwrap();
        assert_eq!(r, vec![Rational::new(1, 2), q(1)]);
        assert!(rational_roots(&[q(-2), q(0), q(1)]).unwrap().is_empty());
        assert_eq!(rational_roots(&[q(0), q(1)]).unwrap(), vec![q(0)]);
    }

    #[test]
    fn self_conjugation_is_identity() {
        let mut r = Operator::<Rational>::zero(3);
        r.set_image(BasisIndex::new(1, 2), e("e11"));
        match find_conjugation(&r, &r, &SearchOptions::default()).unwrap() {
            SearchResult::Found(w) => assert_eq!(w.apply_operator(&r).unwrap(), r),
            other => panic!("{other:?}"),
        }
    }
}

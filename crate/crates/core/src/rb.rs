//! Linear operators on `U_n` and the Rota-Baxter identity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::groebner::{buchberger, Limits, PolySystem};
use crate::linalg;
use crate::matrix::{BasisIndex, UTMatrix};
use crate::poly::{unify_tables, MonomialOrder, MultiPoly, VarTable};
use crate::rational::Rational;

/// A linear map `U_n -> U_n`, stored by the images of the basis elements.
///
/// `images[j]` is `R(e_j)` for the j-th basis element in canonical order, so
/// the coefficient matrix has these images as its columns.
#[derive(Clone, PartialEq)]
pub struct Operator<C: Coeff> {
    n: usize,
    images: Vec<UTMatrix<C>>,
    weight: Rational,
    params: Arc<VarTable>,
}

impl<C: Coeff> Operator<C> {
    pub fn zero(n: usize) -> Self {
        let d = n * (n + 1) / 2;
        Operator {
            n,
            images: vec![UTMatrix::zero(n); d],
            weight: Rational::zero(),
            params: VarTable::empty(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let images = BasisIndex::all(n)
            .into_iter()
            .map(|b| UTMatrix::basis(n, b))
            .collect();
        Operator {
            n,
            images,
            weight: Rational::zero(),
            params: VarTable::empty(),
        }
    }

    pub fn from_images(n: usize, images: Vec<UTMatrix<C>>) -> Result<Self> {
        if images.len() != n * (n + 1) / 2 || images.iter().any(|m| m.n() != n) {
            return Err(Error::InvalidArgument(format!(
                "an operator on U_{n} needs {} images in U_{n}",
                n * (n + 1) / 2
            )));
        }
        Ok(Operator {
            n,
            images,
            weight: Rational::zero(),
            params: VarTable::empty(),
        })
    }

    pub fn with_weight(mut self, weight: Rational) -> Self {
        self.weight = weight;
        self
    }

    pub fn with_params(mut self, params: Arc<VarTable>) -> Self {
        self.params = params;
        self
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weight(&self) -> &Rational {
        &self.weight
    }

    pub fn params(&self) -> &Arc<VarTable> {
        &self.params
    }

    pub fn dim(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[UTMatrix<C>] {
        &self.images
    }

    pub fn image(&self, idx: BasisIndex) -> &UTMatrix<C> {
        &self.images[idx.position(self.n)]
    }

    pub fn set_image(&mut self, idx: BasisIndex, value: UTMatrix<C>) {
        assert_eq!(value.n(), self.n);
        let p = idx.position(self.n);
        self.images[p] = value;
    }

    /// Coefficient of `e_row` in `R(e_col)`.
    pub fn coeff(&self, row: usize, col: usize) -> C {
        self.images[col].to_vector()[row].clone()
    }

    /// The coefficient matrix (rows indexed by output basis element).
    pub fn matrix(&self) -> Vec<Vec<C>> {
        let cols: Vec<Vec<C>> = self.images.iter().map(|m| m.to_vector()).collect();
        (0..self.dim())
            .map(|r| cols.iter().map(|c| c[r].clone()).collect())
            .collect()
    }

    pub fn from_matrix(n: usize, m: &[Vec<C>]) -> Self {
        let d = n * (n + 1) / 2;
        let images = (0..d)
            .map(|j| {
                let col: Vec<C> = (0..d).map(|i| m[i][j].clone()).collect();
                UTMatrix::from_vector(n, &col)
            })
            .collect();
        Operator {
            n,
            images,
            weight: Rational::zero(),
            params: VarTable::empty(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.images.iter().all(UTMatrix::is_zero)
    }

    pub fn apply(&self, x: &UTMatrix<C>) -> Result<UTMatrix<C>> {
        if x.n() != self.n {
            return Err(Error::Incompatible(format!(
                "element of U_{} given to an operator on U_{}",
                x.n(),
                self.n
            )));
        }
        let mut out = UTMatrix::zero(self.n);
        for (idx, c) in x.entries() {
            let img = &self.images[idx.position(self.n)];
            for (_, v) in img.entries() {
                if !c.compatible(v) {
                    return Err(Error::Incompatible("coefficient rings differ".into()));
                }
            }
            out = out.add(&img.scale(c));
        }
        Ok(out)
    }

    fn apply_unchecked(&self, x: &UTMatrix<C>) -> UTMatrix<C> {
        let mut out = UTMatrix::zero(self.n);
        for (idx, c) in x.entries() {
            out = out.add(&self.images[idx.position(self.n)].scale(c));
        }
        out
    }

    /// `R(1)`.
    pub fn unit_image(&self) -> UTMatrix<C> {
        self.apply_unchecked(&UTMatrix::unit(self.n))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Operator<C>) -> Operator<C> {
        let images = other
            .images
            .iter()
            .map(|m| self.apply_unchecked(m))
            .collect();
        Operator {
            n: self.n,
            images,
            weight: self.weight.clone(),
            params: self.params.clone(),
        }
    }

    pub fn pow(&self, k: u32) -> Operator<C> {
        let mut acc = Operator::identity(self.n)
            .with_weight(self.weight.clone())
            .with_params(self.params.clone());
        for _ in 0..k {
            acc = self.compose(&acc);
        }
        acc
    }

    /// Least `k >= 1` with `R^k = 0`, searching up to `dim + 1`.
    pub fn nilpotency_index(&self) -> Option<u32> {
        let mut p = self.clone();
        for k in 1..=self.dim() as u32 + 1 {
            if p.is_zero() {
                return Some(k);
            }
            p = self.compose(&p);
        }
        None
    }

    pub fn add(&self, other: &Operator<C>) -> Operator<C> {
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| a.add(b))
            .collect();
        Operator {
            images,
            ..self.clone()
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> Operator<C> {
        Operator {
            images: self.images.iter().map(|m| m.scale_rational(q)).collect(),
            ..self.clone()
        }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Operator<D> {
        Operator {
            n: self.n,
            images: self.images.iter().map(|m| m.map(&f)).collect(),
            weight: self.weight.clone(),
            params: self.params.clone(),
        }
    }

    pub fn to_symbolic(&self) -> Operator<MultiPoly> {
        let params = self.params.clone();
        self.map(|c| c.to_poly().lift(&params).expect("parameter table"))
    }

    /// Residual matrices for all ordered basis pairs, in canonical pair order.
    pub fn rb_residual(&self) -> RBResidual<C> {
        let basis = BasisIndex::all(self.n);
        let pairs: Vec<(BasisIndex, BasisIndex)> = basis
            .iter()
            .flat_map(|&u| basis.iter().map(move |&v| (u, v)))
            .collect();
        let lambda = C::from_rational(self.weight.clone());
        let entries = pairs
            .par_iter()
            .map(|&(u, v)| {
                let eu = UTMatrix::<C>::basis(self.n, u);
                let ev = UTMatrix::<C>::basis(self.n, v);
                let ru = self.image(u);
                let rv = self.image(v);
                let lhs = ru.mul(rv);
                let mut inner = ru.mul(&ev).add(&eu.mul(rv));
                if !self.weight.is_zero() {
                    inner = inner.add(&eu.mul(&ev).scale(&lambda));
                }
                let rhs = self.apply_unchecked(&inner);
                (u, v, lhs.sub(&rhs))
            })
            .collect();
        RBResidual { entries }
    }

    pub fn is_rb(&self) -> bool {
        self.rb_residual().is_zero()
    }

    /// Value of `R(x)R(y) - R(R(x)y + xR(y) + λxy)` at arbitrary elements.
    pub fn residual_at(&self, x: &UTMatrix<C>, y: &UTMatrix<C>) -> UTMatrix<C> {
        let rx = self.apply_unchecked(x);
        let ry = self.apply_unchecked(y);
        let mut inner = rx.mul(y).add(&x.mul(&ry));
        if !self.weight.is_zero() {
            inner = inner.add(&x.mul(y).scale_rational(&self.weight));
        }
        rx.mul(&ry).sub(&self.apply_unchecked(&inner))
    }
}

impl Operator<Rational> {
    pub fn rank(&self) -> usize {
        linalg::rank(self.matrix())
    }

    /// Whether `target` lies in the image (exact linear solvability).
    pub fn image_contains(&self, target: &UTMatrix<Rational>) -> bool {
        linalg::solve(&self.matrix(), &target.to_vector()).is_some()
    }
}

impl Operator<MultiPoly> {
    /// Rank over the field of rational functions in the parameters.
    pub fn generic_rank(&self) -> usize {
        linalg::rank_poly(self.matrix())
    }

    /// Substitutes values for all parameters.
    pub fn evaluate(&self, values: &[Rational]) -> Operator<Rational> {
        assert_eq!(values.len(), self.params.len());
        Operator {
            n: self.n,
            images: self.images.iter().map(|m| m.evaluate(values)).collect(),
            weight: self.weight.clone(),
            params: VarTable::empty(),
        }
    }

    /// Substitutes polynomials for named parameters; the result lives over `target`.
    pub fn substitute(
        &self,
        bindings: &BTreeMap<String, MultiPoly>,
        target: &Arc<VarTable>,
    ) -> Result<Operator<MultiPoly>> {
        let var_images = self
            .params
            .names()
            .iter()
            .map(|name| match bindings.get(name) {
                Some(p) => p.retarget(target),
                None => MultiPoly::var(target, name),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut images = Vec::with_capacity(self.images.len());
        for m in &self.images {
            let mut out = UTMatrix::zero(self.n);
            for (idx, c) in m.entries() {
                let c = c.lift(&self.params)?;
                out.set(*idx, c.substitute_images(&var_images, target)?);
            }
            images.push(out);
        }
        Ok(Operator {
            n: self.n,
            images,
            weight: self.weight.clone(),
            params: target.clone(),
        })
    }

    /// The constant operator, if no parameter occurs.
    pub fn as_rational(&self) -> Option<Operator<Rational>> {
        let mut images = Vec::new();
        for m in &self.images {
            let mut out = UTMatrix::zero(self.n);
            for (idx, c) in m.entries() {
                out.set(*idx, c.as_constant()?);
            }
            images.push(out);
        }
        Some(Operator {
            n: self.n,
            images,
            weight: self.weight.clone(),
            params: VarTable::empty(),
        })
    }
}

impl<C: Coeff> fmt::Display for Operator<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (b, img) in BasisIndex::all(self.n).into_iter().zip(&self.images) {
            if img.is_zero() {
                continue;
            }
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "R({b}) = {img}")?;
        }
        if first {
            write!(f, "R = 0")?;
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Operator<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator({self})")
    }
}

/// `R(u)R(v) - R(R(u)v + uR(v) + λuv)` for every ordered basis pair.
#[derive(Clone, Debug)]
pub struct RBResidual<C: Coeff> {
    pub entries: Vec<(BasisIndex, BasisIndex, UTMatrix<C>)>,
}

impl<C: Coeff> RBResidual<C> {
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.2.is_zero())
    }

    pub fn first_nonzero(&self) -> Option<&(BasisIndex, BasisIndex, UTMatrix<C>)> {
        self.entries.iter().find(|e| !e.2.is_zero())
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|e| !e.2.is_zero()).count()
    }

    pub fn get(&self, u: BasisIndex, v: BasisIndex) -> Option<&UTMatrix<C>> {
        self.entries
            .iter()
            .find(|e| e.0 == u && e.1 == v)
            .map(|e| &e.2)
    }
}

/// `k⁻¹ R`. A weight `λ` becomes `λ/k`, so weight zero is preserved.
pub fn scale_operator<C: Coeff>(r: &Operator<C>, k: &Rational) -> Result<Operator<C>> {
    let inv = k
        .inv()
        .ok_or_else(|| Error::InvalidArgument("scaling by zero".into()))?;
    let mut out = r.scale_rational(&inv);
    out.weight = &r.weight * &inv;
    Ok(out)
}

// ---------------------------------------------------------------------------
// System generation
// ---------------------------------------------------------------------------

/// The name of the coefficient of `e_k` in `R(e_u)`.
pub fn coeff_var(u: BasisIndex, k: BasisIndex) -> String {
    format!("b_{}{}_{}{}", u.row, u.col, k.row, k.col)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Constraint {
    /// `R(x) = y`, imposed coordinatewise.
    Image {
        x: UTMatrix<Rational>,
        y: UTMatrix<Rational>,
    },
    /// A polynomial in the coefficient variables, linear, set to zero.
    Linear(String),
}

/// Which operators a generated system ranges over.
#[derive(Clone, Debug, PartialEq)]
pub struct Ansatz {
    pub n: usize,
    pub weight: Rational,
    /// Allowed support of each image; basis elements not listed are unrestricted.
    pub support: BTreeMap<BasisIndex, Vec<BasisIndex>>,
    /// Images given outright.
    pub fixed: BTreeMap<BasisIndex, UTMatrix<Rational>>,
    pub constraints: Vec<Constraint>,
    /// Polynomials assumed nonzero, encoded with auxiliary inverse variables.
    pub nonzero: Vec<String>,
}

impl Ansatz {
    pub fn new(n: usize) -> Self {
        Ansatz {
            n,
            weight: Rational::zero(),
            support: BTreeMap::new(),
            fixed: BTreeMap::new(),
            constraints: Vec::new(),
            nonzero: Vec::new(),
        }
    }

    /// A fully fixed operator: the generated system consists of constants.
    pub fn fixed_operator(r: &Operator<Rational>) -> Self {
        let mut a = Ansatz::new(r.n());
        a.weight = r.weight().clone();
        for (b, img) in BasisIndex::all(r.n()).into_iter().zip(r.images()) {
            a.fixed.insert(b, img.clone());
        }
        a
    }

    /// All coefficient variables in canonical order.
    pub fn variables(&self) -> Vec<String> {
        let basis = BasisIndex::all(self.n);
        let mut out = Vec::new();
        for &u in &basis {
            if self.fixed.contains_key(&u) {
                continue;
            }
            match self.support.get(&u) {
                Some(allowed) => {
                    for &k in &basis {
                        if allowed.contains(&k) {
                            out.push(coeff_var(u, k));
                        }
                    }
                }
                None => out.extend(basis.iter().map(|&k| coeff_var(u, k))),
            }
        }
        out
    }

    /// The constraints as polynomials over the table of `raw`, which must be
    /// [`Ansatz::raw_operator`].
    pub fn constraint_polys(&self, raw: &Operator<MultiPoly>) -> Result<Vec<MultiPoly>> {
        let full = raw.params();
        let mut out = Vec::new();
        for c in &self.constraints {
            match c {
                Constraint::Image { x, y } => {
                    let rx = raw.apply(&x.map(|q| MultiPoly::constant(full, q.clone())))?;
                    for k in BasisIndex::all(self.n) {
                        let yk = MultiPoly::constant(full, y.get(k));
                        out.push(&rx.get(k).lift(full)? - &yk);
                    }
                }
                Constraint::Linear(s) => out.push(MultiPoly::parse(s, full)?),
            }
        }
        Ok(out)
    }

    /// The general operator of the ansatz before constraints are applied.
    pub fn raw_operator(&self) -> Result<Operator<MultiPoly>> {
        let table = VarTable::new(self.variables())?;
        let basis = BasisIndex::all(self.n);
        let mut images = Vec::new();
        for &u in &basis {
            let mut m = UTMatrix::zero(self.n);
            if let Some(f) = self.fixed.get(&u) {
                for (k, c) in f.entries() {
                    m.set(*k, MultiPoly::constant(&table, c.clone()));
                }
            } else {
                for &k in &basis {
                    if let Some(i) = table.index_of(&coeff_var(u, k)) {
                        m.set(k, MultiPoly::var_idx(&table, i));
                    }
                }
            }
            images.push(m);
        }
        Ok(Operator::from_images(self.n, images)?
            .with_weight(self.weight.clone())
            .with_params(table))
    }
}

/// The output of [`generate_system`].
#[derive(Clone, Debug)]
pub struct GeneratedSystem {
    /// Residual components after eliminating the linear constraints.
    pub system: PolySystem,
    /// The constrained operator, over the free variables (and auxiliaries).
    pub operator: Operator<MultiPoly>,
    /// All coefficient variables of the ansatz, before elimination.
    pub full_table: Arc<VarTable>,
    /// Eliminated variable -> expression in the remaining ones.
    pub eliminated: BTreeMap<String, MultiPoly>,
    /// Auxiliary inverse variables, one per nonzero assumption.
    pub auxiliaries: Vec<String>,
}

impl GeneratedSystem {
    /// Rewrites a polynomial in the full coefficient variables into the
    /// system's variables by applying the linear elimination.
    pub fn reduce_input(&self, p: &MultiPoly) -> Result<MultiPoly> {
        let table = unify_tables(p.table(), &self.full_table)?;
        let p = p.lift(&table)?;
        let target = unify_tables(&self.system.table, &VarTable::empty())?;
        let bindings: BTreeMap<String, MultiPoly> = self
            .eliminated
            .iter()
            .filter(|(k, _)| table.index_of(k).is_some())
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        p.substitute(&bindings)?.retarget(&target)
    }

    /// Parses a polynomial over the full variable set and reduces it.
    pub fn parse_input(&self, s: &str) -> Result<MultiPoly> {
        let names: Vec<String> = self
            .full_table
            .names()
            .iter()
            .chain(self.auxiliaries.iter())
            .cloned()
            .collect();
        let t = VarTable::new(names)?;
        self.reduce_input(&MultiPoly::parse(s, &t)?)
    }
}

/// Builds the polynomial system whose solutions are the RB operators
/// (of the ansatz weight) matching the ansatz.
pub fn generate_system(ansatz: &Ansatz, order: MonomialOrder) -> Result<GeneratedSystem> {
    let raw = ansatz.raw_operator()?;
    let full = raw.params().clone();
    let nv = full.len();

    // Linear constraints as rows [coeffs | -constant].
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for p in &ansatz.constraint_polys(&raw)? {
        let (coeffs, constant) = p
            .linear_coefficients()
            .ok_or_else(|| Error::InvalidArgument(format!("constraint `{p}` is not linear")))?;
        let mut row = coeffs;
        row.push(-constant);
        rows.push(row);
    }
    let pivots = linalg::rref(&mut rows);
    if pivots.contains(&nv) {
        return Err(Error::ContradictoryAnsatz(
            "the linear constraints are inconsistent".into(),
        ));
    }
    let pivot_set: BTreeSet<usize> = pivots.iter().copied().collect();
    let free: Vec<String> = (0..nv)
        .filter(|i| !pivot_set.contains(i))
        .map(|i| full.name(i).to_string())
        .collect();
    let auxiliaries: Vec<String> = (1..=ansatz.nonzero.len())
        .map(|i| format!("nz_{i}"))
        .collect();
    let table = VarTable::new(free.iter().chain(&auxiliaries).cloned())?;

    // pivot variable = rhs - sum of free coefficients
    let mut eliminated = BTreeMap::new();
    for (r, &pc) in pivots.iter().enumerate() {
        let mut e = MultiPoly::constant(&table, rows[r][nv].clone());
        for (c, coeff) in rows[r][..nv].iter().enumerate() {
            if c != pc && !coeff.is_zero() {
                let v = table.index_of(full.name(c)).expect("free variable");
                e = &e - &MultiPoly::var_idx(&table, v).scale(coeff);
            }
        }
        eliminated.insert(full.name(pc).to_string(), e);
    }
    let mut bindings = eliminated.clone();
    for name in &free {
        bindings.insert(name.clone(), MultiPoly::var(&table, name)?);
    }
    let operator = raw.substitute(&bindings, &table)?;

    let mut gens: Vec<MultiPoly> = Vec::new();
    let mut seen = BTreeSet::new();
    let residual = operator.rb_residual();
    for (_, _, m) in &residual.entries {
        for (_, c) in m.entries() {
            let p = c.lift(&table)?;
            let key = p.monic(MonomialOrder::Grevlex).to_string();
            if seen.insert(key) {
                gens.push(p);
            }
        }
    }
    let aux_table = VarTable::new(full.names().iter().chain(&auxiliaries).cloned())?;
    for (i, s) in ansatz.nonzero.iter().enumerate() {
        let q = MultiPoly::parse(s, &aux_table)?;
        let mut b = bindings.clone();
        b.insert(
            auxiliaries[i].clone(),
            MultiPoly::var(&table, &auxiliaries[i])?,
        );
        let q = q.substitute(&b)?.retarget(&table)?;
        let u = MultiPoly::var(&table, &auxiliaries[i])?;
        gens.push(&(&u * &q) - &MultiPoly::one(&table));
    }
    Ok(GeneratedSystem {
        system: PolySystem::new(table, gens, order)?,
        operator,
        full_table: full,
        eliminated,
        auxiliaries,
    })
}

// ---------------------------------------------------------------------------
// Split construction
// ---------------------------------------------------------------------------

fn in_span(basis: &[UTMatrix<Rational>], x: &UTMatrix<Rational>) -> bool {
    if x.is_zero() {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let cols: Vec<Vec<Rational>> = basis.iter().map(|b| b.to_vector()).collect();
    let d = cols[0].len();
    let a: Vec<Vec<Rational>> = (0..d)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect();
    linalg::solve(&a, &x.to_vector()).is_some()
}

/// The operator vanishing on `span(C)` and sending `B[i]` to `images[i]`.
///
/// Requires `B ∪ C` to be a basis, `C·C = 0`, `C` to be a two-sided ideal
/// and every image to lie in `span(C)`; then the result is RB of weight 0.
pub fn split_construction<C: Coeff>(
    b_basis: &[UTMatrix<Rational>],
    c_basis: &[UTMatrix<Rational>],
    images: &[UTMatrix<C>],
) -> Result<Operator<C>> {
    let n = b_basis
        .first()
        .or(c_basis.first())
        .map(|m| m.n())
        .ok_or_else(|| Error::InvalidArgument("empty basis".into()))?;
    if images.len() != b_basis.len() {
        return Err(Error::InvalidArgument(
            "one image per element of B is required".into(),
        ));
    }
    let d = n * (n + 1) / 2;
    let all: Vec<UTMatrix<Rational>> = b_basis.iter().chain(c_basis).cloned().collect();
    let change: Vec<Vec<Rational>> = {
        let cols: Vec<Vec<Rational>> = all.iter().map(|m| m.to_vector()).collect();
        (0..d)
            .map(|i| {
                cols.iter()
                    .map(|c| c.get(i).cloned().unwrap_or_default())
                    .collect()
            })
            .collect()
    };
    if all.len() != d || linalg::rank(change.clone()) != d {
        return Err(Error::Hypothesis(
            "B ∪ C is not a basis of the algebra".into(),
        ));
    }
    for x in c_basis {
        for y in c_basis {
            if !x.mul(y).is_zero() {
                return Err(Error::Hypothesis(format!("C·C = 0 fails: ({x})·({y}) ≠ 0")));
            }
        }
    }
    for x in b_basis {
        for y in c_basis {
            if !in_span(c_basis, &x.mul(y)) {
                return Err(Error::Hypothesis(format!(
                    "bimodule: ({x})·({y}) is not in span(C)"
                )));
            }
            if !in_span(c_basis, &y.mul(x)) {
                return Err(Error::Hypothesis(format!(
                    "bimodule: ({y})·({x}) is not in span(C)"
                )));
            }
        }
    }
    // Functionals vanishing on span(C); an image lies in span(C) iff all vanish on it.
    let c_rows: Vec<Vec<Rational>> = c_basis.iter().map(|m| m.to_vector()).collect();
    let annihilators = linalg::nullspace(&c_rows, d);
    for (x, img) in b_basis.iter().zip(images) {
        let v = img.to_vector();
        for w in &annihilators {
            let mut acc = C::zero();
            for (wi, vi) in w.iter().zip(&v) {
                if !wi.is_zero() {
                    acc = acc.plus(&vi.scaled(wi));
                }
            }
            if !acc.is_zero() {
                return Err(Error::Hypothesis(format!("image of {x} is not in span(C)")));
            }
        }
    }
    let inv = linalg::inverse(&change).expect("basis");
    // e_j = sum_i inv[i][j] * all[i]; only the B-part contributes.
    let images_out: Vec<UTMatrix<C>> = (0..d)
        .map(|j| {
            let mut acc = UTMatrix::zero(n);
            for (i, img) in images.iter().enumerate() {
                let c = &inv[i][j];
                if !c.is_zero() {
                    acc = acc.add(&img.scale_rational(c));
                }
            }
            acc
        })
        .collect();
    Operator::from_images(n, images_out)
}

// ---------------------------------------------------------------------------
// Unital-algebra checks
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct UnitalReport {
    /// `1` is not in the image, for any parameter values.
    pub unit_not_in_image: bool,
    /// `R(1) = 0` implies `R² = 0` (vacuously true otherwise).
    pub zero_unit_image_square_zero: bool,
    /// `R(1)^k = k!·R^k(1)` for `k = 1, 2, 3`.
    pub power_identity: bool,
    /// `R(1)^3 = 0`.
    pub unit_image_cubed_zero: bool,
}

impl UnitalReport {
    pub fn ok(&self) -> bool {
        self.unit_not_in_image
            && self.zero_unit_image_square_zero
            && self.power_identity
            && self.unit_image_cubed_zero
    }
}

/// Whether `R(x) = 1` has no solution for any parameter values.
///
/// Over parameters this is certified by the reduced Groebner basis of the
/// coordinates of `R(x) - 1`, with `x` and the parameters as unknowns,
/// being `{1}`.
pub fn unit_not_in_image(r: &Operator<MultiPoly>, limits: &Limits) -> Result<bool> {
    if let Some(q) = r.as_rational() {
        return Ok(!q.image_contains(&UTMatrix::unit(r.n())));
    }
    let xs: Vec<String> = (1..=r.dim()).map(|i| format!("x_{i}")).collect();
    let table = r.params().extended(&xs)?;
    let np = r.params().len();
    let mut gens = Vec::new();
    let m = r.matrix();
    let one = UTMatrix::<Rational>::unit(r.n()).to_vector();
    for (row, target) in m.iter().zip(&one) {
        let mut p = MultiPoly::constant(&table, -target);
        for (j, c) in row.iter().enumerate() {
            if !c.is_zero() {
                p = &p + &(&c.lift(&table)? * &MultiPoly::var_idx(&table, np + j));
            }
        }
        gens.push(p);
    }
    let gb = buchberger(
        &PolySystem::new(table, gens, MonomialOrder::Grevlex)?,
        limits,
    )?;
    Ok(gb.is_unit_ideal())
}

pub fn check_unital(r: &Operator<MultiPoly>) -> Result<UnitalReport> {
    let unit = UTMatrix::<MultiPoly>::unit(r.n());
    let r1 = r.apply(&unit)?;
    let zero_case = if r1.is_zero() {
        r.compose(r).is_zero()
    } else {
        true
    };
    let mut power_identity = true;
    let mut rk = unit.clone();
    for k in 1..=3u32 {
        rk = r.apply(&rk)?;
        let lhs = r1.pow(k);
        let rhs = rk.scale_rational(&Rational::factorial(k));
        if !lhs.sub(&rhs).is_zero() {
            power_identity = false;
        }
    }
    Ok(UnitalReport {
        unit_not_in_image: unit_not_in_image(r, &Limits::unlimited())?,
        zero_unit_image_square_zero: zero_case,
        power_identity,
        unit_image_cubed_zero: r1.pow(3).is_zero(),
    })
}

//! Buchberger's algorithm over the rationals.
//!
//! Pair handling follows the Gebauer-Moeller installation of Buchberger's
//! product and chain criteria. Pairs are selected by the normal strategy
//! (smallest lcm degree, then smallest pair index); reducers are searched in
//! descending leading-monomial order. With a fixed input order the whole
//! run, and therefore its statistics, is deterministic.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{unify_tables, Monomial, MonomialOrder, MultiPoly, VarTable};
use crate::rational::Rational;

/// A finite generating set of an ideal together with the order to use.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem {
    pub table: Arc<VarTable>,
    pub generators: Vec<MultiPoly>,
    pub order: MonomialOrder,
}

impl PolySystem {
    /// Lifts every generator to `table`; zero generators are dropped.
    pub fn new(
        table: Arc<VarTable>,
        generators: impl IntoIterator<Item = MultiPoly>,
        order: MonomialOrder,
    ) -> Result<Self> {
        let mut gens = Vec::new();
        for g in generators {
            let g = g.lift(&table)?;
            if !g.is_zero() {
                gens.push(g);
            }
        }
        Ok(PolySystem {
            table,
            generators: gens,
            order,
        })
    }

    pub fn with_order(&self, order: MonomialOrder) -> Self {
        PolySystem {
            order,
            ..self.clone()
        }
    }
}

/// Caps on a Buchberger run. `None` means unbounded.
#[derive(Debug, Clone, Default)]
pub struct Limits {
    pub max_pairs: Option<usize>,
    pub max_basis_size: Option<usize>,
    pub deadline: Option<Instant>,
}

impl Limits {
    pub fn unlimited() -> Self {
        Limits::default()
    }

    pub fn with_timeout(timeout: Duration) -> Self {
        Limits {
            deadline: Some(Instant::now() + timeout),
            ..Limits::default()
        }
    }

    pub fn max_pairs(mut self, n: usize) -> Self {
        self.max_pairs = Some(n);
        self
    }

    pub fn max_basis_size(mut self, n: usize) -> Self {
        self.max_basis_size = Some(n);
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbStats {
    pub pairs_processed: usize,
    pub reductions: usize,
    pub zero_reductions: usize,
    pub product_criterion: usize,
    pub chain_criterion: usize,
    pub max_basis_size: usize,
}

/// State returned when a run hits a resource limit. `basis` generates the
/// same ideal as the input but is not (yet) a Groebner basis.
#[derive(Debug, Clone)]
pub struct PartialBasis {
    pub reason: String,
    pub basis: Vec<MultiPoly>,
    pub pending_pairs: usize,
    pub stats: GbStats,
}

/// A reduced Groebner basis of `system`, sorted by descending leading monomial.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    pub system: PolySystem,
    pub basis: Vec<MultiPoly>,
    pub reduced: bool,
    pub stats: GbStats,
}

// ---------------------------------------------------------------------------
// Internal sparse representation: terms ascending, leading term last.
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
struct GPoly {
    terms: Vec<(Monomial, Rational)>,
}

impl GPoly {
    fn from_poly(p: &MultiPoly, ord: MonomialOrder) -> GPoly {
        let mut terms: Vec<(Monomial, Rational)> =
            p.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        if ord == MonomialOrder::Grevlex {
            terms.reverse();
        } else {
            terms.sort_by(|a, b| ord.cmp(&a.0, &b.0));
        }
        GPoly { terms }
    }

    fn to_poly(&self, table: &Arc<VarTable>) -> MultiPoly {
        MultiPoly::from_terms(table, self.terms.iter().cloned())
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Monomial {
        &self.terms.last().unwrap().0
    }

    fn lc(&self) -> &Rational {
        &self.terms.last().unwrap().1
    }

    fn make_monic(&mut self) {
        if let Some((_, c)) = self.terms.last() {
            if !c.is_one() {
                let inv = c.inv().unwrap();
                for t in self.terms.iter_mut() {
                    t.1 = &t.1 * &inv;
                }
            }
        }
    }

    /// `self - c * m * g`, merged in order.
    fn sub_scaled(&self, c: &Rational, m: &Monomial, g: &GPoly, ord: MonomialOrder) -> GPoly {
        let mut out = Vec::with_capacity(self.terms.len() + g.terms.len());
        let mut a = self.terms.iter().peekable();
        let mut b = g
            .terms
            .iter()
            .map(|(gm, gc)| (gm.mul(m), gc * c))
            .peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => out.push(a.next().unwrap().clone()),
                (None, Some(_)) => {
                    let (bm, bc) = b.next().unwrap();
                    out.push((bm, -bc));
                }
                (Some(x), Some(y)) => match ord.cmp(&x.0, &y.0) {
                    Ordering::Less => out.push(a.next().unwrap().clone()),
                    Ordering::Greater => {
                        let (bm, bc) = b.next().unwrap();
                        out.push((bm, -bc));
                    }
                    Ordering::Equal => {
                        let (am, ac) = a.next().unwrap();
                        let (_, bc) = b.next().unwrap();
                        let s = ac - &bc;
                        if !s.is_zero() {
                            out.push((am.clone(), s));
                        }
                    }
                },
            }
        }
        GPoly { terms: out }
    }
}

/// Leading-monomial data of the current reducer set, kept in descending
/// leading-monomial order.
struct Reducers {
    /// Indices into the polynomial store, sorted by descending LM.
    order: Vec<usize>,
    masks: Vec<u64>,
}

fn support_mask(m: &Monomial) -> u64 {
    let mut mask = 0u64;
    for (i, &e) in m.exponents().iter().enumerate() {
        if e > 0 {
            mask |= 1 << (i % 64);
        }
    }
    mask
}

impl Reducers {
    fn new() -> Self {
        Reducers {
            order: Vec::new(),
            masks: Vec::new(),
        }
    }

    fn insert(&mut self, idx: usize, polys: &[GPoly], ord: MonomialOrder) {
        let lm = polys[idx].lm();
        let pos = self
            .order
            .partition_point(|&j| ord.cmp(polys[j].lm(), lm) == Ordering::Greater);
        self.order.insert(pos, idx);
        if self.masks.len() <= idx {
            self.masks.resize(idx + 1, 0);
        }
        self.masks[idx] = support_mask(lm);
    }

    fn remove(&mut self, idx: usize) {
        self.order.retain(|&j| j != idx);
    }

    fn find(&self, m: &Monomial, polys: &[GPoly]) -> Option<usize> {
        let mask = support_mask(m);
        self.order
            .iter()
            .copied()
            .find(|&j| self.masks[j] & !mask == 0 && polys[j].lm().divides(m))
    }
}

/// Full reduction of `p`; the result has no term divisible by a reducer LM.
fn reduce_full(
    p: GPoly,
    reducers: &Reducers,
    polys: &[GPoly],
    ord: MonomialOrder,
    steps: &mut usize,
) -> GPoly {
    let mut p = p;
    // Irreducible terms, collected in descending order.
    let mut done: Vec<(Monomial, Rational)> = Vec::new();
    while let Some((m, c)) = p.terms.last() {
        match reducers.find(m, polys) {
            Some(j) => {
                let g = &polys[j];
                let q = g.lm().quotient_of(m);
                let coeff = c / g.lc();
                let mut head_removed = p.clone();
                head_removed.terms.pop();
                let mut g_tail = g.clone();
                g_tail.terms.pop();
                p = head_removed.sub_scaled(&coeff, &q, &g_tail, ord);
                *steps += 1;
            }
            None => {
                done.push(p.terms.pop().unwrap());
            }
        }
    }
    done.reverse();
    GPoly { terms: done }
}

fn reducers_from(basis: &[GPoly], ord: MonomialOrder) -> Reducers {
    let mut r = Reducers::new();
    for i in 0..basis.len() {
        r.insert(i, basis, ord);
    }
    r
}

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

/// `S(f, g) = (L/lt(f)) f - (L/lt(g)) g` with `L` the lcm of the leading monomials.
pub fn s_polynomial(f: &MultiPoly, g: &MultiPoly, ord: MonomialOrder) -> Result<MultiPoly> {
    let table = unify_tables(f.table(), g.table())?;
    let f = f.lift(&table)?;
    let g = g.lift(&table)?;
    let (mf, cf) = f.leading_term(ord)?;
    let (mg, cg) = g.leading_term(ord)?;
    let l = mf.lcm(&mg);
    let a = f.mul_monomial(&mf.quotient_of(&l), &cf.inv().unwrap());
    let b = g.mul_monomial(&mg.quotient_of(&l), &cg.inv().unwrap());
    a.checked_sub(&b)
}

/// Remainder of multivariate division of `p` by `basis` (zero divisors are ignored).
pub fn normal_form(p: &MultiPoly, basis: &[MultiPoly], ord: MonomialOrder) -> Result<MultiPoly> {
    let mut table = p.table().clone();
    for b in basis {
        table = unify_tables(&table, b.table())?;
    }
    let polys: Vec<GPoly> = basis
        .iter()
        .filter(|b| !b.is_zero())
        .map(|b| {
            let mut g = GPoly::from_poly(&b.lift(&table).unwrap(), ord);
            g.make_monic();
            g
        })
        .collect();
    let reducers = reducers_from(&polys, ord);
    let mut steps = 0;
    let r = reduce_full(
        GPoly::from_poly(&p.lift(&table)?, ord),
        &reducers,
        &polys,
        ord,
        &mut steps,
    );
    Ok(r.to_poly(&table))
}

#[derive(Clone, Copy)]
struct Pair {
    i: usize,
    j: usize,
    deg: u32,
}

struct Engine<'a> {
    ord: MonomialOrder,
    polys: Vec<GPoly>,
    basis: BTreeSet<usize>,
    reducers: Reducers,
    pairs: Vec<Pair>,
    stats: GbStats,
    limits: &'a Limits,
}

impl<'a> Engine<'a> {
    fn lcm(&self, i: usize, j: usize) -> Monomial {
        self.polys[i].lm().lcm(self.polys[j].lm())
    }

    /// Gebauer-Moeller update with the new basis element `h`.
    fn update(&mut self, h: usize) {
        let lm_h = self.polys[h].lm().clone();
        let mut candidates: Vec<(usize, Monomial, bool)> = self
            .basis
            .iter()
            .map(|&g| {
                let lm_g = self.polys[g].lm();
                (g, lm_h.lcm(lm_g), lm_h.is_coprime(lm_g))
            })
            .collect();
        // Keep a candidate if coprime, or if no other candidate's lcm divides
        // its lcm (ties broken by keeping the earliest).
        let mut kept: Vec<(usize, Monomial, bool)> = Vec::new();
        for k in 0..candidates.len() {
            let (g, ref l, coprime) = candidates[k];
            let dominated = !coprime
                && candidates
                    .iter()
                    .enumerate()
                    .any(|(k2, (_, l2, _))| k2 != k && l2.divides(l) && (l2 != l || k2 < k));
            if dominated {
                self.stats.chain_criterion += 1;
            } else {
                kept.push((g, l.clone(), coprime));
            }
        }
        candidates.clear();
        let mut new_pairs = Vec::new();
        // Among kept pairs with equal lcm, a coprime one makes the rest redundant.
        for (k, (g, l, coprime)) in kept.iter().enumerate() {
            if *coprime {
                self.stats.product_criterion += 1;
                continue;
            }
            let shadowed = kept
                .iter()
                .enumerate()
                .any(|(k2, (_, l2, c2))| k2 != k && *c2 && l2 == l);
            if shadowed {
                self.stats.product_criterion += 1;
                continue;
            }
            new_pairs.push(Pair {
                i: *g,
                j: h,
                deg: l.degree(),
            });
        }
        // Old pairs whose lcm is a strict multiple through h are redundant.
        let mut retained = Vec::with_capacity(self.pairs.len());
        for p in std::mem::take(&mut self.pairs) {
            let l = self.lcm(p.i, p.j);
            if lm_h.divides(&l)
                && lm_h.lcm(self.polys[p.i].lm()) != l
                && lm_h.lcm(self.polys[p.j].lm()) != l
            {
                self.stats.chain_criterion += 1;
            } else {
                retained.push(p);
            }
        }
        retained.extend(new_pairs);
        self.pairs = retained;
        // Drop basis elements whose LM is a multiple of LM(h).
        let redundant: Vec<usize> = self
            .basis
            .iter()
            .copied()
            .filter(|&g| lm_h.divides(self.polys[g].lm()))
            .collect();
        for g in redundant {
            self.basis.remove(&g);
            self.reducers.remove(g);
        }
        self.basis.insert(h);
        self.reducers.insert(h, &self.polys, self.ord);
        self.stats.max_basis_size = self.stats.max_basis_size.max(self.basis.len());
    }

    fn select_pair(&mut self) -> Option<Pair> {
        let (k, _) = self
            .pairs
            .iter()
            .enumerate()
            .min_by_key(|(_, p)| (p.deg, p.i, p.j))?;
        Some(self.pairs.swap_remove(k))
    }

    fn check_limits(&self) -> Option<String> {
        if let Some(mp) = self.limits.max_pairs {
            if self.stats.pairs_processed >= mp {
                return Some(format!("pair limit {mp} reached"));
            }
        }
        if let Some(mb) = self.limits.max_basis_size {
            if self.basis.len() > mb {
                return Some(format!("basis size limit {mb} exceeded"));
            }
        }
        if let Some(d) = self.limits.deadline {
            if Instant::now() >= d {
                return Some("deadline reached".to_string());
            }
        }
        None
    }

    fn add(&mut self, mut p: GPoly) -> usize {
        p.make_monic();
        self.polys.push(p);
        let h = self.polys.len() - 1;
        self.update(h);
        h
    }

    fn spoly(&self, i: usize, j: usize) -> GPoly {
        let (f, g) = (&self.polys[i], &self.polys[j]);
        let l = f.lm().lcm(g.lm());
        let qf = f.lm().quotient_of(&l);
        let qg = g.lm().quotient_of(&l);
        // Both are monic; leading terms cancel, so work with the tails.
        let mut ft = f.clone();
        ft.terms.pop();
        let mut gt = g.clone();
        gt.terms.pop();
        let a = GPoly { terms: Vec::new() }.sub_scaled(&-Rational::one(), &qf, &ft, self.ord);
        a.sub_scaled(&Rational::one(), &qg, &gt, self.ord)
    }
}

fn partial(engine: &Engine, table: &Arc<VarTable>, reason: String) -> Error {
    Error::ResourceLimit(Box::new(PartialBasis {
        reason,
        basis: engine
            .basis
            .iter()
            .map(|&i| engine.polys[i].to_poly(table))
            .collect(),
        pending_pairs: engine.pairs.len(),
        stats: engine.stats.clone(),
    }))
}

/// Computes the reduced Groebner basis of `sys` under `sys.order`.
pub fn buchberger(sys: &PolySystem, limits: &Limits) -> Result<GroebnerBasis> {
    let ord = sys.order;
    let table = &sys.table;
    let mut engine = Engine {
        ord,
        polys: Vec::new(),
        basis: BTreeSet::new(),
        reducers: Reducers::new(),
        pairs: Vec::new(),
        stats: GbStats::default(),
        limits,
    };
    for g in &sys.generators {
        let gp = GPoly::from_poly(&g.lift(table)?, ord);
        let mut steps = 0;
        let r = reduce_full(gp, &engine.reducers, &engine.polys, ord, &mut steps);
        engine.stats.reductions += steps;
        if r.is_zero() {
            engine.stats.zero_reductions += 1;
            continue;
        }
        if r.lm().is_one() {
            return Ok(unit_ideal(sys, engine.stats));
        }
        engine.add(r);
        if let Some(reason) = engine.check_limits() {
            return Err(partial(&engine, table, reason));
        }
    }
    while let Some(pair) = engine.select_pair() {
        if let Some(reason) = engine.check_limits() {
            engine.pairs.push(pair);
            return Err(partial(&engine, table, reason));
        }
        engine.stats.pairs_processed += 1;
        let s = engine.spoly(pair.i, pair.j);
        let mut steps = 0;
        let r = reduce_full(s, &engine.reducers, &engine.polys, ord, &mut steps);
        engine.stats.reductions += steps;
        if r.is_zero() {
            engine.stats.zero_reductions += 1;
            continue;
        }
        if r.lm().is_one() {
            return Ok(unit_ideal(sys, engine.stats));
        }
        engine.add(r);
    }
    let basis: Vec<GPoly> = engine
        .basis
        .iter()
        .map(|&i| engine.polys[i].clone())
        .collect();
    let reduced = interreduce(basis, ord, &mut engine.stats);
    Ok(GroebnerBasis {
        system: sys.clone(),
        basis: reduced.iter().map(|g| g.to_poly(table)).collect(),
        reduced: true,
        stats: engine.stats,
    })
}

fn unit_ideal(sys: &PolySystem, stats: GbStats) -> GroebnerBasis {
    GroebnerBasis {
        system: sys.clone(),
        basis: vec![MultiPoly::one(&sys.table)],
        reduced: true,
        stats,
    }
}

/// Minimalises and fully inter-reduces a Groebner basis.
fn interreduce(mut basis: Vec<GPoly>, ord: MonomialOrder, stats: &mut GbStats) -> Vec<GPoly> {
    basis.sort_by(|a, b| ord.cmp(b.lm(), a.lm()));
    let mut minimal: Vec<GPoly> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let redundant = basis
            .iter()
            .enumerate()
            .any(|(k2, h)| k2 != k && h.lm().divides(g.lm()) && (h.lm() != g.lm() || k2 < k));
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<GPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(k2, _)| *k2 != k)
            .map(|(_, g)| g.clone())
            .collect();
        let reducers = reducers_from(&others, ord);
        let mut g = minimal[k].clone();
        let head = g.terms.pop().unwrap();
        let mut steps = 0;
        let mut tail = reduce_full(g, &reducers, &others, ord, &mut steps);
        stats.reductions += steps;
        tail.terms.push(head);
        tail.make_monic();
        out.push(tail);
    }
    out
}

impl GroebnerBasis {
    pub fn order(&self) -> MonomialOrder {
        self.system.order
    }

    pub fn table(&self) -> &Arc<VarTable> {
        &self.system.table
    }

    pub fn normal_form(&self, p: &MultiPoly) -> Result<MultiPoly> {
        normal_form(p, &self.basis, self.order())
    }

    /// Ideal membership: `p` reduces to zero modulo the basis.
    pub fn contains(&self, p: &MultiPoly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant() && !self.basis[0].is_zero()
    }

    /// Re-checks the defining properties from scratch.
    pub fn certify(&self) -> Result<GbCertificate> {
        let ord = self.order();
        let generators_reduce = self
            .system
            .generators
            .iter()
            .map(|g| self.contains(g))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .all(|b| b);
        let mut spairs_reduce = true;
        for i in 0..self.basis.len() {
            for j in i + 1..self.basis.len() {
                let s = s_polynomial(&self.basis[i], &self.basis[j], ord)?;
                if !self.contains(&s)? {
                    spairs_reduce = false;
                }
            }
        }
        let mut reduced = true;
        let lms: Vec<(Monomial, Rational)> = self
            .basis
            .iter()
            .map(|g| g.leading_term(ord))
            .collect::<Result<_>>()?;
        for (i, g) in self.basis.iter().enumerate() {
            if !lms[i].1.is_one() {
                reduced = false;
            }
            for (m, _) in g.terms() {
                for (j, (lm, _)) in lms.iter().enumerate() {
                    if i != j && lm.divides(m) {
                        reduced = false;
                    }
                }
            }
        }
        Ok(GbCertificate {
            generators_reduce,
            spairs_reduce,
            reduced,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GbCertificate {
    pub generators_reduce: bool,
    pub spairs_reduce: bool,
    pub reduced: bool,
}

impl GbCertificate {
    pub fn ok(&self) -> bool {
        self.generators_reduce && self.spairs_reduce && self.reduced
    }
}

pub fn ideal_member(p: &MultiPoly, gb: &GroebnerBasis) -> Result<bool> {
    gb.contains(p)
}

/// Generators of the elimination ideal `I ∩ Q[keep]`, over a table holding
/// only the `keep` variables (in their original relative order).
pub fn eliminate(sys: &PolySystem, keep: &[&str], limits: &Limits) -> Result<PolySystem> {
    for k in keep {
        if sys.table.index_of(k).is_none() {
            return Err(Error::UnknownVariable(k.to_string()));
        }
    }
    let keep_names: Vec<String> = sys
        .table
        .names()
        .iter()
        .filter(|n| keep.contains(&n.as_str()))
        .cloned()
        .collect();
    let elim_names: Vec<String> = sys
        .table
        .names()
        .iter()
        .filter(|n| !keep.contains(&n.as_str()))
        .cloned()
        .collect();
    let k = elim_names.len();
    let work = VarTable::new(elim_names.iter().chain(&keep_names).cloned())?;
    let gens = sys
        .generators
        .iter()
        .map(|g| g.retarget(&work))
        .collect::<Result<Vec<_>>>()?;
    let gb = buchberger(
        &PolySystem::new(work.clone(), gens, MonomialOrder::Elimination(k))?,
        limits,
    )?;
    let keep_table = VarTable::new(keep_names)?;
    let out = gb
        .basis
        .iter()
        .filter(|g| g.variables().iter().all(|&v| v >= k))
        .map(|g| g.retarget(&keep_table))
        .collect::<Result<Vec<_>>>()?;
    let order = match sys.order {
        MonomialOrder::Elimination(_) => MonomialOrder::Grevlex,
        o => o,
    };
    PolySystem::new(keep_table, out, order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(vars: &[&str], gens: &[&str], ord: MonomialOrder) -> PolySystem {
        let t = VarTable::new(vars.iter().copied()).unwrap();
        let g = gens
            .iter()
            .map(|s| MultiPoly::parse(s, &t).unwrap())
            .collect::<Vec<_>>();
        PolySystem::new(t, g, ord).unwrap()
    }

    fn strs(gb: &GroebnerBasis) -> Vec<String> {
        gb.basis
            .iter()
            .map(|g| g.to_string_with_order(gb.order()))
            .collect()
    }

    #[test]
    fn s_polynomial_examples() {
        let t = VarTable::new(["x", "y"]).unwrap();
        let p = |s: &str| MultiPoly::parse(s, &t).unwrap();
        let s = s_polynomial(&p("x^2 - 1"), &p("x*y - 1"), MonomialOrder::Lex).unwrap();
        assert_eq!(s, p("x - y"));
        let f = p("x^2 - 1");
        assert!(s_polynomial(&f, &f, MonomialOrder::Lex).unwrap().is_zero());
        let s = s_polynomial(&p("x^2"), &p("y^2"), MonomialOrder::Lex).unwrap();
        assert!(normal_form(&s, &[p("x^2"), p("y^2")], MonomialOrder::Lex)
            .unwrap()
            .is_zero());
        assert!(s_polynomial(&f, &MultiPoly::zero(&t), MonomialOrder::Lex).is_err());
    }

    #[test]
    fn normal_form_examples() {
        let t = VarTable::new(["x", "y"]).unwrap();
        let p = |s: &str| MultiPoly::parse(s, &t).unwrap();
        assert_eq!(
            normal_form(&p("x^2*y"), &[p("x^2 - y")], MonomialOrder::Grevlex).unwrap(),
            p("y^2")
        );
        let f = p("3*x*y + y^2 - 7");
        assert!(normal_form(&f, &[f.clone()], MonomialOrder::Grevlex)
            .unwrap()
            .is_zero());
        assert!(
            normal_form(&p("x - y"), &[p("x - y"), p("y^2 - 1")], MonomialOrder::Lex)
                .unwrap()
                .is_zero()
        );
    }

    #[test]
    fn small_basis_lex() {
        let s = sys(&["x", "y"], &["x^2 - 1", "x*y - 1"], MonomialOrder::Lex);
        let gb = buchberger(&s, &Limits::unlimited()).unwrap();
        assert_eq!(strs(&gb), ["x - y", "y^2 - 1"]);
        assert!(gb.certify().unwrap().ok());
    }

    #[test]
    fn linear_generator_is_its_own_basis() {
        let s = sys(&["x", "y"], &["x - y"], MonomialOrder::Grevlex);
        let gb = buchberger(&s, &Limits::unlimited()).unwrap();
        assert_eq!(strs(&gb), ["x - y"]);
    }

    #[test]
    fn unit_ideal_detected() {
        let s = sys(&["x"], &["x", "x - 1"], MonomialOrder::Grevlex);
        let gb = buchberger(&s, &Limits::unlimited()).unwrap();
        assert!(gb.is_unit_ideal());
    }

    #[test]
    fn resource_limit_reports_partial_state() {
        let s = sys(
            &["a", "b", "c", "d"],
            &[
                "a+b+c+d",
                "a*b+b*c+c*d+d*a",
                "a*b*c+b*c*d+c*d*a+d*a*b",
                "a*b*c*d-1",
            ],
            MonomialOrder::Grevlex,
        );
        match buchberger(&s, &Limits::unlimited().max_pairs(2)) {
            Err(Error::ResourceLimit(p)) => {
                assert!(p.reason.contains("pair limit"));
                assert!(!p.basis.is_empty());
            }
            other => panic!("expected resource limit, got {other:?}"),
        }
        let full = buchberger(&s, &Limits::unlimited()).unwrap();
        assert!(full.certify().unwrap().ok());
    }

    #[test]
    fn elimination_examples() {
        let s = sys(
            &["t", "x", "y"],
            &["x - t", "y - t^2"],
            MonomialOrder::Grevlex,
        );
        let e = eliminate(&s, &["x", "y"], &Limits::unlimited()).unwrap();
        assert_eq!(e.generators.len(), 1);
        let t = &e.table;
        let target = MultiPoly::parse("y - x^2", t).unwrap();
        assert!(e.generators[0] == target || e.generators[0] == -&target);

        let same = eliminate(&s, &["t", "x", "y"], &Limits::unlimited()).unwrap();
        let gb1 = buchberger(&s, &Limits::unlimited()).unwrap();
        let gb2 = buchberger(&same, &Limits::unlimited()).unwrap();
        assert_eq!(strs(&gb1), strs(&gb2));

        let s = sys(&["u", "x"], &["u*x - 1", "x"], MonomialOrder::Grevlex);
        let e = eliminate(&s, &["x"], &Limits::unlimited()).unwrap();
        assert_eq!(e.generators, vec![MultiPoly::one(&e.table)]);
    }
}

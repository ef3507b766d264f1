//! The forty families of weight-zero RB operators on `U_3`, their
//! certification, the derived invariants and the case driver.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::formats::{CaseFile, CatalogFile, SCHEMA_VERSION};
use crate::groebner::{buchberger, GbStats, GroebnerBasis, Limits, PolySystem};
use crate::matrix::{BasisIndex, UTMatrix};
use crate::poly::{MonomialOrder, MultiPoly, VarTable};
use crate::rational::Rational;
use crate::rb::{check_unital, generate_system, scale_operator, Ansatz, Operator, UnitalReport};
use crate::transform::{build_psi, conjugate_operator, theta13, AutoParams};

const CATALOG_JSON: &str = include_str!("../data/catalog.json");

const PRESETS: [(&str, &str); 5] = [
    ("sec4.1", include_str!("../data/cases/sec4.1.json")),
    ("sec5", include_str!("../data/cases/sec5.json")),
    (
        "sec5-subcase2.1",
        include_str!("../data/cases/sec5-subcase2.1.json"),
    ),
    ("sec6", include_str!("../data/cases/sec6.json")),
    ("sec7", include_str!("../data/cases/sec7.json")),
];

/// One family of the classification.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: String,
    pub operator: Operator<MultiPoly>,
    /// Conditions singling out representatives; not needed for the RB property.
    pub side_conditions: Vec<String>,
    pub provenance: String,
}

impl CatalogEntry {
    pub fn params(&self) -> &[String] {
        self.operator.params().names()
    }
}

/// Parses a catalog document without certifying it.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let file: CatalogFile = serde_json::from_str(text)?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(Error::Format(format!(
            "unsupported schema_version {}",
            file.schema_version
        )));
    }
    file.entries
        .into_iter()
        .map(|e| {
            Ok(CatalogEntry {
                operator: e
                    .operator
                    .to_operator()
                    .map_err(|err| Error::Format(format!("{}: {err}", e.id)))?,
                id: e.id,
                side_conditions: e.side_conditions,
                provenance: e.provenance,
            })
        })
        .collect()
}

/// The shipped catalog, without certification.
pub fn load_catalog() -> Vec<CatalogEntry> {
    parse_catalog(CATALOG_JSON).expect("shipped catalog parses")
}

/// The shipped catalog. Fails if some residual is not identically zero.
pub fn build_catalog() -> Result<Vec<CatalogEntry>> {
    let entries = load_catalog();
    let bad: Vec<String> = entries
        .par_iter()
        .filter_map(|e| {
            let res = e.operator.rb_residual();
            res.first_nonzero()
                .map(|(u, v, m)| format!("{}: residual at ({u}, {v}) is {m}", e.id))
        })
        .collect();
    if bad.is_empty() {
        Ok(entries)
    } else {
        Err(Error::Hypothesis(bad.join("; ")))
    }
}

pub fn find_entry<'a>(entries: &'a [CatalogEntry], id: &str) -> Option<&'a CatalogEntry> {
    entries.iter().find(|e| e.id.eq_ignore_ascii_case(id))
}

// ---------------------------------------------------------------------------
// Invariants
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RbIndex {
    /// Largest nilpotency degree over the entries.
    pub index: u32,
    pub degrees: Vec<(String, u32)>,
    /// Entries with `R² ≠ 0`.
    pub square_nonzero: Vec<String>,
}

/// Least `k` with `R^k = 0` identically in the parameters.
pub fn nilpotency_degree(r: &Operator<MultiPoly>) -> Option<u32> {
    r.nilpotency_index()
}

pub fn rb_index(entries: &[CatalogEntry]) -> RbIndex {
    let degrees: Vec<(String, u32)> = entries
        .par_iter()
        .map(|e| {
            let d = nilpotency_degree(&e.operator).unwrap_or(u32::MAX);
            (e.id.clone(), d)
        })
        .collect();
    RbIndex {
        index: degrees.iter().map(|(_, d)| *d).max().unwrap_or(1),
        square_nonzero: degrees
            .iter()
            .filter(|(_, d)| *d > 2)
            .map(|(id, _)| id.clone())
            .collect(),
        degrees,
    }
}

/// `dim Im(R)`: generic over the parameters, or at the given values.
pub fn image_dimension(entry: &CatalogEntry, at: Option<&[Rational]>) -> Result<usize> {
    match at {
        None => Ok(entry.operator.generic_rank()),
        Some(v) if v.len() == entry.params().len() => Ok(entry.operator.evaluate(v).rank()),
        Some(v) => Err(Error::InvalidArgument(format!(
            "{} takes {} parameters, got {}",
            entry.id,
            entry.params().len(),
            v.len()
        ))),
    }
}

// ---------------------------------------------------------------------------
// Full verification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    /// Random specializations per entry for the scaling and conjugation checks.
    pub samples: usize,
    pub seed: u64,
    /// Restrict to these ids; empty means all.
    pub families: Vec<String>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            samples: 100,
            seed: 1,
            families: Vec::new(),
        }
    }
}

/// The first nonzero residual entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidualFault {
    pub x: String,
    pub y: String,
    pub position: String,
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClosureReport {
    pub trials: usize,
    pub scaling_failures: usize,
    pub conjugation_failures: usize,
    pub theta_failures: usize,
}

impl ClosureReport {
    pub fn ok(&self) -> bool {
        self.scaling_failures + self.conjugation_failures + self.theta_failures == 0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub residual_zero: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<ResidualFault>,
    pub nonzero_residual_pairs: usize,
    pub nilpotency_degree: Option<u32>,
    pub image_dimension: usize,
    pub unit_image_consistent: bool,
    pub unital: UnitalReport,
    pub closure: ClosureReport,
    pub provenance: String,
}

impl EntryReport {
    pub fn ok(&self) -> bool {
        self.residual_zero
            && self.nilpotency_degree.is_some_and(|d| d <= 3)
            && self.unit_image_consistent
            && self.unital.ok()
            && self.closure.ok()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub schema_version: u32,
    pub samples: usize,
    pub seed: u64,
    pub entries: Vec<EntryReport>,
    pub rb_index: u32,
    pub square_nonzero: Vec<String>,
    pub passed: usize,
    pub all_ok: bool,
}

impl VerifyReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<5} {:<9} {:>3} {:>4} {:<6} {:<8} provenance",
            "id", "residual", "nil", "dim", "lemmas", "closure"
        );
        for e in &self.entries {
            let residual = match &e.fault {
                None => "0".to_string(),
                Some(f) => format!("({},{})", f.x, f.y),
            };
            let nil = e
                .nilpotency_degree
                .map_or_else(|| "-".to_string(), |d| d.to_string());
            let _ = writeln!(
                s,
                "{:<5} {:<9} {:>3} {:>4} {:<6} {:<8} {}",
                e.id,
                residual,
                nil,
                e.image_dimension,
                if e.unital.ok() && e.unit_image_consistent {
                    "ok"
                } else {
                    "FAIL"
                },
                if e.closure.ok() {
                    format!("{}/{}", e.closure.trials, e.closure.trials)
                } else {
                    "FAIL".to_string()
                },
                e.provenance
            );
            if let Some(f) = &e.fault {
                let _ = writeln!(
                    s,
                    "      R({})R({}) - R(R({})*{} + {}*R({})) has {} at {}",
                    f.x, f.y, f.x, f.y, f.x, f.y, f.value, f.position
                );
            }
        }
        let _ = writeln!(
            s,
            "{}/{} OK, rb-index {}",
            self.passed,
            self.entries.len(),
            self.rb_index
        );
        let _ = writeln!(s, "R^2 != 0: {}", self.square_nonzero.join(", "));
        s
    }
}

fn random_rational(rng: &mut impl Rng, nonzero: bool) -> Rational {
    loop {
        let q = Rational::new(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        if !(nonzero && q.is_zero()) {
            return q;
        }
    }
}

fn random_psi(rng: &mut impl Rng) -> AutoParams {
    AutoParams::new(
        random_rational(rng, true),
        random_rational(rng, false),
        random_rational(rng, false),
        random_rational(rng, true),
        random_rational(rng, false),
    )
}

/// Randomized scaling and conjugation trials at random parameter values.
pub fn closure_trials(r: &Operator<MultiPoly>, samples: usize, seed: u64) -> ClosureReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let theta = theta13();
    let mut rep = ClosureReport {
        trials: samples,
        scaling_failures: 0,
        conjugation_failures: 0,
        theta_failures: 0,
    };
    for _ in 0..samples {
        let values: Vec<Rational> = (0..r.params().len())
            .map(|_| random_rational(&mut rng, false))
            .collect();
        let q = r.evaluate(&values);
        let k = random_rational(&mut rng, true);
        if !scale_operator(&q, &k).is_ok_and(|s| s.is_rb()) {
            rep.scaling_failures += 1;
        }
        let psi = build_psi(&random_psi(&mut rng)).expect("alpha, delta nonzero");
        if !conjugate_operator(&q, &psi).is_rb() {
            rep.conjugation_failures += 1;
        }
        if !conjugate_operator(&q, &theta.compose(&psi)).is_rb() {
            rep.theta_failures += 1;
        }
    }
    rep
}

/// Verifies one operator as if it were a catalog entry.
pub fn verify_operator(
    id: &str,
    r: &Operator<MultiPoly>,
    provenance: &str,
    samples: usize,
    seed: u64,
) -> Result<EntryReport> {
    let res = r.rb_residual();
    let fault = res.first_nonzero().map(|(u, v, m)| {
        let (pos, val) = m.entries().next().expect("nonzero matrix");
        ResidualFault {
            x: u.to_string(),
            y: v.to_string(),
            position: pos.to_string(),
            value: val.to_string(),
        }
    });
    let unit = UTMatrix::<MultiPoly>::unit(r.n());
    let diag_sum = (1..=r.n() as u8)
        .map(|i| r.image(BasisIndex::new(i, i)).clone())
        .fold(UTMatrix::zero(r.n()), |acc, m| acc.add(&m));
    Ok(EntryReport {
        id: id.to_string(),
        residual_zero: fault.is_none(),
        nonzero_residual_pairs: res.nonzero_count(),
        fault,
        nilpotency_degree: nilpotency_degree(r),
        image_dimension: r.generic_rank(),
        unit_image_consistent: r.apply(&unit)? == diag_sum,
        unital: check_unital(r)?,
        closure: closure_trials(r, samples, seed),
        provenance: provenance.to_string(),
    })
}

pub fn verify_entries(entries: &[CatalogEntry], opts: &VerifyOptions) -> Result<VerifyReport> {
    let selected: Vec<&CatalogEntry> = if opts.families.is_empty() {
        entries.iter().collect()
    } else {
        opts.families
            .iter()
            .map(|id| {
                find_entry(entries, id)
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown family `{id}`")))
            })
            .collect::<Result<_>>()?
    };
    let reports: Vec<EntryReport> = selected
        .par_iter()
        .enumerate()
        .map(|(i, e)| {
            verify_operator(
                &e.id,
                &e.operator,
                &e.provenance,
                opts.samples,
                opts.seed.wrapping_add(i as u64),
            )
        })
        .collect::<Result<_>>()?;
    let owned: Vec<CatalogEntry> = selected.into_iter().cloned().collect();
    let idx = rb_index(&owned);
    let passed = reports.iter().filter(|r| r.ok()).count();
    Ok(VerifyReport {
        schema_version: SCHEMA_VERSION,
        samples: opts.samples,
        seed: opts.seed,
        all_ok: passed == reports.len(),
        passed,
        entries: reports,
        rb_index: idx.index,
        square_nonzero: idx.square_nonzero,
    })
}

/// Verifies the shipped catalog.
pub fn verify_all(opts: &VerifyOptions) -> Result<VerifyReport> {
    verify_entries(&load_catalog(), opts)
}

// ---------------------------------------------------------------------------
// Case driver
// ---------------------------------------------------------------------------

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

/// A case of the classification: ansatz, letter aliases, the displayed
/// template, claimed relations and claimed solution families.
#[derive(Debug, Clone)]
pub struct CaseSpec {
    pub file: CaseFile,
    pub ansatz: Ansatz,
}

impl CaseSpec {
    pub fn from_file(file: CaseFile) -> Result<Self> {
        file.validate()?;
        let ansatz = file.ansatz.to_ansatz()?;
        Ok(CaseSpec { file, ansatz })
    }

    pub fn preset(name: &str) -> Result<Self> {
        let text = PRESETS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, t)| *t)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown preset `{name}` (known: {})",
                    preset_names().join(", ")
                ))
            })?;
        Self::from_file(serde_json::from_str(text)?)
    }

    pub fn name(&self) -> &str {
        &self.file.name
    }

    fn letters(&self) -> Vec<String> {
        self.file.aliases.keys().cloned().collect()
    }
}

#[derive(Debug, Clone)]
pub struct CaseOptions {
    /// Budget for each Groebner basis computation.
    pub timeout: Duration,
    pub max_pairs: Option<usize>,
    /// Skip the full system and go straight to the template system.
    pub reduced_only: bool,
}

impl Default for CaseOptions {
    fn default() -> Self {
        CaseOptions {
            timeout: Duration::from_secs(600),
            max_pairs: None,
            reduced_only: false,
        }
    }
}

impl CaseOptions {
    fn limits(&self) -> Limits {
        let mut l = Limits::with_timeout(self.timeout);
        l.max_pairs = self.max_pairs;
        l
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    pub item: String,
    pub status: Status,
    pub detail: String,
}

impl CheckItem {
    fn new(item: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        CheckItem {
            item: item.into(),
            status,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GbSummary {
    /// `full` or `template`.
    pub system: String,
    pub variables: usize,
    pub generators: usize,
    pub completed: bool,
    pub basis_size: usize,
    pub stats: GbStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub schema_version: u32,
    pub name: String,
    pub title: String,
    pub gb_runs: Vec<GbSummary>,
    /// Which ideal the membership checks ran against.
    pub checked_against: Option<String>,
    pub template: Vec<CheckItem>,
    pub relations: Vec<CheckItem>,
    pub solutions: Vec<CheckItem>,
    pub claimed_solutions: Vec<String>,
    pub resource_limited: bool,
}

impl CaseReport {
    pub fn items(&self) -> impl Iterator<Item = &CheckItem> {
        self.template
            .iter()
            .chain(&self.relations)
            .chain(&self.solutions)
    }

    /// No check failed and some Groebner basis completed. Skipped template
    /// items are allowed: they occur when only the template system fits the
    /// budget.
    pub fn ok(&self) -> bool {
        !self.resource_limited && self.items().all(|i| i.status != Status::Fail)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "case {}: {}", self.name, self.title);
        for g in &self.gb_runs {
            let _ = writeln!(
                s,
                "  GB[{}] {} vars, {} gens: {} ({} elements, {} pairs, {:.2}s){}",
                g.system,
                g.variables,
                g.generators,
                if g.completed { "done" } else { "over budget" },
                g.basis_size,
                g.stats.pairs_processed,
                g.elapsed.as_secs_f64(),
                g.note
                    .as_deref()
                    .map(|n| format!(" - {n}"))
                    .unwrap_or_default()
            );
        }
        for (title, items) in [
            ("template", &self.template),
            ("relations", &self.relations),
            ("solutions", &self.solutions),
        ] {
            if items.is_empty() {
                continue;
            }
            let _ = writeln!(s, "  {title}:");
            for i in items {
                let tag = match i.status {
                    Status::Pass => "PASS",
                    Status::Fail => "FAIL",
                    Status::Skipped => "SKIP",
                };
                let _ = writeln!(s, "    {tag} {:<28} {}", i.item, i.detail);
            }
        }
        let passed = self.items().filter(|i| i.status == Status::Pass).count();
        let _ = writeln!(
            s,
            "  {passed}/{} checks pass{}",
            self.items().count(),
            if self.resource_limited {
                " (resource limit hit)"
            } else {
                ""
            }
        );
        s
    }
}

fn run_gb(label: &str, sys: &PolySystem, limits: &Limits) -> (GbSummary, Result<GroebnerBasis>) {
    let start = Instant::now();
    let out = buchberger(sys, limits);
    let mut summary = GbSummary {
        system: label.to_string(),
        variables: sys.table.len(),
        generators: sys.generators.len(),
        completed: false,
        basis_size: 0,
        stats: GbStats::default(),
        note: None,
        elapsed: start.elapsed(),
    };
    match &out {
        Ok(gb) => {
            summary.completed = true;
            summary.basis_size = gb.basis.len();
            summary.stats = gb.stats.clone();
            if gb.is_unit_ideal() {
                summary.note = Some("ideal is <1>".into());
            }
        }
        Err(Error::ResourceLimit(p)) => {
            summary.basis_size = p.basis.len();
            summary.stats = p.stats.clone();
            summary.note = Some(p.reason.clone());
        }
        Err(e) => summary.note = Some(e.to_string()),
    }
    (summary, out)
}

/// `p ∈ I`, falling back to `p ∈ √I` via an extra variable `z` with `1 - z·p`.
fn membership(p: &MultiPoly, gb: &GroebnerBasis, limits: &Limits) -> Result<(Status, String)> {
    let nf = gb.normal_form(p)?;
    if nf.is_zero() {
        return Ok((Status::Pass, "in ideal".into()));
    }
    let table = gb.table().extended(&["rad_z"])?;
    let z = MultiPoly::var(&table, "rad_z")?;
    let mut gens: Vec<MultiPoly> = gb
        .basis
        .iter()
        .map(|g| g.lift(&table))
        .collect::<Result<_>>()?;
    gens.push(&MultiPoly::one(&table) - &(&z * &p.lift(&table)?));
    let radical = buchberger(&PolySystem::new(table, gens, gb.order())?, limits)?;
    if radical.is_unit_ideal() {
        Ok((Status::Pass, "in radical (not in ideal)".into()))
    } else {
        Ok((Status::Fail, format!("normal form {nf}")))
    }
}

/// Everything derived from a case file that the checks share.
struct CaseContext {
    raw: Operator<MultiPoly>,
    /// Residual components and constraint polynomials before any elimination.
    unsimplified: Vec<MultiPoly>,
    letters: Arc<VarTable>,
    /// `b`-variable -> template expression over `letters`.
    template: BTreeMap<String, MultiPoly>,
}

impl CaseContext {
    fn new(spec: &CaseSpec, auxiliaries: &[String]) -> Result<Self> {
        let raw = spec.ansatz.raw_operator()?;
        let full = raw.params().clone();
        let mut unsimplified = Vec::new();
        for (_, _, m) in &raw.rb_residual().entries {
            for (_, c) in m.entries() {
                unsimplified.push(c.lift(&full)?);
            }
        }
        unsimplified.extend(spec.ansatz.constraint_polys(&raw)?);
        let letters = VarTable::new(
            spec.letters()
                .into_iter()
                .chain(auxiliaries.iter().cloned()),
        )?;
        let mut template = BTreeMap::new();
        for (var, expr) in &spec.file.template {
            if full.index_of(var).is_none() {
                return Err(Error::Format(format!(
                    "template variable `{var}` is not a coefficient of the ansatz"
                )));
            }
            template.insert(var.clone(), MultiPoly::parse(expr, &letters)?);
        }
        Ok(CaseContext {
            raw,
            unsimplified,
            letters,
            template,
        })
    }

    /// Images of the full variables under the template (absent ones are zero).
    fn template_images(&self) -> Vec<MultiPoly> {
        self.raw
            .params()
            .names()
            .iter()
            .map(|v| {
                self.template
                    .get(v)
                    .cloned()
                    .unwrap_or_else(|| MultiPoly::zero(&self.letters))
            })
            .collect()
    }
}

/// Replays one case of the classification.
///
/// The full system is generated from the ansatz and its Groebner basis is
/// computed within the budget. When that succeeds, the displayed template
/// is certified: each coefficient minus its template value lies in the
/// ideal or its radical. The template system (the unsimplified system with
/// the template substituted, at most as many variables as letters) is
/// always solved as well. A relation passes if it lies in the full ideal,
/// in the template ideal, or in the radical of either. Claimed solution
/// families are substituted into the unsimplified system.
pub fn run_case(spec: &CaseSpec, opts: &CaseOptions) -> Result<CaseReport> {
    let generated = generate_system(&spec.ansatz, MonomialOrder::Grevlex)?;
    let ctx = CaseContext::new(spec, &generated.auxiliaries)?;
    let aliases = &spec.file.aliases;
    let mut report = CaseReport {
        schema_version: SCHEMA_VERSION,
        name: spec.file.name.clone(),
        title: spec.file.title.clone(),
        gb_runs: Vec::new(),
        checked_against: None,
        template: Vec::new(),
        relations: Vec::new(),
        solutions: Vec::new(),
        claimed_solutions: spec.file.claimed_solutions.clone(),
        resource_limited: false,
    };

    // Aliases must name distinct coefficients that the template keeps.
    let mut seen = BTreeSet::new();
    for (letter, var) in aliases {
        let ok = seen.insert(var.clone())
            && ctx.raw.params().index_of(var).is_some()
            && ctx
                .template
                .get(var)
                .is_none_or(|t| *t == MultiPoly::var(&ctx.letters, letter).unwrap());
        if !ok {
            report.template.push(CheckItem::new(
                format!("alias {letter}"),
                Status::Fail,
                format!(
                    "`{var}` is not a distinct coefficient fixed to `{letter}` by the template"
                ),
            ));
        }
    }

    let full = generated.full_table.clone();
    let with_aux = full.extended(&generated.auxiliaries)?;
    let rel_names: BTreeSet<String> = ctx
        .letters
        .names()
        .iter()
        .chain(with_aux.names())
        .cloned()
        .collect();
    let rel_table = VarTable::new(rel_names)?;
    // letters -> aliased coefficient variables
    let to_full: BTreeMap<String, MultiPoly> = aliases
        .iter()
        .map(|(l, v)| Ok((l.clone(), MultiPoly::var(&with_aux, v)?)))
        .collect::<Result<_>>()?;
    let images = ctx.template_images();
    // coefficient variables -> template expressions in letters
    let to_letters: BTreeMap<String, MultiPoly> = full
        .names()
        .iter()
        .zip(&images)
        .map(|(v, t)| (v.clone(), t.clone()))
        .collect();
    let limits = opts.limits();

    // Full system.
    let mut full_gb = None;
    if !opts.reduced_only {
        let (summary, out) = run_gb("full", &generated.system, &limits);
        report.gb_runs.push(summary);
        match out {
            Ok(gb) => full_gb = Some(gb),
            Err(Error::ResourceLimit(_)) => {}
            Err(e) => return Err(e),
        }
    }

    if !ctx.template.is_empty() {
        for (var, t) in full.names().iter().zip(&images) {
            let shown = spec.file.template.get(var).map_or("0", String::as_str);
            let item = format!("{var} = {shown}");
            match &full_gb {
                Some(gb) => {
                    let t = t.retarget(&rel_table)?.substitute(&to_full)?;
                    let diff = &MultiPoly::var(&with_aux, var)? - &t.retarget(&with_aux)?;
                    let (status, detail) =
                        membership(&generated.reduce_input(&diff)?, gb, &limits)?;
                    report.template.push(CheckItem::new(item, status, detail));
                }
                None => report.template.push(CheckItem::new(
                    item,
                    Status::Skipped,
                    "assumed: full system over budget",
                )),
            }
        }
    }

    // Template system: substitute the displayed form into the unsimplified system.
    let mut template_gb = None;
    if !ctx.template.is_empty() {
        let mut gens = Vec::new();
        for p in &ctx.unsimplified {
            gens.push(p.substitute_images(&images, &ctx.letters)?);
        }
        let mut aux_images = images.clone();
        for a in &generated.auxiliaries {
            aux_images.push(MultiPoly::var(&ctx.letters, a)?);
        }
        for (i, q) in spec.ansatz.nonzero.iter().enumerate() {
            let q = MultiPoly::parse(q, &with_aux)?.substitute_images(&aux_images, &ctx.letters)?;
            let u = MultiPoly::var(&ctx.letters, &generated.auxiliaries[i])?;
            gens.push(&(&u * &q) - &MultiPoly::one(&ctx.letters));
        }
        let sys = PolySystem::new(ctx.letters.clone(), gens, MonomialOrder::Grevlex)?;
        let (summary, out) = run_gb("template", &sys, &opts.limits());
        report.gb_runs.push(summary);
        match out {
            Ok(gb) => template_gb = Some(gb),
            Err(Error::ResourceLimit(_)) => {}
            Err(e) => return Err(e),
        }
    }

    report.checked_against = match (&full_gb, &template_gb) {
        (Some(_), Some(_)) => Some("full+template".into()),
        (Some(_), None) => Some("full".into()),
        (None, Some(_)) => Some("template".into()),
        (None, None) => None,
    };
    report.resource_limited = report.checked_against.is_none();

    for label in &spec.file.relations {
        let rel = MultiPoly::parse(label, &rel_table)?;
        let in_full = match &full_gb {
            Some(gb) => {
                let p = rel.substitute(&to_full)?.retarget(&with_aux)?;
                Some((generated.reduce_input(&p)?, gb))
            }
            None => None,
        };
        let in_template = match &template_gb {
            Some(gb) => {
                let p = rel.substitute(&to_letters)?.retarget(&ctx.letters)?;
                Some((p, gb))
            }
            None => None,
        };
        let mut result = None;
        if let Some((p, gb)) = &in_full {
            if gb.normal_form(p)?.is_zero() {
                result = Some((Status::Pass, "in ideal".to_string()));
            }
        }
        if result.is_none() {
            if let Some((p, gb)) = &in_template {
                if gb.normal_form(p)?.is_zero() {
                    result = Some((Status::Pass, "in template ideal".to_string()));
                }
            }
        }
        if result.is_none() {
            if let Some((p, gb)) = in_full.as_ref().or(in_template.as_ref()) {
                result = Some(membership(p, gb, &limits)?);
            }
        }
        let (status, detail) =
            result.unwrap_or((Status::Skipped, "no Groebner basis within budget".into()));
        report
            .relations
            .push(CheckItem::new(label.clone(), status, detail));
    }

    for sol in &spec.file.solutions {
        report.solutions.push(check_solution(spec, &ctx, sol)?);
    }
    Ok(report)
}

fn check_solution(
    spec: &CaseSpec,
    ctx: &CaseContext,
    sol: &crate::formats::SolutionFile,
) -> Result<CheckItem> {
    let params = VarTable::new(sol.params.iter().cloned())?;
    let full = ctx.raw.params();
    let mut letter_vals = BTreeMap::new();
    let mut direct = BTreeMap::new();
    for (k, v) in &sol.assign {
        let p = MultiPoly::parse(v, &params)?;
        if ctx.letters.index_of(k).is_some() {
            letter_vals.insert(k.clone(), p);
        } else if full.index_of(k).is_some() {
            direct.insert(k.clone(), p);
        } else {
            return Err(Error::Format(format!(
                "solution `{}` assigns unknown name `{k}`",
                sol.label
            )));
        }
    }
    let letter_images: Vec<MultiPoly> = ctx
        .letters
        .names()
        .iter()
        .map(|l| {
            letter_vals
                .get(l)
                .cloned()
                .unwrap_or_else(|| MultiPoly::zero(&params))
        })
        .collect();
    let mut images = Vec::with_capacity(full.len());
    for v in full.names() {
        let img = match (direct.get(v), ctx.template.get(v)) {
            (Some(p), _) => p.clone(),
            (None, Some(t)) => t.substitute_images(&letter_images, &params)?,
            (None, None) => MultiPoly::zero(&params),
        };
        images.push(img);
    }
    let mut nonzero_residual = 0;
    for p in &ctx.unsimplified {
        if !p.substitute_images(&images, &params)?.is_zero() {
            nonzero_residual += 1;
        }
    }
    let mut vanishing = Vec::new();
    for q in &spec.ansatz.nonzero {
        let q = MultiPoly::parse(q, full)?;
        if q.substitute_images(&images, &params)?.is_zero() {
            vanishing.push(q.to_string());
        }
    }
    let label = format!("{} [{}]", sol.label, sol.leads_to.join(", "));
    Ok(if nonzero_residual > 0 {
        CheckItem::new(
            label,
            Status::Fail,
            format!("{nonzero_residual} equations do not vanish"),
        )
    } else if !vanishing.is_empty() {
        CheckItem::new(
            label,
            Status::Fail,
            format!("violates nonzero assumption {}", vanishing.join(", ")),
        )
    } else {
        CheckItem::new(
            label,
            Status::Pass,
            format!("{} equations vanish", ctx.unsimplified.len()),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_has_forty_entries_and_r13_fails_certification() {
        let entries = load_catalog();
        assert_eq!(entries.len(), 40);
        assert_eq!(entries[0].params().len(), 8);
        assert_eq!(entries[1].params().len(), 5);
        match build_catalog() {
            Err(Error::Hypothesis(msg)) => {
                assert_eq!(msg, "R13: residual at (e11, e11) is -e12")
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn r13_has_degree_three() {
        let entries = load_catalog();
        let r13 = find_entry(&entries, "R13").unwrap();
        assert_eq!(nilpotency_degree(&r13.operator), Some(3));
        let r5 = find_entry(&entries, "R5").unwrap();
        assert_eq!(nilpotency_degree(&r5.operator), Some(2));
    }

    #[test]
    fn presets_parse() {
        for name in preset_names() {
            CaseSpec::preset(name).unwrap();
        }
        assert!(CaseSpec::preset("sec9").is_err());
    }
}

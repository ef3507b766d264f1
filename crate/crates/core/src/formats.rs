//! JSON file formats shared with the command-line tool.
//!
//! Every top-level document carries `schema_version`; readers accept a
//! missing field as the current version.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groebner::{GbCertificate, GbStats, GroebnerBasis, PolySystem};
use crate::matrix::{BasisIndex, UTMatrix};
use crate::poly::{MonomialOrder, MultiPoly, VarTable};
use crate::rational::Rational;
use crate::rb::Operator;
use crate::transform::Witness;

pub const SCHEMA_VERSION: u32 = 1;

fn schema_version() -> u32 {
    SCHEMA_VERSION
}

fn check_version(v: u32) -> Result<()> {
    if v == SCHEMA_VERSION {
        Ok(())
    } else {
        Err(Error::Format(format!("unsupported schema_version {v}")))
    }
}

/// An operator with images written as matrix strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub n: usize,
    #[serde(default)]
    pub weight: Rational,
    /// Basis element name (`e12`) to image; omitted elements map to zero.
    pub images: BTreeMap<String, String>,
    #[serde(default)]
    pub params: Vec<String>,
}

impl OperatorFile {
    pub fn from_operator(r: &Operator<MultiPoly>) -> Self {
        let images = BasisIndex::all(r.n())
            .into_iter()
            .zip(r.images())
            .filter(|(_, m)| !m.is_zero())
            .map(|(b, m)| (b.to_string(), m.to_string()))
            .collect();
        OperatorFile {
            schema_version: SCHEMA_VERSION,
            n: r.n(),
            weight: r.weight().clone(),
            images,
            params: r.params().names().to_vec(),
        }
    }

    pub fn from_rational(r: &Operator<Rational>) -> Self {
        Self::from_operator(&r.to_symbolic())
    }

    pub fn to_operator(&self) -> Result<Operator<MultiPoly>> {
        check_version(self.schema_version)?;
        if self.n == 0 || self.n > 9 {
            return Err(Error::Format(format!(
                "unsupported algebra size {}",
                self.n
            )));
        }
        let params = VarTable::new(self.params.iter().cloned())?;
        let basis = BasisIndex::all(self.n);
        let mut images = vec![UTMatrix::<MultiPoly>::zero(self.n); basis.len()];
        for (name, s) in &self.images {
            let idx = BasisIndex::parse(name)
                .filter(|b| basis.contains(b))
                .ok_or_else(|| Error::Format(format!("`{name}` is not a basis element")))?;
            images[idx.position(self.n)] = UTMatrix::<MultiPoly>::parse(s, self.n, &params)
                .map_err(|e| Error::Format(format!("image of {name}: {e}")))?;
        }
        Ok(Operator::from_images(self.n, images)?
            .with_weight(self.weight.clone())
            .with_params(params))
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        read_json(path)
    }
}

/// A polynomial system: `{"vars", "order", "gens"}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub vars: Vec<String>,
    #[serde(default = "default_order")]
    pub order: MonomialOrder,
    pub gens: Vec<String>,
}

fn default_order() -> MonomialOrder {
    MonomialOrder::Grevlex
}

impl SystemFile {
    pub fn from_system(sys: &PolySystem) -> Self {
        SystemFile {
            schema_version: SCHEMA_VERSION,
            vars: sys.table.names().to_vec(),
            order: sys.order,
            gens: sys
                .generators
                .iter()
                .map(|g| g.to_string_with_order(sys.order))
                .collect(),
        }
    }

    pub fn to_system(&self) -> Result<PolySystem> {
        check_version(self.schema_version)?;
        let table = VarTable::new(self.vars.iter().cloned())?;
        let gens = self
            .gens
            .iter()
            .map(|g| MultiPoly::parse(g, &table))
            .collect::<Result<Vec<_>, _>>()?;
        PolySystem::new(table, gens, self.order)
    }
}

/// A computed Groebner basis. Shares the system fields, so a report can be
/// fed back wherever a system file is expected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbReport {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub vars: Vec<String>,
    pub order: MonomialOrder,
    pub gens: Vec<String>,
    pub basis: Vec<String>,
    pub reduced: bool,
    pub stats: GbStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub generators_reduce: bool,
    pub spairs_reduce: bool,
    pub reduced: bool,
}

impl From<&GbCertificate> for CertificateFile {
    fn from(c: &GbCertificate) -> Self {
        CertificateFile {
            generators_reduce: c.generators_reduce,
            spairs_reduce: c.spairs_reduce,
            reduced: c.reduced,
        }
    }
}

impl GbReport {
    pub fn new(gb: &GroebnerBasis, certificate: Option<&GbCertificate>) -> Self {
        let sys = SystemFile::from_system(&gb.system);
        GbReport {
            schema_version: SCHEMA_VERSION,
            vars: sys.vars,
            order: sys.order,
            gens: sys.gens,
            basis: gb
                .basis
                .iter()
                .map(|g| g.to_string_with_order(gb.order()))
                .collect(),
            reduced: gb.reduced,
            stats: gb.stats.clone(),
            certificate: certificate.map(CertificateFile::from),
        }
    }

    pub fn system(&self) -> SystemFile {
        SystemFile {
            schema_version: self.schema_version,
            vars: self.vars.clone(),
            order: self.order,
            gens: self.gens.clone(),
        }
    }

    /// The basis polynomials over the report's variable table.
    pub fn basis_polys(&self) -> Result<(Arc<VarTable>, Vec<MultiPoly>)> {
        check_version(self.schema_version)?;
        let table = VarTable::new(self.vars.iter().cloned())?;
        let basis = self
            .basis
            .iter()
            .map(|g| MultiPoly::parse(g, &table))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((table, basis))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    #[serde(flatten)]
    pub witness: Witness,
}

impl WitnessFile {
    pub fn new(witness: Witness) -> Self {
        WitnessFile {
            schema_version: SCHEMA_VERSION,
            witness,
        }
    }
}

/// One family of the classification as stored on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntryFile {
    pub id: String,
    pub operator: OperatorFile,
    #[serde(default)]
    pub side_conditions: Vec<String>,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub entries: Vec<CatalogEntryFile>,
}

/// The ansatz part of a case file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnsatzFile {
    #[serde(default = "three")]
    pub n: usize,
    #[serde(default)]
    pub weight: Rational,
    /// Allowed support per image, e.g. `"e11": ["e12", "e13"]`.
    #[serde(default)]
    pub support: BTreeMap<String, Vec<String>>,
    /// Images fixed outright, as matrix strings.
    #[serde(default)]
    pub fixed: BTreeMap<String, String>,
    /// Conditions `R(x) = y`, both matrix strings.
    #[serde(default)]
    pub images: Vec<ImageConstraint>,
    /// Linear polynomials in the coefficient variables, set to zero.
    #[serde(default)]
    pub linear: Vec<String>,
    /// Polynomials assumed nonzero.
    #[serde(default)]
    pub nonzero: Vec<String>,
}

fn three() -> usize {
    3
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageConstraint {
    pub x: String,
    pub y: String,
}

impl AnsatzFile {
    pub fn to_ansatz(&self) -> Result<crate::rb::Ansatz> {
        use crate::rb::{Ansatz, Constraint};
        let idx = |s: &str| {
            BasisIndex::parse(s)
                .filter(|b| b.col as usize <= self.n)
                .ok_or_else(|| Error::Format(format!("`{s}` is not a basis element")))
        };
        let mat = |s: &str| {
            UTMatrix::<Rational>::parse(s, self.n).map_err(|e| Error::Format(format!("`{s}`: {e}")))
        };
        let mut a = Ansatz::new(self.n);
        a.weight = self.weight.clone();
        for (k, v) in &self.support {
            let allowed = v.iter().map(|s| idx(s)).collect::<Result<Vec<_>>>()?;
            a.support.insert(idx(k)?, allowed);
        }
        for (k, v) in &self.fixed {
            a.fixed.insert(idx(k)?, mat(v)?);
        }
        for c in &self.images {
            a.constraints.push(Constraint::Image {
                x: mat(&c.x)?,
                y: mat(&c.y)?,
            });
        }
        a.constraints
            .extend(self.linear.iter().cloned().map(Constraint::Linear));
        a.nonzero = self.nonzero.clone();
        Ok(a)
    }
}

/// A solution family claimed by a case: letter -> polynomial in `params`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub label: String,
    #[serde(default)]
    pub params: Vec<String>,
    /// Letters not listed are zero.
    pub assign: BTreeMap<String, String>,
    /// Catalog families this branch leads to.
    #[serde(default)]
    pub leads_to: Vec<String>,
}

/// A case of the classification replayed by the case driver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseFile {
    #[serde(default = "schema_version")]
    pub schema_version: u32,
    pub name: String,
    pub title: String,
    pub ansatz: AnsatzFile,
    /// Letter -> coefficient variable (`b_<ij>_<kl>`).
    pub aliases: BTreeMap<String, String>,
    /// Coefficient variable -> expression in the letters. Variables of the
    /// ansatz absent here are eliminated by the ansatz or equal to zero.
    #[serde(default)]
    pub template: BTreeMap<String, String>,
    /// Relations in letters or coefficient variables claimed to lie in the ideal.
    pub relations: Vec<String>,
    #[serde(default)]
    pub solutions: Vec<SolutionFile>,
    #[serde(default)]
    pub claimed_solutions: Vec<String>,
}

impl CaseFile {
    pub fn validate(&self) -> Result<()> {
        check_version(self.schema_version)
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Format(e.to_string()))?;
    Ok(serde_json::from_str(&text)?)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_round_trip() {
        let text = r#"{"n": 3, "weight": "0", "images": {"e11": "e12 + b*e13 + e23", "e12": "e13"}, "params": ["b"]}"#;
        let f: OperatorFile = serde_json::from_str(text).unwrap();
        let r = f.to_operator().unwrap();
        assert_eq!(r.image(BasisIndex::new(1, 2)).to_string(), "e13");
        let back = OperatorFile::from_operator(&r);
        assert_eq!(back.to_operator().unwrap(), r);
        assert_eq!(back.images["e11"], "e12 + b*e13 + e23");
    }

    #[test]
    fn bad_basis_name() {
        let text = r#"{"n": 3, "images": {"e21": "e11"}}"#;
        let f: OperatorFile = serde_json::from_str(text).unwrap();
        assert!(f.to_operator().is_err());
    }

    #[test]
    fn system_round_trip() {
        let text = r#"{"vars": ["x", "y"], "order": "lex", "gens": ["x^2 - 1", "x*y - 1"]}"#;
        let f: SystemFile = serde_json::from_str(text).unwrap();
        let sys = f.to_system().unwrap();
        assert_eq!(sys.order, MonomialOrder::Lex);
        let again = SystemFile::from_system(&sys);
        assert_eq!(again.to_system().unwrap(), sys);
        let elim: SystemFile =
            serde_json::from_str(r#"{"vars": ["t", "x"], "order": {"elim": 1}, "gens": []}"#)
                .unwrap();
        assert_eq!(elim.order, MonomialOrder::Elimination(1));
    }
}

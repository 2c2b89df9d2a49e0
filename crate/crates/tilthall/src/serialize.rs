//! File formats: module documents, Hall-table exports, semi-derived element
//! documents, and persistable catalogs. All JSON maps are BTree-backed, so
//! serialized output is byte-deterministic after canonicalization.

use crate::algebra::BoundAlgebra;
use crate::catalog::{CatalogCaps, ConflationCount, IsoCatalog};
use crate::error::{Error, Result};
use crate::hall::{HallElement, SdhElement, TruncatedHall};
use crate::homology::HomCtx;
use crate::matrix::FMatrix;
use crate::rep::Rep;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::str::FromStr;
use std::sync::Arc;

// ---------------------------------------------------------------------------
// module documents
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModuleDoc {
    pub algebra: String,
    pub dim_vector: Vec<usize>,
    /// Row-major action matrix per generator label.
    pub action: BTreeMap<String, Vec<Vec<serde_json::Value>>>,
}

pub fn rep_to_doc(rep: &Rep) -> ModuleDoc {
    let f = &rep.algebra.field;
    let mut action = BTreeMap::new();
    for (gen, mat) in rep.algebra.generators.iter().zip(rep.action.iter()) {
        let rows: Vec<Vec<serde_json::Value>> = (0..mat.rows)
            .map(|r| (0..mat.cols).map(|c| f.elt_to_json(mat.at(r, c))).collect())
            .collect();
        action.insert(gen.label.clone(), rows);
    }
    ModuleDoc {
        algebra: rep.algebra.hash().to_string(),
        dim_vector: rep.dim_vector.clone(),
        action,
    }
}

pub fn rep_from_doc(algebra: &Arc<BoundAlgebra>, doc: &ModuleDoc) -> Result<Rep> {
    if doc.algebra != algebra.hash() {
        return Err(Error::Parse(format!(
            "module document targets algebra {}, got {}",
            doc.algebra,
            algebra.hash()
        )));
    }
    let f = algebra.field.clone();
    let mut action = Vec::with_capacity(algebra.generators.len());
    for gen in &algebra.generators {
        let rows = doc
            .action
            .get(&gen.label)
            .ok_or_else(|| Error::Parse(format!("missing action for generator {}", gen.label)))?;
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Parse("action matrix is not square".into()));
            }
            for v in row {
                entries.push(f.elt_from_json(v)?);
            }
        }
        action.push(FMatrix::from_rows(f.clone(), n, n, entries));
    }
    Rep::new(algebra.clone(), action)
}

pub fn rep_to_json(rep: &Rep) -> String {
    serde_json::to_string_pretty(&rep_to_doc(rep)).expect("module serialization")
}

pub fn rep_from_json(algebra: &Arc<BoundAlgebra>, text: &str) -> Result<Rep> {
    let doc: ModuleDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("module document: {e}")))?;
    rep_from_doc(algebra, &doc)
}

// ---------------------------------------------------------------------------
// rationals and Hall tables
// ---------------------------------------------------------------------------

pub fn rational_to_string(r: &BigRational) -> String {
    if r.denom() == &num_bigint::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_from_string(s: &str) -> Result<BigRational> {
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(
            num_bigint::BigInt::from_str(s).map_err(|e| Error::Parse(e.to_string()))?,
        )),
        Some((n, d)) => Ok(BigRational::new(
            num_bigint::BigInt::from_str(n).map_err(|e| Error::Parse(e.to_string()))?,
            num_bigint::BigInt::from_str(d).map_err(|e| Error::Parse(e.to_string()))?,
        )),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HallTableDoc {
    pub algebra: String,
    pub structure: String,
    pub dim_bound: usize,
    /// "m n" -> { "l" -> coefficient string }
    pub constants: BTreeMap<String, BTreeMap<String, String>>,
}

pub fn hall_table_to_doc(
    algebra_hash: &str,
    structure: &str,
    table: &TruncatedHall,
) -> HallTableDoc {
    let mut constants = BTreeMap::new();
    for (&(m, n), row) in &table.constants {
        if row.is_empty() {
            continue;
        }
        let mut terms = BTreeMap::new();
        for (l, c) in row {
            terms.insert(l.to_string(), rational_to_string(c));
        }
        constants.insert(format!("{m} {n}"), terms);
    }
    HallTableDoc {
        algebra: algebra_hash.to_string(),
        structure: structure.to_string(),
        dim_bound: table.dim_bound,
        constants,
    }
}

/// Delimited text export: one `m n l coefficient` line per structure
/// constant, sorted.
pub fn hall_table_to_text(table: &TruncatedHall) -> String {
    let mut lines = Vec::new();
    for (&(m, n), row) in &table.constants {
        for (l, c) in row {
            lines.push(format!("{m}\t{n}\t{l}\t{}", rational_to_string(c)));
        }
    }
    lines.sort();
    let mut out = lines.join("\n");
    out.push('\n');
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SdhElementDoc {
    pub denominator: Vec<usize>,
    pub numerator: BTreeMap<String, String>,
}

pub fn sdh_to_doc(x: &SdhElement) -> SdhElementDoc {
    let mut numerator = BTreeMap::new();
    for (id, c) in &x.numerator.0 {
        numerator.insert(id.to_string(), rational_to_string(c));
    }
    SdhElementDoc {
        denominator: x.denominator.clone(),
        numerator,
    }
}

pub fn hall_element_from_doc(doc: &BTreeMap<String, String>) -> Result<HallElement> {
    let mut m = std::collections::BTreeMap::new();
    for (k, v) in doc {
        let id: usize = k.parse().map_err(|_| Error::Parse(format!("class id {k}")))?;
        m.insert(id, rational_from_string(v)?);
    }
    Ok(HallElement(m))
}

// ---------------------------------------------------------------------------
// persistable catalogs
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogClassDoc {
    pub dim_vector: Vec<usize>,
    pub action: BTreeMap<String, Vec<Vec<serde_json::Value>>>,
    pub aut_count: u64,
    pub decomposition: Vec<(usize, usize)>,
    pub is_projective: bool,
    pub ple1: String,
    pub sgp: String,
    pub gp: String,
    pub gp_le1: String,
    pub perp: BTreeMap<String, String>,
    pub fingerprint: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CatalogDoc {
    pub format_version: u32,
    pub algebra: String,
    pub dim_bound: usize,
    pub caps: CatalogCaps,
    pub seed: u64,
    pub classes: Vec<CatalogClassDoc>,
    pub conflations: Vec<ConflationCount>,
    pub complete: bool,
    pub incompleteness: Vec<String>,
}

pub const CATALOG_FORMAT_VERSION: u32 = 1;

fn status_str(s: crate::homology::Status) -> String {
    match s {
        crate::homology::Status::Yes => "yes".into(),
        crate::homology::Status::No => "no".into(),
        crate::homology::Status::Unknown => "unknown".into(),
    }
}

fn status_parse(s: &str) -> Result<crate::homology::Status> {
    Ok(match s {
        "yes" => crate::homology::Status::Yes,
        "no" => crate::homology::Status::No,
        "unknown" => crate::homology::Status::Unknown,
        other => return Err(Error::CacheCorrupt(format!("bad status {other}"))),
    })
}

pub fn catalog_to_doc(cat: &IsoCatalog, seed: u64) -> CatalogDoc {
    let classes = cat
        .classes
        .iter()
        .map(|c| CatalogClassDoc {
            dim_vector: c.rep.dim_vector.clone(),
            action: rep_to_doc(&c.rep).action,
            aut_count: c.aut_count,
            decomposition: c.decomposition.clone(),
            is_projective: c.is_projective,
            ple1: status_str(c.ple1.status),
            sgp: status_str(c.sgp.status),
            gp: status_str(c.gp.status),
            gp_le1: status_str(c.gp_le1.status),
            perp: c
                .perp
                .iter()
                .map(|(k, v)| (k.clone(), status_str(v.status)))
                .collect(),
            fingerprint: c.fingerprint.clone(),
        })
        .collect();
    CatalogDoc {
        format_version: CATALOG_FORMAT_VERSION,
        algebra: cat.algebra.hash().to_string(),
        dim_bound: cat.dim_bound,
        caps: cat.caps.clone(),
        seed,
        classes,
        conflations: cat.conflations.clone(),
        complete: cat.complete,
        incompleteness: cat.incompleteness.clone(),
    }
}

fn cached_verdict(status: crate::homology::Status) -> crate::homology::Verdict {
    crate::homology::Verdict {
        status,
        bound_used: 0,
        certificate: crate::homology::Certificate::Note("restored from cache".into()),
    }
}

pub fn catalog_from_doc(
    ctx: &HomCtx,
    doc: &CatalogDoc,
) -> Result<IsoCatalog> {
    if doc.algebra != ctx.algebra.hash() {
        return Err(Error::CacheCorrupt("algebra hash mismatch".into()));
    }
    if doc.format_version != CATALOG_FORMAT_VERSION {
        return Err(Error::CacheCorrupt("format version mismatch".into()));
    }
    let mut classes = Vec::with_capacity(doc.classes.len());
    for (id, cd) in doc.classes.iter().enumerate() {
        let module_doc = ModuleDoc {
            algebra: doc.algebra.clone(),
            dim_vector: cd.dim_vector.clone(),
            action: cd.action.clone(),
        };
        let rep = rep_from_doc(&ctx.algebra, &module_doc)?;
        classes.push(crate::catalog::IsoClass {
            id,
            rep,
            aut_count: cd.aut_count,
            decomposition: cd.decomposition.clone(),
            is_projective: cd.is_projective,
            ple1: cached_verdict(status_parse(&cd.ple1)?),
            sgp: cached_verdict(status_parse(&cd.sgp)?),
            gp: cached_verdict(status_parse(&cd.gp)?),
            gp_le1: cached_verdict(status_parse(&cd.gp_le1)?),
            perp: cd
                .perp
                .iter()
                .map(|(k, v)| Ok((k.clone(), cached_verdict(status_parse(v)?))))
                .collect::<Result<_>>()?,
            fingerprint: cd.fingerprint.clone(),
        });
    }
    Ok(IsoCatalog::from_parts(
        ctx,
        doc.dim_bound,
        doc.caps.clone(),
        classes,
        doc.conflations.clone(),
        doc.complete,
        doc.incompleteness.clone(),
    ))
}

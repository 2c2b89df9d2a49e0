//! The reproducible verification suites behind the command-line front end.
//! Each suite emits check records with source anchors; `run` assembles the
//! selected suites into a deterministic report document plus a separate
//! timing sidecar (wall times never enter the deterministic payload).

use crate::algebra::{BoundAlgebra, PresentationDoc};
use crate::cache::{CacheKey, CatalogStore};
use crate::catalog::{build_catalog, CatalogCaps, IsoCatalog};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::hall::{
    ext_count_rp, ext_middle_census, ideal_basis, truncated_hall, ExactStructure, HallCtx,
    IdealKind, SdhCtx,
};
use crate::homology::{HomCtx, Status, SubcatSpec};
use crate::matrix::FMatrix;
use crate::rep::{direct_sum, regular_module, Rep, SearchPolicy};
use crate::report::{CheckRecord, RecordStatus, VerificationReport};
use crate::serialize;
use crate::tilting::{certify_tilting, end_bimodule, BimoduleData, TiltingCertificate};
use crate::verify;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RunConfig {
    /// Fixture names or paths to algebra spec documents.
    pub algebras: Vec<String>,
    /// Optional tilting module: a path to a module document, or one of the
    /// builtin selectors "regular", "apr", "injective-cogenerator".
    pub tilting: Option<String>,
    pub dim_bound: usize,
    /// Window for the Gorenstein-projective side of the class maps.
    pub gp_dim_bound: usize,
    /// Window for the endomorphism-side catalogs.
    pub b_dim_bound: usize,
    pub submodule_cap: Option<usize>,
    pub exhaust_cap: u64,
    pub syzygy_bound: usize,
    pub seed: u64,
    pub suite: String,
    pub cache_dir: Option<PathBuf>,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            algebras: vec![],
            tilting: None,
            dim_bound: 4,
            gp_dim_bound: 6,
            b_dim_bound: 6,
            submodule_cap: None,
            exhaust_cap: 1 << 16,
            syzygy_bound: crate::homology::DEFAULT_SYZYGY_BOUND,
            seed: 1,
            suite: "all".into(),
            cache_dir: None,
            out: None,
        }
    }
}

pub const SUITES: &[&str] = &[
    "catalog",
    "hall-table",
    "certify-tilting",
    "certify-gp",
    "verify-duality",
    "verify-prop47",
    "verify-thm410",
    "k0-compare",
    "weak-gorenstein",
    "all",
];

#[derive(Debug, Serialize)]
pub struct ReportDocument {
    pub tool_version: String,
    pub config: RunConfig,
    pub records: Vec<CheckRecord>,
}

#[derive(Debug, Default, Serialize)]
pub struct TimingsDoc {
    pub wall_ms: BTreeMap<String, u128>,
}

pub struct RunOutcome {
    pub report: ReportDocument,
    pub timings: TimingsDoc,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        let fails = self
            .report
            .records
            .iter()
            .filter(|r| r.status == RecordStatus::Fail)
            .count();
        let unknowns = self
            .report
            .records
            .iter()
            .filter(|r| r.status == RecordStatus::Unknown)
            .count();
        if fails > 0 {
            1
        } else if unknowns > 0 {
            2
        } else {
            0
        }
    }

    pub fn summary_table(&self) -> String {
        let mut by_suite: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();
        for r in &self.report.records {
            let suite = r
                .check_id
                .split('/')
                .take(2)
                .collect::<Vec<_>>()
                .join("/");
            let entry = by_suite.entry(suite).or_insert((0, 0, 0));
            match r.status {
                RecordStatus::Pass => entry.0 += 1,
                RecordStatus::Fail => entry.1 += 1,
                RecordStatus::Unknown => entry.2 += 1,
            }
        }
        let mut out = String::new();
        out.push_str(&format!(
            "{:<44} {:>6} {:>6} {:>8} {:>10}\n",
            "suite", "pass", "fail", "unknown", "wall-ms"
        ));
        for (suite, (p, f, u)) in &by_suite {
            let ms = self
                .timings
                .wall_ms
                .get(suite)
                .copied()
                .map(|m| m.to_string())
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "{:<44} {:>6} {:>6} {:>8} {:>10}\n",
                suite, p, f, u, ms
            ));
        }
        out
    }
}

// ---------------------------------------------------------------------------
// per-algebra workspace
// ---------------------------------------------------------------------------

pub struct Workspace {
    pub label: String,
    pub algebra: Arc<BoundAlgebra>,
    pub hom: HomCtx,
    pub caps: CatalogCaps,
    pub tilting: Option<Rep>,
    pub tilting_label: String,
}

pub fn load_algebra(source: &str) -> Result<(String, PresentationDoc)> {
    if let Some(doc) = fixtures::by_name(source) {
        return Ok((source.to_string(), doc));
    }
    let text = std::fs::read_to_string(source)
        .map_err(|e| Error::Parse(format!("cannot read algebra spec {source}: {e}")))?;
    let doc: PresentationDoc =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{source}: {e}")))?;
    let label = std::path::Path::new(source)
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or(source)
        .to_string();
    Ok((label, doc))
}

impl Workspace {
    pub fn new(source: &str, config: &RunConfig) -> Result<Workspace> {
        let (label, doc) = load_algebra(source)?;
        let algebra = BoundAlgebra::parse(&doc)?;
        let policy = SearchPolicy {
            exhaust_cap: config.exhaust_cap,
            retry_cap: 256,
            seed: config.seed,
        };
        let hom = HomCtx::new(algebra.clone(), policy)?;
        let mut caps = CatalogCaps::for_field(algebra.field.q);
        caps.exhaust_cap = config.exhaust_cap;
        caps.syzygy_bound = config.syzygy_bound;
        if let Some(c) = config.submodule_cap {
            caps.submodule_cap = c;
        }
        let (tilting, tilting_label) = match &config.tilting {
            None => (None, "none".to_string()),
            Some(sel) => {
                let (t, tl) = resolve_tilting(&algebra, sel)?;
                (Some(t), tl)
            }
        };
        Ok(Workspace {
            label,
            algebra,
            hom,
            caps,
            tilting,
            tilting_label,
        })
    }

    pub fn catalog(
        &self,
        dim_bound: usize,
        registered: &[(String, Rep)],
        config: &RunConfig,
    ) -> Result<IsoCatalog> {
        // only tilting-free catalogs are cached: registered verdict columns
        // depend on the module data, which the key does not cover
        let store = match &config.cache_dir {
            Some(dir) if registered.is_empty() => Some(CatalogStore::open(dir)?),
            _ => None,
        };
        let key = CacheKey::new(self.algebra.hash(), dim_bound, &self.caps, config.seed);
        if let Some(store) = &store {
            if let Some(payload) = store.get(&key) {
                match serde_json::from_str::<serialize::CatalogDoc>(&payload)
                    .map_err(Error::from)
                    .and_then(|doc| serialize::catalog_from_doc(&self.hom, &doc))
                {
                    Ok(cat) => return Ok(cat),
                    Err(_) => {
                        let _ = store.invalidate(&key);
                    }
                }
            }
        }
        let cat = build_catalog(&self.hom, dim_bound, &self.caps, registered)?;
        if let Some(store) = &store {
            let doc = serialize::catalog_to_doc(&cat, config.seed);
            store.put(&key, &serde_json::to_string(&doc)?)?;
        }
        Ok(cat)
    }
}

/// Builtin tilting selectors plus module-document paths.
fn resolve_tilting(algebra: &Arc<BoundAlgebra>, selector: &str) -> Result<(Rep, String)> {
    match selector {
        "regular" => Ok((regular_module(algebra), "regular".into())),
        "apr" => {
            let quiver = algebra
                .quiver
                .as_ref()
                .ok_or_else(|| Error::Parse("apr tilt needs a quiver presentation".into()))?;
            if quiver.vertices.len() != 2 || quiver.arrows.len() != 1 {
                return Err(Error::Parse(
                    "apr tilt is defined for the single-arrow two-vertex fixture".into(),
                ));
            }
            let f = algebra.field.clone();
            let p1 = Rep::from_quiver_data(
                algebra.clone(),
                &[1, 1],
                &[FMatrix::from_rows(f.clone(), 1, 1, vec![1])],
            )?;
            let s1 = Rep::from_quiver_data(algebra.clone(), &[1, 0], &[FMatrix::zero(f, 0, 1)])?;
            Ok((direct_sum(&p1, &s1)?, "apr".into()))
        }
        "injective-cogenerator" => {
            let op = algebra.opposite()?;
            let op_regular = regular_module(&op);
            let t = crate::rep::k_dual(&op_regular, algebra)?;
            Ok((t, "injective-cogenerator".into()))
        }
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read tilting module {path}: {e}")))?;
            let t = serialize::rep_from_json(algebra, &text)?;
            Ok((t, path.to_string()))
        }
    }
}

// ---------------------------------------------------------------------------
// individual suites
// ---------------------------------------------------------------------------

fn suite_catalog(ws: &Workspace, config: &RunConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("catalog");
    let registered: Vec<(String, Rep)> = ws
        .tilting
        .iter()
        .map(|t| ("T".to_string(), t.clone()))
        .collect();
    let cat = ws.catalog(config.dim_bound, &registered, config)?;
    report.push(CheckRecord::pass(
        "catalog/classes",
        "Iso(A)",
        json!({"count": cat.classes.len(), "dim_bound": cat.dim_bound}),
    ));
    report.push(if cat.complete {
        CheckRecord::pass("catalog/complete", "Iso(A)", json!({}))
    } else {
        CheckRecord::unknown(
            "catalog/complete",
            "Iso(A)",
            json!({"gaps": cat.incompleteness}),
        )
    });
    for class in &cat.classes {
        let mut parts: Vec<&Rep> = Vec::new();
        for &(pid, mult) in &class.decomposition {
            for _ in 0..mult {
                parts.push(&cat.classes[pid].rep);
            }
        }
        let sum = crate::rep::direct_sum_many(&ws.algebra, &parts)?;
        if !crate::rep::iso_bool(&sum, &class.rep, &ws.hom.policy)? {
            report.push(CheckRecord::fail(
                format!("catalog/decomposition-{}", class.id),
                "Krull-Schmidt",
                json!({"class": class.id}),
            ));
        }
    }
    report.push(CheckRecord::pass(
        "catalog/decompositions",
        "Krull-Schmidt",
        json!({"checked": cat.classes.len()}),
    ));
    Ok(report)
}

fn suite_hall_table(ws: &Workspace, config: &RunConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("hall-table");
    let cat = ws.catalog(config.dim_bound, &[], config)?;
    let hall = HallCtx::new(&ws.hom, &cat, ExactStructure::ModuleCategory)?;
    let table = truncated_hall(&hall, true)?;
    table.verify_associativity(&hall)?;
    report.push(CheckRecord::pass(
        "hall-table/associativity",
        "Hall multiplication",
        json!({"members": table.members.len()}),
    ));
    // counting-oracle equivalence on all in-window pairs
    let mut pairs = 0usize;
    let mut mismatches = 0usize;
    for &m in &table.members {
        for &n in &table.members {
            if hall.grade(m) + hall.grade(n) > cat.dim_bound {
                continue;
            }
            let census = match ext_middle_census(&hall, m, n) {
                Ok(c) => c,
                Err(Error::CapExceeded(_)) => continue,
                Err(e) => return Err(e),
            };
            pairs += 1;
            let mut total = 0u64;
            for (l, &count) in &census {
                let rp = ext_count_rp(&hall, m, n, *l)?;
                if rp != verify::rational_int(count) {
                    mismatches += 1;
                    report.push(CheckRecord::fail(
                        format!("hall-table/oracle-{m}-{n}-{l}"),
                        "Riedtmann-Peng identity",
                        json!({
                            "triple": [m, n, l],
                            "oracle": count,
                            "rp": serialize::rational_to_string(&rp)
                        }),
                    ));
                }
                total += count;
            }
            let e = hall.ext1_dim_classes(m, n)?;
            if total != hall.q().pow(e as u32) {
                mismatches += 1;
                report.push(CheckRecord::fail(
                    format!("hall-table/census-total-{m}-{n}"),
                    "|Ext^1| = q^dim",
                    json!({"pair": [m, n], "total": total, "expected": hall.q().pow(e as u32)}),
                ));
            }
        }
    }
    report.push(if mismatches == 0 {
        CheckRecord::pass(
            "hall-table/oracle-equivalence",
            "Riedtmann-Peng identity",
            json!({"pairs": pairs}),
        )
    } else {
        CheckRecord::fail(
            "hall-table/oracle-equivalence",
            "Riedtmann-Peng identity",
            json!({"pairs": pairs, "mismatches": mismatches}),
        )
    });
    // commutation and absorption on all admissible pairs
    let sdh = SdhCtx::new(&hall, true)?;
    let mut checked = 0usize;
    let mut comm_failures = 0usize;
    for k in 0..cat.classes.len() {
        if !hall.ple1[k] {
            continue;
        }
        for m in 0..cat.classes.len() {
            if !hall.member[m] || hall.grade(k) + hall.grade(m) > cat.dim_bound {
                continue;
            }
            checked += 1;
            if !sdh.check_commutation(k, m)? {
                comm_failures += 1;
                report.push(CheckRecord::fail(
                    format!("hall-table/commutation-{k}-{m}"),
                    "Lemma 4.5 commutation",
                    json!({"pair": [k, m]}),
                ));
            }
        }
    }
    report.push(if comm_failures == 0 {
        CheckRecord::pass(
            "hall-table/commutation",
            "Lemma 4.5 commutation",
            json!({"pairs": checked}),
        )
    } else {
        CheckRecord::fail(
            "hall-table/commutation",
            "Lemma 4.5 commutation",
            json!({"pairs": checked, "failures": comm_failures}),
        )
    });
    let ij = ideal_basis(&hall, &table, IdealKind::IPlusJ)?;
    report.push(CheckRecord::pass(
        "hall-table/ideal",
        "I(A) + J(A)",
        json!({"dimension": ij.dim()}),
    ));
    let doc = serialize::hall_table_to_doc(ws.algebra.hash(), &hall.structure.label(), &table);
    report.push(CheckRecord::pass(
        "hall-table/export",
        "H(A) structure constants",
        serde_json::to_value(&doc)?,
    ));
    Ok(report)
}

fn suite_certify_tilting(ws: &Workspace, config: &RunConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("certify-tilting");
    let Some(t) = &ws.tilting else {
        report.push(CheckRecord::unknown(
            "certify-tilting/input",
            "(T1)-(T3)",
            json!({"reason": "no tilting module supplied"}),
        ));
        return Ok(report);
    };
    let cat = ws.catalog(config.dim_bound, &[], config)?;
    let probes: Vec<(Rep, crate::homology::DimVerdict)> = cat
        .classes
        .iter()
        .map(|c| {
            crate::homology::res_dim(
                &ws.hom,
                &c.rep,
                &SubcatSpec::Projectives,
                config.syzygy_bound,
            )
            .map(|d| (c.rep.clone(), d))
        })
        .collect::<Result<_>>()?;
    match certify_tilting(&ws.hom, t, config.syzygy_bound, Some(&probes)) {
        Ok(cert) => push_tilting_records(&mut report, &cert),
        Err(Error::NotRigid {
            witness_degree,
            witness_dim,
        }) => {
            report.push(CheckRecord::fail(
                "certify-tilting/t2",
                "(T2)",
                json!({"witness_degree": witness_degree, "witness_dim": witness_dim}),
            ));
        }
        Err(Error::CoresolutionNotFound(bound)) => {
            report.push(CheckRecord::fail(
                "certify-tilting/t3",
                "(T3)",
                json!({"exhausted_bound": bound}),
            ));
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}

fn push_tilting_records(report: &mut VerificationReport, cert: &TiltingCertificate) {
    report.push(match cert.pd.status {
        Status::Yes => CheckRecord::pass(
            "certify-tilting/t1",
            "(T1)",
            json!({"pd": cert.pd.value, "resolution_dims": cert.resolution_dims}),
        ),
        Status::No => CheckRecord::fail("certify-tilting/t1", "(T1)", json!({})),
        Status::Unknown => CheckRecord::unknown("certify-tilting/t1", "(T1)", json!({})),
    });
    report.push(match cert.self_ext.status {
        Status::Yes => CheckRecord::pass(
            "certify-tilting/t2",
            "(T2)",
            serde_json::to_value(&cert.self_ext.certificate).unwrap_or(json!({})),
        ),
        Status::No => CheckRecord::fail("certify-tilting/t2", "(T2)", json!({})),
        Status::Unknown => CheckRecord::unknown("certify-tilting/t2", "(T2)", json!({})),
    });
    report.push(CheckRecord::pass(
        "certify-tilting/t3",
        "(T3)",
        json!({
            "coresolution_dims": cert
                .coresolution_terms
                .iter()
                .map(|t| t.dim_vector.clone())
                .collect::<Vec<_>>()
        }),
    ));
    report.push(match cert.strong.status {
        Status::Yes => CheckRecord::pass(
            "certify-tilting/strong",
            "strong tilting",
            json!({"strong": true}),
        ),
        Status::No => CheckRecord::pass(
            "certify-tilting/strong",
            "strong tilting",
            json!({"strong": false}),
        ),
        Status::Unknown => {
            CheckRecord::unknown("certify-tilting/strong", "strong tilting", json!({}))
        }
    });
}

fn suite_certify_gp(ws: &Workspace, config: &RunConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("certify-gp");
    let cat = ws.catalog(config.dim_bound, &[], config)?;
    let mut undecided = 0usize;
    for class in &cat.classes {
        let detail = json!({
            "class": class.id,
            "dim_vector": class.rep.dim_vector,
            "gp": format!("{:?}", class.gp.status),
            "sgp": format!("{:?}", class.sgp.status),
            "gp_certificate": serde_json::to_value(&class.gp.certificate)
                .unwrap_or(json!(null)),
        });
        if class.gp.is_yes() && class.sgp.is_no() {
            report.push(CheckRecord::fail(
                format!("certify-gp/gp-implies-sgp-{}", class.id),
                "GP inside SGP",
                detail.clone(),
            ));
            continue;
        }
        if class.is_projective && !class.gp.is_yes() {
            report.push(CheckRecord::fail(
                format!("certify-gp/projective-gp-{}", class.id),
                "projectives are GP",
                detail.clone(),
            ));
            continue;
        }
        if class.gp.status == Status::Unknown || class.sgp.status == Status::Unknown {
            undecided += 1;
            report.push(CheckRecord::unknown(
                format!("certify-gp/class-{}", class.id),
                "GP / SGP verdicts",
                detail,
            ));
        } else {
            report.push(CheckRecord::pass(
                format!("certify-gp/class-{}", class.id),
                "GP / SGP verdicts",
                detail,
            ));
        }
    }
    report.push(CheckRecord::pass(
        "certify-gp/summary",
        "GP / SGP verdicts",
        json!({"classes": cat.classes.len(), "undecided": undecided}),
    ));
    Ok(report)
}

fn suite_verify_duality(ws: &Workspace, config: &RunConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("verify-duality");
    let Some(t) = &ws.tilting else {
        report.push(CheckRecord::unknown(
            "verify-duality/input",
            "Definition 1.1",
            json!({"reason": "no tilting module supplied"}),
        ));
        return Ok(report);
    };
    let data = end_bimodule(&ws.hom, t)?;
    let cert = certify_tilting(&ws.hom, t, config.syzygy_bound, None)?;
    let ell = cert.pd.value.unwrap_or(1);
    let a_cat = ws.catalog(config.dim_bound, &[], config)?;
    let bop_hom = HomCtx::new(data.b_op.clone(), ws.hom.policy.clone())?;
    let bop_caps = CatalogCaps::for_field(data.b_op.field.q);
    let bop_cat = build_catalog(&bop_hom, config.dim_bound, &bop_caps, &[])?;
    let inputs = verify::DualityInputs {
        a_hom: &ws.hom,
        a_cat: &a_cat,
        c_spec: SubcatSpec::Intersection(vec![
            SubcatSpec::PerpT(Box::new(t.clone())),
            SubcatSpec::GpdimLe(ell),
        ]),
        bop_hom: &bop_hom,
        bop_cat: &bop_cat,
        d_spec: SubcatSpec::Intersection(vec![
            SubcatSpec::PerpT(Box::new(data.t_as_bop.clone())),
            SubcatSpec::GpdimLe(ell),
        ]),
        data: &data,
        sample_budget: 256,
        bound: config.syzygy_bound,
    };
    let inner = verify::verify_resolving_duality(&inputs)?;
    merge_with_prefix(&mut report, inner, "verify-duality");
    let ident = verify::subcat_identities(&ws.hom, &a_cat, &data, cert.pd.value, config.syzygy_bound)?;
    merge_with_prefix(&mut report, ident, "verify-duality");
    Ok(report)
}

fn suite_verify_prop47(ws: &Workspace, config: &RunConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("verify-prop47");
    let registered: Vec<(String, Rep)> = ws
        .tilting
        .iter()
        .map(|t| ("T".to_string(), t.clone()))
        .collect();
    let ambient_structure = if ws.tilting.is_some() {
        ExactStructure::PerpTGpLe1 { name: "T".into() }
    } else {
        ExactStructure::ModuleCategory
    };
    let a_cat = ws.catalog(config.dim_bound, &registered, config)?;
    let gp_cat = ws.catalog(config.gp_dim_bound, &[], config)?;
    let ambient = HallCtx::new(&ws.hom, &a_cat, ambient_structure)?;
    let gp_hall = HallCtx::new(&ws.hom, &gp_cat, ExactStructure::GpModules)?;
    let ambient_sdh = SdhCtx::new(&ambient, true)?;
    let gp_sdh = SdhCtx::new(&gp_hall, true)?;
    let inputs = verify::Prop47Inputs {
        ambient: &ambient,
        ambient_sdh: &ambient_sdh,
        gp_sdh: &gp_sdh,
    };
    let inner = verify::verify_prop47(&inputs)?;
    merge_with_prefix(&mut report, inner, "verify-prop47");
    Ok(report)
}

fn suite_verify_thm410(ws: &Workspace, config: &RunConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("verify-thm410");
    let Some(t) = &ws.tilting else {
        report.push(CheckRecord::unknown(
            "verify-thm410/input",
            "Thm 4.10",
            json!({"reason": "no tilting module supplied"}),
        ));
        return Ok(report);
    };
    let data = end_bimodule(&ws.hom, t)?;
    let cert = certify_tilting(&ws.hom, t, config.syzygy_bound, None)?;
    if cert.pd.value.map(|v| v > 1).unwrap_or(true) {
        report.push(CheckRecord::unknown(
            "verify-thm410/precondition",
            "Thm 4.10 (pd <= 1)",
            json!({"pd": cert.pd.value}),
        ));
        return Ok(report);
    }
    let a_cat = ws.catalog(config.dim_bound, &[], config)?;
    let a_gp = HallCtx::new(&ws.hom, &a_cat, ExactStructure::GpModules)?;
    let b_hom = HomCtx::new(data.b.clone(), ws.hom.policy.clone())?;
    let mut b_caps = CatalogCaps::for_field(data.b.field.q);
    b_caps.exhaust_cap = config.exhaust_cap;
    b_caps.syzygy_bound = config.syzygy_bound;
    let b_cat = build_catalog(&b_hom, config.b_dim_bound, &b_caps, &[])?;
    let b_gp = HallCtx::new(&b_hom, &b_cat, ExactStructure::GpModules)?;
    let b_sdh = SdhCtx::new(&b_gp, true)?;
    let probes = verify::right_perp_probes(&ws.hom, &a_cat, t, config.syzygy_bound)?;
    let expect_identity = crate::rep::iso_bool(t, &ws.hom.regular, &ws.hom.policy)?;
    let xi = verify::XiInputs {
        a_hom: &ws.hom,
        a_gp: &a_gp,
        data: &data,
        b_hom: &b_hom,
        b_sdh: &b_sdh,
        perp_probes: probes,
        bound: config.syzygy_bound,
    };
    let inner = verify::verify_thm410(&xi, expect_identity)?;
    merge_with_prefix(&mut report, inner, "verify-thm410");
    Ok(report)
}

fn suite_k0_compare(ws: &Workspace, config: &RunConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("k0-compare");
    let Some(t) = &ws.tilting else {
        report.push(CheckRecord::unknown(
            "k0-compare/input",
            "K_0(GP)",
            json!({"reason": "no tilting module supplied"}),
        ));
        return Ok(report);
    };
    let data = end_bimodule(&ws.hom, t)?;
    let a_cat = ws.catalog(config.dim_bound, &[], config)?;
    let a_gp = HallCtx::new(&ws.hom, &a_cat, ExactStructure::GpModules)?;
    let b_hom = HomCtx::new(data.b.clone(), ws.hom.policy.clone())?;
    let mut b_caps = CatalogCaps::for_field(data.b.field.q);
    b_caps.exhaust_cap = config.exhaust_cap;
    let b_cat = build_catalog(&b_hom, config.dim_bound, &b_caps, &[])?;
    let b_gp = HallCtx::new(&b_hom, &b_cat, ExactStructure::GpModules)?;
    let (pa, pb, equal) = verify::k0_compare(&a_gp, &b_gp)?;
    report.push(if equal {
        CheckRecord::pass(
            "k0-compare/invariant-factors",
            "K_0(GP) under tilting",
            json!({"a": pa, "b": pb}),
        )
    } else {
        CheckRecord::fail(
            "k0-compare/invariant-factors",
            "K_0(GP) under tilting",
            json!({"a": pa, "b": pb}),
        )
    });
    Ok(report)
}

fn suite_weak_gorenstein(ws: &Workspace, config: &RunConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("weak-gorenstein");
    let registered: Vec<(String, Rep)> = ws
        .tilting
        .iter()
        .map(|t| ("T".to_string(), t.clone()))
        .collect();
    let cat = ws.catalog(config.dim_bound, &registered, config)?;
    let data = match &ws.tilting {
        Some(t) => Some(end_bimodule(&ws.hom, t)?),
        None => None,
    };
    let mut structures: Vec<(ExactStructure, Option<&BimoduleData>)> = vec![
        (ExactStructure::ModuleCategory, None),
        (ExactStructure::GpModules, None),
    ];
    if ws.tilting.is_some() {
        structures.push((
            ExactStructure::PerpTGpLe1 { name: "T".into() },
            data.as_ref(),
        ));
    }
    for (structure, dat) in structures {
        let label = structure.label();
        let hall = HallCtx::new(&ws.hom, &cat, structure)?;
        let (verdict, inner) = verify::weakly_gorenstein_check(&hall, dat, config.syzygy_bound)?;
        report.push(match verdict.status {
            Status::Yes => CheckRecord::pass(
                format!("weak-gorenstein/{label}"),
                "conditions (E-a)-(E-d)",
                json!({"structure": label}),
            ),
            Status::No => CheckRecord::fail(
                format!("weak-gorenstein/{label}"),
                "conditions (E-a)-(E-d)",
                json!({"structure": label}),
            ),
            Status::Unknown => CheckRecord::unknown(
                format!("weak-gorenstein/{label}"),
                "conditions (E-a)-(E-d)",
                json!({"structure": label}),
            ),
        });
        merge_with_prefix(&mut report, inner, &format!("weak-gorenstein/{label}"));
    }
    Ok(report)
}

fn merge_with_prefix(into: &mut VerificationReport, from: VerificationReport, prefix: &str) {
    for mut r in from.records {
        r.check_id = format!("{prefix}/{}", r.check_id);
        into.push(r);
    }
}

// ---------------------------------------------------------------------------
// the runner
// ---------------------------------------------------------------------------

pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    if !SUITES.contains(&config.suite.as_str()) {
        return Err(Error::Parse(format!(
            "unknown suite {} (expected one of {})",
            config.suite,
            SUITES.join(", ")
        )));
    }
    let mut records = Vec::new();
    let mut timings = TimingsDoc::default();
    for source in &config.algebras {
        let ws = Workspace::new(source, config)?;
        let selected: Vec<&str> = if config.suite == "all" {
            SUITES.iter().copied().filter(|s| *s != "all").collect()
        } else {
            vec![config.suite.as_str()]
        };
        for suite in selected {
            let t0 = Instant::now();
            let result = match suite {
                "catalog" => suite_catalog(&ws, config)?,
                "hall-table" => suite_hall_table(&ws, config)?,
                "certify-tilting" => suite_certify_tilting(&ws, config)?,
                "certify-gp" => suite_certify_gp(&ws, config)?,
                "verify-duality" => suite_verify_duality(&ws, config)?,
                "verify-prop47" => suite_verify_prop47(&ws, config)?,
                "verify-thm410" => suite_verify_thm410(&ws, config)?,
                "k0-compare" => suite_k0_compare(&ws, config)?,
                "weak-gorenstein" => suite_weak_gorenstein(&ws, config)?,
                other => return Err(Error::Parse(format!("unknown suite {other}"))),
            };
            let elapsed = t0.elapsed().as_millis();
            for mut r in result.records {
                r.check_id = format!("{}/{}", ws.label, r.check_id);
                records.push(r);
            }
            timings
                .wall_ms
                .insert(format!("{}/{}", ws.label, suite), elapsed);
        }
    }
    records.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    let report = ReportDocument {
        tool_version: TOOL_VERSION.to_string(),
        config: config.clone(),
        records,
    };
    Ok(RunOutcome { report, timings })
}

/// Writes the deterministic report and a timing sidecar next to it.
pub fn write_outputs(outcome: &RunOutcome, out: &std::path::Path) -> Result<()> {
    let report_json = serde_json::to_string_pretty(&outcome.report)?;
    std::fs::write(out, report_json)?;
    let timing_path = out.with_extension("timings.json");
    std::fs::write(&timing_path, serde_json::to_string_pretty(&outcome.timings)?)?;
    Ok(())
}

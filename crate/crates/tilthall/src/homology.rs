//! Homological machinery: radicals and tops, minimal projective covers,
//! syzygies, Ext groups with explicit middle-term realization, resolution
//! dimensions relative to a subcategory, and the three-valued verdicts for
//! semi-Gorenstein-projective, Gorenstein-projective and Ext-orthogonality
//! membership.
//!
//! Verdicts are Yes/No/Unknown. "For all i >= 1" conditions are made finite
//! by following the syzygy chain until an isomorphism class repeats: the
//! cycle is the certificate. A chain that neither repeats nor decides within
//! the step bound (or whose syzygies outgrow the dimension cap) yields an
//! honest Unknown.

use crate::algebra::{span_basis, BoundAlgebra};
use crate::error::{Error, Result};
use crate::field::Elt;
use crate::matrix::FMatrix;
use crate::rep::{
    a_dual, direct_sum_many, hom_space, iso_bool, morphism_parts, projectives,
    quotient_by_basis, regular_module, Conflation, ProjectiveSummand, Rep,
    RepMorphism, SearchPolicy,
};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub const DEFAULT_SYZYGY_BOUND: usize = 24;
pub const DEFAULT_SYZYGY_DIM_CAP: usize = 96;

// ---------------------------------------------------------------------------
// verdicts
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, Serialize)]
pub enum Certificate {
    None,
    /// Syzygy iso-classes repeated: chain entry `cycle_end` is isomorphic to
    /// entry `cycle_start`; `ext_dims[j]` is dim Ext^1(Omega^j M, T).
    SyzygyCycle {
        chain_dims: Vec<Vec<usize>>,
        ext_dims: Vec<usize>,
        cycle_start: usize,
        cycle_end: usize,
    },
    /// Nonvanishing witness: dim Ext^degree = dim > 0.
    ExtWitness { degree: usize, dim: usize },
    BoundExhausted { bound: usize },
    DimCapExceeded { dim: usize, cap: usize },
    /// The evaluation map into the double dual, row-major entries.
    SigmaMatrix {
        rows: usize,
        cols: usize,
        entries: Vec<Elt>,
        bijective: bool,
    },
    /// Resolution certificate: dims of the terms P_0..P_n.
    Resolution { term_dims: Vec<Vec<usize>> },
    /// Coresolution certificate: dims of the terms T_0..T_n.
    Coresolution { term_dims: Vec<Vec<usize>> },
    /// A syzygy cycle all of whose members fail membership, proving the
    /// resolution dimension infinite.
    InfiniteResolutionCycle {
        cycle_start: usize,
        cycle_end: usize,
    },
    Bundle(Vec<(String, Certificate)>),
    Note(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub status: Status,
    pub bound_used: usize,
    pub certificate: Certificate,
}

impl Verdict {
    pub fn yes(bound: usize, certificate: Certificate) -> Self {
        Verdict {
            status: Status::Yes,
            bound_used: bound,
            certificate,
        }
    }
    pub fn no(bound: usize, certificate: Certificate) -> Self {
        Verdict {
            status: Status::No,
            bound_used: bound,
            certificate,
        }
    }
    pub fn unknown(bound: usize, certificate: Certificate) -> Self {
        Verdict {
            status: Status::Unknown,
            bound_used: bound,
            certificate,
        }
    }
    pub fn is_yes(&self) -> bool {
        self.status == Status::Yes
    }
    pub fn is_no(&self) -> bool {
        self.status == Status::No
    }
    pub fn decided(&self) -> bool {
        self.status != Status::Unknown
    }
}

/// Verdict-valued dimension: `value` is set when the status is Yes.
#[derive(Debug, Clone, Serialize)]
pub struct DimVerdict {
    pub status: Status,
    pub value: Option<usize>,
    pub bound_used: usize,
    pub certificate: Certificate,
}

// ---------------------------------------------------------------------------
// per-algebra context
// ---------------------------------------------------------------------------

/// Shared homological context for one algebra: projectives, simples, the
/// opposite algebra, caps, and an Ext-dimension memo (single writer at a
/// time, many readers).
pub struct HomCtx {
    pub algebra: Arc<BoundAlgebra>,
    pub policy: SearchPolicy,
    pub projectives: Vec<ProjectiveSummand>,
    pub simples: Vec<Rep>,
    pub regular: Rep,
    pub syzygy_bound: usize,
    pub syzygy_dim_cap: usize,
    ext_memo: Mutex<HashMap<(Vec<u8>, Vec<u8>, usize), usize>>,
    hom_memo: Mutex<HashMap<(Vec<u8>, Vec<u8>), usize>>,
    cover_memo: Mutex<HashMap<Vec<u8>, Cover>>,
    opposite_ctx: OnceLock<std::result::Result<Arc<HomCtx>, String>>,
}

impl HomCtx {
    pub fn new(algebra: Arc<BoundAlgebra>, policy: SearchPolicy) -> Result<HomCtx> {
        let projs = projectives(&algebra, &policy)?;
        let regular = regular_module(&algebra);
        let mut simples = Vec::new();
        for p in &projs {
            let (top, _) = top_of(&p.rep)?;
            simples.push(top);
        }
        Ok(HomCtx {
            algebra,
            policy,
            projectives: projs,
            simples,
            regular,
            syzygy_bound: DEFAULT_SYZYGY_BOUND,
            syzygy_dim_cap: DEFAULT_SYZYGY_DIM_CAP,
            ext_memo: Mutex::new(HashMap::new()),
            hom_memo: Mutex::new(HashMap::new()),
            cover_memo: Mutex::new(HashMap::new()),
            opposite_ctx: OnceLock::new(),
        })
    }

    pub fn hom_dim(&self, m: &Rep, n: &Rep) -> Result<usize> {
        let key = (crate::rep::rep_key(m), crate::rep::rep_key(n));
        if let Some(&d) = self.hom_memo.lock().unwrap().get(&key) {
            return Ok(d);
        }
        let d = hom_space(m, n)?.len();
        self.hom_memo.lock().unwrap().insert(key, d);
        Ok(d)
    }

    /// Context over the opposite algebra, built once on first use.
    pub fn opposite_ctx(&self) -> Result<Arc<HomCtx>> {
        let entry = self.opposite_ctx.get_or_init(|| {
            let op = self.algebra.opposite().map_err(|e| e.to_string())?;
            HomCtx::new(op, self.policy.clone())
                .map(Arc::new)
                .map_err(|e| e.to_string())
        });
        entry.clone().map_err(Error::Internal)
    }

    pub fn ext_dim(&self, m: &Rep, n: &Rep, i: usize) -> Result<usize> {
        let key = (crate::rep::rep_key(m), crate::rep::rep_key(n), i);
        if let Some(&d) = self.ext_memo.lock().unwrap().get(&key) {
            return Ok(d);
        }
        let d = ext_space(self, m, n, i)?.dim;
        self.ext_memo.lock().unwrap().insert(key, d);
        Ok(d)
    }
}

// ---------------------------------------------------------------------------
// radical, top, covers, syzygies
// ---------------------------------------------------------------------------

/// rad(M) = (rad A) M: the span of the images of the radical generators.
pub fn radical_submodule(m: &Rep) -> Result<FMatrix> {
    let f = m.algebra.field.clone();
    let rad = m.algebra.radical_basis()?;
    let mut vectors: Vec<Vec<Elt>> = Vec::new();
    for r in rad {
        let act = m.action_of(r);
        for c in 0..act.cols {
            vectors.push(act.column(c));
        }
    }
    let rows = span_basis(&f, m.total_dim, &vectors);
    Ok(if rows.is_empty() {
        FMatrix::zero(f, m.total_dim, 0)
    } else {
        FMatrix::from_columns(f, m.total_dim, &rows)
    })
}

/// top(M) = M / rad(M) with its projection.
pub fn top_of(m: &Rep) -> Result<(Rep, RepMorphism)> {
    let rad = radical_submodule(m)?;
    quotient_by_basis(m, &rad)
}

#[derive(Clone)]
pub struct Cover {
    pub projective: Rep,
    pub epi: RepMorphism,
    pub syzygy: Rep,
    pub syzygy_inclusion: RepMorphism,
}

/// Minimal projective cover: a projective P with an epimorphism onto M whose
/// kernel lies in rad(P). Built greedily: while the composite to top(M) is
/// not surjective, adjoin a Hom(P_i, M) basis element whose top image is new.
pub fn projective_cover(ctx: &HomCtx, m: &Rep) -> Result<Cover> {
    let memo_key = crate::rep::rep_key(m);
    if let Some(c) = ctx.cover_memo.lock().unwrap().get(&memo_key) {
        return Ok(c.clone());
    }
    let cover = projective_cover_uncached(ctx, m)?;
    ctx.cover_memo
        .lock()
        .unwrap()
        .insert(memo_key, cover.clone());
    Ok(cover)
}

fn projective_cover_uncached(ctx: &HomCtx, m: &Rep) -> Result<Cover> {
    let f = m.algebra.field.clone();
    if m.is_zero() {
        let zero = Rep::zero(m.algebra.clone());
        let epi = RepMorphism::new(zero.clone(), m.clone(), FMatrix::zero(f.clone(), 0, 0))?;
        let incl = RepMorphism::new(zero.clone(), zero.clone(), FMatrix::zero(f, 0, 0))?;
        return Ok(Cover {
            projective: zero.clone(),
            epi,
            syzygy: zero,
            syzygy_inclusion: incl,
        });
    }
    let (top, pi) = top_of(m)?;
    let mut covered: Vec<Vec<Elt>> = Vec::new(); // basis rows of the covered subspace of top
    let mut part_projs: Vec<&Rep> = Vec::new();
    let mut part_maps: Vec<FMatrix> = Vec::new();
    // one Hom computation per projective, scanned repeatedly
    let hom_lists: Vec<Vec<RepMorphism>> = ctx
        .projectives
        .iter()
        .map(|p| hom_space(&p.rep, m))
        .collect::<Result<_>>()?;
    loop {
        if covered.len() == top.total_dim {
            break;
        }
        let before = covered.len();
        'proj: for (p, homs) in ctx.projectives.iter().zip(hom_lists.iter()) {
            for g in homs {
                let tg = pi.matrix.mul(&g.matrix)?;
                // does the image add a new direction to covered?
                let mut vectors = covered.clone();
                for c in 0..tg.cols {
                    vectors.push(tg.column(c));
                }
                let grown = span_basis(&f, top.total_dim, &vectors);
                if grown.len() > covered.len() {
                    covered = grown;
                    part_projs.push(&p.rep);
                    part_maps.push(g.matrix.clone());
                    break 'proj;
                }
            }
        }
        if covered.len() == before {
            return Err(Error::Internal(
                "projective cover search stalled below the top".into(),
            ));
        }
    }
    let projective = direct_sum_many(&m.algebra, &part_projs)?;
    // concatenate the maps horizontally
    let mut epi_mat = FMatrix::zero(f.clone(), m.total_dim, projective.total_dim);
    let mut offset = 0usize;
    for pm in &part_maps {
        for r in 0..pm.rows {
            for c in 0..pm.cols {
                epi_mat.set(r, offset + c, pm.at(r, c));
            }
        }
        offset += pm.cols;
    }
    let epi = RepMorphism::new(projective.clone(), m.clone(), epi_mat)?;
    debug_assert!(epi.is_surjective(), "cover must be epi by Nakayama");
    let parts = morphism_parts(&epi)?;
    let (syzygy, syzygy_inclusion) = parts.kernel;
    debug_assert!({
        // kernel sits inside rad(P): its top image vanishes
        let (_, pi_p) = top_of(&projective)?;
        pi_p.matrix.mul(&syzygy_inclusion.matrix)?.is_zero()
    });
    Ok(Cover {
        projective,
        epi,
        syzygy,
        syzygy_inclusion,
    })
}

pub fn syzygy(ctx: &HomCtx, m: &Rep) -> Result<Rep> {
    Ok(projective_cover(ctx, m)?.syzygy)
}

// ---------------------------------------------------------------------------
// Ext groups
// ---------------------------------------------------------------------------

pub struct ExtSpace {
    pub dim: usize,
    /// For i = 1: everything needed to realize middle terms.
    pub one_data: Option<Ext1Data>,
}

pub struct Ext1Data {
    pub cover: Cover,
    pub coefficient_target: Rep,
    /// Basis of Hom(Omega M, N).
    pub cocycle_basis: Vec<RepMorphism>,
    /// Coordinates (w.r.t. cocycle_basis) spanning the coboundaries, i.e.
    /// the restrictions of Hom(P_0, N).
    pub boundary_coords: Vec<Vec<Elt>>,
}

/// dim Ext^i_A(M, N), computed from a minimal projective resolution via
/// dimension shifting: Ext^i(M, N) = Ext^1(Omega^{i-1} M, N) for i >= 1.
pub fn ext_space(ctx: &HomCtx, m: &Rep, n: &Rep, i: usize) -> Result<ExtSpace> {
    if m.algebra.hash() != n.algebra.hash() {
        return Err(Error::AlgebraMismatch);
    }
    if i == 0 {
        return Ok(ExtSpace {
            dim: hom_space(m, n)?.len(),
            one_data: None,
        });
    }
    let mut current = m.clone();
    for _ in 0..i - 1 {
        current = syzygy(ctx, &current)?;
        if current.is_zero() {
            return Ok(ExtSpace {
                dim: 0,
                one_data: None,
            });
        }
    }
    let data = ext1_data(ctx, &current, n)?;
    let dim = data.cocycle_basis.len() - span_dim(&m.algebra, &data.boundary_coords);
    Ok(ExtSpace {
        dim,
        one_data: Some(data),
    })
}

fn span_dim(algebra: &Arc<BoundAlgebra>, coords: &[Vec<Elt>]) -> usize {
    if coords.is_empty() {
        return 0;
    }
    span_basis(&algebra.field, coords[0].len().max(1), coords).len()
}

pub fn ext1_data(ctx: &HomCtx, m: &Rep, n: &Rep) -> Result<Ext1Data> {
    let cover = projective_cover(ctx, m)?;
    let cocycle_basis = hom_space(&cover.syzygy, n)?;
    let f = m.algebra.field.clone();
    let boundary_coords = if cocycle_basis.is_empty() {
        vec![]
    } else {
        let flat_len = cocycle_basis[0].matrix.entries.len();
        let cols: Vec<Vec<Elt>> = cocycle_basis
            .iter()
            .map(|b| b.matrix.entries.clone())
            .collect();
        let flat = FMatrix::from_columns(f.clone(), flat_len, &cols);
        let p_homs = hom_space(&cover.projective, n)?;
        let mut coords = Vec::new();
        for ph in &p_homs {
            let restricted = ph.matrix.mul(&cover.syzygy_inclusion.matrix)?;
            let rhs = FMatrix {
                rows: flat_len,
                cols: 1,
                entries: restricted.entries,
                field: Some(f.clone()),
            };
            let sol = flat
                .solve(&rhs)?
                .ok_or_else(|| Error::Internal("restriction left the cocycle span".into()))?;
            coords.push(sol.0.column(0));
        }
        coords
    };
    Ok(Ext1Data {
        cover,
        coefficient_target: n.clone(),
        cocycle_basis,
        boundary_coords,
    })
}

impl Ext1Data {
    /// dim Ext^1 derived from this presentation.
    pub fn ext_dim(&self, algebra: &Arc<BoundAlgebra>) -> usize {
        self.cocycle_basis.len() - span_dim(algebra, &self.boundary_coords)
    }

    /// Representatives of every Ext^1 class: coefficient vectors over a
    /// complement of the boundary space inside the cocycle space.
    pub fn class_representatives(&self, algebra: &Arc<BoundAlgebra>) -> Vec<Vec<Elt>> {
        let h = self.cocycle_basis.len();
        let f = &algebra.field;
        let q = f.q;
        if h == 0 {
            return vec![vec![]];
        }
        // complement coordinates: non-pivot positions of the boundary span
        let boundary = span_basis(f, h, &self.boundary_coords);
        let mut bmat_rows = Vec::new();
        for b in &boundary {
            bmat_rows.extend_from_slice(b);
        }
        let pivots: Vec<usize> = if boundary.is_empty() {
            vec![]
        } else {
            let bm = FMatrix::from_rows(f.clone(), boundary.len(), h, bmat_rows);
            bm.rref().1
        };
        let free: Vec<usize> = (0..h).filter(|c| !pivots.contains(c)).collect();
        let e = free.len();
        let total = (q as u128).pow(e as u32) as u64;
        let mut reps = Vec::with_capacity(total as usize);
        for code in 0..total {
            let mut v = vec![0 as Elt; h];
            let mut c = code;
            for &fc in &free {
                v[fc] = (c % q) as Elt;
                c /= q;
            }
            reps.push(v);
        }
        reps
    }

    /// Realizes the extension 0 -> N -> E -> M -> 0 attached to the cocycle
    /// with the given coefficients, as an explicit conflation.
    pub fn realize(&self, coeffs: &[Elt]) -> Result<Conflation> {
        let n_rep = self.coefficient_target.clone();
        let m_rep = self.cover.epi.target.clone();
        let f = m_rep.algebra.field.clone();
        let omega = &self.cover.syzygy;
        // g: Omega -> N from the coefficients
        let mut g = FMatrix::zero(f.clone(), n_rep.total_dim, omega.total_dim);
        for (b, &c) in self.cocycle_basis.iter().zip(coeffs.iter()) {
            if c != 0 {
                g = g.add(&b.matrix.scale(c))?;
            }
        }
        // E = (N (+) P) / antidiagonal image of Omega
        let sum = crate::rep::direct_sum(&n_rep, &self.cover.projective)?;
        let mut anti = FMatrix::zero(f.clone(), sum.total_dim, omega.total_dim);
        for r in 0..n_rep.total_dim {
            for c in 0..omega.total_dim {
                anti.set(r, c, g.at(r, c));
            }
        }
        for r in 0..self.cover.projective.total_dim {
            for c in 0..omega.total_dim {
                anti.set(
                    n_rep.total_dim + r,
                    c,
                    f.neg(self.cover.syzygy_inclusion.matrix.at(r, c)),
                );
            }
        }
        let (e_rep, quot) = quotient_by_basis(&sum, &anti.column_space_basis())?;
        // N -> E
        let mut n_in = FMatrix::zero(f.clone(), sum.total_dim, n_rep.total_dim);
        for i in 0..n_rep.total_dim {
            n_in.set(i, i, 1);
        }
        let incl_mat = quot.matrix.mul(&n_in)?;
        let incl = RepMorphism::new(n_rep.clone(), e_rep.clone(), incl_mat)?;
        // E -> M: on representatives, (x, p) |-> epi(p); solve through the
        // quotient projection
        let mut to_m = FMatrix::zero(f.clone(), m_rep.total_dim, sum.total_dim);
        for r in 0..m_rep.total_dim {
            for c in 0..self.cover.projective.total_dim {
                to_m.set(r, n_rep.total_dim + c, self.cover.epi.matrix.at(r, c));
            }
        }
        // quot.matrix: sum -> E is surjective; find proj_mat with
        // proj_mat * quot.matrix = to_m
        let sol = quot
            .matrix
            .transpose()
            .solve(&to_m.transpose())?
            .ok_or_else(|| Error::Internal("extension projection not induced".into()))?;
        let proj_mat = sol.0.transpose();
        let proj = RepMorphism::new(e_rep, m_rep, proj_mat)?;
        Conflation::new(incl, proj)
    }
}

/// All middle terms of extensions of M by N (i.e. 0 -> N -> E -> M -> 0),
/// one per Ext^1 class, with the zero class first. Errors with CapExceeded
/// when |Ext^1| > cap.
pub fn ext1_middle_terms(ctx: &HomCtx, m: &Rep, n: &Rep, cap: u64) -> Result<Vec<Rep>> {
    let data = ext1_data(ctx, m, n)?;
    let e = data.ext_dim(&m.algebra);
    let q = m.algebra.field.q;
    let count = (q as u128).pow(e as u32);
    if count > cap as u128 {
        return Err(Error::CapExceeded(format!(
            "|Ext^1| = {count} exceeds realization cap {cap}"
        )));
    }
    let reps = data.class_representatives(&m.algebra);
    let mut out = Vec::with_capacity(reps.len());
    for coeffs in &reps {
        let conf = data.realize(coeffs)?;
        out.push(conf.middle().clone());
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// subcategory specs and membership
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub enum SubcatSpec {
    Projectives,
    Gp,
    Sgp,
    PerpT(Box<Rep>),
    Wt(Box<Rep>),
    PdimLe(usize),
    GpdimLe(usize),
    SgpdimLe(usize),
    AddOf(Box<Rep>),
    Intersection(Vec<SubcatSpec>),
}

impl SubcatSpec {
    pub fn tag(&self) -> String {
        match self {
            SubcatSpec::Projectives => "Projectives".into(),
            SubcatSpec::Gp => "GP".into(),
            SubcatSpec::Sgp => "SGP".into(),
            SubcatSpec::PerpT(_) => "PerpT".into(),
            SubcatSpec::Wt(_) => "WT".into(),
            SubcatSpec::PdimLe(n) => format!("PdimLE({n})"),
            SubcatSpec::GpdimLe(n) => format!("GPdimLE({n})"),
            SubcatSpec::SgpdimLe(n) => format!("SGPdimLE({n})"),
            SubcatSpec::AddOf(_) => "AddOf".into(),
            SubcatSpec::Intersection(parts) => {
                let inner: Vec<String> = parts.iter().map(|p| p.tag()).collect();
                format!("Intersection({})", inner.join(", "))
            }
        }
    }

    /// Conservative resolving check: these tags denote classes closed under
    /// extensions, kernels of epimorphisms, and containing the projectives.
    pub fn is_resolving(&self) -> bool {
        match self {
            SubcatSpec::Projectives
            | SubcatSpec::Gp
            | SubcatSpec::Sgp
            | SubcatSpec::PerpT(_)
            | SubcatSpec::PdimLe(_)
            | SubcatSpec::GpdimLe(_)
            | SubcatSpec::SgpdimLe(_) => true,
            SubcatSpec::Wt(_) | SubcatSpec::AddOf(_) => false,
            SubcatSpec::Intersection(parts) => parts.iter().all(|p| p.is_resolving()),
        }
    }
}

/// Membership verdict of M in the subcategory named by the spec.
pub fn membership(ctx: &HomCtx, m: &Rep, spec: &SubcatSpec, bound: usize) -> Result<Verdict> {
    match spec {
        SubcatSpec::Projectives => {
            let cover = projective_cover(ctx, m)?;
            if cover.syzygy.is_zero() {
                Ok(Verdict::yes(0, Certificate::Note("zero syzygy".into())))
            } else {
                Ok(Verdict::no(
                    0,
                    Certificate::Note(format!(
                        "syzygy has dimension {}",
                        cover.syzygy.total_dim
                    )),
                ))
            }
        }
        SubcatSpec::Gp => Ok(gp_verdict(ctx, m, bound)?),
        SubcatSpec::Sgp => Ok(sgp_verdict(ctx, m, bound)?),
        SubcatSpec::PerpT(t) => in_perp(ctx, m, t, bound),
        SubcatSpec::Wt(t) => {
            let data = crate::tilting::end_bimodule(ctx, t)?;
            crate::tilting::w_membership(ctx, m, &data, bound)
        }
        SubcatSpec::PdimLe(n) => res_le(ctx, m, &SubcatSpec::Projectives, *n, bound),
        SubcatSpec::GpdimLe(n) => res_le(ctx, m, &SubcatSpec::Gp, *n, bound),
        SubcatSpec::SgpdimLe(n) => res_le(ctx, m, &SubcatSpec::Sgp, *n, bound),
        SubcatSpec::AddOf(t) => {
            if crate::rep::in_add_of(m, t, &ctx.policy)? {
                Ok(Verdict::yes(0, Certificate::Note("summand match".into())))
            } else {
                Ok(Verdict::no(0, Certificate::Note("summand mismatch".into())))
            }
        }
        SubcatSpec::Intersection(parts) => {
            let mut certs = Vec::new();
            let mut seen_unknown = false;
            for p in parts {
                let v = membership(ctx, m, p, bound)?;
                match v.status {
                    Status::No => return Ok(Verdict::no(v.bound_used, v.certificate)),
                    Status::Unknown => seen_unknown = true,
                    Status::Yes => {}
                }
                certs.push((p.tag(), v.certificate));
            }
            if seen_unknown {
                Ok(Verdict::unknown(bound, Certificate::Bundle(certs)))
            } else {
                Ok(Verdict::yes(bound, Certificate::Bundle(certs)))
            }
        }
    }
}

/// Bounded flag res.dim_X(M) <= n: walks the syzygy chain only to depth n,
/// so a chain of decided non-memberships is a decided No (the syzygy
/// criterion for resolving X makes depth n conclusive).
pub fn res_le(ctx: &HomCtx, m: &Rep, x: &SubcatSpec, n: usize, bound: usize) -> Result<Verdict> {
    if !x.is_resolving() {
        return Err(Error::NotResolvingSpec(x.tag()));
    }
    let mut current = m.clone();
    let mut any_unknown = false;
    for j in 0..=n {
        let v = membership(ctx, &current, x, bound)?;
        match v.status {
            Status::Yes => {
                return Ok(Verdict::yes(
                    j,
                    Certificate::Note(format!("syzygy {j} is a member")),
                ))
            }
            Status::Unknown => any_unknown = true,
            Status::No => {}
        }
        if j == n {
            break;
        }
        if current.total_dim > ctx.syzygy_dim_cap {
            return Ok(Verdict::unknown(
                j,
                Certificate::DimCapExceeded {
                    dim: current.total_dim,
                    cap: ctx.syzygy_dim_cap,
                },
            ));
        }
        current = syzygy(ctx, &current)?;
    }
    if any_unknown {
        Ok(Verdict::unknown(n, Certificate::BoundExhausted { bound: n }))
    } else {
        Ok(Verdict::no(
            n,
            Certificate::Note(format!("no syzygy through depth {n} is a member")),
        ))
    }
}

/// res.dim_X(M): the smallest n <= bound with Omega^n(M) in X, by the syzygy
/// criterion for resolving X. A repeating chain of non-members is reported
/// as Unknown with an infinite-dimension cycle certificate.
pub fn res_dim(ctx: &HomCtx, m: &Rep, x: &SubcatSpec, bound: usize) -> Result<DimVerdict> {
    if !x.is_resolving() {
        return Err(Error::NotResolvingSpec(x.tag()));
    }
    let mut chain: Vec<Rep> = vec![m.clone()];
    let mut any_unknown = false;
    for n in 0..=bound {
        let current = chain.last().unwrap().clone();
        if current.total_dim > ctx.syzygy_dim_cap {
            return Ok(DimVerdict {
                status: Status::Unknown,
                value: None,
                bound_used: n,
                certificate: Certificate::DimCapExceeded {
                    dim: current.total_dim,
                    cap: ctx.syzygy_dim_cap,
                },
            });
        }
        let v = membership(ctx, &current, x, bound)?;
        match v.status {
            Status::Yes => {
                let status = if any_unknown {
                    Status::Unknown
                } else {
                    Status::Yes
                };
                return Ok(DimVerdict {
                    status,
                    value: if any_unknown { None } else { Some(n) },
                    bound_used: n,
                    certificate: if any_unknown {
                        Certificate::Note(format!(
                            "upper bound {n}; earlier membership undecided"
                        ))
                    } else {
                        v.certificate
                    },
                });
            }
            Status::Unknown => any_unknown = true,
            Status::No => {}
        }
        let next = syzygy(ctx, &current)?;
        // cycle of non-members proves infinite dimension
        for (k, prev) in chain.iter().enumerate() {
            if iso_bool(&next, prev, &ctx.policy)? {
                if !any_unknown {
                    return Ok(DimVerdict {
                        status: Status::Unknown,
                        value: None,
                        bound_used: n + 1,
                        certificate: Certificate::InfiniteResolutionCycle {
                            cycle_start: k,
                            cycle_end: n + 1,
                        },
                    });
                }
            }
        }
        chain.push(next);
    }
    Ok(DimVerdict {
        status: Status::Unknown,
        value: None,
        bound_used: bound,
        certificate: Certificate::BoundExhausted { bound },
    })
}

// ---------------------------------------------------------------------------
// Ext-orthogonality verdicts with syzygy-cycle certificates
// ---------------------------------------------------------------------------

/// Decides Ext^i_A(M, T) = 0 for all i >= 1: walks the syzygy chain of M,
/// requiring dim Ext^1(Omega^j M, T) = 0 at every step, until an iso class
/// repeats (Yes with cycle), a nonzero Ext appears (No with witness), or the
/// bound/dimension cap is exhausted (Unknown).
pub fn in_perp(ctx: &HomCtx, m: &Rep, t: &Rep, bound: usize) -> Result<Verdict> {
    if m.algebra.hash() != t.algebra.hash() {
        return Err(Error::AlgebraMismatch);
    }
    let mut chain: Vec<Rep> = vec![m.clone()];
    let mut ext_dims: Vec<usize> = Vec::new();
    for j in 0..=bound {
        let current = chain.last().unwrap().clone();
        if current.is_zero() {
            return Ok(Verdict::yes(
                j,
                Certificate::SyzygyCycle {
                    chain_dims: chain.iter().map(|c| c.dim_vector.clone()).collect(),
                    ext_dims,
                    cycle_start: j,
                    cycle_end: j,
                },
            ));
        }
        if current.total_dim > ctx.syzygy_dim_cap {
            return Ok(Verdict::unknown(
                j,
                Certificate::DimCapExceeded {
                    dim: current.total_dim,
                    cap: ctx.syzygy_dim_cap,
                },
            ));
        }
        let e = ctx.ext_dim(&current, t, 1)?;
        ext_dims.push(e);
        if e > 0 {
            return Ok(Verdict::no(
                j,
                Certificate::ExtWitness {
                    degree: j + 1,
                    dim: e,
                },
            ));
        }
        let next = syzygy(ctx, &current)?;
        for (k, prev) in chain.iter().enumerate() {
            if iso_bool(&next, prev, &ctx.policy)? {
                return Ok(Verdict::yes(
                    j + 1,
                    Certificate::SyzygyCycle {
                        chain_dims: chain.iter().map(|c| c.dim_vector.clone()).collect(),
                        ext_dims,
                        cycle_start: k,
                        cycle_end: j + 1,
                    },
                ));
            }
        }
        chain.push(next);
    }
    Ok(Verdict::unknown(bound, Certificate::BoundExhausted { bound }))
}

/// Semi-Gorenstein-projective: Ext^i(M, A) = 0 for all i >= 1.
pub fn sgp_verdict(ctx: &HomCtx, m: &Rep, bound: usize) -> Result<Verdict> {
    in_perp(ctx, m, &ctx.regular, bound)
}

/// Gorenstein-projective via the totally reflexive characterization:
/// (i) M is semi-Gorenstein-projective, (ii) its a-dual is
/// semi-Gorenstein-projective over the opposite algebra, (iii) the
/// evaluation map into the double a-dual is bijective.
pub fn gp_verdict(ctx: &HomCtx, m: &Rep, bound: usize) -> Result<Verdict> {
    if m.is_zero() {
        return Ok(Verdict::yes(0, Certificate::Note("zero module".into())));
    }
    let sgp = sgp_verdict(ctx, m, bound)?;
    if sgp.is_no() {
        return Ok(Verdict::no(
            sgp.bound_used,
            Certificate::Bundle(vec![("sgp".into(), sgp.certificate)]),
        ));
    }
    let op_ctx = ctx.opposite_ctx()?;
    let op = op_ctx.algebra.clone();
    let dual = a_dual(m, &op)?;
    let dual_sgp = sgp_verdict(&op_ctx, &dual, bound)?;
    if dual_sgp.is_no() {
        return Ok(Verdict::no(
            dual_sgp.bound_used,
            Certificate::Bundle(vec![("dual-sgp".into(), dual_sgp.certificate)]),
        ));
    }
    let sigma = evaluation_into_double_a_dual(ctx, m, &op, &op_ctx)?;
    let bij = sigma.rows == sigma.cols && sigma.rank() == sigma.rows && sigma.rows == m.total_dim;
    let sigma_cert = Certificate::SigmaMatrix {
        rows: sigma.rows,
        cols: sigma.cols,
        entries: sigma.entries.clone(),
        bijective: bij,
    };
    if !bij {
        return Ok(Verdict::no(
            bound,
            Certificate::Bundle(vec![("sigma".into(), sigma_cert)]),
        ));
    }
    if sgp.is_yes() && dual_sgp.is_yes() {
        Ok(Verdict::yes(
            bound,
            Certificate::Bundle(vec![
                ("sgp".into(), sgp.certificate),
                ("dual-sgp".into(), dual_sgp.certificate),
                ("sigma".into(), sigma_cert),
            ]),
        ))
    } else {
        Ok(Verdict::unknown(
            bound,
            Certificate::Bundle(vec![
                ("sgp".into(), sgp.certificate),
                ("dual-sgp".into(), dual_sgp.certificate),
                ("sigma".into(), sigma_cert),
            ]),
        ))
    }
}

pub fn gp_dim(ctx: &HomCtx, m: &Rep, bound: usize) -> Result<DimVerdict> {
    res_dim(ctx, m, &SubcatSpec::Gp, bound)
}

/// The evaluation map M -> Hom_{A^op}(Hom_A(M, A), A^op) as an explicit
/// matrix in the a-dual bases.
pub fn evaluation_into_double_a_dual(
    _ctx: &HomCtx,
    m: &Rep,
    op: &Arc<BoundAlgebra>,
    op_ctx: &HomCtx,
) -> Result<FMatrix> {
    let algebra = &m.algebra;
    let f = algebra.field.clone();
    let regular = regular_module(algebra);
    let m_star_basis = hom_space(m, &regular)?;
    let m_star = a_dual(m, op)?;
    let opop = op.opposite()?;
    let m_star_star = a_dual(&m_star, &opop)?;
    let _ = op_ctx;
    if m_star_star.total_dim == 0 {
        return Ok(FMatrix::zero(f, 0, m.total_dim));
    }
    // basis of Hom_{A^op}(M*, A^op-regular)
    let op_regular = regular_module(op);
    let dd_basis = hom_space(&m_star, &op_regular)?;
    debug_assert_eq!(dd_basis.len(), m_star_star.total_dim);
    let flat_len = op.dim * m_star.total_dim.max(1);
    let cols: Vec<Vec<Elt>> = dd_basis.iter().map(|b| b.matrix.entries.clone()).collect();
    let flat = FMatrix::from_columns(f.clone(), flat_len, &cols);
    let mut sigma = FMatrix::zero(f.clone(), dd_basis.len(), m.total_dim);
    for k in 0..m.total_dim {
        // h_k: M* -> A^op, f_i |-> f_i(e_k) transported along the canonical
        // anti-isomorphism; its matrix has column i = phi(f_i(e_k))
        let mut hk = FMatrix::zero(f.clone(), op.dim, m_star.total_dim);
        for (i, fi) in m_star_basis.iter().enumerate() {
            let value: Vec<Elt> = (0..algebra.dim).map(|r| fi.matrix.at(r, k)).collect();
            let converted = algebra.coords_to_opposite(op, &value)?;
            for r in 0..op.dim {
                hk.set(r, i, converted[r]);
            }
        }
        let rhs = FMatrix {
            rows: flat_len,
            cols: 1,
            entries: hk.entries,
            field: Some(f.clone()),
        };
        let sol = flat
            .solve(&rhs)?
            .ok_or_else(|| Error::Internal("evaluation not in double-dual span".into()))?;
        for r in 0..dd_basis.len() {
            sigma.set(r, k, sol.0.at(r, 0));
        }
    }
    Ok(sigma)
}

/// Transpose: the cokernel of the a-dualized minimal projective presentation
/// P_0* -> P_1*, a module over the opposite algebra.
pub fn transpose(ctx: &HomCtx, m: &Rep, op: &Arc<BoundAlgebra>) -> Result<Rep> {
    if m.is_zero() {
        return Ok(Rep::zero(op.clone()));
    }
    let cover0 = projective_cover(ctx, m)?;
    if cover0.syzygy.is_zero() {
        return Ok(Rep::zero(op.clone()));
    }
    let cover1 = projective_cover(ctx, &cover0.syzygy)?;
    // d: P1 -> P0
    let d = cover0
        .syzygy_inclusion
        .matrix
        .mul(&cover1.epi.matrix)?;
    let f = m.algebra.field.clone();
    let regular = regular_module(&m.algebra);
    let p0_star_basis = hom_space(&cover0.projective, &regular)?;
    let p1_star_basis = hom_space(&cover1.projective, &regular)?;
    let p1_star = a_dual(&cover1.projective, op)?;
    if p1_star_basis.is_empty() {
        return Ok(Rep::zero(op.clone()));
    }
    // d*: P0* -> P1*, f |-> f o d, in coordinates
    let flat_len = p1_star_basis[0].matrix.entries.len();
    let cols: Vec<Vec<Elt>> = p1_star_basis
        .iter()
        .map(|b| b.matrix.entries.clone())
        .collect();
    let flat = FMatrix::from_columns(f.clone(), flat_len, &cols);
    let mut image_cols = Vec::new();
    for f0 in &p0_star_basis {
        let comp = f0.matrix.mul(&d)?;
        let rhs = FMatrix {
            rows: flat_len,
            cols: 1,
            entries: comp.entries,
            field: Some(f.clone()),
        };
        let sol = flat
            .solve(&rhs)?
            .ok_or_else(|| Error::Internal("transpose image escaped the dual span".into()))?;
        image_cols.push(sol.0.column(0));
    }
    let image_rows = span_basis(&f, p1_star_basis.len(), &image_cols);
    let image_mat = if image_rows.is_empty() {
        FMatrix::zero(f.clone(), p1_star.total_dim, 0)
    } else {
        FMatrix::from_columns(f.clone(), p1_star.total_dim, &image_rows)
    };
    Ok(quotient_by_basis(&p1_star, &image_mat)?.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DualKind {
    KDual,
    ADual,
    Transpose,
}

/// Duality dispatch: k-dual, a-dual, or transpose, all over A^op.
pub fn dual(ctx: &HomCtx, m: &Rep, kind: DualKind) -> Result<Rep> {
    let op = m.algebra.opposite()?;
    match kind {
        DualKind::KDual => crate::rep::k_dual(m, &op),
        DualKind::ADual => a_dual(m, &op),
        DualKind::Transpose => transpose(ctx, m, &op),
    }
}

/// Exactness check for a pair of composable morphisms at the middle object.
pub fn exact_at_middle(first: &RepMorphism, second: &RepMorphism) -> Result<bool> {
    let comp = second.matrix.mul(&first.matrix)?;
    if !comp.is_zero() {
        return Ok(false);
    }
    Ok(first.matrix.rank() + second.matrix.rank() == first.target.total_dim)
}

/// Pushout of b: X -> B along a: X -> A (a injective): returns
/// (P, inc_a: A -> P, inc_b: B -> P) with P = (A (+) B)/{(a(x), -b(x))}.
pub fn pushout(a: &RepMorphism, b: &RepMorphism) -> Result<(Rep, RepMorphism, RepMorphism)> {
    if a.source != b.source {
        return Err(Error::ShapeMismatch("pushout legs share a source".into()));
    }
    let f = a.source.algebra.field.clone();
    let sum = crate::rep::direct_sum(&a.target, &b.target)?;
    let x_dim = a.source.total_dim;
    let mut anti = FMatrix::zero(f.clone(), sum.total_dim, x_dim);
    for r in 0..a.target.total_dim {
        for c in 0..x_dim {
            anti.set(r, c, a.matrix.at(r, c));
        }
    }
    for r in 0..b.target.total_dim {
        for c in 0..x_dim {
            anti.set(a.target.total_dim + r, c, f.neg(b.matrix.at(r, c)));
        }
    }
    let (p, quot) = quotient_by_basis(&sum, &anti.column_space_basis())?;
    let mut a_in = FMatrix::zero(f.clone(), sum.total_dim, a.target.total_dim);
    for i in 0..a.target.total_dim {
        a_in.set(i, i, 1);
    }
    let mut b_in = FMatrix::zero(f.clone(), sum.total_dim, b.target.total_dim);
    for i in 0..b.target.total_dim {
        b_in.set(a.target.total_dim + i, i, 1);
    }
    let inc_a = RepMorphism::new(a.target.clone(), p.clone(), quot.matrix.mul(&a_in)?)?;
    let inc_b = RepMorphism::new(b.target.clone(), p.clone(), quot.matrix.mul(&b_in)?)?;
    Ok((p, inc_a, inc_b))
}


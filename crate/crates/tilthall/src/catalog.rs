//! Iso-class catalogs: every module of total dimension <= D up to
//! isomorphism, with automorphism counts, Krull-Schmidt coordinates,
//! homological flags, and the full conflation index (which doubles as the
//! Hall-number table).
//!
//! Enumeration is by extensions: every nonzero module has a simple quotient,
//! so level d is exhausted by realizing all Ext^1(S, N) classes over the
//! levels below. Candidates are bucketed by Hom-dimension fingerprints
//! before any isomorphism witness search runs.

use crate::algebra::BoundAlgebra;
use crate::error::{Error, Result};
use crate::homology::{
    ext1_middle_terms, gp_verdict, membership, res_le, sgp_verdict, HomCtx, SubcatSpec, Verdict,
};
use crate::rep::{
    decompose, default_submodule_cap, direct_sum, iso_bool, submodules, Rep,
};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CatalogCaps {
    pub submodule_cap: usize,
    pub exhaust_cap: u64,
    pub realization_cap: u64,
    pub syzygy_bound: usize,
}

impl CatalogCaps {
    pub fn for_field(q: u64) -> CatalogCaps {
        CatalogCaps {
            submodule_cap: default_submodule_cap(q),
            exhaust_cap: 1 << 16,
            realization_cap: 1 << 12,
            syzygy_bound: crate::homology::DEFAULT_SYZYGY_BOUND,
        }
    }
}

pub struct IsoClass {
    pub id: usize,
    pub rep: Rep,
    pub aut_count: u64,
    /// Krull-Schmidt coordinates: (class id of an indecomposable, multiplicity).
    pub decomposition: Vec<(usize, usize)>,
    pub is_projective: bool,
    /// pd <= 1 in the ambient module category.
    pub ple1: Verdict,
    pub sgp: Verdict,
    pub gp: Verdict,
    /// Gorenstein-projective dimension <= 1.
    pub gp_le1: Verdict,
    /// Ext-orthogonality verdicts per registered module, by name.
    pub perp: HashMap<String, Verdict>,
    pub fingerprint: Vec<usize>,
}

/// One realized conflation shape 0 -> sub -> middle -> quotient -> 0 with
/// its submodule count: `count` = g^{middle}_{quotient, sub}, the number of
/// submodules of (a representative of) `middle` isomorphic to `sub` with
/// quotient isomorphic to `quotient`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ConflationCount {
    pub sub: usize,
    pub middle: usize,
    pub quotient: usize,
    pub count: u64,
}

pub struct IsoCatalog {
    pub algebra: Arc<BoundAlgebra>,
    pub dim_bound: usize,
    pub caps: CatalogCaps,
    pub classes: Vec<IsoClass>,
    pub conflations: Vec<ConflationCount>,
    pub complete: bool,
    pub incompleteness: Vec<String>,
    probes: Vec<Rep>,
}

impl std::fmt::Debug for IsoCatalog {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "IsoCatalog({} classes to dim {}, {} conflation shapes, complete: {})",
            self.classes.len(),
            self.dim_bound,
            self.conflations.len(),
            self.complete
        )
    }
}

/// Hom-dimension fingerprint computed through the context memo tables.
fn fingerprint(ctx: &HomCtx, m: &Rep, probes: &[Rep]) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(2 * probes.len() + 2);
    out.push(m.total_dim);
    out.push(ctx.hom_dim(m, m)?);
    for p in probes {
        out.push(ctx.hom_dim(p, m)?);
        out.push(ctx.hom_dim(m, p)?);
    }
    Ok(out)
}

pub fn build_catalog(
    ctx: &HomCtx,
    dim_bound: usize,
    caps: &CatalogCaps,
    registered: &[(String, Rep)],
) -> Result<IsoCatalog> {
    let algebra = ctx.algebra.clone();
    let mut incompleteness = Vec::new();
    // fingerprint probes: simples and indecomposable projectives
    let mut probes: Vec<Rep> = ctx.simples.clone();
    for p in &ctx.projectives {
        probes.push(p.rep.clone());
    }

    // --- enumerate representatives level by level -------------------------
    let mut reps: Vec<Rep> = vec![Rep::zero(algebra.clone())];
    let mut fingerprints: Vec<Vec<usize>> = vec![fingerprint(ctx, &reps[0], &probes)?];
    let mut buckets: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
    buckets.insert(fingerprints[0].clone(), vec![0]);
    let mut levels: Vec<Vec<usize>> = vec![vec![0]];

    for d in 1..=dim_bound {
        let mut level = Vec::new();
        let mut candidates: Vec<Rep> = Vec::new();
        for s in &ctx.simples {
            let sd = s.total_dim;
            if sd > d {
                continue;
            }
            let lower = &levels[d - sd];
            for &nid in lower {
                let n = reps[nid].clone();
                match ext1_middle_terms(ctx, s, &n, caps.realization_cap) {
                    Ok(middles) => candidates.extend(middles),
                    Err(Error::CapExceeded(msg)) => {
                        incompleteness.push(format!("level {d}: {msg}"));
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        for cand in candidates {
            debug_assert_eq!(cand.total_dim, d);
            let fp = fingerprint(ctx, &cand, &probes)?;
            let bucket = buckets.entry(fp.clone()).or_default();
            let mut known = false;
            for &id in bucket.iter() {
                if iso_bool(&cand, &reps[id], &ctx.policy)? {
                    known = true;
                    break;
                }
            }
            if !known {
                let id = reps.len();
                reps.push(cand);
                fingerprints.push(fp);
                bucket.push(id);
                level.push(id);
            }
        }
        levels.push(level);
    }

    // --- classification helper -------------------------------------------
    let classify = |rep: &Rep,
                    reps: &[Rep],
                    buckets: &HashMap<Vec<usize>, Vec<usize>>|
     -> Result<Option<usize>> {
        let fp = fingerprint(ctx, rep, &probes)?;
        if let Some(bucket) = buckets.get(&fp) {
            for &id in bucket {
                if iso_bool(rep, &reps[id], &ctx.policy)? {
                    return Ok(Some(id));
                }
            }
        }
        Ok(None)
    };

    // --- per-class data ----------------------------------------------------
    let mut classes = Vec::with_capacity(reps.len());
    for (id, rep) in reps.iter().enumerate() {
        let parts = decompose(rep, &ctx.policy)?;
        let mut decomposition = Vec::new();
        for (part, mult) in &parts {
            let pid = classify(part, &reps, &buckets)?.ok_or_else(|| {
                Error::Internal(format!("summand of class {id} missing from catalog"))
            })?;
            decomposition.push((pid, *mult));
        }
        decomposition.sort();
        let aut_count = aut_count_structural(ctx, rep, &parts)?;
        if let Some(exhaustive) = aut_count_exhaustive(rep, caps.exhaust_cap.min(4096))? {
            if exhaustive != aut_count {
                return Err(Error::Internal(format!(
                    "automorphism count mismatch on class {id}: structural {aut_count} vs exhaustive {exhaustive}"
                )));
            }
        }
        let proj_v = membership(ctx, rep, &SubcatSpec::Projectives, caps.syzygy_bound)?;
        let ple1 = res_le(ctx, rep, &SubcatSpec::Projectives, 1, caps.syzygy_bound)?;
        let sgp = sgp_verdict(ctx, rep, caps.syzygy_bound)?;
        let gp = gp_verdict(ctx, rep, caps.syzygy_bound)?;
        let gp_le1 = res_le(ctx, rep, &SubcatSpec::Gp, 1, caps.syzygy_bound)?;
        let mut perp = HashMap::new();
        for (name, t) in registered {
            let v = crate::homology::in_perp(ctx, rep, t, caps.syzygy_bound)?;
            perp.insert(name.clone(), v);
        }
        classes.push(IsoClass {
            id,
            rep: rep.clone(),
            aut_count,
            decomposition,
            is_projective: proj_v.is_yes(),
            ple1,
            sgp,
            gp,
            gp_le1,
            perp,
            fingerprint: fingerprints[id].clone(),
        });
    }

    // --- conflation index ---------------------------------------------------
    let mut conflation_map: HashMap<(usize, usize, usize), u64> = HashMap::new();
    for (lid, rep) in reps.iter().enumerate() {
        if rep.total_dim > caps.submodule_cap {
            incompleteness.push(format!(
                "class {lid}: dim {} above submodule cap, conflations omitted",
                rep.total_dim
            ));
            continue;
        }
        let subs = submodules(rep, caps.submodule_cap)?;
        for (sub, incl) in &subs {
            let quot = crate::rep::morphism_parts(&sub_inclusion_as_morphism(incl))?;
            let (qrep, _) = quot.cokernel;
            let sid = classify(sub, &reps, &buckets)?
                .ok_or_else(|| Error::Internal("submodule class missing".into()))?;
            let qid = classify(&qrep, &reps, &buckets)?
                .ok_or_else(|| Error::Internal("quotient class missing".into()))?;
            *conflation_map.entry((sid, lid, qid)).or_insert(0) += 1;
        }
    }
    let mut conflations: Vec<ConflationCount> = conflation_map
        .into_iter()
        .map(|((sub, middle, quotient), count)| ConflationCount {
            sub,
            middle,
            quotient,
            count,
        })
        .collect();
    conflations.sort_by_key(|c| (c.middle, c.sub, c.quotient));

    Ok(IsoCatalog {
        algebra,
        dim_bound,
        caps: caps.clone(),
        classes,
        conflations,
        complete: incompleteness.is_empty(),
        incompleteness,
        probes,
    })
}

fn sub_inclusion_as_morphism(incl: &crate::rep::RepMorphism) -> crate::rep::RepMorphism {
    incl.clone()
}

impl IsoCatalog {
    /// Reassembles a catalog from persisted parts; fingerprint probes are
    /// rebuilt from the context.
    pub fn from_parts(
        ctx: &HomCtx,
        dim_bound: usize,
        caps: CatalogCaps,
        classes: Vec<IsoClass>,
        conflations: Vec<ConflationCount>,
        complete: bool,
        incompleteness: Vec<String>,
    ) -> IsoCatalog {
        let mut probes: Vec<Rep> = ctx.simples.clone();
        for p in &ctx.projectives {
            probes.push(p.rep.clone());
        }
        IsoCatalog {
            algebra: ctx.algebra.clone(),
            dim_bound,
            caps,
            classes,
            conflations,
            complete,
            incompleteness,
            probes,
        }
    }

    /// Locates the iso class of an arbitrary module of dimension <= D.
    pub fn classify(&self, ctx: &HomCtx, rep: &Rep) -> Result<Option<usize>> {
        if rep.total_dim > self.dim_bound {
            return Ok(None);
        }
        let fp = fingerprint(ctx, rep, &self.probes)?;
        for class in &self.classes {
            if class.fingerprint == fp
                && iso_bool(rep, &class.rep, &ctx.policy)?
            {
                return Ok(Some(class.id));
            }
        }
        Ok(None)
    }

    /// Class id of the direct sum of two classes, when within the bound.
    pub fn sum_class(&self, ctx: &HomCtx, a: usize, b: usize) -> Result<Option<usize>> {
        let sum = direct_sum(&self.classes[a].rep, &self.classes[b].rep)?;
        self.classify(ctx, &sum)
    }

    pub fn zero_class(&self) -> usize {
        0
    }

    pub fn total_dim(&self, id: usize) -> usize {
        self.classes[id].rep.total_dim
    }

    pub fn dim_vector(&self, id: usize) -> &[usize] {
        &self.classes[id].rep.dim_vector
    }

    /// Hall number g^L_{M,N}: submodules of L isomorphic to N with quotient
    /// isomorphic to M.
    pub fn hall_number(&self, l: usize, m: usize, n: usize) -> Result<u64> {
        if self.classes[l].rep.total_dim > self.caps.submodule_cap {
            return Err(Error::CapExceeded(format!(
                "class {l} exceeds the submodule cap"
            )));
        }
        Ok(self
            .conflations
            .iter()
            .find(|c| c.middle == l && c.sub == n && c.quotient == m)
            .map(|c| c.count)
            .unwrap_or(0))
    }

    pub fn hom_count_via(&self, ctx: &HomCtx, m: usize, n: usize) -> Result<u64> {
        let d = ctx.hom_dim(&self.classes[m].rep, &self.classes[n].rep)?;
        Ok(self.algebra.field.q.pow(d as u32))
    }
}

/// |Aut M| by the block-structure formula: for M = (+) M_i^{m_i} with the
/// M_i pairwise non-isomorphic indecomposables,
/// |Aut M| = q^{dim rad End M} * prod_i |GL_{m_i}(F_{q^{d_i}})|, where d_i
/// is the degree of the residue division ring of End(M_i) and
/// dim rad End M = dim End M - sum_i m_i^2 d_i.
fn aut_count_structural(ctx: &HomCtx, m: &Rep, parts: &[(Rep, usize)]) -> Result<u64> {
    if m.is_zero() {
        return Ok(1);
    }
    let q = m.algebra.field.q;
    let end_dim = ctx.hom_dim(m, m)?;
    let mut semisimple_dim = 0usize;
    let mut units: u128 = 1;
    for (part, mult) in parts {
        let d = residue_degree(ctx, part)?;
        semisimple_dim += mult * mult * d;
        units = units
            .checked_mul(gl_order(q, *mult, d))
            .ok_or_else(|| Error::Internal("automorphism count overflow".into()))?;
    }
    let rad_dim = end_dim
        .checked_sub(semisimple_dim)
        .ok_or_else(|| Error::Internal("radical dimension underflow".into()))?;
    let rad_count = (q as u128).pow(rad_dim as u32);
    let total = units
        .checked_mul(rad_count)
        .ok_or_else(|| Error::Internal("automorphism count overflow".into()))?;
    u64::try_from(total).map_err(|_| Error::Internal("automorphism count overflow".into()))
}

/// Degree d of the residue field End(M)/rad = F_{q^d} for indecomposable M:
/// the lcm of the irreducible-part degrees of the minimal polynomials of an
/// End basis (each minimal polynomial is primary because End is local).
fn residue_degree(ctx: &HomCtx, m: &Rep) -> Result<usize> {
    let basis = crate::rep::hom_space(m, m)?;
    let f = &m.algebra.field;
    let mut d = 1usize;
    for b in &basis {
        let mu = matrix_min_poly(&b.matrix);
        let g = primary_irreducible_part(f, &mu)?;
        let deg = g.len() - 1;
        d = lcm(d, deg);
    }
    let _ = ctx;
    Ok(d)
}

fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Minimal polynomial of a square matrix over its field.
fn matrix_min_poly(m: &crate::matrix::FMatrix) -> Vec<crate::field::Elt> {
    use crate::matrix::FMatrix;
    let f = m.field().clone();
    let n = m.rows;
    let mut powers: Vec<FMatrix> = vec![FMatrix::identity(f.clone(), n)];
    loop {
        let k = powers.len();
        let cols: Vec<Vec<crate::field::Elt>> = powers.iter().map(|p| p.entries.clone()).collect();
        let lhs = FMatrix::from_columns(f.clone(), n * n, &cols);
        let next = powers.last().unwrap().mul(m).expect("shape");
        let rhs = FMatrix {
            rows: n * n,
            cols: 1,
            entries: next.entries.clone(),
            field: Some(f.clone()),
        };
        if let Some((sol, _)) = lhs.solve(&rhs).expect("solve") {
            let mut coeffs = vec![0 as crate::field::Elt; k + 1];
            for i in 0..k {
                coeffs[i] = f.neg(sol.at(i, 0));
            }
            coeffs[k] = 1;
            return coeffs;
        }
        powers.push(next);
    }
}

/// For a primary polynomial g^a returns the irreducible g; errors when the
/// polynomial is not primary (the endomorphism ring was not local).
fn primary_irreducible_part(
    f: &crate::field::Field,
    mu: &[crate::field::Elt],
) -> Result<Vec<crate::field::Elt>> {
    // find the smallest-degree monic irreducible divisor; primary-ness makes
    // it unique
    let deg = mu.len() - 1;
    if deg == 0 {
        return Err(Error::Internal("constant minimal polynomial".into()));
    }
    let q = f.q;
    for d in 1..=deg {
        let count = (q as u128).pow(d as u32);
        for code in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut c = code;
            for _ in 0..d {
                cand.push((c % q as u128) as crate::field::Elt);
                c /= q as u128;
            }
            cand.push(1);
            if poly_divides(f, &cand, mu) {
                return Ok(cand);
            }
        }
    }
    Err(Error::Internal("no irreducible divisor found".into()))
}

fn poly_divides(f: &crate::field::Field, divisor: &[crate::field::Elt], m: &[crate::field::Elt]) -> bool {
    // long division remainder check
    let mut r: Vec<crate::field::Elt> = m.to_vec();
    let dd = divisor.len() - 1;
    let lead_inv = f.inv(divisor[dd]);
    while r.len() > dd {
        let lead = *r.last().unwrap();
        if lead != 0 {
            let c = f.mul(lead, lead_inv);
            let shift = r.len() - 1 - dd;
            for i in 0..divisor.len() {
                let v = f.sub(r[shift + i], f.mul(c, divisor[i]));
                r[shift + i] = v;
            }
        }
        r.pop();
        while r.last() == Some(&0) {
            r.pop();
        }
        if r.is_empty() {
            return true;
        }
    }
    r.is_empty()
}

fn gl_order(q: u64, m: usize, d: usize) -> u128 {
    let qd = (q as u128).pow(d as u32);
    let mut order: u128 = 1;
    let qdm = qd.pow(m as u32);
    for j in 0..m {
        order *= qdm - qd.pow(j as u32);
    }
    order
}

/// Exhaustive |Aut M| by enumerating the endomorphism space; None above cap.
fn aut_count_exhaustive(m: &Rep, cap: u64) -> Result<Option<u64>> {
    if m.is_zero() {
        return Ok(Some(1));
    }
    let basis = crate::rep::hom_space(m, m)?;
    let h = basis.len();
    let q = m.algebra.field.q;
    let total = (q as u128).pow(h as u32);
    if total > cap as u128 {
        return Ok(None);
    }
    let f = m.algebra.field.clone();
    let n = m.total_dim;
    let mut count = 0u64;
    let mut coeffs = vec![0 as crate::field::Elt; h];
    loop {
        // evaluate
        let mut acc = crate::matrix::FMatrix::zero(f.clone(), n, n);
        let mut nonzero = false;
        for (b, &c) in basis.iter().zip(coeffs.iter()) {
            if c != 0 {
                acc = acc.add(&b.matrix.scale(c))?;
                nonzero = true;
            }
        }
        if nonzero && acc.rank() == n {
            count += 1;
        }
        // increment
        let mut i = 0;
        loop {
            if i == h {
                return Ok(Some(count));
            }
            coeffs[i] += 1;
            if (coeffs[i] as u64) < q {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rep::{is_isomorphic, SearchPolicy};

    fn ctx_for(alg: Arc<BoundAlgebra>) -> HomCtx {
        HomCtx::new(alg, SearchPolicy::default()).unwrap()
    }

    #[test]
    fn a2_f2_catalog_d2_has_7_classes() {
        let a = fixtures::a2(2).unwrap();
        let ctx = ctx_for(a.clone());
        let caps = CatalogCaps::for_field(2);
        let cat = build_catalog(&ctx, 2, &caps, &[]).unwrap();
        assert!(cat.complete);
        assert_eq!(cat.classes.len(), 7);
    }

    #[test]
    fn d2_catalog_d2_has_4_classes() {
        let a = fixtures::d2().unwrap();
        let ctx = ctx_for(a.clone());
        let caps = CatalogCaps::for_field(2);
        let cat = build_catalog(&ctx, 2, &caps, &[]).unwrap();
        assert!(cat.complete);
        assert_eq!(cat.classes.len(), 4);
    }

    #[test]
    fn aut_counts_on_a2() {
        for q in [2u64, 3] {
            let a = fixtures::a2(q).unwrap();
            let ctx = ctx_for(a.clone());
            let caps = CatalogCaps::for_field(q);
            let cat = build_catalog(&ctx, 2, &caps, &[]).unwrap();
            // find P1 = the class with dim vector (1,1) that is projective
            let p1 = cat
                .classes
                .iter()
                .find(|c| c.rep.dim_vector == vec![1, 1] && c.is_projective)
                .unwrap();
            assert_eq!(p1.aut_count, q - 1);
        }
    }

    #[test]
    fn hall_numbers_on_a2_f2() {
        let a = fixtures::a2(2).unwrap();
        let ctx = ctx_for(a.clone());
        let caps = CatalogCaps::for_field(2);
        let cat = build_catalog(&ctx, 2, &caps, &[]).unwrap();
        let find = |dv: &[usize], proj: bool| {
            cat.classes
                .iter()
                .find(|c| c.rep.dim_vector == dv && (c.is_projective == proj || dv == [0, 1]))
                .map(|c| c.id)
                .unwrap()
        };
        let s1 = find(&[1, 0], false);
        let s2 = find(&[0, 1], true);
        let p1 = find(&[1, 1], true);
        // the nonsplit middle term: g^{P1}_{S1,S2} = 1
        assert_eq!(cat.hall_number(p1, s1, s2).unwrap(), 1);
        // the split middle: g^{S1+S2}_{S1,S2} = 1
        let split = cat
            .classes
            .iter()
            .find(|c| c.rep.dim_vector == vec![1, 1] && !c.is_projective)
            .unwrap()
            .id;
        assert_eq!(cat.hall_number(split, s1, s2).unwrap(), 1);
        // trivial shapes
        assert_eq!(cat.hall_number(p1, 0, p1).unwrap(), 1);
        assert_eq!(cat.hall_number(p1, p1, 0).unwrap(), 1);
    }

    #[test]
    fn catalog_matches_bruteforce_matrix_enumeration_on_d2() {
        // independent completeness oracle: enumerate all square-zero
        // actions on F_2^d for d <= 3 and count iso classes
        let a = fixtures::d2().unwrap();
        let ctx = ctx_for(a.clone());
        let caps = CatalogCaps::for_field(2);
        let cat = build_catalog(&ctx, 3, &caps, &[]).unwrap();
        let f = a.field.clone();
        let mut found: Vec<Rep> = vec![Rep::zero(a.clone())];
        for d in 1..=3usize {
            let cells = d * d;
            for code in 0..(1u64 << cells) {
                let entries: Vec<u32> = (0..cells).map(|i| ((code >> i) & 1) as u32).collect();
                let x = crate::matrix::FMatrix::from_rows(f.clone(), d, d, entries);
                if !x.mul(&x).unwrap().is_zero() {
                    continue;
                }
                let rep = Rep::from_quiver_data(a.clone(), &[d], &[x]).unwrap();
                if !found
                    .iter()
                    .any(|r| is_isomorphic(r, &rep, &ctx.policy).unwrap().is_some())
                {
                    found.push(rep);
                }
            }
        }
        assert_eq!(cat.classes.len(), found.len());
        // and every brute-force class is classified
        for rep in &found {
            assert!(cat.classify(&ctx, rep).unwrap().is_some());
        }
    }

    #[test]
    fn catalog_matches_bruteforce_on_a2_f3() {
        let a = fixtures::a2(3).unwrap();
        let ctx = ctx_for(a.clone());
        let caps = CatalogCaps::for_field(3);
        let cat = build_catalog(&ctx, 3, &caps, &[]).unwrap();
        let f = a.field.clone();
        let mut found: Vec<Rep> = Vec::new();
        for d1 in 0..=3usize {
            for d2 in 0..=(3 - d1) {
                let cells = d1 * d2;
                let total = 3u64.pow(cells as u32);
                for code in 0..total {
                    let mut entries = Vec::with_capacity(cells);
                    let mut c = code;
                    for _ in 0..cells {
                        entries.push((c % 3) as u32);
                        c /= 3;
                    }
                    let arrow = crate::matrix::FMatrix::from_rows(f.clone(), d2, d1, entries);
                    let rep = Rep::from_quiver_data(a.clone(), &[d1, d2], &[arrow]).unwrap();
                    if !found
                        .iter()
                        .any(|r| is_isomorphic(r, &rep, &ctx.policy).unwrap().is_some())
                    {
                        found.push(rep);
                    }
                }
            }
        }
        assert_eq!(cat.classes.len(), found.len());
    }

    #[test]
    fn decomposition_coordinates_resum() {
        let a = fixtures::d2().unwrap();
        let ctx = ctx_for(a.clone());
        let caps = CatalogCaps::for_field(2);
        let cat = build_catalog(&ctx, 3, &caps, &[]).unwrap();
        for class in &cat.classes {
            let mut parts: Vec<&Rep> = Vec::new();
            for &(pid, mult) in &class.decomposition {
                for _ in 0..mult {
                    parts.push(&cat.classes[pid].rep);
                }
            }
            let sum = crate::rep::direct_sum_many(&a, &parts).unwrap();
            assert!(is_isomorphic(&sum, &class.rep, &ctx.policy)
                .unwrap()
                .is_some());
        }
    }

    #[test]
    fn t2d2_catalog_builds() {
        let a = fixtures::t2d2().unwrap();
        let ctx = ctx_for(a.clone());
        let caps = CatalogCaps::for_field(2);
        let cat = build_catalog(&ctx, 3, &caps, &[]).unwrap();
        assert!(cat.complete);
        // GP is nontrivial on this fixture: some non-projective class is GP
        assert!(cat
            .classes
            .iter()
            .any(|c| !c.is_projective && c.gp.is_yes() && c.id != 0));
    }
}

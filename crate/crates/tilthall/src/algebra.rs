//! Finite-dimensional algebras presented by quiver-with-relations or by
//! multiplication table.
//!
//! A quiver presentation is normalized to a multiplication table by
//! enumerating paths length by length and eliminating the relation ideal;
//! the path basis is ordered by (length, source, arrow sequence) so every
//! derived object is deterministic. Table presentations are validated
//! (associativity, unit) and used as-is.

use crate::error::{Error, Result};
use crate::field::{Elt, Field};
use crate::matrix::FMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

pub const DEFAULT_PATH_LENGTH_CAP: usize = 32;
const PATH_COUNT_CAP: usize = 20_000;
/// Element-enumeration limit for the table-algebra radical computation.
const RADICAL_ENUM_CAP: u64 = 1 << 16;

// ---------------------------------------------------------------------------
// presentation documents (the on-disk format)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FieldDoc {
    pub p: u64,
    pub e: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ArrowDoc {
    pub name: String,
    pub from: String,
    pub to: String,
}

/// One summand of a relation: coefficient times a composable arrow word.
/// Arrows are listed in application order (first applied first).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RelationTermDoc {
    pub coeff: u64,
    pub path: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "presentation", rename_all = "lowercase")]
pub enum PresentationDoc {
    Quiver {
        field: FieldDoc,
        vertices: Vec<String>,
        arrows: Vec<ArrowDoc>,
        #[serde(default)]
        relations: Vec<Vec<RelationTermDoc>>,
    },
    Table {
        field: FieldDoc,
        basis: Vec<String>,
        /// Coordinates of the unit element.
        unit: Vec<u64>,
        /// Structure constants as (i, j, k, coefficient): e_i e_j has
        /// coefficient c at e_k. Omitted entries are zero.
        constants: Vec<(usize, usize, usize, u64)>,
    },
}

impl PresentationDoc {
    /// Canonical byte form: JSON with sorted keys (serde_json maps are
    /// BTree-backed) and the canonical basis order already applied.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("presentation serialization")
    }
}

// ---------------------------------------------------------------------------
// paths
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Path {
    /// Sort key comes first: length, then source, then the arrow word.
    len: usize,
    source: usize,
    arrows: Vec<usize>,
}

impl Path {
    fn trivial(v: usize) -> Self {
        Path {
            len: 0,
            source: v,
            arrows: vec![],
        }
    }
    fn target(&self, arrow_to: &[usize]) -> usize {
        match self.arrows.last() {
            Some(&a) => arrow_to[a],
            None => self.source,
        }
    }
    fn extended(&self, arrow: usize) -> Path {
        let mut arrows = self.arrows.clone();
        arrows.push(arrow);
        Path {
            len: self.len + 1,
            source: self.source,
            arrows,
        }
    }
}

// ---------------------------------------------------------------------------
// the algebra
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub enum GeneratorKind {
    /// Trivial path at a vertex (quiver case).
    VertexIdempotent(usize),
    /// Arrow with (from, to) vertex indices (quiver case).
    Arrow(usize, usize),
    /// Basis element of a table presentation.
    TableBasis(usize),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Generator {
    pub label: String,
    pub kind: GeneratorKind,
    /// Coordinates of the generator in the algebra basis.
    pub coords: Vec<Elt>,
}

#[derive(Debug, Clone)]
pub struct QuiverData {
    pub vertices: Vec<String>,
    pub arrows: Vec<ArrowDoc>,
    pub arrow_from: Vec<usize>,
    pub arrow_to: Vec<usize>,
    /// (source, target) of each basis path.
    pub basis_endpoints: Vec<(usize, usize)>,
    /// Arrow word of each basis path, application order.
    pub basis_words: Vec<Vec<usize>>,
}

pub struct BoundAlgebra {
    pub field: Arc<Field>,
    pub dim: usize,
    pub basis_labels: Vec<String>,
    /// Coordinates of the unit.
    pub unit: Vec<Elt>,
    /// Left regular representation: `left_mult[i]` is the matrix of
    /// x |-> e_i * x in the basis.
    pub left_mult: Vec<FMatrix>,
    pub generators: Vec<Generator>,
    pub quiver: Option<QuiverData>,
    pub doc: PresentationDoc,
    hash: String,
    radical: OnceLock<Vec<Vec<Elt>>>,
}

impl std::fmt::Debug for BoundAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "BoundAlgebra(dim {}, basis {:?}, q = {})",
            self.dim, self.basis_labels, self.field.q
        )
    }
}

impl BoundAlgebra {
    pub fn parse(doc: &PresentationDoc) -> Result<Arc<BoundAlgebra>> {
        Self::parse_capped(doc, DEFAULT_PATH_LENGTH_CAP)
    }

    pub fn parse_json(text: &str) -> Result<Arc<BoundAlgebra>> {
        let doc: PresentationDoc =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("algebra spec: {e}")))?;
        Self::parse(&doc)
    }

    pub fn parse_capped(doc: &PresentationDoc, path_cap: usize) -> Result<Arc<BoundAlgebra>> {
        match doc {
            PresentationDoc::Quiver {
                field,
                vertices,
                arrows,
                relations,
            } => build_quiver(doc, field, vertices, arrows, relations, path_cap),
            PresentationDoc::Table {
                field,
                basis,
                unit,
                constants,
            } => build_table(doc, field, basis, unit, constants),
        }
    }

    /// SHA-256 of the canonical presentation document.
    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn n_vertices(&self) -> usize {
        self.quiver.as_ref().map(|q| q.vertices.len()).unwrap_or(1)
    }

    /// Length of dimension vectors of modules over this algebra.
    pub fn dim_vector_len(&self) -> usize {
        self.n_vertices()
    }

    /// Product of two elements given by coordinates.
    pub fn elt_mul(&self, x: &[Elt], y: &[Elt]) -> Vec<Elt> {
        let f = &self.field;
        let mut out = vec![0; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let col = self.left_mult[i].apply(y);
            for k in 0..self.dim {
                out[k] = f.add(out[k], f.mul(xi, col[k]));
            }
        }
        out
    }

    /// Matrix of right multiplication x |-> x * e_j.
    pub fn right_mult(&self, j: usize) -> FMatrix {
        let mut m = FMatrix::zero(self.field.clone(), self.dim, self.dim);
        for i in 0..self.dim {
            // column i = e_i * e_j
            let mut ei = vec![0; self.dim];
            ei[i] = 1;
            let mut ej = vec![0; self.dim];
            ej[j] = 1;
            let prod = self.elt_mul(&ei, &ej);
            for k in 0..self.dim {
                m.set(k, i, prod[k]);
            }
        }
        m
    }

    /// Structure constant tensor entry: coefficient of e_k in e_i e_j.
    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Elt {
        self.left_mult[i].at(k, j)
    }

    /// The opposite algebra. Quiver presentations stay quiver presentations
    /// (arrows reversed, relation words reversed); table presentations get
    /// the transposed structure tensor.
    pub fn opposite(&self) -> Result<Arc<BoundAlgebra>> {
        match &self.doc {
            PresentationDoc::Quiver {
                field,
                vertices,
                arrows,
                relations,
            } => {
                let op_arrows: Vec<ArrowDoc> = arrows
                    .iter()
                    .map(|a| ArrowDoc {
                        name: a.name.clone(),
                        from: a.to.clone(),
                        to: a.from.clone(),
                    })
                    .collect();
                let op_relations: Vec<Vec<RelationTermDoc>> = relations
                    .iter()
                    .map(|rel| {
                        rel.iter()
                            .map(|t| RelationTermDoc {
                                coeff: t.coeff,
                                path: t.path.iter().rev().cloned().collect(),
                            })
                            .collect()
                    })
                    .collect();
                let doc = PresentationDoc::Quiver {
                    field: field.clone(),
                    vertices: vertices.clone(),
                    arrows: op_arrows,
                    relations: op_relations,
                };
                BoundAlgebra::parse(&doc)
            }
            PresentationDoc::Table {
                field,
                basis,
                unit,
                constants,
            } => {
                let op_constants: Vec<(usize, usize, usize, u64)> = constants
                    .iter()
                    .map(|&(i, j, k, c)| (j, i, k, c))
                    .collect();
                let doc = PresentationDoc::Table {
                    field: field.clone(),
                    basis: basis.clone(),
                    unit: unit.clone(),
                    constants: op_constants,
                };
                BoundAlgebra::parse(&doc)
            }
        }
    }

    /// Coordinate transport along the canonical anti-isomorphism A -> A^op.
    /// Table presentations share their basis; quiver presentations send a
    /// basis path to the A^op-product of its reversed arrow word.
    pub fn coords_to_opposite(&self, op: &BoundAlgebra, coords: &[Elt]) -> Result<Vec<Elt>> {
        let f = &self.field;
        match &self.quiver {
            None => Ok(coords.to_vec()),
            Some(q) => {
                let op_q = op
                    .quiver
                    .as_ref()
                    .ok_or_else(|| Error::AlgebraMismatch)?;
                let _ = op_q;
                let mut out = vec![0 as Elt; op.dim];
                for (i, &c) in coords.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    // image of basis path i: e_source * alpha_1 * ... in A^op
                    let (source, _) = q.basis_endpoints[i];
                    let mut acc = op
                        .generators
                        .iter()
                        .find(|g| matches!(g.kind, GeneratorKind::VertexIdempotent(v) if v == source))
                        .ok_or(Error::AlgebraMismatch)?
                        .coords
                        .clone();
                    for &arrow in &q.basis_words[i] {
                        let name = &q.arrows[arrow].name;
                        let g = op
                            .generators
                            .iter()
                            .find(|g| {
                                g.label == *name && matches!(g.kind, GeneratorKind::Arrow(_, _))
                            })
                            .ok_or(Error::AlgebraMismatch)?;
                        acc = op.elt_mul(&acc, &g.coords);
                    }
                    for k in 0..op.dim {
                        out[k] = f.add(out[k], f.mul(c, acc[k]));
                    }
                }
                Ok(out)
            }
        }
    }

    /// Basis of the Jacobson radical, as coordinate vectors.
    ///
    /// Quiver presentations first try the span of the positive-length basis
    /// paths (the arrow ideal); when that ideal is nilpotent it is the
    /// radical. Otherwise, and for table presentations, every element x is
    /// tested for nilpotency of the two-sided ideal AxA; the radical is
    /// exactly the set of elements passing the test.
    pub fn radical_basis(&self) -> Result<&[Vec<Elt>]> {
        if let Some(r) = self.radical.get() {
            return Ok(r);
        }
        let computed = self.compute_radical()?;
        let _ = self.radical.set(computed);
        Ok(self.radical.get().unwrap())
    }

    fn compute_radical(&self) -> Result<Vec<Vec<Elt>>> {
        if let Some(q) = &self.quiver {
            // arrow ideal = span of basis paths of positive length
            let gens: Vec<Vec<Elt>> = (0..self.dim)
                .filter(|&i| !q.basis_words[i].is_empty())
                .map(|i| {
                    let mut v = vec![0; self.dim];
                    v[i] = 1;
                    v
                })
                .collect();
            if self.ideal_is_nilpotent(&gens) {
                return Ok(gens);
            }
        }
        // exhaustive element scan
        let count = (self.field.q as u128).pow(self.dim as u32);
        if count > RADICAL_ENUM_CAP as u128 {
            return Err(Error::AlgebraTooLarge(format!(
                "radical scan needs {count} elements"
            )));
        }
        let q = self.field.q as u64;
        let mut members: Vec<Vec<Elt>> = Vec::new();
        for code in 1..count as u64 {
            let mut x = vec![0 as Elt; self.dim];
            let mut c = code;
            for xi in x.iter_mut() {
                *xi = (c % q) as Elt;
                c /= q;
            }
            let ideal = self.two_sided_ideal(&x);
            if self.ideal_is_nilpotent(&ideal) {
                members.push(x);
            }
        }
        // members form a subspace; echelonize to a basis
        Ok(span_basis(&self.field, self.dim, &members))
    }

    /// Spanning set of the two-sided ideal generated by x.
    fn two_sided_ideal(&self, x: &[Elt]) -> Vec<Vec<Elt>> {
        let mut gens = Vec::new();
        for i in 0..self.dim {
            let mut ei = vec![0; self.dim];
            ei[i] = 1;
            let left = self.elt_mul(&ei, x);
            for j in 0..self.dim {
                let mut ej = vec![0; self.dim];
                ej[j] = 1;
                gens.push(self.elt_mul(&left, &ej));
            }
        }
        span_basis(&self.field, self.dim, &gens)
    }

    fn ideal_is_nilpotent(&self, gens: &[Vec<Elt>]) -> bool {
        let mut current = span_basis(&self.field, self.dim, gens);
        for _ in 0..=self.dim {
            if current.is_empty() {
                return true;
            }
            let mut products = Vec::new();
            for a in &current {
                for b in gens {
                    products.push(self.elt_mul(a, b));
                }
            }
            let next = span_basis(&self.field, self.dim, &products);
            if next.len() == current.len() {
                // stabilized nonzero
                return next.is_empty();
            }
            current = next;
        }
        current.is_empty()
    }

    /// Verifies the algebra axioms exhaustively on basis triples.
    pub fn verify_table(&self) -> Result<()> {
        let f = &self.field;
        let dim = self.dim;
        // unit is two-sided identity
        for i in 0..dim {
            let mut ei = vec![0; dim];
            ei[i] = 1;
            if self.elt_mul(&self.unit, &ei) != ei || self.elt_mul(&ei, &self.unit) != ei {
                return Err(Error::NonAssociative(format!(
                    "unit fails on basis element {}",
                    self.basis_labels[i]
                )));
            }
        }
        // associativity on basis triples
        for i in 0..dim {
            let mut ei = vec![0; dim];
            ei[i] = 1;
            for j in 0..dim {
                let mut ej = vec![0; dim];
                ej[j] = 1;
                let ij = self.elt_mul(&ei, &ej);
                for k in 0..dim {
                    let mut ek = vec![0; dim];
                    ek[k] = 1;
                    let left = self.elt_mul(&ij, &ek);
                    let jk = self.elt_mul(&ej, &ek);
                    let right = self.elt_mul(&ei, &jk);
                    if left != right {
                        return Err(Error::NonAssociative(format!(
                            "({} {}) {} != {} ({} {})",
                            self.basis_labels[i],
                            self.basis_labels[j],
                            self.basis_labels[k],
                            self.basis_labels[i],
                            self.basis_labels[j],
                            self.basis_labels[k]
                        )));
                    }
                }
            }
        }
        let _ = f;
        Ok(())
    }
}

/// Echelonized basis of the span of the given coordinate vectors.
pub fn span_basis(field: &Arc<Field>, dim: usize, vectors: &[Vec<Elt>]) -> Vec<Vec<Elt>> {
    if vectors.is_empty() {
        return vec![];
    }
    let mut entries = Vec::with_capacity(vectors.len() * dim);
    for v in vectors {
        entries.extend_from_slice(v);
    }
    let m = FMatrix::from_rows(field.clone(), vectors.len(), dim, entries);
    let (rref, pivots) = m.rref();
    (0..pivots.len())
        .map(|r| (0..dim).map(|c| rref.at(r, c)).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// quiver construction
// ---------------------------------------------------------------------------

struct RelationInternal {
    /// (coefficient, arrow word); all words parallel.
    terms: Vec<(Elt, Vec<usize>)>,
    source: usize,
    target: usize,
    max_len: usize,
}

fn build_quiver(
    doc: &PresentationDoc,
    field_doc: &FieldDoc,
    vertices: &[String],
    arrows: &[ArrowDoc],
    relations: &[Vec<RelationTermDoc>],
    path_cap: usize,
) -> Result<Arc<BoundAlgebra>> {
    let field = Field::make(field_doc.p, field_doc.e)?;
    if vertices.is_empty() {
        return Err(Error::Parse("quiver needs at least one vertex".into()));
    }
    let vindex: HashMap<&str, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_str(), i))
        .collect();
    if vindex.len() != vertices.len() {
        return Err(Error::Parse("duplicate vertex labels".into()));
    }
    let mut arrow_from = Vec::with_capacity(arrows.len());
    let mut arrow_to = Vec::with_capacity(arrows.len());
    let aindex: HashMap<&str, usize> = arrows
        .iter()
        .enumerate()
        .map(|(i, a)| (a.name.as_str(), i))
        .collect();
    if aindex.len() != arrows.len() {
        return Err(Error::Parse("duplicate arrow names".into()));
    }
    for a in arrows {
        let from = *vindex
            .get(a.from.as_str())
            .ok_or_else(|| Error::Parse(format!("unknown vertex {}", a.from)))?;
        let to = *vindex
            .get(a.to.as_str())
            .ok_or_else(|| Error::Parse(format!("unknown vertex {}", a.to)))?;
        arrow_from.push(from);
        arrow_to.push(to);
    }

    // validate relations: composable parallel words with length >= 1
    let mut rels = Vec::new();
    for rel in relations {
        if rel.is_empty() {
            return Err(Error::MalformedRelation("empty relation".into()));
        }
        let mut terms = Vec::new();
        let mut endpoints: Option<(usize, usize)> = None;
        let mut max_len = 0usize;
        for term in rel {
            if term.path.is_empty() {
                return Err(Error::MalformedRelation(
                    "relation term with empty path".into(),
                ));
            }
            let mut word = Vec::with_capacity(term.path.len());
            for name in &term.path {
                let idx = *aindex
                    .get(name.as_str())
                    .ok_or_else(|| Error::MalformedRelation(format!("unknown arrow {name}")))?;
                word.push(idx);
            }
            // composability
            for w in word.windows(2) {
                if arrow_to[w[0]] != arrow_from[w[1]] {
                    return Err(Error::MalformedRelation(format!(
                        "non-composable word {:?}",
                        term.path
                    )));
                }
            }
            let src = arrow_from[word[0]];
            let tgt = arrow_to[*word.last().unwrap()];
            match endpoints {
                None => endpoints = Some((src, tgt)),
                Some(ep) => {
                    if ep != (src, tgt) {
                        return Err(Error::MalformedRelation(
                            "terms of one relation are not parallel".into(),
                        ));
                    }
                }
            }
            let coeff = (term.coeff % field.p) as Elt;
            max_len = max_len.max(word.len());
            terms.push((coeff, word));
        }
        let (source, target) = endpoints.unwrap();
        rels.push(RelationInternal {
            terms,
            source,
            target,
            max_len,
        });
    }

    // stagewise elimination
    let mut stage = 1usize;
    let (basis, nf_table) = loop {
        if stage > path_cap {
            return Err(Error::InfiniteDimensional {
                cap: path_cap,
                detail: "new basis paths at every length up to the cap".into(),
            });
        }
        let (paths, pindex) = enumerate_paths(vertices.len(), &arrow_from, &arrow_to, stage)?;
        let (basis, nf) = eliminate_stage(&field, &paths, &pindex, &rels, &arrow_to)?;
        let has_new = basis.iter().any(|p| p.len == stage);
        if !has_new {
            break (basis, nf);
        }
        stage += 1;
    };

    let dim = basis.len();
    let bindex: HashMap<Path, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();

    // normal form of any path in the covered range, as basis coordinates
    let nf_of = |p: &Path| -> Vec<Elt> {
        if let Some(&i) = bindex.get(p) {
            let mut v = vec![0; dim];
            v[i] = 1;
            return v;
        }
        match nf_table.get(p) {
            Some(v) => v.clone(),
            None => vec![0; dim],
        }
    };

    // left multiplication by each arrow and by each trivial path on the basis
    let f = field.clone();
    let arrow_left: Vec<FMatrix> = (0..arrows.len())
        .map(|a| {
            let mut m = FMatrix::zero(f.clone(), dim, dim);
            for (j, b) in basis.iter().enumerate() {
                if b.target(&arrow_to) != arrow_from[a] {
                    continue;
                }
                let ext = b.extended(a);
                let v = nf_of(&ext);
                for k in 0..dim {
                    m.set(k, j, v[k]);
                }
            }
            m
        })
        .collect();
    let vertex_left: Vec<FMatrix> = (0..vertices.len())
        .map(|v| {
            let mut m = FMatrix::zero(f.clone(), dim, dim);
            for (j, b) in basis.iter().enumerate() {
                if b.target(&arrow_to) == v {
                    m.set(j, j, 1);
                }
            }
            m
        })
        .collect();

    // left regular representation per basis path, by iterated application
    let left_mult: Vec<FMatrix> = basis
        .iter()
        .map(|b| {
            let mut m = vertex_left[b.source].clone();
            for &a in &b.arrows {
                m = arrow_left[a].mul(&m).expect("shape");
            }
            m
        })
        .collect();

    let unit: Vec<Elt> = {
        let mut u = vec![0; dim];
        for (i, b) in basis.iter().enumerate() {
            if b.len == 0 {
                u[i] = 1;
            }
        }
        u
    };

    let basis_labels: Vec<String> = basis
        .iter()
        .map(|b| {
            if b.arrows.is_empty() {
                format!("e_{}", vertices[b.source])
            } else {
                b.arrows
                    .iter()
                    .rev()
                    .map(|&a| arrows[a].name.clone())
                    .collect::<Vec<_>>()
                    .join("*")
            }
        })
        .collect();

    let mut generators = Vec::new();
    for (v, label) in vertices.iter().enumerate() {
        let coords = nf_of(&Path::trivial(v));
        generators.push(Generator {
            label: format!("e_{label}"),
            kind: GeneratorKind::VertexIdempotent(v),
            coords,
        });
    }
    for (a, arrow) in arrows.iter().enumerate() {
        let p = Path {
            len: 1,
            source: arrow_from[a],
            arrows: vec![a],
        };
        generators.push(Generator {
            label: arrow.name.clone(),
            kind: GeneratorKind::Arrow(arrow_from[a], arrow_to[a]),
            coords: nf_of(&p),
        });
    }

    let quiver = QuiverData {
        vertices: vertices.to_vec(),
        arrows: arrows.to_vec(),
        arrow_from: arrow_from.clone(),
        arrow_to: arrow_to.clone(),
        basis_endpoints: basis
            .iter()
            .map(|b| (b.source, b.target(&arrow_to)))
            .collect(),
        basis_words: basis.iter().map(|b| b.arrows.clone()).collect(),
    };

    let hash = hash_doc(doc);
    let alg = BoundAlgebra {
        field,
        dim,
        basis_labels,
        unit,
        left_mult,
        generators,
        quiver: Some(quiver),
        doc: doc.clone(),
        hash,
        radical: OnceLock::new(),
    };
    alg.verify_table()?;
    Ok(Arc::new(alg))
}

fn enumerate_paths(
    n_vertices: usize,
    arrow_from: &[usize],
    arrow_to: &[usize],
    max_len: usize,
) -> Result<(Vec<Path>, HashMap<Path, usize>)> {
    let mut paths: Vec<Path> = (0..n_vertices).map(Path::trivial).collect();
    let mut frontier = paths.clone();
    for _ in 1..=max_len {
        let mut next = Vec::new();
        for p in &frontier {
            let t = p.target(arrow_to);
            for a in 0..arrow_from.len() {
                if arrow_from[a] == t {
                    next.push(p.extended(a));
                }
            }
        }
        paths.extend(next.iter().cloned());
        if paths.len() > PATH_COUNT_CAP {
            return Err(Error::InfiniteDimensional {
                cap: max_len,
                detail: format!("path count exceeds {PATH_COUNT_CAP}"),
            });
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    paths.sort();
    let pindex = paths
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    Ok((paths, pindex))
}

/// Eliminates the relation ideal inside the span of `paths` (all paths of
/// length <= the stage bound). Returns the surviving basis paths (ascending
/// order) and the normal form of every eliminated path.
fn eliminate_stage(
    field: &Arc<Field>,
    paths: &[Path],
    pindex: &HashMap<Path, usize>,
    rels: &[RelationInternal],
    arrow_to: &[usize],
) -> Result<(Vec<Path>, HashMap<Path, Vec<Elt>>)> {
    let n = paths.len();
    let stage = paths.iter().map(|p| p.len).max().unwrap_or(0);
    // ideal generators u * r * v with deg(u) + max deg(r) + deg(v) <= stage
    let mut rows: Vec<Vec<Elt>> = Vec::new();
    for rel in rels {
        if rel.max_len > stage {
            continue;
        }
        let budget = stage - rel.max_len;
        for v in paths.iter().filter(|p| p.len <= budget) {
            if v.target(arrow_to) != rel.source {
                continue;
            }
            let rem = budget - v.len;
            for u in paths.iter().filter(|p| p.len <= rem) {
                if u.source != rel.target {
                    continue;
                }
                // vector of v-then-relation-then-u
                let mut vec_row = vec![0 as Elt; n];
                let mut nonzero = false;
                for (coeff, word) in &rel.terms {
                    if *coeff == 0 {
                        continue;
                    }
                    let mut arrows = v.arrows.clone();
                    arrows.extend_from_slice(word);
                    arrows.extend_from_slice(&u.arrows);
                    let p = Path {
                        len: arrows.len(),
                        source: v.source,
                        arrows,
                    };
                    let idx = *pindex
                        .get(&p)
                        .ok_or_else(|| Error::Internal("path index miss".into()))?;
                    vec_row[idx] = field.add(vec_row[idx], *coeff);
                    nonzero = true;
                }
                if nonzero {
                    rows.push(vec_row);
                }
            }
        }
    }

    if rows.is_empty() {
        let basis = paths.to_vec();
        return Ok((basis, HashMap::new()));
    }

    // eliminate largest paths first: reverse column order
    let m = rows.len();
    let mut entries = Vec::with_capacity(m * n);
    for row in &rows {
        for c in 0..n {
            entries.push(row[n - 1 - c]);
        }
    }
    let mat = FMatrix::from_rows(field.clone(), m, n, entries);
    let (rref, pivots) = mat.rref();

    let pivot_paths: Vec<usize> = pivots.iter().map(|&c| n - 1 - c).collect();
    let mut is_pivot = vec![false; n];
    for &p in &pivot_paths {
        is_pivot[p] = true;
    }
    let basis: Vec<Path> = paths
        .iter()
        .enumerate()
        .filter(|(i, _)| !is_pivot[*i])
        .map(|(_, p)| p.clone())
        .collect();
    let bpos: HashMap<usize, usize> = basis
        .iter()
        .enumerate()
        .map(|(bi, p)| (pindex[p], bi))
        .collect();

    let mut nf = HashMap::new();
    for (r, &c) in pivots.iter().enumerate() {
        let path_idx = n - 1 - c;
        let mut v = vec![0 as Elt; basis.len()];
        for c2 in (c + 1)..n {
            let coef = rref.at(r, c2);
            if coef == 0 {
                continue;
            }
            let pi = n - 1 - c2;
            let bi = *bpos
                .get(&pi)
                .ok_or_else(|| Error::Internal("rref tail hit a pivot column".into()))?;
            v[bi] = field.neg(coef);
        }
        nf.insert(paths[path_idx].clone(), v);
    }
    Ok((basis, nf))
}

// ---------------------------------------------------------------------------
// table construction
// ---------------------------------------------------------------------------

fn build_table(
    doc: &PresentationDoc,
    field_doc: &FieldDoc,
    basis: &[String],
    unit: &[u64],
    constants: &[(usize, usize, usize, u64)],
) -> Result<Arc<BoundAlgebra>> {
    let field = Field::make(field_doc.p, field_doc.e)?;
    let dim = basis.len();
    if dim == 0 {
        return Err(Error::Parse("table algebra needs a nonempty basis".into()));
    }
    if unit.len() != dim {
        return Err(Error::Parse("unit coordinate length mismatch".into()));
    }
    let mut left_mult = vec![FMatrix::zero(field.clone(), dim, dim); dim];
    for &(i, j, k, c) in constants {
        if i >= dim || j >= dim || k >= dim {
            return Err(Error::Parse(format!(
                "structure constant index out of range: ({i},{j},{k})"
            )));
        }
        let c = field.elt_from_json(&serde_json::json!(c % field.q)).unwrap_or((c % field.q) as Elt);
        let prev = left_mult[i].at(k, j);
        left_mult[i].set(k, j, field.add(prev, c));
    }
    let unit_coords: Vec<Elt> = unit.iter().map(|&u| (u % field.q) as Elt).collect();

    let generators = (0..dim)
        .map(|i| {
            let mut coords = vec![0; dim];
            coords[i] = 1;
            Generator {
                label: basis[i].clone(),
                kind: GeneratorKind::TableBasis(i),
                coords,
            }
        })
        .collect();

    let hash = hash_doc(doc);
    let alg = BoundAlgebra {
        field,
        dim,
        basis_labels: basis.to_vec(),
        unit: unit_coords,
        left_mult,
        generators,
        quiver: None,
        doc: doc.clone(),
        hash,
        radical: OnceLock::new(),
    };
    alg.verify_table()?;
    Ok(Arc::new(alg))
}

pub fn hash_doc(doc: &PresentationDoc) -> String {
    let mut hasher = Sha256::new();
    hasher.update(doc.canonical_json().as_bytes());
    hex::encode(hasher.finalize())
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn a2_has_dim_3() {
        let a = fixtures::a2(2).unwrap();
        assert_eq!(a.dim, 3);
        assert_eq!(a.basis_labels, vec!["e_1", "e_2", "a"]);
    }

    #[test]
    fn d2_has_dim_2() {
        let a = fixtures::d2().unwrap();
        assert_eq!(a.dim, 2);
        assert_eq!(a.basis_labels, vec!["e_v", "x"]);
        // x * x = 0
        let x = vec![0, 1];
        assert_eq!(a.elt_mul(&x, &x), vec![0, 0]);
    }

    #[test]
    fn loop_without_relations_is_infinite() {
        let doc = PresentationDoc::Quiver {
            field: FieldDoc { p: 2, e: 1 },
            vertices: vec!["v".into()],
            arrows: vec![ArrowDoc {
                name: "x".into(),
                from: "v".into(),
                to: "v".into(),
            }],
            relations: vec![],
        };
        assert!(matches!(
            BoundAlgebra::parse(&doc),
            Err(Error::InfiniteDimensional { .. })
        ));
    }

    #[test]
    fn l3_has_dim_3() {
        let a = fixtures::l3().unwrap();
        assert_eq!(a.dim, 3);
    }

    #[test]
    fn t2d2_has_dim_6() {
        let a = fixtures::t2d2().unwrap();
        assert_eq!(a.dim, 6);
    }

    #[test]
    fn radical_of_d2_is_x() {
        let a = fixtures::d2().unwrap();
        let rad = a.radical_basis().unwrap();
        assert_eq!(rad.len(), 1);
        assert_eq!(rad[0], vec![0, 1]);
    }

    #[test]
    fn radical_of_a2_is_the_arrow() {
        let a = fixtures::a2(2).unwrap();
        let rad = a.radical_basis().unwrap();
        assert_eq!(rad.len(), 1);
    }

    #[test]
    fn opposite_of_quiver_is_quiver() {
        let a = fixtures::a2(2).unwrap();
        let op = a.opposite().unwrap();
        assert_eq!(op.dim, 3);
        assert!(op.quiver.is_some());
        // e_1 * a = a in A^op  <=>  a * e_1 = a in A reversed
        let opop = op.opposite().unwrap();
        assert_eq!(opop.hash(), a.hash());
    }

    #[test]
    fn table_roundtrip_semisimple() {
        // F_2 x F_2
        let doc = PresentationDoc::Table {
            field: FieldDoc { p: 2, e: 1 },
            basis: vec!["u".into(), "v".into()],
            unit: vec![1, 1],
            constants: vec![(0, 0, 0, 1), (1, 1, 1, 1)],
        };
        let a = BoundAlgebra::parse(&doc).unwrap();
        assert_eq!(a.dim, 2);
        let rad = a.radical_basis().unwrap();
        assert!(rad.is_empty());
    }

    #[test]
    fn nonassociative_table_rejected() {
        // e basis with u*u = u but unit claimed [1]; make a broken table:
        // single basis element n with n*n = 0 and unit = n fails the unit law.
        let doc = PresentationDoc::Table {
            field: FieldDoc { p: 2, e: 1 },
            basis: vec!["n".into()],
            unit: vec![1],
            constants: vec![],
        };
        assert!(matches!(
            BoundAlgebra::parse(&doc),
            Err(Error::NonAssociative(_))
        ));
    }

    #[test]
    fn canonical_json_is_deterministic() {
        let a = fixtures::a2(2).unwrap();
        let b = fixtures::a2(2).unwrap();
        assert_eq!(a.doc.canonical_json(), b.doc.canonical_json());
        assert_eq!(a.hash(), b.hash());
    }
}

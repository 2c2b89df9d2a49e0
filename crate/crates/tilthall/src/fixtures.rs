//! The shipped fixture algebras.
//!
//! * `a2(q)` — path algebra of the quiver 1 -> 2 over F_q (hereditary).
//! * `d2()` — F_2[x]/(x^2), local self-injective.
//! * `l3()` — F_2[x,y]/(x^2, xy, yx, y^2), local with 2-dimensional socle.
//! * `t2d2()` — lower-triangular 2x2 matrices over F_2[x]/(x^2), the
//!   1-Gorenstein fixture with nontrivial Gorenstein-projective theory.

use crate::algebra::{ArrowDoc, BoundAlgebra, FieldDoc, PresentationDoc, RelationTermDoc};
use crate::error::Result;
use std::sync::Arc;

fn rel(terms: &[(u64, &[&str])]) -> Vec<RelationTermDoc> {
    terms
        .iter()
        .map(|(c, path)| RelationTermDoc {
            coeff: *c,
            path: path.iter().map(|s| s.to_string()).collect(),
        })
        .collect()
}

pub fn a2_doc(p: u64) -> PresentationDoc {
    PresentationDoc::Quiver {
        field: FieldDoc { p, e: 1 },
        vertices: vec!["1".into(), "2".into()],
        arrows: vec![ArrowDoc {
            name: "a".into(),
            from: "1".into(),
            to: "2".into(),
        }],
        relations: vec![],
    }
}

pub fn a2(p: u64) -> Result<Arc<BoundAlgebra>> {
    BoundAlgebra::parse(&a2_doc(p))
}

pub fn d2_doc() -> PresentationDoc {
    PresentationDoc::Quiver {
        field: FieldDoc { p: 2, e: 1 },
        vertices: vec!["v".into()],
        arrows: vec![ArrowDoc {
            name: "x".into(),
            from: "v".into(),
            to: "v".into(),
        }],
        relations: vec![rel(&[(1, &["x", "x"])])],
    }
}

pub fn d2() -> Result<Arc<BoundAlgebra>> {
    BoundAlgebra::parse(&d2_doc())
}

pub fn l3_doc() -> PresentationDoc {
    PresentationDoc::Quiver {
        field: FieldDoc { p: 2, e: 1 },
        vertices: vec!["v".into()],
        arrows: vec![
            ArrowDoc {
                name: "x".into(),
                from: "v".into(),
                to: "v".into(),
            },
            ArrowDoc {
                name: "y".into(),
                from: "v".into(),
                to: "v".into(),
            },
        ],
        relations: vec![
            rel(&[(1, &["x", "x"])]),
            rel(&[(1, &["x", "y"])]),
            rel(&[(1, &["y", "x"])]),
            rel(&[(1, &["y", "y"])]),
        ],
    }
}

pub fn l3() -> Result<Arc<BoundAlgebra>> {
    BoundAlgebra::parse(&l3_doc())
}

/// Quiver presentation of T_2(F_2[x]/(x^2)): vertices 1, 2, loops x1, x2,
/// an arrow b: 1 -> 2, square-zero loops, and the commutation b x1 = x2 b.
/// Relation words are written in application order, so the commutation reads
/// [x1, b] = [b, x2].
pub fn t2d2_doc() -> PresentationDoc {
    PresentationDoc::Quiver {
        field: FieldDoc { p: 2, e: 1 },
        vertices: vec!["1".into(), "2".into()],
        arrows: vec![
            ArrowDoc {
                name: "x1".into(),
                from: "1".into(),
                to: "1".into(),
            },
            ArrowDoc {
                name: "x2".into(),
                from: "2".into(),
                to: "2".into(),
            },
            ArrowDoc {
                name: "b".into(),
                from: "1".into(),
                to: "2".into(),
            },
        ],
        relations: vec![
            rel(&[(1, &["x1", "x1"])]),
            rel(&[(1, &["x2", "x2"])]),
            rel(&[(1, &["x1", "b"]), (1, &["b", "x2"])]),
        ],
    }
}

pub fn t2d2() -> Result<Arc<BoundAlgebra>> {
    BoundAlgebra::parse(&t2d2_doc())
}

/// Every shipped fixture by name, as used by the CLI.
pub fn by_name(name: &str) -> Option<PresentationDoc> {
    match name {
        "a2-f2" => Some(a2_doc(2)),
        "a2-f3" => Some(a2_doc(3)),
        "d2" => Some(d2_doc()),
        "l3" => Some(l3_doc()),
        "t2d2" => Some(t2d2_doc()),
        _ => None,
    }
}

pub const FIXTURE_NAMES: &[&str] = &["a2-f2", "a2-f3", "d2", "l3", "t2d2"];

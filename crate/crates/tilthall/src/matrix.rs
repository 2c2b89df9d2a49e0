//! Dense matrices over F_q with exact Gaussian elimination.
//!
//! Pivoting is deterministic (first nonzero entry scanning down the column),
//! so echelon forms and the bases derived from them are reproducible.

use crate::error::{Error, Result};
use crate::field::{Elt, Field};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

#[derive(Clone, Serialize, Deserialize)]
pub struct FMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Elt>,
    #[serde(skip)]
    pub field: Option<Arc<Field>>,
}

impl fmt::Debug for FMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{} ", self.at(r, c))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl PartialEq for FMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}
impl Eq for FMatrix {}

/// What `linear_solve` is asked to produce.
pub enum SolveMode<'a> {
    Rank,
    NullspaceBasis,
    Solve(&'a FMatrix),
    Inverse,
}

/// Result of `linear_solve`, one variant per mode.
pub enum SolveOutput {
    Rank(usize),
    /// Columns form a basis of {x : Ax = 0}.
    Nullspace(FMatrix),
    /// One particular solution per right-hand column plus the kernel basis,
    /// or None when the system is inconsistent.
    Solution(Option<(FMatrix, FMatrix)>),
    Inverse(FMatrix),
}

impl FMatrix {
    pub fn zero(field: Arc<Field>, rows: usize, cols: usize) -> Self {
        FMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
            field: Some(field),
        }
    }

    pub fn identity(field: Arc<Field>, n: usize) -> Self {
        let mut m = Self::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: Arc<Field>, rows: usize, cols: usize, entries: Vec<Elt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        FMatrix {
            rows,
            cols,
            entries,
            field: Some(field),
        }
    }

    pub fn field(&self) -> &Arc<Field> {
        self.field.as_ref().expect("matrix missing field handle")
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Elt {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elt) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                let want = if r == c { 1 } else { 0 };
                if self.at(r, c) != want {
                    return false;
                }
            }
        }
        true
    }

    pub fn transpose(&self) -> FMatrix {
        let mut out = FMatrix::zero(self.field().clone(), self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.at(r, c));
            }
        }
        out
    }

    pub fn add(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "add {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field().clone();
        let entries = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        Ok(FMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
            field: Some(f),
        })
    }

    pub fn sub(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "sub {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field().clone();
        let entries = self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(&a, &b)| f.sub(a, b))
            .collect();
        Ok(FMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
            field: Some(f),
        })
    }

    pub fn scale(&self, k: Elt) -> FMatrix {
        let f = self.field().clone();
        let entries = self.entries.iter().map(|&a| f.mul(a, k)).collect();
        FMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
            field: Some(f),
        }
    }

    pub fn mul(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "mul {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field().clone();
        let mut out = FMatrix::zero(f.clone(), self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b == 0 {
                        continue;
                    }
                    let cur = out.at(r, c);
                    out.set(r, c, f.add(cur, f.mul(a, b)));
                }
            }
        }
        Ok(out)
    }

    /// Horizontal concatenation [self | other].
    pub fn hcat(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch("hcat row mismatch".into()));
        }
        let mut out = FMatrix::zero(self.field().clone(), self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.at(r, c));
            }
            for c in 0..other.cols {
                out.set(r, self.cols + c, other.at(r, c));
            }
        }
        Ok(out)
    }

    /// Vertical concatenation [self; other].
    pub fn vcat(&self, other: &FMatrix) -> Result<FMatrix> {
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch("vcat col mismatch".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(FMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
            field: self.field.clone(),
        })
    }

    /// Block diagonal [self 0; 0 other].
    pub fn block_diag(&self, other: &FMatrix) -> FMatrix {
        let f = self.field().clone();
        let mut out = FMatrix::zero(f, self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(r, c, self.at(r, c));
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                out.set(self.rows + r, self.cols + c, other.at(r, c));
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<Elt> {
        (0..self.rows).map(|r| self.at(r, c)).collect()
    }

    pub fn from_columns(field: Arc<Field>, rows: usize, cols: &[Vec<Elt>]) -> FMatrix {
        let mut m = FMatrix::zero(field, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn submatrix_cols(&self, cols: &[usize]) -> FMatrix {
        let mut out = FMatrix::zero(self.field().clone(), self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                out.set(r, j, self.at(r, c));
            }
        }
        out
    }

    /// Reduced row echelon form. Returns (rref, pivot column indices).
    pub fn rref(&self) -> (FMatrix, Vec<usize>) {
        let f = self.field().clone();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            if row >= m.rows {
                break;
            }
            let pivot_row = (row..m.rows).find(|&r| m.at(r, col) != 0);
            let Some(pr) = pivot_row else { continue };
            if pr != row {
                for c in 0..m.cols {
                    let tmp = m.at(row, c);
                    m.set(row, c, m.at(pr, c));
                    m.set(pr, c, tmp);
                }
            }
            let inv = f.inv(m.at(row, col));
            for c in col..m.cols {
                m.set(row, c, f.mul(m.at(row, c), inv));
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.at(r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..m.cols {
                    let v = f.sub(m.at(r, c), f.mul(factor, m.at(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of {x : Ax = 0} as matrix columns, from the rref free columns.
    pub fn nullspace(&self) -> FMatrix {
        let f = self.field().clone();
        let (rref, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = FMatrix::zero(f.clone(), self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            basis.set(fc, j, 1);
            for (i, &pc) in pivots.iter().enumerate() {
                basis.set(pc, j, f.neg(rref.at(i, fc)));
            }
        }
        basis
    }

    /// Particular solutions of A x = b for every column b of `rhs`, plus the
    /// nullspace basis. None if any column is inconsistent.
    pub fn solve(&self, rhs: &FMatrix) -> Result<Option<(FMatrix, FMatrix)>> {
        if rhs.rows != self.rows {
            return Err(Error::ShapeMismatch(format!(
                "solve lhs {} rows vs rhs {} rows",
                self.rows, rhs.rows
            )));
        }
        let f = self.field().clone();
        let aug = self.hcat(rhs)?;
        let (rref, pivots) = aug.rref();
        // any pivot in the rhs block means inconsistency
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut sol = FMatrix::zero(f, self.cols, rhs.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                sol.set(pc, j, rref.at(i, self.cols + j));
            }
        }
        Ok(Some((sol, self.nullspace())))
    }

    pub fn inverse(&self) -> Result<FMatrix> {
        if self.rows != self.cols {
            return Err(Error::ShapeMismatch("inverse of non-square matrix".into()));
        }
        let f = self.field().clone();
        let aug = self.hcat(&FMatrix::identity(f.clone(), self.rows))?;
        let (rref, pivots) = aug.rref();
        if pivots.len() < self.rows || pivots.iter().any(|&c| c >= self.cols) {
            return Err(Error::Singular);
        }
        let mut out = FMatrix::zero(f, self.rows, self.rows);
        for r in 0..self.rows {
            for c in 0..self.rows {
                out.set(r, c, rref.at(r, self.cols + c));
            }
        }
        Ok(out)
    }

    /// Basis of the column space: the pivot columns of the original matrix.
    pub fn column_space_basis(&self) -> FMatrix {
        let (_, pivots) = self.rref();
        self.submatrix_cols(&pivots)
    }

    pub fn apply(&self, v: &[Elt]) -> Vec<Elt> {
        assert_eq!(v.len(), self.cols);
        let f = self.field();
        let mut out = vec![0; self.rows];
        for r in 0..self.rows {
            let mut acc = 0;
            for c in 0..self.cols {
                acc = f.add(acc, f.mul(self.at(r, c), v[c]));
            }
            out[r] = acc;
        }
        out
    }
}

/// Coordinates of `target` in the span of `basis` (matrices of equal shape),
/// or None when it lies outside.
pub fn coords_in_span(basis: &[FMatrix], target: &FMatrix) -> Result<Option<Vec<Elt>>> {
    if basis.is_empty() {
        return Ok(if target.is_zero() { Some(vec![]) } else { None });
    }
    let f = target.field().clone();
    let flat_len = target.entries.len();
    let cols: Vec<Vec<Elt>> = basis.iter().map(|b| b.entries.clone()).collect();
    let flat = FMatrix::from_columns(f.clone(), flat_len, &cols);
    let rhs = FMatrix {
        rows: flat_len,
        cols: 1,
        entries: target.entries.clone(),
        field: Some(f),
    };
    Ok(flat.solve(&rhs)?.map(|(sol, _)| sol.column(0)))
}

/// Mode-dispatched interface over the elimination kernels.
pub fn linear_solve(a: &FMatrix, mode: SolveMode<'_>) -> Result<SolveOutput> {
    match mode {
        SolveMode::Rank => Ok(SolveOutput::Rank(a.rank())),
        SolveMode::NullspaceBasis => Ok(SolveOutput::Nullspace(a.nullspace())),
        SolveMode::Solve(rhs) => Ok(SolveOutput::Solution(a.solve(rhs)?)),
        SolveMode::Inverse => Ok(SolveOutput::Inverse(a.inverse()?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f2() -> Arc<Field> {
        Field::make(2, 1).unwrap()
    }
    fn f3() -> Arc<Field> {
        Field::make(3, 1).unwrap()
    }

    #[test]
    fn identity_rank() {
        let id = FMatrix::identity(f2(), 3);
        assert_eq!(id.rank(), 3);
    }

    #[test]
    fn zero_nullspace_full() {
        let z = FMatrix::zero(f3(), 2, 3);
        let ns = z.nullspace();
        assert_eq!(ns.cols, 3);
        assert_eq!(ns.rank(), 3);
    }

    #[test]
    fn self_inverse_over_f2() {
        let m = FMatrix::from_rows(f2(), 2, 2, vec![1, 1, 0, 1]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv, m);
        assert!(m.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn singular_inverse_rejected() {
        let m = FMatrix::from_rows(f2(), 2, 2, vec![1, 1, 1, 1]);
        assert!(matches!(m.inverse(), Err(Error::Singular)));
    }

    #[test]
    fn solve_inconsistent() {
        let a = FMatrix::from_rows(f2(), 2, 1, vec![1, 1]);
        let b = FMatrix::from_rows(f2(), 2, 1, vec![1, 0]);
        assert!(a.solve(&b).unwrap().is_none());
    }

    #[test]
    fn solve_consistent_particular() {
        let a = FMatrix::from_rows(f3(), 2, 3, vec![1, 2, 0, 0, 1, 1]);
        let b = FMatrix::from_rows(f3(), 2, 1, vec![1, 2]);
        let (sol, _ns) = a.solve(&b).unwrap().unwrap();
        let check = a.mul(&sol).unwrap();
        assert_eq!(check, b);
    }

    proptest! {
        // rank-nullity over a few small shapes and fields
        #[test]
        fn rank_nullity(rows in 1usize..5, cols in 1usize..5, seed in 0u64..1000, which in 0usize..3) {
            let f = match which { 0 => f2(), 1 => f3(), _ => Field::make(2, 2).unwrap() };
            let q = f.q as u64;
            let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let mut entries = Vec::with_capacity(rows * cols);
            for _ in 0..rows * cols {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                entries.push(((state >> 33) % q) as Elt);
            }
            let m = FMatrix::from_rows(f.clone(), rows, cols, entries);
            let ns = m.nullspace();
            prop_assert_eq!(m.rank() + ns.cols, cols);
            // nullspace columns really solve Ax = 0
            for j in 0..ns.cols {
                let col = ns.column(j);
                let img = m.apply(&col);
                prop_assert!(img.iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn inverse_composes_to_identity(n in 1usize..5, seed in 0u64..500) {
            let f = f3();
            let mut state = seed.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            let mut entries = Vec::with_capacity(n * n);
            for _ in 0..n * n {
                state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
                entries.push(((state >> 33) % 3) as Elt);
            }
            let m = FMatrix::from_rows(f.clone(), n, n, entries);
            if let Ok(inv) = m.inverse() {
                prop_assert!(m.mul(&inv).unwrap().is_identity());
                prop_assert!(inv.mul(&m).unwrap().is_identity());
            }
        }
    }
}

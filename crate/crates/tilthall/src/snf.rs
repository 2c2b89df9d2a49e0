//! Smith normal form of integer matrices, exact over i128, for
//! Grothendieck-group presentations.

/// Invariant factors d_1 | d_2 | ... of the matrix (nonnegative, zeros
/// trimmed), plus the free rank of the cokernel of the presented map
/// Z^cols / im(rows): free rank = cols - #nonzero factors.
pub fn smith_invariant_factors(rows: usize, cols: usize, entries: &[i128]) -> (Vec<i128>, usize) {
    assert_eq!(entries.len(), rows * cols);
    let mut m: Vec<Vec<i128>> = (0..rows)
        .map(|r| entries[r * cols..(r + 1) * cols].to_vec())
        .collect();
    let mut factors = Vec::new();
    let mut top = 0usize;
    let mut left = 0usize;
    while top < rows && left < cols {
        // locate the smallest nonzero entry in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for r in top..rows {
            for c in left..cols {
                if m[r][c] != 0 {
                    let better = match pivot {
                        None => true,
                        Some((pr, pc)) => m[r][c].abs() < m[pr][pc].abs(),
                    };
                    if better {
                        pivot = Some((r, c));
                    }
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        m.swap(top, pr);
        for row in m.iter_mut() {
            row.swap(left, pc);
        }
        // clear the pivot row and column by euclidean steps
        let mut clean = false;
        while !clean {
            clean = true;
            for r in top + 1..rows {
                if m[r][left] != 0 {
                    let q = m[r][left] / m[top][left];
                    for c in left..cols {
                        m[r][c] -= q * m[top][c];
                    }
                    if m[r][left] != 0 {
                        m.swap(top, r);
                        clean = false;
                    }
                }
            }
            for c in left + 1..cols {
                if m[top][c] != 0 {
                    let q = m[top][c] / m[top][left];
                    for row in m.iter_mut().take(rows).skip(top) {
                        row[c] -= q * row[left];
                    }
                    if m[top][c] != 0 {
                        for row in m.iter_mut() {
                            row.swap(left, c);
                        }
                        clean = false;
                    }
                }
            }
            if clean {
                // divisibility: the pivot must divide the rest of the block
                'scan: for r in top + 1..rows {
                    for c in left + 1..cols {
                        if m[r][c] % m[top][left] != 0 {
                            for cc in left..cols {
                                m[top][cc] += m[r][cc];
                            }
                            clean = false;
                            break 'scan;
                        }
                    }
                }
            }
        }
        factors.push(m[top][left].abs());
        top += 1;
        left += 1;
    }
    let rank = factors.len();
    (factors, cols - rank)
}

/// Drops unit factors, leaving only the nontrivial invariant factors; the
/// canonical comparison form is (nontrivial factors, free rank).
pub fn normalize_factors(factors: &[i128], free_rank: usize) -> (Vec<i128>, usize) {
    (
        factors.iter().copied().filter(|&f| f > 1).collect(),
        free_rank,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_unit_factors() {
        let (f, free) = smith_invariant_factors(2, 2, &[1, 0, 0, 1]);
        assert_eq!(f, vec![1, 1]);
        assert_eq!(free, 0);
    }

    #[test]
    fn single_relation_shape() {
        // presentation [[-2, 1]]: Z^2 / <(-2, 1)> = Z
        let (f, free) = smith_invariant_factors(1, 2, &[-2, 1]);
        assert_eq!(f, vec![1]);
        assert_eq!(free, 1);
    }

    #[test]
    fn torsion_detected() {
        // Z^2 / <(2,0), (0,3)> = Z/2 x Z/3
        let (f, free) = smith_invariant_factors(2, 2, &[2, 0, 0, 3]);
        assert_eq!(f, vec![1, 6]);
        assert_eq!(free, 0);
        let (nf, _) = normalize_factors(&f, free);
        assert_eq!(nf, vec![6]);
    }

    #[test]
    fn divisibility_chain_holds() {
        let entries: Vec<i128> = vec![2, 4, 4, -6, 6, 12, 10, 4, 16];
        let (f, _) = smith_invariant_factors(3, 3, &entries);
        for w in f.windows(2) {
            assert_eq!(w[1] % w[0], 0, "factors {f:?} not a divisibility chain");
        }
    }

    #[test]
    fn zero_matrix() {
        let (f, free) = smith_invariant_factors(2, 3, &[0; 6]);
        assert!(f.is_empty());
        assert_eq!(free, 3);
    }
}

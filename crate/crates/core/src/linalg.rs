//! Exact Gaussian elimination over [`Scalar`] rows.
//!
//! Everything here works on plain `Vec<Vec<Scalar>>` row lists so the same code
//! serves 8-dimensional subspace questions and the 8x16 augmented inverse.

use crate::scalar::{FieldSpec, Scalar};

/// Reduced row echelon form of `rows` (each of length `ncols`).
/// Zero rows are dropped; returns the nonzero rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<Scalar>>, ncols: usize) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(found) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, found);
        let inv = rows[r][c].inv().expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for k in 0..ncols {
                    let t = &rows[r][k] * &f;
                    rows[i][k] = &rows[i][k] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: Vec<Vec<Scalar>>, ncols: usize) -> usize {
    rref(rows, ncols).0.len()
}

/// Canonical (reduced echelon) basis of the solution space of `rows · x = 0`.
pub fn nullspace(field: FieldSpec, rows: Vec<Vec<Scalar>>, ncols: usize) -> Vec<Vec<Scalar>> {
    let (reduced, pivots) = rref(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis: Vec<Vec<Scalar>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(field); ncols];
            v[f] = Scalar::one(field);
            for (row, &pc) in reduced.iter().zip(&pivots) {
                v[pc] = -&row[f];
            }
            v
        })
        .collect();
    // Re-reduce so the basis is the canonical echelon basis of the subspace.
    if !basis.is_empty() {
        basis = rref(basis, ncols).0;
    }
    basis
}

/// Dimension of the intersection of two row spaces.
pub fn intersection_dim(a: &[Vec<Scalar>], b: &[Vec<Scalar>], ncols: usize) -> usize {
    let da = rank(a.to_vec(), ncols);
    let db = rank(b.to_vec(), ncols);
    let sum = rank(a.iter().chain(b).cloned().collect(), ncols);
    da + db - sum
}

/// Whether `v` lies in the row space of `rows`.
pub fn in_span(rows: &[Vec<Scalar>], v: &[Scalar], ncols: usize) -> bool {
    let base = rank(rows.to_vec(), ncols);
    let mut ext = rows.to_vec();
    ext.push(v.to_vec());
    rank(ext, ncols) == base
}

/// Inverse of a square matrix given as rows, or `None` if singular.
pub fn inverse(field: FieldSpec, m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let aug: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|k| Scalar::from_int(field, (i == k) as i64)));
            r
        })
        .collect();
    let (reduced, pivots) = rref(aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(reduced.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(f: FieldSpec, xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from_int(f, x)).collect()
    }

    #[test]
    fn rank_nullity() {
        let f = FieldSpec::Rationals;
        let m = vec![row(f, &[1, 2, 3]), row(f, &[2, 4, 6]), row(f, &[0, 1, 1])];
        assert_eq!(rank(m.clone(), 3), 2);
        let ns = nullspace(f, m.clone(), 3);
        assert_eq!(ns.len(), 1);
        for r in &m {
            let dot = r.iter().zip(&ns[0]).fold(Scalar::zero(f), |acc, (a, b)| &acc + &(a * b));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn inverse_round_trip() {
        let f = FieldSpec::prime(5).unwrap();
        let m = vec![row(f, &[1, 2]), row(f, &[3, 4])];
        let inv = inverse(f, &m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let e = (0..2).fold(Scalar::zero(f), |acc, k| &acc + &(&m[i][k] * &inv[k][j]));
                assert_eq!(e, Scalar::from_int(f, (i == j) as i64));
            }
        }
        assert!(inverse(f, &[row(f, &[1, 2]), row(f, &[2, 4])]).is_none());
    }

    #[test]
    fn intersections() {
        let f = FieldSpec::Rationals;
        let a = vec![row(f, &[1, 0, 0]), row(f, &[0, 1, 0])];
        let b = vec![row(f, &[0, 1, 0]), row(f, &[0, 0, 1])];
        assert_eq!(intersection_dim(&a, &b, 3), 1);
        assert!(in_span(&a, &row(f, &[2, 3, 0]), 3));
        assert!(!in_span(&a, &row(f, &[0, 0, 1]), 3));
    }
}

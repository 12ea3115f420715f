//! Exact rational linear algebra: fraction-free Gaussian elimination, canonical
//! reduced row echelon form, nullspace bases, and span comparison.
//!
//! Matrices are dense `Vec<Vec<BigRational>>` rows. Sizes here are tiny (at most a few
//! hundred rows), so clarity wins over asymptotics; exactness is the point.

use alloc::vec::Vec;
use alloc::{vec, format};
use alloc::string::String;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Row = Vec<BigRational>;

/// Reduce `rows` in place to canonical reduced row echelon form (leading coefficient 1,
/// zeros above and below pivots, rows sorted by pivot column, zero rows dropped).
/// Returns the pivot columns.
pub fn rref(rows: &mut Vec<Row>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    debug_assert!(rows.iter().all(|r| r.len() == ncols));
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(src) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, src);
        let inv = rows[r][col].recip();
        for v in rows[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for c in col..ncols {
                    let sub = &rows[r][c] * &factor;
                    rows[i][c] -= sub;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.retain(|row| row.iter().any(|v| !v.is_zero()));
    pivots
}

/// Rank of a rational matrix (consumes a copy).
pub fn rank(mut rows: Vec<Row>) -> usize {
    rref(&mut rows);
    rows.len()
}

/// Nullspace basis of an integer matrix, returned as rational vectors.
///
/// Elimination is fraction-free (Bareiss-style two-row updates with exact division),
/// so intermediate entries stay integral; the final back-substitution produces the
/// rational basis. Columns of `a` are the unknowns.
pub fn int_nullspace(a: &[Vec<BigInt>], ncols: usize) -> Vec<Row> {
    debug_assert!(a.iter().all(|r| r.len() == ncols));
    let mut rows: Vec<Vec<BigInt>> = a
        .iter()
        .filter(|r| r.iter().any(|v| !v.is_zero()))
        .cloned()
        .collect();

    // Forward elimination to (unnormalized) echelon form.
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        // Smallest-magnitude pivot keeps the integers manageable.
        let Some(src) = (r..rows.len())
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| rows[i][col].magnitude().clone())
        else {
            continue;
        };
        rows.swap(r, src);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let p = pivot_row[col].clone();
        for row in tail.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let c = row[col].clone();
            for k in col..ncols {
                row[k] = &row[k] * &p - &pivot_row[k] * &c;
            }
            // Divide out the row gcd to control growth.
            let g = row_gcd(row);
            if g > BigInt::one() {
                for v in row.iter_mut() {
                    *v /= &g;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);

    // Back-substitute one basis vector per free column.
    let pivot_set: Vec<Option<usize>> = {
        let mut v = vec![None; ncols];
        for (row_idx, &col) in pivot_cols.iter().enumerate() {
            v[col] = Some(row_idx);
        }
        v
    };
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| pivot_set[*c].is_none()) {
        let mut x = vec![BigRational::zero(); ncols];
        x[free] = BigRational::one();
        for (row_idx, &pcol) in pivot_cols.iter().enumerate().rev() {
            let row = &rows[row_idx];
            let mut s = BigRational::zero();
            for c in pcol + 1..ncols {
                if !row[c].is_zero() && !x[c].is_zero() {
                    s += BigRational::from_integer(row[c].clone()) * &x[c];
                }
            }
            x[pcol] = -s / BigRational::from_integer(row[pcol].clone());
        }
        basis.push(x);
    }
    basis
}

fn row_gcd(row: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for v in row {
        if !v.is_zero() {
            g = g.gcd(v);
            if g.is_one() {
                break;
            }
        }
    }
    g.abs()
}

/// Nullspace of a rational matrix: clears denominators per row and defers to [`int_nullspace`].
pub fn nullspace(a: &[Row]) -> Vec<Row> {
    let ncols = a.first().map_or(0, Vec::len);
    let int_rows: Vec<Vec<BigInt>> = a.iter().map(|row| clear_denominators(row)).collect();
    int_nullspace(&int_rows, ncols)
}

fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for v in row {
        l = l.lcm(v.denom());
    }
    row.iter()
        .map(|v| v.numer() * (&l / v.denom()))
        .collect()
}

/// Does `v` lie in the row span of `basis`? Exact membership test.
pub fn in_span(basis: &[Row], v: &Row) -> bool {
    let mut rows: Vec<Row> = basis.to_vec();
    let before = rank(rows.clone());
    rows.push(v.clone());
    rank(rows) == before
}

/// Solve `span(basis) ∋ v`, returning coordinates of `v` in `basis` if it lies in the span.
pub fn coordinates_in(basis: &[Row], v: &Row) -> Option<Vec<BigRational>> {
    let ncols = v.len();
    // Augmented transpose system: basis vectors are columns, solve B^T c = v.
    let mut rows: Vec<Row> = (0..ncols)
        .map(|i| {
            let mut row: Row = basis.iter().map(|b| b[i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut rows);
    // Inconsistent if a pivot lands in the augmented column.
    if pivots.contains(&basis.len()) {
        return None;
    }
    let mut coords = vec![BigRational::zero(); basis.len()];
    for (row, &col) in rows.iter().zip(pivots.iter()) {
        coords[col] = row[basis.len()].clone();
    }
    Some(coords)
}

/// Two generating sets span the same subspace iff their canonical RREFs coincide.
pub fn same_span(a: &[Row], b: &[Row]) -> bool {
    let mut ra = a.to_vec();
    let mut rb = b.to_vec();
    rref(&mut ra);
    rref(&mut rb);
    ra == rb
}

/// Intersection of `span(rows)` with the coordinate subspace where `keep(col)` holds
/// is spanned by the returned vectors (all supported on the kept coordinates).
pub fn span_intersect_coordinate_subspace(rows: &[Row], keep: impl Fn(usize) -> bool) -> Vec<Row> {
    let ncols = rows.first().map_or(0, Vec::len);
    let dropped: Vec<usize> = (0..ncols).filter(|&c| !keep(c)).collect();
    // Combinations sum_j c_j rows[j] with zero entries on the dropped coordinates:
    // nullspace of the (dropped x rows) constraint matrix in the c_j unknowns.
    let constraint: Vec<Row> = dropped
        .iter()
        .map(|&c| rows.iter().map(|r| r[c].clone()).collect())
        .collect();
    let combos = if constraint.is_empty() {
        // No constraint: the whole span.
        (0..rows.len())
            .map(|j| {
                let mut e = vec![BigRational::zero(); rows.len()];
                e[j] = BigRational::one();
                e
            })
            .collect()
    } else {
        nullspace(&constraint)
    };
    let mut out: Vec<Row> = combos
        .iter()
        .map(|combo| {
            let mut v = vec![BigRational::zero(); ncols];
            for (j, c) in combo.iter().enumerate() {
                if !c.is_zero() {
                    for (vi, ri) in v.iter_mut().zip(rows[j].iter()) {
                        *vi += c * ri;
                    }
                }
            }
            v
        })
        .collect();
    rref(&mut out);
    out
}

/// Render a rational for reports: `n` or `n/d`.
pub fn rational_to_string(v: &BigRational) -> String {
    if v.is_integer() {
        format!("{}", v.numer())
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn r(vals: &[i64]) -> Row {
        vals.iter().map(|&v| rat(v)).collect()
    }

    #[test]
    fn rref_canonicalizes() {
        let mut rows = vec![r(&[2, 4, 0]), r(&[1, 2, 1])];
        let pivots = rref(&mut rows);
        assert_eq!(pivots, vec![0, 2]);
        assert_eq!(rows, vec![r(&[1, 2, 0]), r(&[0, 0, 1])]);
    }

    #[test]
    fn nullspace_of_ones_row() {
        // x1 + x2 + x3 = 0 has a 2-dimensional solution space.
        let a = vec![vec![BigInt::from(1), BigInt::from(1), BigInt::from(1)]];
        let ns = int_nullspace(&a, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            let s: BigRational = v.iter().cloned().sum();
            assert!(s.is_zero());
        }
    }

    #[test]
    fn nullspace_vectors_annihilate() {
        let a = vec![
            vec![BigInt::from(1), BigInt::from(2), BigInt::from(3), BigInt::from(4)],
            vec![BigInt::from(0), BigInt::from(5), BigInt::from(-1), BigInt::from(2)],
        ];
        let ns = int_nullspace(&a, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &a {
                let dot: BigRational = row
                    .iter()
                    .zip(v)
                    .map(|(c, x)| BigRational::from_integer(c.clone()) * x)
                    .sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn span_membership() {
        let basis = vec![r(&[1, 0, 1]), r(&[0, 1, 1])];
        assert!(in_span(&basis, &r(&[2, 3, 5])));
        assert!(!in_span(&basis, &r(&[0, 0, 1])));
        let coords = coordinates_in(&basis, &r(&[2, 3, 5])).unwrap();
        assert_eq!(coords, vec![rat(2), rat(3)]);
        assert!(coordinates_in(&basis, &r(&[0, 0, 1])).is_none());
    }

    #[test]
    fn span_equality_is_basis_independent() {
        let a = vec![r(&[1, 1, 0]), r(&[0, 0, 1])];
        let b = vec![r(&[2, 2, 2]), r(&[0, 0, 5])];
        assert!(same_span(&a, &b));
        let c = vec![r(&[1, 0, 0]), r(&[0, 0, 1])];
        assert!(!same_span(&a, &c));
    }

    #[test]
    fn coordinate_subspace_intersection() {
        // span{(1,0,1),(0,1,1)} intersected with {last coord 0} = span{(1,-1,0)}.
        let rows = vec![r(&[1, 0, 1]), r(&[0, 1, 1])];
        let inter = span_intersect_coordinate_subspace(&rows, |c| c != 2);
        assert_eq!(inter, vec![r(&[1, -1, 0])]);
    }
}

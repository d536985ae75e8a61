//! Exact linear algebra over a [`Scalar`] field.
//!
//! Elimination is fraction-free (Bareiss): every intermediate entry is a
//! minor of the input, and the only divisions are exact divisions by the
//! previous pivot. Pivots are the first structurally nonzero entry in row
//! order, so the result does not depend on any zero-testing heuristic.

use crate::scalar::Scalar;

/// Fraction-free row echelon form of `m` in place. Returns the pivot
/// columns.
fn echelon<V: Scalar>(m: &mut [Vec<V>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = V::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = m[i][j].mul(&m[r][c]).sub(&m[i][c].mul(&m[r][j]));
                m[i][j] = v.checked_div(&prev).expect("previous pivot is nonzero");
            }
            m[i][c] = V::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank of a rectangular matrix.
pub fn rank<V: Scalar>(rows: &[Vec<V>]) -> usize {
    let mut m = rows.to_vec();
    echelon(&mut m).len()
}

/// Solves the square system `a x = b`; `None` when `a` is singular.
pub fn solve<V: Scalar>(a: &[Vec<V>], b: &[V]) -> Option<Vec<V>> {
    let k = a.len();
    assert_eq!(b.len(), k, "right-hand side length");
    let mut m: Vec<Vec<V>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            assert_eq!(row.len(), k, "square system");
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = echelon(&mut m);
    if pivots.len() < k || pivots.iter().enumerate().any(|(i, &c)| i != c) {
        return None;
    }
    let mut x = vec![V::zero(); k];
    for i in (0..k).rev() {
        let mut acc = m[i][k].clone();
        for j in i + 1..k {
            acc = acc.sub(&m[i][j].mul(&x[j]));
        }
        x[i] = acc.checked_div(&m[i][i])?;
    }
    Some(x)
}

/// Basis of the right kernel of `rows` (`n` columns), one vector per free
/// column of the reduced row echelon form. The vector for free column `f`
/// has entry 1 at `f` and 0 at the other free columns.
pub fn kernel<V: Scalar>(rows: &[Vec<V>], n: usize) -> Vec<Vec<V>> {
    let mut m: Vec<Vec<V>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = V::one().checked_div(&m[r][c]).expect("pivot is nonzero");
        for j in c..n {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..m.len() {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for j in c..n {
                let v = m[i][j].sub(&f.mul(&m[r][j]));
                m[i][j] = v;
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            let mut v = vec![V::zero(); n];
            v[f] = V::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = m[i][f].neg();
            }
            v
        })
        .collect()
}

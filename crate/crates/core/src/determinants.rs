//! Window matrices over a grid, exact determinants and minors, and the
//! Dodgson condensation identity.

use serde::Serialize;
use thiserror::Error;

use crate::lattice::{LatticeGrid, SitePos};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetError {
    #[error("window needs site {0}, which is not in the grid")]
    MissingSite(SitePos),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("matrix is not square")]
    NotSquare,
    #[error("condensation needs a matrix of size at least 2, got {0}")]
    TooSmall(usize),
}

/// Shape of a window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum WindowKind {
    /// Entry `(i, j)` is `x[n+2j, t+i]`: rows step in `t`, columns step 2 in `n`.
    X,
    /// Entry `(i, j)` is `x[n+2i, t+2j]`: rows step 2 in `n`, columns step 2 in `t`.
    F,
}

impl WindowKind {
    /// Site of entry `(i, j)` for a window at `origin`.
    pub fn site(self, origin: SitePos, i: usize, j: usize) -> SitePos {
        let (i, j) = (i as i64, j as i64);
        match self {
            WindowKind::X => origin.offset(2 * j, i),
            WindowKind::F => origin.offset(2 * i, 2 * j),
        }
    }
}

/// Square matrix of exact values.
#[derive(Clone, Debug, PartialEq)]
pub struct WindowMatrix<V> {
    pub kind: Option<WindowKind>,
    pub origin: Option<SitePos>,
    rows: Vec<Vec<V>>,
}

/// Reads the `k x k` window of `kind` at `origin`. `k = 0` is the empty
/// matrix, whose determinant is 1.
pub fn window<V: Scalar>(
    grid: &LatticeGrid<V>,
    origin: SitePos,
    k: usize,
    kind: WindowKind,
) -> Result<WindowMatrix<V>, DetError> {
    let rows = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let s = kind.site(origin, i, j);
                    grid.get(s).cloned().ok_or(DetError::MissingSite(s))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    Ok(WindowMatrix {
        kind: Some(kind),
        origin: Some(origin),
        rows,
    })
}

/// Determinant of the `k x k` window, the quantity `D_k` (kind X) or `F_k` (kind F).
pub fn window_det<V: Scalar>(
    grid: &LatticeGrid<V>,
    origin: SitePos,
    k: usize,
    kind: WindowKind,
) -> Result<V, DetError> {
    Ok(window(grid, origin, k, kind)?.det())
}

impl<V: Scalar> WindowMatrix<V> {
    pub fn from_rows(rows: Vec<Vec<V>>) -> Result<Self, DetError> {
        if rows.iter().any(|r| r.len() != rows.len()) {
            return Err(DetError::NotSquare);
        }
        Ok(Self {
            kind: None,
            origin: None,
            rows,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, DetError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| V::from_i64(x)).collect())
                .collect(),
        )
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<V>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &V {
        &self.rows[i][j]
    }

    pub fn det(&self) -> V {
        det_rows(&self.rows)
    }

    /// Determinant after deleting the given rows and columns (0-based).
    pub fn minor(&self, del_rows: &[usize], del_cols: &[usize]) -> Result<V, DetError> {
        Ok(det_rows(&self.submatrix(del_rows, del_cols)?))
    }

    fn submatrix(&self, del_rows: &[usize], del_cols: &[usize]) -> Result<Vec<Vec<V>>, DetError> {
        let k = self.size();
        if let Some(i) = del_rows.iter().chain(del_cols).find(|&&i| i >= k) {
            return Err(DetError::IndexOutOfRange(format!("index {i} in a {k}x{k} matrix")));
        }
        let keep = |del: &[usize]| -> Vec<usize> { (0..k).filter(|i| !del.contains(i)).collect() };
        let (rs, cs) = (keep(del_rows), keep(del_cols));
        if rs.len() != cs.len() {
            return Err(DetError::NotSquare);
        }
        Ok(rs
            .iter()
            .map(|&i| cs.iter().map(|&j| self.rows[i][j].clone()).collect())
            .collect())
    }

    /// Transposed cofactor matrix: `adj[j][i] = (-1)^(i+j) |A_ij|`.
    pub fn adjugate(&self) -> Vec<Vec<V>> {
        let k = self.size();
        (0..k)
            .map(|j| {
                (0..k)
                    .map(|i| {
                        let m = self.minor(&[i], &[j]).expect("indices in range");
                        if (i + j) % 2 == 0 {
                            m
                        } else {
                            m.neg()
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Exact determinant: cofactor expansion up to size 4, fraction-free
/// elimination above.
pub fn det_rows<V: Scalar>(rows: &[Vec<V>]) -> V {
    if rows.len() <= 4 {
        det_cofactor(rows)
    } else {
        det_bareiss(rows)
    }
}

/// Laplace expansion along the first row.
pub fn det_cofactor<V: Scalar>(rows: &[Vec<V>]) -> V {
    match rows.len() {
        0 => V::one(),
        1 => rows[0][0].clone(),
        2 => rows[0][0].mul(&rows[1][1]).sub(&rows[0][1].mul(&rows[1][0])),
        k => {
            let mut acc = V::zero();
            for j in 0..k {
                if rows[0][j].is_zero() {
                    continue;
                }
                let sub: Vec<Vec<V>> = rows[1..]
                    .iter()
                    .map(|r| {
                        r.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let term = rows[0][j].mul(&det_cofactor(&sub));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
    }
}

/// Bareiss fraction-free elimination. The pivot is the first structurally
/// nonzero entry of the column, taken in row order.
pub fn det_bareiss<V: Scalar>(rows: &[Vec<V>]) -> V {
    let k = rows.len();
    if k == 0 {
        return V::one();
    }
    let mut m: Vec<Vec<V>> = rows.to_vec();
    let mut negate = false;
    let mut prev = V::one();
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| !m[r][c].is_zero()) else {
            return V::zero();
        };
        if p != c {
            m.swap(p, c);
            negate = !negate;
        }
        for i in c + 1..k {
            for j in c + 1..k {
                let v = m[i][j].mul(&m[c][c]).sub(&m[i][c].mul(&m[c][j]));
                m[i][j] = v.checked_div(&prev).expect("previous pivot is nonzero");
            }
            m[i][c] = V::zero();
        }
        prev = m[c][c].clone();
    }
    let d = m[k - 1][k - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// Both sides of `|A_{1n;1n}| |A| = |A_11| |A_nn| - |A_1n| |A_n1|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DodgsonReport<V: std::fmt::Display> {
    #[serde(serialize_with = "crate::report::as_display")]
    pub lhs: V,
    #[serde(serialize_with = "crate::report::as_display")]
    pub rhs: V,
    pub holds: bool,
}

pub fn dodgson_check<V: Scalar>(m: &WindowMatrix<V>) -> Result<DodgsonReport<V>, DetError> {
    let k = m.size();
    if k < 2 {
        return Err(DetError::TooSmall(k));
    }
    let l = k - 1;
    let inner = m.minor(&[0, l], &[0, l])?;
    let lhs = inner.mul(&m.det());
    let rhs = m
        .minor(&[0], &[0])?
        .mul(&m.minor(&[l], &[l])?)
        .sub(&m.minor(&[0], &[l])?.mul(&m.minor(&[l], &[0])?));
    let holds = lhs == rhs;
    Ok(DodgsonReport { lhs, rhs, holds })
}

//! Dense exact linear algebra over rationals.

use num_traits::{One, Zero};

use crate::rational::{primitive, Rational};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<Rational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][c];
        for x in rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &factor * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m, ncols).len()
}

/// Basis of `{x : A x = 0}` as primitive integer vectors.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (row, &p) in m.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(primitive(&v));
    }
    basis
}

/// Indices of a maximal linearly independent subset of `rows`, chosen greedily in order.
pub fn independent_rows(rows: &[Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut chosen = Vec::new();
    let mut echelon: Vec<Vec<Rational>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for (idx, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        for (e, &p) in echelon.iter().zip(&pivots) {
            if !v[p].is_zero() {
                let factor = v[p].clone() / &e[p];
                for (x, y) in v.iter_mut().zip(e) {
                    if !y.is_zero() {
                        *x -= &factor * y;
                    }
                }
            }
        }
        if let Some(p) = (0..ncols).find(|&c| !v[c].is_zero()) {
            echelon.push(v);
            pivots.push(p);
            chosen.push(idx);
            if chosen.len() == ncols {
                break;
            }
        }
    }
    chosen
}

/// Inverse of a square nonsingular matrix; `None` when singular.
pub fn inverse(matrix: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = matrix.len();
    let mut aug: Vec<Vec<Rational>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            r
        })
        .collect();
    let pivots = rref(&mut aug, n);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// `M v` for a row-major matrix.
pub fn mat_vec(matrix: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    matrix
        .iter()
        .map(|row| crate::rational::dot(row, v))
        .collect()
}

/// Linear combination `sum_i coeffs[i] * columns[i]`.
pub fn combine_columns(
    columns: &[Vec<Rational>],
    coeffs: &[Rational],
    dim: usize,
) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); dim];
    for (col, c) in columns.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(col) {
            if !x.is_zero() {
                *o += c * x;
            }
        }
    }
    out
}

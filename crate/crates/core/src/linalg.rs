//! Exact dense linear algebra over the ambient field: echelon forms,
//! null spaces, inverses, and solvers. Deterministic pivoting (first
//! nonzero in column order) so bases and witnesses are reproducible.

use crate::error::{Error, Result};
use crate::map::LinearMap;
use crate::scalar::{FieldSpec, Scalar};

type Matrix = Vec<Vec<Scalar>>;

/// Reduced row-echelon form in place; returns pivot column per pivot row.
fn rref(m: &mut Matrix, field: FieldSpec) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut row = 0usize;
    for col in 0..cols {
        let Some(prow) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, prow);
        let inv = m[row][col].inv(field).expect("pivot nonzero");
        for cell in m[row][col..].iter_mut() {
            *cell = cell.mul(&inv, field);
        }
        let pivot_row: Vec<Scalar> = m[row][col..].to_vec();
        for (r, other) in m.iter_mut().enumerate() {
            if r != row && !other[col].is_zero() {
                let factor = other[col].clone();
                for (k, cell) in other[col..].iter_mut().enumerate() {
                    let delta = factor.mul(&pivot_row[k], field);
                    *cell = cell.sub(&delta);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    pivots
}

fn to_matrix(map: &LinearMap) -> Matrix {
    map.to_dense()
}

pub fn rank(map: &LinearMap) -> usize {
    let mut m = to_matrix(map);
    rref(&mut m, map.field()).len()
}

/// Exact basis of the null space, in echelon order: one vector per free
/// column (ascending), with a 1 in its free coordinate.
pub fn kernel_basis(map: &LinearMap) -> Vec<Vec<Scalar>> {
    let field = map.field();
    let cols = map.cols();
    let mut m = to_matrix(map);
    let pivots = rref(&mut m, field);
    let pivot_set: Vec<bool> = {
        let mut v = vec![false; cols];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set[free] {
            continue;
        }
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (prow, &pcol) in pivots.iter().enumerate() {
            v[pcol] = m[prow][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Exact inverse of a square map, or `Singular`.
pub fn matrix_inverse(map: &LinearMap) -> Result<LinearMap> {
    if !map.is_square() {
        return Err(Error::DimMismatch(format!(
            "inverse needs a square matrix, got {}x{}",
            map.rows(),
            map.cols()
        )));
    }
    let field = map.field();
    let n = map.rows();
    let mut m = to_matrix(map);
    for (i, row) in m.iter_mut().enumerate() {
        for j in 0..n {
            row.push(if i == j { Scalar::one() } else { Scalar::zero() });
        }
    }
    let pivots = rref(&mut m, field);
    if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
        return Err(Error::Singular);
    }
    let inv: Matrix = m.into_iter().map(|row| row[n..].to_vec()).collect();
    Ok(LinearMap::from_dense(field, &inv))
}

pub fn is_invertible(map: &LinearMap) -> bool {
    map.is_square() && rank(map) == map.rows()
}

/// One exact solution of `A x = b` (free variables set to zero), or `None`
/// when the system is inconsistent.
pub fn solve(a: &LinearMap, b: &[Scalar]) -> Option<Vec<Scalar>> {
    let sols = solve_many(a, &[b.to_vec()])?;
    sols.into_iter().next()
}

/// Solve `A x = b` for each right-hand side with a single elimination.
/// Returns `None` if any system is inconsistent.
pub fn solve_many(a: &LinearMap, bs: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let field = a.field();
    let (rows, cols) = (a.rows(), a.cols());
    let k = bs.len();
    let mut m = to_matrix(a);
    for (i, row) in m.iter_mut().enumerate() {
        for b in bs {
            debug_assert_eq!(b.len(), rows);
            row.push(b[i].clone());
        }
    }
    let pivots = rref(&mut m, field);
    // pivot in an augmented column means an inconsistent system
    let mut usable_pivots = Vec::new();
    for (prow, &pcol) in pivots.iter().enumerate() {
        if pcol >= cols {
            // the row reads 0 = 1 for at least one rhs
            return None;
        }
        usable_pivots.push((prow, pcol));
    }
    // rows below the pivot rows are all-zero on the coefficient side;
    // check their augmented parts
    for row in m.iter().skip(pivots.len()) {
        if row[cols..].iter().any(|v| !v.is_zero()) {
            return None;
        }
    }
    let mut out = Vec::with_capacity(k);
    for j in 0..k {
        let mut x = vec![Scalar::zero(); cols];
        for &(prow, pcol) in &usable_pivots {
            x[pcol] = m[prow][cols + j].clone();
        }
        out.push(x);
    }
    Some(out)
}

/// Express each column vector of `targets` in the span of `basis`
/// (vectors as coordinate lists). `None` if any target is outside the span.
pub fn coordinates_in_span(
    field: FieldSpec,
    basis: &[Vec<Scalar>],
    targets: &[Vec<Scalar>],
) -> Option<Vec<Vec<Scalar>>> {
    let dim = basis.first().map_or(0, |v| v.len());
    let mut cols_mat = vec![vec![Scalar::zero(); basis.len()]; dim];
    for (j, v) in basis.iter().enumerate() {
        for (i, s) in v.iter().enumerate() {
            cols_mat[i][j] = s.clone();
        }
    }
    let a = LinearMap::from_dense(field, &cols_mat);
    solve_many(&a, targets)
}

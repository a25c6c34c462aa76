use nalgebra::{DMatrix, Matrix3, SymmetricEigen};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Columns match `values`.
    pub vectors: DMatrix<f64>,
}

const SYM_TOL: f64 = 1e-12;

fn asymmetry(m: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..i {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// Symmetric eigendecomposition (nalgebra), eigenvalues ascending.
pub fn numeric_diagonalize(m: &DMatrix<f64>) -> Result<Eigen> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidParameter("matrix is not square".into()));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidParameter("matrix has non-finite entries".into()));
    }
    let scale = m.amax().max(1.0);
    let a = asymmetry(m);
    if a > SYM_TOL * scale {
        return Err(Error::NotSymmetric(a));
    }
    let eig = SymmetricEigen::new(m.clone());
    let mut idx: Vec<usize> = (0..m.nrows()).collect();
    idx.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, idx[c])]);
    Ok(Eigen { values, vectors })
}

/// Eigenvalues only, ascending. Input assumed symmetric.
pub fn sym_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

pub fn sym3_eigenvalues(m: &Matrix3<f64>) -> [f64; 3] {
    let e = m.symmetric_eigenvalues();
    let mut v = [e[0], e[1], e[2]];
    v.sort_by(f64::total_cmp);
    v
}

/// Eigenvalues of [[x, z], [z, y]] as (lower, upper).
pub fn sym2_eigenvalues(x: f64, y: f64, z: f64) -> (f64, f64) {
    let m = 0.5 * (x + y);
    let r = (0.5 * (x - y)).hypot(z);
    let hi = m + r;
    // product form keeps the small root accurate
    let det = x * y - z * z;
    let lo = if hi.abs() > 0.0 && m > 0.0 { det / hi } else { m - r };
    (lo.min(hi), lo.max(hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reconstructs_matrix() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 1.0, 3.0, -1.0, 0.0, -1.0, 1.0]);
        let e = numeric_diagonalize(&m).unwrap();
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(e.values.clone()));
        let r = &e.vectors * d * e.vectors.transpose();
        assert!((r - &m).amax() < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(numeric_diagonalize(&m), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn two_by_two() {
        let (lo, hi) = sym2_eigenvalues(1e-3, 2.0, 0.05);
        let t = 1e-3 + 2.0;
        let d = 2e-3 - 0.0025;
        assert!((lo + hi - t).abs() < 1e-15);
        assert!((lo * hi - d).abs() < 1e-16);
    }
}

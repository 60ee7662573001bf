//! Dense complex linear algebra shared by the representation code.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Relative singular-value threshold used for rank decisions.
pub const NULLSPACE_REL_TOL: f64 = 1e-8;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn real_to_complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| c(x, 0.0))
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Column-major vectorisation.
pub fn vec_of(m: &CMatrix) -> DVector<Complex64> {
    DVector::from_iterator(m.len(), m.iter().copied())
}

pub fn unvec(v: &DVector<Complex64>, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_iterator(rows, cols, v.iter().copied())
}

/// Orthonormal basis of the null space of `a`, deciding rank with singular
/// values below `rel_tol · σ_max`.
pub fn nullspace(a: &CMatrix, rel_tol: f64) -> Vec<DVector<Complex64>> {
    let cols = a.ncols();
    // nalgebra's SVD is thin; pad with zero rows so V is square.
    let padded = if a.nrows() < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (a.nrows(), cols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V^H");
    let sigma_max = svd.singular_values.max();
    let threshold = rel_tol * sigma_max;
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s <= threshold || sigma_max == 0.0)
        .map(|(i, _)| v_t.row(i).adjoint())
        .collect()
}

/// Stacked operator `X ↦ (A_i X - X B_i)_i` acting on vec(X).
fn sylvester_stack(lefts: &[CMatrix], rights: &[CMatrix]) -> CMatrix {
    let d = lefts[0].nrows();
    let id = CMatrix::identity(d, d);
    let blocks: Vec<CMatrix> = lefts
        .iter()
        .zip(rights)
        .map(|(l, r)| id.kronecker(l) - r.transpose().kronecker(&id))
        .collect();
    let mut out = CMatrix::zeros(blocks.len() * d * d, d * d);
    for (i, b) in blocks.iter().enumerate() {
        out.view_mut((i * d * d, 0), (d * d, d * d)).copy_from(b);
    }
    out
}

/// Basis of {X : L_i X = X R_i for all i}.
pub fn solve_sylvester_homogeneous(lefts: &[CMatrix], rights: &[CMatrix]) -> Vec<CMatrix> {
    if lefts.is_empty() {
        return Vec::new();
    }
    let d = lefts[0].nrows();
    nullspace(&sylvester_stack(lefts, rights), NULLSPACE_REL_TOL)
        .iter()
        .map(|v| unvec(v, d, d))
        .collect()
}

/// Matrix exponential.
pub fn expm(m: &CMatrix) -> CMatrix {
    m.clone().exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_of_rank_one() {
        let a = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0)]);
        let ns = nullspace(&a, NULLSPACE_REL_TOL);
        assert_eq!(ns.len(), 1);
        assert!((&a * &ns[0]).norm() < 1e-12);
    }

    #[test]
    fn wide_matrix_nullspace() {
        let a = CMatrix::from_row_slice(1, 3, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(nullspace(&a, NULLSPACE_REL_TOL).len(), 2);
    }

    #[test]
    fn commutant_of_scalar_matrix_is_everything() {
        let id = CMatrix::identity(2, 2);
        assert_eq!(solve_sylvester_homogeneous(&[id.clone()], &[id]).len(), 4);
    }
}

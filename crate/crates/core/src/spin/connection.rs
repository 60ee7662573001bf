use nalgebra::{DMatrix, DVector};
use ndarray::Array3;
use num_complex::Complex64;

use super::SpinGenerators;
use crate::linalg::{c, CMatrix};
use crate::{Error, Result};

/// Ω_λ = A_λ{}^b{}_a I_b{}^a, summed over all ordered pairs (b, a).
/// `coefficients` is indexed `[λ][b][a]`.
pub fn spin_connection_matrix(
    gens: &SpinGenerators,
    coefficients: &Array3<f64>,
) -> Result<Vec<CMatrix>> {
    let n = gens.signature().n();
    if coefficients.dim() != (n, n, n) {
        return Err(Error::ShapeMismatch(format!(
            "connection coefficients have shape {:?}, expected ({n}, {n}, {n})",
            coefficients.dim()
        )));
    }
    let d = gens.dim();
    Ok((0..n)
        .map(|lambda| {
            let mut omega = CMatrix::zeros(d, d);
            for b in 0..n {
                for a in 0..n {
                    let coeff = coefficients[[lambda, b, a]];
                    if coeff != 0.0 {
                        omega += gens.get(b, a) * c(coeff, 0.0);
                    }
                }
            }
            omega
        })
        .collect())
}

/// Vertical covariant differential of a spinor field over the metric
/// bundle:
///
/// D̃_λ y = y_λ + (σ^b{}_{λμ} σ^μ{}_a + K_λ{}^μ{}_ν σ^b{}_μ σ^ν{}_a) I_b{}^a y
///
/// `coframe[(b, μ)]` is σ^b{}_μ, `coframe_jets[[λ, b, μ]]` its derivative
/// ∂_λ σ^b{}_μ, `kg[[λ, μ, ν]]` the metric connection K_λ{}^μ{}_ν and
/// `y_jets[λ]` the derivative of the spinor field.
///
/// On a metric section σ = h this equals ∂_λ y + Ω_λ y with Ω built by
/// [`spin_connection_matrix`] from the tetrad coefficients A_λ{}^b{}_a.
pub fn vertical_covariant_differential(
    gens: &SpinGenerators,
    coframe: &DMatrix<f64>,
    coframe_jets: &Array3<f64>,
    kg: &Array3<f64>,
    y: &DVector<Complex64>,
    y_jets: &[DVector<Complex64>],
) -> Result<Vec<DVector<Complex64>>> {
    let n = gens.signature().n();
    let d = gens.dim();
    if coframe.shape() != (n, n)
        || coframe_jets.dim() != (n, n, n)
        || kg.dim() != (n, n, n)
        || y.len() != d
        || y_jets.len() != n
        || y_jets.iter().any(|v| v.len() != d)
    {
        return Err(Error::ShapeMismatch(
            "vertical covariant differential inputs".into(),
        ));
    }
    let frame = coframe.clone().try_inverse().ok_or(Error::SingularTetrad)?;
    let mut coefficients = Array3::zeros((n, n, n));
    for lambda in 0..n {
        for b in 0..n {
            for a in 0..n {
                let mut v = 0.0;
                for mu in 0..n {
                    v += coframe_jets[[lambda, b, mu]] * frame[(mu, a)];
                    for nu in 0..n {
                        v += kg[[lambda, mu, nu]] * coframe[(b, mu)] * frame[(nu, a)];
                    }
                }
                coefficients[[lambda, b, a]] = v;
            }
        }
    }
    let omega = spin_connection_matrix(gens, &coefficients)?;
    Ok((0..n).map(|lambda| &y_jets[lambda] + &omega[lambda] * y).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Signature;
    use crate::linalg::max_abs;
    use crate::spin::{gamma_matrices, spin_generators};

    #[test]
    fn zero_coefficients_give_zero_connection() {
        let rep = gamma_matrices(Signature::new(1, 3).unwrap()).unwrap();
        let gens = spin_generators(&rep);
        let omega = spin_connection_matrix(&gens, &Array3::zeros((4, 4, 4))).unwrap();
        assert!(omega.iter().all(|m| max_abs(m) == 0.0));
        assert!(spin_connection_matrix(&gens, &Array3::zeros((3, 4, 4))).is_err());
    }

    #[test]
    fn constant_spinor_constant_tetrad() {
        let sig = Signature::new(2, 0).unwrap();
        let rep = gamma_matrices(sig).unwrap();
        let gens = spin_generators(&rep);
        let y = DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 2.0)]);
        let zero = DVector::zeros(2);
        let out = vertical_covariant_differential(
            &gens,
            &DMatrix::identity(2, 2),
            &Array3::zeros((2, 2, 2)),
            &Array3::zeros((2, 2, 2)),
            &y,
            &[zero.clone(), zero],
        )
        .unwrap();
        assert!(out.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn singular_coframe_rejected() {
        let sig = Signature::new(2, 0).unwrap();
        let gens = spin_generators(&gamma_matrices(sig).unwrap());
        let zero = DVector::zeros(2);
        let res = vertical_covariant_differential(
            &gens,
            &DMatrix::zeros(2, 2),
            &Array3::zeros((2, 2, 2)),
            &Array3::zeros((2, 2, 2)),
            &zero,
            &[zero.clone(), zero.clone()],
        );
        assert_eq!(res, Err(Error::SingularTetrad));
    }
}

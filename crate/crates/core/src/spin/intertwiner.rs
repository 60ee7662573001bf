use crate::linalg::{solve_sylvester_homogeneous, CMatrix};
use crate::{Error, Result};

/// Solution space of Φ A_i = B_i Φ.
#[derive(Clone, Debug)]
pub struct Intertwiners {
    pub dimension: usize,
    pub basis: Vec<CMatrix>,
}

impl Intertwiners {
    /// A basis element that is invertible, if any.
    pub fn invertible_element(&self) -> Option<&CMatrix> {
        self.basis.iter().find(|m| m.determinant().norm() > 1e-10)
    }
}

pub fn intertwiner_space(rep_a: &[CMatrix], rep_b: &[CMatrix]) -> Result<Intertwiners> {
    if rep_a.len() != rep_b.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} vs {} matrices",
            rep_a.len(),
            rep_b.len()
        )));
    }
    let Some(first) = rep_a.first() else {
        return Err(Error::ShapeMismatch("empty representation".into()));
    };
    let d = first.nrows();
    if rep_a
        .iter()
        .chain(rep_b)
        .any(|m| m.nrows() != d || m.ncols() != d)
    {
        return Err(Error::ShapeMismatch("matrices must be square of equal size".into()));
    }
    // Φ A_i - B_i Φ = 0  ⇔  B_i Φ - Φ A_i = 0
    let basis = solve_sylvester_homogeneous(rep_b, rep_a);
    Ok(Intertwiners {
        dimension: basis.len(),
        basis,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Signature;
    use crate::linalg::{c, max_abs};
    use crate::spin::gamma_matrices;

    #[test]
    fn self_intertwiners_are_scalars() {
        let rep = gamma_matrices(Signature::new(1, 3).unwrap()).unwrap();
        let space = intertwiner_space(rep.gammas(), rep.gammas()).unwrap();
        assert_eq!(space.dimension, 1);
        let phi = &space.basis[0];
        let scale = phi[(0, 0)];
        let id = CMatrix::identity(4, 4);
        assert!(max_abs(&(phi - id * scale)) < 1e-12);
    }

    #[test]
    fn conjugated_representation_recovers_s() {
        let rep = gamma_matrices(Signature::new(2, 0).unwrap()).unwrap();
        let s = CMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.5), c(0.3, 0.0), c(-0.2, 0.1), c(2.0, -1.0)],
        );
        let s_inv = s.clone().try_inverse().unwrap();
        let conj: Vec<CMatrix> = rep.gammas().iter().map(|g| &s * g * &s_inv).collect();
        let space = intertwiner_space(rep.gammas(), &conj).unwrap();
        assert_eq!(space.dimension, 1);
        let phi = space.invertible_element().unwrap();
        // Φ ∝ S
        let ratio = phi[(0, 0)] / s[(0, 0)];
        assert!(max_abs(&(phi - &s * ratio)) < 1e-10);
    }

    #[test]
    fn mismatched_lengths_rejected() {
        let rep = gamma_matrices(Signature::new(2, 0).unwrap()).unwrap();
        assert!(intertwiner_space(rep.gammas(), &rep.gammas()[..1]).is_err());
    }
}

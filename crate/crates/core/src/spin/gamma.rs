use crate::clifford::Signature;
use crate::linalg::{anticommutator, c, max_abs, solve_sylvester_homogeneous, CMatrix};
use crate::{Error, Result};

/// γ^1..γ^n realising ℂCl(n) with the Clifford relations of `signature`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaRep {
    signature: Signature,
    gammas: Vec<CMatrix>,
}

fn pauli() -> [CMatrix; 3] {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    [
        CMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        CMatrix::from_row_slice(2, 2, &[z, -i, i, z]),
        CMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
    ]
}

/// Recursive construction: start from σ1, σ2 for n = 2; every step keeps
/// `γ^a ⊗ σ1` and appends `I ⊗ σ2`, `I ⊗ σ3`. The last k generators are then
/// multiplied by i.
pub fn gamma_matrices(signature: Signature) -> Result<GammaRep> {
    let n = signature.n();
    if !signature.is_even() {
        return Err(Error::OddDimension(n));
    }
    let [s1, s2, s3] = pauli();
    let mut gammas = vec![s1.clone(), s2.clone()];
    while gammas.len() < n {
        let d = gammas[0].nrows();
        let id = CMatrix::identity(d, d);
        let mut next: Vec<CMatrix> = gammas.iter().map(|g| g.kronecker(&s1)).collect();
        next.push(id.kronecker(&s2));
        next.push(id.kronecker(&s3));
        gammas = next;
    }
    for g in gammas.iter_mut().skip(signature.m()) {
        *g *= c(0.0, 1.0);
    }
    Ok(GammaRep { signature, gammas })
}

impl GammaRep {
    /// Wraps explicit matrices; fails unless they satisfy the Clifford
    /// relations of `signature` to 1e-10.
    pub fn from_matrices(signature: Signature, gammas: Vec<CMatrix>) -> Result<Self> {
        if gammas.len() != signature.n() {
            return Err(Error::ShapeMismatch(format!(
                "{} matrices for dimension {}",
                gammas.len(),
                signature.n()
            )));
        }
        let d = gammas[0].nrows();
        if gammas.iter().any(|g| g.nrows() != d || g.ncols() != d) {
            return Err(Error::ShapeMismatch("γ matrices must be square of equal size".into()));
        }
        let rep = Self { signature, gammas };
        let defect = rep.clifford_defect();
        if defect > 1e-10 {
            return Err(Error::ShapeMismatch(format!("Clifford relation defect {defect:e}")));
        }
        Ok(rep)
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn gammas(&self) -> &[CMatrix] {
        &self.gammas
    }

    /// Spinor dimension.
    pub fn dim(&self) -> usize {
        self.gammas[0].nrows()
    }

    /// γ_b = η_{bc} γ^c.
    pub fn lowered(&self, b: usize) -> CMatrix {
        &self.gammas[b] * c(self.signature.eta(b), 0.0)
    }

    /// max |γ^a γ^b + γ^b γ^a - 2 η^{ab} I|.
    pub fn clifford_defect(&self) -> f64 {
        let d = self.dim();
        let id = CMatrix::identity(d, d);
        let mut worst: f64 = 0.0;
        for (a, ga) in self.gammas.iter().enumerate() {
            for (b, gb) in self.gammas.iter().enumerate() {
                let target = &id * c(2.0 * self.signature.eta_ab(a, b), 0.0);
                worst = worst.max(max_abs(&(anticommutator(ga, gb) - target)));
            }
        }
        worst
    }

    /// Block-diagonal sum of the representation with itself.
    pub fn direct_sum_with_self(&self) -> Vec<CMatrix> {
        let d = self.dim();
        self.gammas
            .iter()
            .map(|g| {
                let mut m = CMatrix::zeros(2 * d, 2 * d);
                m.view_mut((0, 0), (d, d)).copy_from(g);
                m.view_mut((d, d), (d, d)).copy_from(g);
                m
            })
            .collect()
    }
}

/// Dimension of {X : [X, γ^a] = 0 for all a}; 1 for an irreducible set.
pub fn commutant_dimension(matrices: &[CMatrix]) -> usize {
    solve_sylvester_homogeneous(matrices, matrices).len()
}

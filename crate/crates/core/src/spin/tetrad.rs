use nalgebra::{DMatrix, SymmetricEigen};

use super::GammaRep;
use crate::clifford::Signature;
use crate::linalg::{c, CMatrix};
use crate::{Error, Result};

/// Pointwise tetrad: coframe h^a_μ (`coframe[(a, μ)]`) and frame h^μ_a
/// (`frame[(μ, a)]`), mutually inverse, with g_{μν} = η_{ab} h^a_μ h^b_ν.
#[derive(Clone, Debug, PartialEq)]
pub struct Tetrad {
    signature: Signature,
    coframe: DMatrix<f64>,
    frame: DMatrix<f64>,
}

impl Tetrad {
    pub fn from_coframe(signature: Signature, coframe: DMatrix<f64>) -> Result<Self> {
        let n = signature.n();
        if coframe.nrows() != n || coframe.ncols() != n {
            return Err(Error::ShapeMismatch(format!(
                "coframe is {}x{}, expected {n}x{n}",
                coframe.nrows(),
                coframe.ncols()
            )));
        }
        let frame = coframe.clone().try_inverse().ok_or(Error::SingularTetrad)?;
        Ok(Self {
            signature,
            coframe,
            frame,
        })
    }

    /// Diagonalise g symmetrically and scale eigenvectors by √|λ|, putting
    /// the positive-eigenvalue directions first.
    pub fn from_metric(signature: Signature, g: &DMatrix<f64>) -> Result<Self> {
        let n = signature.n();
        if g.nrows() != n || g.ncols() != n {
            return Err(Error::ShapeMismatch(format!("metric must be {n}x{n}")));
        }
        let det = g.determinant();
        if det.abs() < 1e-12 {
            return Err(Error::DegenerateMetric(det.abs()));
        }
        let sym = (g + g.transpose()) * 0.5;
        let eig = SymmetricEigen::new(sym);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (eig.eigenvalues[i] < 0.0, i));
        let plus = order.iter().filter(|&&i| eig.eigenvalues[i] > 0.0).count();
        if plus != signature.m() {
            return Err(Error::MetricSignature {
                m: signature.m(),
                k: signature.k(),
                found_plus: plus,
                found_minus: n - plus,
            });
        }
        let mut coframe = DMatrix::zeros(n, n);
        for (a, &i) in order.iter().enumerate() {
            let scale = eig.eigenvalues[i].abs().sqrt();
            for mu in 0..n {
                coframe[(a, mu)] = scale * eig.eigenvectors[(mu, i)];
            }
        }
        Self::from_coframe(signature, coframe)
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn coframe(&self) -> &DMatrix<f64> {
        &self.coframe
    }

    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    /// g_{μν} = η_{ab} h^a_μ h^b_ν.
    pub fn metric(&self) -> DMatrix<f64> {
        self.coframe.transpose() * self.signature.eta_matrix() * &self.coframe
    }
}

/// γ_g(t) = t_μ h^μ_a γ^a.
pub fn gamma_of_covector(rep: &GammaRep, tetrad: &Tetrad, t: &[f64]) -> Result<CMatrix> {
    let n = rep.signature().n();
    if tetrad.signature().n() != n || t.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "covector of length {} with tetrad of dimension {} and representation of dimension {n}",
            t.len(),
            tetrad.signature().n()
        )));
    }
    let d = rep.dim();
    let mut out = CMatrix::zeros(d, d);
    for a in 0..n {
        let coeff: f64 = (0..n).map(|mu| t[mu] * tetrad.frame()[(mu, a)]).sum();
        if coeff != 0.0 {
            out += &rep.gammas()[a] * c(coeff, 0.0);
        }
    }
    Ok(out)
}

/// γ_g(dx^μ) for μ = 0..n.
pub fn coordinate_gammas(rep: &GammaRep, tetrad: &Tetrad) -> Result<Vec<CMatrix>> {
    let n = rep.signature().n();
    (0..n)
        .map(|mu| {
            let mut t = vec![0.0; n];
            t[mu] = 1.0;
            gamma_of_covector(rep, tetrad, &t)
        })
        .collect()
}

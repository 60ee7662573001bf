use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use ndarray::Array3;

use super::{ComponentFn, ConnectionJet, Jet2, MetricField};
use crate::clifford::Signature;
use crate::{Error, Result};

/// Coframe h^a_μ(x) given as n² component functions, row-major in (a, μ).
#[derive(Clone)]
pub struct TetradField {
    signature: Signature,
    coframe: ComponentFn,
}

impl fmt::Debug for TetradField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TetradField")
            .field("signature", &self.signature)
            .finish_non_exhaustive()
    }
}

/// Tetrad at a point with first derivatives.
/// `d_coframe[[λ, a, μ]] = ∂_λ h^a_μ`, `d_frame[[λ, μ, a]] = ∂_λ h^μ_a`.
#[derive(Clone, Debug, PartialEq)]
pub struct TetradJet {
    pub coframe: DMatrix<f64>,
    pub frame: DMatrix<f64>,
    pub d_coframe: Array3<f64>,
    pub d_frame: Array3<f64>,
}

impl TetradField {
    pub fn new(signature: Signature, coframe: ComponentFn) -> Self {
        Self { signature, coframe }
    }

    pub fn from_fn<F>(signature: Signature, f: F) -> Self
    where
        F: Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
    {
        Self::new(signature, Arc::new(f))
    }

    /// h^a_μ = √|g_μμ| δ^a_μ for a diagonal metric, with the frame index
    /// permuted so the positive directions come first. Off-diagonal
    /// entries are checked at evaluation time.
    pub fn diagonal(metric: MetricField) -> Self {
        let signature = metric.signature();
        Self::from_fn(signature, move |x| {
            let n = x.len();
            let g = match metric.component_jets(x) {
                Ok(g) => g,
                Err(_) => return vec![x[0].lift(f64::NAN); n * n],
            };
            let offdiag = (0..n * n)
                .filter(|i| i / n != i % n)
                .any(|i| g[i].value() != 0.0 || g[i].grad().iter().any(|&d| d != 0.0));
            if offdiag {
                return vec![x[0].lift(f64::NAN); n * n];
            }
            let mut order: Vec<usize> = (0..n).filter(|&m| g[m * n + m].value() > 0.0).collect();
            order.extend((0..n).filter(|&m| g[m * n + m].value() <= 0.0));
            let mut out = vec![x[0].lift(0.0); n * n];
            for (a, &mu) in order.iter().enumerate() {
                let gmm = &g[mu * n + mu];
                out[a * n + mu] = if gmm.value() > 0.0 {
                    gmm.sqrt()
                } else {
                    (-gmm).sqrt()
                };
            }
            out
        })
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn jet_at(&self, x: &[f64]) -> Result<TetradJet> {
        let n = self.signature.n();
        if x.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "point has {} coordinates, tetrad dimension is {n}",
                x.len()
            )));
        }
        let jets = (self.coframe)(&Jet2::variables(x));
        if jets.len() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "tetrad returned {} components, expected {}",
                jets.len(),
                n * n
            )));
        }
        if jets.iter().any(|j| !j.value().is_finite()) {
            return Err(Error::NotDiagonal);
        }
        let coframe = DMatrix::from_fn(n, n, |a, mu| jets[a * n + mu].value());
        let frame = coframe.clone().try_inverse().ok_or(Error::SingularTetrad)?;
        let d_coframe = Array3::from_shape_fn((n, n, n), |(l, a, mu)| jets[a * n + mu].grad()[l]);
        // ∂h^μ_a = -h^μ_b ∂h^b_ν h^ν_a
        let d_frame = Array3::from_shape_fn((n, n, n), |(l, mu, a)| {
            let mut s = 0.0;
            for b in 0..n {
                for nu in 0..n {
                    s -= frame[(mu, b)] * d_coframe[[l, b, nu]] * frame[(nu, a)];
                }
            }
            s
        });
        Ok(TetradJet {
            coframe,
            frame,
            d_coframe,
            d_frame,
        })
    }
}

/// A_λ{}^b{}_a = -h^b_μ ∂_λ h^μ_a + K_λ{}^μ{}_ν h^b_μ h^ν_a, indexed
/// `[λ][b][a]`.
pub fn tetrad_coefficients(kg: &ConnectionJet, h: &TetradJet) -> Array3<f64> {
    let n = kg.dim();
    Array3::from_shape_fn((n, n, n), |(l, b, a)| {
        let mut s = 0.0;
        for mu in 0..n {
            s -= h.coframe[(b, mu)] * h.d_frame[[l, mu, a]];
            for nu in 0..n {
                s += kg.k[[l, mu, nu]] * h.coframe[(b, mu)] * h.frame[(nu, a)];
            }
        }
        s
    })
}

/// max |A_{λba} + A_{λab}| with A_{λba} = η_{bc} A_λ{}^c{}_a.
pub fn lowered_antisymmetry_defect(sig: &Signature, a: &Array3<f64>) -> f64 {
    let n = sig.n();
    let mut worst: f64 = 0.0;
    for l in 0..n {
        for b in 0..n {
            for c in 0..n {
                let s = sig.eta(b) * a[[l, b, c]] + sig.eta(c) * a[[l, c, b]];
                worst = worst.max(s.abs());
            }
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::levi_civita;

    fn sphere() -> MetricField {
        MetricField::from_fn(Signature::new(2, 0).unwrap(), |x| {
            let s = x[0].sin();
            vec![x[0].lift(1.0), x[0].lift(0.0), x[0].lift(0.0), &s * &s]
        })
    }

    #[test]
    fn flat_identity_tetrad() {
        let sig = Signature::new(1, 3).unwrap();
        let h = TetradField::diagonal(MetricField::flat(sig))
            .jet_at(&[0.1, 0.2, 0.3, 0.4])
            .unwrap();
        assert_eq!(h.coframe, DMatrix::identity(4, 4));
        let a = tetrad_coefficients(&ConnectionJet::zeros(4), &h);
        assert!(a.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn sphere_coefficients_by_hand() {
        let theta: f64 = 0.9;
        let m = sphere();
        let h = TetradField::diagonal(m.clone()).jet_at(&[theta, 0.2]).unwrap();
        let kg = levi_civita(&m.jet_at(&[theta, 0.2]).unwrap());
        let a = tetrad_coefficients(&kg, &h);
        assert!((a[[1, 0, 1]].abs() - theta.cos()).abs() < 1e-14);
        assert!((a[[1, 0, 1]] + a[[1, 1, 0]]).abs() < 1e-14);
        for (b, c) in [(0, 0), (1, 1)] {
            assert!(a[[1, b, c]].abs() < 1e-14);
        }
        assert!(a.index_axis(ndarray::Axis(0), 0).iter().all(|v| v.abs() < 1e-14));
        assert!(lowered_antisymmetry_defect(&m.signature(), &a) < 1e-14);
    }

    #[test]
    fn non_diagonal_metric_rejected() {
        let m = MetricField::from_fn(Signature::new(2, 0).unwrap(), |x| {
            vec![x[0].lift(2.0), x[0].lift(0.5), x[0].lift(0.5), x[0].lift(1.0)]
        });
        assert_eq!(
            TetradField::diagonal(m).jet_at(&[0.0, 0.0]),
            Err(Error::NotDiagonal)
        );
    }

    #[test]
    fn frame_derivative_is_consistent() {
        let h = TetradField::diagonal(sphere()).jet_at(&[0.6, 0.0]).unwrap();
        // h^φ_2 = 1/sinθ
        let expected = -0.6f64.cos() / 0.6f64.sin().powi(2);
        assert!((h.d_frame[[0, 1, 1]] - expected).abs() < 1e-14);
    }
}

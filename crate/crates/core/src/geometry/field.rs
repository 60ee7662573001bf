use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, SymmetricEigen};
use ndarray::{Array2, Array3, Array4};

use super::Jet2;
use crate::clifford::Signature;
use crate::{Error, Result};

/// Field components as functions of the coordinate seeds, returned
/// row-major (n² entries for a metric, n³ for a connection).
pub type ComponentFn = Arc<dyn Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync>;

/// Smallest |det g| accepted at an evaluation point.
pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// Pseudo-Riemannian metric g_{μν}(x) with a declared signature. Only the
/// upper triangle of the component table is read; the lower one is filled
/// from it.
#[derive(Clone)]
pub struct MetricField {
    signature: Signature,
    components: ComponentFn,
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField")
            .field("signature", &self.signature)
            .finish_non_exhaustive()
    }
}

/// Metric, its first and second derivatives, inverse and determinant at a
/// point. `dg[[λ, μ, ν]] = ∂_λ g_{μν}`, `d2g[[ρ, λ, μ, ν]] = ∂_ρ ∂_λ g_{μν}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricJet {
    pub g: Array2<f64>,
    pub dg: Array3<f64>,
    pub d2g: Array4<f64>,
    pub ginv: Array2<f64>,
    pub det: f64,
}

impl MetricField {
    pub fn new(signature: Signature, components: ComponentFn) -> Self {
        Self {
            signature,
            components,
        }
    }

    pub fn from_fn<F>(signature: Signature, f: F) -> Self
    where
        F: Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
    {
        Self::new(signature, Arc::new(f))
    }

    /// Constant η of the given signature.
    pub fn flat(signature: Signature) -> Self {
        Self::from_fn(signature, move |x| {
            let n = signature.n();
            (0..n * n)
                .map(|i| {
                    let (r, c) = (i / n, i % n);
                    x[0].lift(signature.eta_ab(r, c))
                })
                .collect()
        })
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn dim(&self) -> usize {
        self.signature.n()
    }

    /// Raw jets g_{μν} (symmetrised from the upper triangle).
    pub fn component_jets(&self, x: &[Jet2]) -> Result<Vec<Jet2>> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "point has {} coordinates, metric dimension is {n}",
                x.len()
            )));
        }
        let raw = (self.components)(x);
        if raw.len() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "metric returned {} components, expected {}",
                raw.len(),
                n * n
            )));
        }
        Ok((0..n * n)
            .map(|i| {
                let (r, c) = (i / n, i % n);
                raw[r.min(c) * n + r.max(c)].clone()
            })
            .collect())
    }

    /// Evaluate at `x`; fails if g is degenerate or its eigenvalue signs
    /// disagree with the declared signature.
    pub fn jet_at(&self, x: &[f64]) -> Result<MetricJet> {
        let n = self.dim();
        let comps = self.component_jets(&Jet2::variables(x))?;
        let mut g = Array2::zeros((n, n));
        let mut dg = Array3::zeros((n, n, n));
        let mut d2g = Array4::zeros((n, n, n, n));
        for mu in 0..n {
            for nu in 0..n {
                let j = &comps[mu * n + nu];
                g[[mu, nu]] = j.value();
                for l in 0..n {
                    dg[[l, mu, nu]] = j.grad()[l];
                    for r in 0..n {
                        d2g[[r, l, mu, nu]] = j.hess(r, l);
                    }
                }
            }
        }
        let gm = DMatrix::from_fn(n, n, |r, c| g[[r, c]]);
        let det = gm.determinant();
        if !(det.abs() >= DEGENERACY_THRESHOLD) {
            return Err(Error::DegenerateMetric(det.abs()));
        }
        let eig = SymmetricEigen::new(gm.clone());
        let plus = eig.eigenvalues.iter().filter(|&&l| l > 0.0).count();
        if plus != self.signature.m() {
            return Err(Error::MetricSignature {
                m: self.signature.m(),
                k: self.signature.k(),
                found_plus: plus,
                found_minus: n - plus,
            });
        }
        let inv = gm.try_inverse().ok_or(Error::DegenerateMetric(det.abs()))?;
        let ginv = Array2::from_shape_fn((n, n), |(r, c)| 0.5 * (inv[(r, c)] + inv[(c, r)]));
        Ok(MetricJet {
            g,
            dg,
            d2g,
            ginv,
            det,
        })
    }
}

impl MetricJet {
    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    /// ∂_ρ g^{μν} = -g^{μα} ∂_ρ g_{αβ} g^{βν}, indexed `[ρ][μ][ν]`.
    pub fn dginv(&self) -> Array3<f64> {
        let n = self.dim();
        Array3::from_shape_fn((n, n, n), |(r, mu, nu)| {
            let mut s = 0.0;
            for a in 0..n {
                for b in 0..n {
                    s -= self.ginv[[mu, a]] * self.dg[[r, a, b]] * self.ginv[[b, nu]];
                }
            }
            s
        })
    }

    /// √|det g| and its gradient.
    pub fn sqrt_abs_det(&self) -> (f64, Vec<f64>) {
        let n = self.dim();
        let s = self.det.abs().sqrt();
        // ∂ √|g| = ½ √|g| g^{μν} ∂ g_{μν}
        let grad = (0..n)
            .map(|l| {
                let mut tr = 0.0;
                for mu in 0..n {
                    for nu in 0..n {
                        tr += self.ginv[[mu, nu]] * self.dg[[l, mu, nu]];
                    }
                }
                0.5 * s * tr
            })
            .collect();
        (s, grad)
    }

    pub fn as_matrix(&self) -> DMatrix<f64> {
        let n = self.dim();
        DMatrix::from_fn(n, n, |r, c| self.g[[r, c]])
    }
}

/// Connection coefficients and first derivatives at a point:
/// `k[[λ, μ, ν]] = K_λ{}^μ{}_ν`, `dk[[ρ, λ, μ, ν]] = ∂_ρ K_λ{}^μ{}_ν`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionJet {
    pub k: Array3<f64>,
    pub dk: Array4<f64>,
}

impl ConnectionJet {
    pub fn zeros(n: usize) -> Self {
        Self {
            k: Array3::zeros((n, n, n)),
            dk: Array4::zeros((n, n, n, n)),
        }
    }

    pub fn dim(&self) -> usize {
        self.k.dim().0
    }

    /// Constant (x-independent) coefficients.
    pub fn constant(k: Array3<f64>) -> Self {
        let n = k.dim().0;
        Self {
            k,
            dk: Array4::zeros((n, n, n, n)),
        }
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            k: &self.k + &other.k,
            dk: &self.dk + &other.dk,
        }
    }

    fn from_jets(n: usize, jets: &[Jet2]) -> Self {
        let mut out = Self::zeros(n);
        for l in 0..n {
            for mu in 0..n {
                for nu in 0..n {
                    let j = &jets[(l * n + mu) * n + nu];
                    out.k[[l, mu, nu]] = j.value();
                    for r in 0..n {
                        out.dk[[r, l, mu, nu]] = j.grad()[r];
                    }
                }
            }
        }
        out
    }
}

/// General linear connection K_λ{}^μ{}_ν(x).
#[derive(Clone)]
pub enum ConnectionField {
    Zero(usize),
    /// n³ component functions, row-major in (λ, μ, ν).
    Components { n: usize, f: ComponentFn },
    /// Levi-Civita connection of a metric, in the sign convention of
    /// [`super::christoffel_lower`].
    LeviCivita(MetricField),
    /// Metric connection of `metric` with torsion T_μ{}^ν{}_λ given by n³
    /// component functions.
    MetricWithTorsion { metric: MetricField, torsion: ComponentFn },
    Sum(Box<ConnectionField>, Box<ConnectionField>),
}

impl fmt::Debug for ConnectionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Zero(n) => write!(f, "Zero({n})"),
            Self::Components { n, .. } => write!(f, "Components({n})"),
            Self::LeviCivita(m) => write!(f, "LeviCivita({m:?})"),
            Self::MetricWithTorsion { metric, .. } => write!(f, "MetricWithTorsion({metric:?})"),
            Self::Sum(a, b) => write!(f, "Sum({a:?}, {b:?})"),
        }
    }
}

impl ConnectionField {
    pub fn from_fn<F>(n: usize, f: F) -> Self
    where
        F: Fn(&[Jet2]) -> Vec<Jet2> + Send + Sync + 'static,
    {
        Self::Components { n, f: Arc::new(f) }
    }

    pub fn plus(self, other: ConnectionField) -> Self {
        Self::Sum(Box::new(self), Box::new(other))
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Zero(n) | Self::Components { n, .. } => *n,
            Self::LeviCivita(m) | Self::MetricWithTorsion { metric: m, .. } => m.dim(),
            Self::Sum(a, _) => a.dim(),
        }
    }

    pub fn jet_at(&self, x: &[f64]) -> Result<ConnectionJet> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "point has {} coordinates, connection dimension is {n}",
                x.len()
            )));
        }
        match self {
            Self::Zero(n) => Ok(ConnectionJet::zeros(*n)),
            Self::Components { n, f } => {
                let jets = f(&Jet2::variables(x));
                if jets.len() != n * n * n {
                    return Err(Error::ShapeMismatch(format!(
                        "connection returned {} components, expected {}",
                        jets.len(),
                        n * n * n
                    )));
                }
                Ok(ConnectionJet::from_jets(*n, &jets))
            }
            Self::LeviCivita(metric) => Ok(super::levi_civita(&metric.jet_at(x)?)),
            Self::MetricWithTorsion { metric, torsion } => {
                let g = metric.jet_at(x)?;
                let jets = torsion(&Jet2::variables(x));
                if jets.len() != n * n * n {
                    return Err(Error::ShapeMismatch("torsion component count".into()));
                }
                super::metric_connection_jet(&g, &ConnectionJet::from_jets(n, &jets))
            }
            Self::Sum(a, b) => Ok(a.jet_at(x)?.add(&b.jet_at(x)?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere() -> MetricField {
        MetricField::from_fn(Signature::new(2, 0).unwrap(), |x| {
            let s = x[0].sin();
            vec![x[0].lift(1.0), x[0].lift(0.0), x[0].lift(0.0), &s * &s]
        })
    }

    #[test]
    fn sphere_metric_jet() {
        let j = sphere().jet_at(&[std::f64::consts::FRAC_PI_4, 0.3]).unwrap();
        assert!((j.g[[1, 1]] - 0.5).abs() < 1e-15);
        // ∂_θ sin²θ = sin 2θ = 1 at π/4
        assert!((j.dg[[0, 1, 1]] - 1.0).abs() < 1e-15);
        // ∂²_θ sin²θ = 2 cos 2θ = 0
        assert!(j.d2g[[0, 0, 1, 1]].abs() < 1e-15);
        assert!((j.det - 0.5).abs() < 1e-15);
    }

    #[test]
    fn degenerate_point_rejected() {
        assert!(matches!(
            sphere().jet_at(&[0.0, 0.0]),
            Err(Error::DegenerateMetric(_))
        ));
    }

    #[test]
    fn wrong_signature_rejected() {
        let m = MetricField::flat(Signature::new(1, 1).unwrap());
        let wrong = MetricField::new(Signature::new(2, 0).unwrap(), m.components.clone());
        assert!(matches!(
            wrong.jet_at(&[0.0, 0.0]),
            Err(Error::MetricSignature { found_plus: 1, .. })
        ));
    }

    #[test]
    fn lower_triangle_ignored() {
        let m = MetricField::from_fn(Signature::new(2, 0).unwrap(), |x| {
            vec![x[0].lift(2.0), x[0].lift(0.5), x[0].lift(99.0), x[0].lift(1.0)]
        });
        let j = m.jet_at(&[0.0, 0.0]).unwrap();
        assert_eq!(j.g[[1, 0]], 0.5);
    }

    #[test]
    fn sqrt_det_gradient() {
        let j = sphere().jet_at(&[0.7, 0.0]).unwrap();
        let (s, grad) = j.sqrt_abs_det();
        assert!((s - 0.7f64.sin()).abs() < 1e-15);
        assert!((grad[0] - 0.7f64.cos()).abs() < 1e-15);
        assert_eq!(grad[1], 0.0);
    }
}

//! General covariant transformations: the infinitesimal lift of a vector
//! field and a finite-transformation check of the density 𝓛.

use ndarray::{Array2, Array3, Array4};
use rand::Rng;
use serde::Serialize;

use super::{lagrangian_at, lagrangian_from_parts, FieldConfiguration};
use crate::geometry::{Jet2, Polynomial, Real};
use crate::{Error, Result};

/// Polynomial vector field τ^μ(x) with its first and second derivatives
/// precomputed symbolically.
#[derive(Clone, Debug, PartialEq)]
pub struct VectorField {
    comps: Vec<Polynomial>,
    // d[μ][ν] = ∂_ν τ^μ
    d: Vec<Vec<Polynomial>>,
    // dd[μ][ν][β] = ∂_ν ∂_β τ^μ
    dd: Vec<Vec<Vec<Polynomial>>>,
}

impl VectorField {
    pub fn new(comps: Vec<Polynomial>) -> Self {
        let n = comps.len();
        let d: Vec<Vec<Polynomial>> = comps
            .iter()
            .map(|p| (0..n).map(|i| p.derivative(i)).collect())
            .collect();
        let dd = d
            .iter()
            .map(|row| row.iter().map(|p| (0..n).map(|i| p.derivative(i)).collect()).collect())
            .collect();
        Self { comps, d, dd }
    }

    pub fn zero(n: usize) -> Self {
        Self::new(vec![Polynomial::zero(n); n])
    }

    /// Constant translation by `v`.
    pub fn translation(v: &[f64]) -> Self {
        let n = v.len();
        Self::new(v.iter().map(|&c| Polynomial::constant(n, c)).collect())
    }

    /// Random components of total degree ≤ `degree`.
    pub fn random(n: usize, degree: u32, count: usize, scale: f64, rng: &mut impl Rng) -> Self {
        Self::new((0..n).map(|_| Polynomial::random(n, degree, count, scale, rng)).collect())
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.comps
    }
}

/// Components of the lifted vector field at a point: `base[μ] = τ^μ`,
/// `metric[[α, β]]` the coefficient of ∂/∂σ^{αβ}, `connection[[μ, α, β]]`
/// the coefficient of ∂/∂k_μ{}^α{}_β.
#[derive(Clone, Debug, PartialEq)]
pub struct Lift {
    pub base: Vec<f64>,
    pub metric: Array2<f64>,
    pub connection: Array3<f64>,
}

pub fn covariant_lift(tau: &VectorField, cfg: &FieldConfiguration, x: &[f64]) -> Result<Lift> {
    let n = cfg.dim();
    if tau.dim() != n {
        return Err(Error::ShapeMismatch(format!(
            "vector field dimension {} for a {n}-dimensional configuration",
            tau.dim()
        )));
    }
    let p = cfg.point(x)?;
    let (gi, k) = (&p.g.ginv, &p.k.k);
    let base: Vec<f64> = tau.comps.iter().map(|c| c.eval(x)).collect();
    let d = Array2::from_shape_fn((n, n), |(mu, nu)| tau.d[mu][nu].eval(x));
    let metric = Array2::from_shape_fn((n, n), |(a, b)| {
        (0..n)
            .map(|nu| gi[[nu, b]] * d[[a, nu]] + gi[[a, nu]] * d[[b, nu]])
            .sum()
    });
    let connection = Array3::from_shape_fn((n, n, n), |(mu, a, b)| {
        let mut v = tau.dd[a][mu][b].eval(x);
        for nu in 0..n {
            v += d[[a, nu]] * k[[mu, nu, b]] - d[[nu, b]] * k[[mu, a, nu]] - d[[nu, mu]] * k[[nu, a, b]];
        }
        v
    });
    Ok(Lift {
        base,
        metric,
        connection,
    })
}

/// Gauss–Jordan inverse with partial pivoting on the values.
fn invert<R: Real>(m: &[Vec<R>]) -> Option<Vec<Vec<R>>> {
    let n = m.len();
    let mut a: Vec<Vec<R>> = m.to_vec();
    let mut inv: Vec<Vec<R>> = (0..n)
        .map(|i| (0..n).map(|j| m[0][0].lift(if i == j { 1.0 } else { 0.0 })).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].val().abs().total_cmp(&a[j][col].val().abs()))?;
        if a[piv][col].val() == 0.0 {
            return None;
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = a[col][j].clone() / p.clone();
            inv[col][j] = inv[col][j].clone() / p.clone();
        }
        for i in 0..n {
            if i != col {
                let f = a[i][col].clone();
                for j in 0..n {
                    a[i][j] = a[i][j].clone() - f.clone() * a[col][j].clone();
                    inv[i][j] = inv[i][j].clone() - f.clone() * inv[col][j].clone();
                }
            }
        }
    }
    Some(inv)
}

/// D(ε) = 𝓛'(x')·|det ∂x'/∂x| - 𝓛(x) for the coordinate change
/// x' = x + ε τ(x). σ is transformed as a tensor and k by
///
/// k'_λ{}^ν{}_α = [∂x'^ν/∂x^γ ∂x^β/∂x'^α k_μ{}^γ{}_β
///                + ∂x^β/∂x'^α ∂²x'^ν/∂x^μ∂x^β] ∂x^μ/∂x'^λ,
///
/// with its x'-derivatives obtained by the chain rule through jets in x.
pub fn density_defect(cfg: &FieldConfiguration, tau: &VectorField, x: &[f64], eps: f64) -> Result<f64> {
    let n = cfg.dim();
    if tau.dim() != n {
        return Err(Error::ShapeMismatch("vector field dimension".into()));
    }
    let p = cfg.point(x)?;
    let seeds = Jet2::variables(x);
    let zero_hess = vec![0.0; n * n];
    // J^ν_γ = δ + ε ∂_γ τ^ν and H^ν_{μβ} = ε ∂_μ∂_β τ^ν as jets in x.
    let jac: Vec<Vec<Jet2>> = (0..n)
        .map(|nu| {
            (0..n)
                .map(|g| {
                    let d = tau.d[nu][g].eval(&seeds) * eps;
                    if nu == g {
                        d + 1.0
                    } else {
                        d
                    }
                })
                .collect()
        })
        .collect();
    let hess: Vec<Vec<Vec<Jet2>>> = (0..n)
        .map(|nu| {
            (0..n)
                .map(|mu| (0..n).map(|b| tau.dd[nu][mu][b].eval(&seeds) * eps).collect())
                .collect()
        })
        .collect();
    let jinv = invert(&jac).ok_or(Error::NotInvertible)?;
    // k_μ^γ_β as first-order jets
    let kj: Vec<Jet2> = (0..n * n * n)
        .map(|i| {
            let (mu, g, b) = (i / (n * n), (i / n) % n, i % n);
            let grad = (0..n).map(|r| p.k.dk[[r, mu, g, b]]).collect();
            Jet2::from_parts(p.k.k[[mu, g, b]], grad, zero_hess.clone())
        })
        .collect();
    let at = |mu: usize, g: usize, b: usize| &kj[(mu * n + g) * n + b];
    // A^ν_{μβ} = J^ν_γ k_μ^γ_β + H^ν_{μβ}
    let mut a = vec![seeds[0].lift(0.0); n * n * n];
    for nu in 0..n {
        for mu in 0..n {
            for b in 0..n {
                let mut v = hess[nu][mu][b].clone();
                for g in 0..n {
                    v = v + &jac[nu][g] * at(mu, g, b);
                }
                a[(nu * n + mu) * n + b] = v;
            }
        }
    }
    // B^ν_{μα} = A^ν_{μβ} Jinv^β_α
    let mut bm = vec![seeds[0].lift(0.0); n * n * n];
    for nu in 0..n {
        for mu in 0..n {
            for al in 0..n {
                let mut v = seeds[0].lift(0.0);
                for b in 0..n {
                    v = v + &a[(nu * n + mu) * n + b] * &jinv[b][al];
                }
                bm[(nu * n + mu) * n + al] = v;
            }
        }
    }
    // k'_λ^ν_α = B^ν_{μα} Jinv^μ_λ
    let mut kp = Array3::zeros((n, n, n));
    let mut dkp = Array4::zeros((n, n, n, n));
    for la in 0..n {
        for nu in 0..n {
            for al in 0..n {
                let mut v = seeds[0].lift(0.0);
                for mu in 0..n {
                    v = v + &bm[(nu * n + mu) * n + al] * &jinv[mu][la];
                }
                kp[[la, nu, al]] = v.value();
                // ∂'_ρ = Jinv^σ_ρ ∂_σ
                for r in 0..n {
                    dkp[[r, la, nu, al]] = (0..n).map(|s| jinv[s][r].value() * v.grad()[s]).sum();
                }
            }
        }
    }
    let jv = |i: usize, j: usize| jac[i][j].value();
    // σ'^{μν} = J^μ_α J^ν_β σ^{αβ}
    let gi = &p.g.ginv;
    let ginv_p = Array2::from_shape_fn((n, n), |(mu, nu)| {
        let mut v = 0.0;
        for a in 0..n {
            for b in 0..n {
                v += jv(mu, a) * jv(nu, b) * gi[[a, b]];
            }
        }
        v
    });
    let det_j = nalgebra::DMatrix::from_fn(n, n, |i, j| jv(i, j)).determinant();
    let sqrt_det_p = p.sqrt_det / det_j.abs();
    let transformed = lagrangian_from_parts(&ginv_p, sqrt_det_p, &kp, &dkp);
    Ok(transformed * det_j.abs() - lagrangian_at(&p))
}

/// |D(ε)| / ε².
pub fn covariance_invariance_defect(
    cfg: &FieldConfiguration,
    tau: &VectorField,
    x: &[f64],
    eps: f64,
) -> Result<f64> {
    Ok(density_defect(cfg, tau, x, eps)?.abs() / (eps * eps))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CovarianceReport {
    pub eps: [f64; 2],
    pub defects: [f64; 2],
    /// Coefficient a of D(ε) ≈ aε + bε², eliminated from the two samples.
    pub first_order: f64,
}

pub const RICHARDSON_EPS: [f64; 2] = [1e-3, 1e-4];

pub fn first_order_covariance_defect(
    cfg: &FieldConfiguration,
    tau: &VectorField,
    x: &[f64],
) -> Result<CovarianceReport> {
    let [e1, e2] = RICHARDSON_EPS;
    let d1 = density_defect(cfg, tau, x, e1)?;
    let d2 = density_defect(cfg, tau, x, e2)?;
    let a = (e2 * e2 * d1 - e1 * e1 * d2) / (e1 * e2 * (e2 - e1));
    Ok(CovarianceReport {
        eps: RICHARDSON_EPS,
        defects: [d1, d2],
        first_order: a.abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Signature;
    use crate::geometry::{random_point, random_polynomial_connection, random_polynomial_metric, ConnectionField, MetricField, Preset};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sphere() -> FieldConfiguration {
        FieldConfiguration::levi_civita(Preset::sphere().metric_field(&[]).unwrap())
    }

    #[test]
    fn zero_field_zero_defect() {
        let d = density_defect(&sphere(), &VectorField::zero(2), &[1.0, 0.5], 1e-3).unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn cubic_field_on_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let tau = VectorField::random(2, 3, 4, 1.0, &mut rng);
        let r = first_order_covariance_defect(&sphere(), &tau, &[1.0, 0.5]).unwrap();
        assert!(r.first_order < 1e-8, "{r:?}");
    }

    #[test]
    fn general_connection_is_covariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let sig = Signature::new(1, 3).unwrap();
        let cfg = FieldConfiguration::new(
            random_polynomial_metric(sig, 2, 0.05, &mut rng),
            random_polynomial_connection(4, 2, 2, 0.5, &mut rng),
        )
        .unwrap();
        let tau = VectorField::random(4, 3, 3, 1.0, &mut rng);
        let x = random_point(4, -0.5, 0.5, &mut rng);
        let r = first_order_covariance_defect(&cfg, &tau, &x).unwrap();
        assert!(r.first_order < 1e-8, "{r:?}");
    }

    #[test]
    fn translation_lift_is_pure_transport() {
        let tau = VectorField::translation(&[0.3, -0.2]);
        let lift = covariant_lift(&tau, &sphere(), &[1.0, 0.5]).unwrap();
        assert_eq!(lift.base, vec![0.3, -0.2]);
        assert!(lift.metric.iter().all(|&v| v == 0.0));
        assert!(lift.connection.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn lift_on_zero_connection_keeps_inhomogeneous_term() {
        let n = 2;
        // τ = (x0 x1, x0²)
        let tau = VectorField::new(vec![
            Polynomial::from_terms(n, vec![(1.0, vec![1, 1])]),
            Polynomial::from_terms(n, vec![(1.0, vec![2, 0])]),
        ]);
        let cfg = FieldConfiguration::new(
            MetricField::flat(Signature::new(2, 0).unwrap()),
            ConnectionField::Zero(2),
        )
        .unwrap();
        let lift = covariant_lift(&tau, &cfg, &[0.4, 0.7]).unwrap();
        // ∂_{01} τ^0 = 1, ∂_{00} τ^1 = 2
        assert_eq!(lift.connection[[0, 0, 1]], 1.0);
        assert_eq!(lift.connection[[1, 0, 0]], 1.0);
        assert_eq!(lift.connection[[0, 1, 0]], 2.0);
        assert_eq!(lift.connection[[1, 1, 1]], 0.0);
    }

    #[test]
    fn rotation_lift_rotates_flat_metric() {
        // τ = (-x1, x0): ∂_ν τ^μ = ω with ω antisymmetric, so the metric
        // part ω η + η ωᵀ vanishes for η = δ.
        let n = 2;
        let tau = VectorField::new(vec![
            Polynomial::from_terms(n, vec![(-1.0, vec![0, 1])]),
            Polynomial::from_terms(n, vec![(1.0, vec![1, 0])]),
        ]);
        let cfg = FieldConfiguration::levi_civita(MetricField::flat(Signature::new(2, 0).unwrap()));
        let lift = covariant_lift(&tau, &cfg, &[0.4, 0.7]).unwrap();
        assert!(lift.metric.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn gauss_jordan_inverse() {
        let m = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let inv = invert(&m).unwrap();
        assert!((inv[0][0] - 0.6).abs() < 1e-15 && (inv[0][1] + 0.2).abs() < 1e-15);
        assert!(invert(&[vec![0.0, 0.0], vec![0.0, 1.0]]).is_none());
    }
}

//! Pointwise tensor formulas. Index order of every array follows the index
//! order of the symbol it holds, with upper and lower positions mixed as
//! written: `k[[λ, μ, ν]] = K_λ{}^μ{}_ν`, `t[[μ, ν, λ]] = T_μ{}^ν{}_λ`,
//! `r[[λ, μ, α, β]] = R_{λμ}{}^α{}_β`.

use ndarray::{Array3, Array4};

use super::{ConnectionJet, MetricJet};
use crate::{Error, Result};

fn n3(n: usize) -> (usize, usize, usize) {
    (n, n, n)
}

/// {_{μνα}} = -½(∂_μ g_{να} + ∂_α g_{νμ} - ∂_ν g_{μα}).
pub fn christoffel_lower(g: &MetricJet) -> Array3<f64> {
    let n = g.dim();
    Array3::from_shape_fn(n3(n), |(mu, nu, al)| {
        -0.5 * (g.dg[[mu, nu, al]] + g.dg[[al, nu, mu]] - g.dg[[nu, mu, al]])
    })
}

/// ∂_ρ {_{μνα}}, indexed `[ρ][μ][ν][α]`.
fn christoffel_lower_derivative(g: &MetricJet) -> Array4<f64> {
    let n = g.dim();
    Array4::from_shape_fn((n, n, n, n), |(r, mu, nu, al)| {
        -0.5 * (g.d2g[[r, mu, nu, al]] + g.d2g[[r, al, nu, mu]] - g.d2g[[r, nu, mu, al]])
    })
}

/// K_{μνα} = g_{νβ} K_μ{}^β{}_α.
pub fn lower_middle(g: &MetricJet, up: &Array3<f64>) -> Array3<f64> {
    let n = g.dim();
    Array3::from_shape_fn(n3(n), |(mu, nu, al)| {
        (0..n).map(|b| g.g[[nu, b]] * up[[mu, b, al]]).sum()
    })
}

/// K_μ{}^β{}_α = g^{βν} K_{μνα}.
pub fn raise_middle(g: &MetricJet, low: &Array3<f64>) -> Array3<f64> {
    let n = g.dim();
    Array3::from_shape_fn(n3(n), |(mu, b, al)| {
        (0..n).map(|nu| g.ginv[[b, nu]] * low[[mu, nu, al]]).sum()
    })
}

/// Raise the middle index of a lowered tensor with derivatives.
fn raise_middle_jet(g: &MetricJet, low: &Array3<f64>, dlow: &Array4<f64>) -> ConnectionJet {
    let n = g.dim();
    let dginv = g.dginv();
    let k = raise_middle(g, low);
    let dk = Array4::from_shape_fn((n, n, n, n), |(r, mu, b, al)| {
        (0..n)
            .map(|nu| dginv[[r, b, nu]] * low[[mu, nu, al]] + g.ginv[[b, nu]] * dlow[[r, mu, nu, al]])
            .sum()
    });
    ConnectionJet { k, dk }
}

/// Levi-Civita connection K_λ{}^μ{}_ν = g^{μβ} {_{λβν}} with its
/// derivatives (needs the metric Hessian).
pub fn levi_civita(g: &MetricJet) -> ConnectionJet {
    raise_middle_jet(g, &christoffel_lower(g), &christoffel_lower_derivative(g))
}

/// T_μ{}^ν{}_λ = K_μ{}^ν{}_λ - K_λ{}^ν{}_μ.
pub fn torsion(k: &ConnectionJet) -> Array3<f64> {
    torsion_of(&k.k)
}

fn torsion_of(k: &Array3<f64>) -> Array3<f64> {
    let n = k.dim().0;
    Array3::from_shape_fn(n3(n), |(mu, nu, la)| k[[mu, nu, la]] - k[[la, nu, mu]])
}

/// R_{λμ}{}^α{}_β = ∂_λ K_μ{}^α{}_β - ∂_μ K_λ{}^α{}_β
///                 + K_λ{}^γ{}_β K_μ{}^α{}_γ - K_μ{}^γ{}_β K_λ{}^α{}_γ.
pub fn curvature(k: &ConnectionJet) -> Array4<f64> {
    let n = k.dim();
    let mut r = Array4::zeros((n, n, n, n));
    for la in 0..n {
        for mu in (la + 1)..n {
            for al in 0..n {
                for be in 0..n {
                    let mut v = k.dk[[la, mu, al, be]] - k.dk[[mu, la, al, be]];
                    for ga in 0..n {
                        v += k.k[[la, ga, be]] * k.k[[mu, al, ga]]
                            - k.k[[mu, ga, be]] * k.k[[la, al, ga]];
                    }
                    r[[la, mu, al, be]] = v;
                    r[[mu, la, al, be]] = -v;
                }
            }
        }
    }
    r
}

/// C_{μνα} = ∂_μ g_{να} + K_{μνα} + K_{μαν}.
pub fn nonmetricity(g: &MetricJet, k: &ConnectionJet) -> Array3<f64> {
    let n = g.dim();
    let kl = lower_middle(g, &k.k);
    let mut c = Array3::zeros(n3(n));
    for mu in 0..n {
        for nu in 0..n {
            for al in nu..n {
                let v = g.dg[[mu, nu, al]] + (kl[[mu, nu, al]] + kl[[mu, al, nu]]);
                c[[mu, nu, al]] = v;
                c[[mu, al, nu]] = v;
            }
        }
    }
    c
}

/// S_{μνα} = ½(T_{νμα} + T_{ναμ} + T_{μνα} + C_{ανμ} - C_{ναμ}) with
/// T_{μνα} = g_{νβ} T_μ{}^β{}_α.
pub fn contorsion(g: &MetricJet, k: &ConnectionJet) -> Array3<f64> {
    let n = g.dim();
    let t = lower_middle(g, &torsion(k));
    let c = nonmetricity(g, k);
    Array3::from_shape_fn(n3(n), |(mu, nu, al)| {
        0.5 * (t[[nu, mu, al]] + t[[nu, al, mu]] + t[[mu, nu, al]] + c[[al, nu, mu]]
            - c[[nu, al, mu]])
    })
}

/// Splitting of a lowered connection into Christoffel, contorsion and
/// non-metricity parts.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub christoffel: Array3<f64>,
    pub contorsion: Array3<f64>,
    pub nonmetricity: Array3<f64>,
    /// max |K_{μνα} - {_{μνα}} - S_{μνα} - ½ C_{μνα}|.
    pub reconstruction_defect: f64,
}

pub fn decompose_reconstruct(g: &MetricJet, k: &ConnectionJet) -> Decomposition {
    let christoffel = christoffel_lower(g);
    let contorsion = contorsion(g, k);
    let nonmetricity = nonmetricity(g, k);
    let kl = lower_middle(g, &k.k);
    let rebuilt = &christoffel + &contorsion + &(&nonmetricity * 0.5);
    let reconstruction_defect = (&kl - &rebuilt).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Decomposition {
        christoffel,
        contorsion,
        nonmetricity,
        reconstruction_defect,
    }
}

pub fn max_abs3(a: &Array3<f64>) -> f64 {
    a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

pub fn max_abs4(a: &Array4<f64>) -> f64 {
    a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// max |T_μ{}^ν{}_λ + T_λ{}^ν{}_μ|.
pub fn torsion_antisymmetry_defect(t: &Array3<f64>) -> f64 {
    let n = t.dim().0;
    let mut worst: f64 = 0.0;
    for mu in 0..n {
        for nu in 0..n {
            for la in 0..n {
                worst = worst.max((t[[mu, nu, la]] + t[[la, nu, mu]]).abs());
            }
        }
    }
    worst
}

const TORSION_SYMMETRY_TOL: f64 = 1e-12;

fn metric_connection_lower(g: &MetricJet, tl: &Array3<f64>) -> Array3<f64> {
    let n = g.dim();
    let ch = christoffel_lower(g);
    Array3::from_shape_fn(n3(n), |(mu, nu, al)| {
        ch[[mu, nu, al]] + 0.5 * (tl[[nu, mu, al]] + tl[[nu, al, mu]] + tl[[mu, nu, al]])
    })
}

/// K^g_{μνα} = {_{μνα}} + ½(T_{νμα} + T_{ναμ} + T_{μνα}), returned with the
/// middle index raised. `torsion[[μ, ν, λ]] = T_μ{}^ν{}_λ`.
pub fn metric_connection(g: &MetricJet, torsion: &Array3<f64>) -> Result<Array3<f64>> {
    let defect = torsion_antisymmetry_defect(torsion);
    if defect > TORSION_SYMMETRY_TOL * max_abs3(torsion).max(1.0) {
        return Err(Error::TorsionNotAntisymmetric(defect));
    }
    Ok(raise_middle(g, &metric_connection_lower(g, &lower_middle(g, torsion))))
}

/// [`metric_connection`] with derivatives, from a torsion jet.
pub fn metric_connection_jet(g: &MetricJet, torsion: &ConnectionJet) -> Result<ConnectionJet> {
    let n = g.dim();
    let defect = torsion_antisymmetry_defect(&torsion.k);
    if defect > TORSION_SYMMETRY_TOL * max_abs3(&torsion.k).max(1.0) {
        return Err(Error::TorsionNotAntisymmetric(defect));
    }
    let tl = lower_middle(g, &torsion.k);
    // ∂_ρ T_{μνα} = ∂_ρ g_{νβ} T_μ{}^β{}_α + g_{νβ} ∂_ρ T_μ{}^β{}_α
    let dtl = Array4::from_shape_fn((n, n, n, n), |(r, mu, nu, al)| {
        (0..n)
            .map(|b| g.dg[[r, nu, b]] * torsion.k[[mu, b, al]] + g.g[[nu, b]] * torsion.dk[[r, mu, b, al]])
            .sum::<f64>()
    });
    let low = metric_connection_lower(g, &tl);
    let dch = christoffel_lower_derivative(g);
    let dlow = Array4::from_shape_fn((n, n, n, n), |(r, mu, nu, al)| {
        let d: f64 = dch[[r, mu, nu, al]];
        d + 0.5 * (dtl[[r, nu, mu, al]] + dtl[[r, nu, al, mu]] + dtl[[r, mu, nu, al]])
    });
    Ok(raise_middle_jet(g, &low, &dlow))
}

/// Canonical splitting of connection jets: `k[[λ, α, β]] = k_λ{}^α{}_β`
/// and `kjets[[λ, μ, α, β]] = k_{λμ}{}^α{}_β` (derivative index first).
/// Returns (ℛ, 𝒮) with ℛ + 𝒮 = 2 k_{λμ}{}^α{}_β.
pub fn jet_splitting(k: &Array3<f64>, kjets: &Array4<f64>) -> (Array4<f64>, Array4<f64>) {
    let n = k.dim().0;
    let mut r = Array4::zeros((n, n, n, n));
    let mut s = Array4::zeros((n, n, n, n));
    for la in 0..n {
        for mu in 0..n {
            for al in 0..n {
                for be in 0..n {
                    let mut quad = 0.0;
                    for ga in 0..n {
                        quad += k[[la, ga, be]] * k[[mu, al, ga]] - k[[mu, ga, be]] * k[[la, al, ga]];
                    }
                    let (a, b) = (kjets[[la, mu, al, be]], kjets[[mu, la, al, be]]);
                    r[[la, mu, al, be]] = a - b + quad;
                    s[[la, mu, al, be]] = a + b - quad;
                }
            }
        }
    }
    (r, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Signature;
    use crate::geometry::{ConnectionField, MetricField};
    use ndarray::Array3;

    fn sphere() -> MetricField {
        MetricField::from_fn(Signature::new(2, 0).unwrap(), |x| {
            let s = x[0].sin();
            vec![x[0].lift(1.0), x[0].lift(0.0), x[0].lift(0.0), &s * &s]
        })
    }

    #[test]
    fn flat_christoffel_vanishes() {
        let g = MetricField::flat(Signature::new(1, 3).unwrap())
            .jet_at(&[0.1, 0.2, 0.3, 0.4])
            .unwrap();
        assert_eq!(max_abs3(&christoffel_lower(&g)), 0.0);
    }

    #[test]
    fn sphere_christoffel_component() {
        // {_{φθφ}} = -½(∂_φ g_{θφ} + ∂_φ g_{θφ} - ∂_θ g_{φφ}) = sinθ cosθ
        let g = sphere().jet_at(&[std::f64::consts::FRAC_PI_4, 0.0]).unwrap();
        let ch = christoffel_lower(&g);
        assert!((ch[[1, 0, 1]] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn symmetric_connection_has_no_torsion() {
        let mut k = Array3::zeros((3, 3, 3));
        k[[0, 1, 2]] = 1.5;
        k[[2, 1, 0]] = 1.5;
        k[[1, 1, 1]] = -2.0;
        assert_eq!(max_abs3(&torsion(&ConnectionJet::constant(k))), 0.0);
    }

    #[test]
    fn torsion_direct_difference() {
        let mut k = Array3::zeros((2, 2, 2));
        k[[0, 1, 1]] = 3.0;
        k[[1, 1, 0]] = 1.0;
        let t = torsion(&ConnectionJet::constant(k));
        assert_eq!(t[[0, 1, 1]], 2.0);
        assert_eq!(t[[1, 1, 0]], -2.0);
        assert_eq!(torsion_antisymmetry_defect(&t), 0.0);
    }

    #[test]
    fn constant_connection_curvature_is_quadratic() {
        let mut k = Array3::zeros((2, 2, 2));
        k[[0, 0, 1]] = 1.0;
        k[[1, 1, 0]] = 2.0;
        let r = curvature(&ConnectionJet::constant(k.clone()));
        for la in 0..2 {
            for mu in 0..2 {
                for al in 0..2 {
                    for be in 0..2 {
                        let mut expected = 0.0;
                        for ga in 0..2 {
                            expected += k[[la, ga, be]] * k[[mu, al, ga]]
                                - k[[mu, ga, be]] * k[[la, al, ga]];
                        }
                        assert_eq!(r[[la, mu, al, be]], expected);
                    }
                }
            }
        }
    }

    #[test]
    fn metricity_identity_on_sphere() {
        let g = sphere().jet_at(&[0.9, 0.4]).unwrap();
        let ch = christoffel_lower(&g);
        for mu in 0..2 {
            for nu in 0..2 {
                for al in 0..2 {
                    let v = g.dg[[mu, nu, al]] + ch[[mu, nu, al]] + ch[[mu, al, nu]];
                    assert!(v.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn levi_civita_is_metric_and_torsion_free() {
        let g = sphere().jet_at(&[0.9, 0.4]).unwrap();
        let k = ConnectionField::LeviCivita(sphere()).jet_at(&[0.9, 0.4]).unwrap();
        assert!(max_abs3(&nonmetricity(&g, &k)) < 1e-15);
        assert!(max_abs3(&torsion(&k)) < 1e-15);
        assert!(max_abs3(&contorsion(&g, &k)) < 1e-15);
    }

    #[test]
    fn torsion_must_be_antisymmetric() {
        let g = sphere().jet_at(&[0.9, 0.4]).unwrap();
        let mut t = Array3::zeros((2, 2, 2));
        t[[0, 1, 1]] = 1.0;
        assert!(matches!(
            metric_connection(&g, &t),
            Err(Error::TorsionNotAntisymmetric(_))
        ));
    }

    #[test]
    fn sphere_scalar_curvature_is_minus_two() {
        let k = ConnectionField::LeviCivita(sphere()).jet_at(&[0.7, 0.0]).unwrap();
        let g = sphere().jet_at(&[0.7, 0.0]).unwrap();
        let r = curvature(&k);
        let mut scalar = 0.0;
        for mu in 0..2 {
            for be in 0..2 {
                for la in 0..2 {
                    scalar += g.ginv[[mu, be]] * r[[la, mu, la, be]];
                }
            }
        }
        assert!((scalar + 2.0).abs() < 1e-13, "{scalar}");
    }

    #[test]
    fn zero_connection_splitting() {
        let k = Array3::zeros((2, 2, 2));
        let mut kj = Array4::zeros((2, 2, 2, 2));
        kj[[0, 1, 0, 0]] = 1.0;
        kj[[1, 0, 0, 0]] = 1.0;
        let (r, s) = jet_splitting(&k, &kj);
        assert_eq!(max_abs4(&r), 0.0);
        assert_eq!(max_abs4(&(&r + &s - &(&kj * 2.0))), 0.0);
    }
}

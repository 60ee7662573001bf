use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Multivector, Signature};
use crate::{Error, Result};

/// Vectors with |η(v,v)| below this are treated as null.
pub const NULL_THRESHOLD: f64 = 1e-9;

/// Element of the Clifford group carried together with the unit vectors
/// whose product it is. The certificate makes inversion exact and decides
/// membership in Pin/Spin by its length parity.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    value: Multivector,
    certificate: Vec<Multivector>,
}

impl GroupElement {
    pub fn identity(sig: Signature) -> Self {
        Self {
            value: Multivector::one(sig),
            certificate: Vec::new(),
        }
    }

    /// Product `v_1 v_2 ⋯ v_r` of grade-1 vectors with η(v,v) = ±1.
    pub fn from_vectors(sig: Signature, vectors: Vec<Multivector>) -> Result<Self> {
        let mut value = Multivector::one(sig);
        for v in &vectors {
            if v.signature() != sig {
                return Err(Error::SignatureMismatch(
                    sig.m(),
                    sig.k(),
                    v.signature().m(),
                    v.signature().k(),
                ));
            }
            if !v.is_real() {
                return Err(Error::NotAVector);
            }
            let q = v.quadratic_form()?;
            if q.abs() < NULL_THRESHOLD {
                return Err(Error::NullVector(q.abs()));
            }
            if (q.abs() - 1.0).abs() > 1e-9 {
                return Err(Error::NotUnit(q));
            }
            value = &value * v;
        }
        Ok(Self {
            value,
            certificate: vectors,
        })
    }

    pub fn value(&self) -> &Multivector {
        &self.value
    }

    pub fn certificate(&self) -> &[Multivector] {
        &self.certificate
    }

    pub fn signature(&self) -> Signature {
        self.value.signature()
    }

    /// Even-length certificate: the element lies in Spin.
    pub fn is_spin(&self) -> bool {
        self.certificate.len() % 2 == 0
    }

    /// `v_r^{-1} ⋯ v_1^{-1}` with `v^{-1} = v / η(v,v)`.
    pub fn inverse(&self) -> Multivector {
        let sig = self.signature();
        self.certificate
            .iter()
            .rev()
            .fold(Multivector::one(sig), |acc, v| {
                let q = v.quadratic_form().expect("certificate holds vectors");
                &acc * &v.scale(1.0 / q)
            })
    }

    /// `-g`, obtained by flipping the first certificate vector (or, for the
    /// identity, by writing `-e` as a square of a unit vector pair).
    pub fn negated(&self) -> Self {
        let sig = self.signature();
        if let Some((first, rest)) = self.certificate.split_first() {
            let mut certificate = Vec::with_capacity(self.certificate.len());
            certificate.push(-first);
            certificate.extend(rest.iter().cloned());
            return Self {
                value: -&self.value,
                certificate,
            };
        }
        // -e = v v for η(v,v) = -1, or v1 v2 v1 v2 when all of η is positive.
        let vectors = if sig.k() > 0 {
            let v = Multivector::generator(sig, sig.n() - 1);
            vec![v.clone(), v]
        } else {
            let v1 = Multivector::generator(sig, 0);
            let v2 = Multivector::generator(sig, 1.min(sig.n() - 1));
            vec![v1.clone(), v2.clone(), v1, v2]
        };
        Self::from_vectors(sig, vectors).expect("unit generators")
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        let mut certificate = self.certificate.clone();
        certificate.extend(other.certificate.iter().cloned());
        Ok(Self {
            value: self.value.geometric_product(&other.value)?,
            certificate,
        })
    }
}

/// Adjoint action `a ↦ g a g^{-1}`.
pub fn adjoint_action(g: &GroupElement, a: &Multivector) -> Result<Multivector> {
    let left = g.value().geometric_product(a)?;
    left.geometric_product(&g.inverse())
}

/// Adjoint action by an arbitrary multivector, inverted numerically.
pub fn adjoint_action_by(g: &Multivector, a: &Multivector) -> Result<Multivector> {
    let inv = g.inverse()?;
    g.geometric_product(a)?.geometric_product(&inv)
}

/// Matrix of `v ↦ g v g^{-1}` on the grade-1 subspace; column `b` holds the
/// image of `v^{b+1}`.
///
/// Spin elements are accepted in every dimension. Odd elements are only
/// accepted for even n: for odd n the untwisted action of an odd element
/// is not a covering of O(m, n-m).
pub fn zeta_matrix(g: &GroupElement) -> Result<DMatrix<f64>> {
    let sig = g.signature();
    let n = sig.n();
    if !g.is_spin() && !sig.is_even() {
        return Err(Error::OddDimension(n));
    }
    let inv = g.inverse();
    let mut m = DMatrix::zeros(n, n);
    for b in 0..n {
        let image = g
            .value()
            .geometric_product(&Multivector::generator(sig, b))?
            .geometric_product(&inv)?;
        let scale = image.max_abs().max(1.0);
        let off_grade = (&image - &image.grade_project(1)).max_abs();
        let imag = image.terms().map(|(_, c)| c.im.abs()).fold(0.0, f64::max);
        if off_grade.max(imag) > 1e-9 * scale {
            return Err(Error::LeavesVectorSpace(off_grade.max(imag)));
        }
        for a in 0..n {
            m[(a, b)] = image.coeff(1 << a).re;
        }
    }
    Ok(m)
}

/// max |Mᵀ η M - η|.
pub fn orthogonality_defect(sig: &Signature, m: &DMatrix<f64>) -> f64 {
    let eta = sig.eta_matrix();
    (m.transpose() * &eta * m - eta).amax()
}

fn random_unit_vector(sig: Signature, rng: &mut impl Rng) -> Multivector {
    loop {
        let comps: Vec<f64> = (0..sig.n()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v = Multivector::vector(sig, &comps);
        let q = v.quadratic_form().expect("vector");
        // Near-null draws give huge boosts whose matrices lose all accuracy
        // to rounding, so only well-conditioned directions are kept.
        let euclid: f64 = comps.iter().map(|c| c * c).sum();
        if q.abs() < NULL_THRESHOLD.max(0.5 * euclid) {
            continue;
        }
        return v.scale(1.0 / q.abs().sqrt());
    }
}

/// Product of 2 or 4 seeded random unit vectors.
pub fn random_spin_element(sig: Signature, seed: u64) -> GroupElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_spin_element_with(sig, &mut rng)
}

pub fn random_spin_element_with(sig: Signature, rng: &mut impl Rng) -> GroupElement {
    let count = if rng.gen_bool(0.5) { 2 } else { 4 };
    loop {
        let vectors: Vec<Multivector> = (0..count).map(|_| random_unit_vector(sig, rng)).collect();
        // Normalisation can leave |η(v,v)| a few ulps from 1; from_vectors
        // accepts that, so a failure here only means a null draw slipped by.
        if let Ok(g) = GroupElement::from_vectors(sig, vectors) {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(m: usize, k: usize) -> Signature {
        Signature::new(m, k).unwrap()
    }

    #[test]
    fn identity_acts_trivially() {
        let s = sig(1, 3);
        let g = GroupElement::identity(s);
        let a = Multivector::vector(s, &[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(adjoint_action(&g, &a).unwrap(), a);
        assert_eq!(zeta_matrix(&g).unwrap(), DMatrix::identity(4, 4));
    }

    #[test]
    fn self_conjugation() {
        let s = sig(2, 0);
        let v = Multivector::generator(s, 0);
        let g = GroupElement::from_vectors(s, vec![v.clone()]).unwrap();
        assert_eq!(adjoint_action(&g, &v).unwrap(), v);
    }

    #[test]
    fn conjugating_orthogonal_generator_flips_it() {
        let s = sig(2, 0);
        let g = GroupElement::from_vectors(s, vec![Multivector::generator(s, 0)]).unwrap();
        let v2 = Multivector::generator(s, 1);
        assert_eq!(adjoint_action(&g, &v2).unwrap(), -&v2);
    }

    #[test]
    fn null_and_non_unit_vectors_rejected() {
        let s = sig(1, 1);
        let null = Multivector::vector(s, &[1.0, 1.0]);
        assert!(matches!(
            GroupElement::from_vectors(s, vec![null]),
            Err(Error::NullVector(_))
        ));
        let long = Multivector::vector(s, &[2.0, 0.0]);
        assert!(matches!(
            GroupElement::from_vectors(s, vec![long]),
            Err(Error::NotUnit(_))
        ));
    }

    #[test]
    fn adjoint_by_non_invertible_errors() {
        let s = sig(1, 1);
        let null = Multivector::vector(s, &[1.0, 1.0]);
        assert_eq!(
            adjoint_action_by(&null, &Multivector::one(s)),
            Err(Error::NotInvertible)
        );
    }

    #[test]
    fn random_spin_is_deterministic_and_even() {
        let s = sig(1, 3);
        let a = random_spin_element(s, 42);
        let b = random_spin_element(s, 42);
        assert_eq!(a, b);
        assert!(a.value().is_even());
        assert!(a.is_spin());
    }

    #[test]
    fn zeta_kernel_is_plus_minus_one() {
        let s = sig(1, 3);
        for seed in 0..10 {
            let g = random_spin_element(s, seed);
            assert_eq!(zeta_matrix(&g).unwrap(), zeta_matrix(&g.negated()).unwrap());
        }
        let id = GroupElement::identity(s);
        assert_eq!(id.negated().value(), &Multivector::scalar(s, -1.0));
        assert_eq!(zeta_matrix(&id.negated()).unwrap(), DMatrix::identity(4, 4));
    }

    #[test]
    fn odd_element_in_odd_dimension_rejected() {
        let s = sig(0, 3);
        let g = GroupElement::from_vectors(s, vec![Multivector::generator(s, 0)]).unwrap();
        assert_eq!(zeta_matrix(&g), Err(Error::OddDimension(3)));
    }

    #[test]
    fn rotation_in_three_dimensions() {
        let s = sig(0, 3);
        let g = random_spin_element(s, 7);
        let m = zeta_matrix(&g).unwrap();
        assert!(orthogonality_defect(&s, &m) < 1e-12);
        assert!((m.determinant() - 1.0).abs() < 1e-12);
    }
}

//! Complexification and minimal left ideals of ℂCl(n).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{Multivector, Signature};
use crate::{Error, Result};

const IDEMPOTENT_TOL: f64 = 1e-12;
const RANK_TOL: f64 = 1e-10;

/// Images of the generators of Cl(m, n-m) inside ℂCl(n), realised on the
/// Euclidean basis: `v^a ↦ e^a` for a ≤ m and `v^a ↦ i e^a` otherwise.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexBasis {
    pub source: Signature,
    pub target: Signature,
    pub images: Vec<Multivector>,
}

pub fn complexify_map(source: Signature) -> ComplexBasis {
    let target = Signature::euclidean(source.n()).expect("same dimension as a valid signature");
    let images = (0..source.n())
        .map(|a| {
            let e = Multivector::generator(target, a);
            if a < source.m() {
                e
            } else {
                e.scale(Complex64::i())
            }
        })
        .collect();
    ComplexBasis {
        source,
        target,
        images,
    }
}

impl ComplexBasis {
    /// Image of a multivector of the source algebra.
    pub fn map(&self, a: &Multivector) -> Multivector {
        let mut out = Multivector::zero(self.target);
        for (blade, c) in a.terms() {
            let mut term = Multivector::scalar(self.target, c);
            for i in 0..self.source.n() {
                if blade & (1 << i) != 0 {
                    term = &term * &self.images[i];
                }
            }
            out = &out + &term;
        }
        out
    }
}

pub fn is_hermitian_idempotent(p: &Multivector) -> bool {
    idempotent_defect(p) <= IDEMPOTENT_TOL && hermitian_defect(p) <= IDEMPOTENT_TOL
}

fn idempotent_defect(p: &Multivector) -> f64 {
    (&(p * p) - p).max_abs()
}

fn hermitian_defect(p: &Multivector) -> f64 {
    (&p.star() - p).max_abs()
}

/// Commuting Hermitian elements `s_j` with `s_j² = e`, one per disjoint
/// generator pair, plus the last generator when n is odd.
pub fn commuting_involutions(sig: Signature) -> Vec<Multivector> {
    let n = sig.n();
    let mut out = Vec::new();
    for j in 0..n / 2 {
        let (a, b) = (2 * j, 2 * j + 1);
        let bivector = &Multivector::generator(sig, a) * &Multivector::generator(sig, b);
        // (v^a v^b)² = -η^{aa} η^{bb}
        let square = -sig.eta(a) * sig.eta(b);
        out.push(if square > 0.0 {
            bivector
        } else {
            bivector.scale(Complex64::i())
        });
    }
    if n % 2 == 1 {
        let v = Multivector::generator(sig, n - 1);
        out.push(if sig.eta(n - 1) > 0.0 {
            v
        } else {
            v.scale(Complex64::i())
        });
    }
    out
}

/// Product of `½(e + s_j)` over [`commuting_involutions`]; generates a
/// minimal left ideal.
pub fn primitive_idempotent(sig: Signature) -> Multivector {
    let one = Multivector::one(sig);
    commuting_involutions(sig)
        .iter()
        .fold(one.clone(), |p, s| &p * &(&one + s).scale(0.5))
}

/// Left ideal ℂCl(n)·p with an orthonormal basis (w.r.t. the coefficient
/// inner product).
#[derive(Clone, Debug)]
pub struct LeftIdeal {
    pub generator: Multivector,
    pub basis: Vec<Multivector>,
    pub dimension: usize,
    pub minimal: bool,
}

pub fn minimal_left_ideal(p: &Multivector) -> Result<LeftIdeal> {
    let defect = idempotent_defect(p);
    if defect > IDEMPOTENT_TOL {
        return Err(Error::NotIdempotent(defect));
    }
    let defect = hermitian_defect(p);
    if defect > IDEMPOTENT_TOL {
        return Err(Error::NotHermitian(defect));
    }
    let sig = p.signature();
    let mut basis: Vec<DVector<Complex64>> = Vec::new();
    for blade in 0..sig.algebra_dim() as u32 {
        let w = &Multivector::blade(sig, blade, 1.0) * p;
        let mut v = w.to_dense();
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for q in &basis {
                let proj = q.dotc(&v);
                v -= q * proj;
            }
        }
        let norm = v.norm();
        if norm > RANK_TOL {
            basis.push(v / Complex64::new(norm, 0.0));
        }
    }
    let dimension = basis.len();
    Ok(LeftIdeal {
        generator: p.clone(),
        basis: basis
            .iter()
            .map(|v| Multivector::from_dense(sig, v))
            .collect(),
        dimension,
        minimal: dimension == 1 << (sig.n() / 2),
    })
}

impl LeftIdeal {
    /// Coordinates of `w` in the ideal basis and the norm of the part of `w`
    /// outside the ideal.
    pub fn coordinates(&self, w: &Multivector) -> (DVector<Complex64>, f64) {
        let mut v = w.to_dense();
        let mut coords = DVector::zeros(self.dimension);
        for (i, q) in self.basis.iter().enumerate() {
            let q = q.to_dense();
            let c = q.dotc(&v);
            coords[i] = c;
            v -= q * c;
        }
        (coords, v.norm())
    }

    /// Matrix of left multiplication by `a` restricted to the ideal.
    pub fn left_action(&self, a: &Multivector) -> DMatrix<Complex64> {
        let d = self.dimension;
        let mut m = DMatrix::zeros(d, d);
        for (j, w) in self.basis.iter().enumerate() {
            let (coords, _) = self.coordinates(&(a * w));
            m.set_column(j, &coords);
        }
        m
    }

    /// Largest residual of `b · w` outside the ideal over all basis blades
    /// `b` and basis elements `w`.
    pub fn closure_defect(&self) -> f64 {
        let sig = self.generator.signature();
        let mut worst: f64 = 0.0;
        for blade in 0..sig.algebra_dim() as u32 {
            let b = Multivector::blade(sig, blade, 1.0);
            for w in &self.basis {
                worst = worst.max(self.coordinates(&(&b * w)).1);
            }
        }
        worst
    }
}

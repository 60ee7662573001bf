use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::Signature;
use crate::{Error, Result};

/// Blade index: bit `a` set means generator `v^{a+1}` is a factor.
pub type Blade = u32;

pub fn grade(blade: Blade) -> usize {
    blade.count_ones() as usize
}

/// Sign picked up by moving the generators of `b` past those of `a` into
/// canonical (increasing) order.
pub fn reorder_sign(a: Blade, b: Blade) -> f64 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Product of two basis blades: `(sign, blade)`.
pub fn blade_product(sig: &Signature, a: Blade, b: Blade) -> (f64, Blade) {
    let mut sign = reorder_sign(a, b);
    let mut common = a & b;
    while common != 0 {
        let i = common.trailing_zeros() as usize;
        sign *= sig.eta(i);
        common &= common - 1;
    }
    (sign, a ^ b)
}

/// Element of Cl(m, n-m) or its complexification, stored sparsely by blade.
///
/// Exact zeros are never stored. `real_only` is set whenever every stored
/// coefficient has zero imaginary part.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector {
    sig: Signature,
    coeffs: BTreeMap<Blade, Complex64>,
    real_only: bool,
}

impl Multivector {
    fn from_map(sig: Signature, mut coeffs: BTreeMap<Blade, Complex64>) -> Self {
        coeffs.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        let real_only = coeffs.values().all(|c| c.im == 0.0);
        Self {
            sig,
            coeffs,
            real_only,
        }
    }

    pub fn zero(sig: Signature) -> Self {
        Self::from_map(sig, BTreeMap::new())
    }

    pub fn scalar(sig: Signature, c: impl Into<Complex64>) -> Self {
        Self::blade(sig, 0, c)
    }

    /// The unit `e`.
    pub fn one(sig: Signature) -> Self {
        Self::scalar(sig, 1.0)
    }

    pub fn blade(sig: Signature, blade: Blade, c: impl Into<Complex64>) -> Self {
        assert!(
            (blade as usize) < sig.algebra_dim(),
            "blade {blade:#b} outside algebra of dimension {}",
            sig.n()
        );
        let mut coeffs = BTreeMap::new();
        coeffs.insert(blade, c.into());
        Self::from_map(sig, coeffs)
    }

    /// Generator `v^{a+1}` for a zero-based index `a`.
    pub fn generator(sig: Signature, a: usize) -> Self {
        Self::blade(sig, 1 << a, 1.0)
    }

    /// Grade-1 element with the given real components.
    pub fn vector(sig: Signature, components: &[f64]) -> Self {
        assert_eq!(components.len(), sig.n());
        let coeffs = components
            .iter()
            .enumerate()
            .map(|(a, &c)| (1 << a, Complex64::new(c, 0.0)))
            .collect();
        Self::from_map(sig, coeffs)
    }

    pub fn from_terms(sig: Signature, terms: impl IntoIterator<Item = (Blade, Complex64)>) -> Self {
        let mut coeffs: BTreeMap<Blade, Complex64> = BTreeMap::new();
        for (b, c) in terms {
            assert!((b as usize) < sig.algebra_dim());
            *coeffs.entry(b).or_default() += c;
        }
        Self::from_map(sig, coeffs)
    }

    /// Dense coefficient vector of length 2^n, indexed by blade.
    pub fn from_dense(sig: Signature, dense: &DVector<Complex64>) -> Self {
        assert_eq!(dense.len(), sig.algebra_dim());
        Self::from_terms(sig, dense.iter().enumerate().map(|(b, c)| (b as Blade, *c)))
    }

    pub fn to_dense(&self) -> DVector<Complex64> {
        let mut v = DVector::zeros(self.sig.algebra_dim());
        for (&b, &c) in &self.coeffs {
            v[b as usize] = c;
        }
        v
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn is_real(&self) -> bool {
        self.real_only
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, blade: Blade) -> Complex64 {
        self.coeffs.get(&blade).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Blade, Complex64)> + '_ {
        self.coeffs.iter().map(|(&b, &c)| (b, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// True when every coefficient has integer real and imaginary parts, so
    /// products stay exact in floating point.
    pub fn is_integral(&self) -> bool {
        self.coeffs
            .values()
            .all(|c| c.re.fract() == 0.0 && c.im.fract() == 0.0)
    }

    /// Largest coefficient magnitude.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.sig == other.sig && (self - other).max_abs() <= tol
    }

    fn map_coeffs(&self, mut f: impl FnMut(Blade, Complex64) -> Complex64) -> Self {
        Self::from_map(
            self.sig,
            self.coeffs.iter().map(|(&b, &c)| (b, f(b, c))).collect(),
        )
    }

    pub fn scale(&self, s: impl Into<Complex64>) -> Self {
        let s = s.into();
        self.map_coeffs(|_, c| c * s)
    }

    fn check_sig(&self, other: &Self) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(
                self.sig.m(),
                self.sig.k(),
                other.sig.m(),
                other.sig.k(),
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_sig(other)?;
        let mut coeffs = self.coeffs.clone();
        for (&b, &c) in &other.coeffs {
            *coeffs.entry(b).or_default() += c;
        }
        Ok(Self::from_map(self.sig, coeffs))
    }

    /// Geometric product.
    pub fn geometric_product(&self, other: &Self) -> Result<Self> {
        self.check_sig(other)?;
        let mut coeffs: BTreeMap<Blade, Complex64> = BTreeMap::new();
        for (&a, &ca) in &self.coeffs {
            for (&b, &cb) in &other.coeffs {
                let (sign, blade) = blade_product(&self.sig, a, b);
                *coeffs.entry(blade).or_default() += ca * cb * sign;
            }
        }
        Ok(Self::from_map(self.sig, coeffs))
    }

    pub fn grade_project(&self, r: usize) -> Self {
        Self::from_map(
            self.sig,
            self.coeffs
                .iter()
                .filter(|(&b, _)| grade(b) == r)
                .map(|(&b, &c)| (b, c))
                .collect(),
        )
    }

    pub fn even_part(&self) -> Self {
        Self::from_map(
            self.sig,
            self.coeffs
                .iter()
                .filter(|(&b, _)| grade(b) % 2 == 0)
                .map(|(&b, &c)| (b, c))
                .collect(),
        )
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.keys().all(|&b| grade(b) % 2 == 0)
    }

    /// Reversion: a blade of grade r picks up (-1)^{r(r-1)/2}.
    pub fn reverse(&self) -> Self {
        self.map_coeffs(|b, c| {
            let r = grade(b);
            if (r * r.saturating_sub(1) / 2) % 2 == 0 {
                c
            } else {
                -c
            }
        })
    }

    pub fn conj(&self) -> Self {
        self.map_coeffs(|_, c| c.conj())
    }

    /// Hermitian involution: reversion, complex conjugation and a sign for
    /// every generator with η^{aa} = -1 in the blade. Generators with
    /// η^{aa} = +1 are self-adjoint, the others anti-self-adjoint.
    pub fn star(&self) -> Self {
        let negative_mask: Blade = ((1u32 << self.sig.n()) - 1) & !((1u32 << self.sig.m()) - 1);
        self.reverse().map_coeffs(|b, c| {
            let flips = (b & negative_mask).count_ones();
            let c = c.conj();
            if flips % 2 == 0 {
                c
            } else {
                -c
            }
        })
    }

    /// η(v, v) for a grade-1 element with real components.
    pub fn quadratic_form(&self) -> Result<f64> {
        let mut q = 0.0;
        for (&b, &c) in &self.coeffs {
            if grade(b) != 1 {
                return Err(Error::NotAVector);
            }
            q += self.sig.eta(b.trailing_zeros() as usize) * c.re * c.re;
        }
        Ok(q)
    }

    /// Matrix of `x ↦ self · x` on the dense blade basis.
    pub fn left_multiplication_matrix(&self) -> DMatrix<Complex64> {
        let dim = self.sig.algebra_dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (&a, &ca) in &self.coeffs {
            for col in 0..dim as Blade {
                let (sign, row) = blade_product(&self.sig, a, col);
                m[(row as usize, col as usize)] += ca * sign;
            }
        }
        m
    }

    /// Two-sided inverse, found by solving `self · x = e`.
    pub fn inverse(&self) -> Result<Self> {
        let lm = self.left_multiplication_matrix();
        let mut rhs = DVector::zeros(self.sig.algebra_dim());
        rhs[0] = Complex64::new(1.0, 0.0);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let x = lm.lu().solve(&rhs).ok_or(Error::NotInvertible)?;
        let inv = Self::from_dense(self.sig, &x);
        let check = self.geometric_product(&inv)?;
        if !check.approx_eq(&Self::one(self.sig), 1e-9 * scale.max(1.0) * inv.max_abs().max(1.0)) {
            return Err(Error::NotInvertible);
        }
        Ok(inv)
    }

    /// Exponential by scaling and squaring of a truncated Taylor series.
    pub fn exp(&self) -> Self {
        let norm: f64 = self.coeffs.values().map(|c| c.norm()).sum();
        let mut squarings = 0;
        let mut s = norm;
        while s > 0.25 {
            s *= 0.5;
            squarings += 1;
        }
        let x = self.scale(0.5f64.powi(squarings));
        let mut term = Self::one(self.sig);
        let mut sum = term.clone();
        for k in 1..=24 {
            term = (&term * &x).scale(1.0 / k as f64);
            sum = &sum + &term;
        }
        for _ in 0..squarings {
            sum = &sum * &sum;
        }
        sum
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, (&b, &c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({c})")?;
            }
            if b == 0 {
                write!(f, "e")?;
            }
            for a in 0..self.sig.n() {
                if b & (1 << a) != 0 {
                    write!(f, "v{}", a + 1)?;
                }
            }
        }
        Ok(())
    }
}

impl Add for &Multivector {
    type Output = Multivector;

    /// # Panics
    /// On signature mismatch; use [`Multivector::try_add`] to handle it.
    fn add(self, rhs: &Multivector) -> Multivector {
        self.try_add(rhs).expect("multivector signature mismatch")
    }
}

impl Sub for &Multivector {
    type Output = Multivector;

    fn sub(self, rhs: &Multivector) -> Multivector {
        self.try_add(&-rhs).expect("multivector signature mismatch")
    }
}

impl Neg for &Multivector {
    type Output = Multivector;

    fn neg(self) -> Multivector {
        self.map_coeffs(|_, c| -c)
    }
}

impl Mul for &Multivector {
    type Output = Multivector;

    /// # Panics
    /// On signature mismatch; use [`Multivector::geometric_product`] to
    /// handle it.
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.geometric_product(rhs)
            .expect("multivector signature mismatch")
    }
}

//! Order-2 jets of scalar functions of n coordinates.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Value, gradient and Hessian of a function at a point, propagated exactly
/// (to rounding) by the chain rule. The Hessian is kept exactly symmetric.
#[derive(Clone, PartialEq)]
pub struct Jet2 {
    value: f64,
    grad: Vec<f64>,
    // row-major n×n
    hess: Vec<f64>,
}

impl fmt::Debug for Jet2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Jet2")
            .field("value", &self.value)
            .field("grad", &self.grad)
            .field("hess", &self.hess)
            .finish()
    }
}

impl Jet2 {
    pub fn constant(n: usize, value: f64) -> Self {
        Self {
            value,
            grad: vec![0.0; n],
            hess: vec![0.0; n * n],
        }
    }

    /// The coordinate function x^i with value `value`.
    pub fn variable(n: usize, i: usize, value: f64) -> Self {
        let mut j = Self::constant(n, value);
        j.grad[i] = 1.0;
        j
    }

    /// Seeds for all coordinates at the point `x`.
    pub fn variables(x: &[f64]) -> Vec<Self> {
        x.iter()
            .enumerate()
            .map(|(i, &v)| Self::variable(x.len(), i, v))
            .collect()
    }

    /// Builds a jet from explicit parts; the Hessian is symmetrised.
    pub fn from_parts(value: f64, grad: Vec<f64>, hess: Vec<f64>) -> Self {
        let n = grad.len();
        assert_eq!(hess.len(), n * n, "Hessian must be n×n");
        let mut j = Self { value, grad, hess };
        for i in 0..n {
            for k in (i + 1)..n {
                let avg = 0.5 * (j.hess[i * n + k] + j.hess[k * n + i]);
                j.hess[i * n + k] = avg;
                j.hess[k * n + i] = avg;
            }
        }
        j
    }

    pub fn dim(&self) -> usize {
        self.grad.len()
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn grad(&self) -> &[f64] {
        &self.grad
    }

    pub fn hess(&self, i: usize, k: usize) -> f64 {
        self.hess[i * self.dim() + k]
    }

    /// Same dimension as `self`, constant value.
    pub fn lift(&self, c: f64) -> Self {
        Self::constant(self.dim(), c)
    }

    /// f(self) given f, f', f'' at the value.
    fn chain(&self, f0: f64, f1: f64, f2: f64) -> Self {
        let n = self.dim();
        let grad = self.grad.iter().map(|g| f1 * g).collect();
        let mut hess = vec![0.0; n * n];
        for i in 0..n {
            for k in i..n {
                let h = f1 * self.hess[i * n + k] + f2 * self.grad[i] * self.grad[k];
                hess[i * n + k] = h;
                hess[k * n + i] = h;
            }
        }
        Self {
            value: f0,
            grad,
            hess,
        }
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(s, c, -s)
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value.sin_cos();
        self.chain(c, -s, -c)
    }

    pub fn tan(&self) -> Self {
        let t = self.value.tan();
        let sec2 = 1.0 + t * t;
        self.chain(t, sec2, 2.0 * t * sec2)
    }

    pub fn exp(&self) -> Self {
        let e = self.value.exp();
        self.chain(e, e, e)
    }

    pub fn ln(&self) -> Self {
        let x = self.value;
        self.chain(x.ln(), 1.0 / x, -1.0 / (x * x))
    }

    pub fn sqrt(&self) -> Self {
        let r = self.value.sqrt();
        self.chain(r, 0.5 / r, -0.25 / (r * self.value))
    }

    pub fn sinh(&self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(s, c, s)
    }

    pub fn cosh(&self) -> Self {
        let (s, c) = (self.value.sinh(), self.value.cosh());
        self.chain(c, s, c)
    }

    pub fn recip(&self) -> Self {
        let x = self.value;
        self.chain(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }

    /// Integer power by repeated multiplication (exact chain rule without
    /// calling `powf`).
    pub fn powi(&self, e: i32) -> Self {
        let mut base = if e < 0 { self.recip() } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.lift(1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn powf(&self, e: f64) -> Self {
        let x = self.value;
        self.chain(x.powf(e), e * x.powf(e - 1.0), e * (e - 1.0) * x.powf(e - 2.0))
    }
}

/// Scalar types the expression evaluator and generic linear algebra run
/// over: plain `f64` and [`Jet2`].
pub trait Real:
    Clone
    + fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// A constant compatible with `self` (same jet dimension).
    fn lift(&self, c: f64) -> Self;
    fn val(&self) -> f64;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn tan(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn sinh(&self) -> Self;
    fn cosh(&self) -> Self;
    fn powi(&self, e: i32) -> Self;
    fn powf(&self, e: f64) -> Self;
}

impl Real for f64 {
    fn lift(&self, c: f64) -> Self {
        c
    }
    fn val(&self) -> f64 {
        *self
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn tan(&self) -> Self {
        f64::tan(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn sinh(&self) -> Self {
        f64::sinh(*self)
    }
    fn cosh(&self) -> Self {
        f64::cosh(*self)
    }
    fn powi(&self, e: i32) -> Self {
        f64::powi(*self, e)
    }
    fn powf(&self, e: f64) -> Self {
        f64::powf(*self, e)
    }
}

impl Real for Jet2 {
    fn lift(&self, c: f64) -> Self {
        Jet2::lift(self, c)
    }
    fn val(&self) -> f64 {
        self.value
    }
    fn sin(&self) -> Self {
        Jet2::sin(self)
    }
    fn cos(&self) -> Self {
        Jet2::cos(self)
    }
    fn tan(&self) -> Self {
        Jet2::tan(self)
    }
    fn exp(&self) -> Self {
        Jet2::exp(self)
    }
    fn ln(&self) -> Self {
        Jet2::ln(self)
    }
    fn sqrt(&self) -> Self {
        Jet2::sqrt(self)
    }
    fn sinh(&self) -> Self {
        Jet2::sinh(self)
    }
    fn cosh(&self) -> Self {
        Jet2::cosh(self)
    }
    fn powi(&self, e: i32) -> Self {
        Jet2::powi(self, e)
    }
    fn powf(&self, e: f64) -> Self {
        Jet2::powf(self, e)
    }
}

impl Add for &Jet2 {
    type Output = Jet2;
    fn add(self, rhs: &Jet2) -> Jet2 {
        debug_assert_eq!(self.dim(), rhs.dim());
        Jet2 {
            value: self.value + rhs.value,
            grad: self.grad.iter().zip(&rhs.grad).map(|(a, b)| a + b).collect(),
            hess: self.hess.iter().zip(&rhs.hess).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Jet2 {
    type Output = Jet2;
    fn sub(self, rhs: &Jet2) -> Jet2 {
        debug_assert_eq!(self.dim(), rhs.dim());
        Jet2 {
            value: self.value - rhs.value,
            grad: self.grad.iter().zip(&rhs.grad).map(|(a, b)| a - b).collect(),
            hess: self.hess.iter().zip(&rhs.hess).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Jet2 {
    type Output = Jet2;
    fn mul(self, rhs: &Jet2) -> Jet2 {
        let n = self.dim();
        debug_assert_eq!(n, rhs.dim());
        let (a, b) = (self.value, rhs.value);
        let grad = (0..n).map(|i| a * rhs.grad[i] + b * self.grad[i]).collect();
        let mut hess = vec![0.0; n * n];
        for i in 0..n {
            for k in i..n {
                let h = a * rhs.hess[i * n + k]
                    + b * self.hess[i * n + k]
                    + (self.grad[i] * rhs.grad[k] + rhs.grad[i] * self.grad[k]);
                hess[i * n + k] = h;
                hess[k * n + i] = h;
            }
        }
        Jet2 {
            value: a * b,
            grad,
            hess,
        }
    }
}

impl Div for &Jet2 {
    type Output = Jet2;
    fn div(self, rhs: &Jet2) -> Jet2 {
        self * &rhs.recip()
    }
}

impl Neg for &Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2 {
            value: -self.value,
            grad: self.grad.iter().map(|g| -g).collect(),
            hess: self.hess.iter().map(|h| -h).collect(),
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: Jet2) -> Jet2 {
                (&self).$m(&rhs)
            }
        }
        impl $tr<f64> for &Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: f64) -> Jet2 {
                self.$m(&self.lift(rhs))
            }
        }
        impl $tr<f64> for Jet2 {
            type Output = Jet2;
            fn $m(self, rhs: f64) -> Jet2 {
                (&self).$m(&self.lift(rhs))
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn composite<T: Real>(x: &T, y: &T, z: &T) -> T {
        let a = x.clone() * y.sin() + z.exp() / (x.clone() * x.clone() + x.lift(1.0));
        let b = (y.clone() * z.clone() + x.lift(2.0)).sqrt() - x.cosh() * z.tan();
        a * b.clone() + b.powi(2) - y.sinh() * (x.lift(3.0) + z.clone()).ln()
    }

    fn at(x: &[f64]) -> f64 {
        composite(&x[0], &x[1], &x[2])
    }

    #[test]
    fn product_rule_simple() {
        let v = Jet2::variables(&[2.0, 3.0]);
        let p = &v[0] * &v[1];
        assert_eq!(p.value(), 6.0);
        assert_eq!(p.grad(), &[3.0, 2.0]);
        assert_eq!(p.hess(0, 1), 1.0);
        assert_eq!(p.hess(0, 0), 0.0);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let x = Jet2::variable(1, 0, 1.7);
        let p = x.powi(3);
        assert!((p.value() - 1.7f64.powi(3)).abs() < 1e-14);
        assert!((p.grad()[0] - 3.0 * 1.7f64.powi(2)).abs() < 1e-13);
        assert!((p.hess(0, 0) - 6.0 * 1.7).abs() < 1e-13);
        let q = x.powi(-2);
        assert!((q.grad()[0] + 2.0 / 1.7f64.powi(3)).abs() < 1e-13);
    }

    proptest! {
        #[test]
        fn jets_match_central_differences(
            x in 0.2f64..1.5, y in -1.0f64..1.0, z in -0.6f64..0.6,
        ) {
            let p = [x, y, z];
            let vars = Jet2::variables(&p);
            let j = composite(&vars[0], &vars[1], &vars[2]);
            prop_assert!((j.value() - at(&p)).abs() <= 1e-14 * at(&p).abs().max(1.0));
            let h = 1e-4;
            for i in 0..3 {
                let mut pp = p; pp[i] += h;
                let mut pm = p; pm[i] -= h;
                let fd = (at(&pp) - at(&pm)) / (2.0 * h);
                let g = j.grad()[i];
                prop_assert!((fd - g).abs() <= 1e-6 * g.abs().max(1.0), "grad {i}: {fd} vs {g}");
                for k in 0..3 {
                    let shift = |di: f64, dk: f64| {
                        let mut q = p; q[i] += di; q[k] += dk; at(&q)
                    };
                    let fd2 = (shift(h, h) - shift(h, -h) - shift(-h, h) + shift(-h, -h)) / (4.0 * h * h);
                    let hv = j.hess(i, k);
                    prop_assert!((fd2 - hv).abs() <= 1e-6 * hv.abs().max(1.0),
                        "hess {i}{k}: {fd2} vs {hv}");
                    prop_assert_eq!(j.hess(i, k), j.hess(k, i));
                }
            }
        }
    }
}

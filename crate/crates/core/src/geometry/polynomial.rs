use rand::Rng;

use super::{ConnectionField, MetricField, Real};
use crate::clifford::Signature;

/// Polynomial in n variables, stored as (coefficient, exponents) terms.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: Vec<(f64, Vec<u32>)>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: Vec::new() }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self {
            n,
            terms: vec![(c, vec![0; n])],
        }
    }

    pub fn from_terms(n: usize, terms: Vec<(f64, Vec<u32>)>) -> Self {
        assert!(terms.iter().all(|(_, e)| e.len() == n), "exponent length");
        Self { n, terms }
    }

    /// Random polynomial of total degree ≤ `degree` with `count` terms and
    /// coefficients uniform in (-scale, scale).
    pub fn random(n: usize, degree: u32, count: usize, scale: f64, rng: &mut impl Rng) -> Self {
        let terms = (0..count)
            .map(|_| {
                let mut exps = vec![0u32; n];
                let total = rng.gen_range(0..=degree);
                for _ in 0..total {
                    exps[rng.gen_range(0..n)] += 1;
                }
                (rng.gen_range(-scale..scale), exps)
            })
            .collect();
        Self { n, terms }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(f64, Vec<u32>)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(_, e)| e.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn derivative(&self, i: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(_, e)| e[i] > 0)
            .map(|(c, e)| {
                let mut e = e.clone();
                let k = e[i];
                e[i] -= 1;
                (c * k as f64, e)
            })
            .collect();
        Self { n: self.n, terms }
    }

    pub fn eval<R: Real>(&self, x: &[R]) -> R {
        let mut acc = x[0].lift(0.0);
        for (c, e) in &self.terms {
            let mut t = x[0].lift(*c);
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = t * xi.powi(k as i32);
                }
            }
            acc = acc + t;
        }
        acc
    }
}

/// η + P(x) with P symmetric, entries random quadratics with `count`
/// terms and coefficients below `scale`. For points in [-1, 1]ⁿ and
/// `scale · count · n < 1` the signature of η is kept.
pub fn random_polynomial_metric(sig: Signature, count: usize, scale: f64, rng: &mut impl Rng) -> MetricField {
    let n = sig.n();
    let polys: Vec<Polynomial> = (0..n * n)
        .map(|_| Polynomial::random(n, 2, count, scale, rng))
        .collect();
    MetricField::from_fn(sig, move |x| {
        (0..n * n)
            .map(|i| {
                let (r, c) = (i / n, i % n);
                let p = &polys[r.min(c) * n + r.max(c)];
                p.eval(x) + x[0].lift(sig.eta_ab(r, c))
            })
            .collect()
    })
}

/// Connection with every K_λ{}^μ{}_ν an independent random polynomial.
pub fn random_polynomial_connection(
    n: usize,
    degree: u32,
    count: usize,
    scale: f64,
    rng: &mut impl Rng,
) -> ConnectionField {
    let polys: Vec<Polynomial> = (0..n * n * n)
        .map(|_| Polynomial::random(n, degree, count, scale, rng))
        .collect();
    ConnectionField::from_fn(n, move |x| polys.iter().map(|p| p.eval(x)).collect())
}

/// Uniform point in the box [lo, hi]ⁿ.
pub fn random_point(n: usize, lo: f64, hi: f64, rng: &mut impl Rng) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(lo..hi)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Jet2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn derivative_and_eval() {
        // 3 x0² x1 - x1 + 2
        let p = Polynomial::from_terms(
            2,
            vec![(3.0, vec![2, 1]), (-1.0, vec![0, 1]), (2.0, vec![0, 0])],
        );
        assert_eq!(p.eval(&[2.0, 3.0]), 36.0 - 3.0 + 2.0);
        assert_eq!(p.derivative(0).eval(&[2.0, 3.0]), 36.0);
        assert_eq!(p.derivative(1).eval(&[2.0, 3.0]), 11.0);
        let j = p.eval(&Jet2::variables(&[2.0, 3.0]));
        assert_eq!(j.grad(), &[36.0, 11.0]);
        assert_eq!(j.hess(0, 1), p.derivative(0).derivative(1).eval(&[2.0, 3.0]));
        assert_eq!(p.degree(), 3);
    }

    #[test]
    fn random_metric_keeps_signature() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sig = Signature::new(1, 3).unwrap();
        for _ in 0..20 {
            let g = random_polynomial_metric(sig, 2, 0.05, &mut rng);
            let x = random_point(4, -1.0, 1.0, &mut rng);
            assert!(g.jet_at(&x).is_ok());
        }
    }
}

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest supported dimension of the generating space.
pub const MAX_DIM: usize = 8;

/// Diagonal pseudo-Euclidean metric with `m` entries `+1` followed by `k`
/// entries `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    m: usize,
    k: usize,
}

impl Signature {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        let n = m + k;
        if n == 0 {
            return Err(Error::InvalidSignature("dimension must be at least 1".into()));
        }
        if n > MAX_DIM {
            return Err(Error::InvalidSignature(format!(
                "dimension {n} exceeds the supported maximum {MAX_DIM}"
            )));
        }
        Ok(Self { m, k })
    }

    /// Euclidean signature `(n, 0)`, the real form used for ℂCl(n).
    pub fn euclidean(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.m + self.k
    }

    /// Diagonal entry η^{aa} for a zero-based generator index.
    pub fn eta(&self, a: usize) -> f64 {
        debug_assert!(a < self.n());
        if a < self.m {
            1.0
        } else {
            -1.0
        }
    }

    /// η^{ab}; the inverse metric has the same diagonal.
    pub fn eta_ab(&self, a: usize, b: usize) -> f64 {
        if a == b {
            self.eta(a)
        } else {
            0.0
        }
    }

    pub fn eta_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n(), self.n(), |a, b| self.eta_ab(a, b))
    }

    pub fn is_even(&self) -> bool {
        self.n() % 2 == 0
    }

    /// Dimension of the algebra, 2^n.
    pub fn algebra_dim(&self) -> usize {
        1 << self.n()
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.m, self.k)
    }
}

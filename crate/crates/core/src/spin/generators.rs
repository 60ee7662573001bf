use nalgebra::DMatrix;

use super::GammaRep;
use crate::clifford::Signature;
use crate::linalg::{c, commutator, max_abs, CMatrix};

/// Spin generators I_b{}^a = ¼(γ_b γ^a - γ^a γ_b) on spinor space, indexed
/// `[b][a]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinGenerators {
    signature: Signature,
    generators: Vec<Vec<CMatrix>>,
}

pub fn spin_generators(rep: &GammaRep) -> SpinGenerators {
    let n = rep.signature().n();
    let generators = (0..n)
        .map(|b| {
            let gb = rep.lowered(b);
            (0..n)
                .map(|a| {
                    let ga = &rep.gammas()[a];
                    (&gb * ga - ga * &gb) * c(0.25, 0.0)
                })
                .collect()
        })
        .collect();
    SpinGenerators {
        signature: rep.signature(),
        generators,
    }
}

impl SpinGenerators {
    pub fn signature(&self) -> Signature {
        self.signature
    }

    /// I_b{}^a.
    pub fn get(&self, b: usize, a: usize) -> &CMatrix {
        &self.generators[b][a]
    }

    /// I_{ba} = I_b{}^c η_{ca}.
    pub fn lowered(&self, b: usize, a: usize) -> CMatrix {
        &self.generators[b][a] * c(self.signature.eta(a), 0.0)
    }

    pub fn dim(&self) -> usize {
        self.generators[0][0].nrows()
    }

    /// max |I_{ba} + I_{ab}|.
    pub fn antisymmetry_defect(&self) -> f64 {
        let n = self.signature.n();
        let mut worst: f64 = 0.0;
        for b in 0..n {
            for a in 0..n {
                worst = worst.max(max_abs(&(self.lowered(b, a) + self.lowered(a, b))));
            }
        }
        worst
    }
}

/// Vector action of the so(m, n-m) generator L_b{}^a on R^n:
/// (L_b{}^a)^c{}_d = η^{ac} η_{bd} - δ^c_b δ^a_d.
pub fn so_generator(sig: &Signature, b: usize, a: usize) -> DMatrix<f64> {
    let n = sig.n();
    DMatrix::from_fn(n, n, |row, col| {
        let mut v = sig.eta_ab(a, row) * sig.eta_ab(b, col);
        if row == b && col == a {
            v -= 1.0;
        }
        v
    })
}

/// max over b, a, c of |[I_b{}^a, γ^c] - (L_b{}^a)^c{}_d γ^d|.
pub fn vector_action_defect(rep: &GammaRep, gens: &SpinGenerators) -> f64 {
    let sig = rep.signature();
    let n = sig.n();
    let mut worst: f64 = 0.0;
    for b in 0..n {
        for a in 0..n {
            let l = so_generator(&sig, b, a);
            for cc in 0..n {
                let lhs = commutator(gens.get(b, a), &rep.gammas()[cc]);
                let mut rhs = CMatrix::zeros(rep.dim(), rep.dim());
                for d in 0..n {
                    rhs += &rep.gammas()[d] * c(l[(cc, d)], 0.0);
                }
                worst = worst.max(max_abs(&(lhs - rhs)));
            }
        }
    }
    worst
}

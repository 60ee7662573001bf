use maggeo_core::clifford::Signature;
use maggeo_core::linalg::{c, CMatrix};
use maggeo_core::spin::{gamma_matrices, intertwiner_space, spin_generators, vector_action_defect};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn every_even_signature_up_to_eight() {
    for n in [2, 4, 6, 8] {
        for k in 0..=n {
            let sig = Signature::new(n - k, k).unwrap();
            let rep = gamma_matrices(sig).unwrap();
            assert_eq!(rep.dim(), 1 << (n / 2));
            assert!(rep.clifford_defect() < 1e-12, "{sig}");
            if n <= 6 {
                assert!(vector_action_defect(&rep, &spin_generators(&rep)) < 1e-12, "{sig}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// A conjugated copy of the γ-matrices is equivalent, and the
    /// equivalence is unique up to scale.
    #[test]
    fn conjugate_representation(k in 0usize..=4, seed in any::<u64>()) {
        let sig = Signature::new(4 - k, k).unwrap();
        let rep = gamma_matrices(sig).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = CMatrix::from_fn(4, 4, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        prop_assume!(p.determinant().norm() > 1e-2);
        let pinv = p.clone().try_inverse().unwrap();
        let conj: Vec<CMatrix> = rep.gammas().iter().map(|g| &p * g * &pinv).collect();
        let space = intertwiner_space(rep.gammas(), &conj).unwrap();
        prop_assert_eq!(space.dimension, 1);
        prop_assert!(space.invertible_element().is_some());
    }
}

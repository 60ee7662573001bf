use maggeo_core::clifford::{random_spin_element, zeta_matrix, Multivector, Signature};
use num_complex::Complex64;
use proptest::prelude::*;

fn signature() -> impl Strategy<Value = Signature> {
    (1usize..=5)
        .prop_flat_map(|n| (Just(n), 0..=n))
        .prop_map(|(n, k)| Signature::new(n - k, k).unwrap())
}

fn multivector(sig: Signature) -> impl Strategy<Value = Multivector> {
    let dim = 1usize << sig.n();
    prop::collection::vec(-2.0f64..2.0, dim).prop_map(move |c| {
        Multivector::from_terms(
            sig,
            c.into_iter().enumerate().map(|(b, v)| (b as u32, Complex64::new(v, 0.0))),
        )
    })
}

fn triple() -> impl Strategy<Value = (Multivector, Multivector, Multivector)> {
    signature().prop_flat_map(|s| (multivector(s), multivector(s), multivector(s)))
}

proptest! {
    #[test]
    fn product_is_associative((a, b, c) in triple()) {
        let left = &(&a * &b) * &c;
        let right = &a * &(&b * &c);
        prop_assert!(left.approx_eq(&right, 1e-10));
    }

    #[test]
    fn reversion_reverses_products((a, b, _) in triple()) {
        let lhs = (&a * &b).reverse();
        let rhs = &b.reverse() * &a.reverse();
        prop_assert!(lhs.approx_eq(&rhs, 1e-10));
    }

    #[test]
    fn zeta_is_a_homomorphism(m in 0usize..=2, k in 0usize..=2, s1 in any::<u64>(), s2 in any::<u64>()) {
        prop_assume!(m + k >= 2);
        let sig = Signature::new(m, k).unwrap();
        let g = random_spin_element(sig, s1);
        let h = random_spin_element(sig, s2);
        let gh = g.compose(&h).unwrap();
        let lhs = zeta_matrix(&gh).unwrap();
        let rhs = zeta_matrix(&g).unwrap() * zeta_matrix(&h).unwrap();
        let scale = lhs.amax().max(1.0);
        prop_assert!((lhs - rhs).amax() < 1e-10 * scale * scale);
    }
}

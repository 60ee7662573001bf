use maggeo_core::clifford::Signature;
use maggeo_core::field_eqs::{reduced_identity_defect, FieldConfiguration};
use maggeo_core::geometry::{
    curvature, decompose_reconstruct, max_abs3, max_abs4, metric_connection, nonmetricity, random_point,
    random_polynomial_connection, random_polynomial_metric, torsion, torsion_antisymmetry_defect, ConnectionJet,
};
use ndarray::Array4;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn signature() -> impl Strategy<Value = Signature> {
    prop_oneof![
        Just(Signature::new(2, 0).unwrap()),
        Just(Signature::new(1, 2).unwrap()),
        Just(Signature::new(1, 3).unwrap()),
        Just(Signature::new(2, 2).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn connection_tensors(sig in signature(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = sig.n();
        let g = random_polynomial_metric(sig, 3, 0.05, &mut rng);
        let k = random_polynomial_connection(n, 2, 3, 1.0, &mut rng);
        let x = random_point(n, -1.0, 1.0, &mut rng);
        let gj = g.jet_at(&x).unwrap();
        let kj = k.jet_at(&x).unwrap();

        prop_assert!(decompose_reconstruct(&gj, &kj).reconstruction_defect < 1e-10);

        let r = curvature(&kj);
        let swapped = Array4::from_shape_fn(r.dim(), |(l, m, a, b)| r[[l, m, a, b]] + r[[m, l, a, b]]);
        prop_assert_eq!(max_abs4(&swapped), 0.0);

        let t = torsion(&kj);
        prop_assert_eq!(torsion_antisymmetry_defect(&t), 0.0);
        let kg = ConnectionJet::constant(metric_connection(&gj, &t).unwrap());
        prop_assert!(max_abs3(&nonmetricity(&gj, &kg)) < 1e-12);
        prop_assert!(max_abs3(&(&torsion(&kg) - &t)) < 1e-12);
    }

    #[test]
    fn reduced_identity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sig = Signature::new(1, 3).unwrap();
        let cfg = FieldConfiguration::new(
            random_polynomial_metric(sig, 3, 0.05, &mut rng),
            random_polynomial_connection(4, 2, 3, 0.5, &mut rng),
        )
        .unwrap();
        let x = random_point(4, -1.0, 1.0, &mut rng);
        prop_assert!(reduced_identity_defect(&cfg, &x).unwrap() < 1e-9);
    }
}

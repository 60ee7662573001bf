//! Clifford algebras Cl(m, n-m), their complexification, the Clifford,
//! Pin and Spin groups, and minimal left ideals.

mod group;
mod ideal;
mod multivector;
mod signature;

use std::collections::BTreeSet;

pub use group::{
    adjoint_action, adjoint_action_by, orthogonality_defect, random_spin_element,
    random_spin_element_with, zeta_matrix, GroupElement, NULL_THRESHOLD,
};
pub use ideal::{
    commuting_involutions, complexify_map, is_hermitian_idempotent, minimal_left_ideal,
    primitive_idempotent, ComplexBasis, LeftIdeal,
};
pub use multivector::{blade_product, grade, reorder_sign, Blade, Multivector};
pub use signature::{Signature, MAX_DIM};

/// The generators v^1..v^n of Cl(m, n-m).
pub fn construct_algebra(sig: Signature) -> Vec<Multivector> {
    (0..sig.n()).map(|a| Multivector::generator(sig, a)).collect()
}

/// max over a, b of |v^a v^b + v^b v^a - 2 η^{ab} e|.
pub fn relation_defect(sig: Signature, generators: &[Multivector]) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..generators.len() {
        for b in 0..generators.len() {
            let anti = &(&generators[a] * &generators[b]) + &(&generators[b] * &generators[a]);
            let target = Multivector::scalar(anti.signature(), 2.0 * sig.eta_ab(a, b));
            worst = worst.max((&anti - &target).max_abs());
        }
    }
    worst
}

/// Blades reachable from `e` by repeated right multiplication with
/// generators (pairs of generators when `even_only`).
pub fn reachable_blades(sig: Signature, even_only: bool) -> BTreeSet<Blade> {
    let n = sig.n();
    let steps: Vec<Blade> = if even_only {
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (1 << a) ^ (1 << b)))
            .filter(|&s| s != 0)
            .collect()
    } else {
        (0..n).map(|a| 1 << a).collect()
    };
    let mut seen = BTreeSet::from([0]);
    let mut frontier = vec![0];
    while let Some(blade) = frontier.pop() {
        for &s in &steps {
            let (_, next) = blade_product(&sig, blade, s);
            if seen.insert(next) {
                frontier.push(next);
            }
        }
    }
    seen
}

/// Multiplication table of basis blades: entry (a, b) is `(sign, blade)` of
/// the product.
pub fn multiplication_table(sig: Signature) -> Vec<Vec<(i8, Blade)>> {
    let dim = sig.algebra_dim() as Blade;
    (0..dim)
        .map(|a| {
            (0..dim)
                .map(|b| {
                    let (s, c) = blade_product(&sig, a, b);
                    (s as i8, c)
                })
                .collect()
        })
        .collect()
}

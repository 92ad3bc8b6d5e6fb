use infoclone::clone_engine::clone_labels;
use infoclone::{
    apply_clone_map, build_generator, exponentiate, overlap_sq, product_overlap_sq,
    scaling_overlap_discrepancy, verify_overlap_preservation, ComplexAmplitude,
    ProductCoherentState,
};
use proptest::prelude::*;

fn amplitude(bound: f64) -> impl Strategy<Value = ComplexAmplitude> {
    (-bound..bound, -bound..bound).prop_map(|(re, im)| ComplexAmplitude::new(re, im).unwrap())
}

fn state(modes: usize, bound: f64) -> impl Strategy<Value = ProductCoherentState> {
    prop::collection::vec(amplitude(bound), modes)
        .prop_map(|v| ProductCoherentState::new(v).unwrap())
}

proptest! {
    #[test]
    fn overlap_symmetric_and_bounded(mu in amplitude(3.0), nu in amplitude(3.0)) {
        let a = overlap_sq(mu, nu);
        prop_assert_eq!(a, overlap_sq(nu, mu));
        prop_assert!(a > 0.0 && a <= 1.0);
        prop_assert!((overlap_sq(mu, mu) - 1.0).abs() < 1e-12);
        if (mu.value() - nu.value()).norm() > 1e-5 {
            prop_assert!(a < 1.0);
        }
    }

    #[test]
    fn product_overlap_factorizes(
        (a, b) in (1usize..6).prop_flat_map(|m| (state(m, 1.5), state(m, 1.5)))
    ) {
        let per_mode: f64 = a.labels().iter().zip(b.labels()).map(|(&x, &y)| overlap_sq(x, y)).product();
        let joint = product_overlap_sq(&a, &b).unwrap();
        prop_assert!((joint - per_mode).abs() < 1e-12, "{} vs {}", joint, per_mode);
    }

    #[test]
    fn unit_modulus_scalings_are_invisible(
        theta in 0.0..std::f64::consts::TAU,
        alpha in amplitude(2.0),
        beta in amplitude(2.0),
    ) {
        let lambda = ComplexAmplitude::from_polar(1.0, theta).unwrap();
        prop_assert!(scaling_overlap_discrepancy(lambda, alpha, beta) < 1e-14);
    }

    #[test]
    fn rotations_orthogonal(n in 1usize..=64) {
        let r = exponentiate(&build_generator(n, None).unwrap());
        prop_assert!(r.orthogonality_residual() < 1e-12);
    }

    #[test]
    fn weighted_rotations_orthogonal(weights in prop::collection::vec(-2.0f64..2.0, 1..10)) {
        let r = exponentiate(&build_generator(weights.len(), Some(&weights)).unwrap());
        prop_assert!(r.orthogonality_residual() < 1e-12);
        prop_assert!((r.determinant() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn clone_map_splits_and_merges(n in 1usize..=8, alpha in amplitude(2.0), beta in amplitude(2.0)) {
        let out = clone_labels(alpha, beta, n).unwrap();
        let root_n = (n as f64).sqrt();
        prop_assert!((out.unknown().value() + beta.value() * root_n).norm() < 1e-10);
        for c in out.ancillas() {
            prop_assert!((c.value() - alpha.value() / root_n).norm() < 1e-10);
        }
        // Magnitude bookkeeping: the known label is amplified, the unknown attenuated.
        prop_assert!((out.unknown().value().norm() - root_n * beta.value().norm()).abs() < 1e-10);
        prop_assert!((out.ancillas()[0].value().norm() - alpha.value().norm() / root_n).abs() < 1e-10);
    }

    #[test]
    fn excitation_conserved(psi in (2usize..10).prop_flat_map(|m| state(m, 2.0))) {
        let r = exponentiate(&build_generator(psi.n_ancillas(), None).unwrap());
        let out = apply_clone_map(&psi, &r).unwrap();
        prop_assert!((out.total_excitation() - psi.total_excitation()).abs() < 1e-12 * (1.0 + psi.total_excitation()));
    }

    #[test]
    fn overlap_preserved_for_general_states(
        (a, b) in (2usize..8).prop_flat_map(|m| (state(m, 1.0), state(m, 1.0)))
    ) {
        let r = exponentiate(&build_generator(a.n_ancillas(), None).unwrap());
        let check = verify_overlap_preservation(&a, &b, &r).unwrap();
        prop_assert!(check.abs_diff < 1e-12);
    }

    #[test]
    fn four_applications_restore_labels(psi in (2usize..8).prop_flat_map(|m| state(m, 2.0))) {
        let r = exponentiate(&build_generator(psi.n_ancillas(), None).unwrap());
        let mut cur = psi.clone();
        for _ in 0..4 {
            cur = apply_clone_map(&cur, &r).unwrap();
        }
        for (x, y) in cur.labels().iter().zip(psi.labels()) {
            prop_assert!((x.value() - y.value()).norm() < 1e-10);
        }
    }
}

#[test]
fn modulus_other_than_one_is_detected() {
    let alpha = ComplexAmplitude::new(0.4, -0.9).unwrap();
    let beta = ComplexAmplitude::new(-0.7, 0.2).unwrap();
    for modulus in [0.5, 0.9, 1.1, 2.0] {
        for sign in [1.0, -1.0] {
            let lambda = ComplexAmplitude::real(sign * modulus).unwrap();
            assert!(
                scaling_overlap_discrepancy(lambda, alpha, beta) > 0.0,
                "{modulus}"
            );
        }
    }
}

#[test]
fn collective_block_matches_closed_form_rotation() {
    // exp of the (a, B) block is a rotation by π/2; check R against the
    // explicit 2×2 closed form lifted onto the full label space.
    for n in 1..=8usize {
        let r = exponentiate(&build_generator(n, None).unwrap());
        let m = r.matrix();
        let root = (n as f64).sqrt();
        let (c, s) = (
            std::f64::consts::FRAC_PI_2.cos(),
            std::f64::consts::FRAC_PI_2.sin(),
        );
        assert!((m[(0, 0)] - c).abs() < 1e-13);
        for j in 1..=n {
            assert!((m[(j, 0)] - s / root).abs() < 1e-13);
            assert!((m[(0, j)] + s / root).abs() < 1e-13);
            for k in 1..=n {
                // Identity on the complement of the collective mode, cos on it.
                let expected = if j == k { 1.0 } else { 0.0 } + (c - 1.0) / n as f64;
                assert!((m[(j, k)] - expected).abs() < 1e-13, "N={n} ({j},{k})");
            }
        }
    }
}

//! Fock-space oracle against the label-space engine.

use infoclone::clone_engine::clone_labels;
use infoclone::fock::{
    build_unitary, coherent_vector, commutator_residuals, fidelity, oracle_fidelity,
    single_mode_coefficients, FockSpace, FockUnitary,
};
use infoclone::{
    apply_clone_map, build_generator, exponentiate, overlap_sq, ComplexAmplitude,
    ProductCoherentState,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn amp(re: f64, im: f64) -> ComplexAmplitude {
    ComplexAmplitude::new(re, im).unwrap()
}

fn disk(rng: &mut impl Rng, radius: f64) -> ComplexAmplitude {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = rng.random::<f64>() * std::f64::consts::TAU;
    ComplexAmplitude::from_polar(r, theta).unwrap()
}

fn unit_weight_unitary(n_clones: usize, cutoff: usize) -> FockUnitary {
    let space = FockSpace::new(cutoff, n_clones + 1).unwrap();
    build_unitary(&space, &build_generator(n_clones, None).unwrap()).unwrap()
}

#[test]
fn coherent_overlaps_match_closed_form() {
    let space = FockSpace::new(24, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let mu = disk(&mut rng, 1.0);
        let nu = disk(&mut rng, 1.0);
        let v = coherent_vector(&space, &[mu]).unwrap();
        let w = coherent_vector(&space, &[nu]).unwrap();
        assert!((fidelity(&v, &w).unwrap() - overlap_sq(mu, nu)).abs() < 1e-8);
    }
}

#[test]
fn truncation_fidelity_bound() {
    for r in [0.3, 1.0, 2.0, 3.0] {
        let mu = amp(r * 0.6, r * 0.8);
        let cutoff = (r * r + 10.0 * r + 10.0).ceil() as usize;
        let truncated = single_mode_coefficients(mu, cutoff);
        // Reference: a much longer expansion, itself normalized.
        let reference = single_mode_coefficients(mu, cutoff + 60);
        let overlap: num_complex::Complex64 = truncated
            .iter()
            .zip(&reference)
            .map(|(a, b)| a.conj() * b)
            .sum();
        assert!(overlap.norm_sqr() > 1.0 - 1e-10, "r={r} D={cutoff}");
    }
}

#[test]
fn commutators_on_oracle_spaces() {
    for (d, m) in [(2, 1), (16, 2), (12, 3), (24, 3)] {
        let r = commutator_residuals(&FockSpace::new(d, m).unwrap()).unwrap();
        assert_eq!(r.canonical, 0.0, "D={d} M={m}");
        assert_eq!(r.cross, 0.0, "D={d} M={m}");
    }
}

#[test]
fn oracle_agrees_with_engine_on_random_labels() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in [1usize, 2] {
        let u = unit_weight_unitary(n, 16);
        assert!(u.unitarity_residual() < 1e-8);
        for _ in 0..10 {
            let alpha = disk(&mut rng, 0.8);
            let beta = disk(&mut rng, 0.8);
            let input = ProductCoherentState::with_ancillas(alpha, beta, n).unwrap();
            let predicted = clone_labels(alpha, beta, n).unwrap();
            let f = oracle_fidelity(&u, &input, &predicted).unwrap();
            assert!(f > 1.0 - 1e-5, "N={n} α={alpha} β={beta} F={f}");

            let v = coherent_vector(u.space(), input.labels()).unwrap();
            assert!((u.apply(&v).unwrap().norm() - v.norm()).abs() < 1e-9);
        }
    }
}

#[test]
fn weighted_generator_agrees_with_oracle() {
    let gen = build_generator(2, Some(&[1.3, -0.4])).unwrap();
    let space = FockSpace::new(16, 3).unwrap();
    let u = build_unitary(&space, &gen).unwrap();
    let input =
        ProductCoherentState::new(vec![amp(0.5, 0.2), amp(-0.3, 0.1), amp(0.2, -0.4)]).unwrap();
    let predicted = apply_clone_map(&input, &exponentiate(&gen)).unwrap();
    let f = oracle_fidelity(&u, &input, &predicted).unwrap();
    assert!(f > 1.0 - 1e-8, "{f}");
}

#[test]
fn opposite_sign_convention_is_rejected() {
    // (α, β) → (β, −α) is the other quarter turn; the oracle must tell them apart.
    let u = unit_weight_unitary(1, 16);
    let input = ProductCoherentState::new(vec![amp(0.7, 0.0), amp(0.4, 0.0)]).unwrap();
    let wrong = ProductCoherentState::new(vec![amp(0.4, 0.0), amp(-0.7, 0.0)]).unwrap();
    assert!(oracle_fidelity(&u, &input, &wrong).unwrap() < 0.5);
}

#[test]
fn fidelity_improves_with_cutoff() {
    // Labels large enough that truncation error, not roundoff, dominates the
    // whole ladder.
    let cases = [
        (1usize, amp(1.8, 0.6), amp(-1.2, 0.9)),
        (2, amp(1.5, -0.5), amp(0.9, 0.4)),
    ];
    for (n, alpha, beta) in cases {
        let input = ProductCoherentState::with_ancillas(alpha, beta, n).unwrap();
        let predicted = clone_labels(alpha, beta, n).unwrap();
        let infidelities: Vec<f64> = [8usize, 12, 16, 20, 24]
            .iter()
            .map(|&d| {
                1.0 - oracle_fidelity(&unit_weight_unitary(n, d), &input, &predicted).unwrap()
            })
            .collect();
        for w in infidelities.windows(2) {
            assert!(w[1] < w[0] || w[1] < 1e-12, "N={n}: {infidelities:?}");
        }
        assert!(
            infidelities[0] > 1e-6,
            "ladder should start truncation-limited: {infidelities:?}"
        );
    }
}

#[test]
fn small_label_ladder_is_monotone_up_to_roundoff() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for n in [1usize, 2] {
        let unitaries: Vec<_> = [8usize, 12, 16, 20, 24]
            .iter()
            .map(|&d| unit_weight_unitary(n, d))
            .collect();
        for _ in 0..5 {
            let alpha = disk(&mut rng, 0.8);
            let beta = disk(&mut rng, 0.8);
            let input = ProductCoherentState::with_ancillas(alpha, beta, n).unwrap();
            let predicted = clone_labels(alpha, beta, n).unwrap();
            let infidelities: Vec<f64> = unitaries
                .iter()
                .map(|u| 1.0 - oracle_fidelity(u, &input, &predicted).unwrap())
                .collect();
            for w in infidelities.windows(2) {
                assert!(w[1] <= w[0] + 1e-12, "N={n}: {infidelities:?}");
            }
        }
    }
}

#[test]
fn tiny_cutoff_fails_to_reproduce_map() {
    let u = unit_weight_unitary(1, 2);
    let input = ProductCoherentState::new(vec![amp(0.5, 0.0), amp(0.3, 0.0)]).unwrap();
    let predicted = clone_labels(amp(0.5, 0.0), amp(0.3, 0.0), 1).unwrap();
    let f = oracle_fidelity(&u, &input, &predicted).unwrap();
    assert!(f < 1.0 - 1e-2, "{f}");
}

#[test]
fn vacuum_is_invariant() {
    for d in [2usize, 5, 16] {
        let u = unit_weight_unitary(2, d);
        let vac = ProductCoherentState::new(vec![ComplexAmplitude::ZERO; 3]).unwrap();
        assert!((oracle_fidelity(&u, &vac, &vac).unwrap() - 1.0).abs() < 1e-10);
    }
}

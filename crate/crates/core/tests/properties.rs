mod common;

use std::sync::Arc;

use common::*;
use nalgebra::DVector;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use selfmeasure::coleman_hepp::{full_passage, pointer_operator, ChainModel};
use selfmeasure::hilbert::{mixture_of, DensityMatrix, HilbertLayout, StateVector, Subsystem};
use selfmeasure::pauli::{apply, commutator, format_sum, parse_sum, Pauli, PauliString, PauliSum, Phase};
use selfmeasure::superselection::{pointer_sectors, sector_decohere};

const QUBITS: usize = 6;
const LETTERS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|q| q.to_string()).collect()
}

fn layout(n: usize) -> Arc<HilbertLayout> {
    Arc::new(HilbertLayout::qubits(labels(n)).unwrap())
}

fn pauli_string(n: usize) -> impl Strategy<Value = PauliString> {
    (prop::collection::vec(0usize..4, n), 0i64..4).prop_map(|(letters, k)| {
        PauliString::new(
            Phase::from_power(k),
            letters.into_iter().enumerate().map(|(q, l)| (q.to_string(), LETTERS[l])),
        )
    })
}

fn pauli_sum(n: usize) -> impl Strategy<Value = PauliSum> {
    prop::collection::vec((pauli_string(n), -3.0f64..3.0, -3.0f64..3.0), 1..5)
        .prop_map(|terms| PauliSum::from_terms(terms.into_iter().map(|(s, re, im)| (Complex64::new(re, im), s))))
}

fn dense_of(s: &PauliString, n: usize) -> M {
    let letters: Vec<(usize, char)> = s
        .letters()
        .iter()
        .map(|(l, p)| (l.parse().unwrap(), p.as_char()))
        .collect();
    string(n, &letters) * s.phase().to_complex()
}

fn state(seed: u64, n: usize) -> StateVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    StateVector::new(layout(n), random_state(&mut rng, 1 << n)).unwrap()
}

fn column(s: &StateVector) -> V {
    DVector::from_column_slice(s.amplitudes())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_round_trips_exactly(sum in pauli_sum(4)) {
        let text = format_sum(&sum);
        prop_assert_eq!(parse_sum(&text).unwrap(), sum);
    }

    #[test]
    fn apply_kernel_matches_kronecker_product(s in pauli_string(QUBITS), seed in any::<u64>()) {
        let psi = state(seed, QUBITS);
        let out = apply(&s, &psi).unwrap();
        let dense = dense_of(&s, QUBITS) * column(&psi);
        prop_assert!((column(&out) - dense).iter().all(|z| z.norm() <= 1e-12));
    }

    #[test]
    fn string_product_matches_matrix_product(a in pauli_string(3), b in pauli_string(3)) {
        let dense = dense_of(&a, 3) * dense_of(&b, 3);
        prop_assert!(max_abs_diff(&dense_of(&a.multiply(&b), 3), &dense) == 0.0);
        let commute = max_abs_diff(&(&dense_of(&a, 3) * &dense_of(&b, 3)), &(&dense_of(&b, 3) * &dense_of(&a, 3))) == 0.0;
        prop_assert_eq!(a.commutes_with(&b), commute);
    }

    #[test]
    fn commutator_satisfies_jacobi(a in pauli_sum(3), b in pauli_sum(3), c in pauli_sum(3)) {
        let total = commutator(&a, &commutator(&b, &c))
            .plus(&commutator(&b, &commutator(&c, &a)))
            .plus(&commutator(&c, &commutator(&a, &b)));
        let scale = a.norm_bound() * b.norm_bound() * c.norm_bound();
        prop_assert!(total.norm_bound() <= 1e-12 * scale.max(1.0));
    }

    #[test]
    fn commutator_matches_dense(a in pauli_sum(3), b in pauli_sum(3)) {
        let l = layout(3);
        let (da, db) = (a.to_dense(&l, 64).unwrap(), b.to_dense(&l, 64).unwrap());
        let lib = commutator(&a, &b).to_dense(&l, 64).unwrap();
        prop_assert!(max_abs_diff(&lib, &(&da * &db - &db * &da)) <= 1e-12);
    }

    #[test]
    fn partial_trace_is_linear_and_trace_preserving(
        s1 in any::<u64>(),
        s2 in any::<u64>(),
        w in 0.0f64..1.0,
        keep in prop::sample::subsequence(labels(4), 0..=4),
    ) {
        let (p1, p2) = (state(s1, 4), state(s2, 4));
        let (r1, r2) = (DensityMatrix::from_pure(&p1), DensityMatrix::from_pure(&p2));
        let mixed = r1.matrix() * c(w, 0.) + r2.matrix() * c(1.0 - w, 0.);
        let rho = DensityMatrix::new(layout(4), mixed).unwrap();

        let reduced = rho.partial_trace(&keep).unwrap();
        prop_assert!((reduced.trace() - c(1., 0.)).norm() <= 1e-12);
        let parts = r1.partial_trace(&keep).unwrap().matrix() * c(w, 0.)
            + r2.partial_trace(&keep).unwrap().matrix() * c(1.0 - w, 0.);
        prop_assert!(max_abs_diff(reduced.matrix(), &parts) <= 1e-12);
    }

    #[test]
    fn sector_decoherence_is_idempotent(n in 1usize..=4, seed in any::<u64>()) {
        let l = HilbertLayout::qubits(std::iter::once("0".to_string()).chain((1..=n).map(|i| i.to_string()))).unwrap();
        let sectors = pointer_sectors(&pointer_operator(n), &l).unwrap();
        let rho = DensityMatrix::from_pure(&state(seed, n + 1));
        let once = sector_decohere(&rho, &sectors).unwrap();
        let twice = sector_decohere(&once, &sectors).unwrap();
        prop_assert!(once.max_abs_diff(&twice).unwrap() <= 1e-14);
        prop_assert!((once.trace() - c(1., 0.)).norm() <= 1e-12);
    }

    #[test]
    fn decohered_final_state_is_the_branch_mixture(n in 1usize..=5, seed in any::<u64>()) {
        let (a1, a2) = random_pair(&mut ChaCha8Rng::seed_from_u64(seed));
        let m = ChainModel::new(n, a1, a2).unwrap();
        let sectors = pointer_sectors(&pointer_operator(n), m.layout()).unwrap();
        let pure = DensityMatrix::from_pure(&full_passage(&m).unwrap());
        let decohered = sector_decohere(&pure, &sectors).unwrap();
        prop_assert!(decohered.max_abs_diff(&mixture_of(&m.final_branches())).unwrap() <= 1e-12);
    }
}

#[test]
fn mode_layout_digits_round_trip() {
    let l = HilbertLayout::new(vec![
        Subsystem::qubit("path"),
        Subsystem::mode("m1", 3),
        Subsystem::qubit("lattice"),
        Subsystem::mode("m2", 4),
    ])
    .unwrap();
    assert_eq!(l.dim(), 48);
    for flat in 0..l.dim() {
        assert_eq!(l.flat_index(&l.digits(flat)).unwrap(), flat);
    }
}

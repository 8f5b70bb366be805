mod common;

use common::*;
use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use selfmeasure::cascade::{unmeasured_it_exists, CascadeModel};
use selfmeasure::coleman_hepp::{
    detector_single_flip_state, eigenstate_residual, heisenberg_hamiltonian, ChainModel,
};
use selfmeasure::radiation::{
    build_final_state, cascade_growth, check_c22, glauber_generators, vacuum_connecting_observable,
    PhotonPattern, RadiationModel,
};
use selfmeasure::superselection::deviation;
use selfmeasure::{polar_deg, Complex64, Error};

fn as_vector(amps: &[Complex64]) -> V {
    DVector::from_column_slice(amps)
}

/// `P+ + P-·(-iσx on target) + P0` for an involution-like `w` with spectrum in {-1, 0, 1}.
fn controlled_flip(w: &M, n: usize, target: usize) -> M {
    let id = identity(1 << n);
    let p_plus = (w * w + w) * c(0.5, 0.);
    let p_minus = (w * w - w) * c(0.5, 0.);
    let p_zero = &id - w * w;
    let flip = string(n, &[(target, 'X')]) * c(0., -1.);
    p_plus + flip * p_minus + p_zero
}

#[test]
fn three_chain_cascade_matches_dense_construction() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10 {
        let (a1, a2) = random_pair(&mut rng);
        let model = CascadeModel::uniform(3, a1, a2).unwrap();
        let labels: Vec<&str> = model.layout().labels().collect();
        assert_eq!(labels, ["0", "1", "2.1", "3.1"]);
        let run = model.run().unwrap();

        // chain 1 passage, ancillas untouched
        let t1 = ch_final(1, a1, a2).kronecker(&basis(2, 0));

        // chain 2 measures X0·Y1
        let b = string(4, &[(0, 'X'), (1, 'Y')]);
        let u2 = controlled_flip(&b, 4, 2);
        let t2 = &u2 * &t1;
        assert!((t2.clone() - as_vector(run.stages[0].state.amplitudes())).amax_norm() <= 1e-12);

        // chain 3 measures the joint operator of the ±1 branches of B after chain 2
        let id = identity(16);
        let plus = (&id + &b) * &t1 * c(0.5, 0.);
        let minus = (&id - &b) * &t1 * c(0.5, 0.);
        let (q1, q2) = (&u2 * plus.normalize(), &u2 * minus.normalize());
        let w = outer(&q1, &q2) + outer(&q2, &q1);
        let t3 = controlled_flip(&w, 4, 3) * &t2;
        assert!((t3 - as_vector(run.final_state().amplitudes())).amax_norm() <= 1e-12);
    }
}

trait AmaxNorm {
    fn amax_norm(&self) -> f64;
}

impl AmaxNorm for V {
    fn amax_norm(&self) -> f64 {
        self.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }
}

#[test]
fn unmeasured_it_covers_every_observer_qubit() {
    let model = CascadeModel::new(vec![2, 1, 3], polar_deg(0.6, 10.0), polar_deg(0.8, 75.0)).unwrap();
    let (report, _) = unmeasured_it_exists(&model).unwrap();
    assert!(report.exists);
    assert!(report.covers_observer);
    assert!(report.deviation > 1e-3);
}

#[test]
fn single_flip_is_not_an_eigenstate() {
    for n in 2..=5 {
        let h = heisenberg_hamiltonian(n, 1.0).unwrap();
        let e = eigenstate_residual(&h, &detector_single_flip_state(n).unwrap()).unwrap();
        assert!(e.residual > 0.5, "N={n}: residual {}", e.residual);
    }
}

#[test]
fn radiation_state_matches_dense_construction() {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let photons = vec![
        PhotonPattern {
            occupations: vec![1, 0],
            amplitude: c(0.6, 0.),
        },
        PhotonPattern {
            occupations: vec![0, 2],
            amplitude: c(0., 0.8),
        },
    ];
    let model = RadiationModel::new(c(a, 0.), c(0., a), 2, 3, photons).unwrap();
    let (pure, _) = build_final_state(&model).unwrap();

    // path ⊗ lattice ⊗ m1 ⊗ m2 with dims 2·2·3·3
    let fock = |k: usize| {
        let mut v = V::zeros(3);
        v[k] = c(1., 0.);
        v
    };
    let up = basis(1, 0);
    let down = basis(1, 1);
    let vac = up.kronecker(&up).kronecker(&fock(0)).kronecker(&fock(0));
    let dd = down.kronecker(&down);
    let emitted = dd.kronecker(&fock(1)).kronecker(&fock(0)) * c(0.6, 0.)
        + dd.kronecker(&fock(0)).kronecker(&fock(2)) * c(0., 0.8);
    let dense = vac * c(a, 0.) + emitted * c(0., a);
    assert!((dense - as_vector(pure.amplitudes())).amax_norm() <= 1e-15);
}

#[test]
fn background_photons_do_not_change_the_verdict() {
    let plain = RadiationModel::default();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let patterns = vec![PhotonPattern::new(vec![1], c(h, 0.)), PhotonPattern::new(vec![2], c(h, 0.))];
    let with_bg = RadiationModel::with_background(c(h, 0.), c(h, 0.), 1, 3, patterns, vec![1, 2]).unwrap();
    for model in [&plain, &with_bg] {
        let glauber = glauber_generators(model).unwrap();
        assert!(!check_c22(model, &glauber, 1e-12).unwrap().distinguishable);
        let widened = glauber.with(vacuum_connecting_observable(model).unwrap());
        let v = check_c22(model, &widened, 1e-12).unwrap();
        assert!(v.distinguishable);
    }
    let q_plain = vacuum_connecting_observable(&plain).unwrap();
    let q_bg = vacuum_connecting_observable(&with_bg).unwrap();
    let (p0, b0) = build_final_state(&plain).unwrap();
    let (p1, b1) = build_final_state(&with_bg).unwrap();
    let d0 = deviation(&q_plain.op, &p0, &selfmeasure::hilbert::mixture_of(&b0)).unwrap();
    let d1 = deviation(&q_bg.op, &p1, &selfmeasure::hilbert::mixture_of(&b1)).unwrap();
    assert!((d0 - d1).abs() <= 1e-12);
}

#[test]
fn counterexample_deviation_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let (a1, a2) = random_pair(&mut rng);
        let c1 = polar_deg(0.6, 40.0);
        let photons = vec![
            PhotonPattern {
                occupations: vec![1],
                amplitude: c1,
            },
            PhotonPattern {
                occupations: vec![2],
                amplitude: c(0.8, 0.),
            },
        ];
        let model = RadiationModel::new(a1, a2, 1, 3, photons).unwrap();
        let (pure, branches) = build_final_state(&model).unwrap();
        let q = vacuum_connecting_observable(&model).unwrap();
        let d = deviation(&q.op, &pure, &selfmeasure::hilbert::mixture_of(&branches)).unwrap();
        assert!((d - 2.0 * (a1.conj() * a2 * c1).re.abs()).abs() <= 1e-12);
    }
}

#[test]
fn growth_overflow_and_precondition_are_reported() {
    assert!(matches!(cascade_growth(1, 3, 100), Err(Error::Precondition { .. })));
    assert!(cascade_growth(3, 200, u64::MAX).is_err());
    assert_eq!(cascade_growth(2, 5, 1 << 20).unwrap(), 32);
}

#[test]
fn chain_rejects_empty_detector() {
    let err = ChainModel::new(0, c(1., 0.), c(0., 0.)).unwrap_err();
    assert!(err.to_string().contains("coleman_hepp"));
}

//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use selfmeasure::cascade::{information_tradeoff, joint_it_operator, CascadeModel};
use selfmeasure::coleman_hepp::{
    detector_up_state, eigenstate_residual, full_passage, heisenberg_hamiltonian, it_operator,
    pointer_operator, printed_commutator_rhs, printed_it_expectation, strict_check, ChainModel,
};
use selfmeasure::hilbert::{mixture_of, DensityMatrix};
use selfmeasure::operator::Operator;
use selfmeasure::pauli::{commutator, expectation, expectation_mixed, Pauli, PauliSum};
use selfmeasure::radiation::{
    build_final_state, check_c22, check_no_vacuum_interference, glauber_fields, glauber_generators,
    system_field_observable, vacuum_connecting_observable, RadiationModel,
};
use selfmeasure::scenario::{parse_config, run};
use selfmeasure::superselection::{all_pauli_strings, deviation, pointer_sectors};

const TOL: f64 = 1e-12;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome {
        passed: false,
        detail: detail.into(),
    }
}

fn verdict(ok: bool, detail: String) -> Outcome {
    Outcome { passed: ok, detail }
}

fn amplitude_sweep() -> Vec<(Complex64, Complex64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..50).map(|_| random_pair(&mut rng)).collect()
}

fn closed_form_dynamics() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut worst_dense: f64 = 0.0;
    for n in 1..=6 {
        for (a1, a2) in amplitude_sweep() {
            let m = ChainModel::new(n, a1, a2).unwrap();
            let f = full_passage(&m).unwrap();
            worst = worst.max(1.0 - f.inner(&m.closed_form_final()).unwrap().norm());
            if n <= 4 {
                let dense = ch_final(n, a1, a2);
                let d = f
                    .amplitudes()
                    .iter()
                    .zip(dense.iter())
                    .fold(0.0f64, |acc, (x, y)| acc.max((x - y).norm()));
                worst_dense = worst_dense.max(d);
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        worst <= TOL && worst_dense <= TOL && elapsed < Duration::from_secs(1),
        format!(
            "max 1-|<step|closed>| = {worst:.2e}, max |step - dense| = {worst_dense:.2e}, {:.3}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn strict_measurement() -> Outcome {
    let z0 = PauliSum::single("0", Pauli::Z);
    let mut worst: f64 = 0.0;
    for n in 1..=6 {
        for (a1, a2) in amplitude_sweep() {
            let m = ChainModel::new(n, a1, a2).unwrap();
            let f = full_passage(&m).unwrap();
            let r = strict_check(&z0, &pointer_operator(n), &f).unwrap();
            worst = worst.max(r.delta.abs());
        }
    }
    verdict(worst <= TOL, format!("max |Δ̄| = {worst:.2e}"))
}

fn it_discrimination() -> Outcome {
    let mut worst_mag: f64 = 0.0;
    let mut mixed_exact = true;
    let mut ratios = Vec::new();
    for n in 1..=6 {
        let b = it_operator(n);
        let mut ratio = None;
        for (a1, a2) in amplitude_sweep() {
            let m = ChainModel::new(n, a1, a2).unwrap();
            let f = full_passage(&m).unwrap();
            let pure = expectation(&b, &f).unwrap();
            let mixed = expectation_mixed(&b, &mixture_of(&m.final_branches())).unwrap();
            mixed_exact &= mixed == 0.0;
            let target = (a1.conj() * a2 + a1 * a2.conj()).re;
            worst_mag = worst_mag.max((pure.abs() - target.abs()).abs());
            let printed = printed_it_expectation(a1, a2);
            if ratio.is_none() && printed.abs() > 0.1 {
                ratio = Some(pure / printed);
            }
        }
        ratios.push(format!("N={n}: {:+.3}", ratio.unwrap_or(f64::NAN)));
    }
    verdict(
        mixed_exact && worst_mag <= TOL,
        format!(
            "B̄(mixed) == 0: {mixed_exact}, max ||B̄|-|a1*a2+a1a2*|| = {worst_mag:.2e}; measured/printed ratio {}",
            ratios.join(", ")
        ),
    )
}

fn commutator_identity() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut constants = Vec::new();
    for n in 1..=4 {
        let layout = ChainModel::new(n, c(1., 0.), c(0., 0.)).unwrap().layout().clone();
        let lib = commutator(&pointer_operator(n), &it_operator(n));
        let (mu, b) = (pointer_dense(n), it_dense(n));
        let dense = &mu * &b - &b * &mu;
        worst = worst.max(max_abs_diff(&lib.to_dense(&layout, 64).unwrap(), &dense));
        match lib.ratio_to(&printed_commutator_rhs(n), TOL) {
            Some(k) => constants.push(k),
            None => return fail(format!("N={n}: not proportional to the printed right-hand side")),
        }
    }
    let spread = constants
        .iter()
        .fold(0.0f64, |acc, k| acc.max((k - constants[0]).norm()));
    verdict(
        worst <= TOL && spread <= TOL,
        format!(
            "max |string - dense| = {worst:.2e}; constant {:+.3}{:+.3}i, spread over N=1..4 {spread:.2e}",
            constants[0].re, constants[0].im
        ),
    )
}

fn operational_collapse() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_preserving: f64 = 0.0;
    let mut min_b: f64 = f64::INFINITY;
    let mut partition_agrees = true;
    let mut counted = String::new();
    for n in 1..=3 {
        let q = n + 1;
        // occupation of the pointer sector: number of flipped atoms
        let sector = |i: usize| (i & ((1 << n) - 1)).count_ones();
        let (a1, a2) = loop {
            let p = random_pair(&mut rng);
            if (p.0.conj() * p.1 + p.0 * p.1.conj()).re.abs() >= 0.2 {
                break p;
            }
        };
        let m = ChainModel::new(n, a1, a2).unwrap();
        let layout = m.layout().clone();
        let lib_sectors = pointer_sectors(&pointer_operator(n), &layout).unwrap();
        let f = full_passage(&m).unwrap();
        let mixed = mixture_of(&m.final_branches());

        let psi = ch_final(n, a1, a2);
        let mut branch_up = psi.clone();
        let mut branch_down = psi.clone();
        for i in 0..psi.len() {
            if i >> n & 1 == 1 {
                branch_up[i] = c(0., 0.);
            } else {
                branch_down[i] = c(0., 0.);
            }
        }
        let rho_p = outer(&psi, &psi);
        let rho_m = outer(&branch_up, &branch_up) + outer(&branch_down, &branch_down);

        let labels: Vec<String> = layout.labels().map(String::from).collect();
        let mut preserving = 0;
        let strings = all_pauli_strings(&labels);
        for s in &strings {
            let dense = string(
                q,
                &s.letters()
                    .iter()
                    .map(|(l, p)| (layout.position(l).unwrap(), p.as_char()))
                    .collect::<Vec<_>>(),
            );
            let oracle_preserves = (0..dense.nrows())
                .all(|i| (0..dense.ncols()).all(|j| sector(i) == sector(j) || dense[(i, j)].norm() == 0.0));
            let op = Operator::Pauli(PauliSum::from(s.clone()));
            let lib_preserves = lib_sectors.commutation_defect(&op, &layout).unwrap() <= TOL;
            partition_agrees &= oracle_preserves == lib_preserves;
            let dev_oracle = (trace_rho(&rho_p, &dense) - trace_rho(&rho_m, &dense)).norm();
            let dev_lib = deviation(&op, &f, &mixed).unwrap();
            partition_agrees &= (dev_oracle - dev_lib).abs() <= TOL;
            if oracle_preserves {
                preserving += 1;
                worst_preserving = worst_preserving.max(dev_oracle);
            }
        }
        let b = it_dense(n);
        min_b = min_b.min((trace_rho(&rho_p, &b) - trace_rho(&rho_m, &b)).norm());
        counted.push_str(&format!(" N={n}: {preserving}/{}", strings.len()));
    }
    let elapsed = start.elapsed();
    verdict(
        partition_agrees && worst_preserving <= TOL && min_b > 0.1 && elapsed < Duration::from_secs(10),
        format!(
            "preserving strings{counted}; max preserving deviation {worst_preserving:.2e}; min B deviation {min_b:.3}; library agrees with oracle: {partition_agrees}; {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn cascade_tradeoff() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst_mu: f64 = 0.0;
    let mut worst_b: f64 = 0.0;
    let mut worst_dense: f64 = 0.0;
    let mut drawn = 0;
    while drawn < 50 {
        let (a1, a2) = random_pair(&mut rng);
        let model = CascadeModel::uniform(2, a1, a2).unwrap();
        let t = information_tradeoff(&model).unwrap();
        if t.b_before.abs() <= 0.1 {
            continue;
        }
        drawn += 1;
        worst_mu = worst_mu.max(t.mu_after.abs());
        worst_b = worst_b.max((t.bprime_after - t.b_before).abs());

        // dense: U = P+ ⊗ I + P- ⊗ (-iσx) on qubits (0, 1 | 2.1)
        let b = string(3, &[(0, 'X'), (1, 'Y')]);
        let id = identity(8);
        let p_plus = (&id + &b) * c(0.5, 0.);
        let p_minus = (&id - &b) * c(0.5, 0.);
        let flip = string(3, &[(2, 'X')]) * c(0., -1.);
        let u = &p_plus + &flip * &p_minus;
        let t1 = ch_final(1, a1, a2).kronecker(&basis(1, 0));
        let t2 = &u * &t1;
        let mu1 = string(3, &[(1, 'Z')]);
        let mu2 = string(3, &[(2, 'Z')]);
        worst_dense = worst_dense
            .max((expect(&mu1, &t2).re - t.mu_after).abs())
            .max((expect(&mu2, &t2).re - t.bprime_after).abs())
            .max((expect(&b, &t1).re - t.b_before).abs());
    }
    verdict(
        worst_mu <= TOL && worst_b <= TOL && worst_dense <= TOL,
        format!(
            "50 draws with |B̄|>0.1: max |μ̄_z after| = {worst_mu:.2e}, max |B̄'-B̄| = {worst_b:.2e}, max |lib - dense| = {worst_dense:.2e}"
        ),
    )
}

fn terminal_witness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut cases = 0;
    let mut min_dev = f64::INFINITY;
    let mut all_cover = true;
    for m in 2..=4 {
        for _ in 0..10 {
            let (a1, a2) = random_pair(&mut rng);
            let model = CascadeModel::uniform(m, a1, a2).unwrap();
            let run = model.run().unwrap();
            let br = run.final_branches();
            let overlap = (br.amplitude(0).conj() * br.amplitude(1)).re;
            if overlap.abs() < 1e-3 {
                continue;
            }
            let w = joint_it_operator(br).unwrap().to_operator().unwrap();
            let support = w.support(model.layout(), 1e-10).unwrap();
            all_cover &= model.observer_labels().iter().all(|l| support.contains(l));
            let dev = deviation(&w, run.final_state(), &mixture_of(br)).unwrap();
            min_dev = min_dev.min(dev);
            cases += 1;
        }
    }
    verdict(
        cases > 0 && all_cover && min_dev > TOL,
        format!("{cases} generic cascades m=2..4: support covers observer {all_cover}, min deviation {min_dev:.3e}"),
    )
}

fn heisenberg_eigenstate() -> Outcome {
    let mut worst_res: f64 = 0.0;
    let mut worst_val: f64 = 0.0;
    for n in 2..=6 {
        for j in [1.0, -0.7, 2.5] {
            let h = heisenberg_hamiltonian(n, j).unwrap();
            let e = eigenstate_residual(&h, &detector_up_state(n).unwrap()).unwrap();
            worst_res = worst_res.max(e.residual);
            worst_val = worst_val.max((e.eigenvalue - j * (n as f64 - 1.0)).abs());
        }
    }
    verdict(
        worst_res <= TOL && worst_val <= TOL,
        format!("max ‖Hψ-λψ‖ = {worst_res:.2e}, max |λ-J(N-1)| = {worst_val:.2e}"),
    )
}

fn radiation_model() -> Outcome {
    let start = Instant::now();
    let model = RadiationModel::default();
    let c2 = glauber_fields(&model)
        .iter()
        .map(|f| check_no_vacuum_interference(f, &model).unwrap())
        .fold(0.0, f64::max);
    let (pure, branches) = build_final_state(&model).unwrap();
    let mixed = mixture_of(&branches);

    // dense field states: psi = a1 |u u 0> + a2 Σ c_j |d d j>
    let d = model.cutoff();
    let rho_p = DensityMatrix::from_pure(&pure).matrix().clone();
    let rho_m = mixed.matrix().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst_lib: f64 = 0.0;
    let mut worst_dense: f64 = 0.0;
    let fields = glauber_fields(&model);
    for _ in 0..100 {
        let s = random_hermitian(&mut rng, 4);
        for f in &fields {
            let q = system_field_observable(&s, f).unwrap();
            worst_lib = worst_lib.max(deviation(&q, &pure, &mixed).unwrap());
            let dense_field = if f.name.ends_with("^2") {
                &number(d) * &number(d)
            } else {
                number(d)
            };
            let dense = s.kronecker(&dense_field);
            worst_dense = worst_dense.max((trace_rho(&rho_p, &dense) - trace_rho(&rho_m, &dense)).norm());
        }
    }
    let glauber = glauber_generators(&model).unwrap();
    let blind = check_c22(&model, &glauber, TOL).unwrap();
    let widened = glauber.with(vacuum_connecting_observable(&model).unwrap());
    let flip = check_c22(&model, &widened, TOL).unwrap();
    let elapsed = start.elapsed();
    verdict(
        c2 == 0.0
            && worst_lib <= TOL
            && worst_dense <= TOL
            && !blind.distinguishable
            && flip.distinguishable
            && elapsed < Duration::from_secs(5),
        format!(
            "C2 residual {c2}; 100 random system factors: max deviation {worst_lib:.2e} (dense {worst_dense:.2e}); Glauber verdict {}, with quadrature {} ({:.3}); {:.2}s",
            blind.distinguishable,
            flip.distinguishable,
            flip.max_deviation,
            elapsed.as_secs_f64()
        ),
    )
}

fn determinism_and_schema() -> Outcome {
    let text = "scenario: ch-basic\nseed: 42\nfuzz_samples: 20\nchain: {n_atoms: 3}\n";
    let strip = |s: String| -> String {
        s.lines()
            .filter(|l| !l.trim_start().starts_with("\"wall_time_s\""))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let cfg = parse_config(text).unwrap();
    let a = strip(run(&cfg).unwrap().to_json().unwrap());
    let b = strip(run(&cfg).unwrap().to_json().unwrap());
    let schema = a.contains("\"schema_version\": \"1.0\"");
    if a != b {
        return fail("two runs with the same seed differ");
    }

    let sweep = parse_config(
        "scenario: ch-basic\nfuzz_samples: 0\nchain: {n_atoms: 3}\namplitudes: {a1: [0.6, 0], a2: [0.8, 0]}\nsweep: {param: a2_phase, start: 0, stop: 180, steps: 19}\n",
    )
    .unwrap();
    let csv = run(&sweep).unwrap().to_csv().unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "B_pure").unwrap();
    let phase_col = header.iter().position(|h| *h == "a2_phase").unwrap();
    let mut worst: f64 = 0.0;
    let mut rows = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let phase: f64 = cells[phase_col].parse().unwrap();
        let measured: f64 = cells[col].parse().unwrap();
        let (a1, a2) = (c(0.6, 0.), Complex64::from_polar(0.8, phase.to_radians()));
        let psi = ch_final(3, a1, a2);
        let oracle = expect(&it_dense(3), &psi).re;
        worst = worst.max((measured - oracle).abs());
        rows += 1;
    }
    verdict(
        schema && rows == 19 && worst <= TOL,
        format!("json identical across runs, schema_version present: {schema}; csv rows {rows}, max |B̄ - oracle| = {worst:.2e}"),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("closed-form dynamics", closed_form_dynamics),
        ("strict measurement", strict_measurement),
        ("IT discrimination", it_discrimination),
        ("commutator identity", commutator_identity),
        ("operational collapse", operational_collapse),
        ("cascade trade-off", cascade_tradeoff),
        ("terminal IT witness", terminal_witness),
        ("Heisenberg eigenstate", heisenberg_eigenstate),
        ("radiation model", radiation_model),
        ("determinism and schema", determinism_and_schema),
    ];
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = match std::panic::catch_unwind(check) {
            Ok(o) => o,
            Err(_) => fail("panicked"),
        };
        if !outcome.passed {
            failures += 1;
        }
        println!(
            "criterion {:>2} {:<24} {}  {}",
            k + 1,
            name,
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}

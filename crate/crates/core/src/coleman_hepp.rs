//! Coleman–Hepp chain: a spin-½ particle `S0` passing over `N` spin-½ atoms
//! that flip only when `S0` is down.
//!
//! Qubit labels are `"0"` for the particle and `"1"..="N"` for the atoms, so
//! operators can be written as `X0*Y1*Y2`. The spatial wave packet is not
//! simulated; the passage is a sequence of stages, one per atom, each applying
//!
//! ```text
//! U_i = |u0><u0| ⊗ I + |d0><d0| ⊗ exp(-i θ σ_x^i)
//! ```
//!
//! with the calibrated pulse `θ = π/2` giving the complete flip `-i σ_x`.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{BranchDecomposition, HilbertLayout, StateVector, BRANCH_TOLERANCE};
use crate::pauli::{expectation, Pauli, PauliString, PauliSum, Phase};

const MODULE: &str = "coleman_hepp";

/// Label of the measured particle.
pub const SYSTEM_LABEL: &str = "0";

pub fn atom_label(i: usize) -> String {
    i.to_string()
}

/// `[S0, A1, ..., AN]`.
pub fn chain_layout(n_atoms: usize) -> Result<HilbertLayout> {
    HilbertLayout::qubits((0..=n_atoms).map(atom_label))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainModel {
    n_atoms: usize,
    a1: Complex64,
    a2: Complex64,
    pulse: f64,
    layout: Arc<HilbertLayout>,
}

impl ChainModel {
    pub fn new(n_atoms: usize, a1: Complex64, a2: Complex64) -> Result<Self> {
        if n_atoms == 0 {
            return Err(Error::precondition(MODULE, "N >= 1 (n_atoms must be positive)"));
        }
        let w = a1.norm_sqr() + a2.norm_sqr();
        if (w - 1.0).abs() > BRANCH_TOLERANCE {
            return Err(Error::AmplitudesNotNormalized(w));
        }
        Ok(ChainModel {
            n_atoms,
            a1,
            a2,
            pulse: FRAC_PI_2,
            layout: Arc::new(chain_layout(n_atoms)?),
        })
    }

    /// Pulse angle per atom (default `π/2`).
    pub fn with_pulse(mut self, theta: f64) -> Self {
        self.pulse = theta;
        self
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn a1(&self) -> Complex64 {
        self.a1
    }

    pub fn a2(&self) -> Complex64 {
        self.a2
    }

    pub fn pulse(&self) -> f64 {
        self.pulse
    }

    pub fn layout(&self) -> &HilbertLayout {
        &self.layout
    }

    pub fn shared_layout(&self) -> &Arc<HilbertLayout> {
        &self.layout
    }

    pub fn atom_labels(&self) -> Vec<String> {
        (1..=self.n_atoms).map(atom_label).collect()
    }

    /// `(a1|u0> + a2|d0>) ⊗ |u...u>`.
    pub fn initial_state(&self) -> StateVector {
        let mut amps = vec![Complex64::new(0.0, 0.0); self.layout.dim()];
        amps[0] = self.a1;
        amps[self.layout.stride(0)] = self.a2;
        StateVector::from_unitary_image(self.layout.clone(), amps)
    }

    pub fn passage(&self) -> Passage {
        Passage {
            state: self.initial_state(),
            visited: BTreeSet::new(),
            n_atoms: self.n_atoms,
            pulse: self.pulse,
        }
    }

    /// Branches `a1|u0>|u...u>` and `a2 (-i)^N |d0>|d...d>` of the
    /// completed passage.
    pub fn final_branches(&self) -> BranchDecomposition {
        let n = self.layout.dim();
        let mut up = vec![Complex64::new(0.0, 0.0); n];
        up[0] = Complex64::new(1.0, 0.0);
        let mut down = vec![Complex64::new(0.0, 0.0); n];
        down[n - 1] = Complex64::new(1.0, 0.0);
        let phase = Phase::from_power(-(self.n_atoms as i64)).to_complex();
        BranchDecomposition::new(vec![
            (self.a1, StateVector::from_unitary_image(self.layout.clone(), up)),
            (self.a2 * phase, StateVector::from_unitary_image(self.layout.clone(), down)),
        ])
        .expect("pointer branches are orthogonal basis states")
    }

    /// Closed form of the completed passage (calibrated pulse).
    pub fn closed_form_final(&self) -> StateVector {
        self.final_branches().superposition()
    }
}

/// A passage in progress; each atom can be visited once.
#[derive(Debug, Clone)]
pub struct Passage {
    state: StateVector,
    visited: BTreeSet<usize>,
    n_atoms: usize,
    pulse: f64,
}

impl Passage {
    pub fn step(&mut self, atom: usize) -> Result<&StateVector> {
        if atom == 0 || atom > self.n_atoms {
            return Err(Error::InvalidAtom {
                index: atom,
                n_atoms: self.n_atoms,
            });
        }
        if self.visited.contains(&atom) {
            return Err(Error::AtomVisited(atom));
        }
        self.state = passage_step(&self.state, atom, self.pulse)?;
        self.visited.insert(atom);
        Ok(&self.state)
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn into_state(self) -> StateVector {
        self.state
    }
}

/// `cos θ`, `sin θ` with rounding residue below 1e-15 snapped to zero so the
/// calibrated pulse is exactly `-i σ_x`.
fn pulse_entries(theta: f64) -> (f64, f64) {
    let snap = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
    (snap(theta.cos()), snap(theta.sin()))
}

/// One interaction stage: conditional on `S0 = |d0>`, rotate atom `atom` by
/// `exp(-i θ σ_x)`.
pub fn passage_step(state: &StateVector, atom: usize, theta: f64) -> Result<StateVector> {
    let layout = state.layout();
    let n_atoms = layout.len().saturating_sub(1);
    if atom == 0 {
        return Err(Error::InvalidAtom { index: atom, n_atoms });
    }
    let control = layout.qubit_stride(SYSTEM_LABEL)?;
    let target = layout
        .qubit_stride(&atom_label(atom))
        .map_err(|_| Error::InvalidAtom { index: atom, n_atoms })?;
    let (c, s) = pulse_entries(theta);
    let diag = Complex64::new(c, 0.0);
    let off = Complex64::new(0.0, -s);
    let mut amps = state.amplitudes().to_vec();
    for i in 0..amps.len() {
        // visit each (target up, target down) pair once, with S0 down
        if (i / control) % 2 == 1 && (i / target) % 2 == 0 {
            let j = i + target;
            let (u, d) = (amps[i], amps[j]);
            amps[i] = diag * u + off * d;
            amps[j] = off * u + diag * d;
        }
    }
    Ok(StateVector::from_unitary_image(state.shared_layout().clone(), amps))
}

/// Stepwise evolution over atoms `1..=N`.
pub fn full_passage(model: &ChainModel) -> Result<StateVector> {
    let mut p = model.passage();
    for i in 1..=model.n_atoms {
        p.step(i)?;
    }
    Ok(p.into_state())
}

/// Chain polarization `μ_z = (1/N) Σ σ_z^i` over the given atom labels.
pub fn polarization<S: AsRef<str>>(atoms: &[S]) -> PauliSum {
    let k = Complex64::new(1.0 / atoms.len() as f64, 0.0);
    PauliSum::from_terms(
        atoms
            .iter()
            .map(|a| (k, PauliString::single(a.as_ref(), Pauli::Z))),
    )
}

/// Pointer `μ_z` of an `N`-atom chain.
pub fn pointer_operator(n_atoms: usize) -> PauliSum {
    let atoms: Vec<String> = (1..=n_atoms).map(atom_label).collect();
    polarization(&atoms)
}

/// Interference-term operator `B = σ_x^0 Π σ_y^i`.
pub fn it_operator(n_atoms: usize) -> PauliSum {
    PauliSum::from(it_string(n_atoms))
}

pub fn it_string(n_atoms: usize) -> PauliString {
    PauliString::new(
        Phase::ONE,
        std::iter::once((atom_label(0), Pauli::X))
            .chain((1..=n_atoms).map(|i| (atom_label(i), Pauli::Y))),
    )
}

/// The printed right-hand side `(i/N) σ_x^0 Σ_i σ_x^i Π_{j≠i} σ_y^j` of the
/// pointer/IT commutator.
pub fn printed_commutator_rhs(n_atoms: usize) -> PauliSum {
    let k = Complex64::new(0.0, 1.0 / n_atoms as f64);
    PauliSum::from_terms((1..=n_atoms).map(|i| {
        let s = PauliString::new(
            Phase::ONE,
            std::iter::once((atom_label(0), Pauli::X)).chain((1..=n_atoms).map(|j| {
                (atom_label(j), if j == i { Pauli::X } else { Pauli::Y })
            })),
        );
        (k, s)
    }))
}

/// Paper-printed interference expectation `0.5 (a1* a2 + a1 a2*)`.
pub fn printed_it_expectation(a1: Complex64, a2: Complex64) -> f64 {
    0.5 * (a1.conj() * a2 + a1 * a2.conj()).re
}

/// `(-1)^N (a1* a2 + a1 a2*)`: the interference expectation on the final
/// state under this crate's Pauli conventions.
pub fn derived_it_expectation(n_atoms: usize, a1: Complex64, a2: Complex64) -> f64 {
    let sign = if n_atoms.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * (a1.conj() * a2 + a1 * a2.conj()).re
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StrictMeasurementReport {
    pub q_expect: f64,
    pub qo_expect: f64,
    pub delta: f64,
}

/// Compares a system observable `Q` (on `S0` only) with an apparatus
/// observable `Q_o` (on atoms only).
pub fn strict_check(
    q: &PauliSum,
    q_o: &PauliSum,
    state: &StateVector,
) -> Result<StrictMeasurementReport> {
    if let Some(bad) = q.support().into_iter().find(|l| l != SYSTEM_LABEL) {
        return Err(Error::Support(format!("Q acts on `{bad}`, outside the system")));
    }
    if q_o.support().contains(SYSTEM_LABEL) {
        return Err(Error::Support("Q_o acts on the system qubit".into()));
    }
    let q_expect = expectation(q, state)?;
    let qo_expect = expectation(q_o, state)?;
    Ok(StrictMeasurementReport {
        q_expect,
        qo_expect,
        delta: q_expect - qo_expect,
    })
}

/// Uniform-exchange Heisenberg chain `J Σ_i σ^i · σ^{i+1}` on atoms `1..=N`.
pub fn heisenberg_hamiltonian(n_atoms: usize, j: f64) -> Result<PauliSum> {
    if n_atoms < 2 {
        return Err(Error::precondition(MODULE, "N >= 2 for the Heisenberg chain"));
    }
    let k = Complex64::new(j, 0.0);
    let mut h = PauliSum::zero();
    for i in 1..n_atoms {
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            let s = PauliString::new(Phase::ONE, [(atom_label(i), p), (atom_label(i + 1), p)]);
            h.add_term(k, &s);
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenCheck {
    /// `<psi|H|psi>`.
    pub eigenvalue: f64,
    /// `‖H psi - λ psi‖`.
    pub residual: f64,
}

pub fn eigenstate_residual(h: &PauliSum, state: &StateVector) -> Result<EigenCheck> {
    let lambda = expectation(h, state)?;
    let hpsi = h.apply_raw(state.layout(), state.amplitudes())?;
    let residual = hpsi
        .iter()
        .zip(state.amplitudes())
        .map(|(x, y)| (x - lambda * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    Ok(EigenCheck {
        eigenvalue: lambda,
        residual,
    })
}

/// `Π |u_i>` on the atom-only layout.
pub fn detector_up_state(n_atoms: usize) -> Result<StateVector> {
    let layout = HilbertLayout::qubits((1..=n_atoms).map(atom_label))?;
    StateVector::basis(layout, &vec![0; n_atoms])
}

/// `|d u ... u>` on the atom-only layout.
pub fn detector_single_flip_state(n_atoms: usize) -> Result<StateVector> {
    let layout = HilbertLayout::qubits((1..=n_atoms).map(atom_label))?;
    let mut digits = vec![0; n_atoms];
    digits[0] = 1;
    StateVector::basis(layout, &digits)
}

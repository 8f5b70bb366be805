//! Observers built from several chains, each measuring the interference
//! term of everything before it.
//!
//! Chain 1 measures `σ_z^0` by the ordinary passage. Chain `k ≥ 2` then
//! measures the interference-term operator of the preceding stage through a
//! controlled flip: the `+1` eigenspace leaves the chain all-up, the `-1`
//! eigenspace flips every atom with the same `-i` per flip as a passage.
//! Atoms of chain `k ≥ 2` are labelled `"k.j"`.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::coleman_hepp::{atom_label, it_operator, passage_step, polarization, SYSTEM_LABEL};
use crate::error::{Error, Result};
use crate::hilbert::{
    inner, mixture_of, vec_norm, BranchDecomposition, DensityMatrix, HilbertLayout, StateVector,
    Subsystem,
};
use crate::operator::{Operator, OuterSum};
use crate::pauli::{Pauli, PauliString, PauliSum, Phase};
use crate::superselection::deviation;

const MODULE: &str = "chain_cascade";
const TOL: f64 = 1e-10;

/// Label of atom `j` of chain `chain` (1-based). Chain 1 uses the plain
/// Coleman–Hepp labels.
pub fn cascade_label(chain: usize, j: usize) -> String {
    if chain == 1 {
        atom_label(j)
    } else {
        format!("{chain}.{j}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeModel {
    chains: Vec<usize>,
    a1: Complex64,
    a2: Complex64,
    layout: Arc<HilbertLayout>,
}

impl CascadeModel {
    pub fn new(chains: Vec<usize>, a1: Complex64, a2: Complex64) -> Result<Self> {
        if chains.len() < 2 {
            return Err(Error::precondition(MODULE, "m >= 2 chains are required for a cascade"));
        }
        if let Some(k) = chains.iter().position(|&n| n == 0) {
            return Err(Error::precondition(MODULE, format!("chain {} has no atoms", k + 1)));
        }
        let total = a1.norm_sqr() + a2.norm_sqr();
        if (total - 1.0).abs() > TOL {
            return Err(Error::AmplitudesNotNormalized(total));
        }
        let mut subsystems = vec![Subsystem::qubit(SYSTEM_LABEL)];
        for (k, &n) in chains.iter().enumerate() {
            subsystems.extend((1..=n).map(|j| Subsystem::qubit(cascade_label(k + 1, j))));
        }
        let layout = Arc::new(HilbertLayout::new(subsystems)?);
        Ok(CascadeModel {
            chains,
            a1,
            a2,
            layout,
        })
    }

    /// `m` chains of one atom each.
    pub fn uniform(m: usize, a1: Complex64, a2: Complex64) -> Result<Self> {
        CascadeModel::new(vec![1; m], a1, a2)
    }

    pub fn chains(&self) -> &[usize] {
        &self.chains
    }

    pub fn m(&self) -> usize {
        self.chains.len()
    }

    pub fn a1(&self) -> Complex64 {
        self.a1
    }

    pub fn a2(&self) -> Complex64 {
        self.a2
    }

    pub fn layout(&self) -> &HilbertLayout {
        &self.layout
    }

    pub fn shared_layout(&self) -> &Arc<HilbertLayout> {
        &self.layout
    }

    /// Atom labels of chain `k` (1-based).
    pub fn chain_labels(&self, k: usize) -> Vec<String> {
        (1..=self.chains[k - 1]).map(|j| cascade_label(k, j)).collect()
    }

    /// Every observer label: all chain atoms, without `S0`.
    pub fn observer_labels(&self) -> Vec<String> {
        (1..=self.m()).flat_map(|k| self.chain_labels(k)).collect()
    }

    /// `(a1|u0> + a2|d0>)` with every chain all-up.
    pub fn initial_state(&self) -> StateVector {
        let stride = self.layout.qubit_stride(SYSTEM_LABEL).expect("system qubit");
        let mut amps = vec![Complex64::new(0.0, 0.0); self.layout.dim()];
        amps[0] = self.a1;
        amps[stride] = self.a2;
        StateVector::from_unitary_image(self.layout.clone(), amps)
    }

    /// State at `t1`: chain 1 has measured `σ_z^0`.
    pub fn after_first_chain(&self) -> Result<StateVector> {
        let mut s = self.initial_state();
        for i in 1..=self.chains[0] {
            s = passage_step(&s, i, std::f64::consts::FRAC_PI_2)?;
        }
        Ok(s)
    }

    /// `B = σ_x^0 Π σ_y^i` over chain 1.
    pub fn first_it_operator(&self) -> ItOperator {
        ItOperator::Pauli(it_operator(self.chains[0]))
    }

    /// Polarization of chain `k`.
    pub fn pointer(&self, k: usize) -> PauliSum {
        polarization(&self.chain_labels(k))
    }

    /// Runs stages `2..=m`.
    pub fn run(&self) -> Result<CascadeRun> {
        let after_passage = self.after_first_chain()?;
        let mut state = after_passage.clone();
        let mut measured = self.first_it_operator();
        let mut stages = Vec::with_capacity(self.m() - 1);
        for k in 2..=self.m() {
            let targets = self.chain_labels(k);
            let before = b_eigenbranches(&state, &measured)?;
            let after = before.map_states(|s| second_chain_measure(s, &measured, &targets))?;
            state = second_chain_measure(&state, &measured, &targets)?;
            let next = joint_it_operator(&after)?;
            stages.push(CascadeStage {
                chain: k,
                measured,
                before,
                after,
                state: state.clone(),
            });
            measured = next;
        }
        Ok(CascadeRun {
            after_passage,
            stages,
            terminal: measured,
        })
    }
}

/// An interference-term operator: a Pauli involution, or the joint operator
/// `|φ1><φ2| + |φ2><φ1|` of two orthonormal branch states.
#[derive(Debug, Clone, PartialEq)]
pub enum ItOperator {
    Pauli(PauliSum),
    Joint { phi1: StateVector, phi2: StateVector },
}

impl ItOperator {
    pub fn to_operator(&self) -> Result<Operator> {
        match self {
            ItOperator::Pauli(p) => Ok(Operator::Pauli(p.clone())),
            ItOperator::Joint { phi1, phi2 } => {
                let one = Complex64::new(1.0, 0.0);
                Ok(Operator::Outer(
                    OuterSum::new(phi1.shared_layout().clone())
                        .with_term(one, phi1, phi2)?
                        .with_term(one, phi2, phi1)?,
                ))
            }
        }
    }

    pub fn expectation(&self, state: &StateVector) -> Result<f64> {
        Ok(self.to_operator()?.expectation(state)?.re)
    }

    pub fn trace_with(&self, rho: &DensityMatrix) -> Result<f64> {
        Ok(self.to_operator()?.trace_with(rho)?.re)
    }

    /// `(P_+ v, P_- v)`. For a joint operator the remainder lies in its
    /// kernel.
    fn split(&self, layout: &HilbertLayout, v: &[Complex64]) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        match self {
            ItOperator::Pauli(p) => {
                let bv = p.apply_raw(layout, v)?;
                let plus = v.iter().zip(&bv).map(|(a, b)| (a + b) * 0.5).collect();
                let minus = v.iter().zip(&bv).map(|(a, b)| (a - b) * 0.5).collect();
                Ok((plus, minus))
            }
            ItOperator::Joint { phi1, phi2 } => {
                let (chi_p, chi_m) = joint_eigenvectors(phi1, phi2);
                let cp = inner(&chi_p, v);
                let cm = inner(&chi_m, v);
                Ok((
                    chi_p.iter().map(|x| x * cp).collect(),
                    chi_m.iter().map(|x| x * cm).collect(),
                ))
            }
        }
    }

    fn layout_dim(&self) -> Option<usize> {
        match self {
            ItOperator::Pauli(_) => None,
            ItOperator::Joint { phi1, .. } => Some(phi1.dim()),
        }
    }
}

/// `(φ1 ± φ2)/√2`.
fn joint_eigenvectors(phi1: &StateVector, phi2: &StateVector) -> (Vec<Complex64>, Vec<Complex64>) {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let a = phi1.amplitudes();
    let b = phi2.amplitudes();
    (
        a.iter().zip(b).map(|(x, y)| (x + y) * r).collect(),
        a.iter().zip(b).map(|(x, y)| (x - y) * r).collect(),
    )
}

fn involution_defect(b: &PauliSum) -> f64 {
    b.product(b).minus(&PauliSum::identity()).norm_bound()
}

/// `ψ = b1|B+> + b2|B->`. A component with zero weight gets a
/// representative eigenvector so the decomposition always has two branches.
pub fn b_eigenbranches(psi: &StateVector, b: &ItOperator) -> Result<BranchDecomposition> {
    let layout = psi.layout();
    if let ItOperator::Pauli(p) = b {
        let defect = involution_defect(p);
        if defect > TOL {
            return Err(Error::NotInvolution(defect));
        }
    }
    if let Some(d) = b.layout_dim() {
        if d != psi.dim() {
            return Err(Error::LengthMismatch {
                expected: psi.dim(),
                got: d,
            });
        }
    }
    let v = psi.amplitudes();
    let (plus, minus) = b.split(layout, v)?;
    let rest: f64 = v
        .iter()
        .zip(plus.iter().zip(&minus))
        .map(|(x, (p, m))| (x - p - m).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if rest > TOL {
        return Err(Error::Support(format!(
            "state has weight {rest:e} outside the ±1 eigenspaces"
        )));
    }
    let mut branches = Vec::with_capacity(2);
    for (sign, comp) in [(1.0, plus), (-1.0, minus)] {
        let n = vec_norm(&comp);
        if n > TOL {
            let unit: Vec<Complex64> = comp.iter().map(|x| x / n).collect();
            let amp = inner(&unit, v);
            branches.push((amp, StateVector::from_unitary_image(psi.shared_layout().clone(), unit)));
        } else {
            let rep = representative(psi, b, sign)?;
            branches.push((Complex64::new(0.0, 0.0), rep));
        }
    }
    BranchDecomposition::new(branches)
}

/// Normalized eigenvector with eigenvalue `sign`, projected from the basis
/// states in order of decreasing weight in `psi`.
fn representative(psi: &StateVector, b: &ItOperator, sign: f64) -> Result<StateVector> {
    let layout = psi.layout();
    if let ItOperator::Joint { phi1, phi2 } = b {
        let (p, m) = joint_eigenvectors(phi1, phi2);
        let v = if sign > 0.0 { p } else { m };
        return Ok(StateVector::from_unitary_image(psi.shared_layout().clone(), v));
    }
    let mut order: Vec<usize> = (0..psi.dim()).collect();
    let amps = psi.amplitudes();
    order.sort_by(|&i, &j| amps[j].norm().total_cmp(&amps[i].norm()));
    let mut e = vec![Complex64::new(0.0, 0.0); psi.dim()];
    for i in order {
        e[i] = Complex64::new(1.0, 0.0);
        let (p, m) = b.split(layout, &e)?;
        e[i] = Complex64::new(0.0, 0.0);
        let comp = if sign > 0.0 { p } else { m };
        let n = vec_norm(&comp);
        if n > TOL {
            let unit = comp.into_iter().map(|x| x / n).collect();
            return Ok(StateVector::from_unitary_image(psi.shared_layout().clone(), unit));
        }
    }
    Err(Error::Support("operator has no eigenvector of the requested sign".into()))
}

/// `Π_j (-i σ_x^j)` over the target atoms.
fn flip_string(targets: &[String]) -> PauliString {
    let phase = Phase::from_power(3 * targets.len() as i64);
    PauliString::new(phase, targets.iter().map(|t| (t.clone(), Pauli::X)))
}

/// Controlled flip of the target chain on the `-1` eigenspace of `b`:
/// `U = P_+ ⊗ I + P_- ⊗ Π(-iσ_x) + P_0 ⊗ I`, with `P_0` the kernel of a
/// joint operator.
pub fn second_chain_measure<S: AsRef<str>>(
    state: &StateVector,
    b: &ItOperator,
    targets: &[S],
) -> Result<StateVector> {
    let layout = state.layout();
    let targets: Vec<String> = targets.iter().map(|t| t.as_ref().to_string()).collect();
    let strides = targets
        .iter()
        .map(|t| layout.qubit_stride(t))
        .collect::<Result<Vec<_>>>()?;
    let not_ready: f64 = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| strides.iter().any(|s| (i / s) % 2 == 1))
        .map(|(_, a)| a.norm_sqr())
        .sum();
    if not_ready > TOL {
        return Err(Error::TargetNotReady(not_ready));
    }
    if let ItOperator::Pauli(p) = b {
        let defect = involution_defect(p);
        if defect > TOL {
            return Err(Error::NotInvolution(defect));
        }
        if let Some(t) = targets.iter().find(|t| p.support().contains(*t)) {
            return Err(Error::Support(format!("operator acts on target atom {t}")));
        }
    }
    let v = state.amplitudes();
    let (_, minus) = b.split(layout, v)?;
    let flip = PauliSum::from(flip_string(&targets));
    let flipped = flip.apply_raw(layout, &minus)?;
    let out = v
        .iter()
        .zip(&minus)
        .zip(&flipped)
        .map(|((x, m), f)| x - m + f)
        .collect();
    Ok(StateVector::from_unitary_image(state.shared_layout().clone(), out))
}

/// `|φ1><φ2| + |φ2><φ1|` over the normalized states of a two-branch
/// decomposition.
pub fn joint_it_operator(branches: &BranchDecomposition) -> Result<ItOperator> {
    if branches.len() != 2 {
        return Err(Error::LengthMismatch {
            expected: 2,
            got: branches.len(),
        });
    }
    Ok(ItOperator::Joint {
        phi1: branches.state(0).clone(),
        phi2: branches.state(1).clone(),
    })
}

/// `Π_{j'} σ_y^{j'} Σ_{n=0}^{N} B^p_n` with `B^p_n` the sum over `n`-atom
/// subsets of chain 1 of `Π σ_x`, weighted by `σ_z^0` for even `n`.
pub fn build_b2_printed<S: AsRef<str>>(n_atoms: usize, primed: &[S]) -> Result<PauliSum> {
    if n_atoms == 0 {
        return Err(Error::precondition(MODULE, "N >= 1 atoms in the first chain"));
    }
    let prefix = PauliString::new(
        Phase::ONE,
        primed.iter().map(|p| (p.as_ref().to_string(), Pauli::Y)),
    );
    let z0 = PauliString::single(SYSTEM_LABEL, Pauli::Z);
    let mut sum = PauliSum::zero();
    for mask in 0u64..(1u64 << n_atoms) {
        let flips = mask.count_ones();
        let mut s = PauliString::new(
            Phase::ONE,
            (1..=n_atoms)
                .filter(|i| mask >> (i - 1) & 1 == 1)
                .map(|i| (atom_label(i), Pauli::X)),
        );
        if flips % 2 == 0 {
            s = z0.multiply(&s);
        }
        sum.add_term(Complex64::new(1.0, 0.0), &prefix.multiply(&s));
    }
    Ok(sum)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeStage {
    /// Chain doing the measuring (2-based index into the cascade).
    pub chain: usize,
    pub measured: ItOperator,
    /// Eigenbranches of `measured` on the incoming state.
    pub before: BranchDecomposition,
    /// The same branches after the controlled flip.
    pub after: BranchDecomposition,
    pub state: StateVector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CascadeRun {
    pub after_passage: StateVector,
    pub stages: Vec<CascadeStage>,
    /// Joint IT operator of the final branch pair.
    pub terminal: ItOperator,
}

impl CascadeRun {
    pub fn final_state(&self) -> &StateVector {
        &self.stages.last().expect("m >= 2").state
    }

    pub fn final_branches(&self) -> &BranchDecomposition {
        &self.stages.last().expect("m >= 2").after
    }
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TradeoffReport {
    /// `μ̄_z` of chain 1 at `t1`.
    pub mu_before: f64,
    /// `B̄` at `t1`.
    pub b_before: f64,
    /// `μ̄_z` of chain 1 after chain 2 has measured `B`.
    pub mu_after: f64,
    /// Chain-2 polarization after its measurement.
    pub bprime_after: f64,
    /// `B` eigenbranch amplitudes as `[re, im]`.
    pub b1: [f64; 2],
    pub b2: [f64; 2],
}

/// What chain 2 gains (`B̄`) and what chain 1 loses (`μ̄_z`).
pub fn information_tradeoff(model: &CascadeModel) -> Result<TradeoffReport> {
    let t1 = model.after_first_chain()?;
    let b = model.first_it_operator();
    let mu1 = Operator::Pauli(model.pointer(1));
    let branches = b_eigenbranches(&t1, &b)?;
    let t2 = second_chain_measure(&t1, &b, &model.chain_labels(2))?;
    Ok(TradeoffReport {
        mu_before: mu1.expectation(&t1)?.re,
        b_before: b.expectation(&t1)?,
        mu_after: mu1.expectation(&t2)?.re,
        bprime_after: Operator::Pauli(model.pointer(2)).expectation(&t2)?.re,
        b1: pair(branches.amplitude(0)),
        b2: pair(branches.amplitude(1)),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct B2Comparison {
    pub printed_pure: f64,
    pub printed_mixed: f64,
    pub joint_pure: f64,
    pub joint_mixed: f64,
    pub printed_hermiticity_defect: f64,
}

/// Printed `B2` against the joint IT operator of the stage-2 branches, on
/// the stage-2 pure state and its branch mixture.
pub fn compare_b2(model: &CascadeModel) -> Result<B2Comparison> {
    let t1 = model.after_first_chain()?;
    let b = model.first_it_operator();
    let before = b_eigenbranches(&t1, &b)?;
    let targets = model.chain_labels(2);
    let after = before.map_states(|s| second_chain_measure(s, &b, &targets))?;
    let pure = after.superposition();
    let mixed = mixture_of(&after);
    let printed = build_b2_printed(model.chains()[0], &targets)?;
    let joint = joint_it_operator(&after)?;
    Ok(B2Comparison {
        printed_pure: Operator::Pauli(printed.clone()).expectation(&pure)?.re,
        printed_mixed: printed.trace_with(&mixed)?.re,
        joint_pure: joint.expectation(&pure)?,
        joint_mixed: joint.trace_with(&mixed)?,
        printed_hermiticity_defect: printed.hermiticity_defect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnmeasuredIt {
    /// Whether a terminal IT operator acting on every observer atom exists.
    pub exists: bool,
    pub support: Vec<String>,
    pub covers_observer: bool,
    /// `|Tr ρ_p W - Tr ρ_m W|` for the terminal witness `W`.
    pub deviation: f64,
    /// Terminal branch amplitudes as `[re, im]`.
    pub b1: [f64; 2],
    pub b2: [f64; 2],
}

/// The joint IT operator of the fully consumed cascade: no chain is left to
/// house it.
pub fn unmeasured_it_exists(model: &CascadeModel) -> Result<(UnmeasuredIt, ItOperator)> {
    let run = model.run()?;
    let branches = run.final_branches();
    let witness = run.terminal.clone();
    let op = witness.to_operator()?;
    let support = op.support(model.layout(), TOL)?;
    let covers_observer = model.observer_labels().iter().all(|l| support.contains(l));
    let deviation = deviation(&op, run.final_state(), &mixture_of(branches))?;
    Ok((
        UnmeasuredIt {
            exists: covers_observer,
            support,
            covers_observer,
            deviation,
            b1: pair(branches.amplitude(0)),
            b2: pair(branches.amplitude(1)),
        },
        witness,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn layout_and_labels() {
        let m = CascadeModel::new(vec![2, 1, 1], c(0.6, 0.), c(0.8, 0.)).unwrap();
        assert_eq!(m.layout().labels().collect::<Vec<_>>(), vec!["0", "1", "2", "2.1", "3.1"]);
        assert_eq!(m.observer_labels(), vec!["1", "2", "2.1", "3.1"]);
        assert!(matches!(
            CascadeModel::uniform(1, c(1., 0.), c(0., 0.)),
            Err(Error::Precondition { .. })
        ));
        assert!(matches!(
            CascadeModel::uniform(2, c(1., 0.), c(1., 0.)),
            Err(Error::AmplitudesNotNormalized(_))
        ));
    }

    #[test]
    fn equal_amplitudes_sit_in_minus_eigenspace() {
        let m = CascadeModel::uniform(2, c(FRAC_1_SQRT_2, 0.), c(FRAC_1_SQRT_2, 0.)).unwrap();
        let t1 = m.after_first_chain().unwrap();
        let br = b_eigenbranches(&t1, &m.first_it_operator()).unwrap();
        assert!(br.amplitude(0).norm() < 1e-15);
        assert!((br.amplitude(1).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn basis_state_splits_evenly() {
        let m = CascadeModel::uniform(2, c(1., 0.), c(0., 0.)).unwrap();
        let t1 = m.after_first_chain().unwrap();
        let br = b_eigenbranches(&t1, &m.first_it_operator()).unwrap();
        assert!((br.amplitude(0).norm_sqr() - 0.5).abs() < 1e-15);
        assert!((br.amplitude(1).norm_sqr() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn non_involution_rejected() {
        let m = CascadeModel::uniform(2, c(1., 0.), c(0., 0.)).unwrap();
        let t1 = m.after_first_chain().unwrap();
        let bad = ItOperator::Pauli(it_operator(1).scale(c(2., 0.)));
        assert!(matches!(b_eigenbranches(&t1, &bad), Err(Error::NotInvolution(_))));
    }

    #[test]
    fn target_must_be_ready() {
        let m = CascadeModel::uniform(2, c(0.6, 0.), c(0.8, 0.)).unwrap();
        let t1 = m.after_first_chain().unwrap();
        let b = m.first_it_operator();
        let t2 = second_chain_measure(&t1, &b, &m.chain_labels(2)).unwrap();
        assert!((t2.norm() - 1.0).abs() < 1e-15);
        assert!(matches!(
            second_chain_measure(&t2, &b, &m.chain_labels(2)),
            Err(Error::TargetNotReady(_))
        ));
    }

    #[test]
    fn plus_eigenstate_leaves_target_alone() {
        let m = CascadeModel::uniform(2, c(FRAC_1_SQRT_2, 0.), c(-FRAC_1_SQRT_2, 0.)).unwrap();
        let t1 = m.after_first_chain().unwrap();
        let b = m.first_it_operator();
        assert!((b.expectation(&t1).unwrap() - 1.0).abs() < 1e-15);
        let t2 = second_chain_measure(&t1, &b, &m.chain_labels(2)).unwrap();
        assert!(t2.distance(&t1).unwrap() < 1e-15);
    }

    #[test]
    fn tradeoff_at_seventy_percent() {
        let m = CascadeModel::uniform(2, c(0.7f64.sqrt(), 0.), c(0., 0.3f64.sqrt())).unwrap();
        let r = information_tradeoff(&m).unwrap();
        assert!((r.mu_before - 0.4).abs() < 1e-12);
        assert!(r.mu_after.abs() < 1e-12);
        assert!((r.bprime_after - r.b_before).abs() < 1e-12);
    }

    #[test]
    fn b2_printed_structure_at_one_atom() {
        let b2 = build_b2_printed(1, &["2.1"]).unwrap();
        let expected: PauliSum = "Z0*Y2.1 + X1*Y2.1".parse().unwrap();
        assert_eq!(b2, expected);
        assert!(b2.is_hermitian(1e-15));
        assert_eq!(build_b2_printed(3, &["2.1"]).unwrap().len(), 8);
    }

    #[test]
    fn joint_operator_values() {
        let m = CascadeModel::uniform(2, c(0.6, 0.), c(0., 0.8)).unwrap();
        let run = m.run().unwrap();
        let after = run.final_branches();
        let j = joint_it_operator(after).unwrap();
        let expected = 2.0 * (after.amplitude(0).conj() * after.amplitude(1)).re;
        assert!((j.expectation(run.final_state()).unwrap() - expected).abs() < 1e-12);
        assert!(j.trace_with(&mixture_of(after)).unwrap().abs() < 1e-15);
    }

    #[test]
    fn terminal_witness_covers_observer() {
        let m = CascadeModel::uniform(2, c(0.6, 0.), c(0., 0.8)).unwrap();
        let (w, _) = unmeasured_it_exists(&m).unwrap();
        assert!(w.exists);
        assert_eq!(w.support, vec!["0", "1", "2.1"]);
        assert!(w.deviation > 0.1);
    }
}

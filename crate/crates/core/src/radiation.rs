//! A particle path memorized by a lattice that radiates photons.
//!
//! Layout: `path ⊗ lattice ⊗ m1 ⊗ … ⊗ mM`, optionally followed by background
//! modes `b1, b2, …` holding photons uncorrelated with the lattice. Path
//! `x1`/`x2` and lattice `L`/`L'` are the up/down states of their qubits.
//! Mode dimension equals the cutoff, so occupations run `0..cutoff`.
//!
//! Observables available to a photon-counting observer are functions of the
//! number operators tensored with anything on `path ⊗ lattice`. They never
//! connect the vacuum to a photon pattern, so the emitted field makes the two
//! lattice branches indistinguishable from their mixture.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{
    hermiticity_defect, mixture_of, BranchDecomposition, HilbertLayout, StateVector, Subsystem,
};
use crate::operator::{LocalOperator, Operator};
use crate::pauli::PauliSum;
use crate::superselection::{all_pauli_strings, discriminate, DiscriminationVerdict, Observable, ObservableSet};
use crate::DEFAULT_TOLERANCE;

const MODULE: &str = "radiation_decoherence";

pub const PATH_LABEL: &str = "path";
pub const LATTICE_LABEL: &str = "lattice";

pub fn mode_label(m: usize) -> String {
    format!("m{m}")
}

pub fn background_label(k: usize) -> String {
    format!("b{k}")
}

/// Occupation of each emission mode with its production amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct PhotonPattern {
    pub occupations: Vec<usize>,
    pub amplitude: Complex64,
}

impl PhotonPattern {
    pub fn new(occupations: Vec<usize>, amplitude: Complex64) -> Self {
        PhotonPattern {
            occupations,
            amplitude,
        }
    }

    pub fn total(&self) -> usize {
        self.occupations.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiationModel {
    a1: Complex64,
    a2: Complex64,
    modes: usize,
    cutoff: usize,
    photons: Vec<PhotonPattern>,
    background: Vec<usize>,
    layout: Arc<HilbertLayout>,
}

impl RadiationModel {
    pub fn new(
        a1: Complex64,
        a2: Complex64,
        modes: usize,
        cutoff: usize,
        photons: Vec<PhotonPattern>,
    ) -> Result<Self> {
        Self::with_background(a1, a2, modes, cutoff, photons, Vec::new())
    }

    /// `background[k]` photons sit in mode `b{k+1}` in both branches.
    pub fn with_background(
        a1: Complex64,
        a2: Complex64,
        modes: usize,
        cutoff: usize,
        photons: Vec<PhotonPattern>,
        background: Vec<usize>,
    ) -> Result<Self> {
        if modes == 0 {
            return Err(Error::precondition(MODULE, "M >= 1 emission modes"));
        }
        if cutoff < 2 {
            return Err(Error::precondition(MODULE, "cutoff d >= 2"));
        }
        let total = a1.norm_sqr() + a2.norm_sqr();
        if (total - 1.0).abs() > crate::hilbert::INPUT_NORM_TOLERANCE {
            return Err(Error::AmplitudesNotNormalized(total));
        }
        if photons.is_empty() {
            return Err(Error::InvalidPattern("no photon patterns given".into()));
        }
        for (k, p) in photons.iter().enumerate() {
            if p.occupations.len() != modes {
                return Err(Error::InvalidPattern(format!(
                    "pattern {:?} has {} entries for {modes} modes",
                    p.occupations,
                    p.occupations.len()
                )));
            }
            if let Some(&n) = p.occupations.iter().find(|&&n| n >= cutoff) {
                return Err(Error::InvalidPattern(format!(
                    "occupation {n} exceeds cutoff {cutoff} (max {})",
                    cutoff - 1
                )));
            }
            if p.total() == 0 {
                return Err(Error::InvalidPattern("vacuum pattern among photon amplitudes".into()));
            }
            if photons[..k].iter().any(|q| q.occupations == p.occupations) {
                return Err(Error::InvalidPattern(format!("duplicate pattern {:?}", p.occupations)));
            }
        }
        let weight: f64 = photons.iter().map(|p| p.amplitude.norm_sqr()).sum();
        if (weight - 1.0).abs() > crate::hilbert::INPUT_NORM_TOLERANCE {
            return Err(Error::AmplitudesNotNormalized(weight));
        }
        if let Some(&n) = background.iter().find(|&&n| n >= cutoff) {
            return Err(Error::InvalidPattern(format!(
                "background occupation {n} exceeds cutoff {cutoff}"
            )));
        }
        let mut subsystems = vec![Subsystem::qubit(PATH_LABEL), Subsystem::qubit(LATTICE_LABEL)];
        subsystems.extend((1..=modes).map(|m| Subsystem::mode(mode_label(m), cutoff)));
        subsystems.extend((1..=background.len()).map(|k| Subsystem::mode(background_label(k), cutoff)));
        let layout = Arc::new(HilbertLayout::new(subsystems)?);
        Ok(RadiationModel {
            a1,
            a2,
            modes,
            cutoff,
            photons,
            background,
            layout,
        })
    }

    pub fn a1(&self) -> Complex64 {
        self.a1
    }

    pub fn a2(&self) -> Complex64 {
        self.a2
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn photons(&self) -> &[PhotonPattern] {
        &self.photons
    }

    pub fn background(&self) -> &[usize] {
        &self.background
    }

    pub fn layout(&self) -> &HilbertLayout {
        &self.layout
    }

    pub fn shared_layout(&self) -> &Arc<HilbertLayout> {
        &self.layout
    }

    pub fn mode_labels(&self) -> Vec<String> {
        (1..=self.modes).map(mode_label).collect()
    }

    fn index(&self, path: usize, lattice: usize, field: &[usize]) -> usize {
        let mut digits = vec![path, lattice];
        digits.extend_from_slice(field);
        digits.extend_from_slice(&self.background);
        self.layout.flat_index(&digits).expect("digits within layout")
    }
}

impl Default for RadiationModel {
    /// One mode, cutoff 3, one- and two-photon patterns with equal weight,
    /// equal path amplitudes.
    fn default() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        RadiationModel::new(
            Complex64::new(r, 0.0),
            Complex64::new(r, 0.0),
            1,
            3,
            vec![
                PhotonPattern::new(vec![1], Complex64::new(r, 0.0)),
                PhotonPattern::new(vec![2], Complex64::new(r, 0.0)),
            ],
        )
        .expect("valid default model")
    }
}

/// `a1|x1,L,V0> + a2 Σ_j c_j |x2,L',j>` and its two branches.
pub fn build_final_state(model: &RadiationModel) -> Result<(StateVector, BranchDecomposition)> {
    let dim = model.layout.dim();
    let vacuum = vec![0; model.modes];
    let mut phi1 = vec![Complex64::new(0.0, 0.0); dim];
    phi1[model.index(0, 0, &vacuum)] = Complex64::new(1.0, 0.0);
    let mut phi2 = vec![Complex64::new(0.0, 0.0); dim];
    for p in &model.photons {
        phi2[model.index(1, 1, &p.occupations)] += p.amplitude;
    }
    let layout = model.layout.clone();
    let branches = BranchDecomposition::new(vec![
        (model.a1, StateVector::new(layout.clone(), phi1)?),
        (model.a2, StateVector::new(layout, phi2)?),
    ])?;
    Ok((branches.superposition(), branches))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    /// Diagonal in the occupation basis.
    NumberDiagonal,
    General,
}

/// Hermitian operator on a set of emission modes.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldObservable {
    pub name: String,
    pub targets: Vec<String>,
    pub matrix: DMatrix<Complex64>,
    pub kind: FieldKind,
}

impl FieldObservable {
    pub fn new(name: impl Into<String>, targets: Vec<String>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let defect = hermiticity_defect(&matrix);
        if defect > DEFAULT_TOLERANCE {
            return Err(Error::NotHermitian(defect));
        }
        let diagonal = (0..matrix.nrows())
            .all(|i| (0..matrix.ncols()).all(|j| i == j || matrix[(i, j)] == Complex64::new(0.0, 0.0)));
        Ok(FieldObservable {
            name: name.into(),
            targets,
            matrix,
            kind: if diagonal {
                FieldKind::NumberDiagonal
            } else {
                FieldKind::General
            },
        })
    }

    fn diagonal(name: String, targets: Vec<String>, values: Vec<f64>) -> Self {
        let n = values.len();
        let matrix = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(values[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        FieldObservable {
            name,
            targets,
            matrix,
            kind: FieldKind::NumberDiagonal,
        }
    }

    /// `n̂_m`.
    pub fn number(model: &RadiationModel, m: usize) -> Self {
        let values = (0..model.cutoff).map(|n| n as f64).collect();
        Self::diagonal(format!("n_{}", mode_label(m)), vec![mode_label(m)], values)
    }

    /// `n̂_m²`.
    pub fn number_squared(model: &RadiationModel, m: usize) -> Self {
        let values = (0..model.cutoff).map(|n| (n * n) as f64).collect();
        Self::diagonal(format!("n_{}^2", mode_label(m)), vec![mode_label(m)], values)
    }

    /// `n̂_m n̂_m'`.
    pub fn number_product(model: &RadiationModel, m: usize, m2: usize) -> Self {
        let d = model.cutoff;
        let values = (0..d * d).map(|k| ((k / d) * (k % d)) as f64).collect();
        Self::diagonal(
            format!("n_{}*n_{}", mode_label(m), mode_label(m2)),
            vec![mode_label(m), mode_label(m2)],
            values,
        )
    }

    /// `a_m + a_m†` on the truncated mode.
    pub fn quadrature(model: &RadiationModel, m: usize) -> Self {
        let d = model.cutoff;
        let matrix = DMatrix::from_fn(d, d, |i, j| {
            if i + 1 == j || j + 1 == i {
                Complex64::new(i.max(j) as f64, 0.0).sqrt()
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        FieldObservable {
            name: format!("x_{}", mode_label(m)),
            targets: vec![mode_label(m)],
            matrix,
            kind: FieldKind::General,
        }
    }

    pub fn identity(model: &RadiationModel) -> Self {
        Self::diagonal("I".into(), vec![mode_label(1)], vec![1.0; model.cutoff])
    }

    /// Whether the matrix commutes with every occupation projector.
    pub fn is_number_diagonal(&self) -> bool {
        self.kind == FieldKind::NumberDiagonal
    }

    fn local_index(&self, model: &RadiationModel, occupations: &[usize]) -> Result<usize> {
        let mut idx = 0;
        for t in &self.targets {
            let m: usize = t
                .strip_prefix('m')
                .and_then(|s| s.parse().ok())
                .filter(|m| (1..=model.modes).contains(m))
                .ok_or_else(|| Error::UnknownLabel(t.clone()))?;
            idx = idx * model.cutoff + occupations[m - 1];
        }
        Ok(idx)
    }
}

/// `max_j |<V0|Q_E|j>|` over the model's photon patterns.
pub fn check_no_vacuum_interference(q: &FieldObservable, model: &RadiationModel) -> Result<f64> {
    let vacuum = vec![0; model.modes];
    let v0 = q.local_index(model, &vacuum)?;
    let mut worst: f64 = 0.0;
    for p in &model.photons {
        // modes outside the targets must match the vacuum
        let untouched_vacuum = (1..=model.modes)
            .filter(|m| !q.targets.contains(&mode_label(*m)))
            .all(|m| p.occupations[m - 1] == 0);
        if !untouched_vacuum {
            continue;
        }
        let j = q.local_index(model, &p.occupations)?;
        worst = worst.max(q.matrix[(v0, j)].norm());
    }
    Ok(worst)
}

/// `S ⊗ F` with `S` a 4×4 Hermitian on `path ⊗ lattice`.
pub fn system_field_observable(system: &DMatrix<Complex64>, field: &FieldObservable) -> Result<Operator> {
    if system.shape() != (4, 4) {
        return Err(Error::LayoutMismatch("system factor must be 4x4".into()));
    }
    let defect = hermiticity_defect(system);
    if defect > DEFAULT_TOLERANCE {
        return Err(Error::NotHermitian(defect));
    }
    let mut targets = vec![PATH_LABEL.to_string(), LATTICE_LABEL.to_string()];
    targets.extend(field.targets.iter().cloned());
    Ok(Operator::Local(LocalOperator::new(targets, system.kronecker(&field.matrix))?))
}

/// Number-diagonal field generators: `n̂_m`, `n̂_m²` and `n̂_m n̂_m'` (`m < m'`).
pub fn glauber_fields(model: &RadiationModel) -> Vec<FieldObservable> {
    let mut out = Vec::new();
    for m in 1..=model.modes {
        out.push(FieldObservable::number(model, m));
        out.push(FieldObservable::number_squared(model, m));
    }
    for m in 1..=model.modes {
        for m2 in m + 1..=model.modes {
            out.push(FieldObservable::number_product(model, m, m2));
        }
    }
    out
}

/// Every field generator tensored with each of the 16 Pauli strings on
/// `path ⊗ lattice`.
pub fn glauber_generators(model: &RadiationModel) -> Result<ObservableSet> {
    let system_layout = HilbertLayout::qubits([PATH_LABEL, LATTICE_LABEL])?;
    let basis = all_pauli_strings(&[PATH_LABEL, LATTICE_LABEL]);
    let mut generators = Vec::new();
    for field in glauber_fields(model) {
        for s in &basis {
            let sum = PauliSum::from(s.clone());
            let dense = sum.to_dense(&system_layout, 4)?;
            generators.push(Observable::new(
                format!("{sum} ⊗ {}", field.name),
                system_field_observable(&dense, &field)?,
            ));
        }
    }
    ObservableSet::new(
        "glauber",
        generators,
        crate::superselection::DEFAULT_CLOSURE_DEPTH,
        model.layout(),
    )
}

/// `(σ_x^path σ_x^lattice) ⊗ (a + a†)` on mode 1: connects the vacuum
/// branch to the one-photon patterns.
pub fn vacuum_connecting_observable(model: &RadiationModel) -> Result<Observable> {
    let system_layout = HilbertLayout::qubits([PATH_LABEL, LATTICE_LABEL])?;
    let xx: PauliSum = format!("X{PATH_LABEL}*X{LATTICE_LABEL}").parse()?;
    let field = FieldObservable::quadrature(model, 1);
    Ok(Observable::new(
        format!("{xx} ⊗ {}", field.name),
        system_field_observable(&xx.to_dense(&system_layout, 4)?, &field)?,
    ))
}

/// Pure final state against its branch mixture over `allowed`.
pub fn check_c22(model: &RadiationModel, allowed: &ObservableSet, tol: f64) -> Result<DiscriminationVerdict> {
    let (pure, branches) = build_final_state(model)?;
    discriminate(&pure, &mixture_of(&branches), allowed, tol)
}

/// Unmeasured emitted particles after `depth` detector generations, each
/// detector emitting `n_e`: `n_e^depth`, refused above `bound`.
pub fn cascade_growth(n_e: u64, depth: u32, bound: u64) -> Result<u64> {
    if n_e < 2 {
        return Err(Error::precondition(MODULE, "N_e > 1 emitted particles per detector"));
    }
    n_e.checked_pow(depth)
        .filter(|v| *v <= bound)
        .ok_or_else(|| Error::Overflow(format!("{n_e}^{depth} exceeds bound {bound}")))
}

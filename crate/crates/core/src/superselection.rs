//! Pointer sectors, sector-preserving observables and pure/mixed
//! discrimination.
//!
//! A [`SectorDecomposition`] is a direct sum of orthogonal projectors that
//! resolves the identity. Observables commuting with every projector cannot
//! connect sectors, so a pure superposition across sectors and its
//! sector-diagonal mixture give them identical expectations. [`discriminate`]
//! measures exactly that: the largest normalized gap `|Tr ρ_p Q - Tr ρ_m Q|`
//! over an observable family.

use std::collections::HashSet;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, HilbertLayout, StateVector};
use crate::operator::Operator;
use crate::pauli::{Pauli, PauliString, PauliSum};
use crate::DEFAULT_ORACLE_CAP;

/// Eigenvalues closer than this are treated as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

/// Default closure depth for observable families.
pub const DEFAULT_CLOSURE_DEPTH: usize = 2;

const PROJECTOR_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum Projector {
    /// Projector onto a set of computational basis states.
    Mask(Vec<bool>),
    Dense(DMatrix<Complex64>),
}

impl Projector {
    pub fn dim(&self) -> usize {
        match self {
            Projector::Mask(m) => m.len(),
            Projector::Dense(d) => d.nrows(),
        }
    }

    pub fn apply_raw(&self, v: &[Complex64]) -> Vec<Complex64> {
        match self {
            Projector::Mask(m) => v
                .iter()
                .zip(m)
                .map(|(x, keep)| if *keep { *x } else { Complex64::new(0.0, 0.0) })
                .collect(),
            Projector::Dense(d) => {
                let x = nalgebra::DVector::from_column_slice(v);
                (d * x).iter().copied().collect()
            }
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        match self {
            Projector::Mask(m) => DMatrix::from_fn(m.len(), m.len(), |i, j| {
                if i == j && m[i] {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }),
            Projector::Dense(d) => d.clone(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            Projector::Mask(m) => m.iter().filter(|b| **b).count(),
            Projector::Dense(d) => d.trace().re.round() as usize,
        }
    }

    /// `‖P² - P‖` (Frobenius).
    pub fn idempotency_defect(&self) -> f64 {
        match self {
            Projector::Mask(_) => 0.0,
            Projector::Dense(d) => (d * d - d).norm(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sector {
    /// Pointer eigenvalue(s) labelling the sector; several after refinement.
    pub eigenvalues: Vec<f64>,
    pub projector: Projector,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorDecomposition {
    dim: usize,
    sectors: Vec<Sector>,
}

impl SectorDecomposition {
    /// Validates `P_k P_l = δ_kl P_k` and `Σ P_k = I`.
    pub fn new(dim: usize, sectors: Vec<Sector>) -> Result<Self> {
        let d = SectorDecomposition { dim, sectors };
        if d.sectors.iter().any(|s| s.projector.dim() != dim) {
            return Err(Error::LayoutMismatch("projector dimension differs from layout".into()));
        }
        for s in &d.sectors {
            let defect = s.projector.idempotency_defect();
            if defect > PROJECTOR_TOLERANCE {
                return Err(Error::NotIdempotent(defect));
            }
        }
        let ortho = d.orthogonality_defect();
        if ortho > PROJECTOR_TOLERANCE {
            return Err(Error::NotOrthogonal(ortho));
        }
        let complete = d.completeness_defect();
        if complete > PROJECTOR_TOLERANCE {
            return Err(Error::Config(format!(
                "sector projectors do not resolve the identity (defect {complete:e})"
            )));
        }
        Ok(d)
    }

    pub fn trivial(dim: usize) -> Self {
        SectorDecomposition {
            dim,
            sectors: vec![Sector {
                eigenvalues: vec![],
                projector: Projector::Mask(vec![true; dim]),
            }],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn sectors(&self) -> &[Sector] {
        &self.sectors
    }

    pub fn len(&self) -> usize {
        self.sectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sectors.is_empty()
    }

    /// Sector index of every basis state, when all projectors are masks.
    pub fn basis_labels(&self) -> Option<Vec<usize>> {
        let mut labels = vec![usize::MAX; self.dim];
        for (k, s) in self.sectors.iter().enumerate() {
            let Projector::Mask(m) = &s.projector else {
                return None;
            };
            for (i, keep) in m.iter().enumerate() {
                if *keep {
                    labels[i] = k;
                }
            }
        }
        Some(labels)
    }

    /// `‖Σ P_k - I‖` (Frobenius).
    pub fn completeness_defect(&self) -> f64 {
        if self.basis_labels().is_some() {
            let mut counts = vec![0usize; self.dim];
            for s in &self.sectors {
                if let Projector::Mask(m) = &s.projector {
                    for (c, keep) in counts.iter_mut().zip(m) {
                        *c += *keep as usize;
                    }
                }
            }
            return counts
                .iter()
                .map(|&c| (c as f64 - 1.0).powi(2))
                .sum::<f64>()
                .sqrt();
        }
        let mut total = DMatrix::from_element(self.dim, self.dim, Complex64::new(0.0, 0.0));
        for s in &self.sectors {
            total += s.projector.to_dense();
        }
        (total - DMatrix::identity(self.dim, self.dim)).norm()
    }

    /// `max_{k≠l} ‖P_k P_l‖`.
    pub fn orthogonality_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (k, a) in self.sectors.iter().enumerate() {
            for b in &self.sectors[k + 1..] {
                let d = match (&a.projector, &b.projector) {
                    (Projector::Mask(x), Projector::Mask(y)) => {
                        x.iter().zip(y).filter(|(p, q)| **p && **q).count() as f64
                    }
                    (p, q) => (p.to_dense() * q.to_dense()).norm(),
                };
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Common refinement: all nonzero products `P_k Q_l`.
    pub fn refine(&self, other: &SectorDecomposition) -> Result<SectorDecomposition> {
        if self.dim != other.dim {
            return Err(Error::LayoutMismatch("refining decompositions of different size".into()));
        }
        let mut sectors = Vec::new();
        for a in &self.sectors {
            for b in &other.sectors {
                let projector = match (&a.projector, &b.projector) {
                    (Projector::Mask(x), Projector::Mask(y)) => {
                        let m: Vec<bool> = x.iter().zip(y).map(|(p, q)| *p && *q).collect();
                        if !m.iter().any(|b| *b) {
                            continue;
                        }
                        Projector::Mask(m)
                    }
                    (p, q) => {
                        let prod = p.to_dense() * q.to_dense();
                        if prod.norm() < PROJECTOR_TOLERANCE {
                            continue;
                        }
                        Projector::Dense(prod)
                    }
                };
                let mut eigenvalues = a.eigenvalues.clone();
                eigenvalues.extend(&b.eigenvalues);
                sectors.push(Sector {
                    eigenvalues,
                    projector,
                });
            }
        }
        SectorDecomposition::new(self.dim, sectors)
    }

    /// `max_k ‖[Q, P_k]‖`-type defect: for masks, the largest weight that `Q`
    /// carries out of the sector of a basis state.
    pub fn commutation_defect(&self, op: &Operator, layout: &HilbertLayout) -> Result<f64> {
        if layout.dim() != self.dim {
            return Err(Error::LayoutMismatch("sector dimension differs from layout".into()));
        }
        if let Some(labels) = self.basis_labels() {
            let mut e = vec![Complex64::new(0.0, 0.0); self.dim];
            let mut worst: f64 = 0.0;
            for i in 0..self.dim {
                e[i] = Complex64::new(1.0, 0.0);
                let v = op.apply_raw(layout, &e)?;
                e[i] = Complex64::new(0.0, 0.0);
                let leak: f64 = v
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| labels[*j] != labels[i])
                    .map(|(_, x)| x.norm_sqr())
                    .sum();
                worst = worst.max(leak.sqrt());
            }
            return Ok(worst);
        }
        let q = op.to_dense(layout, DEFAULT_ORACLE_CAP)?;
        Ok(self
            .sectors
            .iter()
            .map(|s| {
                let p = s.projector.to_dense();
                (&q * &p - &p * &q).norm()
            })
            .fold(0.0, f64::max))
    }
}

/// `‖(Π_j P_j) ψ - ψ‖`; zero iff `ψ` is a +1 eigenvector of every `P_j`.
pub fn structure_residual(state: &StateVector, projectors: &[Projector]) -> Result<f64> {
    let mut v = state.amplitudes().to_vec();
    for p in projectors.iter().rev() {
        if p.dim() != v.len() {
            return Err(Error::LengthMismatch {
                expected: v.len(),
                got: p.dim(),
            });
        }
        let defect = p.idempotency_defect();
        if defect > PROJECTOR_TOLERANCE {
            return Err(Error::NotIdempotent(defect));
        }
        v = p.apply_raw(&v);
    }
    Ok(v.iter()
        .zip(state.amplitudes())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Spectral projectors of a Hermitian pointer, grouped by eigenvalue and
/// ordered from largest to smallest eigenvalue. Diagonal pointers produce
/// basis masks and need no dense matrix.
pub fn pointer_sectors(pointer: &PauliSum, layout: &HilbertLayout) -> Result<SectorDecomposition> {
    let defect = pointer.hermiticity_defect();
    if defect > crate::DEFAULT_TOLERANCE {
        return Err(Error::NotHermitian(defect));
    }
    let n = layout.dim();
    if pointer.is_diagonal() {
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            e[i] = Complex64::new(1.0, 0.0);
            values.push(pointer.sandwich_raw(layout, &e, &e)?.re);
            e[i] = Complex64::new(0.0, 0.0);
        }
        let groups = group_values(&values);
        let sectors = groups
            .into_iter()
            .map(|(value, members)| {
                let mut mask = vec![false; n];
                for i in members {
                    mask[i] = true;
                }
                Sector {
                    eigenvalues: vec![value],
                    projector: Projector::Mask(mask),
                }
            })
            .collect();
        return SectorDecomposition::new(n, sectors);
    }
    let m = pointer.to_dense(layout, DEFAULT_ORACLE_CAP)?;
    let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    let sectors = group_values(&values)
        .into_iter()
        .map(|(value, members)| {
            let mut p = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
            for k in members {
                let v = eig.eigenvectors.column(k);
                p += v * v.adjoint();
            }
            Sector {
                eigenvalues: vec![value],
                projector: Projector::Dense(p),
            }
        })
        .collect();
    SectorDecomposition::new(n, sectors)
}

/// Clusters values within [`DEGENERACY_TOLERANCE`], descending.
fn group_values(values: &[f64]) -> Vec<(f64, Vec<usize>)> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut groups: Vec<(f64, Vec<usize>)> = Vec::new();
    for i in order {
        match groups.last_mut() {
            Some((v, members)) if (*v - values[i]).abs() <= DEGENERACY_TOLERANCE => members.push(i),
            _ => groups.push((values[i], vec![i])),
        }
    }
    groups
}

/// `Σ_k P_k ρ P_k`.
pub fn sector_decohere(rho: &DensityMatrix, sectors: &SectorDecomposition) -> Result<DensityMatrix> {
    if rho.dim() != sectors.dim() {
        return Err(Error::LayoutMismatch("sector dimension differs from state".into()));
    }
    let m = rho.matrix();
    let out = if let Some(labels) = sectors.basis_labels() {
        DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
            if labels[i] == labels[j] {
                m[(i, j)]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    } else {
        let mut acc = DMatrix::from_element(m.nrows(), m.ncols(), Complex64::new(0.0, 0.0));
        for s in sectors.sectors() {
            let p = s.projector.to_dense();
            acc += &p * m * &p;
        }
        acc
    };
    Ok(DensityMatrix::from_parts(rho.shared_layout().clone(), out))
}

/// A named Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    pub name: String,
    pub op: Operator,
}

impl Observable {
    pub fn new(name: impl Into<String>, op: impl Into<Operator>) -> Self {
        Observable {
            name: name.into(),
            op: op.into(),
        }
    }

    /// Named after the canonical text of the sum.
    pub fn pauli(op: PauliSum) -> Self {
        Observable {
            name: op.to_string(),
            op: Operator::Pauli(op),
        }
    }
}

/// Generating family of an observer's allowed measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservableSet {
    pub name: String,
    pub generators: Vec<Observable>,
    pub closure_depth: usize,
}

impl ObservableSet {
    /// Checks that every generator is Hermitian on `layout`.
    pub fn new(
        name: impl Into<String>,
        generators: Vec<Observable>,
        closure_depth: usize,
        layout: &HilbertLayout,
    ) -> Result<Self> {
        for g in &generators {
            let defect = g.op.hermiticity_defect(layout)?;
            if defect > crate::DEFAULT_TOLERANCE * g.op.norm_bound().max(1.0) {
                return Err(Error::NotHermitian(defect));
            }
        }
        Ok(ObservableSet {
            name: name.into(),
            generators,
            closure_depth,
        })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.generators.iter().any(|g| g.name == name)
    }

    pub fn with(mut self, extra: Observable) -> Self {
        self.generators.push(extra);
        self
    }

    /// Generators plus Hermitian parts of products up to `closure_depth`
    /// factors. Pauli-only results are deduplicated by canonical form and
    /// zero operators are dropped.
    pub fn closure(&self) -> Vec<Observable> {
        let mut seen: HashSet<String> = HashSet::new();
        let mut out: Vec<Observable> = Vec::new();
        let mut push = |obs: Observable, out: &mut Vec<Observable>| -> bool {
            if let Operator::Pauli(p) = &obs.op {
                let p = p.clone().chop(1e-14);
                if p.is_zero() || !seen.insert(ray_key(&p)) {
                    return false;
                }
                out.push(Observable {
                    name: obs.name,
                    op: Operator::Pauli(p),
                });
                return true;
            }
            if let Operator::Local(l) = &obs.op {
                if l.matrix().iter().all(|z| z.norm() <= 1e-14) {
                    return false;
                }
            }
            out.push(obs);
            true
        };
        let mut frontier = Vec::new();
        for g in &self.generators {
            if push(g.clone(), &mut out) {
                frontier.push(out.last().cloned().expect("just pushed"));
            }
        }
        for _ in 1..self.closure_depth.max(1) {
            let mut next = Vec::new();
            for (k, a) in frontier.iter().enumerate() {
                for (l, b) in self.generators.iter().enumerate() {
                    // products of two generators: each unordered pair once
                    if frontier.len() == self.generators.len() && l < k {
                        continue;
                    }
                    let (sym, anti) = Operator::hermitian_parts(&a.op, &b.op);
                    for (tag, op) in [("sym", sym), ("anti", anti)] {
                        let obs = Observable {
                            name: format!("{tag}({} ; {})", a.name, b.name),
                            op,
                        };
                        if push(obs, &mut out) {
                            next.push(out.last().cloned().expect("just pushed"));
                        }
                    }
                }
            }
            frontier = next;
        }
        out
    }
}

/// Canonical text of `p / c_0 * |c_0|`, so scalar multiples share a key.
fn ray_key(p: &PauliSum) -> String {
    let first = p.terms().next().map(|(c, _)| c).unwrap_or(Complex64::new(1.0, 0.0));
    p.scale(first.conj() / first.norm()).chop(1e-14).to_string()
}

/// Every Pauli string over `labels` (`4^n` of them, identity first).
pub fn all_pauli_strings<S: AsRef<str>>(labels: &[S]) -> Vec<PauliString> {
    let mut out = vec![PauliString::identity()];
    for label in labels {
        let mut next = Vec::with_capacity(out.len() * 4);
        for s in &out {
            for p in Pauli::ALL {
                next.push(s.multiply(&PauliString::single(label.as_ref(), p)));
            }
        }
        out = next;
    }
    out
}

/// Candidates commuting with every sector projector.
pub fn restricted_algebra(
    sectors: &SectorDecomposition,
    pool: &ObservableSet,
    layout: &HilbertLayout,
    tol: f64,
) -> Result<ObservableSet> {
    let keep: Vec<bool> = pool
        .generators
        .par_iter()
        .map(|g| Ok(sectors.commutation_defect(&g.op, layout)? <= tol))
        .collect::<Result<Vec<_>>>()?;
    let generators = pool
        .generators
        .iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(g, _)| g.clone())
        .collect();
    Ok(ObservableSet {
        name: format!("sector_preserving({})", pool.name),
        generators,
        closure_depth: pool.closure_depth,
    })
}

/// `|Tr ρ_p Q - Tr ρ_m Q|` for `ρ_p = |pure><pure|`.
pub fn deviation(op: &Operator, pure: &StateVector, mixed: &DensityMatrix) -> Result<f64> {
    let p = op.expectation(pure)?;
    let m = op.trace_with(mixed)?;
    Ok((p - m).norm())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscriminationVerdict {
    pub max_deviation: f64,
    pub witness: Option<String>,
    pub distinguishable: bool,
    /// Number of closure elements evaluated.
    pub evaluated: usize,
}

/// Largest normalized pure/mixed expectation gap over the closure of
/// `allowed`.
pub fn discriminate(
    pure: &StateVector,
    mixed: &DensityMatrix,
    allowed: &ObservableSet,
    tol: f64,
) -> Result<DiscriminationVerdict> {
    if allowed.is_empty() {
        return Err(Error::EmptyObservableSet);
    }
    if pure.layout() != mixed.layout() {
        return Err(Error::LayoutMismatch(format!(
            "{} vs {}",
            pure.layout(),
            mixed.layout()
        )));
    }
    let candidates = allowed.closure();
    let scores = candidates
        .par_iter()
        .map(|obs| {
            let norm = obs.op.norm_bound();
            if norm == 0.0 {
                return Ok(0.0);
            }
            Ok(deviation(&obs.op, pure, mixed)? / norm.max(1.0))
        })
        .collect::<Result<Vec<f64>>>()?;
    let (best, max_deviation) = scores
        .iter()
        .enumerate()
        .fold((0, 0.0f64), |(bi, bv), (i, &v)| if v > bv { (i, v) } else { (bi, bv) });
    let distinguishable = max_deviation > tol;
    Ok(DiscriminationVerdict {
        max_deviation,
        witness: distinguishable.then(|| candidates[best].name.clone()),
        distinguishable,
        evaluated: candidates.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coleman_hepp::{full_passage, it_operator, pointer_operator, ChainModel};
    use crate::hilbert::mixture_of;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pointer_sectors_at_one_and_two_atoms() {
        let m1 = ChainModel::new(1, c(0.6, 0.), c(0.8, 0.)).unwrap();
        let s1 = pointer_sectors(&pointer_operator(1), m1.layout()).unwrap();
        assert_eq!(s1.len(), 2);
        assert_eq!(s1.sectors()[0].eigenvalues, vec![1.0]);
        assert!(s1.sectors().iter().all(|s| s.projector.rank() == 2));
        let m2 = ChainModel::new(2, c(0.6, 0.), c(0.8, 0.)).unwrap();
        let s2 = pointer_sectors(&pointer_operator(2), m2.layout()).unwrap();
        let values: Vec<f64> = s2.sectors().iter().map(|s| s.eigenvalues[0]).collect();
        assert_eq!(values, vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn identity_pointer_has_one_sector() {
        let l = HilbertLayout::qubits(["a", "b"]).unwrap();
        let s = pointer_sectors(&PauliSum::identity(), &l).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.completeness_defect(), 0.0);
    }

    #[test]
    fn dense_sectors_for_non_diagonal_pointer() {
        let l = HilbertLayout::qubits(["a", "b"]).unwrap();
        let x = PauliSum::single("a", Pauli::X);
        let s = pointer_sectors(&x, &l).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s.completeness_defect() < 1e-12);
        assert!(s.basis_labels().is_none());
        let z = Operator::Pauli(PauliSum::single("a", Pauli::Z));
        assert!(s.commutation_defect(&z, &l).unwrap() > 0.1);
        assert!(s.commutation_defect(&Operator::Pauli(x), &l).unwrap() < 1e-12);
    }

    #[test]
    fn structure_residual_cases() {
        let m = ChainModel::new(2, c(0.6, 0.), c(0., 0.8)).unwrap();
        let f = full_passage(&m).unwrap();
        let sectors = pointer_sectors(&pointer_operator(2), m.layout()).unwrap();
        let plus = sectors.sectors()[0].projector.clone();
        assert!((structure_residual(&f, std::slice::from_ref(&plus)).unwrap() - 0.8).abs() < 1e-15);
        let all: Vec<_> = vec![Projector::Mask(vec![true; 8])];
        assert_eq!(structure_residual(&f, &all).unwrap(), 0.0);
        let minus_state = StateVector::basis(m.shared_layout().clone(), &[0, 1, 1]).unwrap();
        assert!((structure_residual(&minus_state, &[plus]).unwrap() - 1.0).abs() < 1e-15);
        let bad = Projector::Dense(DMatrix::from_diagonal_element(8, 8, c(2., 0.)));
        assert!(matches!(structure_residual(&f, &[bad]), Err(Error::NotIdempotent(_))));
    }

    #[test]
    fn decohered_final_state_is_branch_mixture() {
        let m = ChainModel::new(3, c(0.6, 0.), c(0., 0.8)).unwrap();
        let f = full_passage(&m).unwrap();
        let sectors = pointer_sectors(&pointer_operator(3), m.layout()).unwrap();
        let deco = sector_decohere(&DensityMatrix::from_pure(&f), &sectors).unwrap();
        let mix = mixture_of(&m.final_branches());
        assert!(deco.max_abs_diff(&mix).unwrap() < 1e-15);
    }

    #[test]
    fn restricted_algebra_membership() {
        let m = ChainModel::new(2, c(FRAC_1_SQRT_2, 0.), c(FRAC_1_SQRT_2, 0.)).unwrap();
        let sectors = pointer_sectors(&pointer_operator(2), m.layout()).unwrap();
        let pool = ObservableSet::new(
            "pool",
            vec![
                Observable::pauli(pointer_operator(2)),
                Observable::pauli(it_operator(2)),
                Observable::pauli(PauliSum::identity()),
            ],
            2,
            m.layout(),
        )
        .unwrap();
        let r = restricted_algebra(&sectors, &pool, m.layout(), 1e-12).unwrap();
        assert!(r.contains(&pointer_operator(2).to_string()));
        assert!(r.contains("I"));
        assert!(!r.contains(&it_operator(2).to_string()));
    }

    #[test]
    fn discriminate_errors_and_identical_states() {
        let m = ChainModel::new(1, c(1., 0.), c(0., 0.)).unwrap();
        let f = full_passage(&m).unwrap();
        let mixed = mixture_of(&m.final_branches());
        let empty = ObservableSet {
            name: "empty".into(),
            generators: vec![],
            closure_depth: 2,
        };
        assert_eq!(
            discriminate(&f, &mixed, &empty, 1e-12).unwrap_err(),
            Error::EmptyObservableSet
        );
        let all = ObservableSet::new(
            "all",
            all_pauli_strings(&["0", "1"]).into_iter().map(|s| Observable::pauli(s.into())).collect(),
            2,
            m.layout(),
        )
        .unwrap();
        let v = discriminate(&f, &mixed, &all, 1e-12).unwrap();
        assert!(!v.distinguishable);
        assert!(v.witness.is_none());
    }

    #[test]
    fn non_hermitian_generators_are_rejected() {
        let l = HilbertLayout::qubits(["a"]).unwrap();
        let bad = Observable::pauli(PauliSum::single("a", Pauli::X).scale(c(0., 1.)));
        assert!(matches!(
            ObservableSet::new("bad", vec![bad], 1, &l),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn closure_of_strings_is_deduplicated() {
        let l = HilbertLayout::qubits(["a"]).unwrap();
        let gens = all_pauli_strings(&["a"]).into_iter().map(|s| Observable::pauli(s.into())).collect();
        let set = ObservableSet::new("single", gens, 2, &l).unwrap();
        assert_eq!(set.closure().len(), 4);
    }
}

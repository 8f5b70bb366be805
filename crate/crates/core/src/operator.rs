//! Linear operators acting directly on amplitude arrays.
//!
//! Observables in this crate come in a few shapes: Pauli sums on qubits,
//! small dense blocks on a subset of subsystems (field observables, system
//! factors), rank-few outer products built from branch states, and products
//! and linear combinations of those. None of them needs the full matrix to act
//! on a state; [`Operator::to_dense`] exists for oracle checks only.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hilbert::{hermiticity_defect, inner, DensityMatrix, HilbertLayout, StateVector};
use crate::pauli::PauliSum;
use crate::DEFAULT_ORACLE_CAP;

/// Dense matrix acting on an ordered subset of subsystems, identity elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalOperator {
    targets: Vec<String>,
    matrix: DMatrix<Complex64>,
}

impl LocalOperator {
    /// The matrix index runs row-major over `targets` in the given order.
    pub fn new<S: Into<String>>(
        targets: impl IntoIterator<Item = S>,
        matrix: DMatrix<Complex64>,
    ) -> Result<Self> {
        let targets: Vec<String> = targets.into_iter().map(Into::into).collect();
        for (k, t) in targets.iter().enumerate() {
            if targets[..k].contains(t) {
                return Err(Error::DuplicateLabel(t.clone()));
            }
        }
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::LayoutMismatch("local operator matrix is not square".into()));
        }
        Ok(LocalOperator { targets, matrix })
    }

    pub fn targets(&self) -> &[String] {
        &self.targets
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    fn plan(&self, layout: &HilbertLayout) -> Result<LocalPlan> {
        let mut positions = Vec::with_capacity(self.targets.len());
        let mut local_dim = 1;
        for t in &self.targets {
            let p = layout.position(t)?;
            positions.push(p);
            local_dim *= layout.subsystems()[p].dim;
        }
        if local_dim != self.matrix.nrows() {
            return Err(Error::LayoutMismatch(format!(
                "local operator on {:?} has size {}, layout blocks have size {local_dim}",
                self.targets,
                self.matrix.nrows()
            )));
        }
        // offsets[l]: flat displacement of local index l.
        let mut offsets = vec![0usize; local_dim];
        for (l, off) in offsets.iter_mut().enumerate() {
            let mut rem = l;
            for &p in positions.iter().rev() {
                let d = layout.subsystems()[p].dim;
                *off += (rem % d) * layout.stride(p);
                rem /= d;
            }
        }
        let bases = (0..layout.dim())
            .filter(|&i| positions.iter().all(|&p| layout.digit(i, p) == 0))
            .collect();
        Ok(LocalPlan { offsets, bases })
    }

    fn apply_raw(&self, layout: &HilbertLayout, input: &[Complex64]) -> Result<Vec<Complex64>> {
        let plan = self.plan(layout)?;
        let mut out = vec![Complex64::new(0.0, 0.0); input.len()];
        let d = plan.offsets.len();
        let mut block = vec![Complex64::new(0.0, 0.0); d];
        for &base in &plan.bases {
            for (c, off) in plan.offsets.iter().enumerate() {
                block[c] = input[base + off];
            }
            if block.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
                continue;
            }
            for (r, off) in plan.offsets.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, b) in block.iter().enumerate() {
                    acc += self.matrix[(r, c)] * b;
                }
                out[base + off] = acc;
            }
        }
        Ok(out)
    }
}

struct LocalPlan {
    offsets: Vec<usize>,
    bases: Vec<usize>,
}

/// `sum_k c_k |ket_k><bra_k|` over a fixed layout.
#[derive(Debug, Clone, PartialEq)]
pub struct OuterSum {
    layout: Arc<HilbertLayout>,
    terms: Vec<(Complex64, Vec<Complex64>, Vec<Complex64>)>,
}

impl OuterSum {
    pub fn new(layout: Arc<HilbertLayout>) -> Self {
        OuterSum {
            layout,
            terms: Vec::new(),
        }
    }

    pub fn with_term(mut self, c: Complex64, ket: &StateVector, bra: &StateVector) -> Result<Self> {
        if ket.layout() != &*self.layout || bra.layout() != &*self.layout {
            return Err(Error::LayoutMismatch("outer product over a different layout".into()));
        }
        self.terms
            .push((c, ket.amplitudes().to_vec(), bra.amplitudes().to_vec()));
        Ok(self)
    }

    pub fn layout(&self) -> &HilbertLayout {
        &self.layout
    }

    /// Number of outer-product terms; bounds the rank.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
}

/// General linear operator.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    Pauli(PauliSum),
    Local(LocalOperator),
    Outer(OuterSum),
    /// `sum_k c_k * (A_k1 A_k2 ...)`, each product applied right to left.
    Combination(Vec<(Complex64, Vec<Operator>)>),
}

impl From<PauliSum> for Operator {
    fn from(p: PauliSum) -> Self {
        Operator::Pauli(p)
    }
}

impl From<LocalOperator> for Operator {
    fn from(l: LocalOperator) -> Self {
        Operator::Local(l)
    }
}

impl From<OuterSum> for Operator {
    fn from(o: OuterSum) -> Self {
        Operator::Outer(o)
    }
}

impl Operator {
    pub fn as_pauli(&self) -> Option<&PauliSum> {
        match self {
            Operator::Pauli(p) => Some(p),
            _ => None,
        }
    }

    pub fn apply_raw(&self, layout: &HilbertLayout, input: &[Complex64]) -> Result<Vec<Complex64>> {
        if input.len() != layout.dim() {
            return Err(Error::LengthMismatch {
                expected: layout.dim(),
                got: input.len(),
            });
        }
        match self {
            Operator::Pauli(p) => p.apply_raw(layout, input),
            Operator::Local(l) => l.apply_raw(layout, input),
            Operator::Outer(o) => {
                if layout != &*o.layout {
                    return Err(Error::LayoutMismatch(format!("{} vs {}", o.layout, layout)));
                }
                let mut out = vec![Complex64::new(0.0, 0.0); input.len()];
                for (c, ket, bra) in &o.terms {
                    let w = c * inner(bra, input);
                    if w == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    for (y, k) in out.iter_mut().zip(ket) {
                        *y += w * k;
                    }
                }
                Ok(out)
            }
            Operator::Combination(terms) => {
                let mut out = vec![Complex64::new(0.0, 0.0); input.len()];
                for (c, factors) in terms {
                    let mut v = input.to_vec();
                    for f in factors.iter().rev() {
                        v = f.apply_raw(layout, &v)?;
                    }
                    for (y, x) in out.iter_mut().zip(&v) {
                        *y += c * x;
                    }
                }
                Ok(out)
            }
        }
    }

    /// `Q|psi>`, not renormalized.
    pub fn apply(&self, state: &StateVector) -> Result<Vec<Complex64>> {
        self.apply_raw(state.layout(), state.amplitudes())
    }

    /// `<bra|Q|ket>`.
    pub fn sandwich(&self, layout: &HilbertLayout, bra: &[Complex64], ket: &[Complex64]) -> Result<Complex64> {
        match self {
            Operator::Pauli(p) => p.sandwich_raw(layout, bra, ket),
            _ => Ok(inner(bra, &self.apply_raw(layout, ket)?)),
        }
    }

    /// `<psi|Q|psi>` as a complex number.
    pub fn expectation(&self, state: &StateVector) -> Result<Complex64> {
        self.sandwich(state.layout(), state.amplitudes(), state.amplitudes())
    }

    /// `Tr(rho Q)`.
    pub fn trace_with(&self, rho: &DensityMatrix) -> Result<Complex64> {
        match self {
            Operator::Pauli(p) => p.trace_with(rho),
            Operator::Outer(o) => {
                if rho.layout() != &*o.layout {
                    return Err(Error::LayoutMismatch(format!("{} vs {}", o.layout, rho.layout())));
                }
                let m = rho.matrix();
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, ket, bra) in &o.terms {
                    // Tr(rho |k><b|) = <b|rho|k>
                    let mut t = Complex64::new(0.0, 0.0);
                    for i in 0..m.nrows() {
                        if bra[i] == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        let row: Complex64 = (0..m.ncols()).map(|j| m[(i, j)] * ket[j]).sum();
                        t += bra[i].conj() * row;
                    }
                    acc += c * t;
                }
                Ok(acc)
            }
            _ => {
                let layout = rho.layout();
                let mut acc = Complex64::new(0.0, 0.0);
                for j in 0..rho.dim() {
                    let col = rho.column(j);
                    if col.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
                        continue;
                    }
                    acc += self.apply_raw(layout, &col)?[j];
                }
                Ok(acc)
            }
        }
    }

    /// Dense matrix; refuses dimensions above `cap`.
    pub fn to_dense(&self, layout: &HilbertLayout, cap: usize) -> Result<DMatrix<Complex64>> {
        let n = layout.dim();
        if n > cap {
            return Err(Error::OracleCap { dim: n, cap });
        }
        if let Operator::Pauli(p) = self {
            return p.to_dense(layout, cap);
        }
        let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        let mut e = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            e[j] = Complex64::new(1.0, 0.0);
            let col = self.apply_raw(layout, &e)?;
            m.set_column(j, &nalgebra::DVector::from_vec(col));
            e[j] = Complex64::new(0.0, 0.0);
        }
        Ok(m)
    }

    /// Largest violation of `<x|Q y> = <Q x|y>`: exact below the oracle cap,
    /// probed with seeded random vectors above it.
    pub fn hermiticity_defect(&self, layout: &HilbertLayout) -> Result<f64> {
        match self {
            Operator::Pauli(p) => Ok(p.hermiticity_defect()),
            Operator::Local(l) => Ok(hermiticity_defect(&l.matrix)),
            _ if layout.dim() <= DEFAULT_ORACLE_CAP => {
                Ok(hermiticity_defect(&self.to_dense(layout, DEFAULT_ORACLE_CAP)?))
            }
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
                let mut worst: f64 = 0.0;
                for _ in 0..8 {
                    let x = random_vector(&mut rng, layout.dim());
                    let y = random_vector(&mut rng, layout.dim());
                    let a = inner(&x, &self.apply_raw(layout, &y)?);
                    let b = inner(&self.apply_raw(layout, &x)?, &y);
                    worst = worst.max((a - b).norm());
                }
                Ok(worst)
            }
        }
    }

    /// Upper bound on the operator norm.
    pub fn norm_bound(&self) -> f64 {
        match self {
            Operator::Pauli(p) => p.norm_bound(),
            Operator::Local(l) if hermiticity_defect(&l.matrix) == 0.0 => l
                .matrix
                .symmetric_eigenvalues()
                .iter()
                .fold(0.0, |m, v| m.max(v.abs())),
            Operator::Local(l) => l
                .matrix
                .singular_values()
                .iter()
                .copied()
                .fold(0.0, f64::max),
            Operator::Outer(o) => o
                .terms
                .iter()
                .map(|(c, k, b)| c.norm() * crate::hilbert::vec_norm(k) * crate::hilbert::vec_norm(b))
                .sum(),
            Operator::Combination(terms) => terms
                .iter()
                .map(|(c, fs)| c.norm() * fs.iter().map(Operator::norm_bound).product::<f64>())
                .sum(),
        }
    }

    /// `A B`.
    pub fn product(a: &Operator, b: &Operator) -> Operator {
        if let (Operator::Pauli(pa), Operator::Pauli(pb)) = (a, b) {
            return Operator::Pauli(pa.product(pb));
        }
        Operator::Combination(vec![(Complex64::new(1.0, 0.0), vec![a.clone(), b.clone()])])
    }

    /// `(AB + BA)/2` and `i(AB - BA)/2`: the Hermitian parts of `AB` for
    /// Hermitian `A`, `B`.
    pub fn hermitian_parts(a: &Operator, b: &Operator) -> (Operator, Operator) {
        let half = Complex64::new(0.5, 0.0);
        let ihalf = Complex64::new(0.0, 0.5);
        if let (Operator::Pauli(pa), Operator::Pauli(pb)) = (a, b) {
            let ab = pa.product(pb);
            let ba = pb.product(pa);
            return (
                Operator::Pauli(ab.plus(&ba).scale(half)),
                Operator::Pauli(ab.minus(&ba).scale(ihalf)),
            );
        }
        if let (Operator::Local(la), Operator::Local(lb)) = (a, b) {
            if la.targets == lb.targets {
                let ab = &la.matrix * &lb.matrix;
                let ba = &lb.matrix * &la.matrix;
                let local = |m: DMatrix<Complex64>| {
                    Operator::Local(LocalOperator {
                        targets: la.targets.clone(),
                        matrix: m,
                    })
                };
                return (
                    local((&ab + &ba) * half),
                    local((ab - ba) * ihalf),
                );
            }
        }
        let ab = vec![a.clone(), b.clone()];
        let ba = vec![b.clone(), a.clone()];
        (
            Operator::Combination(vec![(half, ab.clone()), (half, ba.clone())]),
            Operator::Combination(vec![(ihalf, ab), (-ihalf, ba)]),
        )
    }

    /// Whether `Q = I_label ⊗ Q'`, checked by commutation with a generating
    /// set of the local matrix algebra (clock and shift).
    pub fn acts_trivially_on(&self, layout: &HilbertLayout, label: &str, tol: f64) -> Result<bool> {
        let p = layout.position(label)?;
        let d = layout.subsystems()[p].dim;
        let shift = DMatrix::from_fn(d, d, |r, c| {
            if r == (c + 1) % d {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let omega = std::f64::consts::TAU / d as f64;
        let clock = DMatrix::from_fn(d, d, |r, c| {
            if r == c {
                Complex64::from_polar(1.0, omega * r as f64)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        for g in [shift, clock] {
            let g = Operator::Local(LocalOperator::new([label], g)?);
            if commutator_defect(self, &g, layout)? > tol {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Labels on which the operator acts non-trivially.
    pub fn support(&self, layout: &HilbertLayout, tol: f64) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for label in layout.labels() {
            if !self.acts_trivially_on(layout, label, tol)? {
                out.push(label.to_string());
            }
        }
        Ok(out)
    }
}

/// `max_j ‖[A, B] e_j‖` over basis vectors.
pub fn commutator_defect(a: &Operator, b: &Operator, layout: &HilbertLayout) -> Result<f64> {
    let n = layout.dim();
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    let mut worst: f64 = 0.0;
    for j in 0..n {
        e[j] = Complex64::new(1.0, 0.0);
        let ab = a.apply_raw(layout, &b.apply_raw(layout, &e)?)?;
        let ba = b.apply_raw(layout, &a.apply_raw(layout, &e)?)?;
        let d = ab
            .iter()
            .zip(&ba)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        worst = worst.max(d);
        e[j] = Complex64::new(0.0, 0.0);
    }
    Ok(worst)
}

fn random_vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect()
}

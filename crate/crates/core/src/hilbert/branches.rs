use nalgebra::DMatrix;
use num_complex::Complex64;

use super::density::DensityMatrix;
use super::layout::HilbertLayout;
use super::state::{tensor, StateVector};
use crate::error::{Error, Result};

/// Orthogonality and normalization slack for branch decompositions.
pub const BRANCH_TOLERANCE: f64 = 1e-10;

/// Superposition `sum_k a_k |psi_k>` of mutually orthogonal normalized
/// branch states.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchDecomposition {
    branches: Vec<(Complex64, StateVector)>,
}

impl BranchDecomposition {
    pub fn new(branches: Vec<(Complex64, StateVector)>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::AmplitudesNotNormalized(0.0));
        }
        let weight: f64 = branches.iter().map(|(a, _)| a.norm_sqr()).sum();
        if (weight - 1.0).abs() > BRANCH_TOLERANCE {
            return Err(Error::AmplitudesNotNormalized(weight));
        }
        for (i, (_, si)) in branches.iter().enumerate() {
            for (_, sj) in &branches[i + 1..] {
                let overlap = si.inner(sj)?.norm();
                if overlap > BRANCH_TOLERANCE {
                    return Err(Error::NotOrthogonal(overlap));
                }
            }
        }
        Ok(BranchDecomposition { branches })
    }

    pub fn branches(&self) -> &[(Complex64, StateVector)] {
        &self.branches
    }

    pub fn len(&self) -> usize {
        self.branches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.branches.is_empty()
    }

    pub fn layout(&self) -> &HilbertLayout {
        self.branches[0].1.layout()
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.branches[k].0
    }

    pub fn state(&self, k: usize) -> &StateVector {
        &self.branches[k].1
    }

    /// The coherent superposition `sum_k a_k |psi_k>`.
    pub fn superposition(&self) -> StateVector {
        let (_, first) = &self.branches[0];
        let mut amps = vec![Complex64::new(0.0, 0.0); first.dim()];
        for (a, s) in &self.branches {
            for (out, x) in amps.iter_mut().zip(s.amplitudes()) {
                *out += a * x;
            }
        }
        StateVector::from_unitary_image(first.shared_layout().clone(), amps)
    }

    /// Applies a norm-preserving map to every branch state.
    pub fn map_states<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&StateVector) -> Result<StateVector>,
    {
        let branches = self
            .branches
            .iter()
            .map(|(a, s)| Ok((*a, f(s)?)))
            .collect::<Result<Vec<_>>>()?;
        BranchDecomposition::new(branches)
    }
}

/// `a1 |s1>|D1>|O1>... + a2 |s2>|D2>|O2>...`, one orthogonal pair per
/// participating subsystem (measured system first, then pointers).
pub fn build_premeasurement(
    a1: Complex64,
    a2: Complex64,
    pairs: &[(StateVector, StateVector)],
) -> Result<BranchDecomposition> {
    let weight = a1.norm_sqr() + a2.norm_sqr();
    if (weight - 1.0).abs() > BRANCH_TOLERANCE {
        return Err(Error::AmplitudesNotNormalized(weight));
    }
    if pairs.is_empty() {
        return Err(Error::LayoutMismatch("no pointer pairs given".into()));
    }
    for (first, second) in pairs {
        let overlap = first.inner(second)?.norm();
        if overlap > BRANCH_TOLERANCE {
            return Err(Error::NotOrthogonal(overlap));
        }
    }
    let firsts: Vec<StateVector> = pairs.iter().map(|p| p.0.clone()).collect();
    let seconds: Vec<StateVector> = pairs.iter().map(|p| p.1.clone()).collect();
    BranchDecomposition::new(vec![(a1, tensor(&firsts)?), (a2, tensor(&seconds)?)])
}

/// `sum_k |a_k|^2 |psi_k><psi_k|`: the pure projector with inter-branch
/// blocks deleted.
pub fn mixture_of(branches: &BranchDecomposition) -> DensityMatrix {
    let layout = branches.branches[0].1.shared_layout().clone();
    let n = layout.dim();
    let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
    for (a, s) in &branches.branches {
        let w = a.norm_sqr();
        if w == 0.0 {
            continue;
        }
        let v = s.amplitudes();
        for i in 0..n {
            if v[i] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..n {
                m[(i, j)] += v[i] * v[j].conj() * w;
            }
        }
    }
    DensityMatrix::from_parts(layout, m)
}

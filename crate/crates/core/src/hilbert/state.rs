use std::sync::Arc;

use num_complex::Complex64;

use super::layout::{HilbertLayout, Subsystem};
use crate::error::{Error, Result};

/// Normalization slack accepted when a caller hands in raw amplitudes.
pub const INPUT_NORM_TOLERANCE: f64 = 1e-10;

/// Normalized pure state over a [`HilbertLayout`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: Arc<HilbertLayout>,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(layout: impl Into<Arc<HilbertLayout>>, amplitudes: Vec<Complex64>) -> Result<Self> {
        let layout = layout.into();
        check_len(&layout, amplitudes.len())?;
        let norm = vec_norm(&amplitudes);
        if (norm - 1.0).abs() > INPUT_NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(StateVector { layout, amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(
        layout: impl Into<Arc<HilbertLayout>>,
        mut amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        let layout = layout.into();
        check_len(&layout, amplitudes.len())?;
        let norm = vec_norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(StateVector { layout, amplitudes })
    }

    /// Skips the norm check; callers guarantee unitarity of the producing map.
    pub(crate) fn from_unitary_image(layout: Arc<HilbertLayout>, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(layout.dim(), amplitudes.len());
        StateVector { layout, amplitudes }
    }

    pub fn basis(layout: impl Into<Arc<HilbertLayout>>, digits: &[usize]) -> Result<Self> {
        let layout = layout.into();
        let idx = layout.flat_index(digits)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); layout.dim()];
        amps[idx] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            layout,
            amplitudes: amps,
        })
    }

    /// Single-qubit state `a|u> + b|d>` on a fresh one-qubit layout.
    pub fn qubit(label: &str, up: Complex64, down: Complex64) -> Result<Self> {
        let layout = HilbertLayout::new(vec![Subsystem::qubit(label)])?;
        Self::new(layout, vec![up, down])
    }

    pub fn up(label: &str) -> Self {
        Self::qubit(label, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
            .expect("basis qubit is valid")
    }

    pub fn down(label: &str) -> Self {
        Self::qubit(label, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
            .expect("basis qubit is valid")
    }

    pub fn layout(&self) -> &HilbertLayout {
        &self.layout
    }

    pub fn shared_layout(&self) -> &Arc<HilbertLayout> {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amplitudes)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.same_layout(other)?;
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    /// `|<self|other>|`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm())
    }

    pub fn same_layout(&self, other: &StateVector) -> Result<()> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch(format!(
                "{} vs {}",
                self.layout, other.layout
            )));
        }
        Ok(())
    }

    /// Euclidean distance to another state.
    pub fn distance(&self, other: &StateVector) -> Result<f64> {
        self.same_layout(other)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }
}

/// Kronecker composition of states in the given order.
pub fn tensor(states: &[StateVector]) -> Result<StateVector> {
    let mut iter = states.iter();
    let first = iter
        .next()
        .ok_or_else(|| Error::LayoutMismatch("tensor of an empty list".into()))?;
    let mut layout = first.layout().clone();
    let mut amps = first.amplitudes.clone();
    for s in iter {
        layout = layout.concat(s.layout())?;
        amps = kron_vec(&amps, &s.amplitudes);
    }
    Ok(StateVector {
        layout: Arc::new(layout),
        amplitudes: amps,
    })
}

pub(crate) fn kron_vec(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        out.extend(b.iter().map(|y| x * y));
    }
    out
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn vec_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn check_len(layout: &HilbertLayout, len: usize) -> Result<()> {
    if layout.dim() != len {
        return Err(Error::LengthMismatch {
            expected: layout.dim(),
            got: len,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn up_tensor_up_is_first_basis_vector() {
        let s = tensor(&[StateVector::up("a"), StateVector::up("b")]).unwrap();
        assert_eq!(s.amplitudes(), &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]);
    }

    #[test]
    fn tensor_is_linear_in_first_factor() {
        let a1 = c(0.6, 0.0);
        let a2 = c(0.0, 0.8);
        let s = tensor(&[StateVector::qubit("a", a1, a2).unwrap(), StateVector::up("b")]).unwrap();
        assert_eq!(s.amplitudes(), &[a1, c(0., 0.), a2, c(0., 0.)]);
        assert_eq!(s.layout().labels().collect::<Vec<_>>(), ["a", "b"]);
    }

    #[test]
    fn tensor_rejects_duplicate_labels() {
        let err = tensor(&[StateVector::up("a"), StateVector::up("a")]).unwrap_err();
        assert_eq!(err, Error::DuplicateLabel("a".into()));
    }

    #[test]
    fn tensor_respects_dimension_cap() {
        let many: Vec<_> = (0..15).map(|i| StateVector::up(&i.to_string())).collect();
        assert!(matches!(tensor(&many), Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn new_rejects_unnormalized() {
        let l = HilbertLayout::qubits(["a"]).unwrap();
        assert!(matches!(
            StateVector::new(l, vec![c(1., 0.), c(1., 0.)]),
            Err(Error::NotNormalized(_))
        ));
    }
}

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on the total Hilbert-space dimension of a layout.
pub const DEFAULT_DIMENSION_CAP: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubsystemKind {
    Qubit,
    /// Truncated bosonic mode; local basis is occupation 0..dim.
    Mode,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subsystem {
    pub label: String,
    pub dim: usize,
    pub kind: SubsystemKind,
}

impl Subsystem {
    pub fn qubit(label: impl Into<String>) -> Self {
        Subsystem {
            label: label.into(),
            dim: 2,
            kind: SubsystemKind::Qubit,
        }
    }

    pub fn mode(label: impl Into<String>, cutoff: usize) -> Self {
        Subsystem {
            label: label.into(),
            dim: cutoff,
            kind: SubsystemKind::Mode,
        }
    }
}

/// Ordered list of labelled subsystems.
///
/// Flat indices are row-major in subsystem order: the first subsystem is the
/// most significant digit. For qubits, local index 0 is spin up `|u>` and 1
/// is spin down `|d>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HilbertLayout {
    subsystems: Vec<Subsystem>,
    strides: Vec<usize>,
    dim: usize,
}

impl HilbertLayout {
    pub fn new(subsystems: Vec<Subsystem>) -> Result<Self> {
        Self::with_cap(subsystems, DEFAULT_DIMENSION_CAP)
    }

    pub fn with_cap(subsystems: Vec<Subsystem>, cap: usize) -> Result<Self> {
        let mut dim: usize = 1;
        for (k, s) in subsystems.iter().enumerate() {
            if s.dim == 0 || (s.kind == SubsystemKind::Qubit && s.dim != 2) {
                return Err(Error::InvalidDimension {
                    label: s.label.clone(),
                    dim: s.dim,
                });
            }
            if subsystems[..k].iter().any(|o| o.label == s.label) {
                return Err(Error::DuplicateLabel(s.label.clone()));
            }
            dim = dim.saturating_mul(s.dim);
        }
        if dim > cap {
            return Err(Error::DimensionCap {
                layout: describe(&subsystems),
                dim,
                cap,
            });
        }
        let mut strides = vec![1; subsystems.len()];
        for k in (0..subsystems.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * subsystems[k + 1].dim;
        }
        Ok(HilbertLayout {
            subsystems,
            strides,
            dim,
        })
    }

    /// Layout of qubits with the given labels, in order.
    pub fn qubits<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        Self::new(labels.into_iter().map(Subsystem::qubit).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.subsystems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsystems.is_empty()
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.subsystems
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.subsystems.iter().map(|s| s.label.as_str())
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.subsystems
            .iter()
            .position(|s| s.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.subsystems.iter().any(|s| s.label == label)
    }

    pub fn stride(&self, position: usize) -> usize {
        self.strides[position]
    }

    /// Stride of a qubit subsystem, failing for unknown labels and modes.
    pub fn qubit_stride(&self, label: &str) -> Result<usize> {
        let p = self.position(label)?;
        if self.subsystems[p].kind != SubsystemKind::Qubit {
            return Err(Error::NotAQubit(label.to_string()));
        }
        Ok(self.strides[p])
    }

    pub fn flat_index(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.subsystems.len() {
            return Err(Error::LengthMismatch {
                expected: self.subsystems.len(),
                got: digits.len(),
            });
        }
        let mut idx = 0;
        for ((d, s), stride) in digits.iter().zip(&self.subsystems).zip(&self.strides) {
            if *d >= s.dim {
                return Err(Error::InvalidDimension {
                    label: s.label.clone(),
                    dim: *d,
                });
            }
            idx += d * stride;
        }
        Ok(idx)
    }

    pub fn digits(&self, flat: usize) -> Vec<usize> {
        self.subsystems
            .iter()
            .zip(&self.strides)
            .map(|(s, stride)| (flat / stride) % s.dim)
            .collect()
    }

    #[inline]
    pub fn digit(&self, flat: usize, position: usize) -> usize {
        (flat / self.strides[position]) % self.subsystems[position].dim
    }

    /// Concatenation of two layouts; labels must be disjoint.
    pub fn concat(&self, other: &HilbertLayout) -> Result<Self> {
        let mut subs = self.subsystems.clone();
        subs.extend(other.subsystems.iter().cloned());
        Self::new(subs)
    }

    /// Sub-layout containing the given labels, kept in this layout's order.
    pub fn restrict<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        for k in keep {
            self.position(k.as_ref())?;
        }
        let subs = self
            .subsystems
            .iter()
            .filter(|s| keep.iter().any(|k| k.as_ref() == s.label))
            .cloned()
            .collect();
        Self::new(subs)
    }
}

fn describe(subs: &[Subsystem]) -> String {
    subs.iter()
        .map(|s| format!("{}:{}", s.label, s.dim))
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for HilbertLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", describe(&self.subsystems))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strides_are_row_major() {
        let l = HilbertLayout::new(vec![
            Subsystem::qubit("a"),
            Subsystem::mode("m", 3),
            Subsystem::qubit("b"),
        ])
        .unwrap();
        assert_eq!(l.dim(), 12);
        assert_eq!(l.stride(0), 6);
        assert_eq!(l.stride(1), 2);
        assert_eq!(l.stride(2), 1);
        assert_eq!(l.flat_index(&[1, 2, 1]).unwrap(), 11);
        assert_eq!(l.digits(11), vec![1, 2, 1]);
    }

    #[test]
    fn index_mapping_round_trips() {
        let l = HilbertLayout::new(vec![
            Subsystem::mode("m", 3),
            Subsystem::qubit("q"),
            Subsystem::mode("n", 4),
        ])
        .unwrap();
        for i in 0..l.dim() {
            assert_eq!(l.flat_index(&l.digits(i)).unwrap(), i);
        }
    }

    #[test]
    fn rejects_duplicates_and_cap() {
        assert_eq!(
            HilbertLayout::qubits(["a", "a"]).unwrap_err(),
            Error::DuplicateLabel("a".into())
        );
        let many: Vec<String> = (0..15).map(|i| i.to_string()).collect();
        assert!(matches!(
            HilbertLayout::qubits(many),
            Err(Error::DimensionCap { dim: 32768, .. })
        ));
        assert!(HilbertLayout::with_cap(vec![Subsystem::qubit("a")], 1).is_err());
    }

    #[test]
    fn qubit_dimension_must_be_two() {
        let bad = Subsystem {
            label: "q".into(),
            dim: 3,
            kind: SubsystemKind::Qubit,
        };
        assert!(HilbertLayout::new(vec![bad]).is_err());
    }
}

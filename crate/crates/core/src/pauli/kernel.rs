//! Matrix-free application of Pauli strings to amplitude arrays.
//!
//! A Pauli string is a signed permutation of the computational basis: basis
//! index `i` maps to a single index `j(i)` with a phase. Conventions:
//! `X|u> = |d>`, `Y|u> = i|d>`, `Y|d> = -i|u>`, `Z|u> = |u>`, `Z|d> = -|d>`,
//! with `|u>` at local index 0.

use num_complex::Complex64;

use super::string::{Pauli, PauliString};
use crate::error::Result;
use crate::hilbert::{HilbertLayout, SubsystemKind};

/// Precomputed action of one string on one layout.
#[derive(Debug, Clone)]
pub(crate) enum StringAction {
    /// All subsystems are qubits: strides are powers of two.
    Bits {
        flip: usize,
        sign: usize,
        y_count: u32,
        phase: Complex64,
    },
    /// Mixed-radix layout: per-letter strides.
    Radix {
        letters: Vec<(usize, Pauli)>,
        phase: Complex64,
    },
}

impl StringAction {
    pub(crate) fn new(layout: &HilbertLayout, string: &PauliString) -> Result<Self> {
        let mut letters = Vec::with_capacity(string.weight());
        for (label, &p) in string.letters() {
            letters.push((layout.qubit_stride(label)?, p));
        }
        let phase = string.phase().to_complex();
        let all_qubits = layout
            .subsystems()
            .iter()
            .all(|s| s.kind == SubsystemKind::Qubit);
        if all_qubits {
            let mut flip = 0;
            let mut sign = 0;
            let mut y_count = 0;
            for &(stride, p) in &letters {
                match p {
                    Pauli::I => {}
                    Pauli::X => flip |= stride,
                    Pauli::Y => {
                        flip |= stride;
                        sign |= stride;
                        y_count += 1;
                    }
                    Pauli::Z => sign |= stride,
                }
            }
            Ok(StringAction::Bits {
                flip,
                sign,
                y_count,
                phase,
            })
        } else {
            Ok(StringAction::Radix { letters, phase })
        }
    }

    /// Image index and phase of basis vector `i`.
    #[inline]
    pub(crate) fn map(&self, i: usize) -> (usize, Complex64) {
        match self {
            StringAction::Bits {
                flip,
                sign,
                y_count,
                phase,
            } => {
                // i^{#Y} from the Y letters, (-1) for every Y or Z acting on |d>.
                let mut ph = *phase * i_power(*y_count);
                if (i & sign).count_ones() % 2 == 1 {
                    ph = -ph;
                }
                (i ^ flip, ph)
            }
            StringAction::Radix { letters, phase } => {
                let mut j = i;
                let mut ph = *phase;
                for &(stride, p) in letters {
                    let down = (i / stride) % 2 == 1;
                    match p {
                        Pauli::I => {}
                        Pauli::X => {
                            j = if down { j - stride } else { j + stride };
                        }
                        Pauli::Y => {
                            j = if down { j - stride } else { j + stride };
                            ph *= if down {
                                Complex64::new(0.0, -1.0)
                            } else {
                                Complex64::new(0.0, 1.0)
                            };
                        }
                        Pauli::Z => {
                            if down {
                                ph = -ph;
                            }
                        }
                    }
                }
                (j, ph)
            }
        }
    }

    /// `out += coeff * P * input`.
    pub(crate) fn accumulate(&self, coeff: Complex64, input: &[Complex64], out: &mut [Complex64]) {
        for (i, &x) in input.iter().enumerate() {
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (j, ph) = self.map(i);
            out[j] += coeff * ph * x;
        }
    }

    /// `<bra| P |ket>`.
    pub(crate) fn sandwich(&self, bra: &[Complex64], ket: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &x) in ket.iter().enumerate() {
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            let (j, ph) = self.map(i);
            acc += bra[j].conj() * ph * x;
        }
        acc
    }
}

#[inline]
fn i_power(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

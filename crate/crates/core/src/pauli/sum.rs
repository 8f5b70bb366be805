use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::kernel::StringAction;
use super::string::{Letters, Pauli, PauliString, Phase};
use crate::error::{Error, Result};
use crate::hilbert::{DensityMatrix, HilbertLayout, StateVector};
use crate::DEFAULT_TOLERANCE;

/// Linear combination of Pauli strings in canonical form: string phases are
/// absorbed into the coefficients, like strings are merged and exact zeros
/// are dropped. Terms are ordered lexicographically by `(label, letter)`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliSum {
    terms: BTreeMap<Letters, Complex64>,
}

impl PauliSum {
    pub fn zero() -> Self {
        PauliSum::default()
    }

    pub fn identity() -> Self {
        PauliSum::from(PauliString::identity())
    }

    pub fn single(label: impl Into<String>, p: Pauli) -> Self {
        PauliSum::from(PauliString::single(label, p))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Complex64, PauliString)>) -> Self {
        let mut sum = PauliSum::zero();
        for (c, s) in terms {
            sum.add_term(c, &s);
        }
        sum
    }

    pub fn add_term(&mut self, coeff: Complex64, string: &PauliString) {
        let c = coeff * string.phase().to_complex();
        let entry = self
            .terms
            .entry(string.letters().clone())
            .or_insert(Complex64::new(0.0, 0.0));
        *entry += c;
        if *entry == Complex64::new(0.0, 0.0) {
            self.terms.remove(string.letters());
        }
    }

    /// Terms as `(coefficient, phase-free string)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (Complex64, PauliString)> + '_ {
        self.terms
            .iter()
            .map(|(l, c)| (*c, PauliString::from_letters(l.clone())))
    }

    pub fn coefficient(&self, string: &PauliString) -> Complex64 {
        self.terms
            .get(string.letters())
            .map(|c| c * string.phase().conj().to_complex())
            .unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Drops coefficients with magnitude at most `tol`.
    pub fn chop(mut self, tol: f64) -> Self {
        self.terms.retain(|_, c| c.norm() > tol);
        self
    }

    pub fn scale(&self, k: Complex64) -> Self {
        PauliSum::from_terms(self.terms().map(|(c, s)| (c * k, s)))
    }

    pub fn plus(&self, other: &PauliSum) -> Self {
        let mut out = self.clone();
        for (c, s) in other.terms() {
            out.add_term(c, &s);
        }
        out
    }

    pub fn minus(&self, other: &PauliSum) -> Self {
        self.plus(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn product(&self, other: &PauliSum) -> Self {
        let mut out = PauliSum::zero();
        for (ca, sa) in self.terms() {
            for (cb, sb) in other.terms() {
                out.add_term(ca * cb, &sa.multiply(&sb));
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        PauliSum::from_terms(self.terms().map(|(c, s)| (c.conj(), s)))
    }

    /// Largest imaginary coefficient; phase-free strings are Hermitian.
    pub fn hermiticity_defect(&self) -> f64 {
        self.terms.values().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Only I and Z letters: diagonal in the computational basis.
    pub fn is_diagonal(&self) -> bool {
        self.terms
            .keys()
            .all(|l| l.values().all(|p| matches!(p, Pauli::I | Pauli::Z)))
    }

    pub fn support(&self) -> BTreeSet<String> {
        self.terms.keys().flat_map(|l| l.keys().cloned()).collect()
    }

    /// Triangle-inequality bound on the operator norm.
    pub fn norm_bound(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    pub fn max_abs_diff(&self, other: &PauliSum) -> f64 {
        self.minus(other)
            .terms
            .values()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// `k` such that `self = k * other`, if one exists within `tol`.
    pub fn ratio_to(&self, other: &PauliSum, tol: f64) -> Option<Complex64> {
        let (c0, s0) = other.terms().next()?;
        let k = self.coefficient(&s0) / c0;
        (self.max_abs_diff(&other.scale(k)) <= tol).then_some(k)
    }

    pub(crate) fn actions(&self, layout: &HilbertLayout) -> Result<Vec<(Complex64, StringAction)>> {
        self.terms()
            .map(|(c, s)| Ok((c, StringAction::new(layout, &s)?)))
            .collect()
    }

    /// `self * input` on a raw amplitude array.
    pub fn apply_raw(&self, layout: &HilbertLayout, input: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::new(0.0, 0.0); input.len()];
        for (c, a) in self.actions(layout)? {
            a.accumulate(c, input, &mut out);
        }
        Ok(out)
    }

    /// `<bra|self|ket>` on raw arrays.
    pub fn sandwich_raw(
        &self,
        layout: &HilbertLayout,
        bra: &[Complex64],
        ket: &[Complex64],
    ) -> Result<Complex64> {
        Ok(self
            .actions(layout)?
            .iter()
            .map(|(c, a)| c * a.sandwich(bra, ket))
            .sum())
    }

    /// `Tr(rho * self)` without forming the operator.
    pub fn trace_with(&self, rho: &DensityMatrix) -> Result<Complex64> {
        let m = rho.matrix();
        let mut acc = Complex64::new(0.0, 0.0);
        for (c, a) in self.actions(rho.layout())? {
            let mut t = Complex64::new(0.0, 0.0);
            for i in 0..m.nrows() {
                let (j, ph) = a.map(i);
                t += ph * m[(i, j)];
            }
            acc += c * t;
        }
        Ok(acc)
    }

    /// Dense matrix on `layout`; refuses dimensions above `cap`.
    pub fn to_dense(&self, layout: &HilbertLayout, cap: usize) -> Result<DMatrix<Complex64>> {
        let n = layout.dim();
        if n > cap {
            return Err(Error::OracleCap { dim: n, cap });
        }
        let mut m = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for (c, a) in self.actions(layout)? {
            for i in 0..n {
                let (j, ph) = a.map(i);
                m[(j, i)] += c * ph;
            }
        }
        Ok(m)
    }
}

impl From<PauliString> for PauliSum {
    fn from(s: PauliString) -> Self {
        PauliSum::from_terms([(Complex64::new(1.0, 0.0), s)])
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::format_sum(self))
    }
}

/// Letterwise product of two strings.
pub fn multiply(a: &PauliString, b: &PauliString) -> PauliString {
    a.multiply(b)
}

/// `ab - ba`, built from anticommuting pairs only so cancellations are exact.
pub fn commutator(a: &PauliSum, b: &PauliSum) -> PauliSum {
    let mut out = PauliSum::zero();
    for (ca, sa) in a.terms() {
        for (cb, sb) in b.terms() {
            if !sa.commutes_with(&sb) {
                out.add_term(ca * cb * 2.0, &sa.multiply(&sb));
            }
        }
    }
    out
}

/// `P|psi>` for a single string.
pub fn apply(op: &PauliString, state: &StateVector) -> Result<StateVector> {
    let a = StringAction::new(state.layout(), op)?;
    let mut out = vec![Complex64::new(0.0, 0.0); state.dim()];
    a.accumulate(Complex64::new(1.0, 0.0), state.amplitudes(), &mut out);
    Ok(StateVector::from_unitary_image(state.shared_layout().clone(), out))
}

fn check_hermitian(op: &PauliSum) -> Result<f64> {
    let defect = op.hermiticity_defect();
    if defect > DEFAULT_TOLERANCE {
        return Err(Error::NotHermitian(defect));
    }
    Ok(DEFAULT_TOLERANCE * op.norm_bound().max(1.0))
}

/// `<psi|op|psi>` for a Hermitian sum.
pub fn expectation(op: &PauliSum, state: &StateVector) -> Result<f64> {
    let tol = check_hermitian(op)?;
    let v = op.sandwich_raw(state.layout(), state.amplitudes(), state.amplitudes())?;
    if v.im.abs() > tol {
        return Err(Error::NotHermitian(v.im.abs()));
    }
    Ok(v.re)
}

/// `Tr(rho op)` for a Hermitian sum.
pub fn expectation_mixed(op: &PauliSum, rho: &DensityMatrix) -> Result<f64> {
    let tol = check_hermitian(op)?;
    let v = op.trace_with(rho)?;
    if v.im.abs() > tol {
        return Err(Error::NotHermitian(v.im.abs()));
    }
    Ok(v.re)
}

/// Builds `coeff * phase * letters` conveniently from `(label, letter)` pairs.
pub fn string<S: Into<String>>(letters: impl IntoIterator<Item = (S, Pauli)>) -> PauliString {
    PauliString::new(Phase::ONE, letters)
}

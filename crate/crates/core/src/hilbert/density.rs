use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::layout::HilbertLayout;
use super::state::StateVector;
use crate::error::{Error, Result};

/// Slack used when validating caller-supplied density matrices.
pub const DENSITY_TOLERANCE: f64 = 1e-10;

/// Hermitian, positive, unit-trace matrix over a layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    layout: Arc<HilbertLayout>,
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(layout: impl Into<Arc<HilbertLayout>>, matrix: DMatrix<Complex64>) -> Result<Self> {
        let layout = layout.into();
        let rho = DensityMatrix { layout, matrix };
        rho.validate(DENSITY_TOLERANCE)?;
        Ok(rho)
    }

    pub(crate) fn from_parts(layout: Arc<HilbertLayout>, matrix: DMatrix<Complex64>) -> Self {
        DensityMatrix { layout, matrix }
    }

    /// `|psi><psi|`.
    pub fn from_pure(state: &StateVector) -> Self {
        let a = state.amplitudes();
        let n = a.len();
        let matrix = DMatrix::from_fn(n, n, |i, j| a[i] * a[j].conj());
        DensityMatrix {
            layout: state.shared_layout().clone(),
            matrix,
        }
    }

    /// Checks dimensions, Hermiticity, trace and positivity.
    pub fn validate(&self, tol: f64) -> Result<()> {
        let n = self.layout.dim();
        if self.matrix.nrows() != n || self.matrix.ncols() != n {
            return Err(Error::InvalidDensity(format!(
                "matrix is {}x{}, layout dimension is {n}",
                self.matrix.nrows(),
                self.matrix.ncols()
            )));
        }
        let herm = hermiticity_defect(&self.matrix);
        if herm > tol {
            return Err(Error::InvalidDensity(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = self.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let min_eig = self
            .eigenvalues()
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -tol {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(())
    }

    pub fn layout(&self) -> &HilbertLayout {
        &self.layout
    }

    pub fn shared_layout(&self) -> &Arc<HilbertLayout> {
        &self.layout
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    /// `Tr rho^2`.
    pub fn purity(&self) -> f64 {
        // Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho.
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().copied().collect()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        self.matrix.column(j).iter().copied().collect()
    }

    /// Largest entrywise deviation from another density matrix.
    pub fn max_abs_diff(&self, other: &DensityMatrix) -> Result<f64> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch(format!(
                "{} vs {}",
                self.layout, other.layout
            )));
        }
        Ok(self
            .matrix
            .iter()
            .zip(other.matrix.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Reduced state on `keep`, ordered as in the full layout.
    pub fn partial_trace<S: AsRef<str>>(&self, keep: &[S]) -> Result<DensityMatrix> {
        let reduced = self.layout.restrict(keep)?;
        let kept: Vec<usize> = (0..self.layout.len())
            .filter(|&p| reduced.contains(&self.layout.subsystems()[p].label))
            .collect();
        let traced: Vec<usize> = (0..self.layout.len())
            .filter(|p| !kept.contains(p))
            .collect();
        let traced_dim: usize = traced
            .iter()
            .map(|&p| self.layout.subsystems()[p].dim)
            .product();

        // Group full indices by their traced-out digits.
        let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); traced_dim];
        for full in 0..self.layout.dim() {
            let mut k = 0;
            for &p in &kept {
                k = k * self.layout.subsystems()[p].dim + self.layout.digit(full, p);
            }
            let mut t = 0;
            for &p in &traced {
                t = t * self.layout.subsystems()[p].dim + self.layout.digit(full, p);
            }
            groups[t].push((k, full));
        }

        let n = reduced.dim();
        let mut out = DMatrix::from_element(n, n, Complex64::new(0.0, 0.0));
        for group in &groups {
            for &(ka, fa) in group {
                for &(kb, fb) in group {
                    out[(ka, kb)] += self.matrix[(fa, fb)];
                }
            }
        }
        Ok(DensityMatrix {
            layout: Arc::new(reduced),
            matrix: out,
        })
    }
}

pub(crate) fn hermiticity_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Kronecker product of density matrices over disjoint layouts.
pub fn tensor_density(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    let layout = a.layout.concat(&b.layout)?;
    Ok(DensityMatrix {
        layout: Arc::new(layout),
        matrix: a.matrix.kronecker(&b.matrix),
    })
}

//! Discretization of the Reeb-invariant sector on a periodic 6-torus.

pub mod field;
pub mod forms;
pub mod fourier;
pub mod grid;
pub mod operator;

use std::sync::Arc;

use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;
use thiserror::Error;

use crate::exterior::{Blade, Form};
use crate::lie::LieAlgebra;

pub use field::{Connection, ConnectionSnapshot, FieldSnapshot, GridField};
pub use forms::*;
pub use fourier::{dft, ModeBlocks};
pub use grid::{DerivativeMode, Grid, AXES};
pub use operator::{FirstOrder, Op, Term};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LatticeError {
    #[error("grid size {0} outside 2..=8")]
    GridSize(usize),
    #[error("grid mismatch: {0} vs {1}")]
    GridMismatch(usize, usize),
    #[error("grade mismatch: {0} vs {1}")]
    GradeMismatch(usize, usize),
    #[error("Lie algebra mismatch")]
    AlgebraMismatch,
    #[error("field has vertical components where a horizontal one is required")]
    NotHorizontal,
    #[error("dense matrix of {rows}x{cols} exceeds the cap of {cap} entries")]
    SizeCap { rows: usize, cols: usize, cap: usize },
    #[error("operator is not translation invariant")]
    NotTranslationInvariant,
    #[error("unknown operator tag '{0}'")]
    UnknownTag(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

/// Number types used on the lattice.
pub trait Num: ComplexField<RealField = f64> + Copy {}
impl Num for f64 {}
impl Num for Complex64 {}

/// Lie algebra in a basis orthonormal for the positive invariant pairing.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatLie {
    name: String,
    dim: usize,
    /// c[(a * d + b) * d + k]: [Y_a, Y_b] = sum_k c_ab^k Y_k.
    c: Vec<f64>,
}

impl FloatLie {
    pub fn from_algebra(g: &LieAlgebra) -> Self {
        let d = g.dim();
        let (c, _) = g.orthonormal_structure();
        let mut flat = vec![0.0; d * d * d];
        for a in 0..d {
            for b in 0..d {
                for k in 0..d {
                    flat[(a * d + b) * d + k] = c[a][b][k];
                }
            }
        }
        FloatLie { name: g.name().to_string(), dim: d, c: flat }
    }

    pub fn su2() -> Arc<Self> {
        Arc::new(Self::from_algebra(&LieAlgebra::su2()))
    }

    pub fn u1() -> Arc<Self> {
        Arc::new(Self::from_algebra(&LieAlgebra::u1()))
    }

    pub fn by_name(name: &str) -> Option<Arc<Self>> {
        LieAlgebra::by_name(name).map(|g| Arc::new(Self::from_algebra(&g)))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn structure(&self, a: usize, b: usize, k: usize) -> f64 {
        self.c[(a * self.dim + b) * self.dim + k]
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(|x| *x == 0.0)
    }

    /// out += s [x, y].
    pub fn bracket_add<T: Num>(&self, x: &[T], y: &[T], s: T, out: &mut [T]) {
        let d = self.dim;
        for a in 0..d {
            if x[a].is_zero() {
                continue;
            }
            for b in 0..d {
                let xy = x[a] * y[b] * s;
                for k in 0..d {
                    let c = self.c[(a * d + b) * d + k];
                    if c != 0.0 {
                        out[k] += xy.scale(c);
                    }
                }
            }
        }
    }

    /// Matrix of ad(x) acting on column vectors.
    pub fn ad_matrix(&self, x: &[f64]) -> DMatrix<f64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |k, b| (0..d).map(|a| x[a] * self.structure(a, b, k)).sum())
    }
}

/// Matrix of a real linear map between spans of blades (columns = domain).
pub fn form_matrix(dom: &[Blade], cod: &[Blade], f: impl Fn(&Form<f64>) -> Form<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(cod.len(), dom.len());
    for (j, b) in dom.iter().enumerate() {
        let img = f(&Form::term(*b, 1.0));
        for (i, c) in cod.iter().enumerate() {
            m[(i, j)] = img.coeff(*c);
        }
    }
    m
}

/// Complex version of [`form_matrix`].
pub fn complex_form_matrix(
    dom: &[Blade],
    cod: &[Blade],
    f: impl Fn(&Form<Complex64>) -> Form<Complex64>,
) -> DMatrix<Complex64> {
    let mut m = DMatrix::zeros(cod.len(), dom.len());
    for (j, b) in dom.iter().enumerate() {
        let img = f(&Form::term(*b, Complex64::new(1.0, 0.0)));
        for (i, c) in cod.iter().enumerate() {
            m[(i, j)] = img.coeff(*c);
        }
    }
    m
}

pub fn to_num<T: Num>(m: &DMatrix<f64>) -> DMatrix<T> {
    m.map(T::from_real)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_su2_is_orthonormal_and_skew() {
        let g = FloatLie::su2();
        assert_eq!(g.dim(), 3);
        let x = [0.3, -1.2, 0.7];
        let ad = g.ad_matrix(&x);
        assert!((&ad + ad.transpose()).norm() < 1e-14);
        let mut out = [0.0; 3];
        g.bracket_add(&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], 1.0, &mut out);
        assert!((out[2] + 2f64.sqrt()).abs() < 1e-14);
        assert!(FloatLie::u1().is_abelian());
    }
}

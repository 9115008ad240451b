//! Periodic N^6 grid on the transverse torus with unit volume.

use std::f64::consts::PI;

use nalgebra::ComplexField;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::LatticeError;

/// Transverse dimension of the grid.
pub const AXES: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DerivativeMode {
    /// Fourier differentiation with the Nyquist mode removed.
    #[default]
    Spectral,
    /// Second-order central differences.
    Central,
}

impl std::str::FromStr for DerivativeMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "spectral" => Ok(DerivativeMode::Spectral),
            "central" => Ok(DerivativeMode::Central),
            _ => Err(format!("unknown derivative mode '{s}' (expected spectral or central)")),
        }
    }
}

/// The lattice and its one-dimensional derivative matrix, shared by all axes.
#[derive(Clone, Debug)]
pub struct Grid {
    n: usize,
    mode: DerivativeMode,
    /// Row-major N x N derivative matrix on [0, 1).
    deriv: Vec<f64>,
    /// Eigenvalue of the derivative on the Fourier mode exp(2 pi i k x).
    lambda: Vec<Complex64>,
    points: usize,
}

impl Grid {
    pub const MIN_N: usize = 2;
    pub const MAX_N: usize = 8;

    pub fn new(n: usize, mode: DerivativeMode) -> Result<Self, LatticeError> {
        if !(Self::MIN_N..=Self::MAX_N).contains(&n) {
            return Err(LatticeError::GridSize(n));
        }
        let deriv = match mode {
            DerivativeMode::Spectral => spectral_matrix(n),
            DerivativeMode::Central => central_matrix(n),
        };
        let lambda = (0..n)
            .map(|k| {
                (0..n).fold(Complex64::new(0.0, 0.0), |acc, r| {
                    acc + Complex64::from_polar(deriv[r], 2.0 * PI * (k * r) as f64 / n as f64)
                })
            })
            .collect();
        Ok(Grid { n, mode, deriv, lambda, points: n.pow(AXES as u32) })
    }

    pub fn spectral(n: usize) -> Result<Self, LatticeError> {
        Grid::new(n, DerivativeMode::Spectral)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> DerivativeMode {
        self.mode
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn cell_volume(&self) -> f64 {
        1.0 / self.points as f64
    }

    pub fn stride(&self, axis: usize) -> usize {
        self.n.pow(axis as u32)
    }

    pub fn coord(&self, p: usize, axis: usize) -> usize {
        (p / self.stride(axis)) % self.n
    }

    pub fn coords(&self, p: usize) -> [usize; AXES] {
        std::array::from_fn(|a| self.coord(p, a))
    }

    /// Position of a point in [0, 1)^6.
    pub fn position(&self, p: usize) -> [f64; AXES] {
        std::array::from_fn(|a| self.coord(p, a) as f64 / self.n as f64)
    }

    pub fn deriv_matrix(&self) -> &[f64] {
        &self.deriv
    }

    pub fn deriv_entry(&self, row: usize, col: usize) -> f64 {
        self.deriv[row * self.n + col]
    }

    /// Eigenvalue of the derivative on mode index k (0..N).
    pub fn eigenvalue(&self, k: usize) -> Complex64 {
        self.lambda[k]
    }

    /// Signed frequency of mode index k.
    pub fn frequency(&self, k: usize) -> i64 {
        let k = k as i64;
        let n = self.n as i64;
        if 2 * k > n {
            k - n
        } else {
            k
        }
    }

    /// out += D_axis x for a field with `comps` components per point.
    pub fn derivative_add<T>(&self, axis: usize, comps: usize, x: &[T], out: &mut [T])
    where
        T: ComplexField<RealField = f64> + Copy,
    {
        let n = self.n;
        let stride = self.stride(axis);
        out.par_chunks_mut(comps).enumerate().for_each(|(p, o)| {
            let xj = (p / stride) % n;
            let base = p - xj * stride;
            let row = &self.deriv[xj * n..(xj + 1) * n];
            for (m, &d) in row.iter().enumerate() {
                if d == 0.0 {
                    continue;
                }
                let src = &x[(base + m * stride) * comps..(base + m * stride + 1) * comps];
                let d = T::from_real(d);
                for (oc, &s) in o.iter_mut().zip(src) {
                    *oc += d * s;
                }
            }
        });
    }

    /// D_axis x as a new vector.
    pub fn derivative<T>(&self, axis: usize, comps: usize, x: &[T]) -> Vec<T>
    where
        T: ComplexField<RealField = f64> + Copy,
    {
        let mut out = vec![T::zero(); x.len()];
        self.derivative_add(axis, comps, x, &mut out);
        out
    }
}

fn spectral_matrix(n: usize) -> Vec<f64> {
    let mut d = vec![0.0; n * n];
    for j in 0..n {
        for m in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                let kk = k as i64;
                let freq = if 2 * kk > n as i64 { kk - n as i64 } else { kk };
                if 2 * kk == n as i64 {
                    continue;
                }
                // Re(2 pi i f exp(2 pi i f (j - m) / n)) = -2 pi f sin(...)
                let phase = 2.0 * PI * freq as f64 * (j as f64 - m as f64) / n as f64;
                acc += -2.0 * PI * freq as f64 * phase.sin();
            }
            d[j * n + m] = acc / n as f64;
        }
    }
    d
}

fn central_matrix(n: usize) -> Vec<f64> {
    let mut d = vec![0.0; n * n];
    let h = 0.5 * n as f64;
    for j in 0..n {
        d[j * n + (j + 1) % n] += h;
        d[j * n + (j + n - 1) % n] -= h;
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_is_skew_and_exact_on_modes() {
        for n in 2..=6 {
            let g = Grid::spectral(n).unwrap();
            for j in 0..n {
                for m in 0..n {
                    assert!((g.deriv_entry(j, m) + g.deriv_entry(m, j)).abs() < 1e-12);
                }
            }
            // d/dx sin(2 pi x) = 2 pi cos(2 pi x) when the mode is resolved
            if n >= 3 {
                let f: Vec<f64> = (0..n).map(|j| (2.0 * PI * j as f64 / n as f64).sin()).collect();
                for j in 0..n {
                    let df: f64 = (0..n).map(|m| g.deriv_entry(j, m) * f[m]).sum();
                    let exact = 2.0 * PI * (2.0 * PI * j as f64 / n as f64).cos();
                    assert!((df - exact).abs() < 1e-12, "n={n}");
                }
            }
        }
    }

    #[test]
    fn eigenvalues_are_imaginary_frequencies() {
        let g = Grid::spectral(5).unwrap();
        for k in 0..5 {
            let l = g.eigenvalue(k);
            assert!(l.re.abs() < 1e-12);
            assert!((l.im - 2.0 * PI * g.frequency(k) as f64).abs() < 1e-12);
        }
        let g = Grid::spectral(4).unwrap();
        assert!(g.eigenvalue(2).norm() < 1e-12);
    }

    #[test]
    fn two_point_grid_is_degenerate() {
        for mode in [DerivativeMode::Spectral, DerivativeMode::Central] {
            let g = Grid::new(2, mode).unwrap();
            assert!(g.deriv_matrix().iter().all(|x| x.abs() < 1e-15));
        }
    }

    #[test]
    fn size_limits() {
        assert!(Grid::spectral(1).is_err());
        assert!(Grid::spectral(9).is_err());
    }

    #[test]
    fn axis_derivatives_commute() {
        let g = Grid::new(3, DerivativeMode::Central).unwrap();
        let x: Vec<f64> = (0..g.points()).map(|p| ((p * 7919) % 101) as f64 / 101.0).collect();
        let a = g.derivative(0, 1, &g.derivative(4, 1, &x));
        let b = g.derivative(4, 1, &g.derivative(0, 1, &x));
        let err = a.iter().zip(&b).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12);
    }
}

//! Unitary lattice Fourier transform and operators acting mode by mode.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::grid::{Grid, AXES};
use super::LatticeError;

/// Unitary DFT over all six axes; `inverse` selects the sign +i.
/// Mode k has the same linear index as point k.
pub fn dft(grid: &Grid, x: &[Complex64], comps: usize, inverse: bool) -> Vec<Complex64> {
    let n = grid.n();
    let sign = if inverse { 1.0 } else { -1.0 };
    let norm = 1.0 / (n as f64).sqrt();
    let tw: Vec<Complex64> = (0..n * n)
        .map(|i| Complex64::from_polar(norm, sign * 2.0 * PI * ((i / n) * (i % n)) as f64 / n as f64))
        .collect();
    let mut cur = x.to_vec();
    let mut next = vec![Complex64::new(0.0, 0.0); x.len()];
    for axis in 0..AXES {
        let stride = grid.stride(axis);
        next.par_chunks_mut(comps).enumerate().for_each(|(p, o)| {
            let k = (p / stride) % n;
            let base = p - k * stride;
            o.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            for m in 0..n {
                let t = tw[k * n + m];
                let src = &cur[(base + m * stride) * comps..(base + m * stride + 1) * comps];
                for (oc, s) in o.iter_mut().zip(src) {
                    *oc += t * s;
                }
            }
        });
        std::mem::swap(&mut cur, &mut next);
    }
    cur
}

/// Evaluate f on every mode in parallel.
pub fn per_mode<R: Send>(grid: &Grid, f: impl Fn([usize; AXES]) -> R + Sync) -> Vec<R> {
    (0..grid.points()).into_par_iter().map(|k| f(grid.coords(k))).collect()
}

/// A translation-invariant operator stored as one block per Fourier mode.
#[derive(Clone, Debug)]
pub struct ModeBlocks {
    pub dom: usize,
    pub cod: usize,
    pub blocks: Vec<DMatrix<Complex64>>,
}

impl ModeBlocks {
    pub fn new(grid: &Grid, dom: usize, cod: usize, f: impl Fn([usize; AXES]) -> DMatrix<Complex64> + Sync) -> Self {
        let blocks = per_mode(grid, f);
        ModeBlocks { dom, cod, blocks }
    }

    pub fn apply(&self, grid: &Grid, x: &[Complex64]) -> Result<Vec<Complex64>, LatticeError> {
        if x.len() != grid.points() * self.dom {
            return Err(LatticeError::Dimension { expected: grid.points() * self.dom, got: x.len() });
        }
        let hat = dft(grid, x, self.dom, false);
        let mut out = vec![Complex64::new(0.0, 0.0); grid.points() * self.cod];
        out.par_chunks_mut(self.cod).enumerate().for_each(|(k, o)| {
            let v = nalgebra::DVectorView::from_slice(&hat[k * self.dom..(k + 1) * self.dom], self.dom);
            let y = &self.blocks[k] * v;
            o.copy_from_slice(y.as_slice());
        });
        Ok(dft(grid, &out, self.cod, true))
    }

    /// Apply to a real field and keep the real part.
    pub fn apply_real(&self, grid: &Grid, x: &[f64]) -> Result<Vec<f64>, LatticeError> {
        let z: Vec<Complex64> = x.iter().map(|v| Complex64::new(*v, 0.0)).collect();
        Ok(self.apply(grid, &z)?.into_iter().map(|z| z.re).collect())
    }

    pub fn compose(&self, other: &ModeBlocks) -> ModeBlocks {
        let blocks = self.blocks.par_iter().zip(&other.blocks).map(|(a, b)| a * b).collect();
        ModeBlocks { dom: other.dom, cod: self.cod, blocks }
    }

    pub fn adjoint(&self) -> ModeBlocks {
        ModeBlocks { dom: self.cod, cod: self.dom, blocks: self.blocks.iter().map(|b| b.adjoint()).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dft_round_trip_and_unitarity() {
        let grid = Grid::spectral(3).unwrap();
        let x: Vec<Complex64> =
            (0..grid.points() * 2).map(|i| Complex64::new((i % 7) as f64 - 3.0, (i % 5) as f64)).collect();
        let hat = dft(&grid, &x, 2, false);
        let back = dft(&grid, &hat, 2, true);
        let err = x.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10);
        let n1: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        let n2: f64 = hat.iter().map(|z| z.norm_sqr()).sum();
        assert!((n1 - n2).abs() < 1e-8 * n1);
    }

    #[test]
    fn derivative_is_diagonal_in_modes() {
        let grid = Grid::spectral(3).unwrap();
        let x: Vec<Complex64> = (0..grid.points()).map(|i| Complex64::new(((i * 37) % 11) as f64, 0.0)).collect();
        let dx = grid.derivative(2, 1, &x);
        let blocks = ModeBlocks::new(&grid, 1, 1, |k| DMatrix::from_element(1, 1, grid.eigenvalue(k[2])));
        let y = blocks.apply(&grid, &x).unwrap();
        let err = dx.iter().zip(&y).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-10);
    }
}

//! Lie-algebra-valued coframe-coefficient fields and connections.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fourier::dft;
use super::grid::{Grid, AXES};
use super::{FloatLie, LatticeError, Num};
use crate::exterior::{Blade, Form};

/// Number of blades of grade k in seven dimensions.
pub fn blade_count(k: usize) -> usize {
    Blade::of_grade(k).len()
}

/// A field of grade-k forms with values in a Lie algebra (orthonormal
/// basis), stored point-major, then blade (in `Blade::of_grade` order),
/// then Lie component.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField<T> {
    n: usize,
    grade: usize,
    lie_dim: usize,
    data: Vec<T>,
}

impl<T: Num> GridField<T> {
    pub fn zeros(grid: &Grid, grade: usize, lie_dim: usize) -> Self {
        let len = grid.points() * blade_count(grade) * lie_dim;
        GridField { n: grid.n(), grade, lie_dim, data: vec![T::zero(); len] }
    }

    pub fn from_data(grid: &Grid, grade: usize, lie_dim: usize, data: Vec<T>) -> Result<Self, LatticeError> {
        let expected = grid.points() * blade_count(grade) * lie_dim;
        if data.len() != expected {
            return Err(LatticeError::Dimension { expected, got: data.len() });
        }
        Ok(GridField { n: grid.n(), grade, lie_dim, data })
    }

    /// Same value at every point; `coeffs` is blade-major, Lie-minor.
    pub fn constant(grid: &Grid, grade: usize, lie_dim: usize, coeffs: &[T]) -> Result<Self, LatticeError> {
        let comps = blade_count(grade) * lie_dim;
        if coeffs.len() != comps {
            return Err(LatticeError::Dimension { expected: comps, got: coeffs.len() });
        }
        let data = coeffs.iter().copied().cycle().take(grid.points() * comps).collect();
        Ok(GridField { n: grid.n(), grade, lie_dim, data })
    }

    pub fn from_fn(grid: &Grid, grade: usize, lie_dim: usize, f: impl Fn(usize) -> Vec<T> + Sync) -> Self {
        let comps = blade_count(grade) * lie_dim;
        let mut out = Self::zeros(grid, grade, lie_dim);
        out.data.par_chunks_mut(comps).enumerate().for_each(|(p, c)| {
            let v = f(p);
            assert_eq!(v.len(), comps, "from_fn closure returned the wrong length");
            c.copy_from_slice(&v);
        });
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn grade(&self) -> usize {
        self.grade
    }

    pub fn lie_dim(&self) -> usize {
        self.lie_dim
    }

    pub fn blades(&self) -> Vec<Blade> {
        Blade::of_grade(self.grade)
    }

    /// Components per point.
    pub fn comps(&self) -> usize {
        blade_count(self.grade) * self.lie_dim
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<T> {
        self.data
    }

    pub fn at(&self, p: usize) -> &[T] {
        let c = self.comps();
        &self.data[p * c..(p + 1) * c]
    }

    pub fn get(&self, p: usize, blade: Blade, a: usize) -> T {
        match self.blades().iter().position(|b| *b == blade) {
            Some(i) => self.at(p)[i * self.lie_dim + a],
            None => T::zero(),
        }
    }

    pub fn same_shape(&self, other: &Self) -> Result<(), LatticeError> {
        if self.n != other.n {
            return Err(LatticeError::GridMismatch(self.n, other.n));
        }
        if self.grade != other.grade {
            return Err(LatticeError::GradeMismatch(self.grade, other.grade));
        }
        if self.lie_dim != other.lie_dim {
            return Err(LatticeError::AlgebraMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, LatticeError> {
        let mut out = self.clone();
        out.axpy(T::one(), other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LatticeError> {
        let mut out = self.clone();
        out.axpy(-T::one(), other)?;
        Ok(out)
    }

    /// self += a * x.
    pub fn axpy(&mut self, a: T, x: &Self) -> Result<(), LatticeError> {
        self.same_shape(x)?;
        self.data.par_iter_mut().zip(&x.data).for_each(|(s, v)| *s += a * *v);
        Ok(())
    }

    pub fn scale(&self, a: T) -> Self {
        let mut out = self.clone();
        out.data.par_iter_mut().for_each(|s| *s *= a);
        out
    }

    /// Quadrature of the fiber inner product (conjugate-linear in self).
    pub fn inner(&self, other: &Self) -> Result<T, LatticeError> {
        self.same_shape(other)?;
        let points = self.n.pow(AXES as u32) as f64;
        let s = self
            .data
            .par_iter()
            .zip(&other.data)
            .map(|(a, b)| a.conjugate() * *b)
            .reduce(T::zero, |x, y| x + y);
        Ok(s.unscale(points))
    }

    pub fn norm2(&self) -> f64 {
        let points = self.n.pow(AXES as u32) as f64;
        self.data.par_iter().map(|a| a.modulus_squared()).sum::<f64>() / points
    }

    pub fn norm(&self) -> f64 {
        self.norm2().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| a.modulus()).fold(0.0, f64::max)
    }

    /// Keep only blades accepted by the predicate.
    /// The constant field equal to the point average.
    pub fn averaged(&self) -> Self {
        let comps = self.comps();
        let points = self.data.len() / comps.max(1);
        let mut mean = vec![T::zero(); comps];
        for chunk in self.data.chunks(comps) {
            for (m, &x) in mean.iter_mut().zip(chunk) {
                *m += x;
            }
        }
        let inv = T::from_real(1.0 / points as f64);
        mean.iter_mut().for_each(|m| *m *= inv);
        GridField { n: self.n, grade: self.grade, lie_dim: self.lie_dim, data: mean.repeat(points) }
    }

    pub fn filter_blades(&self, keep: impl Fn(Blade) -> bool) -> Self {
        let mask: Vec<bool> = self.blades().into_iter().map(keep).collect();
        let d = self.lie_dim;
        let c = self.comps();
        let mut out = self.clone();
        out.data.par_chunks_mut(c).for_each(|chunk| {
            for (i, k) in mask.iter().enumerate() {
                if !k {
                    chunk[i * d..(i + 1) * d].iter_mut().for_each(|x| *x = T::zero());
                }
            }
        });
        out
    }

    pub fn horizontal_part(&self) -> Self {
        self.filter_blades(|b| b.is_horizontal())
    }

    pub fn vertical_norm(&self) -> f64 {
        self.filter_blades(|b| !b.is_horizontal()).norm()
    }

    pub fn require_horizontal(&self, tol: f64) -> Result<(), LatticeError> {
        if self.vertical_norm() > tol {
            Err(LatticeError::NotHorizontal)
        } else {
            Ok(())
        }
    }
}

impl GridField<f64> {
    /// Uniform random coefficients in [-amplitude, amplitude].
    pub fn random(grid: &Grid, grade: usize, lie_dim: usize, rng: &mut impl Rng, amplitude: f64) -> Self {
        let mut out = Self::zeros(grid, grade, lie_dim);
        for x in out.data.iter_mut() {
            *x = rng.random_range(-amplitude..=amplitude);
        }
        out
    }

    /// Random real field containing only Fourier modes with every
    /// frequency in [-max_freq, max_freq], scaled so the largest
    /// coefficient magnitude is `amplitude`.
    pub fn band_limited(
        grid: &Grid,
        grade: usize,
        lie_dim: usize,
        rng: &mut impl Rng,
        amplitude: f64,
        max_freq: i64,
    ) -> Self {
        let comps = blade_count(grade) * lie_dim;
        let mut hat = vec![Complex64::new(0.0, 0.0); grid.points() * comps];
        for k in 0..grid.points() {
            let ok = (0..AXES).all(|a| grid.frequency(grid.coord(k, a)).abs() <= max_freq);
            if ok {
                for c in 0..comps {
                    hat[k * comps + c] =
                        Complex64::new(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
                }
            }
        }
        let x = dft(grid, &hat, comps, true);
        let data: Vec<f64> = x.iter().map(|z| z.re).collect();
        let m = data.iter().fold(0.0f64, |a, b| a.max(b.abs()));
        let s = if m > 0.0 { amplitude / m } else { 0.0 };
        GridField { n: grid.n(), grade, lie_dim, data: data.into_iter().map(|v| v * s).collect() }
    }

    pub fn to_complex(&self) -> GridField<Complex64> {
        GridField {
            n: self.n,
            grade: self.grade,
            lie_dim: self.lie_dim,
            data: self.data.iter().map(|x| Complex64::new(*x, 0.0)).collect(),
        }
    }

    /// Scalar form of Lie component a at point p.
    pub fn component_form(&self, p: usize, a: usize) -> Form<f64> {
        let d = self.lie_dim;
        Form::from_terms(self.blades().into_iter().enumerate().map(|(i, b)| (b, self.at(p)[i * d + a])))
    }

    pub fn snapshot(&self, label: &str) -> FieldSnapshot {
        FieldSnapshot {
            label: label.to_string(),
            n: self.n,
            grade: self.grade,
            lie_dim: self.lie_dim,
            blades: self.blades().iter().map(|b| b.label()).collect(),
            data: self.data.clone(),
        }
    }

    pub fn from_snapshot(s: &FieldSnapshot) -> Result<Self, LatticeError> {
        let grid = Grid::spectral(s.n)?;
        let expected: Vec<String> = Blade::of_grade(s.grade).iter().map(|b| b.label()).collect();
        if expected != s.blades {
            return Err(LatticeError::Dimension { expected: expected.len(), got: s.blades.len() });
        }
        Self::from_data(&grid, s.grade, s.lie_dim, s.data.clone())
    }
}

impl GridField<Complex64> {
    pub fn random_complex(grid: &Grid, grade: usize, lie_dim: usize, rng: &mut impl Rng, amplitude: f64) -> Self {
        let mut out = Self::zeros(grid, grade, lie_dim);
        for x in out.data.iter_mut() {
            *x = Complex64::new(rng.random_range(-amplitude..=amplitude), rng.random_range(-amplitude..=amplitude));
        }
        out
    }

    pub fn re(&self) -> GridField<f64> {
        GridField { n: self.n, grade: self.grade, lie_dim: self.lie_dim, data: self.data.iter().map(|z| z.re).collect() }
    }

    pub fn im(&self) -> GridField<f64> {
        GridField { n: self.n, grade: self.grade, lie_dim: self.lie_dim, data: self.data.iter().map(|z| z.im).collect() }
    }
}

/// JSON snapshot: coefficient arrays in the fixed blade order listed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldSnapshot {
    pub label: String,
    pub n: usize,
    pub grade: usize,
    pub lie_dim: usize,
    pub blades: Vec<String>,
    /// Point-major, then blade, then Lie component.
    pub data: Vec<f64>,
}

/// A = a_h + a_eta * eta with coefficients independent of the Reeb coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct Connection {
    lie: Arc<FloatLie>,
    a_h: GridField<f64>,
    a_eta: GridField<f64>,
}

impl Connection {
    pub fn new(lie: &Arc<FloatLie>, a_h: GridField<f64>, a_eta: GridField<f64>) -> Result<Self, LatticeError> {
        if a_h.grade() != 1 {
            return Err(LatticeError::GradeMismatch(1, a_h.grade()));
        }
        if a_eta.grade() != 0 {
            return Err(LatticeError::GradeMismatch(0, a_eta.grade()));
        }
        if a_h.n() != a_eta.n() {
            return Err(LatticeError::GridMismatch(a_h.n(), a_eta.n()));
        }
        if a_h.lie_dim() != lie.dim() || a_eta.lie_dim() != lie.dim() {
            return Err(LatticeError::AlgebraMismatch);
        }
        a_h.require_horizontal(0.0)?;
        Ok(Connection { lie: lie.clone(), a_h, a_eta })
    }

    pub fn zero(grid: &Grid, lie: &Arc<FloatLie>) -> Self {
        let d = lie.dim();
        Connection { lie: lie.clone(), a_h: GridField::zeros(grid, 1, d), a_eta: GridField::zeros(grid, 0, d) }
    }

    /// Split a full grade-1 field into its horizontal and Reeb parts.
    pub fn from_one_form(lie: &Arc<FloatLie>, a: &GridField<f64>) -> Result<Self, LatticeError> {
        if a.grade() != 1 {
            return Err(LatticeError::GradeMismatch(1, a.grade()));
        }
        let grid = Grid::spectral(a.n())?;
        let d = lie.dim();
        let a_h = a.horizontal_part();
        let a_eta = GridField::from_fn(&grid, 0, d, |p| a.at(p)[6 * d..7 * d].to_vec());
        Connection::new(lie, a_h, a_eta)
    }

    /// Constant connection from seven Lie vectors (coframe components).
    pub fn constant(grid: &Grid, lie: &Arc<FloatLie>, comps: &[Vec<f64>; 7]) -> Result<Self, LatticeError> {
        let flat: Vec<f64> = comps.iter().flatten().copied().collect();
        let a = GridField::constant(grid, 1, lie.dim(), &flat)?;
        Connection::from_one_form(lie, &a)
    }

    pub fn random(grid: &Grid, lie: &Arc<FloatLie>, rng: &mut impl Rng, amplitude: f64) -> Self {
        let a = GridField::random(grid, 1, lie.dim(), rng, amplitude);
        Connection::from_one_form(lie, &a).expect("shapes agree")
    }

    pub fn band_limited(grid: &Grid, lie: &Arc<FloatLie>, rng: &mut impl Rng, amplitude: f64, max_freq: i64) -> Self {
        let a = GridField::band_limited(grid, 1, lie.dim(), rng, amplitude, max_freq);
        Connection::from_one_form(lie, &a).expect("shapes agree")
    }

    pub fn lie(&self) -> &Arc<FloatLie> {
        &self.lie
    }

    pub fn n(&self) -> usize {
        self.a_h.n()
    }

    pub fn a_h(&self) -> &GridField<f64> {
        &self.a_h
    }

    pub fn a_eta(&self) -> &GridField<f64> {
        &self.a_eta
    }

    /// The full one-form A = a_h + a_eta * eta.
    pub fn one_form(&self) -> GridField<f64> {
        let d = self.lie.dim();
        let grid = Grid::spectral(self.n()).expect("valid grid");
        GridField::from_fn(&grid, 1, d, |p| {
            let mut v = self.a_h.at(p).to_vec();
            v[6 * d..7 * d].copy_from_slice(self.a_eta.at(p));
            v
        })
    }

    /// A + alpha for a grade-1 field alpha.
    pub fn shifted(&self, alpha: &GridField<f64>) -> Result<Self, LatticeError> {
        Connection::from_one_form(&self.lie, &self.one_form().add(alpha)?)
    }

    pub fn is_constant(&self) -> bool {
        let a = self.one_form();
        let first = a.at(0).to_vec();
        a.data().chunks(a.comps()).all(|c| c == first.as_slice())
    }

    pub fn snapshot(&self) -> ConnectionSnapshot {
        ConnectionSnapshot { algebra: self.lie.name().to_string(), one_form: self.one_form().snapshot("A") }
    }

    pub fn from_snapshot(s: &ConnectionSnapshot) -> Result<Self, LatticeError> {
        let lie = FloatLie::by_name(&s.algebra).ok_or(LatticeError::AlgebraMismatch)?;
        Connection::from_one_form(&lie, &GridField::from_snapshot(&s.one_form)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConnectionSnapshot {
    pub algebra: String,
    pub one_form: FieldSnapshot,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn inner_product_of_constant_omega() {
        let grid = Grid::spectral(2).unwrap();
        let blades = Blade::of_grade(2);
        let mut coeffs = vec![0.0; blades.len() * 3];
        for b in [Blade::new(&[1, 4]), Blade::new(&[2, 5]), Blade::new(&[3, 6])] {
            let i = blades.iter().position(|x| Some(*x) == b).unwrap();
            coeffs[i * 3] = 1.0;
        }
        let f = GridField::constant(&grid, 2, 3, &coeffs).unwrap();
        assert!((f.inner(&f).unwrap() - 3.0).abs() < 1e-14);
        assert_eq!(GridField::<f64>::zeros(&grid, 2, 3).norm(), 0.0);
    }

    #[test]
    fn horizontal_and_vertical_fields_are_orthogonal() {
        let grid = Grid::spectral(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = GridField::random(&grid, 2, 3, &mut rng, 1.0);
        let h = f.horizontal_part();
        let v = f.sub(&h).unwrap();
        assert!(h.inner(&v).unwrap().abs() < 1e-14);
    }

    #[test]
    fn snapshots_round_trip() {
        let grid = Grid::spectral(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = Connection::random(&grid, &FloatLie::su2(), &mut rng, 0.5);
        let json = serde_json::to_string(&a.snapshot()).unwrap();
        let back = Connection::from_snapshot(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn band_limited_fields_have_few_modes() {
        let grid = Grid::spectral(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = GridField::band_limited(&grid, 0, 1, &mut rng, 1.0, 1);
        let hat = dft(&grid, &f.to_complex().into_data(), 1, false);
        for (k, z) in hat.iter().enumerate() {
            let high = (0..AXES).any(|a| grid.frequency(grid.coord(k, a)).abs() > 1);
            if high {
                assert!(z.norm() < 1e-12);
            }
        }
        assert!((f.max_abs() - 1.0).abs() < 1e-12);
    }
}

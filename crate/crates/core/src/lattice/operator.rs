//! Matrix-free first-order operators and their compositions.
//!
//! A first-order operator is a sum of terms W (D_axis or ad(A_i) or 1),
//! where W acts on the form fiber and the Lie factor is either the
//! identity or the adjoint action of a connection component.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::field::Connection;
use super::grid::{Grid, AXES};
use super::{FloatLie, LatticeError, Num};

#[derive(Clone, Debug)]
pub struct Term<T: Num> {
    /// Differentiate along this transverse axis (0..6).
    pub deriv: Option<usize>,
    /// Act on the Lie factor by ad(A_i) for coframe index i (0..7).
    pub ad: Option<usize>,
    pub w: DMatrix<T>,
}

/// Connection coefficients per point: 7 coframe components times dim g.
#[derive(Clone, Debug, PartialEq)]
struct ConnData {
    values: Vec<f64>,
    constant: bool,
}

#[derive(Clone, Debug)]
pub struct FirstOrder<T: Num> {
    dom: usize,
    cod: usize,
    lie: Arc<FloatLie>,
    terms: Vec<Term<T>>,
    conn: Option<Arc<ConnData>>,
}

impl<T: Num> FirstOrder<T> {
    pub fn new(dom: usize, cod: usize, lie: &Arc<FloatLie>) -> Self {
        FirstOrder { dom, cod, lie: lie.clone(), terms: Vec::new(), conn: None }
    }

    /// Pointwise fiber map W tensor identity.
    pub fn pointwise(w: DMatrix<T>, lie: &Arc<FloatLie>) -> Self {
        let mut op = FirstOrder::new(w.ncols(), w.nrows(), lie);
        op.push(Term { deriv: None, ad: None, w });
        op
    }

    pub fn with_connection(mut self, a: &Connection) -> Self {
        let values = a.one_form().into_data();
        let constant = a.is_constant();
        self.conn = Some(Arc::new(ConnData { values, constant }));
        self
    }

    pub fn push(&mut self, t: Term<T>) {
        assert_eq!((t.w.nrows(), t.w.ncols()), (self.cod, self.dom), "term shape");
        assert!(t.deriv.is_none() || t.ad.is_none(), "a term is either differential or adjoint");
        if t.w.iter().all(|x| x.is_zero()) {
            return;
        }
        self.terms.push(t);
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn lie(&self) -> &Arc<FloatLie> {
        &self.lie
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    pub fn is_translation_invariant(&self) -> bool {
        match &self.conn {
            None => true,
            Some(c) => c.constant || self.terms.iter().all(|t| t.ad.is_none()),
        }
    }

    /// L (self) R with fiber matrices L, R.
    pub fn sandwich(&self, l: &DMatrix<T>, r: &DMatrix<T>) -> Self {
        let mut out = FirstOrder { dom: r.ncols(), cod: l.nrows(), lie: self.lie.clone(), terms: Vec::new(), conn: self.conn.clone() };
        for t in &self.terms {
            out.push(Term { deriv: t.deriv, ad: t.ad, w: l * &t.w * r });
        }
        out
    }

    /// Formal adjoint for the quadrature inner product: derivatives and
    /// ad are skew, so those terms change sign.
    pub fn adjoint(&self) -> Self {
        let mut out = FirstOrder { dom: self.cod, cod: self.dom, lie: self.lie.clone(), terms: Vec::new(), conn: self.conn.clone() };
        for t in &self.terms {
            let wh = t.w.adjoint();
            let w = if t.deriv.is_some() || t.ad.is_some() { -wh } else { wh };
            out.push(Term { deriv: t.deriv, ad: t.ad, w });
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!((self.dom, self.cod), (other.dom, other.cod), "operator shapes");
        let conn = match (&self.conn, &other.conn) {
            (Some(a), Some(b)) => {
                assert!(Arc::ptr_eq(a, b) || a == b, "operators built on different connections");
                Some(a.clone())
            }
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        FirstOrder { dom: self.dom, cod: self.cod, lie: self.lie.clone(), terms, conn }
    }

    pub fn scaled(&self, s: T) -> Self {
        let mut out = self.clone();
        out.terms.iter_mut().for_each(|t| t.w *= s);
        out
    }

    fn merged(&self) -> (Option<DMatrix<T>>, Vec<(usize, DMatrix<T>)>, Vec<(usize, DMatrix<T>)>) {
        let mut w0: Option<DMatrix<T>> = None;
        let mut ad: Vec<(usize, DMatrix<T>)> = Vec::new();
        let mut dv: Vec<(usize, DMatrix<T>)> = Vec::new();
        fn acc<T: Num>(v: &mut Vec<(usize, DMatrix<T>)>, i: usize, w: &DMatrix<T>) {
            match v.iter_mut().find(|(j, _)| *j == i) {
                Some((_, m)) => *m += w,
                None => v.push((i, w.clone())),
            }
        }
        for t in &self.terms {
            match (t.deriv, t.ad) {
                (Some(a), _) => acc(&mut dv, a, &t.w),
                (None, Some(i)) => acc(&mut ad, i, &t.w),
                (None, None) => match &mut w0 {
                    Some(m) => *m += &t.w,
                    None => w0 = Some(t.w.clone()),
                },
            }
        }
        (w0, ad, dv)
    }

    pub fn apply(&self, grid: &Grid, x: &[T]) -> Vec<T> {
        let d = self.lie.dim();
        let cin = self.dom * d;
        let cout = self.cod * d;
        assert_eq!(x.len(), grid.points() * cin, "input length");
        let (w0, ad, dv) = self.merged();
        if !ad.is_empty() {
            assert!(self.conn.is_some(), "adjoint terms need a connection");
        }
        let conn = self.conn.as_ref().map(|c| c.values.as_slice());
        let mut y = vec![T::zero(); grid.points() * cout];
        let lie = &self.lie;
        y.par_chunks_mut(cout).enumerate().for_each(|(p, yp)| {
            let xp = &x[p * cin..(p + 1) * cin];
            if let Some(w) = &w0 {
                fiber_apply_add(w, xp, d, yp);
            }
            if !ad.is_empty() {
                let a_all = &conn.expect("checked")[p * 7 * d..(p + 1) * 7 * d];
                let mut tmp = vec![T::zero(); cin];
                for (i, w) in &ad {
                    let ai: Vec<T> = a_all[i * d..(i + 1) * d].iter().map(|v| T::from_real(*v)).collect();
                    tmp.iter_mut().for_each(|z| *z = T::zero());
                    for r in 0..self.dom {
                        lie.bracket_add(&ai, &xp[r * d..(r + 1) * d], T::one(), &mut tmp[r * d..(r + 1) * d]);
                    }
                    fiber_apply_add(w, &tmp, d, yp);
                }
            }
        });
        for (axis, w) in &dv {
            let mut z = vec![T::zero(); grid.points() * cout];
            z.par_chunks_mut(cout).enumerate().for_each(|(p, zp)| {
                fiber_apply_add(w, &x[p * cin..(p + 1) * cin], d, zp);
            });
            grid.derivative_add(*axis, cout, &z, &mut y);
        }
        y
    }

    /// Fourier symbol at mode k for translation-invariant operators.
    pub fn symbol(&self, grid: &Grid, k: [usize; AXES]) -> Result<DMatrix<Complex64>, LatticeError> {
        if !self.is_translation_invariant() {
            return Err(LatticeError::NotTranslationInvariant);
        }
        let d = self.lie.dim();
        let mut s = DMatrix::zeros(self.cod * d, self.dom * d);
        let to_c = |v: T| {
            let (re, im) = num_parts(v);
            Complex64::new(re, im)
        };
        for t in &self.terms {
            match t.ad {
                Some(i) => {
                    let values = &self.conn.as_ref().expect("adjoint terms need a connection").values;
                    let adm = self.lie.ad_matrix(&values[i * d..(i + 1) * d]);
                    for r in 0..self.cod {
                        for c in 0..self.dom {
                            let w = to_c(t.w[(r, c)]);
                            for a in 0..d {
                                for b in 0..d {
                                    s[(r * d + a, c * d + b)] += w * adm[(a, b)];
                                }
                            }
                        }
                    }
                }
                None => {
                    let lam = match t.deriv {
                        Some(axis) => grid.eigenvalue(k[axis]),
                        None => Complex64::new(1.0, 0.0),
                    };
                    for r in 0..self.cod {
                        for c in 0..self.dom {
                            let w = to_c(t.w[(r, c)]) * lam;
                            for a in 0..d {
                                s[(r * d + a, c * d + a)] += w;
                            }
                        }
                    }
                }
            }
        }
        Ok(s)
    }
}

fn num_parts<T: Num>(v: T) -> (f64, f64) {
    (v.real(), v.imaginary())
}

/// y += W X where X is (rows of W's domain) x d, row-major.
fn fiber_apply_add<T: Num>(w: &DMatrix<T>, x: &[T], d: usize, y: &mut [T]) {
    for c in 0..w.ncols() {
        let xc = &x[c * d..(c + 1) * d];
        if xc.iter().all(|v| v.is_zero()) {
            continue;
        }
        for r in 0..w.nrows() {
            let wr = w[(r, c)];
            if wr.is_zero() {
                continue;
            }
            for a in 0..d {
                y[r * d + a] += wr * xc[a];
            }
        }
    }
}

/// Linear operators built from first-order pieces.
#[derive(Clone, Debug)]
pub enum Op<T: Num> {
    First(FirstOrder<T>),
    /// Composition [A, B, C] = A after B after C.
    Chain(Vec<Op<T>>),
    Sum(Vec<Op<T>>),
    Scaled(T, Box<Op<T>>),
}

impl<T: Num> From<FirstOrder<T>> for Op<T> {
    fn from(f: FirstOrder<T>) -> Self {
        Op::First(f)
    }
}

impl<T: Num> Op<T> {
    /// Components per point in the domain (fiber times Lie dimension).
    pub fn dom(&self) -> usize {
        match self {
            Op::First(f) => f.dom * f.lie.dim(),
            Op::Chain(v) => v.last().expect("non-empty chain").dom(),
            Op::Sum(v) => v[0].dom(),
            Op::Scaled(_, o) => o.dom(),
        }
    }

    pub fn cod(&self) -> usize {
        match self {
            Op::First(f) => f.cod * f.lie.dim(),
            Op::Chain(v) => v[0].cod(),
            Op::Sum(v) => v[0].cod(),
            Op::Scaled(_, o) => o.cod(),
        }
    }

    /// self after other.
    pub fn after(&self, other: &Op<T>) -> Op<T> {
        assert_eq!(self.dom(), other.cod(), "composition shapes");
        let mut v = match self {
            Op::Chain(a) => a.clone(),
            a => vec![a.clone()],
        };
        match other {
            Op::Chain(b) => v.extend(b.iter().cloned()),
            b => v.push(b.clone()),
        }
        Op::Chain(v)
    }

    pub fn plus(&self, other: &Op<T>) -> Op<T> {
        assert_eq!((self.dom(), self.cod()), (other.dom(), other.cod()), "sum shapes");
        Op::Sum(vec![self.clone(), other.clone()])
    }

    pub fn minus(&self, other: &Op<T>) -> Op<T> {
        self.plus(&other.scale(-T::one()))
    }

    pub fn scale(&self, s: T) -> Op<T> {
        Op::Scaled(s, Box::new(self.clone()))
    }

    /// A B - B A.
    pub fn commutator(a: &Op<T>, b: &Op<T>) -> Op<T> {
        a.after(b).minus(&b.after(a))
    }

    /// A B + B A.
    pub fn anticommutator(a: &Op<T>, b: &Op<T>) -> Op<T> {
        a.after(b).plus(&b.after(a))
    }

    pub fn apply(&self, grid: &Grid, x: &[T]) -> Vec<T> {
        match self {
            Op::First(f) => f.apply(grid, x),
            Op::Chain(v) => v.iter().rev().fold(x.to_vec(), |acc, o| o.apply(grid, &acc)),
            Op::Sum(v) => {
                let mut out = v[0].apply(grid, x);
                for o in &v[1..] {
                    let y = o.apply(grid, x);
                    out.par_iter_mut().zip(&y).for_each(|(a, b)| *a += *b);
                }
                out
            }
            Op::Scaled(s, o) => {
                let mut y = o.apply(grid, x);
                y.par_iter_mut().for_each(|v| *v *= *s);
                y
            }
        }
    }

    pub fn adjoint(&self) -> Op<T> {
        match self {
            Op::First(f) => Op::First(f.adjoint()),
            Op::Chain(v) => Op::Chain(v.iter().rev().map(|o| o.adjoint()).collect()),
            Op::Sum(v) => Op::Sum(v.iter().map(|o| o.adjoint()).collect()),
            Op::Scaled(s, o) => Op::Scaled(s.conjugate(), Box::new(o.adjoint())),
        }
    }

    pub fn is_translation_invariant(&self) -> bool {
        match self {
            Op::First(f) => f.is_translation_invariant(),
            Op::Chain(v) | Op::Sum(v) => v.iter().all(|o| o.is_translation_invariant()),
            Op::Scaled(_, o) => o.is_translation_invariant(),
        }
    }

    pub fn symbol(&self, grid: &Grid, k: [usize; AXES]) -> Result<DMatrix<Complex64>, LatticeError> {
        match self {
            Op::First(f) => f.symbol(grid, k),
            Op::Chain(v) => {
                let mut m = v[0].symbol(grid, k)?;
                for o in &v[1..] {
                    m = &m * o.symbol(grid, k)?;
                }
                Ok(m)
            }
            Op::Sum(v) => {
                let mut m = v[0].symbol(grid, k)?;
                for o in &v[1..] {
                    m += o.symbol(grid, k)?;
                }
                Ok(m)
            }
            Op::Scaled(s, o) => Ok(o.symbol(grid, k)? * Complex64::new(s.real(), s.imaginary())),
        }
    }

    /// Dense matrix (columns in parallel), guarded by a cap on entries.
    pub fn assemble(&self, grid: &Grid, cap: usize) -> Result<DMatrix<T>, LatticeError> {
        let cols = grid.points() * self.dom();
        let rows = grid.points() * self.cod();
        if rows.saturating_mul(cols) > cap {
            return Err(LatticeError::SizeCap { rows, cols, cap });
        }
        let columns: Vec<Vec<T>> = (0..cols)
            .into_par_iter()
            .map(|j| {
                let mut e = vec![T::zero(); cols];
                e[j] = T::one();
                self.apply(grid, &e)
            })
            .collect();
        Ok(DMatrix::from_fn(rows, cols, |i, j| columns[j][i]))
    }
}

/// Default cap on dense matrix entries (about 1 GB of f64).
pub const DENSE_CAP: usize = 1 << 27;

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_vec(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
        (0..len).map(|_| rng.random_range(-1.0..1.0)).collect()
    }

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    fn sample_op(grid: &Grid, rng: &mut ChaCha8Rng) -> (FirstOrder<f64>, Connection) {
        let lie = FloatLie::su2();
        let a = Connection::random(grid, &lie, rng, 0.7);
        let mut op = FirstOrder::new(3, 2, &lie).with_connection(&a);
        for axis in [0, 3, 5] {
            op.push(Term { deriv: Some(axis), ad: None, w: DMatrix::from_fn(2, 3, |_, _| rng.random_range(-1.0..1.0)) });
        }
        for i in [1, 6] {
            op.push(Term { deriv: None, ad: Some(i), w: DMatrix::from_fn(2, 3, |_, _| rng.random_range(-1.0..1.0)) });
        }
        op.push(Term { deriv: None, ad: None, w: DMatrix::from_fn(2, 3, |_, _| rng.random_range(-1.0..1.0)) });
        (op, a)
    }

    #[test]
    fn adjoint_matches_inner_product() {
        let grid = Grid::spectral(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (op, _) = sample_op(&grid, &mut rng);
        let op = Op::First(op);
        let x = random_vec(&mut rng, grid.points() * op.dom());
        let y = random_vec(&mut rng, grid.points() * op.cod());
        let lhs = dot(&op.apply(&grid, &x), &y);
        let rhs = dot(&x, &op.adjoint().apply(&grid, &y));
        assert!((lhs - rhs).abs() < 1e-9 * lhs.abs().max(1.0));
    }

    #[test]
    fn assembled_matrix_agrees_with_apply() {
        let grid = Grid::spectral(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let (op, _) = sample_op(&grid, &mut rng);
        let op = Op::First(op);
        let m = op.assemble(&grid, DENSE_CAP).unwrap();
        let x = random_vec(&mut rng, grid.points() * op.dom());
        let y = op.apply(&grid, &x);
        let ym = &m * nalgebra::DVector::from_vec(x);
        let err = y.iter().zip(ym.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12);
        assert!(op.assemble(&grid, 10).is_err());
    }

    #[test]
    fn symbol_reproduces_apply_on_a_plane_wave() {
        let grid = Grid::spectral(3).unwrap();
        let lie = FloatLie::su2();
        let a = Connection::constant(&grid, &lie, &std::array::from_fn(|i| vec![0.1 * i as f64, -0.3, 0.2])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut op = FirstOrder::<Complex64>::new(2, 2, &lie).with_connection(&a);
        let rnd = |rng: &mut ChaCha8Rng| DMatrix::from_fn(2, 2, |_, _| Complex64::new(rng.random_range(-1.0..1.0), 0.0));
        op.push(Term { deriv: Some(1), ad: None, w: rnd(&mut rng) });
        op.push(Term { deriv: None, ad: Some(6), w: rnd(&mut rng) });
        assert!(op.is_translation_invariant());
        let k = [0, 1, 2, 0, 0, 1];
        let v: Vec<Complex64> = (0..6).map(|i| Complex64::new(i as f64, 1.0)).collect();
        let x: Vec<Complex64> = (0..grid.points())
            .flat_map(|p| {
                let c = grid.coords(p);
                let phase: f64 = (0..AXES).map(|j| (k[j] * c[j]) as f64).sum::<f64>() / 3.0;
                let e = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * phase);
                v.iter().map(move |z| z * e).collect::<Vec<_>>()
            })
            .collect();
        let y = op.apply(&grid, &x);
        let s = op.symbol(&grid, k).unwrap() * nalgebra::DVector::from_vec(v.clone());
        for i in 0..6 {
            assert!((y[i] - s[i]).norm() < 1e-10);
        }
    }
}

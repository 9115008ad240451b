//! Lie-algebra-valued forms: graded bracket, trace pairings, the ideal
//! generated by Omega^2_8 and canonical representatives of the quotient.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::exact::QMatrix;
use crate::exterior::{Blade, Form, Q, QC, Scalar, REEB};
use crate::sasaki::{eta, omega, p1, p6, split_hv};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("operands live in different Lie algebras ({0} vs {1})")]
    AlgebraMismatch(String, String),
    #[error("basis matrices are not closed under the commutator")]
    NotClosed,
    #[error("the pairing -tr(XY) is degenerate on the given basis")]
    Degenerate,
    #[error("structure constants violate {0}")]
    Identity(&'static str),
    #[error("expected {expected} components, got {found}")]
    Components { expected: usize, found: usize },
}

/// Square matrix over exact complex rationals.
pub type CMat = Vec<Vec<QC>>;

fn mat_mul(a: &CMat, b: &CMat) -> CMat {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(QC::zero(), |acc, k| acc + a[i][k].clone() * b[k][j].clone()))
                .collect()
        })
        .collect()
}

fn commutator(a: &CMat, b: &CMat) -> CMat {
    let ab = mat_mul(a, b);
    let ba = mat_mul(b, a);
    ab.iter()
        .zip(&ba)
        .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x.clone() - y.clone()).collect())
        .collect()
}

fn trace(a: &CMat) -> QC {
    (0..a.len()).fold(QC::zero(), |acc, i| acc + a[i][i].clone())
}

/// A matrix Lie algebra with exact structure constants.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    name: String,
    basis: Vec<CMat>,
    /// structure[a][b][c]: [X_a, X_b] = sum_c structure[a][b][c] X_c.
    structure: Vec<Vec<Vec<Q>>>,
    /// <X_a, X_b> = -tr(X_a X_b).
    gram: Vec<Vec<Q>>,
}

fn c(re: (i64, i64), im: (i64, i64)) -> QC {
    QC::new(Q::new(re.0.into(), re.1.into()), Q::new(im.0.into(), im.1.into()))
}

impl LieAlgebra {
    /// Builds the algebra spanned by anti-Hermitian matrices, checking
    /// closure, antisymmetry and the Jacobi identity exactly.
    pub fn from_matrices(name: &str, basis: Vec<CMat>) -> Result<Self, LieError> {
        let d = basis.len();
        let pair = |a: &CMat, b: &CMat| -> QC { -trace(&mat_mul(a, b)) };
        let mut gram = vec![vec![Q::zero(); d]; d];
        let mut gm = QMatrix::zeros(d, d);
        for a in 0..d {
            for b in 0..d {
                let p = pair(&basis[a], &basis[b]);
                if !p.im.is_zero() {
                    return Err(LieError::Degenerate);
                }
                gram[a][b] = p.re.clone();
                gm.set(a, b, p.re);
            }
        }
        if gm.rank() < d {
            return Err(LieError::Degenerate);
        }
        let mut structure = vec![vec![vec![Q::zero(); d]; d]; d];
        for a in 0..d {
            for b in 0..d {
                let br = commutator(&basis[a], &basis[b]);
                let rhs: Vec<QC> = (0..d).map(|k| pair(&basis[k], &br)).collect();
                if rhs.iter().any(|x| !x.im.is_zero()) {
                    return Err(LieError::NotClosed);
                }
                let rhs: Vec<Q> = rhs.into_iter().map(|x| x.re).collect();
                let coef = gm.solve(&rhs).ok_or(LieError::Degenerate)?;
                // Reconstruct and compare to detect non-closure.
                let n = br.len();
                for i in 0..n {
                    for j in 0..n {
                        let rec = (0..d).fold(QC::zero(), |acc, k| {
                            acc + basis[k][i][j].clone() * QC::new(coef[k].clone(), Q::zero())
                        });
                        if rec != br[i][j] {
                            return Err(LieError::NotClosed);
                        }
                    }
                }
                structure[a][b] = coef;
            }
        }
        let alg = LieAlgebra { name: name.to_string(), basis, structure, gram };
        alg.check_identities()?;
        Ok(alg)
    }

    fn check_identities(&self) -> Result<(), LieError> {
        let d = self.dim();
        for a in 0..d {
            for b in 0..d {
                for k in 0..d {
                    if self.structure[a][b][k] != -self.structure[b][a][k].clone() {
                        return Err(LieError::Identity("antisymmetry"));
                    }
                }
            }
        }
        for a in 0..d {
            for b in 0..d {
                for cc in 0..d {
                    for out in 0..d {
                        let mut s = Q::zero();
                        for m in 0..d {
                            s += &self.structure[a][b][m] * &self.structure[m][cc][out];
                            s += &self.structure[b][cc][m] * &self.structure[m][a][out];
                            s += &self.structure[cc][a][m] * &self.structure[m][b][out];
                        }
                        if !s.is_zero() {
                            return Err(LieError::Identity("Jacobi"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// su(2) with tau_a = i sigma_a / 2, so [tau_a, tau_b] = -eps_abc tau_c
    /// and -tr(tau_a tau_b) = delta_ab / 2.
    pub fn su2() -> Self {
        let z = QC::zero;
        let t1 = vec![vec![z(), c((0, 1), (1, 2))], vec![c((0, 1), (1, 2)), z()]];
        let t2 = vec![vec![z(), c((1, 2), (0, 1))], vec![c((-1, 2), (0, 1)), z()]];
        let t3 = vec![vec![c((0, 1), (1, 2)), z()], vec![z(), c((0, 1), (-1, 2))]];
        LieAlgebra::from_matrices("su2", vec![t1, t2, t3]).expect("su(2) basis is valid")
    }

    /// u(1) spanned by (i).
    pub fn u1() -> Self {
        LieAlgebra::from_matrices("u1", vec![vec![vec![c((0, 1), (1, 1))]]]).expect("u(1) basis is valid")
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "su2" => Some(LieAlgebra::su2()),
            "u1" => Some(LieAlgebra::u1()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    pub fn structure(&self, a: usize, b: usize, c: usize) -> &Q {
        &self.structure[a][b][c]
    }

    pub fn gram(&self, a: usize, b: usize) -> &Q {
        &self.gram[a][b]
    }

    /// tr(X_a X_b).
    pub fn trace_form(&self, a: usize, b: usize) -> Q {
        -self.gram[a][b].clone()
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.iter().flatten().flatten().all(|x| x.is_zero())
    }

    /// Structure constants in a basis orthonormal for -tr, as floats, with
    /// the change of basis. Returns (c[a][b][c], m) where the orthonormal
    /// basis is Y_a = sum_b m[a][b] X_b.
    pub fn orthonormal_structure(&self) -> (Vec<Vec<Vec<f64>>>, Vec<Vec<f64>>) {
        let d = self.dim();
        let g = nalgebra::DMatrix::from_fn(d, d, |i, j| f64::from_q(&self.gram[i][j]));
        let chol = nalgebra::Cholesky::new(g).expect("invariant pairing is positive definite");
        // G = L L^T; Y = L^{-1} X is orthonormal.
        let linv = chol.l().try_inverse().expect("Cholesky factor is invertible");
        let s = |a: usize, b: usize, k: usize| f64::from_q(&self.structure[a][b][k]);
        let l = chol.l();
        let mut out = vec![vec![vec![0.0; d]; d]; d];
        for a in 0..d {
            for b in 0..d {
                for k in 0..d {
                    // [Y_a, Y_b] = sum linv[a][i] linv[b][j] s_ij^m X_m and X_m = sum L[m][k] Y_k.
                    let mut acc = 0.0;
                    for i in 0..d {
                        for j in 0..d {
                            for m in 0..d {
                                acc += linv[(a, i)] * linv[(b, j)] * s(i, j, m) * l[(m, k)];
                            }
                        }
                    }
                    out[a][b][k] = acc;
                }
            }
        }
        let m = (0..d).map(|a| (0..d).map(|b| linv[(a, b)]).collect()).collect();
        (out, m)
    }
}

impl fmt::Display for LieAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {})", self.name, self.dim())
    }
}

/// Which 2-form subspace generates the ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum IdealKind {
    /// I generated by Omega^2_8.
    #[default]
    Eight,
    /// I generated by Omega^2_6.
    Six,
}

fn p8<S: Scalar>(a: &Form<S>) -> Form<S> {
    &(a - &p1(a)) - &p6(a)
}

fn surviving_part<S: Scalar>(a: &Form<S>, kind: IdealKind) -> Form<S> {
    match kind {
        IdealKind::Eight => &p6(a) + &p1(a),
        IdealKind::Six => &p8(a) + &p1(a),
    }
}

/// Canonical representative in L^k of a scalar form, per homogeneous part.
pub fn reduce_form<S: Scalar>(a: &Form<S>, kind: IdealKind) -> Form<S> {
    let mut out = Form::zero();
    for k in a.grades() {
        let ak = a.grade_part(k);
        let r = match k {
            0 | 1 => ak,
            2 => {
                let (h, v) = split_hv(&ak);
                &surviving_part(&h, kind) + &v
            }
            3 => eta::<S>().wedge(&surviving_part(&ak.contract_reeb(), kind)),
            _ => Form::zero(),
        };
        out = &out + &r;
    }
    out
}

/// Exact dimension of L^k (per Lie direction).
pub fn quotient_dim(k: usize, kind: IdealKind) -> usize {
    let blades = Blade::of_grade(k);
    QMatrix::of_form_map(&blades, &blades, |a| reduce_form(a, kind)).rank()
}

/// Dimension of the degree-k part of the ideal generated by the chosen
/// 2-form subspace, computed from spanning products (independent of reduce).
pub fn ideal_dim(k: usize, kind: IdealKind) -> usize {
    if k < 2 {
        return 0;
    }
    let gens: Vec<Form<Q>> = match kind {
        IdealKind::Eight => crate::sasaki::w_basis::<Q>().to_vec(),
        IdealKind::Six => crate::sasaki::v_basis::<Q>().to_vec(),
    };
    let blades = Blade::of_grade(k);
    let mut cols = Vec::new();
    for g in &gens {
        for b in Blade::of_grade(k - 2) {
            let p = g.wedge(&Form::term(b, Q::one()));
            cols.push(p.coords(&blades));
        }
    }
    if cols.is_empty() {
        return 0;
    }
    QMatrix::from_columns(blades.len(), &cols).rank()
}

/// A form with values in a Lie algebra: e^I ↦ coefficient vector in the basis.
#[derive(Clone, PartialEq)]
pub struct LieForm<S: Scalar> {
    algebra: Arc<LieAlgebra>,
    terms: BTreeMap<Blade, Vec<S>>,
}

impl<S: Scalar> LieForm<S> {
    pub fn zero(algebra: &Arc<LieAlgebra>) -> Self {
        LieForm { algebra: algebra.clone(), terms: BTreeMap::new() }
    }

    /// X_a ⊗ f.
    pub fn from_form(algebra: &Arc<LieAlgebra>, a: usize, f: &Form<S>) -> Self {
        let mut comps = vec![Form::zero(); algebra.dim()];
        comps[a] = f.clone();
        LieForm::from_components(algebra, comps).expect("component count matches")
    }

    /// sum_a X_a ⊗ comps[a].
    pub fn from_components(algebra: &Arc<LieAlgebra>, comps: Vec<Form<S>>) -> Result<Self, LieError> {
        let d = algebra.dim();
        if comps.len() != d {
            return Err(LieError::Components { expected: d, found: comps.len() });
        }
        let mut out = LieForm::zero(algebra);
        for (a, f) in comps.iter().enumerate() {
            for (b, x) in f.iter() {
                out.add_entry(*b, a, x.clone());
            }
        }
        Ok(out)
    }

    fn add_entry(&mut self, b: Blade, a: usize, x: S) {
        if x.is_zero() {
            return;
        }
        let d = self.algebra.dim();
        let v = self.terms.entry(b).or_insert_with(|| vec![S::zero(); d]);
        v[a] = v[a].clone() + x;
        if v.iter().all(|y| y.is_zero()) {
            self.terms.remove(&b);
        }
    }

    pub fn algebra(&self) -> &Arc<LieAlgebra> {
        &self.algebra
    }

    pub fn component(&self, a: usize) -> Form<S> {
        Form::from_terms(self.terms.iter().map(|(b, v)| (*b, v[a].clone())))
    }

    pub fn components(&self) -> Vec<Form<S>> {
        (0..self.algebra.dim()).map(|a| self.component(a)).collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &Vec<S>)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(|b| b.grade()).collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    pub fn map_components(&self, f: impl Fn(&Form<S>) -> Form<S>) -> Self {
        LieForm::from_components(&self.algebra, self.components().iter().map(f).collect())
            .expect("component count preserved")
    }

    pub fn norm2_f64(&self) -> f64 {
        self.terms.values().flatten().map(|x| x.abs2_f64()).sum()
    }

    fn same_algebra(&self, other: &Self) -> Result<(), LieError> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra {
            Ok(())
        } else {
            Err(LieError::AlgebraMismatch(self.algebra.name.clone(), other.algebra.name.clone()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, LieError> {
        self.same_algebra(other)?;
        let mut out = self.clone();
        for (b, v) in &other.terms {
            for (a, x) in v.iter().enumerate() {
                out.add_entry(*b, a, x.clone());
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LieError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = LieForm::zero(&self.algebra);
        for (b, v) in &self.terms {
            for (a, x) in v.iter().enumerate() {
                out.add_entry(*b, a, x.clone() * c.clone());
            }
        }
        out
    }

    /// f ∧ self for a scalar form f.
    pub fn left_wedge(&self, f: &Form<S>) -> Self {
        self.map_components(|g| f.wedge(g))
    }

    /// self ∧ f for a scalar form f.
    pub fn right_wedge(&self, f: &Form<S>) -> Self {
        self.map_components(|g| g.wedge(f))
    }

    /// The graded bracket [a ∧ b] = sum [X_a, X_b] ⊗ (alpha^a ∧ beta^b).
    pub fn bracket_wedge(&self, other: &Self) -> Result<Self, LieError> {
        self.same_algebra(other)?;
        let d = self.algebra.dim();
        let sc: Vec<S> = (0..d * d * d)
            .map(|i| S::from_q(&self.algebra.structure[i / (d * d)][(i / d) % d][i % d]))
            .collect();
        let mut out = LieForm::zero(&self.algebra);
        for (i, x) in &self.terms {
            for (j, y) in &other.terms {
                let Some(sign) = i.wedge_sign(*j) else { continue };
                let blade = i.union(*j);
                for (a, xa) in x.iter().enumerate() {
                    if xa.is_zero() {
                        continue;
                    }
                    for (b, yb) in y.iter().enumerate() {
                        if yb.is_zero() {
                            continue;
                        }
                        let p = xa.clone() * yb.clone();
                        let p = if sign < 0 { -p } else { p };
                        for k in 0..d {
                            let s = &sc[(a * d + b) * d + k];
                            if !s.is_zero() {
                                out.add_entry(blade, k, p.clone() * s.clone());
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Canonical representative in the quotient by the ideal.
    pub fn reduce(&self, kind: IdealKind) -> Self {
        self.map_components(|f| reduce_form(f, kind))
    }

    pub fn ideal_member(&self, kind: IdealKind) -> bool {
        self.reduce(kind).is_zero()
    }

    /// sum_ab tr(X_a X_b) alpha^a ∧ beta^b.
    pub fn trace_pair(&self, other: &Self) -> Result<Form<S>, LieError> {
        self.pairing(other, |a, b| S::from_q(&self.algebra.trace_form(a, b)))
    }

    /// sum_ab <X_a, X_b> alpha^a ∧ beta^b with the positive pairing -tr.
    pub fn inner_pair(&self, other: &Self) -> Result<Form<S>, LieError> {
        self.pairing(other, |a, b| S::from_q(&self.algebra.gram[a][b]))
    }

    fn pairing(&self, other: &Self, g: impl Fn(usize, usize) -> S) -> Result<Form<S>, LieError> {
        self.same_algebra(other)?;
        let d = self.algebra.dim();
        let mut out = Form::zero();
        let ca = self.components();
        let cb = other.components();
        for a in 0..d {
            for b in 0..d {
                let w = g(a, b);
                if w.is_zero() || ca[a].is_zero() || cb[b].is_zero() {
                    continue;
                }
                out = &out + &ca[a].wedge(&cb[b]).scale(&w);
            }
        }
        Ok(out)
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .components()
            .iter()
            .enumerate()
            .filter(|(_, f)| !f.is_zero())
            .map(|(a, f)| format!("X{}⊗({})", a + 1, f.render()))
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl<S: Scalar> fmt::Debug for LieForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// d_A a + (1/2)[a ∧ a], with d_A a supplied by the caller.
pub fn mc_residual<S: Scalar>(d_a: &LieForm<S>, a: &LieForm<S>) -> Result<LieForm<S>, LieError> {
    let half = S::ratio(1, 2);
    d_a.add(&a.bracket_wedge(a)?.scale(&half))
}

/// The constant exterior derivative on the coframe: d e^i = 0 for i < 7,
/// d eta = omega, extended as a graded derivation (constant coefficients).
pub fn d_constant<S: Scalar>(a: &Form<S>) -> Form<S> {
    let mut out = Form::zero();
    for (b, x) in a.iter() {
        if b.contains(REEB) {
            let h = Form::term(b.without(REEB), x.clone());
            let s = if h.is_of_grade(b.grade() - 1) && (b.grade() - 1) % 2 == 1 { -S::one() } else { S::one() };
            out = &out + &h.wedge(&omega()).scale(&s);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{e, q, qi, QForm};
    use crate::sasaki::{v_basis, w_basis};

    fn su2() -> Arc<LieAlgebra> {
        Arc::new(LieAlgebra::su2())
    }

    #[test]
    fn su2_constants() {
        let g = LieAlgebra::su2();
        assert_eq!(g.dim(), 3);
        // [tau_1, tau_2] = -tau_3
        assert_eq!(*g.structure(0, 1, 2), qi(-1));
        assert_eq!(*g.structure(1, 2, 0), qi(-1));
        assert_eq!(*g.gram(0, 0), q(1, 2));
        assert_eq!(*g.gram(0, 1), qi(0));
        assert!(!g.is_abelian());
        assert!(LieAlgebra::u1().is_abelian());
    }

    #[test]
    fn orthonormal_structure_is_scaled() {
        let (c, _) = LieAlgebra::su2().orthonormal_structure();
        assert!((c[0][1][2] + 2f64.sqrt()).abs() < 1e-14);
        assert!(c[0][0][1].abs() < 1e-14);
    }

    #[test]
    fn non_closed_basis_is_rejected() {
        let z = QC::zero;
        let i2 = |x: i64| QC::new(Q::zero(), qi(x));
        let t1 = vec![vec![z(), i2(1)], vec![i2(1), z()]];
        let t3 = vec![vec![i2(1), z()], vec![z(), i2(-1)]];
        assert_eq!(LieAlgebra::from_matrices("bad", vec![t1, t3]), Err(LieError::NotClosed));
    }

    #[test]
    fn bracket_examples() {
        let g = su2();
        let a = LieForm::from_form(&g, 0, &e(&[1]));
        assert!(a.bracket_wedge(&a).unwrap().is_zero());
        let b = LieForm::from_form(&g, 1, &e(&[2]));
        let ab = a.bracket_wedge(&b).unwrap();
        assert_eq!(ab, LieForm::from_form(&g, 2, &(-e(&[1, 2]))));
        let ba = b.bracket_wedge(&a).unwrap();
        // graded symmetry [a∧b] = -(-1)^{pq}[b∧a] with p = q = 1
        assert_eq!(ab, ba);
    }

    #[test]
    fn algebra_mismatch_is_an_error() {
        let a = LieForm::from_form(&su2(), 0, &e(&[1]));
        let b = LieForm::from_form(&Arc::new(LieAlgebra::u1()), 0, &e(&[1]));
        assert!(matches!(a.bracket_wedge(&b), Err(LieError::AlgebraMismatch(..))));
    }

    #[test]
    fn mc_residual_examples() {
        let g = su2();
        let zero = LieForm::<Q>::zero(&g);
        assert!(mc_residual(&zero, &zero).unwrap().is_zero());
        let a = LieForm::from_form(&g, 0, &e(&[7]));
        let da = a.map_components(d_constant);
        assert_eq!(da, LieForm::from_form(&g, 0, &omega()));
        assert_eq!(mc_residual(&da, &a).unwrap(), da);
    }

    #[test]
    fn reduce_examples() {
        let g = su2();
        let w1 = LieForm::from_form(&g, 0, &w_basis::<Q>()[0]);
        assert!(w1.reduce(IdealKind::Eight).is_zero());
        let t = LieForm::from_form(&g, 1, &e(&[1, 2, 3]));
        assert!(t.reduce(IdealKind::Eight).is_zero());
        let v1 = LieForm::from_form(&g, 2, &v_basis::<Q>()[0]);
        assert_eq!(v1.reduce(IdealKind::Eight), v1);
    }

    #[test]
    fn ideal_member_examples() {
        let g = su2();
        let x = LieForm::from_form(&g, 0, &w_basis::<Q>()[2].wedge(&e(&[5])));
        assert!(x.ideal_member(IdealKind::Eight));
        assert!(!LieForm::from_form(&g, 0, &omega::<Q>()).ideal_member(IdealKind::Eight));
        let y = LieForm::from_form(&g, 0, &eta::<Q>().wedge(&v_basis::<Q>()[1]));
        assert!(!y.ideal_member(IdealKind::Eight));
    }

    #[test]
    fn quotient_dims() {
        let eight = [1, 7, 13, 7, 0, 0, 0, 0];
        let six = [1, 7, 15, 9, 0, 0, 0, 0];
        for k in 0..=7 {
            assert_eq!(quotient_dim(k, IdealKind::Eight), eight[k], "grade {k}");
            assert_eq!(quotient_dim(k, IdealKind::Six), six[k], "grade {k}");
        }
    }

    #[test]
    fn projector_kernel_versus_generated_ideal() {
        // The Omega^2_6 projector kills exactly the generated ideal.
        for k in 0..=7 {
            let total = Blade::of_grade(k).len();
            assert_eq!(total - ideal_dim(k, IdealKind::Six), quotient_dim(k, IdealKind::Six));
        }
        // The ideal generated by Omega^2_8 misses Theta_+ and Theta_- in degree 3
        // and eta ∧ Theta_± in degree 4: the contractions of Theta_± lie in
        // Omega^2_6, not in Omega^2_8.
        let codim: Vec<usize> = (0..=7).map(|k| Blade::of_grade(k).len() - ideal_dim(k, IdealKind::Eight)).collect();
        assert_eq!(codim, vec![1, 7, 13, 9, 2, 0, 0, 0]);
        let tp = crate::sasaki::theta_plus::<Q>();
        for i in 1..=6 {
            let c = tp.contract(i);
            assert_eq!(p6(&c), c);
        }
    }

    #[test]
    fn trace_pair_examples() {
        let g = su2();
        let a = LieForm::from_form(&g, 0, &omega());
        let t = LieAlgebra::su2().trace_form(0, 0);
        let w: QForm = omega();
        assert_eq!(a.trace_pair(&a).unwrap(), w.wedge(&w).scale(&t));
        let x = LieForm::from_form(&g, 0, &e(&[1]));
        let y = LieForm::from_form(&g, 1, &e(&[2]));
        assert!(x.trace_pair(&y).unwrap().is_zero());
        assert!(LieForm::zero(&g).trace_pair(&x).unwrap().is_zero());
    }
}

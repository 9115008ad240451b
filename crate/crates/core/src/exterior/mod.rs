//! Exterior algebra of (R^7)* in the orthonormal contact coframe e^1..e^7,
//! with e^7 = eta.

mod blade;
mod scalar;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub use blade::{Blade, DIM, REEB};
pub use scalar::{q, qi, ComplexScalar, Q, QC, RealScalar, Scalar, Tolerance, Tower};

/// Sign convention for the volume form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Orientation {
    /// vol = +e^{1234567}.
    #[default]
    Positive,
    /// vol = -e^{1234567}, the opposite orientation.
    Negative,
}

impl Orientation {
    pub fn sign(self) -> i8 {
        match self {
            Orientation::Positive => 1,
            Orientation::Negative => -1,
        }
    }

    pub fn flipped(self) -> Orientation {
        match self {
            Orientation::Positive => Orientation::Negative,
            Orientation::Negative => Orientation::Positive,
        }
    }
}

/// A finite linear combination of blades. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Form<S> {
    terms: BTreeMap<Blade, S>,
}

fn signed<S: Scalar>(s: i8, x: S) -> S {
    if s < 0 {
        -x
    } else {
        x
    }
}

impl<S: Scalar> Form<S> {
    pub fn zero() -> Self {
        Form { terms: BTreeMap::new() }
    }

    pub fn scalar(c: S) -> Self {
        Form::term(Blade::SCALAR, c)
    }

    pub fn one() -> Self {
        Form::scalar(S::one())
    }

    pub fn term(b: Blade, c: S) -> Self {
        let mut f = Form::zero();
        f.add_term(b, c);
        f
    }

    /// e^{i1} ∧ ... ∧ e^{ik} for arbitrary (possibly unsorted) indices.
    pub fn e(indices: &[usize]) -> Self {
        match Blade::from_unsorted(indices) {
            Some((b, s)) => Form::term(b, signed(s, S::one())),
            None => Form::zero(),
        }
    }

    /// The coframe 1-form e^i.
    pub fn basis1(i: usize) -> Self {
        Form::term(Blade::basis(i), S::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Blade, S)>>(it: I) -> Self {
        let mut f = Form::zero();
        for (b, c) in it {
            f.add_term(b, c);
        }
        f
    }

    /// Adds `c e^b` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, b: Blade, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&b) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(b, s);
                }
            }
            None => {
                self.terms.insert(b, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, b: Blade) -> S {
        self.terms.get(&b).cloned().unwrap_or_else(S::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Blade, &S)> {
        self.terms.iter()
    }

    pub fn blades(&self) -> impl Iterator<Item = Blade> + '_ {
        self.terms.keys().copied()
    }

    /// Grades present, ascending.
    pub fn grades(&self) -> Vec<usize> {
        let mut g: Vec<usize> = self.terms.keys().map(|b| b.grade()).collect();
        g.dedup();
        g.sort_unstable();
        g.dedup();
        g
    }

    /// The single grade of a nonzero homogeneous form; `None` if mixed or zero.
    pub fn homogeneous_grade(&self) -> Option<usize> {
        match self.grades().as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }

    /// True when the form is zero or of grade exactly `k`.
    pub fn is_of_grade(&self, k: usize) -> bool {
        self.terms.keys().all(|b| b.grade() == k)
    }

    pub fn grade_part(&self, k: usize) -> Self {
        self.filter(|b| b.grade() == k)
    }

    pub fn filter(&self, keep: impl Fn(Blade) -> bool) -> Self {
        Form {
            terms: self
                .terms
                .iter()
                .filter(|(b, _)| keep(**b))
                .map(|(b, c)| (*b, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        Form::from_terms(self.terms.iter().map(|(b, x)| (*b, x.clone() * c.clone())))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Form<T> {
        Form::from_terms(self.terms.iter().map(|(b, x)| (*b, f(x))))
    }

    pub fn conj(&self) -> Self {
        self.map(|x| x.conj())
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Form::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                if let Some(s) = a.wedge_sign(*b) {
                    out.add_term(a.union(*b), signed(s, x.clone() * y.clone()));
                }
            }
        }
        out
    }

    /// Interior product by the frame vector E_i (E_7 is the Reeb field).
    pub fn contract(&self, i: usize) -> Self {
        assert!((1..=DIM).contains(&i), "frame index out of range: {i}");
        let mut out = Form::zero();
        for (b, x) in &self.terms {
            if b.contains(i) {
                // Move e^i to the front past the indices below it.
                let below = b.indices().take_while(|&j| j < i).count();
                let s = if below % 2 == 0 { 1 } else { -1 };
                out.add_term(b.without(i), signed(s, x.clone()));
            }
        }
        out
    }

    /// i_xi, the contraction by the Reeb field.
    pub fn contract_reeb(&self) -> Self {
        self.contract(REEB)
    }

    /// Hodge star with vol = +e^{1..7}.
    pub fn hodge_star(&self) -> Self {
        self.hodge_star_oriented(Orientation::Positive)
    }

    /// Hodge star defined by a ∧ *b = <a, b> vol.
    pub fn hodge_star_oriented(&self, o: Orientation) -> Self {
        let mut out = Form::zero();
        for (b, x) in &self.terms {
            let c = b.complement();
            let s = b.wedge_sign(c).expect("complement is disjoint") * o.sign();
            out.add_term(c, signed(s, x.clone()));
        }
        out
    }

    /// The coefficient-wise bilinear pairing sum_I a_I b_I. On real forms this
    /// is the metric inner product; cross-grade terms never meet.
    pub fn inner(&self, other: &Self) -> S {
        let mut acc = S::zero();
        for (b, x) in &self.terms {
            if let Some(y) = other.terms.get(b) {
                acc = acc + x.clone() * y.clone();
            }
        }
        acc
    }

    /// Hermitian pairing sum_I conj(a_I) b_I.
    pub fn hermitian_inner(&self, other: &Self) -> S {
        let mut acc = S::zero();
        for (b, x) in &self.terms {
            if let Some(y) = other.terms.get(b) {
                acc = acc + x.conj() * y.clone();
            }
        }
        acc
    }

    pub fn norm2_f64(&self) -> f64 {
        self.terms.values().map(|x| x.abs2_f64()).sum()
    }

    pub fn norm_f64(&self) -> f64 {
        self.norm2_f64().sqrt()
    }

    /// i_xi(*a) - (-1)^p *(eta ∧ a), computed per homogeneous part.
    pub fn compat_residual(&self) -> Self {
        let eta = Form::basis1(REEB);
        let mut out = Form::zero();
        for p in self.grades() {
            let a = self.grade_part(p);
            let lhs = a.hodge_star().contract_reeb();
            let rhs = eta.wedge(&a).hodge_star();
            let rhs = if p % 2 == 0 { rhs } else { -rhs };
            out = out + (lhs - rhs);
        }
        out
    }

    /// Coefficients against a list of blades, in that order.
    pub fn coords(&self, blades: &[Blade]) -> Vec<S> {
        blades.iter().map(|b| self.coeff(*b)).collect()
    }

    pub fn from_coords(blades: &[Blade], coords: &[S]) -> Self {
        Form::from_terms(blades.iter().copied().zip(coords.iter().cloned()))
    }

    /// Canonical text: blades in canonical order, exact signed coefficients.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (b, x)) in self.terms.iter().enumerate() {
            let (neg, mag) = x.render_signed();
            match (k, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if *b == Blade::SCALAR {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&b.label());
            } else {
                out.push_str(&mag);
                out.push(' ');
                out.push_str(&b.label());
            }
        }
        out
    }
}

impl<C: ComplexScalar> Form<C> {
    pub fn re(&self) -> Form<C::Real> {
        self.map(|x| x.re())
    }

    pub fn im(&self) -> Form<C::Real> {
        self.map(|x| x.im())
    }

    pub fn from_real(f: &Form<C::Real>) -> Self {
        f.map(|x| C::from_real(x.clone()))
    }

    pub fn from_re_im(re: &Form<C::Real>, im: &Form<C::Real>) -> Self {
        Form::from_real(re) + Form::from_real(im).scale(&C::i())
    }
}

impl<S: Scalar> Default for Form<S> {
    fn default() -> Self {
        Form::zero()
    }
}

impl<S: Scalar> fmt::Debug for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<S: Scalar> fmt::Display for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl<S: Scalar> Add<&Form<S>> for &Form<S> {
    type Output = Form<S>;
    fn add(self, rhs: &Form<S>) -> Form<S> {
        let mut out = self.clone();
        for (b, x) in &rhs.terms {
            out.add_term(*b, x.clone());
        }
        out
    }
}

impl<S: Scalar> Add for Form<S> {
    type Output = Form<S>;
    fn add(self, rhs: Form<S>) -> Form<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub<&Form<S>> for &Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: &Form<S>) -> Form<S> {
        let mut out = self.clone();
        for (b, x) in &rhs.terms {
            out.add_term(*b, -x.clone());
        }
        out
    }
}

impl<S: Scalar> Sub for Form<S> {
    type Output = Form<S>;
    fn sub(self, rhs: Form<S>) -> Form<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Neg for &Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        Form {
            terms: self.terms.iter().map(|(b, x)| (*b, -x.clone())).collect(),
        }
    }
}

impl<S: Scalar> Neg for Form<S> {
    type Output = Form<S>;
    fn neg(self) -> Form<S> {
        -&self
    }
}

/// Wedge product.
impl<S: Scalar> Mul<&Form<S>> for &Form<S> {
    type Output = Form<S>;
    fn mul(self, rhs: &Form<S>) -> Form<S> {
        self.wedge(rhs)
    }
}

/// Wedge product.
impl<S: Scalar> Mul for Form<S> {
    type Output = Form<S>;
    fn mul(self, rhs: Form<S>) -> Form<S> {
        self.wedge(&rhs)
    }
}

/// Exact real form.
pub type QForm = Form<Q>;
/// Exact complex form.
pub type QCForm = Form<QC>;

/// Shorthand for an exact real e^I with unit coefficient.
pub fn e(indices: &[usize]) -> QForm {
    Form::e(indices)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn omega() -> QForm {
        e(&[1, 4]) + e(&[2, 5]) + e(&[3, 6])
    }

    #[test]
    fn wedge_basics() {
        assert_eq!(e(&[1]) * e(&[2]), e(&[1, 2]));
        assert_eq!(e(&[2]) * e(&[1]), -e(&[1, 2]));
        assert!((e(&[3]) * e(&[3])).is_zero());
    }

    #[test]
    fn omega_squared() {
        let expected = (e(&[1, 2, 4, 5]) + e(&[1, 3, 4, 6]) + e(&[2, 3, 5, 6])).scale(&qi(-2));
        assert_eq!(omega() * omega(), expected);
    }

    #[test]
    fn contraction_examples() {
        let eta = e(&[7]);
        assert_eq!(eta.contract_reeb(), QForm::one());
        assert!(e(&[1, 2]).contract_reeb().is_zero());
        assert_eq!((eta.clone() * e(&[1])).contract_reeb(), e(&[1]));
        // i_2 e^{123} = -e^{13}
        assert_eq!(e(&[1, 2, 3]).contract(2), -e(&[1, 3]));
    }

    #[test]
    fn star_with_positive_orientation() {
        assert_eq!(QForm::one().hodge_star(), e(&[1, 2, 3, 4, 5, 6, 7]));
        assert_eq!(e(&[1, 4]).hodge_star().hodge_star(), e(&[1, 4]));
        let sigma = e(&[7]) * omega();
        let half_omega2 = (omega() * omega()).scale(&q(1, 2));
        assert_eq!(sigma.hodge_star(), -half_omega2.clone());
        assert_eq!(sigma.hodge_star_oriented(Orientation::Negative), half_omega2);
    }

    #[test]
    fn inner_products() {
        assert_eq!(omega().inner(&omega()), qi(3));
        assert_eq!(e(&[1, 2]).inner(&e(&[1, 3])), qi(0));
        let sigma = e(&[7]) * omega();
        assert_eq!(sigma.inner(&sigma), qi(3));
    }

    #[test]
    fn compat_residual_examples() {
        assert!(e(&[1]).compat_residual().is_zero());
        assert!(e(&[7]).compat_residual().is_zero());
        assert!(omega().compat_residual().is_zero());
    }

    #[test]
    fn rendering() {
        let f = e(&[1, 7]).scale(&q(3, 2)) - e(&[2]) + QForm::scalar(qi(-1));
        assert_eq!(f.render(), "-1 - e2 + 3/2 e17");
        assert_eq!(QForm::zero().render(), "0");
    }

    #[test]
    fn complex_parts_roundtrip() {
        let z: QCForm = QCForm::from_re_im(&e(&[1]), &e(&[4]));
        assert_eq!(z.re(), e(&[1]));
        assert_eq!(z.im(), e(&[4]));
        assert_eq!(z.conj().im(), -e(&[4]));
    }
}

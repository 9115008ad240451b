//! Contact Calabi-Yau structure on the Darboux coframe: structure forms,
//! horizontal/vertical projections, the L_sigma eigenspaces, the transverse
//! star and complex structure, (p,q) types and pointwise instanton tests.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::exterior::{Blade, ComplexScalar, Form, Orientation, RealScalar, Scalar, Tower, REEB};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SasakiError {
    #[error("expected a form of grade {expected}, found grades {found:?}")]
    WrongGrade { expected: usize, found: Vec<usize> },
    #[error("expected a horizontal form (i_xi a = 0)")]
    NotHorizontal,
    #[error("expected a homogeneous form, found grades {0:?}")]
    Mixed(Vec<usize>),
}

pub type Result<T> = std::result::Result<T, SasakiError>;

fn require_grade<S: Scalar>(a: &Form<S>, k: usize) -> Result<()> {
    if a.is_of_grade(k) {
        Ok(())
    } else {
        Err(SasakiError::WrongGrade { expected: k, found: a.grades() })
    }
}

fn require_horizontal<S: Scalar>(a: &Form<S>) -> Result<()> {
    if a.blades().all(|b| b.is_horizontal()) {
        Ok(())
    } else {
        Err(SasakiError::NotHorizontal)
    }
}

fn e<S: Scalar>(idx: &[usize]) -> Form<S> {
    Form::e(idx)
}

/// eta = e^7.
pub fn eta<S: Scalar>() -> Form<S> {
    e(&[REEB])
}

/// omega = d eta = e^14 + e^25 + e^36.
pub fn omega<S: Scalar>() -> Form<S> {
    e(&[1, 4]) + e(&[2, 5]) + e(&[3, 6])
}

/// sigma = eta ∧ omega.
pub fn sigma<S: Scalar>() -> Form<S> {
    eta::<S>().wedge(&omega())
}

/// dz^j = e^j + i e^{j+3}, j = 1, 2, 3.
pub fn dz<C: ComplexScalar>(j: usize) -> Form<C> {
    assert!((1..=3).contains(&j));
    Form::basis1(j) + Form::basis1(j + 3).scale(&C::i())
}

/// conj(dz^j) = e^j - i e^{j+3}.
pub fn dzbar<C: ComplexScalar>(j: usize) -> Form<C> {
    dz::<C>(j).conj()
}

/// epsilon = dz^1 ∧ dz^2 ∧ dz^3.
pub fn epsilon<C: ComplexScalar>() -> Form<C> {
    dz::<C>(1).wedge(&dz(2)).wedge(&dz(3))
}

/// Theta_+ = Re(epsilon) = e^123 + e^246 - e^345 - e^156.
pub fn theta_plus<S: RealScalar>() -> Form<S> {
    epsilon::<S::Complex>().re()
}

/// Theta_- = Im(epsilon) = e^126 + e^234 - e^135 - e^456.
pub fn theta_minus<S: RealScalar>() -> Form<S> {
    epsilon::<S::Complex>().im()
}

/// The G2 3-form phi = sigma + Theta_-.
pub fn phi<S: RealScalar>() -> Form<S> {
    sigma::<S>() + theta_minus()
}

/// psi = (1/2) omega^2 + eta ∧ Theta_+.
pub fn psi<S: RealScalar>() -> Form<S> {
    let w = omega::<S>();
    w.wedge(&w).scale(&S::ratio(1, 2)) + eta::<S>().wedge(&theta_plus())
}

/// All structure forms bundled.
#[derive(Clone, Debug)]
pub struct StructureForms<S: RealScalar> {
    pub eta: Form<S>,
    pub omega: Form<S>,
    pub sigma: Form<S>,
    pub epsilon: Form<S::Complex>,
    pub theta_plus: Form<S>,
    pub theta_minus: Form<S>,
    pub phi: Form<S>,
    pub psi: Form<S>,
}

impl<S: RealScalar> StructureForms<S> {
    pub fn new() -> Self {
        StructureForms {
            eta: eta(),
            omega: omega(),
            sigma: sigma(),
            epsilon: epsilon(),
            theta_plus: theta_plus(),
            theta_minus: theta_minus(),
            phi: phi(),
            psi: psi(),
        }
    }
}

impl<S: RealScalar> Default for StructureForms<S> {
    fn default() -> Self {
        Self::new()
    }
}

/// v_1..v_6, spanning the -1 eigenspace of L_sigma (index 0 holds v_1).
pub fn v_basis<S: Scalar>() -> [Form<S>; 6] {
    [
        e(&[1, 2]) - e(&[4, 5]),
        e(&[1, 5]) - e(&[2, 4]),
        e(&[1, 3]) - e(&[4, 6]),
        e(&[1, 6]) - e(&[3, 4]),
        e(&[2, 3]) - e(&[5, 6]),
        e(&[2, 6]) - e(&[3, 5]),
    ]
}

/// w_1..w_8, spanning the +1 eigenspace of L_sigma (index 0 holds w_1).
pub fn w_basis<S: Scalar>() -> [Form<S>; 8] {
    [
        e(&[1, 2]) + e(&[4, 5]),
        e(&[1, 5]) + e(&[2, 4]),
        e(&[1, 3]) + e(&[4, 6]),
        e(&[1, 6]) + e(&[3, 4]),
        e(&[2, 3]) + e(&[5, 6]),
        e(&[2, 6]) + e(&[3, 5]),
        e(&[1, 4]) - e(&[3, 6]),
        e(&[2, 5]) - e(&[3, 6]),
    ]
}

/// The eigenbasis of L_sigma on horizontal 2-forms.
#[derive(Clone, Debug)]
pub struct EigenBasis<S: Scalar> {
    pub v: [Form<S>; 6],
    pub w: [Form<S>; 8],
}

impl<S: Scalar> EigenBasis<S> {
    pub fn new() -> Self {
        EigenBasis { v: v_basis(), w: w_basis() }
    }
}

impl<S: Scalar> Default for EigenBasis<S> {
    fn default() -> Self {
        Self::new()
    }
}

/// T(a) = eta ∧ i_xi a, the vertical part.
pub fn project_t<S: Scalar>(a: &Form<S>) -> Form<S> {
    eta::<S>().wedge(&a.contract_reeb())
}

/// Splits a = H + V with V = eta ∧ i_xi a.
pub fn split_hv<S: Scalar>(a: &Form<S>) -> (Form<S>, Form<S>) {
    let v = project_t(a);
    (a - &v, v)
}

pub fn is_horizontal<S: Scalar>(a: &Form<S>) -> bool {
    a.blades().all(|b| b.is_horizontal())
}

/// L_sigma(a) = *(sigma ∧ a) on 2-forms.
pub fn l_sigma<S: Scalar>(a: &Form<S>) -> Result<Form<S>> {
    require_grade(a, 2)?;
    Ok(sigma::<S>().wedge(a).hodge_star())
}

/// L_sigma under an explicit orientation.
pub fn l_sigma_oriented<S: Scalar>(a: &Form<S>, o: Orientation) -> Result<Form<S>> {
    require_grade(a, 2)?;
    Ok(sigma::<S>().wedge(a).hodge_star_oriented(o))
}

/// The four components of a 2-form.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoFormSplit<S: Scalar> {
    pub p1: Form<S>,
    pub p6: Form<S>,
    pub p8: Form<S>,
    pub pv: Form<S>,
}

impl<S: Scalar> TwoFormSplit<S> {
    pub fn sum(&self) -> Form<S> {
        &(&(&self.p1 + &self.p6) + &self.p8) + &self.pv
    }

    pub fn parts(&self) -> [&Form<S>; 4] {
        [&self.p1, &self.p6, &self.p8, &self.pv]
    }
}

/// Projection onto span(omega).
pub fn p1<S: Scalar>(a: &Form<S>) -> Form<S> {
    let w = omega::<S>();
    w.scale(&(a.inner(&w) / S::from_i64(3)))
}

/// Projection onto span(v_i); the v_i are orthogonal with squared norm 2.
pub fn p6<S: Scalar>(a: &Form<S>) -> Form<S> {
    let mut out = Form::zero();
    for v in v_basis::<S>() {
        out = &out + &v.scale(&(a.inner(&v) / S::from_i64(2)));
    }
    out
}

/// Splits a 2-form into its Omega^2_1, Omega^2_6, Omega^2_8 and vertical parts.
pub fn eigen_split<S: Scalar>(a: &Form<S>) -> Result<TwoFormSplit<S>> {
    require_grade(a, 2)?;
    let (h, pv) = split_hv(a);
    let p1 = p1(&h);
    let p6 = p6(&h);
    let p8 = &(&h - &p1) - &p6;
    Ok(TwoFormSplit { p1, p6, p8, pv })
}

/// *sigma under the default orientation.
pub fn star_sigma<S: Scalar>() -> Form<S> {
    sigma::<S>().hodge_star()
}

/// L_{*sigma}(a) = a ∧ *sigma.
pub fn l_star_sigma<S: Scalar>(a: &Form<S>) -> Form<S> {
    a.wedge(&star_sigma())
}

/// L_eps(a) = *(a ∧ Theta_-).
pub fn l_epsilon<S: RealScalar>(a: &Form<S>) -> Form<S> {
    a.wedge(&theta_minus()).hodge_star()
}

/// The fixed isomorphism Omega^2_V -> Omega^2_6 given by the table
/// e^{i7} -> -v_{t(i)} with t = (5, 3, 1, 6, 4, 2).
pub fn vertical_to_six_table<S: Scalar>(a: &Form<S>) -> Form<S> {
    const TARGET: [usize; 6] = [5, 3, 1, 6, 4, 2];
    let v = v_basis::<S>();
    let mut out = Form::zero();
    for (i, t) in TARGET.iter().enumerate() {
        let c = a.coeff(Blade::new(&[i + 1, REEB]).unwrap());
        if !c.is_zero() {
            out = &out - &v[t - 1].scale(&c);
        }
    }
    out
}

/// Transverse star *_T a = (-1)^{6-k} *(a ∧ eta) on horizontal k-forms.
pub fn transverse_star<S: Scalar>(a: &Form<S>) -> Result<Form<S>> {
    require_horizontal(a)?;
    let mut out = Form::zero();
    for k in a.grades() {
        let s = a.grade_part(k).wedge(&eta()).hodge_star();
        out = &out + &if (6 - k) % 2 == 0 { s } else { -s };
    }
    Ok(out)
}

/// Image of a horizontal coframe vector under J: e^i -> e^{i+3}, e^{i+3} -> -e^i.
fn j_basis<S: Scalar>(i: usize) -> Form<S> {
    match i {
        1..=3 => Form::basis1(i + 3),
        4..=6 => -Form::basis1(i - 3),
        _ => panic!("J is defined on horizontal directions only"),
    }
}

/// Substitutes e^i -> images[i-1] and extends multiplicatively.
pub fn substitute<S: Scalar>(a: &Form<S>, images: &[Form<S>; 7]) -> Form<S> {
    let mut out = Form::zero();
    for (b, c) in a.iter() {
        let mut t = Form::scalar(c.clone());
        for i in b.indices() {
            t = t.wedge(&images[i - 1]);
            if t.is_zero() {
                break;
            }
        }
        out = &out + &t;
    }
    out
}

/// J extended to horizontal forms as an algebra automorphism. On 1-forms
/// J e^i = e^{i+3}, J e^{i+3} = -e^i.
pub fn j_map<S: Scalar>(a: &Form<S>) -> Result<Form<S>> {
    require_horizontal(a)?;
    let images: [Form<S>; 7] = std::array::from_fn(|k| if k < 6 { j_basis(k + 1) } else { Form::zero() });
    Ok(substitute(a, &images))
}

/// Bidegree of a component: (p, q) of the horizontal factor, and whether
/// the component carries an eta factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PqType {
    pub p: usize,
    pub q: usize,
    pub vertical: bool,
}

impl PqType {
    pub fn horizontal(p: usize, q: usize) -> Self {
        PqType { p, q, vertical: false }
    }

    pub fn vertical(p: usize, q: usize) -> Self {
        PqType { p, q, vertical: true }
    }
}

/// Decomposes a complex form by J-bidegree of its horizontal factor.
///
/// The form is rewritten in the frame (dz^1, dz^2, dz^3, dzbar^1, dzbar^2,
/// dzbar^3, eta), grouped by bidegree, and each group rewritten back.
pub fn pq_decompose<C: ComplexScalar>(a: &Form<C>) -> BTreeMap<PqType, Form<C>> {
    let half = C::ratio(1, 2);
    let half_i = C::i() * half.clone();
    // Slots 1..3 stand for dz^j, 4..6 for dzbar^j, 7 for eta.
    let to_z: [Form<C>; 7] = std::array::from_fn(|k| match k {
        0..=2 => (Form::basis1(k + 1) + Form::basis1(k + 4)).scale(&half),
        3..=5 => (Form::basis1(k - 2) - Form::basis1(k + 1)).scale(&(-half_i.clone())),
        _ => Form::basis1(REEB),
    });
    let from_z: [Form<C>; 7] = std::array::from_fn(|k| match k {
        0..=2 => dz::<C>(k + 1),
        3..=5 => dzbar::<C>(k - 2),
        _ => Form::basis1(REEB),
    });
    let z = substitute(a, &to_z);
    let mut groups: BTreeMap<PqType, Form<C>> = BTreeMap::new();
    for (b, c) in z.iter() {
        let p = (1..=3).filter(|&i| b.contains(i)).count();
        let q = (4..=6).filter(|&i| b.contains(i)).count();
        let key = PqType { p, q, vertical: b.contains(REEB) };
        groups.entry(key).or_default().add_term(*b, c.clone());
    }
    groups
        .into_iter()
        .map(|(k, f)| (k, substitute(&f, &from_z)))
        .filter(|(_, f)| !f.is_zero())
        .collect()
}

/// Components of a horizontal 3-form under Lambda^3 = R Theta_+ ⊕ R Theta_- ⊕ Lambda^3_6 ⊕ Lambda^3_12.
#[derive(Clone, Debug, PartialEq)]
pub struct Lambda3Split<S: Scalar> {
    pub re: Form<S>,
    pub im: Form<S>,
    pub six: Form<S>,
    pub twelve: Form<S>,
}

/// Basis e^i ∧ omega of Lambda^3_6 (orthogonal, squared norm 2).
pub fn lambda3_six_basis<S: Scalar>() -> [Form<S>; 6] {
    std::array::from_fn(|k| Form::basis1(k + 1).wedge(&omega()))
}

pub fn lambda3_decompose<S: RealScalar>(a: &Form<S>) -> Result<Lambda3Split<S>> {
    require_grade(a, 3)?;
    require_horizontal(a)?;
    let tp = theta_plus::<S>();
    let tm = theta_minus::<S>();
    let four = S::from_i64(4);
    let re = tp.scale(&(a.inner(&tp) / four.clone()));
    let im = tm.scale(&(a.inner(&tm) / four));
    let mut six = Form::zero();
    for b in lambda3_six_basis::<S>() {
        six = &six + &b.scale(&(a.inner(&b) / S::from_i64(2)));
    }
    let twelve = &(&(a - &re) - &im) - &six;
    Ok(Lambda3Split { re, im, six, twelve })
}

/// Pointwise instanton tests for a 2-form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InstantonPredicates {
    pub sdci: bool,
    pub asdci: bool,
    pub hym: bool,
    pub g2: bool,
    pub residuals: PredicateResiduals,
}

/// Norms of the obstructions to each predicate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PredicateResiduals {
    pub sdci: f64,
    pub asdci: f64,
    pub hym: f64,
    pub g2: f64,
}

fn negligible<S: Scalar>(parts: &[&Form<S>], tol: f64) -> (bool, f64) {
    let n2: f64 = parts.iter().map(|f| f.norm2_f64()).sum();
    let exact = matches!(S::TOWER, Tower::Rational | Tower::ComplexRational);
    let ok = if exact { parts.iter().all(|f| f.is_zero()) } else { n2.sqrt() <= tol };
    (ok, n2.sqrt())
}

/// SDCI: only an Omega^2_8 part. ASDCI: only an Omega^2_6 part. HYM: type
/// (1,1), horizontal, and orthogonal to omega. G2: F ∧ psi = 0. Exact towers
/// decide exactly; float towers compare the residual norm against `tol`.
pub fn instanton_predicates<S: RealScalar>(f: &Form<S>, tol: f64) -> Result<InstantonPredicates> {
    let split = eigen_split(f)?;
    let (sdci, r_sd) = negligible(&[&split.p1, &split.p6, &split.pv], tol);
    let (asdci, r_asd) = negligible(&[&split.p1, &split.p8, &split.pv], tol);
    let fc: Form<S::Complex> = Form::from_real(f);
    let mut off_type: Vec<Form<S>> = Vec::new();
    for (k, part) in pq_decompose(&fc) {
        if k != PqType::horizontal(1, 1) {
            off_type.push(part.re());
            off_type.push(part.im());
        }
    }
    let trace = Form::scalar(f.inner(&omega()));
    let mut hym_parts: Vec<&Form<S>> = off_type.iter().collect();
    hym_parts.push(&trace);
    let (hym, r_hym) = negligible(&hym_parts, tol);
    let fpsi = f.wedge(&psi());
    let (g2, r_g2) = negligible(&[&fpsi], tol);
    Ok(InstantonPredicates {
        sdci,
        asdci,
        hym,
        g2,
        residuals: PredicateResiduals { sdci: r_sd, asdci: r_asd, hym: r_hym, g2: r_g2 },
    })
}

/// Eigenvalue of the G2 operator a -> *(phi ∧ a) on Omega^2_6, if v_1 is an
/// eigenvector.
pub fn g2_operator_eigenvalue_on_six<S: RealScalar>() -> Option<S> {
    let v1 = v_basis::<S>()[0].clone();
    let image = phi::<S>().wedge(&v1).hodge_star();
    let lambda = image.inner(&v1) / v1.inner(&v1);
    if image == v1.scale(&lambda) {
        Some(lambda)
    } else {
        None
    }
}

/// Spectral data of the G2 operator a -> *(phi ∧ a) on all 2-forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct G2Spectrum {
    /// (M - 1)(M + 2) = 0 holds exactly.
    pub minimal_polynomial: bool,
    pub dim_plus_one: usize,
    pub dim_minus_two: usize,
    /// Whether Omega^2_6 is mapped into itself.
    pub six_invariant: bool,
}

pub fn g2_operator_spectrum() -> G2Spectrum {
    use crate::exact::QMatrix;
    use crate::exterior::Q;
    let blades = Blade::of_grade(2);
    let ph = phi::<Q>();
    let m = QMatrix::of_form_map(&blades, &blades, |a| ph.wedge(a).hodge_star());
    let id = QMatrix::identity(blades.len());
    let two = Q::from_i64(2);
    let minus = m.sub(&id);
    let plus = m.sub(&id.scale(&-two));
    let six_invariant = v_basis::<Q>().iter().all(|v| {
        let img = ph.wedge(v).hodge_star();
        p6(&img) == img
    });
    G2Spectrum {
        minimal_polynomial: minus.mul(&plus).is_zero(),
        dim_plus_one: minus.nullity(),
        dim_minus_two: plus.nullity(),
        six_invariant,
    }
}

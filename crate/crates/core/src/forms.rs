//! Binary forms: homogeneous polynomials in `y0, y1`.
//!
//! Coefficient layout is fixed throughout the crate: `coeffs[i]` multiplies
//! `y0^(d-i) * y1^i`. Dehomogenizing at `y0 = 1` therefore turns the
//! coefficient vector into an ascending univariate polynomial in
//! `s = y1 / y0` without reordering.

use std::fmt;

use crate::field::{Field, Ring};
use crate::linalg::{self, Matrix};
use crate::roots;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormError {
    #[error("zero form has no root set")]
    ZeroForm,
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("point [0:0] is not in P^1")]
    ZeroPoint,
    #[error("forms have mixed degrees (expected {expected}, found {found})")]
    MixedDegrees { expected: usize, found: usize },
}

/// Homogeneous polynomial of degree `coeffs.len() - 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryForm<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> BinaryForm<E> {
    /// Build from coefficients ordered `y0^d, y0^(d-1) y1, ..., y1^d`.
    pub fn new(coeffs: Vec<E>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form has at least one coefficient");
        BinaryForm { coeffs }
    }

    pub fn zero<F: Field<Elem = E>>(k: &F, degree: usize) -> Self {
        BinaryForm {
            coeffs: vec![k.zero(); degree + 1],
        }
    }

    pub fn constant<F: Field<Elem = E>>(_k: &F, c: E) -> Self {
        BinaryForm { coeffs: vec![c] }
    }

    /// The monomial `c * y0^(d-i) * y1^i`.
    pub fn monomial<F: Field<Elem = E>>(k: &F, degree: usize, i: usize, c: E) -> Self {
        let mut f = Self::zero(k, degree);
        f.coeffs[i] = c;
        f
    }

    /// `a*y0 + b*y1`.
    pub fn linear(a: E, b: E) -> Self {
        BinaryForm { coeffs: vec![a, b] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &E {
        &self.coeffs[i]
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, k: &F) -> bool {
        self.coeffs.iter().all(|c| k.is_zero(c))
    }

    pub fn add<F: Field<Elem = E>>(&self, k: &F, other: &Self) -> Result<Self, FormError> {
        if self.degree() != other.degree() {
            return Err(FormError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(BinaryForm {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| k.add(a, b))
                .collect(),
        })
    }

    pub fn sub<F: Field<Elem = E>>(&self, k: &F, other: &Self) -> Result<Self, FormError> {
        self.add(k, &other.neg(k))
    }

    pub fn neg<F: Field<Elem = E>>(&self, k: &F) -> Self {
        self.scale(k, &k.neg(&k.one()))
    }

    pub fn scale<F: Field<Elem = E>>(&self, k: &F, c: &E) -> Self {
        BinaryForm {
            coeffs: self.coeffs.iter().map(|a| k.mul(a, c)).collect(),
        }
    }

    /// Product; degrees add.
    pub fn mul<F: Field<Elem = E>>(&self, k: &F, other: &Self) -> Self {
        let mut coeffs = vec![k.zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if k.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = k.add(&coeffs[i + j], &k.mul(a, b));
            }
        }
        BinaryForm { coeffs }
    }

    pub fn pow<F: Field<Elem = E>>(&self, k: &F, e: usize) -> Self {
        (0..e).fold(BinaryForm::constant(k, k.one()), |acc, _| acc.mul(k, self))
    }

    /// `f(b0, b1)`.
    pub fn eval<F: Field<Elem = E>>(&self, k: &F, p: &PointP1<E>) -> E {
        self.eval_at(k, &p.b0, &p.b1)
    }

    pub fn eval_at<F: Field<Elem = E>>(&self, k: &F, b0: &E, b1: &E) -> E {
        // Horner in both variables: sum c_i b0^(d-i) b1^i
        let d = self.degree();
        let mut pw0 = vec![k.one(); d + 1];
        let mut pw1 = vec![k.one(); d + 1];
        for i in 1..=d {
            pw0[i] = k.mul(&pw0[i - 1], b0);
            pw1[i] = k.mul(&pw1[i - 1], b1);
        }
        self.coeffs
            .iter()
            .enumerate()
            .fold(k.zero(), |acc, (i, c)| {
                k.add(&acc, &k.mul(c, &k.mul(&pw0[d - i], &pw1[i])))
            })
    }

    /// Index of the first nonzero coefficient.
    pub fn leading_index<F: Field<Elem = E>>(&self, k: &F) -> Option<usize> {
        self.coeffs.iter().position(|c| !k.is_zero(c))
    }

    /// Scaled so the first nonzero coefficient is 1; the zero form is kept.
    pub fn normalized<F: Field<Elem = E>>(&self, k: &F) -> Self {
        match self.leading_index(k) {
            None => self.clone(),
            Some(i) => self.scale(k, &k.inv(&self.coeffs[i]).expect("nonzero")),
        }
    }

    /// Exact quotient `self / g`, or `None` when `g` does not divide `self`.
    pub fn exact_div<F: Field<Elem = E>>(&self, k: &F, g: &Self) -> Option<Self> {
        let s = g.leading_index(k)?;
        if g.degree() > self.degree() {
            return self.is_zero(k).then(|| BinaryForm::zero(k, 0));
        }
        let qd = self.degree() - g.degree();
        let ginv = k.inv(&g.coeffs[s]).expect("nonzero");
        let mut q: Vec<E> = Vec::with_capacity(qd + 1);
        for i in 0..=qd {
            // coefficient i+s of q*g equals sum_j q_j g_{i+s-j}
            let mut acc = self.coeffs[i + s].clone();
            for (j, qj) in q.iter().enumerate() {
                if let Some(gc) = g.coeffs.get(i + s - j) {
                    acc = k.sub(&acc, &k.mul(qj, gc));
                }
            }
            q.push(k.mul(&acc, &ginv));
        }
        let q = BinaryForm { coeffs: q };
        (q.mul(k, g) == *self).then_some(q)
    }

    /// Degree-preserving reinterpretation of the zero form.
    pub fn with_degree<F: Field<Elem = E>>(&self, k: &F, degree: usize) -> Self {
        if self.degree() == degree {
            self.clone()
        } else {
            assert!(self.is_zero(k), "only the zero form can change degree");
            BinaryForm::zero(k, degree)
        }
    }

    /// Human-readable rendering such as `y0^2 + 2*y0*y1 - y1^2`.
    pub fn display<F: Field<Elem = E>>(&self, k: &F) -> String {
        let d = self.degree();
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if k.is_zero(c) {
                continue;
            }
            let mono = match (d - i, i) {
                (0, 0) => String::new(),
                (a, 0) => power("y0", a),
                (0, b) => power("y1", b),
                (a, b) => format!("{}*{}", power("y0", a), power("y1", b)),
            };
            let s = k.format(c);
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&mag);
            } else if mag == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        if out.is_empty() {
            "0".into()
        } else {
            out
        }
    }
}

fn power(v: &str, e: usize) -> String {
    if e == 1 {
        v.to_string()
    } else {
        format!("{v}^{e}")
    }
}

impl<E: fmt::Debug> fmt::Debug for BinaryForm<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryForm{:?}", self.coeffs)
    }
}

/// A point `[b0 : b1]` of the projective line, first nonzero coordinate 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointP1<E> {
    b0: E,
    b1: E,
}

impl<E: Clone + PartialEq> PointP1<E> {
    pub fn new<F: Field<Elem = E>>(k: &F, b0: E, b1: E) -> Result<Self, FormError> {
        if !k.is_zero(&b0) {
            let inv = k.inv(&b0).expect("nonzero");
            Ok(PointP1 {
                b1: k.mul(&b1, &inv),
                b0: k.one(),
            })
        } else if !k.is_zero(&b1) {
            Ok(PointP1 {
                b0: k.zero(),
                b1: k.one(),
            })
        } else {
            Err(FormError::ZeroPoint)
        }
    }

    pub fn b0(&self) -> &E {
        &self.b0
    }

    pub fn b1(&self) -> &E {
        &self.b1
    }

    /// The linear form `b1*y0 - b0*y1` vanishing at this point.
    pub fn vanishing_form<F: Field<Elem = E>>(&self, k: &F) -> BinaryForm<E> {
        BinaryForm::linear(self.b1.clone(), k.neg(&self.b0))
    }

    pub fn display<F: Field<Elem = E>>(&self, k: &F) -> String {
        format!("[{}:{}]", k.format(&self.b0), k.format(&self.b1))
    }
}

/// Roots of a form in the coefficient field, with multiplicities, and the
/// cofactor without roots in the field.
#[derive(Debug, Clone, PartialEq)]
pub struct RootDecomposition<E> {
    pub roots: Vec<(PointP1<E>, usize)>,
    /// `f = remainder * prod (b1*y0 - b0*y1)^mult` exactly.
    pub remainder: BinaryForm<E>,
}

impl<E: Clone + PartialEq> RootDecomposition<E> {
    pub fn is_split(&self) -> bool {
        self.remainder.degree() == 0
    }

    pub fn is_squarefree(&self) -> bool {
        self.roots.iter().all(|(_, m)| *m == 1)
    }
}

/// All roots of `f` on P^1 over the coefficient field.
pub fn bf_roots<F: Field>(k: &F, f: &BinaryForm<F::Elem>) -> Result<RootDecomposition<F::Elem>, FormError> {
    if f.is_zero(k) {
        return Err(FormError::ZeroForm);
    }
    let d = f.degree();
    let mut points: Vec<PointP1<F::Elem>> = Vec::new();
    if d > 0 {
        // f(1, s) = sum coeffs[i] s^i
        for s in k.distinct_roots(f.coeffs()) {
            points.push(PointP1::new(k, k.one(), s)?);
        }
        if k.is_zero(&f.coeffs[d]) {
            points.push(PointP1::new(k, k.zero(), k.one())?);
        }
    }
    let mut rest = f.clone();
    let mut roots = Vec::with_capacity(points.len());
    for p in points {
        let lin = p.vanishing_form(k);
        let mut mult = 0;
        while let Some(q) = rest.exact_div(k, &lin) {
            rest = q;
            mult += 1;
        }
        debug_assert!(mult > 0);
        roots.push((p, mult));
    }
    Ok(RootDecomposition {
        roots,
        remainder: rest,
    })
}

fn y0_multiplicity<F: Field>(k: &F, f: &BinaryForm<F::Elem>) -> usize {
    f.coeffs.iter().rev().take_while(|c| k.is_zero(c)).count()
}

/// Greatest common divisor, scaled so the first nonzero coefficient is 1.
///
/// Computed as the gcd of the dehomogenizations at `y0 = 1`, rehomogenized
/// and multiplied by the common power of `y0` (which dehomogenization loses).
/// `gcd(0, 0)` is the zero form of degree 0.
pub fn bf_gcd<F: Field>(k: &F, f: &BinaryForm<F::Elem>, g: &BinaryForm<F::Elem>) -> BinaryForm<F::Elem> {
    match (f.is_zero(k), g.is_zero(k)) {
        (true, true) => return BinaryForm::zero(k, 0),
        (false, true) => return f.normalized(k),
        (true, false) => return g.normalized(k),
        _ => {}
    }
    let e = y0_multiplicity(k, f).min(y0_multiplicity(k, g));
    let mut out = BinaryForm {
        coeffs: roots::gcd(k, f.coeffs(), g.coeffs()),
    };
    if e > 0 {
        out = out.mul(k, &BinaryForm::monomial(k, e, 0, k.one()));
    }
    out.normalized(k)
}

/// gcd of a whole family.
pub fn bf_gcd_all<F: Field>(k: &F, forms: &[BinaryForm<F::Elem>]) -> BinaryForm<F::Elem> {
    forms
        .iter()
        .fold(BinaryForm::zero(k, 0), |acc, f| bf_gcd(k, &acc, f))
}

/// `(#forms) x (d+1)` coefficient matrix.
pub fn coeff_matrix<F: Field>(
    k: &F,
    forms: &[BinaryForm<F::Elem>],
    degree: usize,
) -> Result<Matrix<F::Elem>, FormError> {
    for f in forms {
        if f.degree() != degree {
            return Err(FormError::MixedDegrees {
                expected: degree,
                found: f.degree(),
            });
        }
    }
    let _ = k;
    Ok(Matrix::from_fn(forms.len(), degree + 1, |i, j| {
        forms[i].coeffs[j].clone()
    }))
}

/// Rank of the coefficient matrix; the forms span `k[y0,y1]_d` iff it is `d+1`.
pub fn coeff_matrix_rank<F: Field>(
    k: &F,
    forms: &[BinaryForm<F::Elem>],
    degree: usize,
) -> Result<usize, FormError> {
    Ok(linalg::rank(k, &coeff_matrix(k, forms, degree)?))
}

/// The graded ring `k[y0, y1]` as a [`Ring`], used for matrices of forms.
///
/// Zero forms of any degree act as the additive identity; adding two nonzero
/// forms of different degrees is an invariant violation and panics.
#[derive(Debug, Clone, PartialEq)]
pub struct FormRing<F> {
    pub field: F,
}

impl<F: Field> FormRing<F> {
    pub fn new(field: F) -> Self {
        FormRing { field }
    }
}

impl<F: Field> Ring for FormRing<F> {
    type Elem = BinaryForm<F::Elem>;

    fn zero(&self) -> Self::Elem {
        BinaryForm::zero(&self.field, 0)
    }
    fn one(&self) -> Self::Elem {
        BinaryForm::constant(&self.field, self.field.one())
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        if a.degree() != b.degree() {
            if a.is_zero(&self.field) {
                return b.clone();
            }
            if b.is_zero(&self.field) {
                return a.clone();
            }
        }
        a.add(&self.field, b).expect("inhomogeneous sum of nonzero forms")
    }
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &b.neg(&self.field))
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.mul(&self.field, b)
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.neg(&self.field)
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.is_zero(&self.field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rational, RationalField};
    use proptest::prelude::*;

    const Q: RationalField = RationalField;

    fn form(c: &[i64]) -> BinaryForm<Rational> {
        BinaryForm::new(c.iter().map(|&v| Rational::from_integer(v)).collect())
    }

    fn pt(b0: i64, b1: i64) -> PointP1<Rational> {
        PointP1::new(&Q, Rational::from_integer(b0), Rational::from_integer(b1)).unwrap()
    }

    #[test]
    fn multiplication_examples() {
        let y0 = form(&[1, 0]);
        let y1 = form(&[0, 1]);
        assert_eq!(y0.mul(&Q, &y1), form(&[0, 1, 0]));
        let s = form(&[1, 1]);
        assert_eq!(s.mul(&Q, &s), form(&[1, 2, 1]));
        let z = BinaryForm::zero(&Q, 3);
        let p = s.mul(&Q, &z);
        assert!(p.is_zero(&Q));
        assert_eq!(p.degree(), 4);
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(form(&[0, 1, 0]).eval(&Q, &pt(1, 0)), Rational::zero());
        assert_eq!(form(&[1, 0, 1]).eval(&Q, &pt(1, 1)), Rational::from_integer(2));
        // y0^2 y1 at (2,3): eval_at is the raw substitution
        let f = form(&[0, 1, 0, 0]);
        let (b0, b1) = (Rational::from_integer(2), Rational::from_integer(3));
        assert_eq!(f.eval_at(&Q, &b0, &b1), Rational::from_integer(12));
    }

    #[test]
    fn point_canonical_form() {
        assert_eq!(pt(2, 1), PointP1::new(&Q, Rational::one(), Rational::new(1, 2).unwrap()).unwrap());
        assert_eq!(pt(0, -5), pt(0, 1));
        assert_eq!(PointP1::new(&Q, Rational::zero(), Rational::zero()), Err(FormError::ZeroPoint));
    }

    #[test]
    fn roots_examples() {
        let r = bf_roots(&Q, &form(&[0, 1, 0])).unwrap();
        assert_eq!(r.roots.len(), 2);
        assert!(r.roots.contains(&(pt(0, 1), 1)));
        assert!(r.roots.contains(&(pt(1, 0), 1)));
        assert_eq!(r.remainder.degree(), 0);

        // (y0 - 2y1)^2 = y0^2 - 4y0y1 + 4y1^2
        let r = bf_roots(&Q, &form(&[1, -4, 4])).unwrap();
        assert_eq!(r.roots, vec![(pt(2, 1), 2)]);
        assert!(r.is_split() && !r.is_squarefree());

        let r = bf_roots(&Q, &form(&[1, 0, 1])).unwrap();
        assert!(r.roots.is_empty());
        assert_eq!(r.remainder, form(&[1, 0, 1]));

        assert_eq!(bf_roots(&Q, &BinaryForm::zero(&Q, 2)), Err(FormError::ZeroForm));
    }

    #[test]
    fn roots_over_small_prime() {
        let k = PrimeField::new(7).unwrap();
        // y0^2 + y1^2 over F_7 has no roots (7 = 3 mod 4); y0*y1*(y0 + y1) has three
        let f = BinaryForm::new(vec![k.elem(1), k.elem(0), k.elem(1)]);
        assert!(bf_roots(&k, &f).unwrap().roots.is_empty());
        let g = BinaryForm::new(vec![k.elem(0), k.elem(1), k.elem(1), k.elem(0)]);
        let r = bf_roots(&k, &g).unwrap();
        assert_eq!(r.roots.len(), 3);
        assert!(r.roots.contains(&(PointP1::new(&k, k.elem(1), k.elem(-1)).unwrap(), 1)));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(bf_gcd(&Q, &form(&[0, 1, 0]), &form(&[1, 0, 0])), form(&[1, 0]));
        assert_eq!(bf_gcd(&Q, &form(&[1, 1]), &form(&[1, -1])), form(&[1]));
        assert_eq!(bf_gcd(&Q, &form(&[2, 4]), &BinaryForm::zero(&Q, 1)), form(&[1, 2]));
        // common y1 power survives dehomogenization at y0 = 1
        assert_eq!(bf_gcd(&Q, &form(&[0, 0, 3]), &form(&[0, 2, 0])), form(&[0, 1]));
    }

    #[test]
    fn coeff_rank_examples() {
        let basis = [form(&[1, 0, 0]), form(&[0, 1, 0]), form(&[0, 0, 1])];
        assert_eq!(coeff_matrix_rank(&Q, &basis, 2).unwrap(), 3);
        assert_eq!(coeff_matrix_rank(&Q, &[form(&[1, 0, 0]), form(&[2, 0, 0])], 2).unwrap(), 1);
        assert_eq!(
            coeff_matrix_rank(&Q, &[form(&[1, 0, 0]), form(&[1, 0])], 2),
            Err(FormError::MixedDegrees { expected: 2, found: 1 })
        );
    }

    #[test]
    fn display_rendering() {
        assert_eq!(form(&[1, -2, 0, 3]).display(&Q), "y0^3 - 2*y0^2*y1 + 3*y1^3");
        assert_eq!(form(&[0, 0]).display(&Q), "0");
    }

    fn small_form(max_deg: usize) -> impl Strategy<Value = BinaryForm<Rational>> {
        (0..=max_deg)
            .prop_flat_map(|d| proptest::collection::vec(-6i64..=6, d + 1))
            .prop_map(|c| form(&c))
    }

    proptest! {
        #[test]
        fn gcd_of_product(f in small_form(3), g in small_form(3)) {
            prop_assume!(!f.is_zero(&Q) && !g.is_zero(&Q));
            let fg = f.mul(&Q, &g);
            prop_assert_eq!(fg.degree(), f.degree() + g.degree());
            prop_assert_eq!(bf_gcd(&Q, &fg, &f), f.normalized(&Q));
        }

        #[test]
        fn eval_is_multiplicative(f in small_form(3), g in small_form(3), b0 in -5i64..5, b1 in -5i64..5) {
            prop_assume!(b0 != 0 || b1 != 0);
            let p = pt(b0, b1);
            prop_assert_eq!(f.mul(&Q, &g).eval(&Q, &p), f.eval(&Q, &p) * g.eval(&Q, &p));
        }

        #[test]
        fn roots_reassemble(lin in proptest::collection::vec((-7i64..=7, -7i64..=7), 1..5), extra in small_form(2)) {
            prop_assume!(lin.iter().all(|&(a, b)| a != 0 || b != 0));
            prop_assume!(!extra.is_zero(&Q));
            let mut f = extra.clone();
            for &(a, b) in &lin {
                f = f.mul(&Q, &form(&[a, b]));
            }
            let r = bf_roots(&Q, &f).unwrap();
            let mut back = r.remainder.clone();
            for (p, m) in &r.roots {
                back = back.mul(&Q, &p.vanishing_form(&Q).pow(&Q, *m));
            }
            prop_assert_eq!(back, f);
            let total: usize = r.roots.iter().map(|(_, m)| m).sum();
            prop_assert!(total >= lin.len());
        }
    }
}

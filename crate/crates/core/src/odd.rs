//! Odd-dimensional pencils with prescribed sub-Pfaffians.
//!
//! The standard pencil `N_k` has monomial sub-Pfaffians; any spanning vector
//! of forms is reached from it by a congruence. All pencils annihilating a
//! given vector of forms are the solutions of one linear system in the
//! entries of `N0, N1`.

use crate::field::Field;
use crate::forms::{bf_gcd_all, coeff_matrix_rank, BinaryForm};
use crate::linalg::{self, LinearSolution, Matrix, SkewMatrix};
use crate::complexes::{upper_index, upper_len};
use crate::pencils::{pencil_subpf, PencilError, SkewPencil};
use crate::random::trial_rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OddError {
    #[error("operation needs odd n >= 3, got n = {0}")]
    NeedOdd(usize),
    #[error("form {index} has degree {found}, expected {expected}")]
    WrongDegree { index: usize, expected: usize, found: usize },
    #[error("forms do not span: coefficient rank {rank}, need {needed}")]
    NotSpanning { rank: usize, needed: usize },
    #[error("forms share the common factor {0}")]
    CommonFactor(String),
    #[error("realization certificate failed: {0}")]
    CertificateFailed(String),
    #[error("no generic element found after {attempts} attempts (solution space dimension {dimension})")]
    NoGenericElement { attempts: usize, dimension: usize },
    #[error(transparent)]
    Pencil(#[from] PencilError),
}

/// `n` binary forms of degree `(n-1)/2`, `n` odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormVector<E> {
    forms: Vec<BinaryForm<E>>,
}

impl<E: Clone + PartialEq> FormVector<E> {
    pub fn new(forms: Vec<BinaryForm<E>>) -> Result<Self, OddError> {
        let n = forms.len();
        if n < 3 || n % 2 == 0 {
            return Err(OddError::NeedOdd(n));
        }
        let d = (n - 1) / 2;
        if let Some((index, f)) = forms.iter().enumerate().find(|(_, f)| f.degree() != d) {
            return Err(OddError::WrongDegree {
                index,
                expected: d,
                found: f.degree(),
            });
        }
        Ok(FormVector { forms })
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn degree(&self) -> usize {
        (self.forms.len() - 1) / 2
    }

    pub fn forms(&self) -> &[BinaryForm<E>] {
        &self.forms
    }

    pub fn spanning_rank<F: Field<Elem = E>>(&self, k: &F) -> usize {
        coeff_matrix_rank(k, &self.forms, self.degree()).expect("degrees checked")
    }

    pub fn is_spanning<F: Field<Elem = E>>(&self, k: &F) -> bool {
        self.spanning_rank(k) == self.degree() + 1
    }

    pub fn gcd<F: Field<Elem = E>>(&self, k: &F) -> BinaryForm<E> {
        bf_gcd_all(k, &self.forms)
    }

    /// Both genericity conditions: spanning, and no common factor.
    pub fn check_generic<F: Field<Elem = E>>(&self, k: &F) -> Result<(), OddError> {
        let rank = self.spanning_rank(k);
        if rank != self.degree() + 1 {
            return Err(OddError::NotSpanning {
                rank,
                needed: self.degree() + 1,
            });
        }
        let g = self.gcd(k);
        if g.degree() > 0 {
            return Err(OddError::CommonFactor(g.display(k)));
        }
        Ok(())
    }
}

/// The `k x k` pencil with `(i, i+1)` entry `y0` for odd `i` and `y1` for
/// even `i` (1-based), skew-completed.
pub fn standard_nk<F: Field>(k: &F, size: usize) -> Result<SkewPencil<F::Elem>, OddError> {
    if size < 3 || size % 2 == 0 {
        return Err(OddError::NeedOdd(size));
    }
    let mut n0 = Matrix::zeros(k, size, size);
    let mut n1 = Matrix::zeros(k, size, size);
    for i in 0..size - 1 {
        let m = if i % 2 == 0 { &mut n0 } else { &mut n1 };
        m.set(i, i + 1, k.one());
        m.set(i + 1, i, k.neg(&k.one()));
    }
    let n0 = SkewMatrix::new(k, n0).expect("skew by construction");
    let n1 = SkewMatrix::new(k, n1).expect("skew by construction");
    Ok(SkewPencil::new(n0, n1)?)
}

/// True iff `f_i p_j - f_j p_i = 0` for all `i < j`.
pub fn cross_products_vanish<F: Field>(k: &F, f: &[BinaryForm<F::Elem>], p: &[BinaryForm<F::Elem>]) -> bool {
    if f.len() != p.len() {
        return false;
    }
    (0..f.len()).all(|i| {
        (i + 1..f.len()).all(|j| {
            let a = f[i].mul(k, &p[j]);
            let b = f[j].mul(k, &p[i]);
            a.sub(k, &b).map(|d| d.is_zero(k)).unwrap_or(false)
        })
    })
}

/// The scalar `c` with `p = c f`, if it exists and is nonzero.
pub fn proportionality<F: Field>(k: &F, f: &[BinaryForm<F::Elem>], p: &[BinaryForm<F::Elem>]) -> Option<F::Elem> {
    if f.len() != p.len() {
        return None;
    }
    let (j, t) = f
        .iter()
        .enumerate()
        .find_map(|(j, g)| g.leading_index(k).map(|t| (j, t)))?;
    if p[j].degree() != f[j].degree() {
        return None;
    }
    let c = k.div(p[j].coeff(t), f[j].coeff(t))?;
    if k.is_zero(&c) {
        return None;
    }
    let all = f
        .iter()
        .zip(p)
        .all(|(g, h)| g.degree() == h.degree() && g.scale(k, &c) == *h);
    all.then_some(c)
}

#[derive(Debug, Clone)]
pub struct Realization<E> {
    pub pencil: SkewPencil<E>,
    /// `beta * p(N_n) = f` componentwise.
    pub beta: Matrix<E>,
    /// `pencil_subpf(pencil) = scalar * f`.
    pub scalar: E,
}

/// A pencil whose signed sub-Pfaffians are proportional to `f`.
///
/// Columns of `beta` at the nonzero sub-Pfaffians `c * y0^i y1^(r-i)` of
/// `N_n` hold the coefficients of that monomial in `f`, divided by `c`; the
/// others are filled greedily with `e_1, e_2, ...`. The result is
/// `M N_n M^T` with `M = beta^{-T}`.
pub fn realize_pfaffians<F: Field>(k: &F, f: &FormVector<F::Elem>) -> Result<Realization<F::Elem>, OddError> {
    f.check_generic(k)?;
    let n = f.len();
    let nk = standard_nk(k, n)?;
    let p = pencil_subpf(k, &nk)?;
    let mut beta = Matrix::zeros(k, n, n);
    let mut filled = vec![false; n];
    for (col, pk) in p.iter().enumerate() {
        let Some(idx) = pk.leading_index(k) else { continue };
        let inv = k.inv(pk.coeff(idx)).expect("nonzero");
        for (row, fj) in f.forms().iter().enumerate() {
            beta.set(row, col, k.mul(fj.coeff(idx), &inv));
        }
        filled[col] = true;
    }
    let mut rank = linalg::rank(k, &beta);
    let mut unit = 0;
    for col in 0..n {
        if filled[col] {
            continue;
        }
        loop {
            if unit == n {
                return Err(OddError::NotSpanning {
                    rank: f.spanning_rank(k),
                    needed: f.degree() + 1,
                });
            }
            beta.set(unit, col, k.one());
            let r = linalg::rank(k, &beta);
            if r > rank {
                rank = r;
                unit += 1;
                break;
            }
            beta.set(unit, col, k.zero());
            unit += 1;
        }
    }
    let m = linalg::inverse(k, &beta)
        .map_err(|_| OddError::NotSpanning {
            rank: f.spanning_rank(k),
            needed: f.degree() + 1,
        })?
        .transpose();
    let n0 = linalg::congruence(k, &m, nk.n0()).expect("invertible");
    let n1 = linalg::congruence(k, &m, nk.n1()).expect("invertible");
    let pencil = SkewPencil::new(n0, n1)?;
    let sub = pencil_subpf(k, &pencil)?;
    if !cross_products_vanish(k, f.forms(), &sub) {
        return Err(OddError::CertificateFailed("cross-products do not vanish".into()));
    }
    let scalar = proportionality(k, f.forms(), &sub)
        .ok_or_else(|| OddError::CertificateFailed("sub-Pfaffians are not a nonzero multiple".into()))?;
    Ok(Realization { pencil, beta, scalar })
}

/// The system `(y0 N0 + y1 N1) f(y) = 0` in the upper-triangle entries of
/// `N0` (first `n(n-1)/2` unknowns) and `N1` (the rest). Row `i (r+2) + m`
/// is the coefficient of `y0^(r+1-m) y1^m` in the `i`-th component.
pub fn fiber_system_matrix<F: Field>(k: &F, f: &FormVector<F::Elem>) -> Matrix<F::Elem> {
    let n = f.len();
    let r = f.degree();
    let len = upper_len(n);
    let mut m = Matrix::zeros(k, n * (r + 2), 2 * len);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let (u, sign_neg) = if i < j { (upper_index(n, i, j), false) } else { (upper_index(n, j, i), true) };
            let fj = &f.forms()[j];
            for t in 0..=r {
                let c = if sign_neg { k.neg(fj.coeff(t)) } else { fj.coeff(t).clone() };
                if k.is_zero(&c) {
                    continue;
                }
                let row0 = i * (r + 2) + t;
                let v = k.add(m.get(row0, u), &c);
                m.set(row0, u, v);
                let row1 = i * (r + 2) + t + 1;
                let v = k.add(m.get(row1, len + u), &c);
                m.set(row1, len + u, v);
            }
        }
    }
    m
}

/// All pencils `N` with `N(y) f(y) = 0` identically.
#[derive(Debug, Clone)]
pub struct PencilSolutionSpace<E> {
    pub n: usize,
    pub forms: FormVector<E>,
    pub basis: Vec<SkewPencil<E>>,
}

impl<E: Clone + PartialEq> PencilSolutionSpace<E> {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn combine<F: Field<Elem = E>>(&self, k: &F, coeffs: &[E]) -> SkewPencil<E> {
        let zero = SkewMatrix::zero(k, self.n);
        let (a, b) = self
            .basis
            .iter()
            .zip(coeffs)
            .fold((zero.clone(), zero), |(a, b), (p, c)| {
                (a.add(k, &p.n0().scale(k, c)), b.add(k, &p.n1().scale(k, c)))
            });
        SkewPencil::new(a, b).expect("same size")
    }

    /// Coefficients of `pencil` in the basis, if it lies in the space.
    pub fn coordinates<F: Field<Elem = E>>(&self, k: &F, pencil: &SkewPencil<E>) -> Option<Vec<E>> {
        if pencil.size() != self.n {
            return None;
        }
        let vecs: Vec<Vec<E>> = self.basis.iter().map(pair_vector).collect();
        let target = pair_vector(pencil);
        let m = Matrix::from_fn(target.len(), vecs.len(), |i, j| vecs[j][i].clone());
        match linalg::solve_linear(k, &m, &target).expect("shapes agree") {
            LinearSolution::Consistent { particular, .. } => Some(particular),
            LinearSolution::Inconsistent => None,
        }
    }

    pub fn contains<F: Field<Elem = E>>(&self, k: &F, pencil: &SkewPencil<E>) -> bool {
        self.coordinates(k, pencil).is_some()
    }
}

/// Upper triangle of `N0` followed by that of `N1`.
pub fn pair_vector<E: Clone + PartialEq>(p: &SkewPencil<E>) -> Vec<E> {
    let mut v = p.n0().upper();
    v.extend(p.n1().upper());
    v
}

/// True iff the pairs `(N0, N1)` agree up to one common nonzero scalar.
pub fn same_projective_pair<F: Field>(k: &F, a: &SkewPencil<F::Elem>, b: &SkewPencil<F::Elem>) -> bool {
    let m = Matrix::from_rows(vec![pair_vector(a), pair_vector(b)]).expect("same size");
    let zero_a = pair_vector(a).iter().all(|x| k.is_zero(x));
    let zero_b = pair_vector(b).iter().all(|x| k.is_zero(x));
    zero_a == zero_b && linalg::rank(k, &m) <= 1
}

pub fn fiber_system<F: Field>(k: &F, f: &FormVector<F::Elem>) -> PencilSolutionSpace<F::Elem> {
    let n = f.len();
    let len = upper_len(n);
    let basis = linalg::nullspace(k, &fiber_system_matrix(k, f))
        .into_iter()
        .map(|v| {
            let n0 = SkewMatrix::from_upper(k, n, &v[..len]);
            let n1 = SkewMatrix::from_upper(k, n, &v[len..]);
            SkewPencil::new(n0, n1).expect("same size")
        })
        .collect();
    PencilSolutionSpace {
        n,
        forms: f.clone(),
        basis,
    }
}

pub const ODD_RETRIES: usize = 64;

#[derive(Debug, Clone)]
pub struct FiberSample<E> {
    pub pencil: SkewPencil<E>,
    pub coefficients: Vec<E>,
    /// `pencil_subpf(pencil) = scalar * f`.
    pub scalar: E,
    /// Draws rejected as degenerate before this one was accepted.
    pub rejected: usize,
}

/// A random element of the solution space whose sub-Pfaffians are a
/// nonzero multiple of `f`.
pub fn fiber_sample<F: Field>(
    k: &F,
    space: &PencilSolutionSpace<F::Elem>,
    seed: u64,
) -> Result<FiberSample<F::Elem>, OddError> {
    let mut rng = trial_rng(seed, 0);
    for attempt in 0..ODD_RETRIES {
        let coefficients: Vec<F::Elem> = (0..space.dimension()).map(|_| k.sample(&mut rng)).collect();
        let pencil = space.combine(k, &coefficients);
        let sub = pencil_subpf(k, &pencil)?;
        if let Some(scalar) = proportionality(k, space.forms.forms(), &sub) {
            return Ok(FiberSample {
                pencil,
                coefficients,
                scalar,
                rejected: attempt,
            });
        }
    }
    Err(OddError::NoGenericElement {
        attempts: ODD_RETRIES,
        dimension: space.dimension(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rational, RationalField};
    use crate::pencils::{deg_locus_odd, normalize_forms, pencil_apply};
    use crate::random::{random_form, random_pencil};
    use proptest::prelude::*;

    const Q: RationalField = RationalField;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    fn form(c: &[i64]) -> BinaryForm<Rational> {
        BinaryForm::new(c.iter().map(|&x| r(x)).collect())
    }

    /// Pfaffian of a path pencil on `vertices` vertices with the given
    /// consecutive edge entries, by peeling off the first edge.
    fn path_pf(edges: &[BinaryForm<Rational>], vertices: usize) -> BinaryForm<Rational> {
        match vertices {
            0 => BinaryForm::constant(&Q, r(1)),
            v if v % 2 == 1 => BinaryForm::zero(&Q, 0),
            v => edges[0].mul(&Q, &path_pf(edges.get(2..).unwrap_or(&[]), v - 2)),
        }
    }

    #[test]
    fn nk_examples() {
        let p5 = pencil_subpf(&Q, &standard_nk(&Q, 5).unwrap()).unwrap();
        assert_eq!(p5, vec![form(&[0, 0, 1]), form(&[0, 0, 0]), form(&[0, 1, 0]), form(&[0, 0, 0]), form(&[1, 0, 0])]);
        let p3 = pencil_subpf(&Q, &standard_nk(&Q, 3).unwrap()).unwrap();
        assert_eq!(p3, vec![form(&[0, 1]), form(&[0, 0]), form(&[1, 0])]);
        assert_eq!(standard_nk(&Q, 4).unwrap_err(), OddError::NeedOdd(4));
    }

    #[test]
    fn nk_matches_path_recursion() {
        // removing vertex 2i+1 (1-based) from the path splits it into two
        // even paths; the Pfaffian is the product of their Pfaffians
        for size in [3usize, 5, 7, 9, 11] {
            let diag: Vec<BinaryForm<Rational>> = (0..size - 1)
                .map(|i| if i % 2 == 0 { form(&[1, 0]) } else { form(&[0, 1]) })
                .collect();
            let got = pencil_subpf(&Q, &standard_nk(&Q, size).unwrap()).unwrap();
            for i in (0..size).step_by(2) {
                let left = path_pf(&diag[..i.saturating_sub(1)], i);
                let right = path_pf(&diag[(i + 1).min(diag.len())..], size - 1 - i);
                let want = left.mul(&Q, &right);
                assert_eq!(got[i], want, "size {size} index {i}");
            }
            for i in (1..size).step_by(2) {
                assert!(got[i].is_zero(&Q));
            }
        }
    }

    #[test]
    fn realization_of_spec_example() {
        let f = FormVector::new(vec![
            form(&[1, 0, 0]),
            form(&[0, 1, 0]),
            form(&[0, 0, 1]),
            form(&[1, 0, 1]),
            form(&[-1, 1, 0]),
        ])
        .unwrap();
        let real = realize_pfaffians(&Q, &f).unwrap();
        let sub = pencil_subpf(&Q, &real.pencil).unwrap();
        assert!(cross_products_vanish(&Q, f.forms(), &sub));
        let nk = pencil_subpf(&Q, &standard_nk(&Q, 5).unwrap()).unwrap();
        let fmat = Matrix::from_fn(5, 3, |i, j| f.forms()[i].coeff(j).clone());
        let nmat = Matrix::from_fn(5, 3, |i, j| nk[i].coeff(j).clone());
        assert_eq!(linalg::mat_mul(&Q, &real.beta, &nmat).unwrap(), fmat);
    }

    #[test]
    fn realization_of_nk_itself() {
        let nk = standard_nk(&Q, 7).unwrap();
        let f = FormVector::new(pencil_subpf(&Q, &nk).unwrap()).unwrap();
        let real = realize_pfaffians(&Q, &f).unwrap();
        assert_eq!(real.beta, Matrix::identity(&Q, 7));
        assert_eq!(real.pencil, nk);
    }

    #[test]
    fn non_spanning_rejected() {
        let f = FormVector::new(vec![form(&[1, 0, 0]); 5]).unwrap();
        assert!(matches!(realize_pfaffians(&Q, &f), Err(OddError::NotSpanning { rank: 1, needed: 3 })));
        assert!(matches!(
            FormVector::new(vec![form(&[1, 0]); 5]),
            Err(OddError::WrongDegree { .. })
        ));
    }

    #[test]
    fn fiber_dimension_from_pencils() {
        for (n, seed, want) in [(5usize, 11u64, 6usize), (7, 12, 15)] {
            let mut rng = trial_rng(seed, 0);
            let p = random_pencil(&Q, n, &mut rng);
            let f = FormVector::new(pencil_subpf(&Q, &p).unwrap()).unwrap();
            let space = fiber_system(&Q, &f);
            assert_eq!(space.dimension(), want);
            assert!(space.contains(&Q, &p));
            assert!(space.contains(&Q, &p.scale(&Q, &r(5))));
            let rebased = p.rebase(&Q, &r(1), &r(1), &r(0), &r(1));
            assert!(!space.contains(&Q, &rebased));
            for b in &space.basis {
                assert!(pencil_apply(&Q, b, f.forms()).iter().all(|g| g.is_zero(&Q)));
            }
        }
    }

    #[test]
    fn fiber_sample_is_a_different_pencil_with_same_locus() {
        let mut rng = trial_rng(13, 0);
        let p = random_pencil(&Q, 5, &mut rng);
        let f = FormVector::new(pencil_subpf(&Q, &p).unwrap()).unwrap();
        let space = fiber_system(&Q, &f);
        let s1 = fiber_sample(&Q, &space, 1).unwrap();
        let s2 = fiber_sample(&Q, &space, 2).unwrap();
        assert!(!same_projective_pair(&Q, &s1.pencil, &p));
        assert!(!same_projective_pair(&Q, &s1.pencil, &s2.pencil));
        let want = deg_locus_odd(&Q, &p).unwrap();
        assert_eq!(deg_locus_odd(&Q, &s1.pencil).unwrap(), want);
        assert_eq!(deg_locus_odd(&Q, &s2.pencil).unwrap(), want);
    }

    #[test]
    fn realization_over_fp() {
        let k = PrimeField::new(10007).unwrap();
        let mut rng = trial_rng(14, 0);
        let forms: Vec<_> = (0..7).map(|_| random_form(&k, 3, &mut rng)).collect();
        let f = FormVector::new(forms).unwrap();
        let real = realize_pfaffians(&k, &f).unwrap();
        let sub = pencil_subpf(&k, &real.pencil).unwrap();
        assert_eq!(normalize_forms(&k, &sub), normalize_forms(&k, f.forms()));
        assert!(fiber_system(&k, &f).contains(&k, &real.pencil));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn realized_pencil_lies_in_fiber(seed in any::<u64>()) {
            let mut rng = trial_rng(seed, 0);
            let forms: Vec<_> = (0..5).map(|_| random_form(&Q, 2, &mut rng)).collect();
            let f = FormVector::new(forms).unwrap();
            prop_assume!(f.is_spanning(&Q));
            let real = realize_pfaffians(&Q, &f).unwrap();
            let sub = pencil_subpf(&Q, &real.pencil).unwrap();
            prop_assert_eq!(proportionality(&Q, f.forms(), &sub), Some(real.scalar));
            prop_assert!(fiber_system(&Q, &f).contains(&Q, &real.pencil));
        }

        #[test]
        fn proportionality_agrees_with_cross_products(seed in any::<u64>(), c in -5i64..5) {
            let mut rng = trial_rng(seed, 1);
            let f: Vec<_> = (0..5).map(|_| random_form(&Q, 2, &mut rng)).collect();
            let p: Vec<_> = f.iter().map(|g| g.scale(&Q, &r(c))).collect();
            prop_assert_eq!(proportionality(&Q, &f, &p).is_some(), c != 0);
            prop_assert!(cross_products_vanish(&Q, &f, &p));
        }
    }
}

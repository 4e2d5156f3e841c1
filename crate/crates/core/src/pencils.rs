//! Pencils `N(y) = y0*N0 + y1*N1` of skew-symmetric matrices and their
//! degeneracy loci.
//!
//! For even `n` the locus of a generic pencil is a union of `n/2` lines, one
//! kernel line at each root of the Pfaffian form. For odd `n` it is the
//! rational curve parameterized by the signed sub-Pfaffian vector.

use crate::complexes::ProjSubspace;
use crate::field::Field;
use crate::forms::{bf_gcd_all, bf_roots, BinaryForm, FormError, FormRing, PointP1};
use crate::linalg::{self, mat_vec, Matrix, SkewMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PencilError {
    #[error("pencil matrices have different sizes ({0} and {1})")]
    SizeMismatch(usize, usize),
    #[error("operation needs {expected} n, got n = {n}")]
    WrongParity { n: usize, expected: &'static str },
    #[error("degenerate pencil: Pfaffian vanishes identically")]
    Degenerate,
    #[error("non-generic pencil (repeated root) at {root} with multiplicity {multiplicity}")]
    RepeatedRoot { root: String, multiplicity: usize },
    #[error("roots outside field: Pfaffian has a factor of degree {degree} without roots in the field")]
    RootsOutsideField { degree: usize },
    #[error("special complex of the second type on pencil at {root} (corank {corank})")]
    SecondType { root: String, corank: usize },
    #[error("non-generic pencil (base points): sub-Pfaffians share the factor {gcd}")]
    BasePoints { gcd: String },
    #[error("pencil of sub-maximal rank: all sub-Pfaffians vanish")]
    SubMaximalRank,
    #[error(transparent)]
    Form(#[from] FormError),
}

/// The pencil `y0*N0 + y1*N1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SkewPencil<E> {
    n0: SkewMatrix<E>,
    n1: SkewMatrix<E>,
}

impl<E: Clone + PartialEq> SkewPencil<E> {
    pub fn new(n0: SkewMatrix<E>, n1: SkewMatrix<E>) -> Result<Self, PencilError> {
        if n0.size() != n1.size() {
            return Err(PencilError::SizeMismatch(n0.size(), n1.size()));
        }
        Ok(SkewPencil { n0, n1 })
    }

    pub fn size(&self) -> usize {
        self.n0.size()
    }

    pub fn n0(&self) -> &SkewMatrix<E> {
        &self.n0
    }

    pub fn n1(&self) -> &SkewMatrix<E> {
        &self.n1
    }

    pub fn scale<F: Field<Elem = E>>(&self, k: &F, c: &E) -> Self {
        SkewPencil {
            n0: self.n0.scale(k, c),
            n1: self.n1.scale(k, c),
        }
    }

    /// The pencil `(a*N0 + b*N1, c*N0 + d*N1)`.
    pub fn rebase<F: Field<Elem = E>>(&self, k: &F, a: &E, b: &E, c: &E, d: &E) -> Self {
        SkewPencil {
            n0: self.n0.scale(k, a).add(k, &self.n1.scale(k, b)),
            n1: self.n0.scale(k, c).add(k, &self.n1.scale(k, d)),
        }
    }

    /// Entries as linear forms `a_ij*y0 + b_ij*y1`.
    pub fn form_matrix<F: Field<Elem = E>>(&self, k: &F) -> SkewMatrix<BinaryForm<E>> {
        let n = self.size();
        let upper: Vec<BinaryForm<E>> = self
            .n0
            .upper()
            .into_iter()
            .zip(self.n1.upper())
            .map(|(a, b)| BinaryForm::linear(a, b))
            .collect();
        SkewMatrix::from_upper(&FormRing::new(k.clone()), n, &upper)
    }

    /// Coordinates of the pencil as a 2 x n(n-1)/2 matrix of upper triangles.
    pub fn coordinate_rows(&self) -> Matrix<E> {
        Matrix::from_rows(vec![self.n0.upper(), self.n1.upper()]).expect("equal lengths")
    }

    /// Canonical form of the span of `N0, N1` in the space of skew forms:
    /// the RREF of [`coordinate_rows`](Self::coordinate_rows). Two pencils
    /// with the same span are the same line of complexes.
    pub fn span<F: Field<Elem = E>>(&self, k: &F) -> Matrix<E> {
        linalg::row_space(k, &self.coordinate_rows())
    }

    pub fn same_line<F: Field<Elem = E>>(&self, k: &F, other: &Self) -> bool {
        self.span(k) == other.span(k)
    }
}

/// `b0*N0 + b1*N1`.
pub fn pencil_eval<F: Field>(k: &F, pencil: &SkewPencil<F::Elem>, p: &PointP1<F::Elem>) -> SkewMatrix<F::Elem> {
    pencil
        .n0
        .scale(k, p.b0())
        .add(k, &pencil.n1.scale(k, p.b1()))
}

/// Pfaffian of the pencil, a form of degree `n/2`; the zero form for odd `n`.
pub fn pencil_pf<F: Field>(k: &F, pencil: &SkewPencil<F::Elem>) -> BinaryForm<F::Elem> {
    let n = pencil.size();
    if n % 2 == 1 {
        return BinaryForm::zero(k, n / 2);
    }
    let ring = FormRing::new(k.clone());
    linalg::pfaffian(&ring, &pencil.form_matrix(k)).with_degree(k, n / 2)
}

/// Signed sub-Pfaffians of the pencil, `n` forms of degree `(n-1)/2`
/// satisfying `N(y) p(y) = 0` identically.
pub fn pencil_subpf<F: Field>(k: &F, pencil: &SkewPencil<F::Elem>) -> Result<Vec<BinaryForm<F::Elem>>, PencilError> {
    let n = pencil.size();
    if n % 2 == 0 {
        return Err(PencilError::WrongParity { n, expected: "odd" });
    }
    let ring = FormRing::new(k.clone());
    Ok(linalg::subpfaffian_vector(&ring, &pencil.form_matrix(k))
        .into_iter()
        .map(|f| f.with_degree(k, (n - 1) / 2))
        .collect())
}

/// `N(y) v(y)` as a vector of forms.
pub fn pencil_apply<F: Field>(k: &F, pencil: &SkewPencil<F::Elem>, v: &[BinaryForm<F::Elem>]) -> Vec<BinaryForm<F::Elem>> {
    let ring = FormRing::new(k.clone());
    mat_vec(&ring, pencil.form_matrix(k).matrix(), v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorankPoint<E> {
    pub point: PointP1<E>,
    pub multiplicity: usize,
    pub corank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorankProfile<E> {
    pub points: Vec<CorankPoint<E>>,
    /// Degree of the factor of `Pf(N)` with no roots in the field.
    pub remainder_degree: usize,
}

pub fn corank_profile<F: Field>(k: &F, pencil: &SkewPencil<F::Elem>) -> Result<CorankProfile<F::Elem>, PencilError> {
    let n = pencil.size();
    if n % 2 == 1 {
        return Err(PencilError::WrongParity { n, expected: "even" });
    }
    let pf = pencil_pf(k, pencil);
    if pf.is_zero(k) {
        return Err(PencilError::Degenerate);
    }
    let dec = bf_roots(k, &pf)?;
    let points = dec
        .roots
        .into_iter()
        .map(|(point, multiplicity)| {
            let m = pencil_eval(k, pencil, &point);
            let corank = n - linalg::rank(k, m.matrix());
            CorankPoint {
                point,
                multiplicity,
                corank,
            }
        })
        .collect();
    Ok(CorankProfile {
        points,
        remainder_degree: dec.remainder.degree(),
    })
}

/// Degeneracy locus of an even pencil: the kernel line at each Pfaffian root.
#[derive(Debug, Clone)]
pub struct DegLocusEven<E> {
    pub lines: Vec<(PointP1<E>, ProjSubspace<E>)>,
    pub remainder: BinaryForm<E>,
}

impl<E: Clone + PartialEq> DegLocusEven<E> {
    pub fn line_set(&self) -> Vec<&ProjSubspace<E>> {
        self.lines.iter().map(|(_, l)| l).collect()
    }

    /// Same set of lines, ignoring the parameter values at which they occur.
    pub fn same_lines(&self, lines: &[ProjSubspace<E>]) -> bool {
        self.lines.len() == lines.len()
            && lines.iter().all(|l| self.lines.iter().any(|(_, m)| m == l))
            && self.lines.iter().all(|(_, m)| lines.contains(m))
    }
}

impl<E: Clone + PartialEq> PartialEq for DegLocusEven<E> {
    fn eq(&self, other: &Self) -> bool {
        let theirs: Vec<ProjSubspace<E>> = other.lines.iter().map(|(_, l)| l.clone()).collect();
        self.same_lines(&theirs)
    }
}

pub fn deg_locus_even<F: Field>(k: &F, pencil: &SkewPencil<F::Elem>) -> Result<DegLocusEven<F::Elem>, PencilError> {
    let n = pencil.size();
    if n % 2 == 1 {
        return Err(PencilError::WrongParity { n, expected: "even" });
    }
    let pf = pencil_pf(k, pencil);
    if pf.is_zero(k) {
        return Err(PencilError::Degenerate);
    }
    let dec = bf_roots(k, &pf)?;
    if let Some((p, m)) = dec.roots.iter().find(|(_, m)| *m > 1) {
        return Err(PencilError::RepeatedRoot {
            root: p.display(k),
            multiplicity: *m,
        });
    }
    if dec.remainder.degree() > 0 {
        return Err(PencilError::RootsOutsideField {
            degree: dec.remainder.degree(),
        });
    }
    let mut lines = Vec::with_capacity(dec.roots.len());
    for (p, _) in dec.roots {
        let m = pencil_eval(k, pencil, &p);
        let kernel = linalg::nullspace(k, m.matrix());
        if kernel.len() > 2 {
            return Err(PencilError::SecondType {
                root: p.display(k),
                corank: kernel.len(),
            });
        }
        lines.push((p, ProjSubspace::from_vectors(k, n, &kernel)));
    }
    Ok(DegLocusEven {
        lines,
        remainder: dec.remainder,
    })
}

/// Degeneracy locus of an odd pencil: its sub-Pfaffian parameterization,
/// scaled so the first nonzero coefficient of the first nonzero form is 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegLocusOdd<E> {
    pub forms: Vec<BinaryForm<E>>,
}

/// Scale a family of forms so the first nonzero coefficient of the first
/// nonzero form is 1.
pub fn normalize_forms<F: Field>(k: &F, forms: &[BinaryForm<F::Elem>]) -> Vec<BinaryForm<F::Elem>> {
    let lead = forms
        .iter()
        .find_map(|f| f.leading_index(k).map(|i| f.coeff(i).clone()));
    match lead {
        None => forms.to_vec(),
        Some(c) => {
            let inv = k.inv(&c).expect("nonzero");
            forms.iter().map(|f| f.scale(k, &inv)).collect()
        }
    }
}

pub fn deg_locus_odd<F: Field>(k: &F, pencil: &SkewPencil<F::Elem>) -> Result<DegLocusOdd<F::Elem>, PencilError> {
    let p = pencil_subpf(k, pencil)?;
    if p.iter().all(|f| f.is_zero(k)) {
        return Err(PencilError::SubMaximalRank);
    }
    let g = bf_gcd_all(k, &p);
    if g.degree() > 0 {
        return Err(PencilError::BasePoints { gcd: g.display(k) });
    }
    Ok(DegLocusOdd {
        forms: normalize_forms(k, &p),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rational, RationalField, Ring};
    use crate::linalg::pfaffian_elimination;
    use crate::random::{random_pencil, trial_rng};

    const Q: RationalField = RationalField;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    fn skew(n: usize, entries: &[((usize, usize), i64)]) -> SkewMatrix<Rational> {
        let mut m = Matrix::zeros(&Q, n, n);
        for &((i, j), v) in entries {
            m.set(i - 1, j - 1, r(v));
            m.set(j - 1, i - 1, r(-v));
        }
        SkewMatrix::new(&Q, m).unwrap()
    }

    fn block_pencil() -> SkewPencil<Rational> {
        SkewPencil::new(skew(4, &[((1, 2), 1)]), skew(4, &[((3, 4), 1)])).unwrap()
    }

    fn pt(b0: i64, b1: i64) -> PointP1<Rational> {
        PointP1::new(&Q, r(b0), r(b1)).unwrap()
    }

    fn line(n: usize, rows: &[&[i64]]) -> ProjSubspace<Rational> {
        let v: Vec<Vec<Rational>> = rows.iter().map(|row| row.iter().map(|&x| r(x)).collect()).collect();
        ProjSubspace::from_vectors(&Q, n, &v)
    }

    #[test]
    fn evaluation_examples() {
        let p = block_pencil();
        assert_eq!(pencil_eval(&Q, &p, &pt(1, 0)), *p.n0());
        assert_eq!(pencil_eval(&Q, &p, &pt(0, 1)), *p.n1());
        assert_eq!(pencil_eval(&Q, &p, &pt(1, 1)), p.n0().add(&Q, p.n1()));
    }

    #[test]
    fn pfaffian_of_block_pencil() {
        let pf = pencil_pf(&Q, &block_pencil());
        assert_eq!(pf, BinaryForm::new(vec![r(0), r(1), r(0)]));
    }

    #[test]
    fn odd_pencil_pfaffian_is_zero() {
        let mut rng = trial_rng(5, 0);
        let p = random_pencil(&Q, 5, &mut rng);
        assert!(pencil_pf(&Q, &p).is_zero(&Q));
    }

    #[test]
    fn pfaffian_matches_pointwise_determinant() {
        let mut rng = trial_rng(6, 0);
        let p = random_pencil(&Q, 6, &mut rng);
        let g = pencil_pf(&Q, &p);
        assert_eq!(g.degree(), 3);
        for (b0, b1) in [(1, 0), (0, 1), (2, -3), (5, 7)] {
            let m = pencil_eval(&Q, &p, &pt(b0, b1));
            let det = linalg::determinant(&Q, m.matrix()).unwrap();
            // pt() is normalized, so compare against the normalized point
            let v = g.eval(&Q, &pt(b0, b1));
            assert_eq!(v.clone() * v, det);
        }
    }

    #[test]
    fn subpfaffians_with_vanishing_second_matrix() {
        let mut rng = trial_rng(7, 0);
        let a = random_pencil(&Q, 5, &mut rng).n0().clone();
        let p = SkewPencil::new(a.clone(), SkewMatrix::zero(&Q, 5)).unwrap();
        let got = pencil_subpf(&Q, &p).unwrap();
        let y0sq = BinaryForm::monomial(&Q, 2, 0, r(1));
        let want: Vec<_> = linalg::subpfaffian_vector(&Q, &a)
            .into_iter()
            .map(|c| y0sq.scale(&Q, &c))
            .collect();
        assert_eq!(got, want);
        assert!(matches!(
            pencil_subpf(&Q, &block_pencil()),
            Err(PencilError::WrongParity { .. })
        ));
    }

    #[test]
    fn subpfaffians_annihilated_over_fp() {
        let k = PrimeField::new(101).unwrap();
        let mut rng = trial_rng(8, 0);
        let p = random_pencil(&k, 7, &mut rng);
        let sp = pencil_subpf(&k, &p).unwrap();
        assert!(sp.iter().all(|f| f.degree() == 3));
        assert!(pencil_apply(&k, &p, &sp).iter().all(|f| f.is_zero(&k)));
    }

    #[test]
    fn corank_profile_examples() {
        let prof = corank_profile(&Q, &block_pencil()).unwrap();
        assert_eq!(prof.points.len(), 2);
        assert!(prof.points.iter().all(|c| c.corank == 2 && c.multiplicity == 1));
        assert!(prof.points.iter().any(|c| c.point == pt(1, 0)));
        assert!(prof.points.iter().any(|c| c.point == pt(0, 1)));

        // y0*A + y1*A: Pf = (y0 + y1)^2 Pf(A), everything collapses at [1:-1]
        let a = skew(4, &[((1, 2), 2), ((1, 3), 1), ((3, 4), 5), ((2, 4), -1)]);
        assert!(!k_is_zero(&pfaffian_elimination(&Q, &a)));
        let p = SkewPencil::new(a.clone(), a).unwrap();
        let prof = corank_profile(&Q, &p).unwrap();
        assert_eq!(
            prof.points,
            vec![CorankPoint {
                point: pt(1, -1),
                multiplicity: 2,
                corank: 4
            }]
        );
        let zero = SkewPencil::new(SkewMatrix::zero(&Q, 4), SkewMatrix::zero(&Q, 4)).unwrap();
        assert_eq!(corank_profile(&Q, &zero), Err(PencilError::Degenerate));
    }

    fn k_is_zero(x: &Rational) -> bool {
        Q.is_zero(x)
    }

    #[test]
    fn block_locus() {
        let loc = deg_locus_even(&Q, &block_pencil()).unwrap();
        let e12 = line(4, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let e34 = line(4, &[&[0, 0, 1, 0], &[0, 0, 0, 1]]);
        assert!(loc.same_lines(&[e12.clone(), e34.clone()]));
        for (p, l) in &loc.lines {
            if *p == pt(0, 1) {
                assert_eq!(*l, e12);
            } else {
                assert_eq!((p, l), (&pt(1, 0), &e34));
            }
        }
    }

    #[test]
    fn sigma_block_locus() {
        // blocks (y0+y1), (y0-y1), (y0+2y1) on the coordinate pairs
        let n0 = skew(6, &[((1, 2), 1), ((3, 4), 1), ((5, 6), 1)]);
        let n1 = skew(6, &[((1, 2), 1), ((3, 4), -1), ((5, 6), 2)]);
        let p = SkewPencil::new(n0, n1).unwrap();
        let loc = deg_locus_even(&Q, &p).unwrap();
        let expect = [
            (pt(1, -1), line(6, &[&[1, 0, 0, 0, 0, 0], &[0, 1, 0, 0, 0, 0]])),
            (pt(1, 1), line(6, &[&[0, 0, 1, 0, 0, 0], &[0, 0, 0, 1, 0, 0]])),
            (pt(2, -1), line(6, &[&[0, 0, 0, 0, 1, 0], &[0, 0, 0, 0, 0, 1]])),
        ];
        assert_eq!(loc.lines.len(), 3);
        for e in &expect {
            assert!(loc.lines.contains(e), "missing {e:?}");
        }
    }

    #[test]
    fn genericity_failures_are_typed() {
        // repeated root: y0*A + y1*A
        let a = skew(4, &[((1, 2), 1), ((3, 4), 1)]);
        let p = SkewPencil::new(a.clone(), a).unwrap();
        assert!(matches!(
            deg_locus_even(&Q, &p),
            Err(PencilError::RepeatedRoot { multiplicity: 2, .. })
        ));
        // Pf = y0^2 + y1^2: no rational roots
        let n0 = skew(4, &[((1, 2), 1), ((3, 4), 1)]);
        let n1 = skew(4, &[((1, 3), 1), ((2, 4), -1)]);
        let p = SkewPencil::new(n0, n1).unwrap();
        assert_eq!(
            deg_locus_even(&Q, &p),
            Err(PencilError::RootsOutsideField { degree: 2 })
        );
        // odd pencil whose sub-Pfaffians share the factor y0
        let n0 = skew(3, &[((1, 2), 1), ((1, 3), 2), ((2, 3), 3)]);
        let p = SkewPencil::new(n0, SkewMatrix::zero(&Q, 3)).unwrap();
        assert!(matches!(deg_locus_odd(&Q, &p), Err(PencilError::BasePoints { .. })));
        let zero = SkewPencil::new(SkewMatrix::zero(&Q, 5), SkewMatrix::zero(&Q, 5)).unwrap();
        assert_eq!(deg_locus_odd(&Q, &zero), Err(PencilError::SubMaximalRank));
    }

    #[test]
    fn odd_locus_normalization() {
        let mut rng = trial_rng(9, 0);
        let p = random_pencil(&Q, 5, &mut rng);
        let loc = deg_locus_odd(&Q, &p).unwrap();
        let first = loc.forms.iter().find(|f| !f.is_zero(&Q)).unwrap();
        assert_eq!(first.coeff(first.leading_index(&Q).unwrap()), &r(1));
        let scaled = p.scale(&Q, &r(-3));
        assert_eq!(deg_locus_odd(&Q, &scaled).unwrap(), loc);
    }

    mod properties {
        use super::*;
        use crate::complexes::{even_fiber_sample, Construction};
        use crate::forms::coeff_matrix_rank;
        use crate::random::random_spanning_lines;
        use proptest::prelude::*;

        fn fiber_pencil(seed: u64, n: usize) -> (SkewPencil<Rational>, Vec<ProjSubspace<Rational>>) {
            let mut rng = trial_rng(seed, 7);
            let lines = random_spanning_lines(&Q, n, &mut rng);
            let s = even_fiber_sample(&Q, &lines, seed, Construction::Direct).unwrap();
            (s.pencil, lines)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(24))]

            #[test]
            fn locus_is_basis_invariant(seed in any::<u64>(), a in -6i64..6, b in -6i64..6, c in -6i64..6, d in -6i64..6) {
                prop_assume!(a * d - b * c != 0);
                let (p, lines) = fiber_pencil(seed, 6);
                let q = p.rebase(&Q, &r(a), &r(b), &r(c), &r(d));
                let lp = deg_locus_even(&Q, &p).unwrap();
                let lq = deg_locus_even(&Q, &q).unwrap();
                prop_assert_eq!(&lp, &lq);
                prop_assert!(lq.same_lines(&lines));
                let refs: Vec<_> = lq.lines.iter().map(|(_, l)| l).collect();
                prop_assert_eq!(ProjSubspace::join_all(&Q, 6, &refs).proj_dim(), 5);
            }

            #[test]
            fn scaling_preserves_loci(seed in any::<u64>(), c in 1i64..20) {
                let (p, _) = fiber_pencil(seed, 4);
                prop_assert_eq!(deg_locus_even(&Q, &p.scale(&Q, &r(-c))).unwrap(), deg_locus_even(&Q, &p).unwrap());
                let mut rng = trial_rng(seed, 3);
                let o = random_pencil(&Q, 5, &mut rng);
                prop_assert_eq!(deg_locus_odd(&Q, &o.scale(&Q, &r(c))).unwrap(), deg_locus_odd(&Q, &o).unwrap());
            }

            #[test]
            fn odd_subpfaffians_span(seed in any::<u64>(), half in 1usize..4) {
                let n = 2 * half + 1;
                let mut rng = trial_rng(seed, 4);
                let p = random_pencil(&Q, n, &mut rng);
                let sp = pencil_subpf(&Q, &p).unwrap();
                prop_assert!(pencil_apply(&Q, &p, &sp).iter().all(|f| f.is_zero(&Q)));
                prop_assert_eq!(coeff_matrix_rank(&Q, &sp, half).unwrap(), half + 1);
            }
        }
    }
}

//! Linear line complexes, their centers, and the even-dimensional fiber
//! construction.
//!
//! A complex is a nonzero skew form on `V = k^n` up to scale; its center is
//! `P(ker A)`. Given `n/2` lines spanning `P(V)`, the pencils whose
//! degeneracy locus is exactly those lines are the lines of the linear space
//! `sigma = <H_1, ..., H_{n/2}>` missing every `F_i ∩ F_j`, where `H_j` is
//! the unique complex whose center is the span of the other lines and
//! `F_i = <H_j : j != i>`. Complexes are built here from kernel conditions
//! `A v = 0`, which is equivalent to the Plücker-coordinate description.

use crate::field::{Field, FieldSpec};
use crate::linalg::{self, Matrix, SkewMatrix};
use crate::pencils::{corank_profile, deg_locus_even, PencilError, SkewPencil};
use crate::random::trial_rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("zero matrix is not a complex")]
    ZeroComplex,
    #[error("operation needs even n >= 4, got n = {0}")]
    NeedEven(usize),
    #[error("expected a line in P^{max}, got a subspace of vector dimension {found}", max = .n - 1)]
    NotALineOfSpace { n: usize, found: usize },
    #[error("expected {expected} lines, got {found}")]
    LineCount { expected: usize, found: usize },
    #[error("degenerate configuration: lines span a subspace of vector dimension {rank} < {n}")]
    DegenerateConfiguration { rank: usize, n: usize },
    #[error("subspace has vector dimension {found}, expected {expected}")]
    WrongDimension { expected: usize, found: usize },
    #[error("complex with prescribed center is not unique: solution space has dimension {0}")]
    NotUnique(usize),
    #[error("ambient dimension mismatch: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("not a line: the two points of sigma are dependent")]
    NotALine,
    #[error("wrong number of sigma coordinates: expected {expected}, got {found}")]
    CoordinateCount { expected: usize, found: usize },
    #[error("field too small: F_{p} has {points} points on P^1, need {needed} distinct roots")]
    FieldTooSmall { p: u64, points: u64, needed: usize },
    #[error("no valid line in sigma found after {0} attempts")]
    NoValidLine(usize),
    #[error("fiber certificate failed: {0}")]
    CertificateFailed(String),
    #[error(transparent)]
    Pencil(#[from] PencilError),
}

/// Index of entry `(i, j)`, `i < j`, in the row-major upper triangle.
pub fn upper_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

pub fn upper_len(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// A projective subspace of `P^(n-1)`, stored as the RREF basis of the
/// corresponding linear subspace. The empty subspace has no rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProjSubspace<E> {
    n: usize,
    basis: Matrix<E>,
}

impl<E: Clone + PartialEq> ProjSubspace<E> {
    /// Span of the given vectors of length `n` (dependent vectors allowed).
    pub fn from_vectors<F: Field<Elem = E>>(k: &F, n: usize, vectors: &[Vec<E>]) -> Self {
        let m = if vectors.is_empty() {
            Matrix::zeros(k, 0, n)
        } else {
            Matrix::from_rows(vectors.to_vec()).expect("vectors of equal length")
        };
        assert_eq!(m.cols(), n, "vector length differs from ambient dimension");
        ProjSubspace {
            n,
            basis: linalg::row_space(k, &m),
        }
    }

    pub fn empty<F: Field<Elem = E>>(k: &F, n: usize) -> Self {
        Self::from_vectors(k, n, &[])
    }

    pub fn whole<F: Field<Elem = E>>(k: &F, n: usize) -> Self {
        ProjSubspace {
            n,
            basis: Matrix::identity(k, n),
        }
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn vector_dim(&self) -> usize {
        self.basis.rows()
    }

    /// Projective dimension; `-1` for the empty subspace.
    pub fn proj_dim(&self) -> i64 {
        self.basis.rows() as i64 - 1
    }

    pub fn basis(&self) -> &Matrix<E> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<E>> {
        self.basis.row_vecs()
    }

    pub fn contains_vector<F: Field<Elem = E>>(&self, k: &F, v: &[E]) -> bool {
        let mut rows = self.basis_vectors();
        rows.push(v.to_vec());
        Self::from_vectors(k, self.n, &rows).vector_dim() == self.vector_dim()
    }

    pub fn contains<F: Field<Elem = E>>(&self, k: &F, other: &Self) -> bool {
        self.join(k, other).vector_dim() == self.vector_dim()
    }

    pub fn join<F: Field<Elem = E>>(&self, k: &F, other: &Self) -> Self {
        let mut rows = self.basis_vectors();
        rows.extend(other.basis_vectors());
        Self::from_vectors(k, self.n, &rows)
    }

    pub fn join_all<F: Field<Elem = E>>(k: &F, n: usize, spaces: &[&Self]) -> Self {
        let rows: Vec<Vec<E>> = spaces.iter().flat_map(|s| s.basis_vectors()).collect();
        Self::from_vectors(k, n, &rows)
    }

    pub fn display<F: Field<Elem = E>>(&self, k: &F) -> String {
        let rows: Vec<String> = (0..self.basis.rows())
            .map(|i| {
                let r: Vec<String> = self.basis.row(i).iter().map(|x| k.format(x)).collect();
                format!("({})", r.join(", "))
            })
            .collect();
        format!("<{}>", rows.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComplexType {
    Nonspecial,
    SpecialFirstType,
    SpecialSecondType,
    General,
    Special,
}

impl ComplexType {
    pub fn from_corank(n: usize, corank: usize) -> Self {
        match (n % 2, corank) {
            (0, 0) => ComplexType::Nonspecial,
            (0, 2) => ComplexType::SpecialFirstType,
            (0, _) => ComplexType::SpecialSecondType,
            (_, 1) => ComplexType::General,
            _ => ComplexType::Special,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            ComplexType::Nonspecial => "nonspecial",
            ComplexType::SpecialFirstType => "special-first-type",
            ComplexType::SpecialSecondType => "special-second-type",
            ComplexType::General => "general",
            ComplexType::Special => "special",
        }
    }
}

impl std::fmt::Display for ComplexType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A nonzero skew form up to scale, scaled so the first nonzero entry of
/// the row-major upper triangle is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Complex<E> {
    matrix: SkewMatrix<E>,
}

impl<E: Clone + PartialEq> Complex<E> {
    pub fn new<F: Field<Elem = E>>(k: &F, a: &SkewMatrix<E>) -> Result<Self, ComplexError> {
        let upper = a.upper();
        let lead = upper.iter().find(|x| !k.is_zero(x)).ok_or(ComplexError::ZeroComplex)?;
        let inv = k.inv(lead).expect("nonzero");
        Ok(Complex {
            matrix: a.scale(k, &inv),
        })
    }

    pub fn from_upper<F: Field<Elem = E>>(k: &F, n: usize, upper: &[E]) -> Result<Self, ComplexError> {
        Self::new(k, &SkewMatrix::from_upper(k, n, upper))
    }

    pub fn matrix(&self) -> &SkewMatrix<E> {
        &self.matrix
    }

    pub fn size(&self) -> usize {
        self.matrix.size()
    }

    pub fn corank<F: Field<Elem = E>>(&self, k: &F) -> usize {
        self.size() - linalg::rank(k, self.matrix.matrix())
    }
}

pub fn center<F: Field>(k: &F, a: &Complex<F::Elem>) -> ProjSubspace<F::Elem> {
    let n = a.size();
    ProjSubspace::from_vectors(k, n, &linalg::nullspace(k, a.matrix.matrix()))
}

pub fn classify<F: Field>(k: &F, a: &Complex<F::Elem>) -> ComplexType {
    ComplexType::from_corank(a.size(), a.corank(k))
}

/// A linear subspace of `Λ²V*`, given by independent complexes. Equality
/// compares the canonical RREF of the coordinate vectors.
#[derive(Debug, Clone)]
pub struct ComplexSpace<E> {
    n: usize,
    basis: Vec<Complex<E>>,
    canonical: Matrix<E>,
}

impl<E: Clone + PartialEq> PartialEq for ComplexSpace<E> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.canonical == other.canonical
    }
}

impl<E: Clone + PartialEq> ComplexSpace<E> {
    /// Span of the given skew matrices; a dependent family is reduced to an
    /// independent basis.
    pub fn span<F: Field<Elem = E>>(k: &F, n: usize, generators: &[SkewMatrix<E>]) -> Self {
        let rows: Vec<Vec<E>> = generators.iter().map(|a| a.upper()).collect();
        let m = if rows.is_empty() {
            Matrix::zeros(k, 0, upper_len(n))
        } else {
            Matrix::from_rows(rows).expect("generators of one size")
        };
        let red = linalg::rref(k, &m.transpose());
        // pivot columns of the transposed system pick an independent subfamily
        let basis: Vec<Complex<E>> = red
            .pivots
            .iter()
            .map(|&i| Complex::new(k, &generators[i]).expect("independent generator is nonzero"))
            .collect();
        ComplexSpace {
            n,
            basis,
            canonical: linalg::row_space(k, &m),
        }
    }

    pub fn from_upper_vectors<F: Field<Elem = E>>(k: &F, n: usize, vectors: &[Vec<E>]) -> Self {
        let gens: Vec<SkewMatrix<E>> = vectors.iter().map(|v| SkewMatrix::from_upper(k, n, v)).collect();
        Self::span(k, n, &gens)
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[Complex<E>] {
        &self.basis
    }

    pub fn canonical(&self) -> &Matrix<E> {
        &self.canonical
    }

    pub fn vector_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn proj_dim(&self) -> i64 {
        self.basis.len() as i64 - 1
    }

    pub fn contains<F: Field<Elem = E>>(&self, k: &F, a: &SkewMatrix<E>) -> bool {
        self.coordinates(k, a).is_some()
    }

    /// Coefficients of `a` in the stored basis, if `a` lies in the span.
    pub fn coordinates<F: Field<Elem = E>>(&self, k: &F, a: &SkewMatrix<E>) -> Option<Vec<E>> {
        let cols: Vec<Vec<E>> = self.basis.iter().map(|c| c.matrix.upper()).collect();
        let target = a.upper();
        let m = Matrix::from_fn(target.len(), cols.len(), |i, j| cols[j][i].clone());
        match linalg::solve_linear(k, &m, &target).expect("shapes agree") {
            linalg::LinearSolution::Consistent { particular, .. } => Some(particular),
            linalg::LinearSolution::Inconsistent => None,
        }
    }

    /// `sum_i coeffs[i] * basis[i]`.
    pub fn combine<F: Field<Elem = E>>(&self, k: &F, coeffs: &[E]) -> SkewMatrix<E> {
        self.basis
            .iter()
            .zip(coeffs)
            .fold(SkewMatrix::zero(k, self.n), |acc, (c, a)| acc.add(k, &c.matrix.scale(k, a)))
    }
}

/// Rows encode `A v = 0` for each `v`, in the upper-triangle unknowns of `A`.
pub fn kernel_conditions<F: Field>(k: &F, n: usize, vectors: &[Vec<F::Elem>]) -> Matrix<F::Elem> {
    let mut m = Matrix::zeros(k, n * vectors.len(), upper_len(n));
    for (t, v) in vectors.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                if i == j || k.is_zero(&v[j]) {
                    continue;
                }
                let (col, coef) = if i < j {
                    (upper_index(n, i, j), v[j].clone())
                } else {
                    (upper_index(n, j, i), k.neg(&v[j]))
                };
                let row = t * n + i;
                let cur = k.add(m.get(row, col), &coef);
                m.set(row, col, cur);
            }
        }
    }
    m
}

/// All complexes whose center contains the line `l`.
pub fn gauss_fiber<F: Field>(k: &F, l: &ProjSubspace<F::Elem>) -> Result<ComplexSpace<F::Elem>, ComplexError> {
    let n = l.ambient();
    if n < 4 || n % 2 == 1 {
        return Err(ComplexError::NeedEven(n));
    }
    if l.vector_dim() != 2 {
        return Err(ComplexError::NotALineOfSpace { n, found: l.vector_dim() });
    }
    let sys = kernel_conditions(k, n, &l.basis_vectors());
    Ok(ComplexSpace::from_upper_vectors(k, n, &linalg::nullspace(k, &sys)))
}

/// The unique complex whose center is the codimension-2 subspace `s`.
pub fn center_complex<F: Field>(k: &F, s: &ProjSubspace<F::Elem>) -> Result<Complex<F::Elem>, ComplexError> {
    let n = s.ambient();
    if n < 2 || s.vector_dim() != n - 2 {
        return Err(ComplexError::WrongDimension {
            expected: n.saturating_sub(2),
            found: s.vector_dim(),
        });
    }
    let sol = linalg::nullspace(k, &kernel_conditions(k, n, &s.basis_vectors()));
    if sol.len() != 1 {
        return Err(ComplexError::NotUnique(sol.len()));
    }
    Complex::from_upper(k, n, &sol[0])
}

/// `l_i = <e_{2i-1}, e_{2i}>` for `i = 1..n/2`.
pub fn standard_lines<F: Field>(k: &F, n: usize) -> Result<Vec<ProjSubspace<F::Elem>>, ComplexError> {
    if n < 4 || n % 2 == 1 {
        return Err(ComplexError::NeedEven(n));
    }
    Ok((0..n / 2)
        .map(|i| {
            let e = |j: usize| (0..n).map(|t| if t == j { k.one() } else { k.zero() }).collect::<Vec<_>>();
            ProjSubspace::from_vectors(k, n, &[e(2 * i), e(2 * i + 1)])
        })
        .collect())
}

fn check_configuration<F: Field>(k: &F, lines: &[ProjSubspace<F::Elem>]) -> Result<usize, ComplexError> {
    let n = lines.first().map(|l| l.ambient()).unwrap_or(0);
    if n < 4 || n % 2 == 1 {
        return Err(ComplexError::NeedEven(n));
    }
    if lines.len() != n / 2 {
        return Err(ComplexError::LineCount {
            expected: n / 2,
            found: lines.len(),
        });
    }
    for l in lines {
        if l.ambient() != n {
            return Err(ComplexError::AmbientMismatch(n, l.ambient()));
        }
        if l.vector_dim() != 2 {
            return Err(ComplexError::NotALineOfSpace { n, found: l.vector_dim() });
        }
    }
    let refs: Vec<&ProjSubspace<F::Elem>> = lines.iter().collect();
    let rank = ProjSubspace::join_all(k, n, &refs).vector_dim();
    if rank < n {
        return Err(ComplexError::DegenerateConfiguration { rank, n });
    }
    Ok(n)
}

/// How the complexes `H_i` of a configuration are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construction {
    /// Kernel conditions in the given coordinates.
    Direct,
    /// Standard block complexes carried over by the normalizing projectivity.
    Transport,
}

#[derive(Debug, Clone)]
pub struct Sigma<E> {
    pub lines: Vec<ProjSubspace<E>>,
    /// `h[j]` has center `<l_i : i != j>`.
    pub h: Vec<Complex<E>>,
    pub sigma: ComplexSpace<E>,
    /// `f[i] = <h[j] : j != i>`.
    pub f: Vec<ComplexSpace<E>>,
}

impl<E: Clone + PartialEq> Sigma<E> {
    /// `sum_i alpha[i] * H_i`.
    pub fn point<F: Field<Elem = E>>(&self, k: &F, alpha: &[E]) -> SkewMatrix<E> {
        let n = self.lines[0].ambient();
        self.h
            .iter()
            .zip(alpha)
            .fold(SkewMatrix::zero(k, n), |acc, (h, a)| acc.add(k, &h.matrix().scale(k, a)))
    }

    /// Coordinates of `a` in the `H` basis, if `a` lies in sigma.
    pub fn alpha<F: Field<Elem = E>>(&self, k: &F, a: &SkewMatrix<E>) -> Option<Vec<E>> {
        let n = self.lines[0].ambient();
        let gens: Vec<SkewMatrix<E>> = self.h.iter().map(|h| h.matrix().clone()).collect();
        let cols: Vec<Vec<E>> = gens.iter().map(|g| g.upper()).collect();
        let target = a.upper();
        let m = Matrix::from_fn(upper_len(n), cols.len(), |i, j| cols[j][i].clone());
        match linalg::solve_linear(k, &m, &target).expect("shapes agree") {
            linalg::LinearSolution::Consistent { particular, .. } => Some(particular),
            linalg::LinearSolution::Inconsistent => None,
        }
    }

    /// Dimension of the Grassmannian of lines in sigma, `2 (dim sigma - 1)`.
    pub fn line_space_dim(&self) -> i64 {
        2 * (self.sigma.proj_dim() - 1)
    }
}

pub fn build_sigma<F: Field>(
    k: &F,
    lines: &[ProjSubspace<F::Elem>],
    how: Construction,
) -> Result<Sigma<F::Elem>, ComplexError> {
    let n = check_configuration(k, lines)?;
    let h = match how {
        Construction::Direct => {
            let mut h = Vec::with_capacity(lines.len());
            for j in 0..lines.len() {
                let others: Vec<&ProjSubspace<F::Elem>> =
                    lines.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, l)| l).collect();
                h.push(center_complex(k, &ProjSubspace::join_all(k, n, &others))?);
            }
            h
        }
        Construction::Transport => {
            let g = normalizing_projectivity(k, lines)?;
            let ginv_t = linalg::inverse(k, &g).expect("checked invertible").transpose();
            let std = build_sigma(k, &standard_lines(k, n)?, Construction::Direct)?;
            let mut h = Vec::with_capacity(lines.len());
            for hs in &std.h {
                let moved = linalg::congruence(k, &ginv_t, hs.matrix()).expect("invertible");
                h.push(Complex::new(k, &moved)?);
            }
            h
        }
    };
    let gens: Vec<SkewMatrix<F::Elem>> = h.iter().map(|c| c.matrix().clone()).collect();
    let sigma = ComplexSpace::span(k, n, &gens);
    let f = (0..h.len())
        .map(|i| {
            let sub: Vec<SkewMatrix<F::Elem>> =
                gens.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
            ComplexSpace::span(k, n, &sub)
        })
        .collect();
    Ok(Sigma {
        lines: lines.to_vec(),
        h,
        sigma,
        f,
    })
}

/// The matrix `g` whose columns `2i-1, 2i` are the canonical RREF basis of
/// `l_i`; it sends the standard configuration onto the given one. The
/// canonical bases of spanning lines are always independent, so no other
/// choice of points is ever needed.
pub fn normalizing_projectivity<F: Field>(
    k: &F,
    lines: &[ProjSubspace<F::Elem>],
) -> Result<Matrix<F::Elem>, ComplexError> {
    let n = check_configuration(k, lines)?;
    let cols: Vec<Vec<F::Elem>> = lines.iter().flat_map(|l| l.basis_vectors()).collect();
    let g = Matrix::from_fn(n, n, |i, j| cols[j][i].clone());
    let rank = linalg::rank(k, &g);
    if rank < n {
        return Err(ComplexError::DegenerateConfiguration { rank, n });
    }
    Ok(g)
}

/// A line through two points of sigma (in `H` coordinates) avoids every
/// `F_i ∩ F_j` iff all `2x2` minors of the coordinate pair are nonzero.
pub fn sigma_line_valid<F: Field>(k: &F, a1: &[F::Elem], a2: &[F::Elem]) -> Result<bool, ComplexError> {
    if a1.len() != a2.len() {
        return Err(ComplexError::CoordinateCount {
            expected: a1.len(),
            found: a2.len(),
        });
    }
    let m = Matrix::from_rows(vec![a1.to_vec(), a2.to_vec()]).expect("equal lengths");
    if linalg::rank(k, &m) < 2 {
        return Err(ComplexError::NotALine);
    }
    let minor = |i: usize, j: usize| k.sub(&k.mul(&a1[i], &a2[j]), &k.mul(&a1[j], &a2[i]));
    Ok((0..a1.len()).all(|i| (i + 1..a1.len()).all(|j| !k.is_zero(&minor(i, j)))))
}

#[derive(Debug, Clone)]
pub struct EvenFiberSample<E> {
    pub pencil: SkewPencil<E>,
    pub alpha: [Vec<E>; 2],
    pub sigma: Sigma<E>,
    /// Number of random draws used, including the accepted one.
    pub attempts: usize,
}

pub const EVEN_RETRIES: usize = 32;
pub const EVEN_RETRIES_FP: usize = 64;

/// A random pencil in the fiber over the given lines, certified by
/// recomputing its degeneracy locus.
pub fn even_fiber_sample<F: Field>(
    k: &F,
    lines: &[ProjSubspace<F::Elem>],
    seed: u64,
    how: Construction,
) -> Result<EvenFiberSample<F::Elem>, ComplexError> {
    let sigma = build_sigma(k, lines, how)?;
    let m = lines.len();
    let budget = match k.spec() {
        FieldSpec::Rational => EVEN_RETRIES,
        FieldSpec::Prime(p) => {
            if p + 1 < m as u64 {
                return Err(ComplexError::FieldTooSmall {
                    p,
                    points: p + 1,
                    needed: m,
                });
            }
            EVEN_RETRIES_FP
        }
    };
    let mut rng = trial_rng(seed, 0);
    for attempt in 1..=budget {
        let a1: Vec<F::Elem> = (0..m).map(|_| k.sample(&mut rng)).collect();
        let a2: Vec<F::Elem> = (0..m).map(|_| k.sample(&mut rng)).collect();
        if !matches!(sigma_line_valid(k, &a1, &a2), Ok(true)) {
            continue;
        }
        let pencil = SkewPencil::new(sigma.point(k, &a1), sigma.point(k, &a2))?;
        certify_even(k, &pencil, lines)?;
        return Ok(EvenFiberSample {
            pencil,
            alpha: [a1, a2],
            sigma,
            attempts: attempt,
        });
    }
    Err(ComplexError::NoValidLine(budget))
}

/// Check that `pencil` has exactly the given lines as degeneracy locus, with
/// `n/2` corank-2 points and nothing of higher corank.
pub fn certify_even<F: Field>(
    k: &F,
    pencil: &SkewPencil<F::Elem>,
    lines: &[ProjSubspace<F::Elem>],
) -> Result<(), ComplexError> {
    let n = pencil.size();
    let locus = deg_locus_even(k, pencil)?;
    if !locus.same_lines(lines) {
        return Err(ComplexError::CertificateFailed("degeneracy locus differs from the input lines".into()));
    }
    let prof = corank_profile(k, pencil)?;
    let first = prof.points.iter().filter(|p| p.corank == 2).count();
    if first != n / 2 || prof.points.iter().any(|p| p.corank >= 4) {
        return Err(ComplexError::CertificateFailed(format!(
            "expected {} corank-2 points and none of higher corank",
            n / 2
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rational, RationalField};
    use crate::random::{random_invertible, random_line, random_spanning_lines, random_vector};
    use proptest::prelude::*;

    const Q: RationalField = RationalField;

    fn r(v: i64) -> Rational {
        Rational::from_integer(v)
    }

    fn e(n: usize, i: usize) -> Vec<Rational> {
        (0..n).map(|t| r((t == i) as i64)).collect()
    }

    fn block(n: usize, i: usize, j: usize) -> Complex<Rational> {
        let mut u = vec![r(0); upper_len(n)];
        u[upper_index(n, i, j)] = r(1);
        Complex::from_upper(&Q, n, &u).unwrap()
    }

    #[test]
    fn upper_index_matches_skew_layout() {
        let n = 6;
        let upper: Vec<Rational> = (0..upper_len(n) as i64).map(r).collect();
        let a = SkewMatrix::from_upper(&Q, n, &upper);
        for i in 0..n {
            for j in i + 1..n {
                assert_eq!(a.get(i, j), &upper[upper_index(n, i, j)]);
            }
        }
    }

    #[test]
    fn centers() {
        let c = center(&Q, &block(4, 0, 1));
        assert_eq!(c, ProjSubspace::from_vectors(&Q, 4, &[e(4, 2), e(4, 3)]));
        let mut rng = trial_rng(1, 0);
        let inv = crate::random::random_skew(&Q, 6, &mut rng);
        let c = Complex::new(&Q, &inv).unwrap();
        assert_eq!(center(&Q, &c).proj_dim(), -1);
        assert_eq!(classify(&Q, &c), ComplexType::Nonspecial);
        let odd = Complex::new(&Q, &crate::random::random_skew(&Q, 5, &mut rng)).unwrap();
        assert_eq!(center(&Q, &odd).proj_dim(), 0);
        assert_eq!(classify(&Q, &odd), ComplexType::General);
    }

    #[test]
    fn canonical_scaling() {
        let mut rng = trial_rng(2, 0);
        let a = crate::random::random_skew(&Q, 5, &mut rng);
        let c1 = Complex::new(&Q, &a).unwrap();
        let c2 = Complex::new(&Q, &a.scale(&Q, &r(-7))).unwrap();
        assert_eq!(c1, c2);
        assert_eq!(Complex::new(&Q, &SkewMatrix::zero(&Q, 4)), Err(ComplexError::ZeroComplex));
    }

    #[test]
    fn classification_by_corank() {
        let rank4 = block(6, 0, 1).matrix().add(&Q, block(6, 2, 3).matrix());
        assert_eq!(
            classify(&Q, &Complex::new(&Q, &rank4).unwrap()),
            ComplexType::SpecialFirstType
        );
        assert_eq!(classify(&Q, &block(6, 0, 1)), ComplexType::SpecialSecondType);
        assert_eq!(classify(&Q, &block(5, 0, 1)), ComplexType::Special);
    }

    #[test]
    fn gauss_fiber_dimensions() {
        let l4 = ProjSubspace::from_vectors(&Q, 4, &[e(4, 0), e(4, 1)]);
        let g = gauss_fiber(&Q, &l4).unwrap();
        assert_eq!(g.proj_dim(), 0);
        assert_eq!(g.basis()[0], block(4, 2, 3));
        let l6 = ProjSubspace::from_vectors(&Q, 6, &[e(6, 0), e(6, 1)]);
        assert_eq!(gauss_fiber(&Q, &l6).unwrap().proj_dim(), 5);
        let mut rng = trial_rng(3, 0);
        let l8 = random_line(&Q, 8, &mut rng);
        let g8 = gauss_fiber(&Q, &l8).unwrap();
        assert_eq!(g8.proj_dim(), 14);
        // every element has the line in its center
        for c in g8.basis() {
            assert!(center(&Q, c).contains(&Q, &l8));
        }
    }

    #[test]
    fn center_complex_examples() {
        let s = ProjSubspace::from_vectors(&Q, 4, &[e(4, 2), e(4, 3)]);
        assert_eq!(center_complex(&Q, &s).unwrap(), block(4, 0, 1));
        let s = ProjSubspace::from_vectors(&Q, 6, &[e(6, 0), e(6, 1), e(6, 2), e(6, 3)]);
        assert_eq!(center_complex(&Q, &s).unwrap(), block(6, 4, 5));
        let mut rng = trial_rng(4, 0);
        let rows: Vec<Vec<Rational>> = (0..4).map(|_| random_vector(&Q, 6, &mut rng)).collect();
        let s = ProjSubspace::from_vectors(&Q, 6, &rows);
        let h = center_complex(&Q, &s).unwrap();
        assert_eq!(h.corank(&Q), 4);
        assert_eq!(center(&Q, &h), s);
        let bad = ProjSubspace::from_vectors(&Q, 6, &rows[..3]);
        assert!(matches!(center_complex(&Q, &bad), Err(ComplexError::WrongDimension { .. })));
    }

    #[test]
    fn center_complex_inverts_center() {
        let mut rng = trial_rng(5, 0);
        for n in [4usize, 6, 8] {
            // corank n-2 complex: congruence of a single block
            let m = random_invertible(&Q, n, &mut rng);
            let a = linalg::congruence(&Q, &m, block(n, 0, 1).matrix()).unwrap();
            let c = Complex::new(&Q, &a).unwrap();
            assert_eq!(center_complex(&Q, &center(&Q, &c)).unwrap(), c);
        }
    }

    #[test]
    fn standard_configuration() {
        let lines = standard_lines(&Q, 6).unwrap();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], ProjSubspace::from_vectors(&Q, 6, &[e(6, 2), e(6, 3)]));
        let refs: Vec<_> = lines.iter().collect();
        assert_eq!(ProjSubspace::join_all(&Q, 6, &refs).proj_dim(), 5);
        let s4 = build_sigma(&Q, &standard_lines(&Q, 4).unwrap(), Construction::Direct).unwrap();
        assert_eq!(s4.h, vec![block(4, 0, 1), block(4, 2, 3)]);
        assert_eq!(s4.sigma.proj_dim(), 1);
        let s6 = build_sigma(&Q, &lines, Construction::Direct).unwrap();
        assert_eq!(s6.sigma.proj_dim(), 2);
        assert!(s6.f.iter().all(|f| f.proj_dim() == 1));
        assert!(matches!(standard_lines(&Q, 5), Err(ComplexError::NeedEven(5))));
    }

    #[test]
    fn degenerate_configuration_rejected() {
        let l1 = ProjSubspace::from_vectors(&Q, 4, &[e(4, 0), e(4, 1)]);
        let l2 = ProjSubspace::from_vectors(&Q, 4, &[e(4, 1), e(4, 2)]);
        assert!(matches!(
            build_sigma(&Q, &[l1, l2], Construction::Direct),
            Err(ComplexError::DegenerateConfiguration { rank: 3, n: 4 })
        ));
    }

    #[test]
    fn normalizing_projectivity_examples() {
        let std = standard_lines(&Q, 6).unwrap();
        assert_eq!(normalizing_projectivity(&Q, &std).unwrap(), Matrix::identity(&Q, 6));
        let perm = vec![std[2].clone(), std[0].clone(), std[1].clone()];
        let g = normalizing_projectivity(&Q, &perm).unwrap();
        assert_eq!(g.get(4, 0), &r(1));
        assert_eq!(g.get(0, 2), &r(1));
        assert_eq!(g.get(2, 4), &r(1));
        let mut rng = trial_rng(6, 0);
        let lines = random_spanning_lines(&Q, 6, &mut rng);
        let s = build_sigma(&Q, &lines, Construction::Transport).unwrap();
        for (j, h) in s.h.iter().enumerate() {
            let others: Vec<_> = lines.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, l)| l).collect();
            assert_eq!(center(&Q, h), ProjSubspace::join_all(&Q, 6, &others));
        }
    }

    #[test]
    fn sigma_line_validity() {
        let v = |xs: &[i64]| xs.iter().map(|&x| r(x)).collect::<Vec<_>>();
        assert_eq!(sigma_line_valid(&Q, &v(&[1, 1, 1]), &v(&[1, 2, 3])), Ok(true));
        assert_eq!(sigma_line_valid(&Q, &v(&[1, 0, 1]), &v(&[0, 0, 1])), Ok(false));
        assert_eq!(sigma_line_valid(&Q, &v(&[1, 2]), &v(&[3, 4])), Ok(true));
        assert_eq!(sigma_line_valid(&Q, &v(&[1, 2]), &v(&[2, 4])), Err(ComplexError::NotALine));
    }

    #[test]
    fn even_fiber_standard() {
        let lines = standard_lines(&Q, 4).unwrap();
        let s = even_fiber_sample(&Q, &lines, 1, Construction::Direct).unwrap();
        let sigma_pencil = SkewPencil::new(block(4, 0, 1).matrix().clone(), block(4, 2, 3).matrix().clone()).unwrap();
        assert!(s.pencil.same_line(&Q, &sigma_pencil));
        let lines6 = standard_lines(&Q, 6).unwrap();
        let s6 = even_fiber_sample(&Q, &lines6, 7, Construction::Direct).unwrap();
        assert!(deg_locus_even(&Q, &s6.pencil).unwrap().same_lines(&lines6));
        assert_eq!(s6.sigma.line_space_dim(), 2);
    }

    #[test]
    fn even_fiber_paths_agree() {
        let mut rng = trial_rng(8, 0);
        let lines = random_spanning_lines(&Q, 8, &mut rng);
        let d = even_fiber_sample(&Q, &lines, 3, Construction::Direct).unwrap();
        let t = even_fiber_sample(&Q, &lines, 3, Construction::Transport).unwrap();
        assert_eq!(d.sigma.sigma, t.sigma.sigma);
        assert_eq!(d.pencil.span(&Q), t.pencil.span(&Q));
        assert_eq!(d.sigma.line_space_dim(), 4);
        // converse direction: both generators lie in sigma
        assert!(d.sigma.alpha(&Q, d.pencil.n0()).is_some());
        assert!(d.sigma.alpha(&Q, d.pencil.n1()).is_some());
    }

    #[test]
    fn even_fiber_over_small_fields() {
        let k = PrimeField::new(2).unwrap();
        let lines = standard_lines(&k, 8).unwrap();
        assert!(matches!(
            even_fiber_sample(&k, &lines, 1, Construction::Direct),
            Err(ComplexError::FieldTooSmall { p: 2, .. })
        ));
        let k = PrimeField::new(7).unwrap();
        let mut rng = trial_rng(9, 0);
        let lines = random_spanning_lines(&k, 6, &mut rng);
        let s = even_fiber_sample(&k, &lines, 1, Construction::Transport).unwrap();
        assert!(deg_locus_even(&k, &s.pencil).unwrap().same_lines(&lines));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn sampled_fiber_roundtrips(seed in any::<u64>(), half in 2usize..4) {
            let n = 2 * half;
            let mut rng = trial_rng(seed, 1);
            let lines = random_spanning_lines(&Q, n, &mut rng);
            let s = even_fiber_sample(&Q, &lines, seed, Construction::Direct).unwrap();
            prop_assert!(deg_locus_even(&Q, &s.pencil).unwrap().same_lines(&lines));
            let a = s.sigma.alpha(&Q, s.pencil.n0()).unwrap();
            prop_assert_eq!(&a, &s.alpha[0]);
        }

        #[test]
        fn projectivity_transports_centers(seed in any::<u64>()) {
            let mut rng = trial_rng(seed, 2);
            let lines = random_spanning_lines(&Q, 6, &mut rng);
            let direct = build_sigma(&Q, &lines, Construction::Direct).unwrap();
            let moved = build_sigma(&Q, &lines, Construction::Transport).unwrap();
            prop_assert_eq!(direct.h, moved.h);
        }
    }
}

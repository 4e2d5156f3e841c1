//! Dense exact matrices.
//!
//! Storage is row-major with 0-based indices; user-facing messages report
//! 1-based `(row, col)` positions. Routines that only need ring operations
//! (products, Pfaffians, sub-Pfaffians) are generic over [`Ring`] so they
//! apply both to scalar matrices and to matrices of binary forms.

use std::collections::HashMap;
use std::fmt;

use crate::field::{Field, Ring};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix not skew-symmetric at ({0},{1})")]
    NotSkew(usize, usize),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|row| row.len() != c) {
            return Err(LinalgError::Shape(format!(
                "row {} has {} entries, expected {c}",
                bad + 1,
                rows[bad].len()
            )));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn filled(rows: usize, cols: usize, v: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![v; rows * cols],
        }
    }

    pub fn zeros<R: Ring<Elem = E>>(k: &R, rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, k.zero())
    }

    pub fn identity<R: Ring<Elem = E>>(k: &R, n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { k.one() } else { k.zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: E) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<T: Clone>(&self, f: impl FnMut(&E) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Submatrix keeping the listed rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn stack(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.cols && self.rows > 0 && other.rows > 0 {
            return Err(LinalgError::Shape(format!(
                "cannot stack {} and {} columns",
                self.cols, other.cols
            )));
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols,
            data,
        })
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

impl<E: fmt::Debug> fmt::Debug for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

pub fn mat_mul<R: Ring>(k: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Result<Matrix<R::Elem>, LinalgError> {
    if a.cols != b.rows {
        return Err(LinalgError::Shape(format!(
            "{}x{} times {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(Matrix::from_fn(a.rows, b.cols, |i, j| {
        (0..a.cols).fold(k.zero(), |acc, t| {
            let x = a.get(i, t);
            if k.is_zero(x) {
                acc
            } else {
                k.add(&acc, &k.mul(x, b.get(t, j)))
            }
        })
    }))
}

pub fn mat_vec<R: Ring>(k: &R, a: &Matrix<R::Elem>, v: &[R::Elem]) -> Vec<R::Elem> {
    assert_eq!(a.cols, v.len(), "matrix-vector shape mismatch");
    (0..a.rows)
        .map(|i| {
            a.row(i).iter().zip(v).fold(k.zero(), |acc, (x, y)| {
                if k.is_zero(x) || k.is_zero(y) {
                    acc
                } else {
                    k.add(&acc, &k.mul(x, y))
                }
            })
        })
        .collect()
}

pub fn mat_add<R: Ring>(k: &R, a: &Matrix<R::Elem>, b: &Matrix<R::Elem>) -> Matrix<R::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    Matrix {
        rows: a.rows,
        cols: a.cols,
        data: a.data.iter().zip(&b.data).map(|(x, y)| k.add(x, y)).collect(),
    }
}

pub fn mat_scale<R: Ring>(k: &R, a: &Matrix<R::Elem>, c: &R::Elem) -> Matrix<R::Elem> {
    a.map(|x| k.mul(x, c))
}

// ---------------------------------------------------------------------------
// Elimination over a field
// ---------------------------------------------------------------------------

/// Reduced row-echelon form with its rank and pivot columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Rref<E> {
    pub matrix: Matrix<E>,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub fn rref<F: Field>(k: &F, m: &Matrix<F::Elem>) -> Rref<F::Elem> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !k.is_zero(a.get(i, c))) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.data.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = k.inv(a.get(r, c)).expect("pivot is nonzero");
        for j in c..cols {
            let v = k.mul(a.get(r, j), &inv);
            a.set(r, j, v);
        }
        for i in 0..rows {
            if i == r || k.is_zero(a.get(i, c)) {
                continue;
            }
            let factor = a.get(i, c).clone();
            for j in c..cols {
                let v = k.sub(a.get(i, j), &k.mul(&factor, a.get(r, j)));
                a.set(i, j, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref {
        matrix: a,
        rank: r,
        pivots,
    }
}

pub fn rank<F: Field>(k: &F, m: &Matrix<F::Elem>) -> usize {
    rref(k, m).rank
}

/// Basis of the right kernel `{ v : M v = 0 }`.
pub fn nullspace<F: Field>(k: &F, m: &Matrix<F::Elem>) -> Vec<Vec<F::Elem>> {
    let red = rref(k, m);
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|free| {
            let mut v = vec![k.zero(); cols];
            v[free] = k.one();
            for (r, &p) in red.pivots.iter().enumerate() {
                v[p] = k.neg(red.matrix.get(r, free));
            }
            v
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum LinearSolution<E> {
    Consistent {
        particular: Vec<E>,
        nullspace: Vec<Vec<E>>,
    },
    Inconsistent,
}

/// Solve `M x = b`; the full solution set is `particular + span(nullspace)`.
pub fn solve_linear<F: Field>(
    k: &F,
    m: &Matrix<F::Elem>,
    b: &[F::Elem],
) -> Result<LinearSolution<F::Elem>, LinalgError> {
    if b.len() != m.rows {
        return Err(LinalgError::Shape(format!(
            "right-hand side has {} entries, matrix has {} rows",
            b.len(),
            m.rows
        )));
    }
    let aug = Matrix::from_fn(m.rows, m.cols + 1, |i, j| {
        if j < m.cols {
            m.get(i, j).clone()
        } else {
            b[i].clone()
        }
    });
    let red = rref(k, &aug);
    if red.pivots.last() == Some(&m.cols) {
        return Ok(LinearSolution::Inconsistent);
    }
    let mut particular = vec![k.zero(); m.cols];
    for (r, &p) in red.pivots.iter().enumerate() {
        particular[p] = red.matrix.get(r, m.cols).clone();
    }
    Ok(LinearSolution::Consistent {
        particular,
        nullspace: nullspace(k, m),
    })
}

pub fn determinant<F: Field>(k: &F, m: &Matrix<F::Elem>) -> Result<F::Elem, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.rows, m.cols));
    }
    let n = m.rows;
    let mut a = m.clone();
    let mut det = k.one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !k.is_zero(a.get(i, c))) else {
            return Ok(k.zero());
        };
        if p != c {
            for j in 0..n {
                a.data.swap(p * n + j, c * n + j);
            }
            det = k.neg(&det);
        }
        let piv = a.get(c, c).clone();
        det = k.mul(&det, &piv);
        let inv = k.inv(&piv).expect("nonzero pivot");
        for i in c + 1..n {
            if k.is_zero(a.get(i, c)) {
                continue;
            }
            let factor = k.mul(a.get(i, c), &inv);
            for j in c..n {
                let v = k.sub(a.get(i, j), &k.mul(&factor, a.get(c, j)));
                a.set(i, j, v);
            }
        }
    }
    Ok(det)
}

pub fn inverse<F: Field>(k: &F, m: &Matrix<F::Elem>) -> Result<Matrix<F::Elem>, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare(m.rows, m.cols));
    }
    let n = m.rows;
    let aug = Matrix::from_fn(n, 2 * n, |i, j| {
        if j < n {
            m.get(i, j).clone()
        } else if j - n == i {
            k.one()
        } else {
            k.zero()
        }
    });
    let red = rref(k, &aug);
    if red.rank < n || red.pivots[n - 1] != n - 1 {
        return Err(LinalgError::Singular);
    }
    Ok(Matrix::from_fn(n, n, |i, j| red.matrix.get(i, n + j).clone()))
}

// ---------------------------------------------------------------------------
// Skew-symmetric matrices
// ---------------------------------------------------------------------------

/// Square matrix with `A^T = -A` and zero diagonal, checked on construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SkewMatrix<E>(Matrix<E>);

impl<E: Clone> SkewMatrix<E> {
    pub fn new<R: Ring<Elem = E>>(k: &R, m: Matrix<E>) -> Result<Self, LinalgError> {
        if !m.is_square() {
            return Err(LinalgError::NotSquare(m.rows, m.cols));
        }
        for i in 0..m.rows {
            if !k.is_zero(m.get(i, i)) {
                return Err(LinalgError::NotSkew(i + 1, i + 1));
            }
            for j in i + 1..m.cols {
                if !k.is_zero(&k.add(m.get(i, j), m.get(j, i))) {
                    return Err(LinalgError::NotSkew(i + 1, j + 1));
                }
            }
        }
        Ok(SkewMatrix(m))
    }

    /// Build from the strict upper triangle, listed row by row:
    /// `(1,2), (1,3), ..., (1,n), (2,3), ...`.
    pub fn from_upper<R: Ring<Elem = E>>(k: &R, n: usize, upper: &[E]) -> Self {
        assert_eq!(upper.len(), n * n.saturating_sub(1) / 2, "upper-triangle length");
        let mut m = Matrix::zeros(k, n, n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = it.next().expect("length checked").clone();
                m.set(j, i, k.neg(&v));
                m.set(i, j, v);
            }
        }
        SkewMatrix(m)
    }

    pub fn zero<R: Ring<Elem = E>>(k: &R, n: usize) -> Self {
        SkewMatrix(Matrix::zeros(k, n, n))
    }

    /// Strict upper triangle in the order used by [`SkewMatrix::from_upper`].
    pub fn upper(&self) -> Vec<E> {
        let n = self.size();
        let mut out = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                out.push(self.0.get(i, j).clone());
            }
        }
        out
    }

    pub fn size(&self) -> usize {
        self.0.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &E {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &Matrix<E> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<E> {
        self.0
    }

    /// Delete row and column `i` (0-based).
    pub fn minor(&self, i: usize) -> Self {
        let keep: Vec<usize> = (0..self.size()).filter(|&t| t != i).collect();
        SkewMatrix(self.0.select(&keep, &keep))
    }

    pub fn scale<R: Ring<Elem = E>>(&self, k: &R, c: &E) -> Self {
        SkewMatrix(mat_scale(k, &self.0, c))
    }

    pub fn add<R: Ring<Elem = E>>(&self, k: &R, other: &Self) -> Self {
        SkewMatrix(mat_add(k, &self.0, &other.0))
    }

    pub fn map<T: Clone>(&self, f: impl FnMut(&E) -> T) -> SkewMatrix<T> {
        SkewMatrix(self.0.map(f))
    }
}

impl<E: fmt::Debug> fmt::Debug for SkewMatrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Skew{:?}", self.0)
    }
}

/// Pfaffian by expansion along the first row with memoization on index
/// subsets. Division-free, so it works over any commutative ring (in
/// particular over binary forms). Odd sizes return zero. Cost grows like
/// `2^n`; intended for `n <= 16`.
pub fn pfaffian<R: Ring>(k: &R, a: &SkewMatrix<R::Elem>) -> R::Elem {
    let n = a.size();
    assert!(n <= 63, "pfaffian expansion supports n <= 63");
    if n % 2 == 1 {
        return k.zero();
    }
    let mut memo = HashMap::new();
    pf_subset(k, a, (1u64 << n) - 1, &mut memo)
}

fn pf_subset<R: Ring>(k: &R, a: &SkewMatrix<R::Elem>, mask: u64, memo: &mut HashMap<u64, R::Elem>) -> R::Elem {
    if mask == 0 {
        return k.one();
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1u64 << i);
    let mut acc = k.zero();
    let mut bits = rest;
    let mut pos = 0usize;
    while bits != 0 {
        let j = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        let aij = a.get(i, j);
        if !k.is_zero(aij) {
            let sub = pf_subset(k, a, rest & !(1u64 << j), memo);
            let term = k.mul(aij, &sub);
            acc = if pos % 2 == 0 {
                k.add(&acc, &term)
            } else {
                k.sub(&acc, &term)
            };
        }
        pos += 1;
    }
    memo.insert(mask, acc.clone());
    acc
}

/// Pfaffian over a field by skew-symmetric elimination, `O(n^3)`.
pub fn pfaffian_elimination<F: Field>(k: &F, a: &SkewMatrix<F::Elem>) -> F::Elem {
    let n = a.size();
    if n % 2 == 1 {
        return k.zero();
    }
    let mut m = a.0.clone();
    let mut pf = k.one();
    let mut c = 0;
    while c < n {
        let Some(p) = (c + 1..n).find(|&j| !k.is_zero(m.get(c, j))) else {
            return k.zero();
        };
        if p != c + 1 {
            // simultaneous row/column swap flips the sign
            swap_rows_cols(&mut m, p, c + 1);
            pf = k.neg(&pf);
        }
        let piv = m.get(c, c + 1).clone();
        pf = k.mul(&pf, &piv);
        let inv = k.inv(&piv).expect("nonzero pivot");
        for j in c + 2..n {
            if k.is_zero(m.get(c, j)) {
                continue;
            }
            // column_j -= t * column_{c+1}, row_j -= t * row_{c+1}
            let t = k.mul(m.get(c, j), &inv);
            for i in 0..n {
                let v = k.sub(m.get(i, j), &k.mul(&t, m.get(i, c + 1)));
                m.set(i, j, v);
            }
            for i in 0..n {
                let v = k.sub(m.get(j, i), &k.mul(&t, m.get(c + 1, i)));
                m.set(j, i, v);
            }
        }
        c += 2;
    }
    pf
}

fn swap_rows_cols<E: Clone>(m: &mut Matrix<E>, a: usize, b: usize) {
    let n = m.rows;
    for j in 0..n {
        m.data.swap(a * n + j, b * n + j);
    }
    for i in 0..n {
        m.data.swap(i * n + a, i * n + b);
    }
}

/// Signed sub-Pfaffians `p_i = (-1)^(i+1) Pf(A without row/col i)` with
/// 1-based `i`. For odd `n` this satisfies `A p = 0`, and `p` spans
/// `ker A` when `rank A = n - 1`. Panics on even sizes.
pub fn subpfaffian_vector<R: Ring>(k: &R, a: &SkewMatrix<R::Elem>) -> Vec<R::Elem> {
    let n = a.size();
    assert!(n % 2 == 1, "sub-Pfaffian vector needs odd size");
    let full = (1u64 << n) - 1;
    // one memo table serves all n deletions: the subsets overlap heavily
    let mut memo = HashMap::new();
    (0..n)
        .map(|i| {
            let v = pf_subset(k, a, full & !(1u64 << i), &mut memo);
            if i % 2 == 0 {
                v
            } else {
                k.neg(&v)
            }
        })
        .collect()
}

/// `M A M^T` for invertible `M`; `ker(M A M^T) = M^{-T} ker A`.
pub fn congruence<F: Field>(
    k: &F,
    m: &Matrix<F::Elem>,
    a: &SkewMatrix<F::Elem>,
) -> Result<SkewMatrix<F::Elem>, LinalgError> {
    if !m.is_square() || m.rows != a.size() {
        return Err(LinalgError::Shape(format!(
            "congruence by {}x{} on size {}",
            m.rows,
            m.cols,
            a.size()
        )));
    }
    if rank(k, m) < m.rows {
        return Err(LinalgError::Singular);
    }
    Ok(congruence_unchecked(k, m, a))
}

/// `M A M^T` without the invertibility check.
pub fn congruence_unchecked<R: Ring>(k: &R, m: &Matrix<R::Elem>, a: &SkewMatrix<R::Elem>) -> SkewMatrix<R::Elem> {
    let ma = mat_mul(k, m, &a.0).expect("shapes checked");
    let out = mat_mul(k, &ma, &m.transpose()).expect("shapes checked");
    SkewMatrix(out)
}

/// Canonical basis of the row space (nonzero rows of the RREF).
pub fn row_space<F: Field>(k: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let red = rref(k, m);
    let keep: Vec<usize> = (0..red.rank).collect();
    let cols: Vec<usize> = (0..m.cols).collect();
    let mut out = red.matrix.select(&keep, &cols);
    if red.rank == 0 {
        out.cols = m.cols;
    }
    out
}

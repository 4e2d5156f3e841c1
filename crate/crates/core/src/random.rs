//! Seeded sampling of test instances.
//!
//! All randomness comes from ChaCha8 keyed by a 64-bit seed; independent
//! trials use distinct ChaCha stream ids, so trial `i` of seed `s` draws the
//! same instance regardless of how many other trials run or in what order.

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complexes::ProjSubspace;
use crate::field::Field;
use crate::forms::BinaryForm;
use crate::linalg::{self, Matrix, SkewMatrix};
use crate::pencils::SkewPencil;

/// The generator for trial `stream` of `seed`.
pub fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn random_vector<F: Field>(k: &F, len: usize, rng: &mut dyn RngCore) -> Vec<F::Elem> {
    (0..len).map(|_| k.sample(rng)).collect()
}

pub fn random_matrix<F: Field>(k: &F, rows: usize, cols: usize, rng: &mut dyn RngCore) -> Matrix<F::Elem> {
    Matrix::from_fn(rows, cols, |_, _| k.sample(rng))
}

pub fn random_invertible<F: Field>(k: &F, n: usize, rng: &mut dyn RngCore) -> Matrix<F::Elem> {
    loop {
        let m = random_matrix(k, n, n, rng);
        if linalg::rank(k, &m) == n {
            return m;
        }
    }
}

pub fn random_skew<F: Field>(k: &F, n: usize, rng: &mut dyn RngCore) -> SkewMatrix<F::Elem> {
    let upper = random_vector(k, n * n.saturating_sub(1) / 2, rng);
    SkewMatrix::from_upper(k, n, &upper)
}

/// A random pencil with linearly independent generators (for `n >= 3`).
pub fn random_pencil<F: Field>(k: &F, n: usize, rng: &mut dyn RngCore) -> SkewPencil<F::Elem> {
    let want = (n * n.saturating_sub(1) / 2).min(2);
    loop {
        let n0 = random_skew(k, n, rng);
        let n1 = random_skew(k, n, rng);
        let p = SkewPencil::new(n0, n1).expect("same size");
        if linalg::rank(k, &p.coordinate_rows()) == want {
            return p;
        }
    }
}

pub fn random_form<F: Field>(k: &F, degree: usize, rng: &mut dyn RngCore) -> BinaryForm<F::Elem> {
    BinaryForm::new(random_vector(k, degree + 1, rng))
}

/// A random line of `P^(n-1)` (two independent vectors).
pub fn random_line<F: Field>(k: &F, n: usize, rng: &mut dyn RngCore) -> ProjSubspace<F::Elem> {
    loop {
        let rows = vec![random_vector(k, n, rng), random_vector(k, n, rng)];
        let s = ProjSubspace::from_vectors(k, n, &rows);
        if s.vector_dim() == 2 {
            return s;
        }
    }
}

/// `n/2` random lines jointly spanning `P^(n-1)`.
pub fn random_spanning_lines<F: Field>(k: &F, n: usize, rng: &mut dyn RngCore) -> Vec<ProjSubspace<F::Elem>> {
    loop {
        let m = random_invertible(k, n, rng);
        let lines: Vec<_> = (0..n / 2)
            .map(|i| ProjSubspace::from_vectors(k, n, &[m.row(2 * i).to_vec(), m.row(2 * i + 1).to_vec()]))
            .collect();
        if lines.iter().all(|l| l.vector_dim() == 2) {
            return lines;
        }
    }
}

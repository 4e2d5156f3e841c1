//! Univariate polynomial helpers and root finding in the coefficient field.
//!
//! Polynomials here are dense ascending coefficient vectors: `p[i]` is the
//! coefficient of `t^i`. Over Q the rational roots are located by Sturm-sequence
//! isolation followed by an exact test of the single admissible candidate
//! `m / |lc|` in each short interval; over F_p the field is either searched
//! exhaustively or split with Cantor–Zassenhaus.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Field, FpElement, PrimeField, Rational, RationalField, Ring};

pub(crate) fn trim<F: Field>(k: &F, p: &mut Vec<F::Elem>) {
    while p.last().is_some_and(|c| k.is_zero(c)) {
        p.pop();
    }
}

pub(crate) fn degree<F: Field>(k: &F, p: &[F::Elem]) -> Option<usize> {
    p.iter().rposition(|c| !k.is_zero(c))
}

pub(crate) fn eval<F: Field>(k: &F, p: &[F::Elem], t: &F::Elem) -> F::Elem {
    p.iter()
        .rev()
        .fold(k.zero(), |acc, c| k.add(&k.mul(&acc, t), c))
}

pub(crate) fn mul<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    trim(k, &mut out);
    out
}

pub(crate) fn sub<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let z = k.zero();
    let mut out: Vec<F::Elem> = (0..n)
        .map(|i| k.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(k, &mut out);
    out
}

/// Quotient and remainder; `b` must be nonzero.
pub(crate) fn divrem<F: Field>(
    k: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let db = degree(k, b).expect("division by the zero polynomial");
    let lead_inv = k.inv(&b[db]).expect("nonzero leading coefficient");
    let mut r: Vec<F::Elem> = a.to_vec();
    trim(k, &mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![k.zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = k.mul(&r[dr], &lead_inv);
        let shift = dr - db;
        for (i, bc) in b[..=db].iter().enumerate() {
            r[shift + i] = k.sub(&r[shift + i], &k.mul(&c, bc));
        }
        q[shift] = c;
        r.pop();
        trim(k, &mut r);
    }
    trim(k, &mut q);
    (q, r)
}

pub(crate) fn monic<F: Field>(k: &F, p: &[F::Elem]) -> Vec<F::Elem> {
    let mut p = p.to_vec();
    trim(k, &mut p);
    if let Some(lc) = p.last().cloned() {
        let inv = k.inv(&lc).expect("nonzero");
        for c in p.iter_mut() {
            *c = k.mul(c, &inv);
        }
    }
    p
}

/// Monic gcd; `gcd(0, 0)` is the empty (zero) polynomial.
pub(crate) fn gcd<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(k, &mut x);
    trim(k, &mut y);
    while !y.is_empty() {
        let (_, r) = divrem(k, &x, &y);
        x = std::mem::replace(&mut y, r);
    }
    monic(k, &x)
}

pub(crate) fn derivative<F: Field>(k: &F, p: &[F::Elem]) -> Vec<F::Elem> {
    let mut out: Vec<F::Elem> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| k.mul(&k.from_i64(i as i64), c))
        .collect();
    trim(k, &mut out);
    out
}

// ---------------------------------------------------------------------------
// Q
// ---------------------------------------------------------------------------

fn sign_changes(seq: &[Vec<Rational>], x: &Rational) -> usize {
    let k = RationalField;
    let mut changes = 0;
    let mut last = 0;
    for p in seq {
        let s = eval(&k, p, x).signum();
        if s != 0 {
            if last != 0 && s != last {
                changes += 1;
            }
            last = s;
        }
    }
    changes
}

/// Distinct rational roots of a nonzero polynomial over Q, ascending.
pub(crate) fn rational_roots(poly: &[Rational]) -> Vec<Rational> {
    let k = RationalField;
    let mut p = poly.to_vec();
    trim(&k, &mut p);
    assert!(!p.is_empty(), "root search on the zero polynomial");

    let mut found = Vec::new();
    // roots at zero are stripped first so the isolation below sees c_0 != 0
    let low = p.iter().position(|c| !c.is_zero()).expect("nonzero");
    if low > 0 {
        found.push(Rational::zero());
        p.drain(..low);
    }
    if p.len() <= 1 {
        return found;
    }

    let g = gcd(&k, &p, &derivative(&k, &p));
    let (sqfree, _) = divrem(&k, &p, &g);
    let h = monic(&k, &sqfree);
    // clear denominators: the rational roots of the primitive integer
    // polynomial c_d t^d + ... are of the form m / |c_d|
    let lcm = h
        .iter()
        .fold(BigInt::from(1), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let scale = Rational::from_integer(lcm.clone());
    let h: Vec<Rational> = h.iter().map(|c| c.clone() * scale.clone()).collect();
    let lead = h.last().expect("nonconstant").abs();

    let bound = h[..h.len() - 1]
        .iter()
        .map(|c| c.abs() * lead.recip().expect("nonzero"))
        .max()
        .unwrap_or_else(Rational::zero)
        + Rational::one();

    let mut sturm = vec![h.clone(), derivative(&k, &h)];
    loop {
        let n = sturm.len();
        let (_, r) = divrem(&k, &sturm[n - 2], &sturm[n - 1]);
        if r.is_empty() {
            break;
        }
        sturm.push(r.into_iter().map(|c| -c).collect());
    }

    let lo = -bound.clone();
    let mut stack = vec![(lo.clone(), bound.clone(), sign_changes(&sturm, &lo), sign_changes(&sturm, &bound))];
    let half = Rational::new(1, 2).expect("nonzero");
    while let Some((a, b, va, vb)) = stack.pop() {
        if va == vb {
            continue;
        }
        let width = b.clone() - a.clone();
        if width.clone() * lead.clone() <= Rational::one() {
            // at most one integer m with a < m/|lead| <= b
            let lo_m: BigInt = (a.clone() * lead.clone()).floor() + 1;
            let hi_m = (b.clone() * lead.clone()).floor();
            let mut m = lo_m;
            while m <= hi_m {
                let cand = Rational::new(m.clone(), lead.numer().clone()).expect("nonzero");
                if eval(&k, &h, &cand).is_zero() {
                    found.push(cand);
                }
                m += 1;
            }
            continue;
        }
        let mid = (a.clone() + b.clone()) * half.clone();
        let vm = sign_changes(&sturm, &mid);
        stack.push((a, mid.clone(), va, vm));
        stack.push((mid, b, vm, vb));
    }
    found.sort();
    found.dedup();
    found
}

// ---------------------------------------------------------------------------
// F_p
// ---------------------------------------------------------------------------

pub(crate) fn exhaustive_roots(k: &PrimeField, poly: &[FpElement]) -> Vec<FpElement> {
    assert!(
        degree(k, poly).is_some(),
        "root search on the zero polynomial"
    );
    (0..k.modulus())
        .map(|v| k.from_u64(v))
        .filter(|t| k.is_zero(&eval(k, poly, t)))
        .collect()
}

fn powmod(k: &PrimeField, base: &[FpElement], mut e: u64, m: &[FpElement]) -> Vec<FpElement> {
    let mut acc = vec![k.one()];
    let mut b = divrem(k, base, m).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = divrem(k, &mul(k, &acc, &b), m).1;
        }
        b = divrem(k, &mul(k, &b, &b), m).1;
        e >>= 1;
    }
    acc
}

/// Roots via `gcd(f, t^p - t)` and Cantor–Zassenhaus splitting; seeded so
/// the output order and running time are reproducible.
pub(crate) fn splitting_roots(k: &PrimeField, poly: &[FpElement]) -> Vec<FpElement> {
    assert!(
        degree(k, poly).is_some(),
        "root search on the zero polynomial"
    );
    let p = k.modulus();
    let f = monic(k, poly);
    let x = vec![k.zero(), k.one()];
    let xp = powmod(k, &x, p, &f);
    let linear_part = gcd(k, &f, &sub(k, &xp, &x));
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let mut pending = vec![linear_part];
    let mut out = Vec::new();
    while let Some(g) = pending.pop() {
        match degree(k, &g) {
            None | Some(0) => {}
            Some(1) => out.push(k.neg(&k.div(&g[0], &g[1]).expect("monic"))),
            Some(_) => loop {
                let a = k.from_u64(rng.gen_range(0..p));
                let shifted = vec![a, k.one()];
                let w = powmod(k, &shifted, (p - 1) / 2, &g);
                let d = gcd(k, &g, &sub(k, &w, &[k.one()]));
                let dd = degree(k, &d).unwrap_or(0);
                if dd > 0 && dd < g.len() - 1 {
                    let (q, _) = divrem(k, &g, &d);
                    pending.push(d);
                    pending.push(monic(k, &q));
                    break;
                }
            },
        }
    }
    out.sort_by_key(|e| e.value());
    out
}

//! Seeded verification suites. Trial `t` of check `c` at size `n` draws from
//! its own ChaCha8 stream, so results do not depend on which other checks
//! or sizes run.

use serde_json::{json, Value};
use skewpencil::complexes::{
    center, center_complex, even_fiber_sample, gauss_fiber, upper_len, Complex, Construction, ProjSubspace,
};
use skewpencil::field::{Field, FieldSpec};
use skewpencil::forms::coeff_matrix_rank;
use skewpencil::json::{forms_to_json, lines_to_json, matrix_to_json, pencil_to_json};
use skewpencil::linalg::{self, SkewMatrix};
use skewpencil::odd::{
    fiber_sample, fiber_system, proportionality, realize_pfaffians, same_projective_pair, standard_nk, FormVector,
};
use skewpencil::pencils::{corank_profile, deg_locus_even, deg_locus_odd, normalize_forms, pencil_apply, pencil_subpf};
use skewpencil::random::{
    random_form, random_invertible, random_line, random_pencil, random_skew, random_spanning_lines, random_vector,
    trial_rng,
};

use crate::certificate::{Certificate, Check};
use crate::config::{RunConfig, Suite};

/// Accumulates trials of one invariant at one size.
struct Tally {
    name: String,
    anchor: &'static str,
    trials: usize,
    failures: Vec<Value>,
    generic: bool,
}

impl Tally {
    fn new(name: &str, n: usize, anchor: &'static str) -> Self {
        Tally {
            name: format!("{name} n={n}"),
            anchor,
            trials: 0,
            failures: Vec::new(),
            generic: false,
        }
    }

    /// A tally for a property of general instances: draws without it are
    /// reported as non-generic, and the check fails only if no draw has it.
    fn generic(name: &str, n: usize, anchor: &'static str) -> Self {
        Tally {
            generic: true,
            ..Tally::new(name, n, anchor)
        }
    }

    fn record(&mut self, trial: usize, pass: bool, instance: impl FnOnce() -> Value) {
        self.trials += 1;
        if !pass {
            self.failures.push(json!({"trial": trial, "instance": instance()}));
        }
    }

    fn finish(self) -> Check {
        if self.generic {
            let pass = self.failures.len() < self.trials;
            return Check::new(
                &self.name,
                self.anchor,
                pass,
                json!({"trials": self.trials, "nongeneric": self.failures}),
            );
        }
        let pass = self.failures.is_empty() && self.trials > 0;
        Check::new(
            &self.name,
            self.anchor,
            pass,
            json!({"trials": self.trials, "failures": self.failures}),
        )
    }
}

struct Suites<'a, F: Field> {
    k: &'a F,
    seed: u64,
    trials: usize,
    checks: Vec<Check>,
}

/// Draws per trial when a trial needs a generic instance.
const GENERIC_DRAWS: usize = 64;

fn stream(check: u64, n: usize, t: usize) -> u64 {
    (check << 40) | ((n as u64) << 20) | t as u64
}

impl<F: Field> Suites<'_, F> {
    fn rng(&self, check: u64, n: usize, t: usize) -> rand_chacha::ChaCha8Rng {
        trial_rng(self.seed, stream(check, n, t))
    }

    fn algebra(&mut self, n: usize) {
        let k = self.k;
        if n % 2 == 0 {
            let mut sq = Tally::new("pfaffian-squared-equals-determinant", n, "Pf(A)^2 = det(A)");
            let mut el = Tally::new("elimination-agrees-with-expansion", n, "two Pfaffian algorithms agree");
            for t in 0..self.trials {
                let a = random_skew(k, n, &mut self.rng(1, n, t));
                let pf = linalg::pfaffian(k, &a);
                let det = linalg::determinant(k, a.matrix()).expect("square");
                sq.record(t, k.mul(&pf, &pf) == det, || matrix_to_json(k, a.matrix()));
                el.record(t, linalg::pfaffian_elimination(k, &a) == pf, || matrix_to_json(k, a.matrix()));
            }
            self.checks.push(sq.finish());
            self.checks.push(el.finish());
        } else {
            let mut ker = Tally::new("kernel-identity", n, "A p(A) = 0 for the signed sub-Pfaffian vector");
            let mut pen = Tally::new("pencil-kernel-identity", n, "N(y) p(y) = 0 coefficient-wise");
            let mut rank = Tally::generic("subpfaffians-span", n, "sub-Pfaffians of a general pencil span all forms of degree (n-1)/2");
            for t in 0..self.trials {
                let a = random_skew(k, n, &mut self.rng(2, n, t));
                let p = linalg::subpfaffian_vector(k, &a);
                let ok = linalg::mat_vec(k, a.matrix(), &p).iter().all(|x| k.is_zero(x));
                ker.record(t, ok, || matrix_to_json(k, a.matrix()));
                let pencil = random_pencil(k, n, &mut self.rng(3, n, t));
                let sp = pencil_subpf(k, &pencil).expect("odd size");
                let ok = pencil_apply(k, &pencil, &sp).iter().all(|f| f.is_zero(k));
                pen.record(t, ok, || pencil_to_json(k, &pencil));
                let r = coeff_matrix_rank(k, &sp, (n - 1) / 2).expect("equal degrees");
                rank.record(t, r == (n + 1) / 2, || pencil_to_json(k, &pencil));
            }
            self.checks.push(ker.finish());
            self.checks.push(pen.finish());
            self.checks.push(rank.finish());
            self.standard_nk(n);
        }
    }

    fn standard_nk(&mut self, n: usize) {
        let k = self.k;
        let mut tally = Tally::new("standard-pencil-subpfaffians", n, "Pf_(2i+1)(N_k) = y0^i y1^((k-1)/2-i), Pf_(2i)(N_k) = 0");
        let r = (n - 1) / 2;
        let p = pencil_subpf(k, &standard_nk(k, n).expect("odd size")).expect("odd size");
        let ok = p.iter().enumerate().all(|(idx, f)| {
            if idx % 2 == 1 {
                f.is_zero(k)
            } else {
                let i = idx / 2;
                (0..=r).all(|j| {
                    let c = f.coeff(j);
                    if j == r - i {
                        k.is_one(c) || k.is_one(&k.neg(c))
                    } else {
                        k.is_zero(c)
                    }
                })
            }
        }) && coeff_matrix_rank(k, &p, r).expect("equal degrees") == r + 1;
        tally.record(0, ok, || forms_to_json(k, &p));
        self.checks.push(tally.finish());
    }

    fn even(&mut self, n: usize) {
        let k = self.k;
        let want = ((n - 1) * (n - 4) / 2) as i64;
        let mut gauss = Tally::new("gauss-fiber-dimension", n, "complexes with a given line in the center: projective dimension (n-1)(n-4)/2");
        let mut centers = Tally::new("center-roundtrip", n, "center and center_complex are mutually inverse");
        let mut round = Tally::new("fiber-roundtrip", n, "a line of sigma avoiding every F_i ∩ F_j has exactly the given lines as locus");
        let mut converse = Tally::new("fiber-in-sigma", n, "a pencil in the fiber lies in sigma");
        let mut paths = Tally::new("construction-paths-agree", n, "direct construction equals transport of the standard configuration");
        let mut dims = Tally::new("sigma-dimensions", n, "sigma has dimension (n-2)/2 and its lines a Grassmannian of dimension n-4");
        for t in 0..self.trials {
            let l = random_line(k, n, &mut self.rng(10, n, t));
            let ok = gauss_fiber(k, &l).map(|g| g.proj_dim() == want).unwrap_or(false);
            gauss.record(t, ok, || lines_to_json(k, std::slice::from_ref(&l)));

            let mut rng = self.rng(11, n, t);
            let m = random_invertible(k, n, &mut rng);
            let mut u = vec![k.zero(); upper_len(n)];
            u[0] = k.one();
            let block = SkewMatrix::from_upper(k, n, &u);
            let c = Complex::new(k, &linalg::congruence(k, &m, &block).expect("invertible")).expect("nonzero");
            let rows: Vec<Vec<F::Elem>> = (0..n - 2).map(|_| random_vector(k, n, &mut rng)).collect();
            let s = ProjSubspace::from_vectors(k, n, &rows);
            let ok = center_complex(k, &center(k, &c)).map(|d| d == c).unwrap_or(false)
                && (s.vector_dim() != n - 2 || center_complex(k, &s).map(|h| center(k, &h) == s).unwrap_or(false));
            centers.record(t, ok, || json!({"complex": matrix_to_json(k, c.matrix().matrix())}));

            let lines = random_spanning_lines(k, n, &mut self.rng(12, n, t));
            let sample_seed = stream(13, n, t) ^ self.seed;
            let direct = even_fiber_sample(k, &lines, sample_seed, Construction::Direct);
            let instance = || lines_to_json(k, &lines);
            match direct {
                Ok(s) => {
                    let locus_ok = deg_locus_even(k, &s.pencil).map(|l| l.same_lines(&lines)).unwrap_or(false);
                    let prof_ok = corank_profile(k, &s.pencil)
                        .map(|p| {
                            p.points.iter().filter(|c| c.corank == 2).count() == n / 2
                                && p.points.iter().all(|c| c.corank < 4)
                        })
                        .unwrap_or(false);
                    round.record(t, locus_ok && prof_ok, instance);
                    let conv = s.sigma.alpha(k, s.pencil.n0()).is_some() && s.sigma.alpha(k, s.pencil.n1()).is_some();
                    converse.record(t, conv, instance);
                    let tr = even_fiber_sample(k, &lines, sample_seed, Construction::Transport);
                    let agree = tr.map(|x| x.pencil.span(k) == s.pencil.span(k)).unwrap_or(false);
                    paths.record(t, agree, instance);
                    let dim_ok = s.sigma.sigma.proj_dim() == (n as i64 - 2) / 2 && s.sigma.line_space_dim() == n as i64 - 4;
                    dims.record(t, dim_ok, instance);
                }
                Err(e) => {
                    round.record(t, false, || json!({"lines": instance(), "error": e.to_string()}));
                }
            }
        }
        for tally in [gauss, centers, round, converse, paths, dims] {
            self.checks.push(tally.finish());
        }
    }

    fn odd(&mut self, n: usize) {
        let k = self.k;
        let r = (n - 1) / 2;
        let expected = (n * n - 3 * n) / 2 + 1;
        let mut realize = Tally::new("realization-roundtrip", n, "sub-Pfaffians of the realized pencil are proportional to the forms");
        let mut member = Tally::new("realization-in-fiber", n, "the realized pencil solves the fiber system");
        let mut dim = Tally::new("fiber-dimension", n, "fiber system dimension (n^2-3n)/2 + 1");
        let mut sample = Tally::new("fiber-sample-certified", n, "sampled pencils annihilate the forms and share the parameterization");
        let mut distinct = Tally::new("fiber-not-injective", n, "the sample differs from the originating pencil");
        for t in 0..self.trials {
            let mut rng = self.rng(20, n, t);
            let spanning = (0..GENERIC_DRAWS).find_map(|_| {
                let forms: Vec<_> = (0..n).map(|_| random_form(k, r, &mut rng)).collect();
                Some(FormVector::new(forms).expect("degrees match")).filter(|f| f.is_spanning(k))
            });
            if let Some(f) = spanning {
                let instance = || forms_to_json(k, f.forms());
                match realize_pfaffians(k, &f) {
                    Ok(real) => {
                        let p = pencil_subpf(k, &real.pencil).expect("odd size");
                        realize.record(t, proportionality(k, f.forms(), &p).is_some(), instance);
                        member.record(t, fiber_system(k, &f).contains(k, &real.pencil), instance);
                    }
                    Err(e) => realize.record(t, false, || json!({"forms": instance(), "error": e.to_string()})),
                }
            }

            let mut rng = self.rng(21, n, t);
            let generic = (0..GENERIC_DRAWS).find_map(|_| {
                let origin = random_pencil(k, n, &mut rng);
                let f = FormVector::new(pencil_subpf(k, &origin).expect("odd size")).ok()?;
                f.check_generic(k).ok().map(|_| (origin, f))
            });
            let Some((origin, f)) = generic else {
                dim.record(t, false, || json!({"error": format!("no generic pencil in {GENERIC_DRAWS} draws")}));
                continue;
            };
            let space = fiber_system(k, &f);
            let instance = || pencil_to_json(k, &origin);
            dim.record(t, space.dimension() == expected && space.contains(k, &origin), instance);
            match fiber_sample(k, &space, stream(22, n, t) ^ self.seed) {
                Ok(s) => {
                    let annihilates = pencil_apply(k, &s.pencil, f.forms()).iter().all(|g| g.is_zero(k));
                    let locus = deg_locus_odd(k, &s.pencil).ok().map(|l| l.forms);
                    let ok = annihilates && locus == Some(normalize_forms(k, f.forms()));
                    sample.record(t, ok, instance);
                    distinct.record(t, !same_projective_pair(k, &s.pencil, &origin), instance);
                }
                Err(e) => sample.record(t, false, || json!({"pencil": instance(), "error": e.to_string()})),
            }
        }
        for tally in [realize, member, dim, sample, distinct] {
            self.checks.push(tally.finish());
        }
        self.standard_nk(n);
    }

    fn bookkeeping(&mut self) {
        let mut rows = Vec::new();
        let mut pass = true;
        for n in 4i64..=12 {
            let grass = 2 * (n * (n - 1) / 2 - 2);
            let (lhs, rhs) = if n % 2 == 0 {
                (grass - (n - 4), n * n - 2 * n)
            } else {
                (2 * grass - (n * n - 3 * n), n * n + n - 8)
            };
            pass &= lhs == rhs;
            rows.push(json!({"n": n, "grassmannian": grass, "lhs": lhs, "rhs": rhs}));
        }
        self.checks.push(Check::new(
            "dimension-bookkeeping",
            "dim Gr(2, Λ²V) - (n-4) = n^2 - 2n for even n; 2(dim Gr(2, Λ²V) - (n^2-3n)/2) = n^2 + n - 8 for odd n",
            pass,
            Value::Array(rows),
        ));
    }
}

pub fn run_suite<F: Field>(k: &F, cfg: &RunConfig, suite: Suite) -> Certificate {
    let mut s = Suites {
        k,
        seed: cfg.seed,
        trials: cfg.trials,
        checks: Vec::new(),
    };
    let pick = |defaults: &[usize], even: bool| -> Vec<usize> {
        match cfg.n {
            Some(n) if (n % 2 == 0) == even => vec![n],
            Some(_) => vec![],
            None => defaults.to_vec(),
        }
    };
    let mut sizes = Vec::new();
    if matches!(suite, Suite::Algebra | Suite::All) {
        let ns: Vec<usize> = match cfg.n {
            Some(n) => vec![n],
            None => vec![2, 3, 4, 5, 6, 7, 8],
        };
        for n in ns {
            s.algebra(n);
            sizes.push(n);
        }
    }
    let mut skipped = Vec::new();
    if matches!(suite, Suite::Even | Suite::All) {
        let mut ns = pick(&[4, 6, 8], true);
        if let (None, FieldSpec::Prime(p)) = (cfg.n, k.spec()) {
            skipped = ns.iter().copied().filter(|&n| p + 1 < (n / 2) as u64).collect();
            ns.retain(|n| !skipped.contains(n));
        }
        for n in ns {
            s.even(n);
            sizes.push(n);
        }
    }
    if matches!(suite, Suite::Odd | Suite::All) {
        for n in pick(&[5, 7], false) {
            s.odd(n);
            sizes.push(n);
        }
    }
    sizes.sort_unstable();
    sizes.dedup();
    s.bookkeeping();
    let name = match suite {
        Suite::Algebra => "algebra",
        Suite::Even => "even",
        Suite::Odd => "odd",
        Suite::All => "all",
    };
    let failed = s.checks.iter().filter(|c| !c.pass).count();
    let summary = vec![format!("suite {name}, sizes {sizes:?}, {} checks, {failed} failed", s.checks.len())];
    let inputs = json!({
        "field": k.spec().to_string(),
        "suite": name,
        "seed": cfg.seed,
        "trials": cfg.trials,
        "n": cfg.n,
    });
    let outputs = json!({
        "sizes": sizes,
        "checks_run": s.checks.len(),
        "failed": failed,
        "skipped_even_sizes": skipped,
    });
    Certificate::new("verify", inputs, outputs, s.checks, summary)
}

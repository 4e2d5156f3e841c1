use serde_json::{json, Value};
use skewpencil::complexes::{
    center, even_fiber_sample, gauss_fiber, Construction, ProjSubspace,
};
use skewpencil::field::Field;
use skewpencil::forms::{coeff_matrix_rank, BinaryForm, FormRing, PointP1};
use skewpencil::json::{
    elem_to_json, form_to_json, forms_from_json, lines_from_json, matrix_to_json, pencil_from_json,
    pencil_to_json, pfaffian_input_from_json, point_to_json, line_to_json, PfaffianInput,
};
use skewpencil::linalg::{self, SkewMatrix};
use skewpencil::odd::{
    cross_products_vanish, fiber_sample, fiber_system, proportionality, realize_pfaffians, FormVector,
};
use skewpencil::pencils::{
    corank_profile, deg_locus_even, deg_locus_odd, normalize_forms, pencil_apply, pencil_eval, pencil_pf,
    pencil_subpf, SkewPencil,
};
use skewpencil::random::{random_line, random_spanning_lines, trial_rng};

use crate::certificate::{Certificate, Check};
use crate::config::{check_parity, CliError, Command, RunConfig, Suite};
use crate::verify;

pub fn run<F: Field>(k: &F, cfg: &RunConfig) -> Result<Certificate, CliError> {
    match &cfg.command {
        Command::Pfaffian => cmd_pfaffian(k, cfg),
        Command::Deglocus => cmd_deglocus(k, cfg),
        Command::EvenFiber => cmd_even_fiber(k, cfg),
        Command::GaussDim => cmd_gauss_dim(k, cfg),
        Command::OddRealize => cmd_odd_realize(k, cfg),
        Command::OddFiber => cmd_odd_fiber(k, cfg),
        Command::Verify { suite } => {
            match (suite, cfg.n) {
                (Suite::Even, Some(n)) => check_parity(n, Some(true))?,
                (Suite::Odd, Some(n)) => check_parity(n, Some(false))?,
                _ => 0,
            };
            Ok(verify::run_suite(k, cfg, *suite))
        }
    }
}

pub(crate) fn forms_json<F: Field>(k: &F, forms: &[BinaryForm<F::Elem>]) -> Value {
    Value::Array(forms.iter().map(|f| form_to_json(k, f)).collect())
}

fn matrix_display<F: Field>(k: &F, m: &linalg::Matrix<F::Elem>) -> String {
    let rows: Vec<String> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| k.format(x)).collect::<Vec<_>>().join(" "))
        .collect();
    format!("[{}]", rows.join("; "))
}

fn forms_display<F: Field>(k: &F, forms: &[BinaryForm<F::Elem>]) -> String {
    let s: Vec<String> = forms.iter().map(|f| f.display(k)).collect();
    format!("({})", s.join(", "))
}

fn base_inputs<F: Field>(k: &F, cfg: &RunConfig) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("field".into(), json!(k.spec().to_string()));
    if let Some(n) = cfg.n {
        m.insert("n".into(), json!(n));
    }
    m
}

/// Up to `needed` distinct points of `P^1`: `[0:1]`, then `[1:t]`.
fn sample_points<F: Field>(k: &F, needed: usize) -> Vec<PointP1<F::Elem>> {
    let mut pts = vec![PointP1::new(k, k.zero(), k.one()).expect("nonzero")];
    let mut t = 0i64;
    while pts.len() < needed {
        let p = PointP1::new(k, k.one(), k.from_i64(t)).expect("nonzero");
        if pts.contains(&p) {
            break;
        }
        pts.push(p);
        t += 1;
    }
    pts
}

fn cmd_pfaffian<F: Field>(k: &F, cfg: &RunConfig) -> Result<Certificate, CliError> {
    let (path, v) = cfg.require_input()?;
    let parsed = pfaffian_input_from_json(k, v).map_err(|e| CliError::input(path, e))?;
    let mut inputs = base_inputs(k, cfg);
    let mut checks = Vec::new();
    let mut summary = Vec::new();
    let mut outputs = Value::Null;
    let forms_matrix = match parsed {
        PfaffianInput::Scalar(a) => {
            let n = cfg.check_n(a.size(), None)?;
            inputs.insert("matrix".into(), matrix_to_json(k, a.matrix()));
            if n % 2 == 0 {
                let pf = linalg::pfaffian(k, &a);
                let det = linalg::determinant(k, a.matrix()).expect("square");
                let elim = linalg::pfaffian_elimination(k, &a);
                checks.push(Check::new(
                    "pfaffian-squared-equals-determinant",
                    "Pf(A)^2 = det(A)",
                    k.mul(&pf, &pf) == det,
                    json!({"pfaffian": elem_to_json(k, &pf), "determinant": elem_to_json(k, &det)}),
                ));
                checks.push(Check::new(
                    "elimination-agrees-with-expansion",
                    "skew elimination and first-row expansion give the same Pfaffian",
                    elim == pf,
                    json!({"elimination": elem_to_json(k, &elim)}),
                ));
                summary.push(format!("Pf = {}", k.format(&pf)));
                summary.push(format!("det = {}", k.format(&det)));
                outputs = json!({"pfaffian": elem_to_json(k, &pf)});
            } else {
                let p = linalg::subpfaffian_vector(k, &a);
                let ap = linalg::mat_vec(k, a.matrix(), &p);
                checks.push(Check::new(
                    "kernel-identity",
                    "A p(A) = 0 for the signed sub-Pfaffian vector p",
                    ap.iter().all(|x| k.is_zero(x)),
                    Value::Array(ap.iter().map(|x| elem_to_json(k, x)).collect()),
                ));
                let strs: Vec<String> = p.iter().map(|x| k.format(x)).collect();
                summary.push(format!("sub-Pfaffians = ({})", strs.join(", ")));
                outputs = json!({
                    "pfaffian": elem_to_json(k, &k.zero()),
                    "subpfaffians": p.iter().map(|x| elem_to_json(k, x)).collect::<Vec<_>>(),
                });
            }
            None
        }
        PfaffianInput::Forms(m) => {
            cfg.check_n(m.size(), None)?;
            let rows: Vec<Value> = (0..m.size())
                .map(|i| forms_json(k, m.matrix().row(i)))
                .collect();
            inputs.insert("matrix".into(), Value::Array(rows));
            Some(m)
        }
        PfaffianInput::Pencil(p) => {
            cfg.check_n(p.size(), None)?;
            inputs.insert("pencil".into(), pencil_to_json(k, &p));
            Some(p.form_matrix(k))
        }
    };
    if let Some(m) = forms_matrix {
        outputs = forms_pfaffian(k, &m, &mut checks, &mut summary);
    }
    Ok(Certificate::new("pfaffian", Value::Object(inputs), outputs, checks, summary))
}

fn forms_pfaffian<F: Field>(
    k: &F,
    m: &SkewMatrix<BinaryForm<F::Elem>>,
    checks: &mut Vec<Check>,
    summary: &mut Vec<String>,
) -> Value {
    let ring = FormRing::new(k.clone());
    let n = m.size();
    let d = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| m.get(i, j))
        .find(|f| !f.is_zero(k))
        .map(|f| f.degree())
        .unwrap_or(0);
    if n % 2 == 0 {
        let pf = linalg::pfaffian(&ring, m).with_degree(k, d * n / 2);
        let needed = d * n + 1;
        let pts = sample_points(k, needed);
        let agree = pts.iter().all(|p| {
            let a = m.map(|f| f.eval(k, p));
            let v = pf.eval(k, p);
            k.mul(&v, &v) == linalg::determinant(k, a.matrix()).expect("square")
        });
        checks.push(Check::new(
            "pfaffian-squared-equals-determinant",
            "Pf(A)^2 = det(A), checked at enough points of P^1 to determine both forms",
            agree && pts.len() >= needed,
            json!({"points_checked": pts.len(), "points_needed": needed}),
        ));
        summary.push(format!("Pf = {}", pf.display(k)));
        json!({"pfaffian": form_to_json(k, &pf)})
    } else {
        let p: Vec<BinaryForm<F::Elem>> = linalg::subpfaffian_vector(&ring, m)
            .into_iter()
            .map(|f| f.with_degree(k, d * (n - 1) / 2))
            .collect();
        let np = linalg::mat_vec(&ring, m.matrix(), &p);
        checks.push(Check::new(
            "kernel-identity",
            "N(y) p(y) = 0 identically for the signed sub-Pfaffian vector p",
            np.iter().all(|f| f.is_zero(k)),
            forms_json(k, &np),
        ));
        summary.push(format!("sub-Pfaffians = {}", forms_display(k, &p)));
        json!({"pfaffian": form_to_json(k, &BinaryForm::zero(k, 0)), "subpfaffians": forms_json(k, &p)})
    }
}

fn read_pencil<F: Field>(k: &F, cfg: &RunConfig) -> Result<SkewPencil<F::Elem>, CliError> {
    let (path, v) = cfg.require_input()?;
    pencil_from_json(k, v).map_err(|e| CliError::input(path, e))
}

fn kernel_check<F: Field>(k: &F, pencil: &SkewPencil<F::Elem>, p: &PointP1<F::Elem>, l: &ProjSubspace<F::Elem>) -> bool {
    let m = pencil_eval(k, pencil, p);
    l.basis_vectors()
        .iter()
        .all(|v| linalg::mat_vec(k, m.matrix(), v).iter().all(|x| k.is_zero(x)))
}

fn cmd_deglocus<F: Field>(k: &F, cfg: &RunConfig) -> Result<Certificate, CliError> {
    let pencil = read_pencil(k, cfg)?;
    let n = cfg.check_n(pencil.size(), None)?;
    let mut inputs = base_inputs(k, cfg);
    inputs.insert("pencil".into(), pencil_to_json(k, &pencil));
    let mut checks = Vec::new();
    let mut summary = Vec::new();
    let outputs = if n % 2 == 0 {
        let pf = pencil_pf(k, &pencil);
        summary.push(format!("Pf = {}", pf.display(k)));
        let mut out = serde_json::Map::new();
        out.insert("pfaffian".into(), form_to_json(k, &pf));
        checks.push(Check::new(
            "pfaffian-nonzero",
            "the pencil meets the nonspecial complexes",
            !pf.is_zero(k),
            json!(null),
        ));
        if let Ok(prof) = corank_profile(k, &pencil) {
            let roots: Vec<Value> = prof
                .points
                .iter()
                .map(|c| json!({"point": point_to_json(k, &c.point), "multiplicity": c.multiplicity, "corank": c.corank}))
                .collect();
            for c in &prof.points {
                summary.push(format!("root {} multiplicity {} corank {}", c.point.display(k), c.multiplicity, c.corank));
            }
            out.insert("roots".into(), Value::Array(roots));
            out.insert("remainder_degree".into(), json!(prof.remainder_degree));
        }
        match deg_locus_even(k, &pencil) {
            Ok(locus) => {
                checks.push(Check::new(
                    "generic-locus",
                    "Pf(N) splits into distinct linear factors, each root of corank 2",
                    true,
                    json!(null),
                ));
                let kernels = locus.lines.iter().all(|(p, l)| kernel_check(k, &pencil, p, l));
                checks.push(Check::new(
                    "lines-are-kernels",
                    "each line is the kernel of N at its root",
                    kernels,
                    json!(null),
                ));
                let refs: Vec<&ProjSubspace<F::Elem>> = locus.lines.iter().map(|(_, l)| l).collect();
                let span = ProjSubspace::join_all(k, n, &refs).proj_dim();
                checks.push(Check::new(
                    "lines-span",
                    "the n/2 lines span P^(n-1)",
                    span == n as i64 - 1,
                    json!({"span_dim": span}),
                ));
                for (p, l) in &locus.lines {
                    summary.push(format!("line {} at {}", l.display(k), p.display(k)));
                }
                summary.push(format!("span = P^{span}"));
                out.insert(
                    "lines".into(),
                    Value::Array(
                        locus
                            .lines
                            .iter()
                            .map(|(p, l)| json!({"point": point_to_json(k, p), "line": line_to_json(k, l)}))
                            .collect(),
                    ),
                );
                out.insert("span_dim".into(), json!(span));
            }
            Err(e) => {
                summary.push(format!("not generic: {e}"));
                checks.push(Check::new(
                    "generic-locus",
                    "Pf(N) splits into distinct linear factors, each root of corank 2",
                    false,
                    json!(e.to_string()),
                ));
            }
        }
        Value::Object(out)
    } else {
        let p = pencil_subpf(k, &pencil).expect("odd size");
        let np = pencil_apply(k, &pencil, &p);
        checks.push(Check::new(
            "kernel-identity",
            "N(y) p(y) = 0 identically for the signed sub-Pfaffian vector p",
            np.iter().all(|f| f.is_zero(k)),
            forms_json(k, &np),
        ));
        let rank = coeff_matrix_rank(k, &p, (n - 1) / 2).expect("equal degrees");
        checks.push(Check::new(
            "span-rank",
            "the sub-Pfaffians span all forms of degree (n-1)/2",
            rank == (n + 1) / 2,
            json!({"rank": rank, "expected": (n + 1) / 2}),
        ));
        let mut out = serde_json::Map::new();
        out.insert("subpfaffians".into(), forms_json(k, &p));
        out.insert("span_rank".into(), json!(rank));
        match deg_locus_odd(k, &pencil) {
            Ok(locus) => {
                checks.push(Check::new(
                    "generic-locus",
                    "the sub-Pfaffians have no common zero",
                    true,
                    json!({"gcd": "1"}),
                ));
                summary.push(format!("parameterization {}", forms_display(k, &locus.forms)));
                out.insert("parameterization".into(), forms_json(k, &locus.forms));
            }
            Err(e) => {
                summary.push(format!("not generic: {e}"));
                checks.push(Check::new(
                    "generic-locus",
                    "the sub-Pfaffians have no common zero",
                    false,
                    json!(e.to_string()),
                ));
            }
        }
        Value::Object(out)
    };
    Ok(Certificate::new("deglocus", Value::Object(inputs), outputs, checks, summary))
}

fn even_n_and_lines<F: Field>(k: &F, cfg: &RunConfig, stream: u64) -> Result<(usize, Vec<ProjSubspace<F::Elem>>), CliError> {
    match cfg.input.as_ref() {
        Some((path, v)) => {
            let lines = lines_from_json(k, v).map_err(|e| CliError::input(path, e))?;
            let n = lines.first().map(|l| l.ambient()).ok_or_else(|| CliError::Usage("no lines in input".into()))?;
            Ok((cfg.check_n(n, Some(true))?, lines))
        }
        None => {
            let n = cfg.n.ok_or_else(|| CliError::Usage(format!("{} needs --n or --input", cfg.command.name())))?;
            check_parity(n, Some(true))?;
            let mut rng = trial_rng(cfg.seed, stream);
            Ok((n, random_spanning_lines(k, n, &mut rng)))
        }
    }
}

fn lines_json<F: Field>(k: &F, lines: &[ProjSubspace<F::Elem>]) -> Value {
    Value::Array(lines.iter().map(|l| line_to_json(k, l)).collect())
}

fn cmd_even_fiber<F: Field>(k: &F, cfg: &RunConfig) -> Result<Certificate, CliError> {
    let (n, lines) = even_n_and_lines(k, cfg, 1)?;
    let mut inputs = base_inputs(k, cfg);
    inputs.insert("n".into(), json!(n));
    inputs.insert("seed".into(), json!(cfg.seed));
    inputs.insert("lines".into(), lines_json(k, &lines));
    let mut checks = Vec::new();
    let mut summary = Vec::new();
    let direct = even_fiber_sample(k, &lines, cfg.seed, Construction::Direct);
    let s = match direct {
        Ok(s) => s,
        Err(e) => {
            summary.push(format!("no fiber sample: {e}"));
            checks.push(Check::new(
                "fiber-sample",
                "a line of sigma avoiding every F_i ∩ F_j exists and gives a pencil over the lines",
                false,
                json!(e.to_string()),
            ));
            return Ok(Certificate::new("even-fiber", Value::Object(inputs), json!({}), checks, summary));
        }
    };
    checks.push(Check::new(
        "fiber-sample",
        "a line of sigma avoiding every F_i ∩ F_j exists and gives a pencil over the lines",
        true,
        json!({"attempts": s.attempts}),
    ));
    let locus = deg_locus_even(k, &s.pencil);
    let same = locus.as_ref().map(|l| l.same_lines(&lines)).unwrap_or(false);
    checks.push(Check::new(
        "locus-equals-input",
        "the degeneracy locus of the sampled pencil is exactly the input lines",
        same,
        json!(null),
    ));
    let prof = corank_profile(k, &s.pencil).map_err(|e| CliError::Usage(e.to_string()));
    let (first, higher, roots) = match &prof {
        Ok(p) => (
            p.points.iter().filter(|c| c.corank == 2).count(),
            p.points.iter().filter(|c| c.corank >= 4).count(),
            p.points
                .iter()
                .map(|c| json!({"point": point_to_json(k, &c.point), "corank": c.corank}))
                .collect::<Vec<_>>(),
        ),
        Err(_) => (0, 0, vec![]),
    };
    checks.push(Check::new(
        "corank-profile",
        "exactly n/2 special complexes of the first type and none of the second type",
        first == n / 2 && higher == 0,
        json!({"corank_2": first, "corank_4_or_more": higher}),
    ));
    let sigma_dim = s.sigma.sigma.proj_dim();
    checks.push(Check::new(
        "sigma-dimension",
        "sigma has projective dimension (n-2)/2",
        sigma_dim == (n as i64 - 2) / 2,
        json!({"sigma_dim": sigma_dim}),
    ));
    let lines_dim = s.sigma.line_space_dim();
    checks.push(Check::new(
        "line-space-dimension",
        "the lines of sigma form a Grassmannian of dimension n-4",
        lines_dim == n as i64 - 4,
        json!({"dimension": lines_dim}),
    ));
    let in_sigma = s.sigma.alpha(k, s.pencil.n0()).is_some() && s.sigma.alpha(k, s.pencil.n1()).is_some();
    checks.push(Check::new(
        "generators-in-sigma",
        "both generators of the fiber pencil lie in sigma",
        in_sigma,
        json!(null),
    ));
    let transport = even_fiber_sample(k, &lines, cfg.seed, Construction::Transport);
    let agree = transport
        .as_ref()
        .map(|t| t.pencil.span(k) == s.pencil.span(k) && t.sigma.sigma == s.sigma.sigma)
        .unwrap_or(false);
    checks.push(Check::new(
        "construction-paths-agree",
        "direct construction and transport of the standard configuration give the same pencil",
        agree,
        json!(null),
    ));
    if n == 4 {
        let whole = SkewPencil::new(s.sigma.h[0].matrix().clone(), s.sigma.h[1].matrix().clone()).expect("same size");
        checks.push(Check::new(
            "unique-fiber-element",
            "for n = 4 the fiber is the single pencil sigma",
            whole.same_line(k, &s.pencil),
            json!(null),
        ));
    }
    summary.push(format!("pencil N0 = {}", matrix_display(k, s.pencil.n0().matrix())));
    summary.push(format!("pencil N1 = {}", matrix_display(k, s.pencil.n1().matrix())));
    if let Ok(l) = &locus {
        for (p, line) in &l.lines {
            summary.push(format!("recovered line {} at {}", line.display(k), p.display(k)));
        }
    }
    let outputs = json!({
        "pencil": pencil_to_json(k, &s.pencil),
        "alpha": [
            s.alpha[0].iter().map(|x| elem_to_json(k, x)).collect::<Vec<_>>(),
            s.alpha[1].iter().map(|x| elem_to_json(k, x)).collect::<Vec<_>>(),
        ],
        "sigma_dim": sigma_dim,
        "line_space_dim": lines_dim,
        "roots": roots,
        "recovered_lines": locus.map(|l| l.lines.iter().map(|(_, x)| line_to_json(k, x)).collect::<Vec<_>>()).unwrap_or_default(),
    });
    Ok(Certificate::new("even-fiber", Value::Object(inputs), outputs, checks, summary))
}

fn cmd_gauss_dim<F: Field>(k: &F, cfg: &RunConfig) -> Result<Certificate, CliError> {
    let (n, lines) = match cfg.input.as_ref() {
        Some((path, v)) => {
            let lines = lines_from_json(k, v).map_err(|e| CliError::input(path, e))?;
            let n = lines.first().map(|l| l.ambient()).ok_or_else(|| CliError::Usage("no lines in input".into()))?;
            (cfg.check_n(n, Some(true))?, lines)
        }
        None => {
            let n = cfg.n.ok_or_else(|| CliError::Usage("gauss-dim needs --n or --input".into()))?;
            check_parity(n, Some(true))?;
            let lines = (0..cfg.trials)
                .map(|t| random_line(k, n, &mut trial_rng(cfg.seed, t as u64)))
                .collect();
            (n, lines)
        }
    };
    let mut inputs = base_inputs(k, cfg);
    inputs.insert("n".into(), json!(n));
    inputs.insert("lines".into(), lines_json(k, &lines));
    let expected = ((n - 1) * (n - 4) / 2) as i64;
    let mut dims = Vec::new();
    let mut centers_ok = true;
    for l in &lines {
        let g = gauss_fiber(k, l).map_err(|e| CliError::Usage(e.to_string()))?;
        centers_ok &= g.basis().iter().all(|c| center(k, c).contains(k, l));
        dims.push(g.proj_dim());
    }
    let checks = vec![
        Check::new(
            "gauss-fiber-dimension",
            "the complexes whose center contains a line form a space of projective dimension (n-1)(n-4)/2",
            dims.iter().all(|&d| d == expected),
            json!({"dimensions": dims, "expected": expected}),
        ),
        Check::new(
            "centers-contain-line",
            "every basis complex has the line in its center",
            centers_ok,
            json!(null),
        ),
    ];
    let summary = vec![format!("dimensions {dims:?}, expected {expected}")];
    let outputs = json!({"dimensions": dims, "expected": expected});
    Ok(Certificate::new("gauss-dim", Value::Object(inputs), outputs, checks, summary))
}

fn read_forms<F: Field>(k: &F, cfg: &RunConfig) -> Result<FormVector<F::Elem>, CliError> {
    let (path, v) = cfg.require_input()?;
    let forms = forms_from_json(k, v).map_err(|e| CliError::input(path, e))?;
    cfg.check_n(forms.len(), Some(false))?;
    FormVector::new(forms).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn genericity_checks<F: Field>(k: &F, f: &FormVector<F::Elem>, checks: &mut Vec<Check>) -> bool {
    let rank = f.spanning_rank(k);
    let spanning = rank == f.degree() + 1;
    checks.push(Check::new(
        "forms-span",
        "the forms span all forms of degree (n-1)/2",
        spanning,
        json!({"rank": rank, "expected": f.degree() + 1}),
    ));
    let g = f.gcd(k);
    checks.push(Check::new(
        "gcd-constant",
        "the forms have no common factor",
        g.degree() == 0,
        json!({"gcd": g.display(k)}),
    ));
    spanning && g.degree() == 0
}

fn cmd_odd_realize<F: Field>(k: &F, cfg: &RunConfig) -> Result<Certificate, CliError> {
    let f = read_forms(k, cfg)?;
    let mut inputs = base_inputs(k, cfg);
    inputs.insert("n".into(), json!(f.len()));
    inputs.insert("forms".into(), forms_json(k, f.forms()));
    let mut checks = Vec::new();
    let mut summary = Vec::new();
    if !genericity_checks(k, &f, &mut checks) {
        summary.push("forms are not generic".into());
        return Ok(Certificate::new("odd-realize", Value::Object(inputs), json!({}), checks, summary));
    }
    let outputs = match realize_pfaffians(k, &f) {
        Ok(real) => {
            let p = pencil_subpf(k, &real.pencil).expect("odd size");
            checks.push(Check::new(
                "cross-products-vanish",
                "f_i p_j - f_j p_i = 0 for all i < j",
                cross_products_vanish(k, f.forms(), &p),
                json!(null),
            ));
            let c = proportionality(k, f.forms(), &p);
            checks.push(Check::new(
                "proportional",
                "the sub-Pfaffians of the pencil are a nonzero multiple of the forms",
                c.is_some(),
                json!({"scalar": c.as_ref().map(|c| k.format(c))}),
            ));
            summary.push(format!("scalar {}", k.format(&real.scalar)));
            summary.push(format!("sub-Pfaffians {}", forms_display(k, &p)));
            json!({
                "pencil": pencil_to_json(k, &real.pencil),
                "beta": matrix_to_json(k, &real.beta),
                "scalar": elem_to_json(k, &real.scalar),
                "subpfaffians": forms_json(k, &p),
            })
        }
        Err(e) => {
            checks.push(Check::new(
                "realization",
                "a congruence of the standard pencil realizes the forms",
                false,
                json!(e.to_string()),
            ));
            json!({})
        }
    };
    Ok(Certificate::new("odd-realize", Value::Object(inputs), outputs, checks, summary))
}

fn cmd_odd_fiber<F: Field>(k: &F, cfg: &RunConfig) -> Result<Certificate, CliError> {
    let f = read_forms(k, cfg)?;
    let n = f.len();
    let mut inputs = base_inputs(k, cfg);
    inputs.insert("n".into(), json!(n));
    inputs.insert("seed".into(), json!(cfg.seed));
    inputs.insert("forms".into(), forms_json(k, f.forms()));
    let mut checks = Vec::new();
    let mut summary = Vec::new();
    genericity_checks(k, &f, &mut checks);
    let space = fiber_system(k, &f);
    let expected = (n * n - 3 * n) / 2 + 1;
    let annihilate = space
        .basis
        .iter()
        .all(|b| pencil_apply(k, b, f.forms()).iter().all(|g| g.is_zero(k)));
    checks.push(Check::new(
        "basis-annihilates-forms",
        "every basis pencil satisfies N(y) f(y) = 0 identically",
        annihilate,
        json!(null),
    ));
    checks.push(Check::new(
        "dimension-matches-expectation",
        "solution space dimension (n^2-3n)/2 + 1: fiber dimension plus one scalar",
        space.dimension() == expected,
        json!({"dimension": space.dimension(), "expected": expected}),
    ));
    if let Ok(real) = realize_pfaffians(k, &f) {
        checks.push(Check::new(
            "realization-is-member",
            "the realized pencil lies in the solution space",
            space.contains(k, &real.pencil),
            json!(null),
        ));
    }
    summary.push(format!("solution space dimension {} (expected {expected})", space.dimension()));
    let sample = match fiber_sample(k, &space, cfg.seed) {
        Ok(s) => {
            let sub = pencil_subpf(k, &s.pencil).expect("odd size");
            checks.push(Check::new(
                "sample-certified",
                "the sample's sub-Pfaffians are a nonzero multiple of the forms",
                proportionality(k, f.forms(), &sub).is_some(),
                json!({"rejected_draws": s.rejected}),
            ));
            let locus = deg_locus_odd(k, &s.pencil).ok().map(|l| l.forms);
            checks.push(Check::new(
                "sample-locus",
                "the sample has the normalized forms as its parameterization",
                locus == Some(normalize_forms(k, f.forms())),
                json!(null),
            ));
            summary.push(format!("sample scalar {}, {} rejected draws", k.format(&s.scalar), s.rejected));
            json!({
                "pencil": pencil_to_json(k, &s.pencil),
                "coefficients": s.coefficients.iter().map(|x| elem_to_json(k, x)).collect::<Vec<_>>(),
                "scalar": elem_to_json(k, &s.scalar),
                "rejected_draws": s.rejected,
            })
        }
        Err(e) => {
            checks.push(Check::new(
                "sample-certified",
                "the sample's sub-Pfaffians are a nonzero multiple of the forms",
                false,
                json!(e.to_string()),
            ));
            Value::Null
        }
    };
    let outputs = json!({
        "dimension": space.dimension(),
        "expected_dimension": expected,
        "basis": space.basis.iter().map(|b| pencil_to_json(k, b)).collect::<Vec<_>>(),
        "sample": sample,
    });
    Ok(Certificate::new("odd-fiber", Value::Object(inputs), outputs, checks, summary))
}


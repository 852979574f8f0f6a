use std::io::Read;

use num_complex::Complex64;
use serde::Serialize;

use favard::basis::{Family, TransformedBasis};
use favard::coeffs::{self, CoefficientVector, DecayFit, DecayModel, TanhChebyshevKind};
use favard::diffop::DiffMatrix;
use favard::expr::Expr;
use favard::family::FamilySpec;
use favard::quadrature::golub_welsch;
use favard::schrodinger::{free_propagate, PropagatedState, StrangSplitting};
use favard::verify::{self, CheckReport};

use crate::output::{self, g17, Table};
use crate::{args, BasisEvalArgs, CoeffSource, CoeffsArgs, DecayArgs, DiffmatArgs, DiffmatEmit, Failure, Method};
use crate::{PeriodicEvalArgs, QuadArgs, QuadColumn, SchrodingerArgs, VerifyArgs};

type Res<T = ()> = Result<T, Failure>;

fn usage<T>(r: Result<T, String>) -> Res<T> {
    r.map_err(Failure::Usage)
}

fn family(s: &str) -> Res<FamilySpec> {
    FamilySpec::parse(s).map_err(|e| Failure::Usage(e.to_string()))
}

fn positive(name: &str, n: usize) -> Res<usize> {
    if n == 0 {
        return Err(Failure::Usage(format!("--{name} must be positive")));
    }
    Ok(n)
}

fn mt_offset(n: usize) -> i64 {
    -(n as i64) / 2 + 1
}

fn phi_header(ns: &[i64]) -> Vec<String> {
    let mut h = vec!["x".to_string()];
    for n in ns {
        h.push(format!("re_phi_{n}"));
        h.push(format!("im_phi_{n}"));
    }
    h
}

fn write_phi_table(out: Option<&str>, ns: &[i64], xs: &[f64], table: &[Vec<Complex64>]) -> Res {
    let mut t = Table::new(output::sink(out)?, &phi_header(ns))?;
    let mut row = Vec::with_capacity(1 + 2 * ns.len());
    for (i, &x) in xs.iter().enumerate() {
        row.clear();
        row.push(x);
        for r in table {
            row.extend([r[i].re, r[i].im]);
        }
        t.nums(&row)?;
    }
    Ok(t.finish()?)
}

pub fn basis_eval(a: &BasisEvalArgs) -> Res {
    let spec = family(&a.family)?;
    let ns = usage(args::index_range(&a.n))?;
    let xs = usage(args::grid(&a.grid))?;
    let len = ns.iter().map(|&n| if n < 0 { -n } else { n + 1 }).max().unwrap_or(1) as usize;
    let basis = spec.basis(len)?;
    if let Some(&n) = ns.iter().find(|n| !basis.index_range().contains(n)) {
        return Err(Failure::Usage(format!("index {n} not available for {}", a.family)));
    }
    let table = basis.phi_table(&ns, &xs)?;
    write_phi_table(a.out.as_deref(), &ns, &xs, &table)
}

pub fn quad(a: &QuadArgs) -> Res {
    let spec = family(&a.family)?;
    let n = positive("N", a.n)?;
    let rule = golub_welsch(&spec.jacobi(n)?, n)?;
    let header: Vec<String> = a
        .emit
        .iter()
        .map(|c| match c {
            QuadColumn::Nodes => "node".to_string(),
            QuadColumn::Weights => "weight".to_string(),
        })
        .collect();
    let mut t = Table::new(output::sink(a.out.as_deref())?, &header)?;
    for (x, w) in rule.nodes.iter().zip(&rule.weights) {
        let row: Vec<f64> = a
            .emit
            .iter()
            .map(|c| match c {
                QuadColumn::Nodes => *x,
                QuadColumn::Weights => *w,
            })
            .collect();
        t.nums(&row)?;
    }
    Ok(t.finish()?)
}

#[derive(Serialize)]
struct Radius<'a> {
    family: &'a str,
    #[serde(rename = "N")]
    n: usize,
    offset: i64,
    spectral_radius: f64,
}

fn diff_matrix(spec: &FamilySpec, n: usize) -> Res<DiffMatrix> {
    Ok(match spec {
        FamilySpec::Transformed(Family::MalmquistTakenaka) => DiffMatrix::malmquist_takenaka(mt_offset(n), n)?,
        _ => DiffMatrix::build(&spec.jacobi(n)?, n)?,
    })
}

pub fn diffmat(a: &DiffmatArgs) -> Res {
    let spec = family(&a.family)?;
    let n = positive("N", a.n)?;
    let d = diff_matrix(&spec, n)?;
    match a.emit {
        DiffmatEmit::Entries => {
            let header: Vec<String> = ["row", "col", "re", "im"].map(String::from).to_vec();
            let mut t = Table::new(output::sink(a.out.as_deref())?, &header)?;
            for (r, c, v) in d.entries() {
                // structural zeros (b_{−1} = 0 for MT) print as 0, not -0
                t.row(&[r.to_string(), c.to_string(), g17(v.re + 0.0), g17(v.im + 0.0)])?;
            }
            Ok(t.finish()?)
        }
        DiffmatEmit::Radius => {
            let offset = d.entries().first().map_or(0, |e| e.0);
            let body = Radius { family: &a.family, n, offset, spectral_radius: d.spectral_radius()? };
            Ok(output::json(output::sink(a.out.as_deref())?, "favard.diffmat.radius", body)?)
        }
    }
}

struct Computed {
    coeffs: CoefficientVector,
    method: &'static str,
}

fn tanh_kind(spec: &FamilySpec) -> Option<TanhChebyshevKind> {
    match spec {
        FamilySpec::Transformed(Family::TanhJacobi { a, b }) => TanhChebyshevKind::from_params(*a, *b),
        _ => None,
    }
}

fn compute_coeffs(src: &CoeffSource) -> Res<Computed> {
    let need = |v: &Option<String>, name: &str| v.clone().ok_or_else(|| Failure::Usage(format!("--{name} is required")));
    let spec = family(&need(&src.family, "family")?)?;
    let f = usage(args::expr(&need(&src.f, "f")?))?;
    let n = positive("N", src.n.ok_or_else(|| Failure::Usage("--N is required".into()))?)?;
    let is_mt = spec == FamilySpec::Transformed(Family::MalmquistTakenaka);
    let kind = tanh_kind(&spec);
    let method = match src.method {
        Method::Auto if is_mt && n.is_power_of_two() => Method::Fft,
        Method::Auto if kind.is_some() => Method::Dct,
        Method::Auto => Method::Quad,
        m => m,
    };
    let eval = |x: f64| f.eval_or_nan(x);
    match method {
        Method::Fft => {
            if !is_mt {
                return Err(Failure::Usage("--method fft needs --family mt".into()));
            }
            if !(src.scale > 0.0) || !src.scale.is_finite() {
                return Err(Failure::Usage("--scale must be positive".into()));
            }
            Ok(Computed { coeffs: coeffs::mt_coeffs_fft_scaled(eval, n, src.scale)?, method: "fft" })
        }
        Method::Dct => {
            let kind = kind.ok_or_else(|| {
                Failure::Usage("--method dct needs tanhjacobi:a,b with a, b ∈ {0.25, 0.75}".into())
            })?;
            Ok(Computed { coeffs: coeffs::tanh_chebyshev_coeffs(eval, kind, n)?, method: "dct" })
        }
        _ => {
            if !(src.xmax > 0.0) || src.points < 2 {
                return Err(Failure::Usage("--xmax must be positive and --points at least 2".into()));
            }
            let basis = spec.basis(n + 1)?;
            let r = coeffs::coeffs_xspace(eval, &basis, n, src.xmax, src.points)?;
            if r.tail > 1e-10 {
                eprintln!("warning: |f·φ_n| reaches {:.1e} at ±{}; consider a larger --xmax", r.tail, src.xmax);
            }
            Ok(Computed { coeffs: r.coeffs, method: "quad" })
        }
    }
}

pub fn coeffs(a: &CoeffsArgs) -> Res {
    let c = compute_coeffs(&a.src)?;
    write_coeffs(a.out.as_deref(), &c.coeffs)
}

fn write_coeffs(out: Option<&str>, c: &CoefficientVector) -> Res {
    let header: Vec<String> = ["n", "re", "im", "abs"].map(String::from).to_vec();
    let mut t = Table::new(output::sink(out)?, &header)?;
    for (n, v) in c.indices().zip(&c.values) {
        t.row(&[n.to_string(), g17(v.re), g17(v.im), g17(v.norm())])?;
    }
    Ok(t.finish()?)
}

fn decay_model(s: &str) -> Res<DecayModel> {
    match s.split_once(':') {
        None if s == "exp" => Ok(DecayModel::Exponential),
        None if s == "alg" => Ok(DecayModel::Algebraic),
        Some(("stretched", p)) => match p.trim().parse::<f64>() {
            Ok(p) if p > 0.0 && p.is_finite() => Ok(DecayModel::Stretched(p)),
            _ => Err(Failure::Usage(format!("stretched exponent `{p}` must be a positive number"))),
        },
        _ => Err(Failure::Usage(format!("--model `{s}`: expected exp, alg or stretched:<p>"))),
    }
}

fn read_coeffs(path: &str) -> Res<CoefficientVector> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)?;
    }
    let bad = |why: String| Failure::Usage(format!("{path}: {why}"));
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| bad(e.to_string()))?.clone();
    let col = |name: &str| header.iter().position(|h| h == name).ok_or_else(|| bad(format!("missing column `{name}`")));
    let (cn, cre, cim) = (col("n")?, col("re")?, col("im")?);
    let mut offset = None;
    let mut values = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        let field = |k: usize| rec.get(k).unwrap_or("");
        let n: i64 = field(cn).parse().map_err(|_| bad(format!("row {}: bad index", line + 1)))?;
        let num = |k: usize| field(k).parse::<f64>().map_err(|_| bad(format!("row {}: bad number", line + 1)));
        let start = *offset.get_or_insert(n);
        if n != start + values.len() as i64 {
            return Err(bad(format!("row {}: indices must be consecutive", line + 1)));
        }
        values.push(Complex64::new(num(cre)?, num(cim)?));
    }
    Ok(CoefficientVector::new(offset.unwrap_or(0), values))
}

#[derive(Serialize)]
struct DecaySummary<'a> {
    model: &'a str,
    source: String,
    coefficients: usize,
    fit: DecayFit,
}

pub fn decay(a: &DecayArgs) -> Res {
    let model = decay_model(&a.model)?;
    let (c, source) = match &a.input {
        Some(path) => (read_coeffs(path)?, format!("file:{path}")),
        None => {
            let c = compute_coeffs(&a.src)?;
            let f = a.src.f.as_deref().unwrap_or_default();
            (c.coeffs, format!("{}:{}:{f}", c.method, a.src.family.as_deref().unwrap_or_default()))
        }
    };
    let fit = coeffs::decay_fit(&c, model)?;
    let body = DecaySummary { model: &a.model, source, coefficients: c.len(), fit };
    Ok(output::json(output::sink(a.out.as_deref())?, "favard.decay", body)?)
}

pub fn periodic_eval(a: &PeriodicEvalArgs) -> Res {
    let ns = usage(args::index_range(&a.n))?;
    let xs = usage(args::grid(&a.grid))?;
    if ns[0] < 0 {
        return Err(Failure::Usage("periodic indices start at 0".into()));
    }
    let top = *ns.last().unwrap_or(&0) as usize;
    let p = FamilySpec::Charlier { a: a.a }.periodic(top.max(1))?;
    let table: Vec<Vec<Complex64>> = ns
        .iter()
        .map(|&n| xs.iter().map(|&x| p.phi(n as usize, x)).collect::<Result<_, _>>())
        .collect::<Result<_, _>>()?;
    write_phi_table(a.out.as_deref(), &ns, &xs, &table)
}

pub fn schrodinger(a: &SchrodingerArgs) -> Res {
    let spec = family(&a.basis)?;
    let n = positive("N", a.n)?;
    let xs = usage(args::grid(&a.grid))?;
    let potential = if a.potential.trim() == "none" { None } else { Some(usage(args::expr(&a.potential))?) };
    if !(a.tau > 0.0) || !(a.t_end >= 0.0) || !a.t_end.is_finite() {
        return Err(Failure::Usage("need --tau > 0 and finite --T ≥ 0".into()));
    }
    let steps = (a.t_end / a.tau).round();
    if (steps * a.tau - a.t_end).abs() > 1e-9 * a.t_end.max(1.0) || steps > 1e7 {
        return Err(Failure::Usage(format!("--T {} is not a multiple of --tau {}", a.t_end, a.tau)));
    }
    let steps = steps as usize;
    let every = positive("every", a.every)?;
    let strang_family = matches!(spec, FamilySpec::Transformed(Family::Hermite | Family::MalmquistTakenaka));
    if potential.is_some() && !strang_family {
        return Err(Failure::Usage("a potential needs --basis hermite or mt".into()));
    }
    let src = CoeffSource {
        family: Some(a.basis.clone()),
        f: Some(a.f0.clone()),
        n: Some(n),
        method: Method::Auto,
        xmax: a.xmax,
        points: a.points,
        scale: 0.5,
    };
    let a0 = compute_coeffs(&src)?.coeffs;
    let basis = spec.basis(n + 1)?;
    let outputs: Vec<usize> = (0..=steps).filter(|k| k % every == 0 || *k == steps).collect();
    let mut frames: Vec<(f64, Vec<Complex64>, f64)> = Vec::with_capacity(outputs.len());
    match potential {
        None => {
            let state = PropagatedState::new(&basis, a0);
            let norm = state.coeffs.norm();
            for &k in &outputs {
                let t = k as f64 * a.tau;
                frames.push((t, free_propagate(&state, t).eval(&xs)?, norm));
            }
        }
        Some(v) => frames = strang_frames(&basis, n, &v, a0, a.tau, &outputs, &xs)?,
    }
    let header: Vec<String> = ["t", "x", "re_u", "im_u", "norm"].map(String::from).to_vec();
    let mut t = Table::new(output::sink(a.out.as_deref())?, &header)?;
    for (time, u, norm) in &frames {
        for (x, v) in xs.iter().zip(u) {
            t.nums(&[*time, *x, v.re, v.im, *norm])?;
        }
    }
    Ok(t.finish()?)
}

fn strang_frames(
    basis: &TransformedBasis,
    n: usize,
    v: &Expr,
    a0: CoefficientVector,
    tau: f64,
    outputs: &[usize],
    xs: &[f64],
) -> Res<Vec<(f64, Vec<Complex64>, f64)>> {
    let sp = StrangSplitting::new(basis, n, |x| v.eval_or_nan(x))?;
    let mut a = a0;
    let mut done = 0;
    let mut warned = false;
    let mut frames = Vec::with_capacity(outputs.len());
    for &k in outputs {
        if k > done {
            let r = sp.run(&a, tau, k - done)?;
            if let (Some(w), false) = (&r.warning, warned) {
                eprintln!("warning: {w}");
                warned = true;
            }
            a = r.coeffs;
            done = k;
        }
        frames.push((k as f64 * tau, coeffs::reconstruct(basis, &a, xs)?, a.norm()));
    }
    Ok(frames)
}

#[derive(Serialize)]
struct VerifyBody<'a> {
    family: &'a str,
    #[serde(rename = "N")]
    n: usize,
    reports: Vec<CheckReport>,
}

const CHECKS: [&str; 8] =
    ["gram", "recurrence", "cramer", "pw-support", "ramanujan", "tanh-jacobi", "periodic-gram", "periodic-recurrence"];

fn grid(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect()
}

fn applicable(spec: &FamilySpec, check: &str) -> bool {
    let fam = match spec {
        FamilySpec::Charlier { .. } => return check.starts_with("periodic-"),
        FamilySpec::CustomWeight { .. } => return matches!(check, "gram" | "recurrence"),
        FamilySpec::Transformed(f) => f,
    };
    match check {
        "gram" | "recurrence" => true,
        // long sample windows are only affordable with a closed form
        "pw-support" => {
            matches!(fam, Family::Hermite | Family::Legendre | Family::MalmquistTakenaka | Family::TanhJacobi { .. })
        }
        "cramer" => *fam == Family::Hermite,
        "ramanujan" => matches!(fam, Family::ContinuousHahn { a, b } if a == b),
        "tanh-jacobi" => matches!(fam, Family::TanhJacobi { a, b } if a == b),
        _ => false,
    }
}

fn run_check(spec: &FamilySpec, check: &str, n: usize) -> Res<Vec<CheckReport>> {
    if let FamilySpec::Charlier { .. } = spec {
        let p = spec.periodic(n)?;
        let m = (4 * p.k_max + 4).next_power_of_two().max(4096);
        return Ok(vec![match check {
            "periodic-gram" => verify::check_periodic_gram(&p, n, m)?,
            _ => verify::check_periodic_recurrence(&p, n)?,
        }]);
    }
    let basis = spec.basis(n + 2)?;
    let fam = basis.family.clone();
    Ok(match check {
        "gram" => vec![match fam {
            Family::Hermite => verify::check_gram(&basis, n, 20.0, 2001)?,
            Family::MalmquistTakenaka => verify::check_gram(&basis, n, 0.0, (8 * n).next_power_of_two().max(256))?,
            Family::Legendre => verify::check_gram(&basis, n, 400.0, 0)?,
            _ => verify::check_gram(&basis, n, 40.0, 4001)?,
        }],
        "recurrence" => vec![verify::check_recurrence(&basis, n, &grid(-5.0, 5.0, 21))?],
        "cramer" => vec![verify::check_cramer(n, &grid(-10.0, 10.0, 10_000))?],
        "pw-support" => {
            let m = if basis.pw_support().is_compact() { 1 << 22 } else { 1 << 16 };
            let mut ks = vec![0, n as i64 - 1];
            ks.dedup();
            ks.iter().map(|&k| verify::check_pw_support(&basis, k, 3.0, m)).collect::<Result<_, _>>()?
        }
        "ramanujan" => {
            let Family::ContinuousHahn { a, .. } = fam else { unreachable!() };
            vec![verify::check_ramanujan(a, &[0.0, 1.0, 2.0])?]
        }
        "tanh-jacobi" => {
            let Family::TanhJacobi { a, b } = fam else { unreachable!() };
            vec![verify::check_tanh_jacobi_identity(a, b, n, &grid(-4.0, 4.0, 41))?]
        }
        _ => unreachable!("filtered by applicable"),
    })
}

pub fn verify(a: &VerifyArgs) -> Res {
    let spec = family(&a.family)?;
    let n = positive("N", a.n)?;
    let selected: Vec<&str> = if a.check == "all" {
        CHECKS.iter().copied().filter(|c| applicable(&spec, c)).collect()
    } else if !CHECKS.contains(&a.check.as_str()) {
        return Err(Failure::Usage(format!("unknown check `{}`; expected all or one of {}", a.check, CHECKS.join(", "))));
    } else if !applicable(&spec, &a.check) {
        return Err(Failure::Usage(format!("check `{}` does not apply to {}", a.check, a.family)));
    } else {
        vec![a.check.as_str()]
    };
    let mut reports = Vec::new();
    for c in selected {
        reports.extend(run_check(&spec, c, n)?);
    }
    let failed = reports.iter().filter(|r| !r.ok()).count();
    output::json(output::sink(a.out.as_deref())?, "favard.verify", VerifyBody { family: &a.family, n, reports })?;
    if failed > 0 {
        return Err(Failure::Checks(failed));
    }
    Ok(())
}

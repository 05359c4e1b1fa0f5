//! The subcommands. Each reads its parameters, runs the library and fills an
//! [`Outcome`].

use std::path::Path;

use hermite_cs::bargmann::{compose_kernels, kernel_distance, sb_kernel, transform_matrix, unitarity_defect, TransformSpec};
use hermite_cs::entanglement::{alpha_entropy_sweep, factorization_witness, schmidt, Witness, DEFAULT_RANK_TOL};
use hermite_cs::hermite::{basis_eval, AlphaParam, Arity, BasisSpec, Index, Point};
use hermite_cs::quadrature::{gram_matrix, identity_defect, Weight};
use hermite_cs::rkhs::{
    closed_kernel, log_convexity_check, shift_weights, zaremba_partial, KernelSpec, MomentSequence, ShiftConvention,
};
use hermite_cs::states::{
    annihilation_residual, bogoliubov_ops, coherent_state, kept_indices, ladder_ops, resolution_identity_residual,
    squeeze_matrix, squeezed_basis, squeezed_values, standard_cs, zeta_from_xi, CoeffMatrix, MiddleFactor,
    ResidualRows, SqueezeMethod, State, XI_LIMIT,
};
use hermite_cs::{Error, C64};
use nalgebra::DMatrix;
use serde_json::{Map, Value};

use crate::params::{parse_complex, usage, Params, UsageError};
use crate::report::{cell, cplx, cplxs, num, nums, Check, Outcome, Table};

pub enum Failure {
    Usage(UsageError),
    Lib(Error),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

pub type Run = Result<Outcome, Failure>;

/// Name, flags, one-line help.
pub struct Command {
    pub name: &'static str,
    pub about: &'static str,
    pub keys: &'static [&'static str],
    pub run: fn(&mut Params) -> Run,
    /// format used when none is given
    pub csv_default: bool,
}

pub const COMMANDS: &[Command] = &[
    Command {
        name: "eval-basis",
        about: "Evaluate the first n members of a basis family at a point",
        keys: &["family", "alpha", "a", "b", "z", "z1", "z2", "n"],
        run: eval_basis,
        csv_default: false,
    },
    Command {
        name: "kernel",
        about: "Closed-form reproducing kernel K(z, w)",
        keys: &["spec", "alpha", "z", "w", "z1", "z2", "w1", "w2"],
        run: kernel,
        csv_default: false,
    },
    Command {
        name: "zaremba-compare",
        about: "Partial Zaremba sum against the closed-form kernel",
        keys: &["spec", "alpha", "z", "w", "z1", "z2", "w1", "w2", "n", "tol"],
        run: zaremba_compare,
        csv_default: false,
    },
    Command {
        name: "verify-orthogonality",
        about: "Gram matrix of a family under its weight, by quadrature",
        keys: &["family", "alpha", "a", "b", "n", "order", "tol"],
        run: verify_orthogonality,
        csv_default: false,
    },
    Command {
        name: "transform-check",
        about: "Unitarity of a transform's matrix between its two bases",
        keys: &["transform", "alpha", "a", "b", "n", "order", "direction", "tol"],
        run: transform_check,
        csv_default: false,
    },
    Command {
        name: "compose-check",
        about: "Quadrature composition of A and B against the closed-form C kernel",
        keys: &["arity", "alpha", "a", "b", "q", "w", "q1", "q2", "w1", "w2", "order", "tol"],
        run: compose_check,
        csv_default: false,
    },
    Command {
        name: "coherent-state",
        about: "Fock coefficients of the coherent state at a point",
        keys: &["alpha", "z", "z1", "z2", "n", "normalize"],
        run: coherent,
        csv_default: false,
    },
    Command {
        name: "eigen-residual",
        about: "Annihilation residual of a coherent state under its Bogoliubov operators",
        keys: &["alpha", "z", "z1", "z2", "n", "rows", "state", "tol"],
        run: eigen_residual,
        csv_default: false,
    },
    Command {
        name: "squeeze-compare",
        about: "Exact squeeze operator against its disentangled product and closed-form columns",
        keys: &["xi", "n", "arity", "middle", "alpha", "columns", "tol", "column-tol"],
        run: squeeze_compare,
        csv_default: false,
    },
    Command {
        name: "resolution-check",
        about: "Resolution of the identity for the coherent states, by quadrature",
        keys: &["alpha", "n", "order", "arity", "tol"],
        run: resolution_check,
        csv_default: false,
    },
    Command {
        name: "schmidt",
        about: "Schmidt values and entropy of a bipartite coefficient matrix",
        keys: &["input", "alpha", "z1", "z2", "n", "rank-tol", "witness-tol", "min-entropy", "max-entropy"],
        run: schmidt_cmd,
        csv_default: false,
    },
    Command {
        name: "entropy-sweep",
        about: "Entanglement entropy of the bipartite coherent state across alpha",
        keys: &["z1", "z2", "alphas", "n"],
        run: entropy_sweep,
        csv_default: true,
    },
    Command {
        name: "logconvexity",
        about: "Log-convexity diagnostic of a sequence k_n^{-1}",
        keys: &["sequence", "kind", "len", "expect", "shift"],
        run: logconvexity,
        csv_default: false,
    },
    Command {
        name: "limit-scan",
        about: "Distances to the Bargmann limit along increasing alpha",
        keys: &["kind", "alphas", "tol"],
        run: limit_scan,
        csv_default: true,
    },
];

pub fn find(name: &str) -> Option<&'static Command> {
    COMMANDS.iter().find(|c| c.name == name)
}

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn arity(p: &mut Params) -> Result<Arity, UsageError> {
    Ok(if p.choice("arity", "1", &["1", "2"])? == "1" { Arity::One } else { Arity::Two })
}

/// `z`, or `z1` and `z2` when either is given.
fn point(p: &mut Params, one: &str, first: &str, second: &str) -> Result<Point, UsageError> {
    if p.has(first) || p.has(second) {
        if p.has(one) {
            return usage(format!("give either --{one} or --{first}/--{second}, not both"));
        }
        Ok(Point::Two(p.complex_or(first, zero())?, p.complex_or(second, zero())?))
    } else {
        Ok(Point::One(p.complex_or(one, zero())?))
    }
}

fn point_of(p: &mut Params, arity: Arity, one: &str, first: &str, second: &str) -> Result<Point, UsageError> {
    Ok(match arity {
        Arity::One => Point::One(p.complex_or(one, zero())?),
        Arity::Two => Point::Two(p.complex_or(first, zero())?, p.complex_or(second, zero())?),
    })
}

fn point_json(x: Point) -> Value {
    match x {
        Point::One(z) => cplx(z),
        Point::Two(a, b) => cplxs(&[a, b]),
    }
}

const FAMILIES: &[&str] =
    &["monomial1d", "monomial2d", "h1d", "k1d", "h2d", "k2d", "psi1d", "psi2d", "szego", "bergman", "factorial-ratio"];

fn family(p: &mut Params, default: &str) -> Result<BasisSpec, UsageError> {
    let f = p.choice("family", default, FAMILIES)?;
    Ok(match f.as_str() {
        "monomial1d" => BasisSpec::Monomial1D,
        "monomial2d" => BasisSpec::Monomial2D,
        "h1d" => BasisSpec::HolHermiteH1D(p.alpha(0.5)?),
        "k1d" => BasisSpec::HolHermiteK1D(p.alpha(0.5)?),
        "h2d" => BasisSpec::HolHermiteH2D(p.alpha(0.5)?),
        "k2d" => BasisSpec::HolHermiteK2D(p.alpha(0.5)?),
        "psi1d" => BasisSpec::OscillatorPsi1D { a: p.positive("a", 1.0)? },
        "psi2d" => BasisSpec::OscillatorPsi2D { a: p.positive("a", 1.0)?, b: p.positive("b", 1.0)? },
        "szego" => BasisSpec::SzegoDisk,
        "bergman" => BasisSpec::BergmanDisk,
        _ => BasisSpec::FactorialRatio,
    })
}

fn kernel_spec(p: &mut Params) -> Result<KernelSpec, UsageError> {
    let s = p.choice(
        "spec",
        "bargmann1d",
        &["bargmann1d", "bargmann2d", "vanem1d", "vanem2d", "szego", "bergman", "factorial-ratio", "3f2"],
    )?;
    Ok(match s.as_str() {
        "bargmann1d" => KernelSpec::Bargmann1D,
        "bargmann2d" => KernelSpec::Bargmann2D,
        "vanem1d" => KernelSpec::VanEM1D(p.alpha(0.5)?),
        "vanem2d" => KernelSpec::VanEM2D(p.alpha(0.5)?),
        "szego" => KernelSpec::Szego,
        "bergman" => KernelSpec::Bergman,
        _ => KernelSpec::FactorialRatio3F2,
    })
}

fn kernel_points(p: &mut Params, spec: &KernelSpec) -> Result<(Point, Point), UsageError> {
    let x = point_of(p, spec.arity(), "z", "z1", "z2")?;
    let y = point_of(p, spec.arity(), "w", "w1", "w2")?;
    Ok((x, y))
}

fn eval_basis(p: &mut Params) -> Run {
    let spec = family(p, "k1d")?;
    let x = point_of(p, spec.arity(), "z", "z1", "z2")?;
    let n = p.usize_in("n", 8, 1, 201)?;
    let vals = spec.values(n, x)?.values();
    let mut out = Outcome::default();
    out.result("family", Value::from(spec.name()));
    out.result("point", point_json(x));
    let mut t = Table::new(&["m", "n", "re", "im"]);
    match spec.arity() {
        Arity::One => {
            out.result("values", cplxs(&vals));
            for (k, v) in vals.iter().enumerate() {
                t.push(vec![String::new(), k.to_string(), cell(v.re), cell(v.im)]);
            }
        }
        Arity::Two => {
            let rows: Vec<Value> = vals.chunks(n).map(cplxs).collect();
            out.result("values", Value::Array(rows));
            for (k, v) in vals.iter().enumerate() {
                t.push(vec![(k / n).to_string(), (k % n).to_string(), cell(v.re), cell(v.im)]);
            }
        }
    }
    out.table = Some(t);
    Ok(out)
}

fn kernel(p: &mut Params) -> Run {
    let spec = kernel_spec(p)?;
    let (x, y) = kernel_points(p, &spec)?;
    let v = closed_kernel(&spec, x, y)?;
    let mut out = Outcome::default();
    out.result("kernel", Value::from(spec.name()));
    out.result("value", cplx(v));
    Ok(out)
}

fn zaremba_compare(p: &mut Params) -> Run {
    let spec = kernel_spec(p)?;
    let (x, y) = kernel_points(p, &spec)?;
    let n = p.usize_in("n", 80, 1, 201)?;
    let tol = p.positive("tol", 1e-9)?;
    let s = zaremba_partial(&spec.basis(), x, y, n)?;
    let k = closed_kernel(&spec, x, y)?;
    let diff = (s.value - k).norm();
    let mut out = Outcome::default();
    out.result("kernel", Value::from(spec.name()));
    out.result("partial_sum", cplx(s.value));
    out.result("closed_form", cplx(k));
    out.result("abs_diff", num(diff));
    out.result("tail_ratio", num(s.tail_ratio));
    // the factorial-ratio series converges algebraically, so compare relatively
    if spec == KernelSpec::FactorialRatio3F2 {
        out.checks.push(Check::at_most("relative difference", diff / k.norm(), tol));
    } else {
        out.checks.push(Check::at_most("absolute difference", diff, tol));
    }
    Ok(out)
}

fn verify_orthogonality(p: &mut Params) -> Run {
    let spec = family(p, "h1d")?;
    let two = spec.arity() == Arity::Two;
    let n = p.usize_in("n", if two { 4 } else { 10 }, 1, if two { 16 } else { 60 })?;
    let order = p.usize_in("order", if two { 40 } else { 80 }, 2, 400)?;
    let tol = p.positive("tol", if two { 1e-6 } else { 1e-8 })?;
    let weight = Weight::natural_for(&spec)?;
    let g = gram_matrix(&spec, &weight, n, order)?;
    let (off, diag) = identity_defect(&g);
    let mut out = Outcome::default();
    out.result("family", Value::from(spec.name()));
    out.result("dimension", Value::from(g.nrows()));
    out.result("max_off_diagonal", num(off));
    out.result("max_diagonal_defect", num(diag));
    out.result("diagonal", cplxs(&g.diagonal().iter().copied().collect::<Vec<_>>()));
    out.checks.push(Check::at_most("max off-diagonal", off, tol));
    out.checks.push(Check::at_most("max diagonal defect", diag, tol));
    Ok(out)
}

fn transform_spec(p: &mut Params, name: &str) -> Result<TransformSpec, UsageError> {
    let al = |p: &mut Params| p.alpha(0.5);
    Ok(match name {
        "a1" => TransformSpec::A1 { a: p.positive("a", 1.0)? },
        "b1" => TransformSpec::B1(al(p)?),
        "c1" => TransformSpec::C1 { a: p.positive("a", 1.0)?, alpha: al(p)? },
        "c1hat" => TransformSpec::C1Hat { a: p.positive("a", 1.0)?, alpha: al(p)? },
        "a2" => TransformSpec::A2 { a: p.positive("a", 1.0)?, b: p.positive("b", 1.0)? },
        "b2" => TransformSpec::B2(al(p)?),
        "c2" => TransformSpec::C2 { a: p.positive("a", 1.0)?, b: p.positive("b", 1.0)?, alpha: al(p)? },
        _ => TransformSpec::C2Hat { a: p.positive("a", 1.0)?, b: p.positive("b", 1.0)?, alpha: al(p)? },
    })
}

fn transform_check(p: &mut Params) -> Run {
    let name = p.choice("transform", "b1", &["a1", "b1", "c1", "c1hat", "a2", "b2", "c2", "c2hat"])?;
    let spec = transform_spec(p, &name)?;
    let two = spec.arity() == Arity::Two;
    let n = p.usize_in("n", if two { 4 } else { 8 }, 1, if two { 12 } else { 40 })?;
    let order = p.usize_in("order", if two { 8 } else { 80 }, 2, 200)?;
    let forward = p.choice("direction", "forward", &["forward", "backward"])? == "forward";
    let tol = p.positive("tol", 1e-5)?;
    let (first, second) = (spec.first_family(), spec.second_family());
    let (source, target) = if forward { (second, first) } else { (first, second) };
    let m = transform_matrix(&spec, &source, &target, n, order)?;
    let d = unitarity_defect(&m);
    let mut out = Outcome::default();
    out.result("transform", Value::from(spec.name()));
    out.result("source", Value::from(source.name()));
    out.result("target", Value::from(target.name()));
    out.result("dimension", Value::from(m.nrows()));
    out.result("unitarity_defect", num(d));
    out.checks.push(Check::at_most("max |M^H M - I|", d, tol));
    Ok(out)
}

fn compose_check(p: &mut Params) -> Run {
    let arity = arity(p)?;
    let al = p.alpha(0.5)?;
    let a = p.positive("a", 1.0)?;
    let mut out = Outcome::default();
    let mut t = Table::new(&["x", "w", "composed_re", "composed_im", "closed_re", "closed_im", "abs_diff"]);
    let (k1, k2, k3, pairs, order, tol) = match arity {
        Arity::One => {
            let qs = p.f64_list("q", &[-0.5, 0.0, 0.5])?;
            let ws = p.complex_list("w", &[zero(), C64::new(0.4, -0.3), C64::new(-0.2, 0.6)])?;
            let mut pairs = Vec::new();
            for &q in &qs {
                for &w in &ws {
                    pairs.push((Point::One(C64::new(q, 0.0)), Point::One(w)));
                }
            }
            let (order, tol) = (p.usize_in("order", 80, 2, 200)?, p.positive("tol", 1e-8)?);
            (TransformSpec::A1 { a }, TransformSpec::B1(al), TransformSpec::C1 { a, alpha: al }, pairs, order, tol)
        }
        Arity::Two => {
            let b = p.positive("b", 1.0)?;
            let q1 = p.f64_list("q1", &[0.0, 0.4, -0.6, 0.2])?;
            let q2 = p.f64_list("q2", &[0.0, -0.3, 0.1, 0.5])?;
            let w1 = p.complex_list("w1", &[zero(), C64::new(0.2, 0.1), C64::new(0.0, -0.4), C64::new(-0.5, 0.2)])?;
            let w2 = p.complex_list("w2", &[zero(), C64::new(-0.3, 0.25), C64::new(0.3, 0.0), C64::new(0.1, 0.1)])?;
            let k = q1.len();
            if q2.len() != k || w1.len() != k || w2.len() != k {
                return Err(UsageError("--q1, --q2, --w1 and --w2 must have the same length".into()).into());
            }
            let pairs = (0..k)
                .map(|i| (Point::Two(C64::new(q1[i], 0.0), C64::new(q2[i], 0.0)), Point::Two(w1[i], w2[i])))
                .collect();
            let (order, tol) = (p.usize_in("order", 40, 2, 100)?, p.positive("tol", 1e-6)?);
            (TransformSpec::A2 { a, b }, TransformSpec::B2(al), TransformSpec::C2 { a, b, alpha: al }, pairs, order, tol)
        }
    };
    let mut worst = 0.0f64;
    for (x, w) in pairs {
        let v = compose_kernels(&k1, &k2, x, w, order)?;
        let want = sb_kernel(&k3, x, w)?;
        let d = (v - want).norm();
        worst = worst.max(d);
        let label = |pt: Point| match pt {
            Point::One(z) => format!("{z}"),
            Point::Two(a, b) => format!("{a};{b}"),
        };
        t.push(vec![label(x), label(w), cell(v.re), cell(v.im), cell(want.re), cell(want.im), cell(d)]);
    }
    out.result("composite", Value::from(k3.name()));
    out.result("max_abs_diff", num(worst));
    out.checks.push(Check::at_most(format!("{} o {} vs {}", k1.name(), k2.name(), k3.name()), worst, tol));
    out.table = Some(t);
    Ok(out)
}

fn coherent(p: &mut Params) -> Run {
    let al = p.alpha(0.5)?;
    let x = point(p, "z", "z1", "z2")?;
    let n = p.usize_in("n", 12, 2, 200)?;
    let normalize = p.flag("normalize")?;
    let cs = coherent_state(x, al, n, normalize)?;
    let mut out = Outcome::default();
    let mut t = Table::new(&["m", "n", "re", "im"]);
    match &cs.state {
        State::Single(v) => {
            let c: Vec<C64> = v.coeffs.iter().copied().collect();
            for (k, z) in c.iter().enumerate() {
                t.push(vec![String::new(), k.to_string(), cell(z.re), cell(z.im)]);
            }
            out.result("coefficients", cplxs(&c));
        }
        State::Bipartite(m) => {
            let rows: Vec<Value> = (0..n)
                .map(|i| cplxs(&m.coeffs.row(i).iter().copied().collect::<Vec<_>>()))
                .collect();
            for i in 0..n {
                for j in 0..n {
                    let z = m.coeffs[(i, j)];
                    t.push(vec![i.to_string(), j.to_string(), cell(z.re), cell(z.im)]);
                }
            }
            out.result("coefficients", Value::Array(rows));
        }
    }
    out.result("norm", num(cs.state.norm()));
    out.result("tail", num(cs.tail));
    out.warnings.extend(cs.warnings);
    out.table = Some(t);
    Ok(out)
}

fn eigen_residual(p: &mut Params) -> Run {
    let al = p.alpha(0.5)?;
    let x = point(p, "z", "z1", "z2")?;
    let two = matches!(x, Point::Two(..));
    let n = p.usize_in("n", if two { 24 } else { 40 }, 4, if two { 40 } else { 200 })?;
    let rows = if p.choice("rows", "interior", &["interior", "all"])? == "interior" {
        ResidualRows::Interior
    } else {
        ResidualRows::All
    };
    let kind = p.choice("state", "cs", &["cs", "standard"])?;
    let tol = p.positive("tol", if two { 1e-7 } else { 1e-8 })?;
    let mut out = Outcome::default();
    let mut residuals = Map::new();
    match (kind.as_str(), x) {
        ("standard", Point::One(z)) => {
            let (b, _) = ladder_ops(n)?;
            let s = State::Single(standard_cs(z, n)?);
            let r = annihilation_residual(&s, &b, z, rows)?;
            residuals.insert("b".into(), num(r));
            out.checks.push(Check::at_most("b residual", r, tol));
        }
        ("standard", Point::Two(..)) => return Err(UsageError("--state standard takes a single --z".into()).into()),
        (_, Point::One(z)) => {
            let ops = bogoliubov_ops(al, n, Arity::One)?;
            let cs = coherent_state(x, al, n, false)?;
            let r = annihilation_residual(&cs.state, &ops[0], z, rows)?;
            residuals.insert("B-".into(), num(r));
            out.checks.push(Check::at_most("B- residual", r, tol));
            out.warnings.extend(cs.warnings);
        }
        (_, Point::Two(z1, z2)) => {
            let ops = bogoliubov_ops(al, n, Arity::Two)?;
            let cs = coherent_state(x, al, n, false)?;
            let r1 = annihilation_residual(&cs.state, &ops[0], z1, rows)?;
            let r2 = annihilation_residual(&cs.state, &ops[1], z2, rows)?;
            let prod = ops[0].product(&ops[1])?;
            let r12 = annihilation_residual(&cs.state, &prod, z1 * z2, ResidualRows::Interior)?;
            residuals.insert("B1-".into(), num(r1));
            residuals.insert("B2-".into(), num(r2));
            residuals.insert("B1- B2-".into(), num(r12));
            out.checks.push(Check::at_most("B1- residual", r1, tol));
            out.checks.push(Check::at_most("B2- residual", r2, tol));
            out.warnings.extend(cs.warnings);
        }
    }
    out.result("residuals", Value::Object(residuals));
    Ok(out)
}

fn squeeze_compare(p: &mut Params) -> Run {
    let xi = p.complex_or("xi", C64::new(0.3, 0.0))?;
    if !(xi.norm() < XI_LIMIT) {
        return Err(UsageError(format!("--xi: |xi| must be below {XI_LIMIT}, got {}", xi.norm())).into());
    }
    let arity = arity(p)?;
    let two = arity == Arity::Two;
    let n = p.usize_in("n", if two { 16 } else { 30 }, 4, if two { 40 } else { 200 })?;
    let middle = match p.choice("middle", "standard", &["standard", "as-printed"])?.as_str() {
        "standard" => MiddleFactor::Standard,
        _ => MiddleFactor::AsPrinted,
    };
    let columns = p.usize_in("columns", if two { 8 } else { 20 }, 1, n)?;
    let al = p.alpha(0.5)?;
    let tol = p.positive("tol", 1e-8)?;
    let ctol = p.positive("column-tol", 1e-7)?;

    let ex = squeeze_matrix(xi, n, arity, SqueezeMethod::Exact)?;
    let za = squeeze_matrix(xi, n, arity, SqueezeMethod::Zassenhaus(middle))?;
    let keep = kept_indices(arity, n, ResidualRows::Interior);
    let mut agree = 0.0f64;
    for &i in &keep {
        for &j in &keep {
            agree = agree.max((ex.matrix[(i, j)] - za.matrix[(i, j)]).norm());
        }
    }

    let zeta = zeta_from_xi(xi);
    let mono = |k: usize, z: C64| basis_eval(&BasisSpec::Monomial1D, Index::One(k), Point::One(z));
    let mut cols = 0.0f64;
    match arity {
        Arity::One => {
            for z in [C64::new(0.5, 0.2), C64::new(-0.8, 0.4), C64::new(0.0, -1.0)] {
                let want = squeezed_values(columns, Point::One(z), zeta)?;
                let phi: Vec<C64> = (0..n).map(|m| mono(m, z)).collect::<Result<_, _>>()?;
                for (k, w) in want.iter().enumerate() {
                    let got: C64 = (0..n).map(|m| ex.matrix[(m, k)] * phi[m]).sum();
                    cols = cols.max((got - w).norm());
                }
            }
        }
        Arity::Two => {
            let (z1, z2) = (C64::new(0.3, 0.1), C64::new(-0.2, 0.4));
            let want = squeezed_values(columns, Point::Two(z1, z2), zeta)?;
            let p1: Vec<C64> = (0..n).map(|m| mono(m, z1)).collect::<Result<_, _>>()?;
            let p2: Vec<C64> = (0..n).map(|m| mono(m, z2)).collect::<Result<_, _>>()?;
            for m in 0..columns {
                for k in 0..columns {
                    let col = m * n + k;
                    let got: C64 = (0..n * n).map(|r| ex.matrix[(r, col)] * p1[r / n] * p2[r % n]).sum();
                    cols = cols.max((got - want[m * columns + k]).norm());
                }
            }
        }
    }

    let e = C64::new(al.epsilon(), 0.0);
    let (pt, idx, fam) = match arity {
        Arity::One => (Point::One(C64::new(0.7, 0.0)), Index::One(3), BasisSpec::HolHermiteK1D(al)),
        Arity::Two => (Point::Two(C64::new(0.3, 0.0), C64::new(0.0, 0.4)), Index::Two(1, 2), BasisSpec::HolHermiteK2D(al)),
    };
    let ident = (squeezed_basis(idx, pt, e)? - basis_eval(&fam, idx, pt)?).norm();

    let mut out = Outcome::default();
    out.result("zeta", cplx(zeta));
    out.result("exact_vs_product", num(agree));
    out.result("columns_vs_closed_form", num(cols));
    out.result("epsilon_identification", num(ident));
    out.checks.push(Check::at_most("exact vs disentangled, interior block", agree, tol));
    out.checks.push(Check::at_most("columns vs closed form", cols, ctol));
    out.checks.push(Check::at_most("zeta = epsilon(alpha) gives k family", ident, 1e-12));
    Ok(out)
}

fn resolution_check(p: &mut Params) -> Run {
    let al = p.alpha(0.5)?;
    let arity = arity(p)?;
    let two = arity == Arity::Two;
    let n = p.usize_in("n", if two { 4 } else { 8 }, 1, if two { 12 } else { 40 })?;
    let order = p.usize_in("order", if two { 40 } else { 80 }, 2, 200)?;
    let tol = p.positive("tol", if two { 1e-5 } else { 1e-6 })?;
    let r = resolution_identity_residual(al, n, order, arity)?;
    let mut out = Outcome::default();
    out.result("residual", num(r));
    out.checks.push(Check::at_most("max |sum - I|", r, tol));
    Ok(out)
}

/// Whitespace- or comma-separated complex entries, one matrix row per line.
pub fn read_matrix(path: &Path) -> Result<DMatrix<C64>, UsageError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    let mut rows: Vec<Vec<C64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(|ch: char| ch == ',' || ch.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| parse_complex(s).ok_or_else(|| UsageError(format!("{}:{}: bad entry {s:?}", path.display(), i + 1))))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    let n = rows.len();
    if n == 0 {
        return usage(format!("{}: no matrix rows", path.display()));
    }
    if rows.iter().any(|r| r.len() != n) {
        return usage(format!("{}: matrix must be square", path.display()));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn schmidt_cmd(p: &mut Params) -> Run {
    let mut out = Outcome::default();
    let m = match p.string("input") {
        Some(path) => read_matrix(Path::new(&path))?,
        None => {
            let al = p.alpha(0.5)?;
            let z1 = p.complex_or("z1", zero())?;
            let z2 = p.complex_or("z2", zero())?;
            let n = p.usize_in("n", 12, 2, 120)?;
            let cs = coherent_state(Point::Two(z1, z2), al, n, false)?;
            out.warnings.extend(cs.warnings);
            match cs.state {
                State::Bipartite(c) => c.coeffs,
                State::Single(_) => unreachable!("two points give a bipartite state"),
            }
        }
    };
    let rank_tol = p.f64_or("rank-tol", DEFAULT_RANK_TOL)?;
    if rank_tol < 0.0 {
        return Err(UsageError("--rank-tol must be nonnegative".into()).into());
    }
    let wtol = p.f64_or("witness-tol", rank_tol)?;
    let c = CoeffMatrix::new(m)?;
    let r = schmidt(&c, rank_tol)?;
    out.result("singular_values", nums(&r.singular_values));
    out.result("entropy", num(r.entropy));
    out.result("entropy_log2", num(r.entropy_log2));
    out.result("effective_rank", Value::from(r.effective_rank));
    let mut w = Map::new();
    match factorization_witness(&c, wtol)? {
        Witness::Product(u, v) => {
            w.insert("product".into(), Value::from(true));
            w.insert("u".into(), cplxs(&u.coeffs.iter().copied().collect::<Vec<_>>()));
            w.insert("v".into(), cplxs(&v.coeffs.iter().copied().collect::<Vec<_>>()));
        }
        Witness::Entangled { residual } => {
            w.insert("product".into(), Value::from(false));
            w.insert("residual".into(), num(residual));
        }
    }
    out.result("witness", Value::Object(w));
    if p.has("min-entropy") {
        let lo = p.f64_or("min-entropy", 0.0)?;
        out.checks.push(Check::above("entropy", r.entropy, lo));
    }
    if p.has("max-entropy") {
        let hi = p.f64_or("max-entropy", 0.0)?;
        out.checks.push(Check::at_most("entropy", r.entropy, hi));
    }
    Ok(out)
}

fn entropy_sweep(p: &mut Params) -> Run {
    let z1 = p.complex_or("z1", zero())?;
    let z2 = p.complex_or("z2", zero())?;
    let alphas = p.alpha_list("alphas", &[0.3, 0.5, 0.7, 0.9, 0.99])?;
    let n = p.usize_in("n", 12, 8, 120)?;
    let pts = alpha_entropy_sweep(z1, z2, &alphas, n)?;
    let mut out = Outcome::default();
    let mut t = Table::new(&["alpha", "entropy", "entropy_log2", "effective_rank", "tail"]);
    let mut rows = Vec::new();
    for e in &pts {
        t.push(vec![
            cell(e.alpha),
            cell(e.schmidt.entropy),
            cell(e.schmidt.entropy_log2),
            e.schmidt.effective_rank.to_string(),
            cell(e.tail),
        ]);
        let mut m = Map::new();
        m.insert("alpha".into(), num(e.alpha));
        m.insert("entropy".into(), num(e.schmidt.entropy));
        m.insert("entropy_log2".into(), num(e.schmidt.entropy_log2));
        m.insert("effective_rank".into(), Value::from(e.schmidt.effective_rank));
        m.insert("tail".into(), num(e.tail));
        rows.push(Value::Object(m));
        for w in &e.warnings {
            out.warnings.push(format!("alpha={}: {w}", e.alpha));
        }
    }
    out.result("curve", Value::Array(rows));
    if alphas.len() > 1 && alphas.windows(2).all(|w| w[0] < w[1]) {
        let last = pts[pts.len() - 1].schmidt.entropy;
        let others = pts[..pts.len() - 1].iter().map(|e| e.schmidt.entropy).fold(f64::INFINITY, f64::min);
        out.checks.push(Check::holds("final entropy smallest", last < others));
    }
    out.table = Some(t);
    Ok(out)
}

fn factorials(len: usize) -> Vec<f64> {
    let mut v = vec![1.0];
    for k in 1..len {
        let prev = v[k - 1];
        v.push(prev * k as f64);
    }
    v
}

fn logconvexity(p: &mut Params) -> Run {
    let seq = if p.has("sequence") {
        p.f64_list("sequence", &[])?
    } else {
        let kind = p.choice("kind", "factorial", &["factorial", "counterexample"])?;
        match kind.as_str() {
            "factorial" => factorials(p.usize_in("len", 41, 1, 171)?),
            _ => vec![1.0, 10.0, 1.0],
        }
    };
    let expect = p.choice("expect", "pass", &["pass", "fail"])? == "pass";
    let ms = MomentSequence::new(seq.clone())?;
    let r = log_convexity_check(&ms);
    let mut out = Outcome::default();
    out.result("pairs_checked", Value::from(r.pairs_checked));
    out.result("log_convex", Value::from(r.pass));
    let viol: Vec<Value> = r
        .violations
        .iter()
        .map(|v| {
            let mut m = Map::new();
            m.insert("m".into(), Value::from(v.m));
            m.insert("n".into(), Value::from(v.n));
            m.insert("lhs".into(), num(v.lhs));
            m.insert("rhs".into(), num(v.rhs));
            Value::Object(m)
        })
        .collect();
    out.result("violations", Value::Array(viol));
    out.result("note", Value::from(r.note));
    if p.has("shift") {
        let conv = match p.choice("shift", "as-printed", &["as-printed", "shifted"])?.as_str() {
            "as-printed" => ShiftConvention::AsPrinted,
            _ => ShiftConvention::Shifted,
        };
        let k: Vec<f64> = seq.iter().map(|a| 1.0 / a).collect();
        if k.len() >= 2 {
            out.result("shift_weights", nums(&shift_weights(&k, k.len() - 1, conv)?));
        }
    }
    out.checks.push(Check::holds(if expect { "log-convex" } else { "not log-convex" }, r.pass == expect));
    Ok(out)
}

fn limit_scan(p: &mut Params) -> Run {
    let kind = p.choice("kind", "c1hat", &["c1hat", "c2hat", "k1d"])?;
    let alphas = p.alpha_list("alphas", &[0.9, 0.99, 0.999])?;
    let tol = p.positive("tol", 1e-2)?;
    let vals = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let c = C64::new;
    let dist = |a: AlphaParam| -> Result<f64, Error> {
        match kind.as_str() {
            "c1hat" => {
                let mut args = Vec::new();
                for &q in &vals {
                    for &z in &vals {
                        args.push((Point::One(c(q, 0.0)), Point::One(c(z, 0.5 * z))));
                    }
                }
                kernel_distance(&TransformSpec::C1Hat { a: 1.0, alpha: a }, &TransformSpec::A1 { a: 1.0 }, &args)
            }
            "c2hat" => {
                let mut args = Vec::new();
                for &q in &vals {
                    for &z in &vals {
                        args.push((Point::Two(c(q, 0.0), c(-q * 0.5, 0.0)), Point::Two(c(z, 0.3 * z), c(0.2, -z * 0.5))));
                    }
                }
                kernel_distance(
                    &TransformSpec::C2Hat { a: 1.0, b: 1.0, alpha: a },
                    &TransformSpec::A2 { a: 1.0, b: 1.0 },
                    &args,
                )
            }
            _ => {
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let mut d = 0.0f64;
                for &x in &vals {
                    for &y in &vals {
                        let z = Point::One(c(x * s, y * s));
                        let k = BasisSpec::HolHermiteK1D(a).values(9, z)?.values();
                        let phi = BasisSpec::Monomial1D.values(9, z)?.values();
                        for (u, v) in k.iter().zip(&phi) {
                            d = d.max((u - v).norm());
                        }
                    }
                }
                Ok(d)
            }
        }
    };
    let mut d = Vec::new();
    for &a in &alphas {
        d.push(dist(AlphaParam::new(a)?)?);
    }
    let mut out = Outcome::default();
    let mut t = Table::new(&["alpha", "distance"]);
    for (a, x) in alphas.iter().zip(&d) {
        t.push(vec![cell(*a), cell(*x)]);
    }
    out.result("distances", nums(&d));
    if alphas.windows(2).all(|w| w[0] < w[1]) {
        out.checks.push(Check::holds("strictly decreasing", d.windows(2).all(|w| w[1] < w[0])));
    } else {
        out.warnings.push("alphas are not increasing; monotonicity not checked".into());
    }
    out.checks.push(Check::at_most("final distance", d[d.len() - 1], tol));
    out.table = Some(t);
    Ok(out)
}

//! Command-line front-end. [`run`] maps an argument vector to an exit code
//! and the text to print: 0 on success, 1 on a domain error, 2 on a usage
//! error (bad flags, malformed input).

pub mod parse;
pub mod print;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{BivariatePolynomial, Polynomial, RationalFunction};
use crate::algebraic_ode::{
    check_tannery_shape, derivative_table, lift_to_order, tannery_ode, verify_ode_numeric, LinearODE,
};
use crate::dependence::{casoratian, christoffel_analyze, windowed_scan, DependenceReport};
use crate::error::{Error, Result};
use crate::forms::{cauchy_partial_fractions, form_divrem, ruffini_divide, DifferenceForm, GridFunction};
use crate::monodromy::{
    canonical_fundamental_system, companion_difference_equation, local_structure, minimal_relation,
    theta_determinant, ConstantForm, Exponent, FormalLocalSolution, Mode, MonodromySpec, Scalar, Term,
    DEFAULT_TOLERANCE,
};
use crate::operators::{
    check_multiplication_identity, classify_mult_operator, functional_derivative, grevy_determinant,
    nsymb_solution_check, TruncatedOperator,
};
use crate::transforms::{as_theta_form, diff_to_difference, difference_to_diff, DifferentialOperator, ShiftedDifferenceRelation};
use parse::{
    parse_bivariate, parse_complex, parse_form, parse_matrix, parse_operator, parse_poly, parse_ratfunc,
    parse_rational, parse_sequence, parse_window, Entry,
};
use print::{bivariate_to_string, form_to_string, poly_to_string, ratfunc_in, ratfunc_to_string, rational_to_string};

#[derive(Parser, Debug)]
#[command(name = "casorati", version, about = "Exact finite-difference operator calculus")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Exact rational arithmetic (default).
    #[arg(long, global = true, conflicts_with = "numeric")]
    exact: bool,
    /// Double-precision complex arithmetic.
    #[arg(long, global = true)]
    numeric: bool,
    /// Zero tolerance for numeric comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Truncation degree N for operator commands.
    #[arg(long, global = true, default_value_t = 16)]
    trunc: usize,
    /// Inclusive integer window a..b.
    #[arg(long, global = true, allow_hyphen_values = true)]
    window: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Product of two difference forms.
    Mul {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Left division A = Q*B + R.
    Divrem {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Division by T - gamma.
    Ruffini {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        gamma: String,
    },
    /// Apply a form to a sequence at t, or on the whole --window.
    Apply {
        #[arg(allow_hyphen_values = true)]
        form: String,
        #[arg(long, allow_hyphen_values = true)]
        seq: String,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<i64>,
    },
    /// Casoratian det[f_j(m + i)].
    Casoratian {
        #[arg(long = "seq", required = true, allow_hyphen_values = true)]
        seqs: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        at: i64,
    },
    /// Rank and relations of the stacked sample matrix from m0.
    Dependence {
        #[arg(long = "seq", required = true, allow_hyphen_values = true)]
        seqs: Vec<String>,
        #[arg(long, allow_hyphen_values = true)]
        at: i64,
        /// Extra rows beyond the square Christoffel matrix.
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        p: i64,
    },
    /// Sliding-window rank scan over --window.
    Scan {
        #[arg(long = "seq", required = true, allow_hyphen_values = true)]
        seqs: Vec<String>,
        #[arg(long)]
        length: usize,
    },
    /// Companion difference equation of a monodromy matrix.
    Companion {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Minimal constant-coefficient relation of a monodromy matrix.
    Minimal {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Eigenvalues, exponents and Jordan blocks.
    LocalStructure {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// Canonical local solutions x^rho t^k.
    CanonicalSystem {
        #[arg(allow_hyphen_values = true)]
        matrix: String,
    },
    /// det[theta^i y_j] of formal local solutions.
    ThetaDet {
        /// Terms `coeff,exponent,log_power` separated by `;`.
        #[arg(long = "sol", required = true, allow_hyphen_values = true)]
        sols: Vec<String>,
        /// Optional multiplier per solution.
        #[arg(long = "lambda", allow_hyphen_values = true)]
        lambdas: Vec<String>,
    },
    /// Differential operator to difference relation.
    Transform {
        /// Entries `lambda,r,a` separated by `;`.
        #[arg(allow_hyphen_values = true)]
        op: String,
    },
    /// Difference relation to differential operator.
    TransformInverse {
        /// Terms `shift=polynomial` separated by `;`.
        #[arg(allow_hyphen_values = true)]
        rel: String,
    },
    /// Minimal linear ODE annihilating the roots of f(x, y) = 0.
    Tannery {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Whether the ODE has the shape y^(q) + sum Q_k/phi^k y^(q-k).
    TanneryShape {
        #[arg(allow_hyphen_values = true)]
        f: String,
        /// Coefficients c_0;c_1;... (default: computed).
        #[arg(long, allow_hyphen_values = true)]
        ode: Option<String>,
    },
    /// Residual of an ODE on the roots of f at complex samples.
    VerifyNumeric {
        #[arg(allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        ode: Option<String>,
        /// Sample `re` or `re:im`.
        #[arg(long = "x", required = true, allow_hyphen_values = true)]
        xs: Vec<String>,
    },
    /// Functional derivative A(x phi) - x A(phi).
    Funcder {
        #[arg(allow_hyphen_values = true)]
        op: String,
    },
    /// Checks the multiplication identity on polynomial pairs.
    MultCheck {
        #[arg(allow_hyphen_values = true)]
        op: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        xi: String,
        /// Pair `p;q` (default: all reliable monomial pairs).
        #[arg(long = "pair", allow_hyphen_values = true)]
        pairs: Vec<String>,
    },
    /// Canonical form of an operator obeying the multiplication identity.
    Classify {
        #[arg(allow_hyphen_values = true)]
        op: String,
    },
    /// Operator determinant of the family and its functional derivatives.
    Grevy {
        #[arg(required = true)]
        ops: Vec<String>,
    },
    /// Candidate substitutions for sum lambda_k A^(n-k) = 0.
    NsymbCheck {
        #[arg(long = "lambda", required = true, allow_hyphen_values = true)]
        lambdas: Vec<String>,
        #[arg(long = "candidate", required = true, allow_hyphen_values = true)]
        candidates: Vec<String>,
    },
    /// Partial fractions of 1/F(x).
    CauchyPf {
        #[arg(allow_hyphen_values = true)]
        f: String,
    },
    /// Parse and print in canonical form.
    Parse {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// ratfunc, form, bivariate or sequence (default: by variables).
        #[arg(long = "as", allow_hyphen_values = true)]
        kind: Option<String>,
    },
    /// Randomized consistency checks.
    SelfTest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

/// Text and JSON renderings of one result.
struct Output {
    text: String,
    json: Value,
}

impl Output {
    fn new(text: impl Into<String>, json: Value) -> Self {
        Self { text: text.into(), json }
    }
}

fn q_str(r: &BigRational) -> String {
    rational_to_string(r)
}

fn is_usage(e: &Error) -> bool {
    matches!(e, Error::Syntax { .. } | Error::Invalid(_) | Error::TooLarge(_))
}

/// Runs one invocation. `argv[0]` is the program name.
pub fn run<I, S>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let wants_json = argv.iter().any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return (0, e.to_string());
            }
            if wants_json {
                let v = json!({"error": {"code": "usage", "message": e.kind().to_string()}});
                return (2, format!("{v}\n"));
            }
            return (2, e.to_string());
        }
    };
    match dispatch(&cli) {
        Ok(out) => {
            if cli.global.json {
                (0, format!("{}\n", out.json))
            } else {
                let mut t = out.text;
                if !t.ends_with('\n') {
                    t.push('\n');
                }
                (0, t)
            }
        }
        Err(e) => {
            let code = if is_usage(&e) { 2 } else { 1 };
            if cli.global.json {
                (code, format!("{}\n", json!({"error": {"code": e.code(), "message": e.to_string()}})))
            } else {
                (code, format!("error[{}]: {e}\n", e.code()))
            }
        }
    }
}

fn mode(g: &Global) -> Mode {
    if g.numeric {
        Mode::Numeric
    } else {
        Mode::Exact
    }
}

fn window(g: &Global) -> Result<Option<(i64, i64)>> {
    g.window.as_deref().map(parse_window).transpose()
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let g = &cli.global;
    match &cli.cmd {
        Cmd::Mul { a, b } => {
            let p = &parse_form(a)? * &parse_form(b)?;
            let s = form_to_string(&p);
            Ok(Output::new(s.clone(), json!({"result": s})))
        }
        Cmd::Divrem { a, b } => {
            let (qt, r) = form_divrem(&parse_form(a)?, &parse_form(b)?)?;
            let (qs, rs) = (form_to_string(&qt), form_to_string(&r));
            Ok(Output::new(format!("quotient: {qs}\nremainder: {rs}"), json!({"quotient": qs, "remainder": rs})))
        }
        Cmd::Ruffini { a, gamma } => {
            let (qt, r) = ruffini_divide(&parse_form(a)?, &parse_ratfunc(gamma)?);
            let (qs, rs) = (form_to_string(&qt), ratfunc_to_string(&r));
            Ok(Output::new(format!("quotient: {qs}\nremainder: {rs}"), json!({"quotient": qs, "remainder": rs})))
        }
        Cmd::Apply { form, seq, at } => cmd_apply(g, form, seq, *at),
        Cmd::Casoratian { seqs, at } => {
            let grids = sample_all(seqs, *at, *at + seqs.len() as i64 - 1)?;
            let v = casoratian(&grids, *at)?;
            Ok(Output::new(q_str(&v), json!({"value": q_str(&v)})))
        }
        Cmd::Dependence { seqs, at, p } => {
            let hi = *at + seqs.len() as i64 - 1 + (*p).max(0);
            let grids = sample_all(seqs, *at, hi)?;
            let r = christoffel_analyze(&grids, *at, *p)?;
            Ok(Output::new(report_text(&r), report_json(&r)))
        }
        Cmd::Scan { seqs, length } => {
            let (lo, hi) = window(g)?.ok_or_else(|| Error::Invalid("scan needs --window a..b".into()))?;
            let grids = sample_all(seqs, lo, hi)?;
            let reps = windowed_scan(&grids, (lo, hi), *length)?;
            let text = reps.iter().map(report_text).collect::<Vec<_>>().join("\n");
            Ok(Output::new(text, Value::Array(reps.iter().map(report_json).collect())))
        }
        Cmd::Companion { matrix } => {
            let c = companion_difference_equation(&monodromy(g, matrix)?);
            Ok(constant_form_output(&c))
        }
        Cmd::Minimal { matrix } => Ok(constant_form_output(&minimal_relation(&monodromy(g, matrix)?))),
        Cmd::LocalStructure { matrix } => {
            let ls = local_structure(&monodromy(g, matrix)?)?;
            let mut lines = Vec::new();
            let mut blocks = Vec::new();
            for b in &ls.blocks {
                lines.push(format!("eigenvalue {}: exponent {}, jordan {:?}", b.eigenvalue, b.exponent, b.jordan_sizes));
                blocks.push(json!({
                    "eigenvalue": b.eigenvalue.to_string(),
                    "exponent": b.exponent.to_string(),
                    "jordan_sizes": b.jordan_sizes,
                }));
            }
            Ok(Output::new(lines.join("\n"), json!({"blocks": blocks})))
        }
        Cmd::CanonicalSystem { matrix } => {
            let sys = canonical_fundamental_system(&monodromy(g, matrix)?)?;
            let items: Vec<String> = sys.iter().map(ToString::to_string).collect();
            Ok(Output::new(items.join("\n"), json!({"solutions": items})))
        }
        Cmd::ThetaDet { sols, lambdas } => {
            let sols: Vec<FormalLocalSolution> = sols.iter().map(|s| parse_solution(s)).collect::<Result<_>>()?;
            let lams: Vec<Scalar> = lambdas.iter().map(|s| parse_scalar(s)).collect::<Result<_>>()?;
            let d = theta_determinant(&sols, (!lams.is_empty()).then_some(lams.as_slice()))?;
            let zero = d.is_zero(g.tolerance);
            Ok(Output::new(
                format!("{d}\nzero: {zero}"),
                json!({"determinant": d.to_string(), "max_abs_coeff": d.max_abs_coeff(), "zero": zero}),
            ))
        }
        Cmd::Transform { op } => {
            let rel = diff_to_difference(&parse_diff_op(op)?);
            let (form, offset) = as_theta_form(&rel);
            Ok(Output::new(
                format!("{rel}\nform: {} (x -> x+{offset})", form_to_string(&form)),
                json!({"relation": rel.to_string(), "form": form_to_string(&form), "offset": offset}),
            ))
        }
        Cmd::TransformInverse { rel } => {
            let rel = parse_relation(rel)?;
            let op = difference_to_diff(&rel)
                .ok_or_else(|| Error::PreconditionViolated("relation is not the image of a differential operator".into()))?;
            Ok(Output::new(op.to_string(), json!({"operator": op.to_string()})))
        }
        Cmd::Tannery { f } => {
            let f = parse_bivariate(f)?;
            let ode = tannery_ode(&f)?;
            let m = f.degree_y().unwrap_or(0);
            let lifted = lift_to_order(&ode, m);
            let phi = derivative_table(&f, m)?.phi;
            Ok(Output::new(
                format!("{ode}\norder: {}\nphi: {}\norder {m}: {lifted}", ode.order().unwrap_or(0), ratfunc_to_string(&phi)),
                json!({
                    "order": ode.order(),
                    "coeffs": ode_coeffs(&ode),
                    "phi": ratfunc_to_string(&phi),
                    "order_m": {"order": lifted.order(), "coeffs": ode_coeffs(&lifted)},
                }),
            ))
        }
        Cmd::TanneryShape { f, ode } => {
            let f = parse_bivariate(f)?;
            let phi = derivative_table(&f, f.degree_y().unwrap_or(0).max(1))?.phi;
            let ode = match ode {
                Some(s) => parse_ode(s)?,
                None => tannery_ode(&f)?,
            };
            let verdict = check_tannery_shape(&ode, &phi);
            let lead = ratfunc_to_string(&ode.leading());
            Ok(Output::new(
                format!("{ode}\nleading: {lead}\nshape: {verdict}"),
                json!({"ode": ode_coeffs(&ode), "leading": lead, "phi": ratfunc_to_string(&phi), "shape": verdict}),
            ))
        }
        Cmd::VerifyNumeric { f, ode, xs } => {
            let f = parse_bivariate(f)?;
            let ode = match ode {
                Some(s) => parse_ode(s)?,
                None => tannery_ode(&f)?,
            };
            let xs: Vec<Complex64> = xs.iter().map(|s| parse_complex(s)).collect::<Result<_>>()?;
            let r = verify_ode_numeric(&f, &ode, &xs)?;
            Ok(Output::new(format!("max residual: {r:e}"), json!({"max_residual": r})))
        }
        Cmd::Funcder { op } => {
            let d = functional_derivative(&parse_operator(op, g.trunc)?)?;
            Ok(operator_output(&d))
        }
        Cmd::MultCheck { op, alpha, xi, pairs } => {
            let a = parse_operator(op, g.trunc)?;
            let pairs = if pairs.is_empty() {
                let r = a.reliable();
                let mut v = Vec::new();
                for i in 0..r {
                    for j in i..r.saturating_sub(i) {
                        let mono = |k| Polynomial::monomial(BigRational::from_integer(1.into()), k);
                        v.push((mono(i), mono(j)));
                    }
                }
                v
            } else {
                pairs.iter().map(|s| parse_pair(s)).collect::<Result<_>>()?
            };
            let ok = check_multiplication_identity(&a, &parse_ratfunc(alpha)?, &parse_ratfunc(xi)?, &pairs)?;
            Ok(Output::new(ok.to_string(), json!({"holds": ok, "pairs": pairs.len()})))
        }
        Cmd::Classify { op } => {
            let spec = classify_mult_operator(&parse_operator(op, g.trunc)?)?;
            let form = spec.form().name();
            Ok(Output::new(
                format!("{form}: {spec}"),
                json!({
                    "form": form,
                    "alpha": ratfunc_to_string(&spec.alpha),
                    "xi": ratfunc_to_string(&spec.xi),
                    "xi1": ratfunc_to_string(&spec.xi1),
                    "mu": spec.mu.as_ref().map(poly_to_string),
                }),
            ))
        }
        Cmd::Grevy { ops } => {
            let ops: Vec<TruncatedOperator> = ops.iter().map(|s| parse_operator(s, g.trunc)).collect::<Result<_>>()?;
            Ok(operator_output(&grevy_determinant(&ops)?))
        }
        Cmd::NsymbCheck { lambdas, candidates } => {
            let lams: Vec<RationalFunction> = lambdas.iter().map(|s| parse_ratfunc(s)).collect::<Result<_>>()?;
            let cands: Vec<Polynomial> = candidates.iter().map(|s| parse_poly(s)).collect::<Result<_>>()?;
            let reps = nsymb_solution_check(&lams, &cands, g.trunc)?;
            let text = reps
                .iter()
                .map(|r| format!("{}: annihilates {} (reliable degree {})", poly_to_string(&r.candidate), r.annihilates, r.reliable as i64 - 1))
                .collect::<Vec<_>>()
                .join("\n");
            let js: Vec<Value> = reps
                .iter()
                .map(|r| json!({"candidate": poly_to_string(&r.candidate), "annihilates": r.annihilates, "reliable": r.reliable}))
                .collect();
            Ok(Output::new(text, Value::Array(js)))
        }
        Cmd::CauchyPf { f } => {
            let pf = cauchy_partial_fractions(&parse_poly(f)?)?;
            let mut lines = Vec::new();
            let mut js = Vec::new();
            for p in &pf {
                let res: Vec<String> = p.residues.iter().map(q_str).collect();
                lines.push(format!("root {} (multiplicity {}): {}", q_str(&p.root), p.multiplicity, res.join(", ")));
                js.push(json!({"root": q_str(&p.root), "multiplicity": p.multiplicity, "residues": res}));
            }
            Ok(Output::new(lines.join("\n"), Value::Array(js)))
        }
        Cmd::Parse { expr, kind } => {
            let kind = kind.clone().unwrap_or_else(|| detect_kind(expr).to_string());
            let s = canonical(expr, &kind)?;
            Ok(Output::new(s.clone(), json!({"kind": kind, "result": s})))
        }
        Cmd::SelfTest { seed, cases } => self_test(*seed, *cases),
    }
}

fn detect_kind(expr: &str) -> &'static str {
    if expr.contains('T') {
        "form"
    } else if expr.contains('y') {
        "bivariate"
    } else if expr.contains('t') {
        "sequence"
    } else {
        "ratfunc"
    }
}

/// Canonical text of `expr` read as `kind`.
pub fn canonical(expr: &str, kind: &str) -> Result<String> {
    Ok(match kind {
        "form" => form_to_string(&parse_form(expr)?),
        "bivariate" => bivariate_to_string(&parse_bivariate(expr)?),
        "sequence" => ratfunc_in(&parse_sequence(expr)?, "t"),
        "ratfunc" => ratfunc_to_string(&parse_ratfunc(expr)?),
        k => return Err(Error::Invalid(format!("unknown kind '{k}'"))),
    })
}

fn sample(src: &str, lo: i64, hi: i64) -> Result<GridFunction> {
    let r = parse_sequence(src)?;
    let vals = (lo..=hi)
        .map(|t| r.eval(&BigRational::from_integer(t.into())))
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(lo, vals)
}

fn sample_all(seqs: &[String], lo: i64, hi: i64) -> Result<Vec<GridFunction>> {
    seqs.iter().map(|s| sample(s, lo, hi)).collect()
}

fn cmd_apply(g: &Global, form: &str, seq: &str, at: Option<i64>) -> Result<Output> {
    let a = parse_form(form)?;
    let k = a.order().unwrap_or(0) as i64;
    match (at, window(g)?) {
        (Some(t), _) => {
            let v = a.apply(&sample(seq, t, t + k)?, t)?;
            Ok(Output::new(q_str(&v), json!({"value": q_str(&v)})))
        }
        (None, Some((lo, hi))) => {
            let grid = sample(seq, lo, hi + k)?;
            let vals: Vec<String> = (lo..=hi).map(|t| a.apply(&grid, t).map(|v| q_str(&v))).collect::<Result<_>>()?;
            let text = (lo..=hi).zip(&vals).map(|(t, v)| format!("{t}: {v}")).collect::<Vec<_>>().join("\n");
            Ok(Output::new(text, json!({"window": [lo, hi], "values": vals})))
        }
        (None, None) => Err(Error::Invalid("apply needs --at t or --window a..b".into())),
    }
}

fn report_text(r: &DependenceReport) -> String {
    let rels: Vec<String> =
        r.relations.iter().map(|v| format!("({})", v.iter().map(q_str).collect::<Vec<_>>().join(", "))).collect();
    format!(
        "window {}..{}: rank {}, case {}, relations [{}]",
        r.window.0,
        r.window.1,
        r.rank,
        r.case.name(),
        rels.join(", ")
    )
}

fn report_json(r: &DependenceReport) -> Value {
    json!({
        "window": [r.window.0, r.window.1],
        "rank": r.rank,
        "case": r.case.name(),
        "relations": r.relations.iter().map(|v| v.iter().map(q_str).collect::<Vec<_>>()).collect::<Vec<_>>(),
    })
}

fn monodromy(g: &Global, src: &str) -> Result<MonodromySpec> {
    let m = parse_matrix(src)?;
    let exact = m.iter().flatten().all(|e| matches!(e, Entry::Exact(_)));
    let scalars: Vec<Vec<Scalar>> = m
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|e| match e {
                    Entry::Exact(q) => Scalar::Exact(q),
                    Entry::Numeric(z) => Scalar::Numeric(z),
                })
                .collect()
        })
        .collect();
    let md = match mode(g) {
        Mode::Exact if !exact && g.exact => {
            return Err(Error::Invalid("--exact needs rational entries".into()));
        }
        Mode::Exact if exact => Mode::Exact,
        _ => Mode::Numeric,
    };
    MonodromySpec::new(scalars, md, g.tolerance)
}

fn constant_form_output(c: &ConstantForm) -> Output {
    let coeffs: Vec<String> = c.coeffs.iter().map(ToString::to_string).collect();
    let text = match c.to_difference_form() {
        Some(f) => form_to_string(&f),
        None => c
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .map(|(k, s)| format!("({s})*T^{k}"))
            .collect::<Vec<_>>()
            .join(" + "),
    };
    Output::new(text.clone(), json!({"form": text, "order": c.order(), "coeffs": coeffs}))
}

fn operator_output(op: &TruncatedOperator) -> Output {
    let cols: Vec<String> = (0..=op.truncation()).map(|j| poly_to_string(op.column(j))).collect();
    Output::new(
        op.to_string(),
        json!({
            "label": op.label(),
            "trunc": op.truncation(),
            "reliable_degree": op.reliable_degree(),
            "columns": cols,
            "zero_on_reliable": op.is_zero_on_reliable(),
        }),
    )
}

fn ode_coeffs(ode: &LinearODE) -> Vec<String> {
    ode.coeffs().iter().map(ratfunc_to_string).collect()
}

fn parse_ode(src: &str) -> Result<LinearODE> {
    let cs = src.split(';').map(parse_ratfunc).collect::<Result<Vec<_>>>()?;
    Ok(LinearODE::new(cs))
}

fn parse_pair(src: &str) -> Result<(Polynomial, Polynomial)> {
    let (a, b) = src.split_once(';').ok_or_else(|| Error::Invalid(format!("'{src}' is not a pair p;q")))?;
    Ok((parse_poly(a)?, parse_poly(b)?))
}

fn parse_scalar(src: &str) -> Result<Scalar> {
    let s = src.trim();
    if s.contains(':') || s.contains('.') {
        parse_complex(s).map(Scalar::Numeric)
    } else {
        parse_rational(s).map(Scalar::Exact)
    }
}

/// Terms `coeff,exponent,log_power` separated by `;`. A rational exponent
/// stays exact; `re:im` makes it numeric.
pub fn parse_solution(src: &str) -> Result<FormalLocalSolution> {
    let terms = src
        .split(';')
        .map(|t| {
            let parts: Vec<&str> = t.split(',').collect();
            let [c, e, k] = parts.as_slice() else {
                return Err(Error::Invalid(format!("'{t}' is not a term coeff,exponent,log_power")));
            };
            let coeff = parse_scalar(c)?;
            let exponent = match parse_scalar(e)? {
                Scalar::Exact(r) => Exponent::rational(r),
                Scalar::Numeric(z) => Exponent::Numeric(z),
            };
            let log_power = k.trim().parse().map_err(|_| Error::Invalid(format!("'{k}' is not a log power")))?;
            Ok(Term { exponent, log_power, coeff })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FormalLocalSolution::from_terms(terms))
}

/// Entries `lambda,r,a` separated by `;`.
pub fn parse_diff_op(src: &str) -> Result<DifferentialOperator> {
    let entries = src
        .split(';')
        .map(|t| {
            let parts: Vec<&str> = t.split(',').collect();
            let [l, r, a] = parts.as_slice() else {
                return Err(Error::Invalid(format!("'{t}' is not an entry lambda,r,a")));
            };
            let bad = |s: &str| Error::Invalid(format!("'{s}' is not a nonnegative integer"));
            let l: u32 = l.trim().parse().map_err(|_| bad(l))?;
            let r: u32 = r.trim().parse().map_err(|_| bad(r))?;
            Ok((l, r, parse_rational(a)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DifferentialOperator::from_entries(entries))
}

/// Terms `shift=polynomial` separated by `;`.
pub fn parse_relation(src: &str) -> Result<ShiftedDifferenceRelation> {
    let terms = src
        .split(';')
        .map(|t| {
            let (s, p) = t.split_once('=').ok_or_else(|| Error::Invalid(format!("'{t}' is not a term shift=poly")))?;
            let s: i64 = s.trim().parse().map_err(|_| Error::Invalid(format!("'{s}' is not a shift")))?;
            Ok((s, parse_poly(p)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ShiftedDifferenceRelation::from_terms(terms))
}

fn random_ratfunc(rng: &mut ChaCha8Rng) -> RationalFunction {
    let mut poly = |deg: usize| Polynomial::from_ints(&(0..=deg).map(|_| rng.gen_range(-5..=5)).collect::<Vec<_>>());
    let num = poly(2);
    let den = poly(1);
    if den.is_zero() {
        RationalFunction::from_poly(num)
    } else {
        RationalFunction::new(num, den).expect("nonzero denominator")
    }
}

fn random_form(rng: &mut ChaCha8Rng, order: usize) -> DifferenceForm {
    let mut cs: Vec<RationalFunction> = (0..=order).map(|_| random_ratfunc(rng)).collect();
    if cs[order].is_zero() {
        cs[order] = RationalFunction::one();
    }
    DifferenceForm::new(cs)
}

/// Division round trips and print/parse round trips on random forms.
fn self_test(seed: u64, cases: usize) -> Result<Output> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let (oa, ob) = (rng.gen_range(0..=4), rng.gen_range(0..=2));
        let a = random_form(&mut rng, oa);
        let b = random_form(&mut rng, ob);
        let (qt, r) = form_divrem(&a, &b)?;
        if &(&qt * &b) + &r != a || r.order().is_some_and(|o| Some(o) >= b.order()) {
            failures.push(format!("case {i}: division"));
        }
        if parse_form(&form_to_string(&a))? != a {
            failures.push(format!("case {i}: round trip"));
        }
        let f = BivariatePolynomial::new(vec![random_ratfunc(&mut rng), random_ratfunc(&mut rng), RationalFunction::one()]);
        if parse_bivariate(&bivariate_to_string(&f))? != f {
            failures.push(format!("case {i}: bivariate round trip"));
        }
    }
    let ok = failures.is_empty();
    let text = if ok { format!("ok: {cases} cases, seed {seed}") } else { failures.join("\n") };
    if ok {
        Ok(Output::new(text, json!({"ok": true, "cases": cases, "seed": seed})))
    } else {
        Err(Error::PreconditionViolated(text))
    }
}

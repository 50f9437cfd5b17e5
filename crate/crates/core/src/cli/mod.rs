//! Command-line front end. `run` is the whole program minus process I/O.

pub mod config;
pub mod report;

use std::time::Instant;

use clap::{Parser, Subcommand};
use num_rational::BigRational;
use serde_json::json;

use crate::catalog::{self, Example};
use crate::expr::number::{fmt_rational, parse_rational};
use crate::expr::{evaluate_many, Expr, GaussRational, TriState, ZeroTester};
use crate::invariants::{invariant_names, DerivedInvariants, InvariantFrame};
use crate::mobility::{classify, MobilityReport};
use crate::oracle::{bracket_vanishes, integral_space_dimension, AnsatzSpec};
use crate::symplectic::{is_first_integral, MomentaPolynomial};

pub use config::{ConfigError, Loaded, MetricConfig};
pub use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONCLUSIVE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "liouville",
    version,
    about = "Integrals of 2D geodesic flows from curvature invariants"
)]
struct Cli {
    /// Add wall-clock timing to the report (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Values of the invariants at a point.
    Invariants {
        config: String,
        #[arg(long, default_value_t = 5)]
        order: usize,
        /// `x,y` as rationals; defaults to the centre of the box.
        #[arg(long)]
        at: Option<String>,
    },
    /// Numbers of linear and quadratic integrals.
    Classify { config: String },
    /// Checks a momenta polynomial read from a file of `i j coefficient` lines.
    Verify { config: String, integral: String },
    /// Oracle lower bound on the number of degree-n integrals.
    Dimension {
        config: String,
        #[arg(long)]
        degree: usize,
        /// e.g. `x=-2..2,y=0..4,degree=6,max=2000`
        #[arg(long)]
        ansatz: Option<String>,
    },
    /// The built-in example catalog.
    Examples {
        #[command(subcommand)]
        action: Option<ExampleAction>,
    },
}

#[derive(Subcommand, Debug)]
enum ExampleAction {
    List,
    Run {
        name: Option<String>,
        #[arg(long)]
        all: bool,
    },
}

/// Text for stdout and stderr plus the exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn report(r: &Report, code: i32) -> Self {
        Outcome {
            stdout: r.render(),
            stderr: String::new(),
            code,
        }
    }

    fn input_error(msg: impl ToString) -> Self {
        Outcome {
            stdout: String::new(),
            stderr: format!("error: {}\n", msg.to_string()),
            code: EXIT_INPUT,
        }
    }
}

pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    stdout: text,
                    stderr: String::new(),
                    code,
                }
            } else {
                Outcome {
                    stdout: String::new(),
                    stderr: text,
                    code,
                }
            };
        }
    };
    let start = Instant::now();
    let res = match cli.cmd {
        Cmd::Invariants { config, order, at } => cmd_invariants(&config, order, at.as_deref()),
        Cmd::Classify { config } => cmd_classify(&config),
        Cmd::Verify { config, integral } => cmd_verify(&config, &integral),
        Cmd::Dimension {
            config,
            degree,
            ansatz,
        } => cmd_dimension(&config, degree, ansatz.as_deref()),
        Cmd::Examples { action } => match action {
            None | Some(ExampleAction::List) => Ok((cmd_examples_list(), EXIT_OK)),
            Some(ExampleAction::Run { all: true, .. }) => Ok(cmd_examples_all()),
            Some(ExampleAction::Run { name: Some(n), .. }) => cmd_example(&n),
            Some(ExampleAction::Run {
                name: None,
                all: false,
            }) => Err("examples run needs a name or --all".to_string()),
        },
    };
    match res {
        Ok((mut r, code)) => {
            if cli.timing {
                r.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            Outcome::report(&r, code)
        }
        Err(msg) => Outcome::input_error(msg),
    }
}

fn load(path: &str) -> Result<Loaded, String> {
    MetricConfig::from_file(path)
        .and_then(MetricConfig::load)
        .map_err(|e| e.to_string())
}

fn echo_input(r: &mut Report, l: &Loaded) {
    let g = &l.metric;
    r.input("coords", g.coord_names().join(","));
    r.input("g11", &g.g11);
    r.input("g12", &g.g12);
    r.input("g22", &g.g22);
    for (k, v) in &g.params {
        r.input(&format!("param.{k}"), v);
    }
    r.input("orientation", g.orientation);
    let b = &l.domain.bx;
    r.input(
        "box",
        format!(
            "[{}, {}] x [{}, {}]",
            fmt_rational(&b.x.0),
            fmt_rational(&b.x.1),
            fmt_rational(&b.y.0),
            fmt_rational(&b.y.1)
        ),
    );
    let p = &l.domain.policy;
    r.input("mode", mode_text(p.mode));
    r.input("samples", p.samples);
    r.seed = Some(p.seed);
}

fn mode_text(m: crate::expr::Mode) -> String {
    match m {
        crate::expr::Mode::Exact => "exact".into(),
        crate::expr::Mode::Float { prec } => format!("float {prec}"),
    }
}

fn parse_point(s: &str) -> Result<(BigRational, BigRational), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("point `{s}` is not `x,y`"))?;
    let p = |t: &str| parse_rational(t).ok_or_else(|| format!("`{t}` is not a rational number"));
    Ok((p(a)?, p(b)?))
}

fn cmd_invariants(path: &str, order: usize, at: Option<&str>) -> Result<(Report, i32), String> {
    let l = load(path)?;
    let frame = InvariantFrame::new(&l.metric, order).map_err(|e| e.to_string())?;
    let (px, py) = match at {
        Some(s) => parse_point(s)?,
        None => {
            let two = BigRational::from_integer(2.into());
            let b = &l.domain.bx;
            ((&b.x.0 + &b.x.1) / &two, (&b.y.0 + &b.y.1) / &two)
        }
    };
    let mut names = invariant_names(order);
    let mut exprs: Vec<Expr> = names
        .iter()
        .map(|n| frame.get(n).cloned().expect("frame has all names"))
        .collect();
    if order == 7 {
        let d = DerivedInvariants::new(&frame).map_err(|e| e.to_string())?;
        names.extend(["J4".to_string(), "J5".to_string()]);
        exprs.extend([d.j4.clone(), d.j5.clone()]);
        if let Some(v) = &d.v {
            names.extend((1..=4).map(|k| format!("V{k}")));
            exprs.extend(v.iter().cloned());
        }
    }
    let coords = l.metric.coord_names();
    let mut assign: Vec<(&str, GaussRational)> = vec![
        (coords[0], GaussRational::real(px.clone())),
        (coords[1], GaussRational::real(py.clone())),
    ];
    assign.extend(l.metric.params.iter().map(|(n, v)| (n.as_str(), v.clone())));
    let values = evaluate_many(&exprs, coords, &assign, l.domain.policy.mode);

    let mut r = Report::new("invariants");
    echo_input(&mut r, &l);
    r.input("order", order);
    r.input(
        "at",
        format!("({}, {})", fmt_rational(&px), fmt_rational(&py)),
    );
    let mut failed = false;
    for (n, v) in names.iter().zip(values) {
        match v {
            Ok(s) => r.result(n, s),
            Err(e) => {
                failed = true;
                r.result(n, format!("undefined ({e})"));
            }
        }
    }
    Ok((r, if failed { EXIT_INCONCLUSIVE } else { EXIT_OK }))
}

fn trace_lines(m: &MobilityReport) -> Vec<String> {
    m.trace
        .iter()
        .map(|t| {
            let mut s = format!("{}: {}", t.condition, t.state);
            if let Some(w) = &t.witness {
                s += &format!(" at {w}");
            }
            s += &format!(" (admissible {}, rejected {})", t.admissible, t.rejected);
            for n in &t.notes {
                s += &format!("; {n}");
            }
            s
        })
        .collect()
}

fn dim_text(d: Option<u8>) -> String {
    d.map_or("inconclusive".into(), |v| v.to_string())
}

fn mobility_into(r: &mut Report, m: &MobilityReport) {
    r.result("dim_J1", dim_text(m.dim_j1));
    r.result("dim_J2", dim_text(m.dim_j2));
    r.result("confidence", &m.confidence);
    r.section("trace", trace_lines(m));
    r.data = serde_json::to_value(m).expect("report serializes");
}

fn cmd_classify(path: &str) -> Result<(Report, i32), String> {
    let (r, m) = classify_loaded(&load(path)?)?;
    Ok((
        r,
        if m.is_conclusive() {
            EXIT_OK
        } else {
            EXIT_INCONCLUSIVE
        },
    ))
}

/// The `classify` report for an already loaded config.
pub fn classify_loaded(l: &Loaded) -> Result<(Report, MobilityReport), String> {
    let m = classify(&l.metric, &l.domain).map_err(|e| e.to_string())?;
    let mut r = Report::new("classify");
    echo_input(&mut r, l);
    mobility_into(&mut r, &m);
    Ok((r, m))
}

/// Reads `i j coefficient` lines; `#` starts a comment.
pub fn parse_integral(
    text: &str,
    ctx: &crate::expr::ParseContext,
) -> Result<MomentaPolynomial, String> {
    let mut entries = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.splitn(3, char::is_whitespace);
        let (Some(i), Some(j), Some(c)) = (it.next(), it.next(), it.next()) else {
            return Err(format!("line {}: expected `i j coefficient`", ln + 1));
        };
        let i: usize = i
            .parse()
            .map_err(|_| format!("line {}: bad exponent `{i}`", ln + 1))?;
        let j: usize = j
            .trim()
            .parse()
            .map_err(|_| format!("line {}: bad exponent `{j}`", ln + 1))?;
        let c = Expr::parse(c.trim(), ctx).map_err(|e| format!("line {}: {e}", ln + 1))?;
        entries.push((i, j, c));
    }
    let n = entries
        .first()
        .map(|e| e.0 + e.1)
        .ok_or("integral file has no terms")?;
    let mut p = MomentaPolynomial::zero(n);
    for (i, j, c) in entries {
        if i + j != n {
            return Err(format!("term p_x^{i} p_y^{j} is not of degree {n}"));
        }
        p.coeffs[j] = &p.coeffs[j] + c;
    }
    Ok(p)
}

fn cmd_verify(path: &str, integral: &str) -> Result<(Report, i32), String> {
    let l = load(path)?;
    let text =
        std::fs::read_to_string(integral).map_err(|e| format!("cannot read {integral}: {e}"))?;
    let names: Vec<&str> = l.metric.params.iter().map(|(n, _)| n.as_str()).collect();
    let [x, y] = l.metric.coord_names();
    let ctx = crate::expr::ParseContext::new(x, y, &names);
    let f = parse_integral(&text, &ctx)?;
    let mut t = ZeroTester::new(
        l.domain.policy.clone(),
        l.metric.coord_names(),
        l.metric.params.clone(),
        &l.domain.bx,
    );
    let state = is_first_integral(&l.metric, &f, &mut t);
    let mut r = Report::new("verify");
    echo_input(&mut r, &l);
    r.input("integral", &f);
    r.result("degree", f.degree());
    r.result(
        "first_integral",
        match state {
            TriState::Zero => "yes",
            TriState::Nonzero => "no",
            TriState::Undecided => "undecided",
        },
    );
    r.data = json!({ "entries": f.to_entries(), "state": state.to_string() });
    Ok((
        r,
        if state == TriState::Undecided {
            EXIT_INCONCLUSIVE
        } else {
            EXIT_OK
        },
    ))
}

/// `x=a..b,y=a..b,degree=d,max=m`, each part optional.
pub fn parse_ansatz(s: &str, base: AnsatzSpec) -> Result<AnsatzSpec, String> {
    let mut spec = base;
    let range = |v: &str| -> Result<(i32, i32), String> {
        let (a, b) = v
            .split_once("..")
            .ok_or_else(|| format!("range `{v}` is not `a..b`"))?;
        let p = |t: &str| {
            t.trim()
                .parse::<i32>()
                .map_err(|_| format!("bad integer `{t}`"))
        };
        Ok((p(a)?, p(b)?))
    };
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| format!("ansatz part `{part}` is not key=value"))?;
        match k.trim() {
            "x" => spec.x_range = range(v)?,
            "y" => spec.y_range = range(v)?,
            "degree" => {
                spec.total_degree = Some(v.trim().parse().map_err(|_| format!("bad degree `{v}`"))?)
            }
            "max" => spec.max_basis = v.trim().parse().map_err(|_| format!("bad max `{v}`"))?,
            other => return Err(format!("unknown ansatz key `{other}`")),
        }
    }
    Ok(spec)
}

fn cmd_dimension(path: &str, degree: usize, ansatz: Option<&str>) -> Result<(Report, i32), String> {
    let l = load(path)?;
    let mut spec = l.raw.ansatz(degree);
    if let Some(a) = ansatz {
        spec = parse_ansatz(a, spec)?;
    }
    let d = integral_space_dimension(&l.metric, degree, &spec).map_err(|e| e.to_string())?;
    let mut r = Report::new("dimension");
    echo_input(&mut r, &l);
    r.input("degree", degree);
    r.input("ansatz", format!("{spec:?}"));
    r.result("dimension", d.dimension);
    r.result("matrix", format!("{} x {}", d.rows, d.cols));
    r.result("rank", d.rank);
    r.section("basis", d.basis.iter().map(|b| b.to_string()).collect());
    r.data = json!({
        "dimension": d.dimension,
        "rows": d.rows,
        "cols": d.cols,
        "rank": d.rank,
        "ansatz": spec,
        "basis": d.basis.iter().map(|b| b.to_entries()).collect::<Vec<_>>(),
    });
    Ok((r, EXIT_OK))
}

const G0_INTEGRALS: &str = "g0-integrals";

fn cmd_examples_list() -> Report {
    let mut r = Report::new("examples list");
    let mut lines: Vec<String> = catalog::catalog()
        .iter()
        .map(|e| {
            format!(
                "{}: {} (dim_J1 {}, dim_J2 {})",
                e.name, e.summary, e.expected.0, e.expected.1
            )
        })
        .collect();
    lines.push(format!(
        "{G0_INTEGRALS}: the four quadratic integrals of g0 and their relations"
    ));
    r.section("examples", lines);
    r
}

fn run_metric_example(e: &Example, r: &mut Report) -> Result<bool, String> {
    let m = classify(&e.metric(), &e.domain()).map_err(|err| err.to_string())?;
    let got = m.verdict();
    let ok_class = got == (Some(e.expected.0), Some(e.expected.1));
    r.result(
        &format!("{}.classify", e.name),
        format!(
            "dim_J1 {}, dim_J2 {} (expected {}, {}): {}",
            dim_text(got.0),
            dim_text(got.1),
            e.expected.0,
            e.expected.1,
            if ok_class { "ok" } else { "MISMATCH" }
        ),
    );
    let mut ok = ok_class;
    for o in &e.oracle {
        let d = integral_space_dimension(&e.metric(), o.degree, &o.spec)
            .map_err(|err| err.to_string())?;
        let pass = d.dimension == o.expected;
        ok &= pass;
        r.result(
            &format!("{}.oracle.n{}", e.name, o.degree),
            format!(
                "{} (expected {}): {}",
                d.dimension,
                o.expected,
                if pass { "ok" } else { "MISMATCH" }
            ),
        );
    }
    r.section(&format!("trace {}", e.name), trace_lines(&m));
    Ok(ok)
}

fn run_g0_integrals(r: &mut Report) -> Result<bool, String> {
    let g0 = catalog::g0_integrals();
    let mut ok = true;
    for (name, f) in [
        ("H", &g0.h),
        ("K^2", &g0.k.pow(2)),
        ("F", &g0.f),
        ("G", &g0.g),
    ] {
        let pass = bracket_vanishes(&g0.metric, f).map_err(|e| e.to_string())?;
        ok &= pass;
        r.result(
            &format!("integral {name}"),
            if pass { "verified" } else { "FAILED" },
        );
    }
    for (name, res) in g0.relations() {
        let mut pass = true;
        for c in &res.coeffs {
            pass &= crate::expr::to_ratfunc(c, &["x", "y"])
                .map_err(|e| e.to_string())?
                .is_zero();
        }
        ok &= pass;
        r.result(
            &format!("relation {name}"),
            if pass { "confirmed" } else { "FAILED" },
        );
    }
    Ok(ok)
}

fn cmd_example(name: &str) -> Result<(Report, i32), String> {
    let mut r = Report::new("examples run");
    r.input("name", name);
    let ok = if name == G0_INTEGRALS {
        run_g0_integrals(&mut r)?
    } else {
        let e = catalog::find(name).ok_or_else(|| format!("no example named `{name}`"))?;
        run_metric_example(&e, &mut r)?
    };
    r.result("status", if ok { "pass" } else { "fail" });
    Ok((r, if ok { EXIT_OK } else { EXIT_INCONCLUSIVE }))
}

fn cmd_examples_all() -> (Report, i32) {
    let mut r = Report::new("examples run --all");
    let mut all = true;
    let mut ok = run_g0_integrals(&mut r).unwrap_or(false);
    all &= ok;
    let mut summary = vec![format!(
        "{G0_INTEGRALS}: {}",
        if ok { "pass" } else { "fail" }
    )];
    for e in catalog::catalog() {
        ok = match run_metric_example(&e, &mut r) {
            Ok(v) => v,
            Err(msg) => {
                r.result(&format!("{}.error", e.name), msg);
                false
            }
        };
        all &= ok;
        summary.push(format!("{}: {}", e.name, if ok { "pass" } else { "fail" }));
    }
    r.section("summary", summary);
    r.result("status", if all { "pass" } else { "fail" });
    (r, if all { EXIT_OK } else { EXIT_INCONCLUSIVE })
}

use std::io::Write;
use std::process::Command;

use liouville_core::cli::{
    self, parse_ansatz, parse_integral, MetricConfig, Outcome, EXIT_INCONCLUSIVE, EXIT_INPUT,
    EXIT_OK,
};
use liouville_core::expr::ParseContext;
use liouville_core::oracle::AnsatzSpec;

fn config(name: &str) -> String {
    format!("{}/../../configs/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Outcome {
    cli::run(std::iter::once("liouville").chain(args.iter().copied()))
}

fn temp_config(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn result_line<'a>(out: &'a Outcome, key: &str) -> &'a str {
    let prefix = format!("{key}: ");
    out.stdout
        .lines()
        .find_map(|l| l.strip_prefix(prefix.as_str()))
        .unwrap_or_else(|| panic!("no `{key}` in\n{}", out.stdout))
}

fn json(out: &Outcome) -> serde_json::Value {
    let line = out
        .stdout
        .lines()
        .skip_while(|l| *l != "[json]")
        .nth(1)
        .unwrap();
    serde_json::from_str(line).unwrap()
}

#[test]
fn classify_reports() {
    let out = run(&["classify", &config("g0.toml")]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(out
        .stdout
        .starts_with("liouville-report 1\ncommand: classify\n"));
    assert_eq!(result_line(&out, "dim_J1"), "1");
    assert_eq!(result_line(&out, "dim_J2"), "4");
    assert!(out.stdout.contains("[trace]\n"));
    let j = json(&out);
    assert_eq!(j["result"]["dim_J2"], "4");
    assert_eq!(j["format"], 1);

    let out = run(&["classify", &config("beta-family.toml")]);
    assert_eq!(
        (result_line(&out, "dim_J1"), result_line(&out, "dim_J2")),
        ("1", "4")
    );
    let out = run(&["classify", &config("liouville.toml")]);
    assert_eq!(
        (result_line(&out, "dim_J1"), result_line(&out, "dim_J2")),
        ("0", "2")
    );
}

#[test]
fn output_is_byte_identical_across_runs() {
    let a = run(&["classify", &config("liouville.toml")]);
    let b = run(&["classify", &config("liouville.toml")]);
    assert_eq!(a, b);
    let t = run(&["--timing", "classify", &config("flat.toml")]);
    assert!(t.stdout.contains("timing_ms: "));
    assert!(!run(&["classify", &config("flat.toml")])
        .stdout
        .contains("timing_ms"));
}

#[test]
fn float_mode_and_precision_variable() {
    let out = run(&["classify", &config("sphere-float.toml")]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(
        (result_line(&out, "dim_J1"), result_line(&out, "dim_J2")),
        ("3", "6")
    );
    assert_eq!(result_line(&out, "mode"), "float 256");
    // the config has no precision key, so the variable decides
    let cfg = temp_config("g11 = \"1 + x^2\"\ng22 = \"1 + x^2\"\nmode = \"float\"\n");
    let p = cfg.path().to_str().unwrap();
    let bin = env!("CARGO_BIN_EXE_liouville");
    let o = Command::new(bin)
        .args(["classify", p])
        .env("LIOUVILLE_PRECISION", "96")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .contains("mode: float 96\n"));
    let o = Command::new(bin)
        .args(["classify", p])
        .env_remove("LIOUVILLE_PRECISION")
        .output()
        .unwrap();
    assert!(String::from_utf8(o.stdout)
        .unwrap()
        .contains("mode: float 256\n"));
}

#[test]
fn invariants_at_a_point() {
    let out = run(&[
        "invariants",
        &config("g0.toml"),
        "--order",
        "4",
        "--at",
        "1,0",
    ]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(result_line(&out, "at"), "(1, 0)");
    for n in ["I2", "I3", "I4a", "I4b", "I4c"] {
        result_line(&out, n);
    }
    assert_eq!(result_line(&out, "I2"), "1/2");
    assert_eq!(result_line(&out, "I4b"), "0");
    let out = run(&["invariants", &config("liouville.toml"), "--order", "7"]);
    assert_eq!(out.code, EXIT_OK);
    for n in ["J4", "J5", "V1", "V4"] {
        result_line(&out, n);
    }
    // K is undefined where the conformal factor vanishes
    let out = run(&[
        "invariants",
        &config("g0.toml"),
        "--order",
        "3",
        "--at",
        "0,0",
    ]);
    assert_eq!(out.code, EXIT_INCONCLUSIVE);
    assert!(result_line(&out, "I2").starts_with("undefined"));
}

#[test]
fn verify_integrals() {
    let out = run(&["verify", &config("g0.toml"), &config("g0-G.integral")]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(result_line(&out, "degree"), "2");
    assert_eq!(result_line(&out, "first_integral"), "yes");
    let f = temp_config("1 0 1\n");
    let out = run(&["verify", &config("g0.toml"), f.path().to_str().unwrap()]);
    assert_eq!(result_line(&out, "first_integral"), "no");
    let out = run(&["verify", &config("flat.toml"), f.path().to_str().unwrap()]);
    assert_eq!(result_line(&out, "first_integral"), "yes");
}

#[test]
fn dimension_command() {
    let out = run(&["dimension", &config("g0.toml"), "--degree", "2"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert_eq!(result_line(&out, "dimension"), "4");
    let j = json(&out);
    assert_eq!(j["data"]["basis"].as_array().unwrap().len(), 4);
    let out = run(&[
        "dimension",
        &config("flat.toml"),
        "--degree",
        "2",
        "--ansatz",
        "x=0..2,y=0..2,degree=2",
    ]);
    assert_eq!(result_line(&out, "dimension"), "6");
    let out = run(&["dimension", &config("flat.toml"), "--degree", "9"]);
    assert_eq!(out.code, EXIT_INPUT);
    let out = run(&[
        "dimension",
        &config("flat.toml"),
        "--degree",
        "2",
        "--ansatz",
        "max=3",
    ]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("cap"));
}

#[test]
fn examples_commands() {
    let out = run(&["examples", "list"]);
    assert_eq!(out.code, EXIT_OK);
    for name in [
        "flat",
        "sphere",
        "g0",
        "beta-3",
        "q2-a2-b0-c0",
        "g0-integrals",
    ] {
        assert!(
            out.stdout
                .lines()
                .any(|l| l.starts_with(&format!("{name}: "))),
            "{name}"
        );
    }
    assert_eq!(run(&["examples"]).stdout, out.stdout);
    let out = run(&["examples", "run", "g0-integrals"]);
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(result_line(&out, "relation {G,F} = 16K^3"), "confirmed");
    assert_eq!(result_line(&out, "status"), "pass");
    let out = run(&["examples", "run", "beta-6"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    assert!(result_line(&out, "beta-6.classify").ends_with("ok"));
    assert_eq!(run(&["examples", "run", "nope"]).code, EXIT_INPUT);
    assert_eq!(run(&["examples", "run"]).code, EXIT_INPUT);
}

#[test]
fn examples_run_all_passes() {
    let out = run(&["examples", "run", "--all"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    assert_eq!(result_line(&out, "status"), "pass");
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(run(&["classify", "/nonexistent.toml"]).code, EXIT_INPUT);
    assert_eq!(run(&["frobnicate"]).code, EXIT_INPUT);
    assert_eq!(run(&["--help"]).code, EXIT_OK);
    for bad in [
        "g11 = \"1 +\"\ng22 = \"1\"\n",
        "g11 = \"1\"\ng22 = \"1\"\nmode = \"fast\"\n",
        "g11 = \"1\"\ng22 = \"1\"\ncolour = 3\n",
        "g11 = \"1\"\ng22 = \"1\"\nbox = [\"2\", \"1\", \"0\", \"1\"]\n",
        "g11 = \"1\"\ng22 = \"1\"\norientation = 2\n",
        "g11 = \"1\"\ng22 = \"1\"\ncoords = [\"u\", \"u\"]\n",
        "g11 = \"1\"\ng22 = \"1\"\nsamples = 0\n",
        "g11 = \"a*x\"\ng22 = \"1\"\n",
        "g11 = \"1\"\n",
    ] {
        let f = temp_config(bad);
        let out = run(&["classify", f.path().to_str().unwrap()]);
        assert_eq!(out.code, EXIT_INPUT, "{bad}");
        assert!(out.stderr.starts_with("error: "), "{bad}");
        assert!(out.stdout.is_empty());
    }
    let f = temp_config("2 0 1\n1 0 x\n");
    let out = run(&["verify", &config("flat.toml"), f.path().to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT);
}

#[test]
fn config_options() {
    let c = MetricConfig::from_toml("coords = [\"u\", \"v\"]\ng11 = \"u\"\ng22 = \"u\"\nseed = 5\nsamples = 7\n[params]\nk = \"2/3\"\n").unwrap();
    let l = c.load().unwrap();
    assert_eq!(l.metric.coord_names(), ["u", "v"]);
    assert_eq!(l.domain.policy.seed, 5);
    assert_eq!(l.domain.policy.samples, 7);
    assert_eq!(l.metric.params.len(), 1);
    let c =
        MetricConfig::from_toml("g11 = \"x\"\ng22 = \"x\"\nansatz_x = [-1, 3]\nansatz_max = 50\n")
            .unwrap();
    let a = c.ansatz(2);
    assert_eq!((a.x_range, a.y_range, a.max_basis), ((-1, 3), (0, 4), 50));
    let out = run(&[
        "classify",
        &temp_config("coords = [\"u\", \"v\"]\ng11 = \"u\"\ng22 = \"u\"\n")
            .path()
            .to_string_lossy(),
    ]);
    assert_eq!(result_line(&out, "dim_J2"), "4");
}

#[test]
fn integral_file_parser() {
    let ctx = ParseContext::default();
    let f = parse_integral(
        "# comment\n2 0 y^2/x\n1 1 -4*y  # trailing\n\n0 2 x\n0 2 1\n",
        &ctx,
    )
    .unwrap();
    assert_eq!(f.degree(), 2);
    assert_eq!(f.to_entries().len(), 3);
    assert!(parse_integral("", &ctx).is_err());
    assert!(parse_integral("1 x\n", &ctx).is_err());
    assert!(parse_integral("a 0 1\n", &ctx).is_err());
    assert!(parse_integral("1 0 (\n", &ctx)
        .unwrap_err()
        .starts_with("line 1"));
    assert!(parse_integral("1 0 1\n2 0 1\n", &ctx).is_err());
}

#[test]
fn ansatz_parser() {
    let base = AnsatzSpec::polynomial(2);
    let s = parse_ansatz("x=-2..2, y=0..4, max=99", base.clone()).unwrap();
    assert_eq!(
        (s.x_range, s.y_range, s.total_degree, s.max_basis),
        ((-2, 2), (0, 4), Some(2), 99)
    );
    assert_eq!(parse_ansatz("", base.clone()).unwrap(), base);
    assert!(parse_ansatz("x=1", base.clone()).is_err());
    assert!(parse_ansatz("z=0..1", base.clone()).is_err());
    assert!(parse_ansatz("degree=q", base.clone()).is_err());
    assert!(parse_ansatz("x", base).is_err());
}

use std::io::Write;
use std::process::{Command, Output};

use tempfile::NamedTempFile;

fn config(text: &str) -> NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn mgfm(args: &[&str], cfg: Option<&NamedTempFile>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mgfm"));
    cmd.args(args);
    if let Some(c) = cfg {
        cmd.arg("--config").arg(c.path());
    }
    cmd.output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Parses CSV output into header and rows.
fn table(o: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(o.stdout.as_slice());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<String> {
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].clone()).collect()
}

fn num(s: &str) -> f64 {
    s.parse().unwrap()
}

fn assert_single_line_error(o: &Output, code: i32) {
    assert_eq!(o.status.code(), Some(code), "stderr: {}", stderr(o));
    let err = stderr(o);
    let lines: Vec<&str> = err.lines().filter(|l| l.starts_with("error")).collect();
    assert_eq!(lines.len(), 1, "{err}");
}

#[test]
fn nig_fourth_moment() {
    let cfg = config("version = 1\n[model]\nfixture = \"nig\"\n[moment]\norders = [4.0]\n");
    let o = mgfm(&["moment"], Some(&cfg));
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = table(&o);
    let v = num(&column(&h, &rows, "value")[0]);
    assert!((v - 52.0 / 9.0).abs() < 1e-8 * 52.0 / 9.0, "{v}");
    assert!(h.contains(&"time_us".to_string()));
    assert!(h.contains(&"err_estimate".to_string()));
}

#[test]
fn exponential_third_integer_moment() {
    let cfg = config(
        "version = 1\n[model]\nfamily = \"exponential\"\nlambda = 1.0\n[moment]\norders = [3.0]\nkinds = [\"integer\"]\n",
    );
    let o = mgfm(&["moment", "--no-timing"], Some(&cfg));
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = table(&o);
    assert!((num(&column(&h, &rows, "value")[0]) - 6.0).abs() < 1e-9);
}

#[test]
fn order_below_minus_one_is_a_domain_error() {
    let cfg = config("version = 1\n[model]\nfamily = \"normal\"\nmu = 0.0\nsigma = 1.0\n[moment]\norders = [-1.5]\n");
    let o = mgfm(&["moment"], Some(&cfg));
    assert_single_line_error(&o, 2);
    assert!(stderr(&o).contains("Re(r) > -1 required"), "{}", stderr(&o));
}

#[test]
fn moment_rows_cover_the_grid() {
    let cfg = config(
        "version = 1\n[model]\nfamily = \"normal\"\nmu = 0.3\nsigma = 1.0\n[moment]\norders = [1.0, 2.0]\nshifts = [0.0, 1.0]\nkinds = [\"absolute\", \"integer\"]\n",
    );
    let o = mgfm(&["moment", "--no-timing", "--format", "json"], Some(&cfg));
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["command"], "moment");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    // E[(X - 1)^2] = 1 + 0.7^2 under both kinds
    for r in rows.iter().filter(|r| r["r"] == 2.0 && r["xi"] == 1.0) {
        assert!((r["value"].as_f64().unwrap() - 1.49).abs() < 1e-9, "{r}");
    }
}

#[test]
fn arp_stationary_mean_is_flat() {
    let cfg = config(
        "version = 1\n[model]\nfixture = \"arp-stationary\"\n[term_structure]\norders = [1.0]\nhorizons = [10, 3, 1, 2, 4, 5, 6, 7, 8, 9]\n",
    );
    let o = mgfm(&["term-structure"], Some(&cfg));
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = table(&o);
    assert_eq!(h, ["H", "r", "value", "err_estimate", "error"]);
    let hs: Vec<f64> = column(&h, &rows, "H").iter().map(|s| num(s)).collect();
    assert_eq!(hs, (1..=10).map(f64::from).collect::<Vec<_>>());
    let mean = 0.1548 / (1.0 - 0.7473 - 0.2043);
    for v in column(&h, &rows, "value") {
        assert!((num(&v) - mean).abs() < 1e-8 * mean, "{v} vs {mean}");
    }
}

#[test]
fn hng_summary_mode() {
    let cfg = config(
        "version = 1\n[model]\nfixture = \"hng\"\n[term_structure]\nhorizons = [21, 63, 126]\nsummary = true\n",
    );
    let o = mgfm(&["term-structure"], Some(&cfg));
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = table(&o);
    assert_eq!(h, ["H", "mean", "stdev", "skew", "kurt", "error"]);
    assert_eq!(rows.len(), 3);
    for r in &rows {
        let stdev = num(&r[2]);
        let kurt = num(&r[4]);
        assert!(stdev > 0.0 && kurt > 0.0, "{r:?}");
        assert!(r[5].is_empty());
    }
}

#[test]
fn empty_horizons_exit_2() {
    let cfg = config("version = 1\n[model]\nfixture = \"arp\"\n[term_structure]\norders = [1.0]\nhorizons = []\n");
    assert_single_line_error(&mgfm(&["term-structure"], Some(&cfg)), 2);
}

#[test]
fn term_structure_needs_dynamic_model() {
    let cfg = config("version = 1\n[model]\nfixture = \"nig\"\n[term_structure]\norders = [1.0]\nhorizons = [1]\n");
    assert_single_line_error(&mgfm(&["term-structure"], Some(&cfg)), 2);
}

#[test]
fn normal_risk_measures() {
    let cfg = config(
        "version = 1\n[model]\nfamily = \"normal\"\nmu = 0.0\nsigma = 1.0\n[risk]\nalphas = [0.05, 0.5]\n",
    );
    let o = mgfm(&["risk"], Some(&cfg));
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = table(&o);
    let q: Vec<f64> = column(&h, &rows, "quantile").iter().map(|s| num(s)).collect();
    let es: Vec<f64> = column(&h, &rows, "expected_shortfall").iter().map(|s| num(s)).collect();
    assert!((q[0] + 1.6448536269514722).abs() < 1e-5, "{}", q[0]);
    assert!((es[0] - 2.0627128075074257).abs() < 1e-5, "{}", es[0]);
    assert!(q[1].abs() < 1e-5, "{}", q[1]);
    assert!((es[1] - 0.7978845608028654).abs() < 1e-5, "{}", es[1]);
}

#[test]
fn risk_level_out_of_range_exit_2() {
    for alpha in ["0.0", "1.0", "1.5", "-0.1"] {
        let cfg = config(&format!(
            "version = 1\n[model]\nfamily = \"normal\"\nmu = 0.0\nsigma = 1.0\n[risk]\nalphas = [{alpha}]\n"
        ));
        assert_single_line_error(&mgfm(&["risk"], Some(&cfg)), 2);
    }
}

#[test]
fn validate_default_fixtures_pass() {
    let o = mgfm(&["validate"], None);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    let rows = v["rows"].as_array().unwrap();
    for suite in ["s-invariance", "theorem-agreement", "reciprocal-gamma", "vanishing-integral", "monte-carlo"] {
        assert!(rows.iter().any(|r| r["suite"] == suite), "missing suite {suite}");
    }
    assert!(rows.iter().all(|r| r["passed"] == true));
}

#[test]
fn validate_looser_tolerance_still_passes() {
    let cfg = config("version = 1\n[model]\nfixture = \"nig-light\"\n[validate]\ntolerance = 1e-2\nmonte_carlo = false\n");
    let o = mgfm(&["validate"], Some(&cfg));
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["rows"].as_array().unwrap().iter().any(|r| r["case"].as_str().unwrap().starts_with("config")));
}

#[test]
fn validate_impossible_tolerance_exit_4() {
    let cfg = config("version = 1\n[validate]\ntolerance = 1e-30\nmonte_carlo = false\n");
    let o = mgfm(&["validate"], Some(&cfg));
    assert_single_line_error(&o, 4);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], false);
}

#[test]
fn validate_corrupted_model_is_a_parameter_error() {
    let cfg = config(
        "version = 1\n[model]\nfamily = \"nig\"\nloc = 0.0\nscale = 1.0\ntail = 1.0\nasym = 2.0\n[validate]\nmonte_carlo = false\n",
    );
    let o = mgfm(&["validate"], Some(&cfg));
    assert_single_line_error(&o, 2);
    assert!(stderr(&o).contains("parameter"), "{}", stderr(&o));
}

#[test]
fn bench_reports_all_methods() {
    let cfg = config(
        "version = 1\n[bench]\norders = [2.0, 4.0, 0.5]\nrepetitions = 5\nwarmup = 1\nsim_draws = 20000\nsim_repetitions = 1\n",
    );
    let o = mgfm(&["bench"], Some(&cfg));
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = table(&o);
    assert_eq!(rows.len(), 9);
    let methods = column(&h, &rows, "method");
    for m in ["cmgf", "density", "simulation"] {
        assert_eq!(methods.iter().filter(|x| *x == m).count(), 3);
    }
    let errs = column(&h, &rows, "abs_error");
    let orders = column(&h, &rows, "r");
    for (e, r) in errs.iter().zip(&orders) {
        // no closed-form truth for r = 0.5
        assert_eq!(e.is_empty(), num(r) == 0.5, "r={r} err={e:?}");
    }
}

#[test]
fn bench_zero_repetitions_exit_2() {
    let cfg = config("version = 1\n[bench]\nrepetitions = 0\n");
    assert_single_line_error(&mgfm(&["bench"], Some(&cfg)), 2);
}

#[test]
fn bench_rejects_non_nig_models() {
    let cfg = config("version = 1\n[model]\nfamily = \"exponential\"\nlambda = 1.0\n[bench]\nrepetitions = 1\n");
    assert_single_line_error(&mgfm(&["bench"], Some(&cfg)), 2);
}

#[test]
fn identical_runs_are_byte_identical() {
    let cfg = config(
        "version = 1\nseed = 7\n[model]\nfixture = \"harg\"\n[term_structure]\norders = [0.5, 1.0]\nhorizons = [1, 30]\n",
    );
    for fmt in ["csv", "json"] {
        let a = mgfm(&["term-structure", "--format", fmt], Some(&cfg));
        let b = mgfm(&["term-structure", "--format", fmt], Some(&cfg));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
    let cfg = config("version = 1\n[model]\nfixture = \"nig\"\n[moment]\norders = [0.5, 1.0, 3.0]\n");
    let a = mgfm(&["moment", "--no-timing"], Some(&cfg));
    let b = mgfm(&["moment", "--no-timing"], Some(&cfg));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_file_and_flags() {
    let cfg = config("version = 1\n[model]\nfamily = \"exponential\"\nlambda = 2.0\n[moment]\norders = [1.0, 2.0]\n");
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.json");
    let o = mgfm(
        &["moment", "--format", "json", "--output", out.to_str().unwrap(), "--abs-tol", "1e-12", "--rel-tol", "1e-10", "--s", "0.5", "--threads", "1"],
        Some(&cfg),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[0]["abscissa"], 0.5);
    assert!((rows[1]["value"].as_f64().unwrap() - 0.5).abs() < 1e-10);
}

#[test]
fn config_errors_exit_2() {
    let unknown = config("version = 1\n[model]\nfamily = \"exponential\"\nlambda = 1.0\nbogus = 1\n[moment]\norders = [1.0]\n");
    let o = mgfm(&["moment"], Some(&unknown));
    assert_single_line_error(&o, 2);
    assert!(stderr(&o).contains("bogus"));

    let top = config("version = 1\ncolour = \"red\"\n");
    assert_single_line_error(&mgfm(&["validate"], Some(&top)), 2);

    let version = config("version = 2\n");
    assert_single_line_error(&mgfm(&["validate"], Some(&version)), 2);

    let fixture = config("version = 1\n[model]\nfixture = \"nope\"\n[moment]\norders = [1.0]\n");
    assert_single_line_error(&mgfm(&["moment"], Some(&fixture)), 2);

    assert_single_line_error(&mgfm(&["moment"], None), 2);
    let missing = mgfm(&["moment", "--config", "/nonexistent/run.toml"], None);
    assert_single_line_error(&missing, 2);
}

#[test]
fn fixture_overrides_apply() {
    let cfg = config(
        "version = 1\n[model]\nfixture = \"arp\"\nlambda_next = 2.0\n[term_structure]\norders = [1.0]\nhorizons = [1]\n",
    );
    let o = mgfm(&["term-structure"], Some(&cfg));
    assert!(o.status.success(), "{}", stderr(&o));
    let (h, rows) = table(&o);
    let v = num(&column(&h, &rows, "value")[0]);
    assert!((v - 2.0).abs() < 1e-9, "{v}");
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use growth_optimal::io::{self, CurveMeta};
use growth_optimal::{
    believed_curve, growth_optimal_payoff, implied_density, make_grid, PricingTerms, WingExtrapolation,
};
use tempfile::TempDir;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_growth-optimal"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = cli(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Rows of a CSV with a header, parsed as numbers.
fn rows(csv: &str) -> (String, Vec<Vec<f64>>) {
    let mut lines = csv.lines();
    let header = lines.next().unwrap().to_string();
    let body = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, body)
}

#[test]
fn flat_curve_with_skew_view_is_bit_exact_against_the_library() {
    let curve = data("flat20.csv");
    let view = data("skew05.json");
    let args = ["payoff", "--curve", p(&curve), "--view", p(&view)];
    let first = ok(&args);
    assert_eq!(first, ok(&args));

    let meta: CurveMeta = io::load_json(&data("flat20.json")).unwrap();
    let market = io::load_curve::<f64>(&curve, &meta, WingExtrapolation::Flat).unwrap();
    let views = io::views_from_json::<f64>(&io::read_to_string(&view).unwrap()).unwrap();
    let grid = make_grid(30.0, 300.0, 801).unwrap();
    let m = implied_density(&market, &grid).unwrap();
    let b = implied_density(&believed_curve(&market, &views).unwrap(), &grid).unwrap();
    let f = growth_optimal_payoff(&m, &b, &PricingTerms::new(meta.discount_factor, 0.0, 1.0).unwrap()).unwrap();

    let (header, body) = rows(&first);
    assert_eq!(header, "x,m,b,f");
    assert_eq!(body.len(), 801);
    for (i, row) in body.iter().enumerate() {
        assert_eq!(row[0].to_bits(), grid.points()[i].to_bits());
        assert_eq!(row[1].to_bits(), m.mass()[i].to_bits());
        assert_eq!(row[2].to_bits(), b.mass()[i].to_bits());
        assert_eq!(row[3].to_bits(), f.values()[i].to_bits());
    }
    // a flat curve has no skew to scale
    assert!(body.iter().all(|r| r[1] == r[2]));
}

#[test]
fn payoff_rows_increase_in_x() {
    let out = ok(&["payoff", "--curve", p(&data("skew_curve.csv")), "--view", p(&data("views_composed.json"))]);
    let (_, body) = rows(&out);
    assert!(body.windows(2).all(|w| w[0][0] < w[1][0]));
    assert!(body.iter().all(|r| r[3] >= 0.0));
}

#[test]
fn payoff_without_views_pays_the_normalization_everywhere() {
    let terms_path = data("terms.json");
    let out = ok(&["payoff", "--curve", p(&data("skew_curve.csv")), "--terms", p(&terms_path)]);
    let terms = io::terms_from_json::<f64>(&io::read_to_string(&terms_path).unwrap()).unwrap();
    let n = terms.normalization();
    let (_, body) = rows(&out);
    for r in body.iter().filter(|r| r[1] > 0.0) {
        assert!((r[3] / n - 1.0).abs() < 1e-15, "{} vs {n}", r[3]);
    }
}

#[test]
fn payoff_summary_reports_the_decomposition() {
    let dir = TempDir::new().unwrap();
    let summary = dir.path().join("summary.json");
    let table = dir.path().join("payoff.csv");
    let (curve, view, terms) = (data("skew_curve.csv"), data("skew05.json"), data("terms.json"));
    let args = [
        "payoff",
        "--curve",
        p(&curve),
        "--view",
        p(&view),
        "--terms",
        p(&terms),
        "--summary",
        p(&summary),
        "--out",
        p(&table),
    ];
    assert_eq!(ok(&args), "");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    let (er, mrr, rfr, cr) = (
        v["er"].as_f64().unwrap(),
        v["mrr"].as_f64().unwrap(),
        v["rfr"].as_f64().unwrap(),
        v["cr"].as_f64().unwrap(),
    );
    assert!(mrr > 0.0);
    assert!((er - (mrr + rfr - cr)).abs() < 1e-12);
    assert!(std::fs::read_to_string(&table).unwrap().starts_with("x,m,b,f\n"));
}

#[test]
fn model_risk_of_identical_inputs_is_safe() {
    let dir = TempDir::new().unwrap();
    let m = dir.path().join("m.csv");
    let b = dir.path().join("b.csv");
    ok(&["implied-density", "--curve", p(&data("skew_curve.csv")), "-o", p(&m)]);
    ok(&["implied-density", "--curve", p(&data("skew_curve.csv")), "--view", p(&data("skew05.json")), "-o", p(&b)]);
    let (header, body) = rows(&std::fs::read_to_string(&m).unwrap());
    assert_eq!(header, "x,mass");
    assert!((body.iter().map(|r| r[1]).sum::<f64>() - 1.0).abs() < 1e-12);

    let (edges, terms) = (data("edges.json"), data("terms.json"));
    let common = ["--buckets", p(&edges), "--terms", p(&terms)];
    let same: serde_json::Value =
        serde_json::from_str(&ok(&[&["model-risk", "--b", p(&m), "--m", p(&m)][..], &common].concat())).unwrap();
    assert_eq!(same["mrr"].as_f64(), Some(0.0));
    assert_eq!(same["verdict"], "safe");
    assert_eq!(same["bucket_count"], 11);

    let diff: serde_json::Value =
        serde_json::from_str(&ok(&[&["model-risk", "--b", p(&b), "--m", p(&m)][..], &common].concat())).unwrap();
    let mrr = diff["mrr"].as_f64().unwrap();
    let contributions: f64 = diff["contributions"].as_array().unwrap().iter().map(|c| c.as_f64().unwrap()).sum();
    assert!(mrr > 0.0);
    assert!((contributions - mrr).abs() < 1e-12);
    let expected = if mrr < diff["cr"].as_f64().unwrap() { "safe" } else { "material" };
    assert_eq!(diff["verdict"], expected);
}

#[test]
fn index_simulation_outputs() {
    let (market, believed) = (data("market_dynamics.json"), data("believed_dynamics.json"));
    let series = ok(&["index-simulate", "--market", p(&market), "--believed", p(&believed), "--seed", "3"]);
    let (header, body) = rows(&series);
    assert_eq!(header, "step,exact,first_order");
    assert_eq!(body.len(), 253);
    assert_eq!(body[0][1..], [1.0, 1.0]);
    let last = &body[252];
    assert!((last[1].ln() - last[2].ln()).abs() < 0.05);
    assert_eq!(series, ok(&["index-simulate", "--market", p(&market), "--believed", p(&believed), "--seed", "3"]));

    let stats: serde_json::Value = serde_json::from_str(&ok(&[
        "index-simulate",
        "--market",
        p(&market),
        "--believed",
        p(&believed),
        "--paths",
        "2000",
        "--measure",
        "believed",
    ]))
    .unwrap();
    assert_eq!(stats["paths"], 2000);
    assert_eq!(stats["measure"], "believed");
}

#[test]
fn kelly_scan_defaults_to_multiples_of_the_kelly_leverage() {
    let out = ok(&[
        "kelly-scan",
        "--market",
        p(&data("market_dynamics.json")),
        "--believed",
        p(&data("believed_dynamics.json")),
        "--paths",
        "500",
    ]);
    let (header, body) = rows(&out);
    assert_eq!(header, "leverage,mean_log_growth,std_error,wipeouts");
    let expected = [0.0, 0.625, 1.25, 1.875, 2.5];
    assert_eq!(body.len(), expected.len());
    for (row, lev) in body.iter().zip(expected) {
        assert!((row[0] - lev).abs() < 1e-12, "{} vs {lev}", row[0]);
    }
    assert_eq!(body[0][1], 0.0);
}

#[test]
fn hedged_pnl_and_cubic_decomposition() {
    let profile = data("profile_cubic.csv");
    let report: serde_json::Value =
        serde_json::from_str(&ok(&["hedged-pnl", "--profile", p(&profile), "--spec", p(&data("hedged_spec.json"))]))
            .unwrap();
    assert!(report["pnl"].as_f64().unwrap().is_finite());
    assert_eq!(report["kernel"], "lognormal");
    assert_eq!(report["steps"], 20);

    // value = u³ - u²/2 + 1 with u = (x - 100)/100
    let d: serde_json::Value =
        serde_json::from_str(&ok(&["cubic-decompose", "--profile", p(&profile), "--center", "100"])).unwrap();
    assert!((d["alpha"].as_f64().unwrap() / 3e-6 - 1.0).abs() < 1e-9);
    assert!((d["beta"].as_f64().unwrap() / 5e-5 - 1.0).abs() < 1e-9);

    let dir = TempDir::new().unwrap();
    let dynamics = dir.path().join("dyn.json");
    std::fs::write(&dynamics, r#"{"drift":0.0,"vol":0.2,"dt":0.05,"steps":5}"#).unwrap();
    let hist = ok(&[
        "hedged-pnl",
        "--profile",
        p(&profile),
        "--dynamics",
        p(&dynamics),
        "--hedge-vol",
        "0.2",
        "--paths",
        "40",
        "--bins",
        "8",
    ]);
    let (header, body) = rows(&hist);
    assert_eq!(header, "x,mass");
    assert_eq!(body.len(), 8);
    assert!((body.iter().map(|r| r[1]).sum::<f64>() - 1.0).abs() < 1e-12);
}

fn expect_error(args: &[&str], code: i32, category: &str) {
    let out = cli(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    assert!(stderr.starts_with(&format!("error: category={category} message=")), "{stderr}");
}

#[test]
fn errors_map_to_categories_and_exit_codes() {
    let dir = TempDir::new().unwrap();
    let write = |name: &str, text: &str| {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    };
    let curve = data("skew_curve.csv");

    expect_error(&["payoff", "--curve", p(&dir.path().join("missing.csv"))], 3, "io");
    let bad_csv = write("bad.csv", "strike,vol\n90,abc\n100,0.2\n110,0.2\n");
    std::fs::copy(data("skew_curve.json"), dir.path().join("bad.json")).unwrap();
    expect_error(&["payoff", "--curve", p(&bad_csv)], 4, "parse");
    let negative = write("neg.json", r#"{"kind":"skew_scale","s":-1.0}"#);
    expect_error(&["payoff", "--curve", p(&curve), "--view", p(&negative)], 5, "argument");
    let crush = write("crush.json", r#"{"kind":"vol_shift","v":-0.5}"#);
    expect_error(&["payoff", "--curve", p(&curve), "--view", p(&crush)], 9, "infeasible_view");
    let vol_view = write("vol.json", r#"{"drift":0.05,"vol":0.3,"dt":0.003968253968253968,"steps":252}"#);
    expect_error(
        &["index-simulate", "--market", p(&data("market_dynamics.json")), "--believed", p(&vol_view)],
        11,
        "unsupported_view",
    );
    let narrow = write("narrow.json", r#"{"edges":[90.0,100.0,110.0]}"#);
    let m = dir.path().join("m.csv");
    ok(&["implied-density", "--curve", p(&curve), "-o", p(&m)]);
    expect_error(
        &["model-risk", "--b", p(&m), "--m", p(&m), "--buckets", p(&narrow), "--terms", p(&data("terms.json"))],
        10,
        "coverage",
    );

    let usage = cli(&["payoff", "--no-such-flag"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn help_lists_exit_codes() {
    let help = ok(&["--help"]);
    assert!(help.contains("Exit codes:"));
    for code in ["3   io", "4   parse", "8   arbitrage", "13  wipeout"] {
        assert!(help.contains(code), "{code}");
    }
    assert!(help.contains("error: category=<category> message=<text>"));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use tempfile::TempDir;

fn nlcausal(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nlcausal")).current_dir(dir).args(args).output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) {
    let out = nlcausal(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn records(path: &Path) -> Vec<Vec<String>> {
    let mut rdr = csv::Reader::from_path(path).unwrap();
    let mut rows = vec![rdr.headers().unwrap().iter().map(String::from).collect()];
    rows.extend(rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()));
    rows
}

fn column(rows: &[Vec<String>], name: &str) -> usize {
    rows[0].iter().position(|h| h == name).unwrap()
}

/// Correlated geometric random walks, one column per label.
fn write_prices(path: &Path, labels: &[&str], n: usize, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut prices = vec![100.0f64; labels.len()];
    let mut out = format!("date,{}\n", labels.join(","));
    for t in 0..n {
        let common: f64 = StandardNormal.sample(&mut rng);
        for (k, p) in prices.iter_mut().enumerate() {
            let own: f64 = StandardNormal.sample(&mut rng);
            *p *= (0.0002 * (k + 1) as f64 + 0.01 * (0.6 * common + 0.8 * own)).exp();
        }
        let row: Vec<String> = prices.iter().map(|p| p.to_string()).collect();
        out.push_str(&format!("d{t:04},{}\n", row.join(",")));
    }
    fs::write(path, out).unwrap();
}

fn write_xy(path: &Path, n: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut out = String::from("x,y\n");
    for _ in 0..n {
        let (a, b): (f64, f64) = (StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng));
        out.push_str(&format!("{a},{b}\n"));
    }
    fs::write(path, out).unwrap();
}

#[test]
fn analyze_row_counts() {
    let dir = TempDir::new().unwrap();
    write_xy(&dir.path().join("in.csv"), 30);
    // 30 samples, window 10, stride 10: three windows.
    let base = ["analyze", "--input", "in.csv", "--transform", "none", "--window-len", "10", "--stride", "10"];
    ok(dir.path(), &[&base[..], &["--measures", "pearson", "--output-dir", "p"]].concat());
    ok(dir.path(), &[&base[..], &["--measures", "te", "--output-dir", "t"]].concat());
    let p = records(&dir.path().join("p/measures.csv"));
    let t = records(&dir.path().join("t/measures.csv"));
    assert_eq!(p.len() - 1, 3);
    assert_eq!(t.len() - 1, 6);
    let ends: Vec<&str> = p[1..].iter().map(|r| r[0].as_str()).collect();
    assert_eq!(ends, ["9", "19", "29"]);
    let dir_col = column(&t, "direction");
    assert!(t[1..].iter().all(|r| r[dir_col] == "directed"));
    let pairs: Vec<(&str, &str)> = t[1..].iter().map(|r| (r[2].as_str(), r[3].as_str())).collect();
    assert_eq!(pairs[..3], [("x", "y"); 3]);
    assert_eq!(pairs[3..], [("y", "x"); 3]);
}

#[test]
fn simulate_variants_and_usage_errors() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["simulate", "--n", "1000", "--output-dir", "c"]);
    ok(dir.path(), &["simulate", "--n", "1000", "--literal", "--output-dir", "l"]);
    let c = records(&dir.path().join("c/simulated.csv"));
    let l = records(&dir.path().join("l/simulated.csv"));
    assert_eq!(c.len(), 1001);
    assert!(c.iter().all(|r| r.len() == 2));
    assert_ne!(c, l);
    let out = nlcausal(dir.path(), &["simulate", "--n", "0", "--output-dir", "z"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn simulate_feeds_analyze() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["simulate", "--n", "1500", "--output-dir", "sim"]);
    ok(
        dir.path(),
        &[
            "analyze",
            "--input",
            "sim/simulated.csv",
            "--transform",
            "none",
            "--window-len",
            "500",
            "--stride",
            "100",
            "--measures",
            "pearson,ccm",
            "--output-dir",
            "an",
        ],
    );
    let rows = records(&dir.path().join("an/measures.csv"));
    let (m, v) = (column(&rows, "measure"), column(&rows, "value"));
    // 11 windows: one pearson row each, two ccm rows each.
    assert_eq!(rows.len() - 1, 33);
    for r in rows[1..].iter().filter(|r| r[m] == "ccm") {
        assert!(r[v].parse::<f64>().unwrap() > 0.0);
    }
}

#[test]
fn decompose_ranges_and_identity() {
    let dir = TempDir::new().unwrap();
    ok(dir.path(), &["simulate", "--n", "2000", "--output-dir", "sim"]);
    ok(
        dir.path(),
        &[
            "decompose",
            "--input",
            "sim/simulated.csv",
            "--transform",
            "none",
            "--window-len",
            "500",
            "--stride",
            "25",
            "--measures",
            "te,ccm",
            "--surrogates",
            "5",
            "--output-dir",
            "dec",
        ],
    );
    let rows = records(&dir.path().join("dec/decomposition.csv"));
    assert_eq!(rows.len() - 1, 4);
    let (m, nl) = (column(&rows, "measure"), column(&rows, "nonlinear_fraction"));
    for r in &rows[1..] {
        for name in ["linear_fraction", "nonlinear_fraction", "fallacy", "fallacy_linear"] {
            let v: f64 = r[column(&rows, name)].parse().unwrap();
            assert!((0.0..=1.0).contains(&v), "{name} = {v}");
        }
        if r[m] == "ccm" {
            assert!(r[nl].parse::<f64>().unwrap() > 0.0);
        }
    }

    // A measure identical to its surrogate has no nonlinear part.
    let mut file = String::from("window_end,date,asset_a,asset_b,direction,measure,value,error\n");
    for (w, v) in [0.1, 0.4, 0.2, 0.3, 0.5].iter().enumerate() {
        let rho = [0.2, -0.1, 0.3, 0.0, 0.1][w];
        file.push_str(&format!("{w},,a,b,undirected,pearson,{rho},\n"));
        file.push_str(&format!("{w},,a,b,directed,te,{v},\n"));
        file.push_str(&format!("{w},,a,b,directed,surrogate-te,{v},\n"));
    }
    fs::write(dir.path().join("measures.csv"), file).unwrap();
    ok(dir.path(), &["decompose", "--input", "measures.csv", "--output-dir", "same"]);
    let rows = records(&dir.path().join("same/decomposition.csv"));
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][column(&rows, "nonlinear_fraction")], "0.0");
    assert_eq!(rows[1][column(&rows, "linear_fraction")], "1.0");
}

#[test]
fn decompose_reports_constant_series_per_pair() {
    let dir = TempDir::new().unwrap();
    let mut file = String::from("window_end,date,asset_a,asset_b,direction,measure,value,error\n");
    for w in 0..4 {
        file.push_str(&format!("{w},,a,b,undirected,pearson,0.{w},\n"));
        file.push_str(&format!("{w},,a,b,directed,te,0.5,\n"));
        file.push_str(&format!("{w},,a,b,directed,surrogate-te,0.{w},\n"));
    }
    fs::write(dir.path().join("measures.csv"), file).unwrap();
    let out = nlcausal(dir.path(), &["decompose", "--input", "measures.csv", "--output-dir", "dec"]);
    assert_eq!(out.status.code(), Some(1));
    let rows = records(&dir.path().join("dec/decomposition.csv"));
    assert!(!rows[1][column(&rows, "error")].is_empty());
}

#[test]
fn pairtrade_summaries() {
    let dir = TempDir::new().unwrap();
    write_prices(&dir.path().join("prices.csv"), &["A", "B"], 700, 3);
    let args = [
        "pairtrade",
        "--input",
        "prices.csv",
        "--asset-a",
        "A",
        "--asset-b",
        "B",
        "--hist-window",
        "300",
        "--short-window",
        "100",
        "--stride",
        "20",
        "--surrogates",
        "3",
        "--codep",
        "pearson,te,ccm,surrogate-te,surrogate-ccm",
        "--output-dir",
        "pt",
    ];
    ok(dir.path(), &args);
    let summary = records(&dir.path().join("pt/pairtrade_summary.csv"));
    assert_eq!(summary.len() - 1, 5);
    let path = records(&dir.path().join("pt/pairtrade.csv"));
    // 699 returns per measure.
    assert_eq!(path.len() - 1, 5 * 699);
    let pos = column(&path, "position");
    assert!(path[1..].iter().all(|r| ["-1", "0", "1"].contains(&r[pos].as_str())));

    let out = nlcausal(dir.path(), &["pairtrade", "--input", "prices.csv", "--asset-a", "A", "--asset-b", "Q"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Q"));
}

#[test]
fn pairtrade_flat_codependence_stays_flat() {
    let dir = TempDir::new().unwrap();
    write_prices(&dir.path().join("one.csv"), &["A"], 400, 4);
    // B duplicates A, so the rolling correlation of returns is exactly 1 throughout.
    let text = fs::read_to_string(dir.path().join("one.csv")).unwrap();
    let mut out = String::from("date,A,B\n");
    for line in text.lines().skip(1) {
        let (d, p) = line.split_once(',').unwrap();
        out.push_str(&format!("{d},{p},{p}\n"));
    }
    fs::write(dir.path().join("pair.csv"), out).unwrap();
    ok(
        dir.path(),
        &[
            "pairtrade",
            "--input",
            "pair.csv",
            "--asset-a",
            "A",
            "--asset-b",
            "B",
            "--hist-window",
            "150",
            "--short-window",
            "50",
            "--stride",
            "10",
            "--output-dir",
            "pt",
        ],
    );
    let path = records(&dir.path().join("pt/pairtrade.csv"));
    let pos = column(&path, "position");
    assert!(path[1..].iter().all(|r| r[pos] == "0"));
    let summary = records(&dir.path().join("pt/pairtrade_summary.csv"));
    assert_eq!(summary[1][1].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn portfolio_single_asset_holds_everything() {
    let dir = TempDir::new().unwrap();
    write_prices(&dir.path().join("one.csv"), &["A"], 300, 5);
    ok(dir.path(), &["portfolio", "--input", "one.csv", "--window-len", "100", "--stride", "50", "--output-dir", "pf"]);
    let w = records(&dir.path().join("pf/weights.csv"));
    assert_eq!(w.len() - 1, 4);
    assert!(w[1..].iter().all(|r| r[3].parse::<f64>().unwrap() == 1.0));
    let risk = records(&dir.path().join("pf/risk.csv"));
    assert_eq!(risk.len(), 2);
}

#[test]
fn portfolio_identical_assets_split_evenly() {
    let dir = TempDir::new().unwrap();
    write_prices(&dir.path().join("one.csv"), &["A"], 300, 6);
    let text = fs::read_to_string(dir.path().join("one.csv")).unwrap();
    let mut out = String::from("date,A,B\n");
    for line in text.lines().skip(1) {
        let (d, p) = line.split_once(',').unwrap();
        out.push_str(&format!("{d},{p},{p}\n"));
    }
    fs::write(dir.path().join("twin.csv"), out).unwrap();
    ok(
        dir.path(),
        &["portfolio", "--input", "twin.csv", "--window-len", "100", "--stride", "50", "--output-dir", "pf"],
    );
    let w = records(&dir.path().join("pf/weights.csv"));
    for r in &w[1..] {
        assert!((r[3].parse::<f64>().unwrap() - 0.5).abs() < 1e-6, "{r:?}");
    }
}

#[test]
fn portfolio_codependence_choice_changes_weights() {
    let dir = TempDir::new().unwrap();
    write_prices(&dir.path().join("prices.csv"), &["A", "B", "C"], 600, 7);
    let base = ["portfolio", "--input", "prices.csv", "--window-len", "200", "--stride", "50"];
    ok(dir.path(), &[&base[..], &["--codep", "pearson", "--output-dir", "corr"]].concat());
    ok(dir.path(), &[&base[..], &["--codep", "te", "--output-dir", "te"]].concat());
    let a = fs::read(dir.path().join("corr/weights.csv")).unwrap();
    let b = fs::read(dir.path().join("te/weights.csv")).unwrap();
    assert_ne!(a, b);
    let rows = records(&dir.path().join("corr/weights.csv"));
    assert_eq!(rows[0], ["date_index", "date", "asset", "weight"]);
    assert_eq!(rows.len() - 1, 3 * 8);
}

#[test]
fn config_file_and_defaults() {
    let dir = TempDir::new().unwrap();
    let out = nlcausal(dir.path(), &["defaults"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("window_len = 1000"));
    let cfg: Vec<&str> = text.lines().map(|l| if l == "n = 1000" { "n = 250" } else { l }).collect();
    let cfg = cfg.join("\n");
    fs::write(dir.path().join("run.toml"), cfg).unwrap();
    ok(dir.path(), &["simulate", "--config", "run.toml", "--output-dir", "sim"]);
    assert_eq!(records(&dir.path().join("sim/simulated.csv")).len(), 251);
    let manifest = fs::read_to_string(dir.path().join("sim/manifest.toml")).unwrap();
    assert!(manifest.contains("command = \"simulate\""));

    fs::write(dir.path().join("bad.toml"), "[rolling]\nwindow = 3\n").unwrap();
    let out = nlcausal(dir.path(), &["simulate", "--config", "bad.toml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ingest_errors_name_the_row() {
    let dir = TempDir::new().unwrap();
    let mut text = String::from("a,b\n");
    for i in 0..10 {
        if i == 6 {
            text.push_str("1.0,\n");
        } else {
            text.push_str(&format!("{i}.0,{i}.5\n"));
        }
    }
    fs::write(dir.path().join("in.csv"), text).unwrap();
    let out = nlcausal(dir.path(), &["analyze", "--input", "in.csv", "--window-len", "3", "--stride", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("row 7"), "{err}");
}

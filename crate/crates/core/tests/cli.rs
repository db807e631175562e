use std::process::{Command, Output};

use serde_json::Value;

fn nanodot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nanodot"))
        .args(args)
        .env_remove("NANODOT_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// Data rows of a CSV report, split into fields.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn meta(text: &str, key: &str) -> String {
    let prefix = format!("# {key}=");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap_or_else(|| panic!("no {key}"))
        .to_string()
}

#[test]
fn zeros_cross_minus() {
    let out = nanodot(&[
        "zeros",
        "--nu",
        "1",
        "--kind",
        "cross-minus",
        "--count",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("\nnu,kind,k,value,bracket_lo,bracket_hi\n"));
    let r = rows(&text);
    assert_eq!(r.len(), 1);
    let v: f64 = r[0][3].parse().unwrap();
    assert!((v - 1.4346956508).abs() < 1e-9);
}

#[test]
fn zeros_rejects_low_order_for_cross_kinds() {
    let out = nanodot(&[
        "zeros",
        "--nu",
        "0.5",
        "--kind",
        "cross-minus",
        "--count",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(nanodot(&["zeros", "--nu", "1"]).status.code(), Some(2));
    assert_eq!(
        nanodot(&["zeros", "--nu", "1", "--kind", "sideways"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        nanodot(&["spectrum", "--radius", "-3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        nanodot(&["spectrum", "--zmax", "20000"]).status.code(),
        Some(2)
    );
}

#[test]
fn zeros_of_j0_as_json() {
    let out = nanodot(&[
        "zeros", "--nu", "0", "--kind", "bessel", "--count", "1", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let v = doc["data"][0]["value"].as_f64().unwrap();
    assert!((v - 2.4048256).abs() < 1e-7);
    assert_eq!(doc["metadata"]["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(doc["metadata"]["kind"], "bessel");
}

#[test]
fn spectrum_first_level_and_gap() {
    let text = stdout(&nanodot(&["spectrum", "--radius", "100", "--zmax", "5"]));
    let gap: f64 = meta(&text, "gap_mev").parse().unwrap();
    assert!((gap - 18.87).abs() < 0.05);
    let r = rows(&text);
    assert_eq!(r[0][0], "1");
    let e: f64 = r[0][5].parse().unwrap();
    assert!((e - 9.44).abs() < 0.01);
    assert_eq!(r[0][3], "minus");
}

#[test]
fn empty_spectrum_still_reports_gap() {
    let out = nanodot(&["spectrum", "--zmax", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(rows(&text).is_empty());
    assert!(meta(&text, "gap_mev").parse::<f64>().unwrap() > 18.0);
}

#[test]
fn spectrum_count_follows_weyl() {
    let text = stdout(&nanodot(&["spectrum", "--zmax", "100"]));
    let n = rows(&text).len() as f64;
    assert!((n - 2500.0).abs() <= 0.05 * 2500.0, "{n}");
}

#[test]
fn charge_staircase() {
    let text = stdout(&nanodot(&[
        "charge",
        "--mu-min",
        "-30",
        "--mu-max",
        "30",
        "--mu-steps",
        "6001",
    ]));
    let r: Vec<Vec<f64>> = rows(&text)
        .iter()
        .map(|r| r.iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(r.len(), 6001);
    for (a, b) in r.iter().zip(r.iter().rev()) {
        assert_eq!(a[0], -b[0]);
        assert_eq!(a[1], -b[1]);
        assert_eq!(a[2], 4.0 * a[1]);
    }
    // first upward jump at 9.44 meV, within the 0.01 meV grid
    let jump = r
        .windows(2)
        .find(|w| w[0][0] >= 0.0 && w[1][1] > w[0][1])
        .unwrap();
    assert!(jump[0][0] < 9.4369 && jump[1][0] > 9.4368, "{jump:?}");
}

#[test]
fn weyl_column_at_two_energy_scales() {
    let eps = 1.973269804e5 / 300.0 / 100.0;
    let mu = format!("{}", 2.0 * eps);
    let text = stdout(&nanodot(&[
        "charge",
        "--mu-min",
        &mu,
        "--mu-max",
        &mu,
        "--mu-steps",
        "1",
    ]));
    let w: f64 = rows(&text)[0][3].parse().unwrap();
    assert!((w - 1.0).abs() < 1e-12);
}

#[test]
fn verify_exit_codes() {
    let ok = nanodot(&["verify", "--nu-list", "1,2.5,7", "--kmax", "10"]);
    assert_eq!(ok.status.code(), Some(0));
    let text = stdout(&ok);
    assert_eq!(meta(&text, "violations"), "0");
    assert_eq!(meta(&text, "passed"), "true");
    assert!(rows(&text).is_empty());

    assert_eq!(
        nanodot(&["verify", "--nu-list", "0.5", "--kmax", "10"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        nanodot(&["verify", "--nu-list", "2", "--kmax", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn spacings_report() {
    let text = stdout(&nanodot(&["spacings", "--levels", "1"]));
    assert_eq!(meta(&text, "degenerate"), "true");
    assert_eq!(meta(&text, "cv").parse::<f64>().unwrap(), 0.0);

    let text = stdout(&nanodot(&["spacings", "--levels", "2496"]));
    let cv: f64 = meta(&text, "cv").parse().unwrap();
    assert!((0.85..=1.15).contains(&cv), "{cv}");
    let r = rows(&text);
    assert_eq!(r.len(), 2496);
    assert!(r.iter().all(|row| row[1].parse::<f64>().unwrap() > 0.0));
}

#[test]
fn peaks_at_zero_temperature() {
    let text = stdout(&nanodot(&["peaks", "--mu-min", "0", "--mu-max", "20"]));
    let r = rows(&text);
    let first: f64 = r[0][0].parse().unwrap();
    assert!((first - 9.4368).abs() < 1e-3);
    assert_eq!(r[0][1], "exact");
}

#[test]
fn cache_gives_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zeros.tsv");
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_nanodot"))
            .args([
                "zeros",
                "--nu",
                "3",
                "--kind",
                "cross-plus",
                "--count",
                "20",
            ])
            .env("NANODOT_CACHE", &path)
            .output()
            .unwrap()
    };
    let cold = run();
    assert!(path.exists());
    let lines = std::fs::read_to_string(&path).unwrap().lines().count();
    assert_eq!(lines, 20);
    let warm = run();
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 20);

    let plain = nanodot(&[
        "zeros",
        "--nu",
        "3",
        "--kind",
        "cross-plus",
        "--count",
        "20",
    ]);
    assert_eq!(plain.stdout, cold.stdout);

    // a looser request is served from the tighter cached entries
    let flag = nanodot(&[
        "zeros",
        "--nu",
        "3",
        "--kind",
        "cross-plus",
        "--count",
        "20",
        "--tol",
        "1e-6",
        "--cache",
        path.to_str().unwrap(),
    ]);
    let loose = nanodot(&[
        "zeros",
        "--nu",
        "3",
        "--kind",
        "cross-plus",
        "--count",
        "20",
        "--tol",
        "1e-6",
    ]);
    let a = rows(&stdout(&flag));
    let b = rows(&stdout(&loose));
    for (x, y) in a.iter().zip(&b) {
        let (x, y): (f64, f64) = (x[3].parse().unwrap(), y[3].parse().unwrap());
        assert!((x - y).abs() <= 2e-6);
    }
}

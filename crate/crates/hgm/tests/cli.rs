use std::fs;
use std::process::{Command, Output};

fn hgm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgm"))
        .args(args)
        .env("HGM_LOG", "error")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a TSV output, header line skipped.
fn rows(o: &Output) -> Vec<Vec<String>> {
    stdout(o)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split('\t').map(str::to_owned).collect())
        .collect()
}

fn col(rows: &[Vec<String>], j: usize) -> Vec<f64> {
    rows.iter().map(|r| r[j].parse().unwrap()).collect()
}

#[test]
fn cdf_at_the_95_percent_point() {
    let o = hgm(&[
        "cdf", "--m", "2", "--n", "3", "--beta", "1,2", "--x", "4.31600",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r.len(), 1);
    let (p, lo, hi) = (col(&r, 1)[0], col(&r, 2)[0], col(&r, 3)[0]);
    assert!((p - 0.95).abs() < 1e-5, "{p}");
    assert!(lo <= p && p <= hi);
    let text = stdout(&o);
    assert!(text.contains("# beta=1,2\n") && text.contains("# n=3\n"));
}

#[test]
fn sigma_flag_converts_variances() {
    let a = hgm(&[
        "cdf",
        "--n",
        "3",
        "--sigma",
        "0.5,0.25",
        "--x",
        "2",
        "--no-bounds",
    ]);
    let b = hgm(&[
        "cdf",
        "--n",
        "3",
        "--beta",
        "1,2",
        "--x",
        "2",
        "--no-bounds",
    ]);
    assert_eq!(col(&rows(&a), 1), col(&rows(&b), 1));
}

#[test]
fn percentage_points() {
    let o = hgm(&[
        "quantile",
        "--m",
        "2",
        "--n",
        "3",
        "--beta",
        "1,2",
        "--p",
        "0.5,0.9,0.95,0.99",
        "--method",
        "rk4-adaptive",
        "--rel-tol",
        "1e-12",
        "--jobs",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let got = col(&rows(&o), 1);
    let want = ["1.63785", "3.54999", "4.31600", "6.05836"];
    for (g, w) in got.iter().zip(want) {
        assert_eq!(format!("{g:.5}"), w);
    }
}

#[test]
fn compare_with_series() {
    let o = hgm(&[
        "compare", "--m", "2", "--n", "3", "--beta", "1,2", "--xmax", "5", "--K", "150",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r.len(), 20);
    assert!(col(&r, 3).iter().all(|d| *d < 1e-6));
}

#[test]
fn table_is_monotone_and_deterministic() {
    let args = [
        "table",
        "--m",
        "5",
        "--n",
        "7",
        "--beta",
        "1,2,3,4,5",
        "--xmax",
        "20",
        "--points",
        "200",
    ];
    let a = hgm(&args);
    assert_eq!(a.status.code(), Some(0));
    let r = rows(&a);
    assert_eq!(r.len(), 200);
    let p = col(&r, 1);
    assert!(p.windows(2).all(|w| w[1] >= w[0]));
    assert!(p[199] >= 0.9996);
    assert_eq!(col(&r, 0)[199], 20.0);
    assert_eq!(a.stdout, hgm(&args).stdout);
}

#[test]
fn output_formats() {
    let base = [
        "table", "--n", "3", "--beta", "1,2", "--xmax", "3", "--points", "3",
    ];
    let csv = hgm(&[&base[..], &["--format", "csv"]].concat());
    let text = stdout(&csv);
    let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body[0], "x,prob");
    assert_eq!(body.len(), 4);
    assert!(text.contains("# format=csv\n"));

    let json = hgm(&[&base[..], &["--format", "jsonl"]].concat());
    let lines: Vec<serde_json::Value> = stdout(&json)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0]["config"]["command"], "table");
    assert_eq!(lines[3]["x"], 3.0);
    assert!(lines[3]["prob"].as_f64().unwrap() > 0.5);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = std::env::temp_dir().join(format!("hgm-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let file = dir.join("m2.conf");
    fs::write(
        &file,
        "# the two-by-two example\nn = 3\nbeta = 1,2\nno_bounds = true\nformat = csv\n",
    )
    .unwrap();
    let path = file.to_str().unwrap();
    let o = hgm(&["cdf", "--config", path, "--x", "4.316"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let text = stdout(&o);
    assert!(text.contains("# bounds=false\n"));
    assert!(text.contains("x,prob,lower,upper,seconds"));
    // the command line overrides the file
    let o = hgm(&[
        "cdf", "--config", path, "--x", "4.316", "--format", "tsv", "--n", "4",
    ]);
    assert!(stdout(&o).contains("# n=4\n"));
    fs::write(&file, "n 3\n").unwrap();
    assert_eq!(
        hgm(&["cdf", "--config", path, "--x", "1"]).status.code(),
        Some(1)
    );
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(hgm(&["--help"]).status.code(), Some(0));
    assert_eq!(hgm(&["cdf", "--n", "3", "--x", "1"]).status.code(), Some(1));
    assert_eq!(
        hgm(&["cdf", "--n", "0.5", "--beta", "1,2", "--x", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        hgm(&["cdf", "--m", "3", "--n", "5", "--beta", "1,2", "--x", "1"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        hgm(&["cdf", "--n", "3", "--beta", "1,2", "--x", "-1"])
            .status
            .code(),
        Some(1)
    );
    let tied = [
        "cdf",
        "--n",
        "5",
        "--beta",
        "1,1",
        "--x",
        "1",
        "--tie-policy",
        "error",
    ];
    assert_eq!(hgm(&tied).status.code(), Some(1));
    let far = [
        "quantile", "--n", "3", "--beta", "1,2", "--p", "0.99", "--max-x", "2",
    ];
    let o = hgm(&far);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bracket"));
}

#[test]
fn selftest_passes() {
    let o = hgm(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert!(r.len() >= 8);
    assert!(r.iter().all(|row| row[1] == "PASS"));
}

#[test]
fn dumps() {
    let z = rows(&hgm(&["zonal", "--k", "3"]));
    assert!(z.contains(&vec![
        "2.1".to_string(),
        "1.1.1".to_string(),
        "18/5".to_string()
    ]));
    assert_eq!(z.len(), 6);

    let q = rows(&hgm(&[
        "coeffs", "--a", "1.5", "--c", "3", "--m", "2", "--K", "2",
    ]));
    assert_eq!(q[1], vec!["1", "1", "0.5"]);

    let p = hgm(&[
        "pfaffian", "--a", "1.5", "--c", "3", "--y", "0.4,1.1", "--i", "1",
    ]);
    let text = stdout(&p);
    assert!(text.contains("row\tF\td1\td2\td1.2\n"));
    let r = rows(&p);
    assert_eq!(r.len(), 4);
    assert_eq!(r[0], vec!["F", "0", "1", "0", "0"]);
    assert_eq!(
        hgm(&["pfaffian", "--a", "1.5", "--c", "3", "--y", "0.4,0.4", "--i", "1"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn ties_are_reported_through_the_log() {
    let run = |level: &str| {
        Command::new(env!("CARGO_BIN_EXE_hgm"))
            .args([
                "cdf",
                "--n",
                "5",
                "--beta",
                "1,1,2",
                "--x",
                "2",
                "--no-bounds",
            ])
            .env("HGM_LOG", level)
            .output()
            .unwrap()
    };
    let loud = run("warn");
    assert_eq!(loud.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&loud.stderr).contains("tied beta"));
    assert!(!String::from_utf8_lossy(&run("error").stderr).contains("tied beta"));
}

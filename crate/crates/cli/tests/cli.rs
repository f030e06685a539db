use std::io::Write;
use std::process::{Command, Output};

use fkradial::freegroup::{parse_word, word_count};
use fkradial::radial::{deviation_bound, Sandwich};
use fkradial::{FPConfig, Rational, DEFAULT_CAP};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fkradial"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn records(text: &str) -> Vec<csv::StringRecord> {
    csv::Reader::from_reader(text.as_bytes())
        .records()
        .map(|r| r.unwrap())
        .collect()
}

fn rat(s: &str) -> Rational {
    s.parse().unwrap_or_else(|_| panic!("not a rational: {s}"))
}

#[test]
fn counts_rows() {
    let out = stdout(&["counts", "--k", "2", "--n-max", "6"]);
    let rows = records(&out);
    assert_eq!(rows.len(), 5);
    assert_eq!(&rows[2][1], "7");
    assert_eq!(&rows[2][3], "6");
    assert!(out.starts_with("n,alpha,beta,gamma,total_check,drift_alpha,within_C\n"));
    assert!(rows.iter().all(|r| &r[6] == "true"));
}

#[test]
fn deviation_all_ok_and_exact() {
    let out = stdout(&["deviation", "--k", "2", "--x", "g1", "--y", "g1", "--n-max", "10"]);
    let rows = records(&out);
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| &r[4] == "true"));
    let x = parse_word("g1", 2, false).unwrap();
    let sw = Sandwich::new(2, 10, DEFAULT_CAP).unwrap();
    for r in &rows {
        let n: usize = r[0].parse().unwrap();
        let (d, _) = sw.deviation::<Rational>(&x, &x, n).unwrap();
        assert_eq!(rat(&r[1]), d);
        assert_eq!(rat(&r[2]), d * Rational::from_integer(word_count(2, n)));
        assert_eq!(rat(&r[3]), deviation_bound(1, 1, 2));
    }
}

#[test]
fn series_monotone() {
    let rows = records(&stdout(&[
        "series", "--k", "2", "--x", "g1", "--y", "g2", "--n-max", "12",
    ]));
    assert_eq!(rows.len(), 13);
    let sums: Vec<Rational> = rows.iter().map(|r| rat(&r[2])).collect();
    assert!(sums.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn output_is_deterministic() {
    let args = [
        "series",
        "--k",
        "3",
        "--x",
        "g1 g2",
        "--y",
        "g3^-1",
        "--n-max",
        "7",
        "--decimals",
        "6",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn json_records_match_csv_fields() {
    let csv_out = stdout(&["counts", "--k", "3", "--n-max", "4"]);
    let json_out = stdout(&["counts", "--k", "3", "--n-max", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json_out).unwrap();
    let rows = records(&csv_out);
    assert_eq!(v.as_array().unwrap().len(), rows.len());
    let keys: Vec<String> = v[0].as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys.join(","), csv_out.lines().next().unwrap());
    assert_eq!(v[1]["alpha"], rows[1][1].to_string());
    assert_eq!(stdout(&["counts", "--k", "3", "--n-max", "4", "--json"]), json_out);
}

#[test]
fn decimals_are_extra_columns() {
    let out = stdout(&[
        "deviation",
        "--k",
        "2",
        "--x",
        "g1",
        "--y",
        "g2",
        "--n-max",
        "3",
        "--decimals",
        "3",
    ]);
    let header = out.lines().next().unwrap();
    assert_eq!(
        header,
        "n,delta_sq,delta_sq_times_norm_sq,bound_H_sq,ok,delta_dec,delta_times_norm_dec,bound_H_dec"
    );
    let rows = records(&out);
    assert_eq!(&rows[0][7], "1056.000");
}

#[test]
fn letters_mode() {
    let a = stdout(&["expect", "--k", "2", "--x", "a", "--y", "b^-1", "--n", "3", "--letters"]);
    let b = stdout(&["expect", "--k", "2", "--x", "g1", "--y", "g2^-1", "--n", "3"]);
    assert_eq!(a, b);
}

#[test]
fn expect_from_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# two terms").unwrap();
    writeln!(f, "1/2 g1 g2").unwrap();
    writeln!(f, "3 e").unwrap();
    let rows = records(&stdout(&["expect", "--k", "2", "--input", f.path().to_str().unwrap()]));
    assert_eq!(rows.len(), 2);
    assert_eq!((&rows[0][0], &rows[0][1]), ("0", "3"));
    assert_eq!((&rows[1][0], &rows[1][1]), ("2", "1/24"));
}

#[test]
fn freeproduct_chi_within_bounds() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(FPConfig::z2_star_z((2, 3)).to_json().as_bytes()).unwrap();
    let path = f.path().to_str().unwrap();
    let rows = records(&stdout(&[
        "freeproduct",
        "chi",
        "--config",
        path,
        "--x",
        "1:0,1 2:1",
        "--y",
        "2:-1 1:0,-1",
        "--n-max",
        "6",
    ]));
    assert_eq!(rows.len(), 7);
    for r in &rows {
        assert_eq!(&r[3], "true");
        let size: i64 = r[1].parse().unwrap();
        let norm = rat(&format!("{}/{}", &r[4], &r[5]));
        assert!(norm <= Rational::from_integer((size * size).into()));
    }
    let cases = records(&stdout(&[
        "freeproduct",
        "cases",
        "--config",
        path,
        "--x",
        "1:0,1 2:1",
        "--y",
        "2:-1 1:0,-1",
        "--n",
        "0",
    ]));
    assert_eq!(cases.len(), 1);
    assert_eq!(&cases[0][2], "1");
}

#[test]
fn bad_input_exits_two() {
    for args in [
        vec!["counts", "--k", "1", "--n-max", "4"],
        vec!["deviation", "--k", "2", "--x", "g7", "--y", "g1", "--n-max", "3"],
        vec!["series", "--k", "2", "--x", "g1^0", "--y", "g1", "--n-max", "3"],
        vec![
            "freeproduct",
            "chi",
            "--config",
            "/nonexistent.json",
            "--x",
            "1:1,0",
            "--y",
            "2:1",
            "--n-max",
            "2",
        ],
        vec!["verify", "--k", "0"],
        vec!["counts", "--k", "2"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn verify_passes_and_negative_control_fails() {
    let ok = run(&["verify", "--k", "2", "--n-max", "6"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stdout));
    let bad = run(&["verify", "--k", "2", "--n-max", "6", "--perturb-alpha", "1"]);
    assert_eq!(bad.status.code(), Some(1));
    let text = String::from_utf8(bad.stdout).unwrap();
    let first = records(&text).into_iter().find(|r| &r[4] == "false").unwrap();
    assert_eq!(&first[0], "abc_vs_enumeration");
    assert_eq!(&first[1], "k=2 n=3");
}

#[test]
fn verify_json() {
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&["verify", "--k", "2", "--n-max", "4", "--json"])).unwrap();
    let all = v.as_array().unwrap();
    assert!(!all.is_empty());
    assert!(all.iter().all(|r| r["pass"] == true));
}

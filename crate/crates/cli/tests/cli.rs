use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_localsum")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

#[test]
fn analyze_examples() {
    let o = run(&["analyze", "-f", "y^2 - x^3"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["newton_polygon"]["d"], "6/5");
    assert_eq!(v["adaptedness"]["adapted"], true);

    let v = json(&run(&["analyze", "-f", "(y - x^2)^2"]));
    assert_eq!(v["adaptedness"]["adapted"], false);
    assert_eq!(v["adaptedness"]["reason"]["kind"], "compact-edge-mpr-above-d");

    let v = json(&run(&["analyze", "-f", "(x^2+y^2)^2"]));
    assert_eq!(v["exceptional_class"], true);

    let text = stdout(&run(&["analyze", "-f", "y^2 - x^3", "--format", "text"]));
    assert!(text.contains("d = 6/5") && text.contains("adapted = true"));
}

#[test]
fn adapt_reports_the_trace() {
    let v = json(&run(&["adapt", "-f", "(y - x^2)^2 + x^5"]));
    assert_eq!(v["steps"].as_array().unwrap().len(), 1);
    assert_eq!(v["terminated"], "adapted");
    let o = run(&["adapt", "-f", "(y - x^2 - x^3)^2 + x^9", "--step-cap", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["analyze", "-f", "y^^2"]).status.code(), Some(1));
    assert_eq!(run(&["analyze", "-f", "7"]).status.code(), Some(2));
    assert_eq!(run(&["sum", "-f", "y^2-x^3", "--primes", "4"]).status.code(), Some(2));
    assert_eq!(run(&["sum", "-f", "y^2-x^3", "--budget", "2000000000"]).status.code(), Some(2));
    assert_eq!(run(&["sum", "-f", "y^2-x^3", "--primes", "13", "--smax", "9"]).status.code(), Some(3));
    assert_eq!(run(&["verify", "-f", "y^2-x^3", "--primes", "13", "--smax", "9"]).status.code(), Some(0));
    assert_eq!(run(&["hensel", "--poly", "x^2 - 2", "--prime", "7", "--precision", "40", "--x0", "3"]).status.code(), Some(0));
    let o = run(&["hensel", "--poly", "x^2 - 2", "--prime", "7", "--precision", "4", "--x0", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn csv_schema_and_determinism() {
    let args = ["verify", "-f", "y^2 - x^3", "--primes", "5,7", "--smax", "4", "--format", "csv"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,s,re,im,modulus,normalized"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 8);
    for r in &rows {
        assert_eq!(r.len(), 6);
        for x in &r[2..] {
            let mantissa = x.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.replace('.', "").len(), 12, "{x}");
            x.parse::<f64>().unwrap();
        }
    }
}

#[test]
fn gradient_rows_are_exact() {
    let o = run(&["verify", "-f", "y + 3*x", "--primes", "5", "--smax", "5", "--format", "json"]);
    assert!(o.status.success());
    let v = json(&o);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["modulus"], "4.00000000000e-2");
    for r in &rows[1..] {
        assert_eq!(r["modulus"], "0.00000000000e0");
    }
}

#[test]
fn all_primes_excluded_is_a_warning() {
    let o = run(&["verify", "-f", "y^2 - x^3", "--primes", "2,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert_eq!(stdout(&o).trim(), "p,s,re,im,modulus,normalized");
}

#[test]
fn verify_writes_report_files() {
    let dir = std::env::temp_dir().join(format!("localsum-cli-{}", std::process::id()));
    let o = run(&["verify", "-f", "y^2 - x^4", "--primes", "5", "--smax", "3", "--out", dir.to_str().unwrap()]);
    assert!(o.status.success());
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap();
    assert_eq!(rep["h"], "4/3");
    assert!(std::fs::read_to_string(dir.join("report.csv")).unwrap().starts_with("p,s,re,im,modulus,normalized\n"));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn corpus_run_flags_violations() {
    let dir = std::env::temp_dir().join(format!("localsum-corpus-{}", std::process::id()));
    let path = dir.join("mini.txt");
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(&path, "# two entries\nline: y + 3*x\nsaddle: x*y\n").unwrap();
    let o = run(&["corpus", "--file", path.to_str().unwrap(), "--primes", "5,7", "--smax", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.lines().nth(1).unwrap().starts_with("line,"));
    assert!(text.lines().nth(2).unwrap().starts_with("saddle,1/1,"));
    std::fs::remove_dir_all(dir).ok();

    let o = run(&["corpus", "--smax", "5"]);
    assert_eq!(o.status.code(), Some(4));
}

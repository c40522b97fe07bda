use std::path::Path;
use std::process::{Command, Output};

use spin_discord::cli::table::Table;
use spin_discord::xstate::{discord_breakdown_unchecked, PairCorrelators};

fn bin(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spin-discord")).args(args).current_dir(dir).output().unwrap()
}

fn scan_csv(dir: &Path, name: &str, args: &[&str]) -> String {
    let mut full = vec!["scan"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", name]);
    let out = bin(&full, dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn bell_state() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&["discord", "--sz", "0", "--xx", "1", "--yy", "-1", "--zz", "1"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let d: f64 = text.lines().next().unwrap().strip_prefix("D = ").unwrap().parse().unwrap();
    assert!((d - std::f64::consts::LN_2).abs() < 1e-11);
}

#[test]
fn tfim_scan_has_56_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = scan_csv(dir.path(), "tfim2.csv", &["--model", "tfim", "--h", "2", "--rmin", "5", "--rmax", "60", "--source", "exact"]);
    let t = Table::parse(&csv).unwrap();
    assert_eq!(t.header.join(","), "r,sz,xx,yy,zz,D,D_asym,J,I,lemma1");
    assert_eq!(t.rows.len(), 56);
    assert_eq!(t.meta("model"), Some("tfim(h=2)"));
    assert_eq!(t.meta("regime"), Some("TFIM_Para"));
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--model", "xyfield", "--gamma", "0.5", "--h", "0.6", "--rmin", "2", "--rmax", "30"];
    let a = scan_csv(dir.path(), "a.csv", &args);
    let b = scan_csv(dir.path(), "b.csv", &args);
    assert_eq!(a, b);
    let c1 = bin(&["continuity", "--pairs", "30", "--seed", "7"], dir.path());
    let c2 = bin(&["continuity", "--pairs", "30", "--seed", "7"], dir.path());
    assert_eq!(c1.stdout, c2.stdout);
}

#[test]
fn rows_reproduce_their_discord() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 4] = [
        &["--model", "tfim", "--h", "0.5", "--rmin", "2", "--rmax", "25"],
        &["--model", "tfim", "--h", "1", "--rmin", "2", "--rmax", "40"],
        &["--model", "xxz", "--delta", "0.5", "--rmin", "2", "--rmax", "40", "--source", "asymptotic"],
        &["--model", "xy", "--alpha", "0.3", "--rmin", "2", "--rmax", "20"],
    ];
    for (k, args) in runs.iter().enumerate() {
        let t = Table::parse(&scan_csv(dir.path(), &format!("run{k}.csv"), args)).unwrap();
        assert!(!t.rows.is_empty());
        let col = |name: &str| t.column(name).unwrap();
        for row in &t.rows {
            let v = |name: &str| row[col(name)].parse::<f64>().unwrap();
            let c = PairCorrelators::symmetric(v("sz"), v("xx"), v("yy"), v("zz"));
            let d = discord_breakdown_unchecked(&c).unwrap().discord;
            assert!((d - v("D")).abs() < 1e-9, "{args:?} r = {}: {d} vs {}", row[0], v("D"));
        }
    }
}

#[test]
fn svg_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(&["scan", "--model", "tfim", "--h", "1", "--rmin", "2", "--rmax", "30", "--out", "crit.csv", "--format", "svg"], dir.path());
    assert!(out.status.success());
    let svg = std::fs::read_to_string(dir.path().join("crit.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
    assert!(!dir.path().join("crit.csv").exists());
}

#[test]
fn config_file_with_override() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("run.conf"), "# thermal check\ncommand = thermal\nmodel = tfim\nh = 0.5\nn = 6\nbeta = 0.5, 2\ncut = 3\n").unwrap();
    let out = bin(&["--config", "run.conf", "--h", "1.5"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.ends_with("satisfied = true")).count(), 2);
    let direct = bin(&["thermal", "--model", "tfim", "--h", "1.5", "--n", "6", "--beta", "0.5,2", "--cut", "3"], dir.path());
    assert_eq!(direct.stdout, text.as_bytes());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| bin(args, dir.path()).status.code().unwrap();
    assert_eq!(code(&["prefactors", "--model", "tfim", "--h", "2"]), 0);
    assert_eq!(code(&["scan", "--model", "heisenberg", "--rmin", "2", "--rmax", "5"]), 2);
    assert_eq!(code(&["scan", "--model", "tfim", "--h", "-1", "--rmin", "2", "--rmax", "5"]), 2);
    assert_eq!(code(&["scan", "--model", "tfim", "--h", "2", "--rmin", "9", "--rmax", "5"]), 2);
    assert_eq!(code(&["scan", "--model", "xxz", "--delta", "0.5", "--rmin", "2", "--rmax", "5", "--source", "exact"]), 2);
    assert_eq!(code(&["thermal", "--model", "tfim", "--h", "1", "--n", "13", "--beta", "1"]), 2);
    assert_eq!(code(&["discord", "--sz", "0", "--xx", "1", "--yy", "1", "--zz", "1"]), 3);
    assert_eq!(code(&["--config", "missing.conf"]), 2);
}

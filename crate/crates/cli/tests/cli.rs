use std::path::Path;
use std::process::{Command, Output};

const F0: &str = "Poch(1-n,k)*Poch(-p,k)*Poch(p+1,k)/(Poch(2*nu+1,k)*Poch(1,k)*fact(k))";
const F1: &str = "Poch(1-n,k)*Poch(-p-1,k)*Poch(p+2,k)/(Poch(2*nu+2,k)*Poch(1,k)*fact(k))";
const F2: &str = "Poch(-n,k)*Poch(-p-1,k)*Poch(p+2,k)/(Poch(2*nu,k)*Poch(1,k)*fact(k))";

fn coulsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coulsum"))
        .args(args)
        .env_remove("COULSUM_CONFIG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn c_summand() -> String {
    format!("pow(2*a*beta,-p)*Poch(2*nu+1,p)/(4*mu)*{F0}*(a*(mu+a*kappa) - a*(mu-a*kappa)*n/(n-k))")
}

#[test]
fn gosper_trivial_and_unsummable() {
    let o = coulsum(&["gosper", "k*fact(k)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("certificate: 1/k"));
    assert_eq!(coulsum(&["gosper", "1/fact(k)"]).status.code(), Some(3));
}

#[test]
fn zeilberger_prove_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.toml");
    let o = coulsum(&["zeilberger", &c_summand(), "--recvar", "p", "--max-order", "2", "--out", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("SUM[p+2]"));
    let p = coulsum(&["prove", cert.to_str().unwrap()]);
    assert_eq!(p.status.code(), Some(0));
    let text = stdout(&p);
    assert!(text.contains("QED") && text.ends_with("PASS\n"));
    assert!(text.contains("equals 0"));
}

#[test]
fn certificates_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.toml");
    let b = dir.path().join("b.toml");
    for out in [&a, &b] {
        let o = coulsum(&["pgosper", F0, F1, F2, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn pgosper_reads_term_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut args = vec!["pgosper".to_string()];
    for (i, t) in [F0, F1, F2].iter().enumerate() {
        let path = dir.path().join(format!("f{i}.term"));
        std::fs::write(&path, format!("{t}\n")).unwrap();
        args.push(path.to_str().unwrap().to_string());
    }
    let out = dir.path().join("dep.toml");
    args.extend(["--out".to_string(), out.to_str().unwrap().to_string()]);
    let refs: Vec<&str> = args.iter().map(String::as_str).collect();
    let o = coulsum(&refs);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("dependency:"));
    assert_eq!(coulsum(&["prove", out.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn tampered_certificate_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("g.toml");
    let o = coulsum(&["gosper", "k*fact(k)", "--out", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&cert).unwrap();
    let tampered = text.replace("certificate = \"1/k\"", "certificate = \"1/k + 1\"");
    assert_ne!(text, tampered);
    std::fs::write(&cert, tampered).unwrap();
    assert_eq!(coulsum(&["prove", cert.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "kind = \"gosper\"\norder = [").unwrap();
    assert_eq!(coulsum(&["prove", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(coulsum(&["prove", dir.path().join("missing").to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(coulsum(&["gosper", "Poch(("]).status.code(), Some(2));
    assert_eq!(coulsum(&["coulomb", "verify", "rr9"]).status.code(), Some(2));
}

#[test]
fn coulomb_verify_rr2_ends_in_zero_pair() {
    let o = coulsum(&["coulomb", "verify", "rr2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("{0, 0}\nQED"));
}

#[test]
fn coulomb_verify_two_param_numeric() {
    let o = coulsum(&["coulomb", "verify", "two_param", "--numeric", "--seed", "7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("QED"));
    assert!(text.contains("\"passed\": true") || text.contains("\"passed\":true"));
}

#[test]
fn coulomb_verify_all_is_sorted() {
    let o = coulsum(&["coulomb", "verify", "all"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let headers: Vec<&str> = text.lines().filter_map(|l| l.strip_prefix("== ")).collect();
    let mut sorted = headers.clone();
    sorted.sort();
    assert_eq!(headers.len(), 10);
    assert_eq!(headers, sorted);
}

#[test]
fn coulomb_eval_ground_state() {
    let o = coulsum(&["coulomb", "eval", "--which", "A", "--p", "0", "--Z", "92", "--n", "0", "--kappa", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let value: f64 = text.split_whitespace().nth(2).unwrap().parse().unwrap();
    assert!((value - 1.0).abs() < 1e-10);
    let q = coulsum(&[
        "coulomb", "eval", "--which", "C", "--p", "2", "--Z", "92", "--n", "1", "--kappa", "1", "--quadrature",
    ]);
    assert_eq!(q.status.code(), Some(0));
    assert!(stdout(&q).contains("quadrature"));
}

#[test]
fn unphysical_state_exits_2() {
    let o = coulsum(&["coulomb", "eval", "--which", "A", "--p", "0", "--Z", "200", "--n", "0", "--kappa", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    let v = coulsum(&["coulomb", "verify", "rr3", "--numeric", "--Z", "200", "--n", "0", "--kappa", "-1"]);
    assert_eq!(v.status.code(), Some(2));
}

#[test]
fn config_file_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.toml");
    std::fs::write(&cfg, "precision = 256\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_coulsum"))
        .args(["coulomb", "eval", "--which", "B", "--p", "-1", "--Z", "1", "--n", "2", "--kappa", "-2"])
        .env("COULSUM_CONFIG", &cfg)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("256 bits"));
    std::fs::write(&cfg, "precision = 8\n").unwrap();
    let bad = coulsum(&["--config", cfg.to_str().unwrap(), "coulomb", "eval", "--which", "A", "--p", "0", "--Z", "1", "--n", "0", "--kappa", "-1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn coulomb_derivations() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cc.toml");
    let o = coulsum(&["coulomb", "derive", "C", "--out", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("matches closed form after reduction: true"));
    assert!(Path::new(&cert).exists());
    assert_eq!(coulsum(&["prove", cert.to_str().unwrap()]).status.code(), Some(0));
    let d = coulsum(&["coulomb", "deps"]);
    assert_eq!(d.status.code(), Some(0));
    assert!(stdout(&d).contains("lin1: in the span"));
    let c = coulsum(&["coulomb", "contiguous"]);
    assert_eq!(c.status.code(), Some(0));
    assert_eq!(stdout(&c).matches("matches closed form: true").count(), 4);
}

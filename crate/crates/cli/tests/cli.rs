use std::path::{Path, PathBuf};
use std::process::Command;

use nalg_cli::file;
use nalg_core::checks::{check_binary_jordan, recompute};
use nalg_core::FieldSpec;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn nalg(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_nalg"))
        .args(args)
        .env_remove("NALG_PAR")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn catalog_file(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(format!("{name}.json"));
    let mut full = vec!["catalog", name];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let r = nalg(&full);
    assert_eq!(r.code, 0, "{}", r.stderr);
    path
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn catalog_output_is_an_exact_algebra_file() {
    let r = nalg(&["catalog", "vfgh", "--field", "F2", "--dimv", "1", "--f", "--h"]);
    assert_eq!(r.code, 0);
    let alg = file::parse(&r.stdout).unwrap();
    let labels = alg.labels().to_vec();
    let prod = |t: &[usize]| alg.format_element(&alg.basis_product_element(t));
    assert_eq!(labels, ["1", "b"]);
    // ⟦1,1,1⟧ = 1, ⟦1,1,b⟧ = b, ⟦1,b,b⟧ = 1, ⟦b,b,b⟧ = 3b = b over 𝔽₂.
    assert_eq!(
        [prod(&[0, 0, 0]), prod(&[0, 0, 1]), prod(&[0, 1, 1]), prod(&[1, 1, 1])],
        ["1", "b", "1", "b"]
    );
    let r = nalg(&["catalog", "tca1", "--field", "F2"]);
    assert!(file::parse(&r.stdout).unwrap().is_zero_product());
}

#[test]
fn catalog_errors_exit_three() {
    assert_eq!(nalg(&["catalog", "nonsense"]).code, 3);
    assert_eq!(nalg(&["catalog", "A", "--field", "F4", "--dim", "2"]).code, 3);
    assert_eq!(nalg(&["catalog", "s1", "--n", "2", "--i", "1", "--j", "1"]).code, 3);
    assert_eq!(nalg(&["catalog", "quaternion-ternary", "--field", "F2"]).code, 3);
    assert_eq!(nalg(&["frobnicate"]).code, 3);
}

#[test]
fn check_exit_codes_and_witnesses() {
    let dir = TempDir::new().unwrap();
    let a = catalog_file(&dir, "A", &["--dim", "4"]);
    assert_eq!(nalg(&["check", "dxy", p(&a)]).code, 0);
    assert_eq!(nalg(&["check", "commutative", p(&a)]).code, 0);
    let jts = nalg(&["check", "jts", p(&a)]);
    assert_eq!(jts.code, 1);
    assert!(jts.stdout.contains("LHS = "));
    assert_eq!(nalg(&["check", "binary-jordan", p(&a)]).code, 3);

    let o = catalog_file(&dir, "octonion-ternary", &[]);
    let r = nalg(&["check", "dxy", p(&o)]);
    assert_eq!(r.code, 1);
    let r = nalg(&["check", "dxy", p(&o), "--x", "a,b", "--y", "a,c", "--z", "ab,1,c"]);
    assert_eq!(r.code, 1);
    assert!(
        r.stdout.contains("LHS = -2*a") && r.stdout.contains("RHS = 2*a"),
        "{}",
        r.stdout
    );
    assert_eq!(nalg(&["check", "dxy", p(&o), "--x", "a,b"]).code, 3);
    assert!(nalg(&["check", "dxy", p(&a)]).stderr.contains("time:"));
}

#[test]
fn printed_witness_reparses_to_its_values() {
    let dir = TempDir::new().unwrap();
    let a = catalog_file(&dir, "A", &["--dim", "4"]);
    let red = dir.path().join("reduced.json");
    let r = nalg(&["reduce", p(&a), "--slot", "1", "--element", "b1", "--out", p(&red)]);
    assert_eq!(r.code, 0);
    let r = nalg(&["check", "binary-jordan", p(&red), "--json"]);
    assert_eq!(r.code, 1);
    let report: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    let alg = file::parse(&std::fs::read_to_string(&red).unwrap()).unwrap();
    let w = check_binary_jordan(&alg).unwrap().witness.unwrap();
    let (lhs, rhs) = recompute(&alg, &w).unwrap();
    let printed = |k: &str| alg.parse_element(report["witness"][k].as_str().unwrap()).unwrap();
    assert_eq!(printed("lhs"), lhs);
    assert_eq!(printed("rhs"), rhs);
    for group in report["witness"]["args"].as_array().unwrap() {
        let name = group["name"].as_str().unwrap();
        let elems: Vec<_> = group["elements"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| alg.parse_element(e.as_str().unwrap()).unwrap())
            .collect();
        assert_eq!(w.group(name).unwrap(), elems.as_slice());
    }
}

#[test]
fn simple_exit_codes() {
    let dir = TempDir::new().unwrap();
    let s2 = catalog_file(&dir, "s2", &["--n", "3", "--i", "1", "--j", "2"]);
    assert_eq!(nalg(&["simple", p(&s2)]).code, 0);
    let s1 = catalog_file(&dir, "s1", &["--n", "3", "--i", "1", "--j", "2"]);
    let r = nalg(&["simple", p(&s1)]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("ideal = span{e12}"));
    let v = catalog_file(&dir, "vfgh", &["--dimv", "2"]);
    assert_eq!(nalg(&["simple", p(&v)]).code, 1);
    assert_eq!(nalg(&["simple", "/nonexistent/file.json"]).code, 3);
}

#[test]
fn der_reports() {
    let dir = TempDir::new().unwrap();
    let a = catalog_file(&dir, "A", &["--dim", "4"]);
    let r = nalg(&["der", p(&a), "--inner", "--compare-skew"]);
    assert_eq!(r.code, 0);
    assert!(
        r.stdout.contains("dim Der = 6; dim Inder = 6; Der = Inder = skew"),
        "{}",
        r.stdout
    );
    let v = catalog_file(&dir, "vfgh", &["--dimv", "2"]);
    let r = nalg(&["der", p(&v), "--inner"]);
    assert!(r.stdout.contains("dim Der = 4; dim Inder = 0"), "{}", r.stdout);
    let z = catalog_file(&dir, "zero", &["--dim", "2"]);
    assert!(nalg(&["der", p(&z)]).stdout.contains("dim Der = 4"));
}

#[test]
fn identities_reports() {
    let dir = TempDir::new().unwrap();
    let a = catalog_file(&dir, "A", &["--dim", "2"]);
    let r = nalg(&["identities", p(&a), "--degree", "2", "--mode", "commutative"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("solution dimension 0"));
    let r = nalg(&["identities", p(&a), "--degree", "2", "--modulo", "lifting"]);
    assert!(r.stdout.contains("new identities modulo lifting: 0"), "{}", r.stdout);

    let d2 = catalog_file(&dir, "quaternion-ternary", &[]);
    let r = nalg(&["identities", p(&d2), "--degree", "1", "--verify", "[y,x,x] = [x,x,y]"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("solution dimension 2"));
    let r = nalg(&["identities", p(&d2), "--degree", "1", "--verify", "[x,y,z] = [y,x,z]"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("LHS = "));
    assert_eq!(nalg(&["identities", p(&d2), "--mode", "commutative"]).code, 3);

    let f2 = catalog_file(&dir, "A", &["--dim", "2", "--field", "F2"]);
    let r = nalg(&["identities", p(&f2), "--degree", "2"]);
    assert!(r.stdout.contains("note: in characteristic 2"));
}

#[test]
fn file_validate_and_par() {
    let dir = TempDir::new().unwrap();
    let a = catalog_file(&dir, "A", &["--dim", "3", "--field", "F5"]);
    let r = nalg(&["file", "validate", p(&a)]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("field: F5"));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"field\": \"Q\", \"arity\": 3}").unwrap();
    assert_eq!(nalg(&["file", "validate", p(&bad)]).code, 3);
    let conflicting = dir.path().join("conflict.json");
    std::fs::write(
        &conflicting,
        r#"{"field":"Q","arity":2,"dimension":2,"basis":["u","v"],"symmetry":"total",
            "products":[{"args":[0,1],"value":{"0":"1"}},{"args":[1,0],"value":{"1":"1"}}]}"#,
    )
    .unwrap();
    assert_eq!(nalg(&["file", "validate", p(&conflicting)]).code, 3);

    let o = catalog_file(&dir, "octonion-ternary", &[]);
    let one = nalg(&["--par", "1", "check", "dxy", p(&o)]);
    let four = nalg(&["check", "dxy", p(&o), "--par", "4"]);
    assert_eq!(one.stdout, four.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_nalg"))
        .args(["check", "dxy", p(&o)])
        .env("NALG_PAR", "2")
        .output()
        .unwrap();
    assert_eq!(String::from_utf8(env.stdout).unwrap(), one.stdout);
    assert_eq!(nalg(&["--par", "0", "check", "dxy", p(&o)]).code, 3);
}

#[test]
fn catalog_round_trip_through_files() {
    let dir = TempDir::new().unwrap();
    let a = catalog_file(&dir, "tkk-J", &["--field", "F13"]);
    let alg = file::parse(&std::fs::read_to_string(&a).unwrap()).unwrap();
    assert_eq!(alg.field(), &FieldSpec::prime_with_sqrt_minus_one(13).unwrap());
    assert_eq!(alg.labels(), ["a", "b"]);
}

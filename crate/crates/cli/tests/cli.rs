//! Exit codes, artifact files and re-parseability of emitted JSON.

use std::process::Command;

use ghostlevel::complex::FreeComplex;
use ghostlevel::koszul::koszul_object;
use ghostlevel::poly::{AlgebraElement, Poly};
use ghostlevel::ring::RingSpec;
use ghostlevel::wire::{complex_to_wire, wire_to_certificate, wire_to_complex, CertificateWire, ComplexWire};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ghostlevel"))
}

fn tmp_path(name: &str) -> std::path::PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("ghostlevel-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn nonregular_sequence_exits_2_with_taxonomy() {
    let out = bin()
        .args(["ghost-cert", "--ring", "Fp[2],p=32003", "--seq", "x0,x0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["failure"]["kind"], "composition_zero");
}

#[test]
fn generator_seeing_the_cone_fails_not_ghost() {
    // G = (A // x0) (+) A with forced exponent 0: factor 1 is not ghost
    let ring = RingSpec::fp(32003, 1).unwrap();
    let a = FreeComplex::stalk(ring, 0, 1);
    let x0 = AlgebraElement::in_degree_zero(Poly::var(ring, 0).unwrap());
    let g = koszul_object(&a, &[x0]).unwrap().direct_sum(&a);
    let path = tmp_path("generator.json");
    std::fs::write(&path, serde_json::to_string(&complex_to_wire(&g)).unwrap()).unwrap();

    let out = bin()
        .args([
            "ghost-cert",
            "--ring",
            "Fp[1],p=32003",
            "--seq",
            "x0",
            "--exponents",
            "0",
            "--generator",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["failure"]["kind"], "not_ghost");
    assert_eq!(v["failure"]["factor"], 1);
}

#[test]
fn unit_ideal_reports_infinite_depth() {
    let out = bin()
        .args(["depth", "--ring", "Fp[2],p=32003", "--ideal", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["depth"], "infinity");
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        vec!["depth", "--ring", "Zp[2]", "--ideal", "x0"],
        vec!["depth", "--ring", "Fp[2]", "--ideal", "y"],
        vec!["ghost-cert", "--ring", "Fp[2]", "--seq", "x0", "--exponents", "moo"],
        vec!["level", "--ring", "Fp[2]", "--target", "nonsense"],
        vec!["verify-theorem"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(1), "args {args:?}");
    }
}

#[test]
fn out_flag_writes_the_artifact() {
    let path = tmp_path("cert.json");
    let out = bin()
        .args([
            "ghost-cert",
            "--ring",
            "Fp[2],p=32003",
            "--seq",
            "x0,x1",
            "--out",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let wire: CertificateWire = serde_json::from_str(&text).unwrap();
    let cert = wire_to_certificate(&wire).unwrap();
    assert_eq!(cert.chain_length(), 2);
    let replay = ghostlevel::level::replay_certificate(&cert).unwrap();
    assert!(replay.confirms(&cert));
}

#[test]
fn emitted_complexes_reparse_to_equal_values() {
    let out = bin()
        .args(["level", "--ring", "Fp[2],p=32003", "--target", "koszul:x0,x1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let wire: ComplexWire = serde_json::from_value(v["complex"].clone()).unwrap();
    let parsed = wire_to_complex(&wire).unwrap();
    let ring = RingSpec::fp(32003, 2).unwrap();
    let a = FreeComplex::stalk(ring, 0, 1);
    let xs = [
        AlgebraElement::in_degree_zero(Poly::var(ring, 0).unwrap()),
        AlgebraElement::in_degree_zero(Poly::var(ring, 1).unwrap()),
    ];
    assert_eq!(parsed, koszul_object(&a, &xs).unwrap());
}

#[test]
fn file_targets_round_trip_through_level() {
    let ring = RingSpec::fp(32003, 2).unwrap();
    let a = FreeComplex::stalk(ring, 0, 1);
    let x = a.shift(2).direct_sum(&a);
    let path = tmp_path("target.json");
    std::fs::write(&path, serde_json::to_string(&complex_to_wire(&x)).unwrap()).unwrap();
    let out = bin()
        .args([
            "level",
            "--ring",
            "Fp[2],p=32003",
            "--target",
            &format!("file:{}", path.display()),
        ])
        .output()
        .unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["upper_bound"], 1, "sums of shifted frees have level 1");
    assert!(v["lower_bound"].is_null());
}

#[test]
fn lex_order_and_rationals_are_accepted() {
    let out = bin()
        .args([
            "groebner",
            "--ring",
            "Fp[3],p=32003",
            "--order",
            "lex",
            "--gens",
            "x1 - x2^2,x0 - x2^3",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ring"]["order"], "lex");

    let out = bin()
        .args(["groebner", "--ring", "Q[2]", "--gens", "2*x0^2 - x1,3*x1 - 1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["ring"]["characteristic"], 0);
}

#[test]
fn candidate_generator_with_torsion_reverifies() {
    // a generator with a torsion summand forces a higher exponent on the
    // first step; the certificate must still verify at full length
    let ring = RingSpec::fp(32003, 2).unwrap();
    let a = FreeComplex::stalk(ring, 0, 1);
    let x0 = AlgebraElement::in_degree_zero(Poly::var(ring, 0).unwrap());
    let g2 = koszul_object(&a, &[x0]).unwrap().direct_sum(&a);
    let path = tmp_path("candidate.json");
    std::fs::write(&path, serde_json::to_string(&complex_to_wire(&g2)).unwrap()).unwrap();

    let out = bin()
        .args([
            "verify-theorem",
            "--nvars",
            "2",
            "--samples",
            "4",
            "--seed",
            "3",
            "--generator",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let cands = v["candidate_certificates"].as_array().unwrap();
    assert_eq!(cands.len(), 1);
    assert_eq!(cands[0]["exponents"], serde_json::json!([1, 0]));
    assert_eq!(cands[0]["factors"].as_array().unwrap().len(), 2);
}

#[test]
fn help_exits_zero() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verify-theorem"));
}

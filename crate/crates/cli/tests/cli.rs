//! End-to-end tests that drive the compiled binary: pinned examples, exit
//! code semantics, JSON error shape, seeded determinism, and the params-file
//! plumbing of the certificate commands.

use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cyclonorm"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is JSON ({e}): {:?}", String::from_utf8_lossy(&out.stdout)))
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr)
        .unwrap_or_else(|e| panic!("stderr is JSON ({e}): {:?}", String::from_utf8_lossy(&out.stderr)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn is_norm_false_reports_obstructions_two_and_three() {
    let out = run(&["is-norm", "--ell", "2", "--x", "3", "--y", "-1"]);
    assert_eq!(code(&out), 1, "false predicate exits 1");
    let v = stdout_json(&out);
    assert_eq!(v["is_norm"], Value::Bool(false));
    assert_eq!(v["obstructions"], serde_json::json!(["2", "3"]));
    assert_eq!(v["schema_version"], serde_json::json!(1));
}

#[test]
fn cube_numerator_is_norm_of_any_radicand() {
    let out = run(&["is-norm", "--ell", "3", "--x", "8", "--y", "7"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["is_norm"], Value::Bool(true));
}

/// The symbol (2, 7) for ℓ = 3 is supported exactly on the two places above
/// 7, with inverse values.  Oracle, computed here from scratch: at the place
/// with generator c₀ + c₁ζ the residue of ζ is −c₀/c₁ mod 7, and the symbol
/// is χ(2) = 2^{(7−1)/3} = 4 mod 7, so the exponent is 1 where ζ ≡ 4 and 2
/// where ζ ≡ 2.
#[test]
fn symbol_support_of_two_seven_matches_residue_oracle() {
    use cyclonorm::arith::Ell;
    use cyclonorm::places::primes_above;

    let mut expected: Vec<(String, u64)> = Vec::new();
    for pl in primes_above(Ell::Three, &7.into()) {
        let c0: i64 = (&pl.gen.c0).try_into().unwrap();
        let c1: i64 = (&pl.gen.c1).try_into().unwrap();
        let inv = (0..7).find(|k| (c1 * k).rem_euclid(7) == 1).unwrap();
        let zeta = (-c0 * inv).rem_euclid(7) as u64;
        let chi = 2u64.pow(2) % 7; // 2^{(7−1)/3}
        let exp = (1..3).find(|k| zeta.pow(*k) % 7 == chi).unwrap() as u64;
        expected.push((pl.name(), exp));
    }
    assert!(expected.iter().any(|(_, e)| *e == 1), "oracle has a π-entry with exponent 1");

    let out = run(&["symbol", "--ell", "3", "--a", "2", "--b", "7"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let support = v["support"].as_array().expect("support list");
    assert_eq!(support.len(), 2, "support is the two places above 7");
    for entry in support {
        let name = entry["place"].as_str().unwrap();
        let exp = entry["symbol"]["exponent"].as_u64().unwrap();
        let want = expected.iter().find(|(n, _)| n == name).expect("place above 7");
        assert_eq!(exp, want.1, "symbol at {name}");
    }
}

#[test]
fn solve_returns_pinned_witness() {
    let out = run(&["is-norm", "--ell", "2", "--x", "7", "--y", "2", "--solve"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["witness"], serde_json::json!(["3", "1"]));
}

#[test]
fn power_residue_matches_legendre_symbol() {
    // 2 = 3² mod 7 is a square; 3 is not (squares mod 7 are {1, 2, 4}).
    let out = run(&["power-residue", "--ell", "2", "--a", "2", "--place", "7"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["symbol"]["exponent"], serde_json::json!(0));
    let out = run(&["power-residue", "--ell", "2", "--a", "3", "--place", "7"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["symbol"]["exponent"], serde_json::json!(1));
}

#[test]
fn seeded_output_is_byte_identical() {
    let first = run(&["fixab", "--ell", "3", "--seed", "9"]);
    let second = run(&["fixab", "--ell", "3", "--seed", "9"]);
    assert_eq!(code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn errors_are_structured_json_with_exit_two() {
    let out = run(&["is-norm", "--ell", "2", "--x", "3", "--y", "0"]);
    assert_eq!(code(&out), 2);
    assert!(out.stdout.is_empty(), "no result on stdout for errors");
    let v = stderr_json(&out);
    assert!(v["error"].as_str().unwrap().contains("zero"), "{v}");

    let out = run(&["is-norm", "--ell", "5", "--x", "3", "--y", "1"]);
    assert_eq!(code(&out), 2, "unsupported ℓ is an error");
    assert!(stderr_json(&out)["error"].is_string());

    let out = run(&["is-norm", "--ell", "3", "--x", "3+*w", "--y", "7"]);
    assert_eq!(code(&out), 2);
    assert!(stderr_json(&out)["error"].as_str().unwrap().contains("parse"));
}

#[test]
fn member_exit_codes_follow_truth() {
    let base = ["member", "--ell", "2", "--set", "t", "--a", "3", "--b", "-1"];
    let out = run(&[&base[..], &["--x", "5"][..]].concat());
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["member"], Value::Bool(true));
    let out = run(&[&base[..], &["--x", "1/2"][..]].concat());
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["member"], Value::Bool(false));
}

#[test]
fn norm_form_lists_the_ten_cubic_coefficients() {
    let out = run(&["norm-form", "--ell", "3", "--y", "2"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let monomials = v["monomials"].as_array().unwrap();
    assert_eq!(monomials.len(), 10);
    for m in monomials {
        let exps: Vec<u64> =
            m["exponents"].as_array().unwrap().iter().map(|e| e.as_u64().unwrap()).collect();
        let coeff = m["coefficient"].as_str().unwrap();
        let want = match exps[..] {
            [3, 0, 0] => "1",
            [0, 3, 0] => "2",
            [0, 0, 3] => "4",
            [1, 1, 1] => "-6",
            _ => "0",
        };
        assert_eq!(coeff, want, "coefficient of t^{exps:?}");
    }
}

#[test]
fn algebra_reduced_invariants_of_one() {
    let out =
        run(&["algebra", "--ell", "3", "--a", "2", "--b", "7", "--u", "1,0,0;0,0,0;0,0,0"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["nrd"], serde_json::json!("1"));
    assert_eq!(v["trd"], serde_json::json!("3"));
}

#[test]
fn pretty_flag_changes_rendering_not_value() {
    let plain = run(&["is-norm", "--ell", "3", "--x", "8", "--y", "7"]);
    let pretty = run(&["is-norm", "--ell", "3", "--x", "8", "--y", "7", "--pretty"]);
    assert_ne!(plain.stdout, pretty.stdout);
    assert_eq!(stdout_json(&plain), stdout_json(&pretty));
}

#[test]
fn height_bound_env_and_flag_gate_the_solver() {
    let out = bin()
        .args(["is-norm", "--ell", "2", "--x", "7", "--y", "2", "--solve"])
        .env("CYCLONORM_HEIGHT_BOUND", "1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 2, "bound 1 cannot reach the witness (3, 1)");
    assert!(stderr_json(&out)["error"].as_str().unwrap().contains("search exhausted"));

    let out = bin()
        .args(["is-norm", "--ell", "2", "--x", "7", "--y", "2", "--solve", "--height-bound", "5"])
        .env("CYCLONORM_HEIGHT_BOUND", "1")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "the flag overrides the environment");
    assert_eq!(stdout_json(&out)["witness"], serde_json::json!(["3", "1"]));
}

#[test]
fn certificate_round_trip_through_params_file_and_stdin() {
    let dir = std::env::temp_dir().join(format!("cyclonorm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let params_path = dir.join("params.json");
    let cert_path = dir.join("cert.json");

    let out = run(&["fixab", "--ell", "3"]);
    assert_eq!(code(&out), 0);
    let params = stdout_json(&out)["params"].clone();
    std::fs::write(&params_path, serde_json::to_string(&params).unwrap()).unwrap();
    let p = params_path.to_str().unwrap();

    let out = run(&["certificate", "build", "--params", p, "--x", "2", "--y", "7"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let cert = stdout_json(&out)["certificate"].clone();
    std::fs::write(&cert_path, serde_json::to_string(&cert).unwrap()).unwrap();

    let out = run(&[
        "certificate", "verify", "--params", p, "--x", "2", "--y", "7",
        "--certificate", cert_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["valid"], Value::Bool(true));

    // same verification with the certificate streamed through stdin
    let mut child = bin()
        .args(["certificate", "verify", "--params", p, "--x", "2", "--y", "7", "--certificate", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(serde_json::to_string(&cert).unwrap().as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);

    // a wrong pair must be rejected with exit code 1
    let out = run(&[
        "certificate", "verify", "--params", p, "--x", "8", "--y", "7",
        "--certificate", cert_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["valid"], Value::Bool(false));

    std::fs::remove_dir_all(&dir).ok();
}

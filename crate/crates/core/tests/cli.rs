use std::process::{Command, Output};

use serde_json::Value;

fn ekmu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ekmu"))
        .args(args)
        .env_remove("EKMU_PARALLEL")
        .output()
        .expect("run ekmu")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let o = ekmu(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).expect("valid JSON")
}

#[test]
fn invariants_json_for_h8() {
    let v = json(&["invariants", "--h", "8", "--format", "json"]);
    assert_eq!(v["mu"], "0");
    assert_eq!(v["diffeo_s7"], true);
    assert_eq!(v["h"], 8);
    assert_eq!(v["p1_magnitude"], 30);
    assert_eq!(v["p1_squared"], 900);
    assert_eq!(v["theta7"], 0);
}

#[test]
fn invariants_json_for_exotic_generator() {
    let v = json(&["invariants", "--h", "2", "--format", "json"]);
    assert_eq!(v["mu"], "1/28");
    assert_eq!(v["diffeo_s7"], false);
    assert_eq!(v["theta7"], 1);
}

#[test]
fn huge_h_stays_exact() {
    let h = "123456789012345678901234567890123456789012345678901234567890";
    let v = json(&["quotient", "--h", h, "--format", "json"]);
    assert_eq!(v["h"].to_string(), h);
    // 123…890 ≡ 42 mod 56, not a valid class
    assert_eq!(v["verdict"], "not_applicable");
    let v = json(&["invariants", "--h", h, "--format", "json"]);
    assert_eq!(v["diffeo_s7"], false);
}

#[test]
fn quotient_table_for_h8() {
    let o = ekmu(&["quotient", "--h", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("verdict                RP7"), "{out}");
    assert!(out.contains("{1/32, 31/32} mod 1"), "{out}");
    assert!(out.contains("±15/16"), "{out}");
}

#[test]
fn quotient_json_schema() {
    let v = json(&["quotient", "--h", "49", "--format", "json"]);
    assert_eq!(v["a1"], serde_json::json!(["-97/16", "97/16"]));
    assert_eq!(v["a2"], "1");
    assert_eq!(v["equivariant_signature"], 1);
    assert_eq!(v["mu_quotient"], serde_json::json!(["1/32", "31/32"]));
    assert_eq!(v["verdict"], "RP7");
}

#[test]
fn quotient_not_applicable_exits_zero() {
    let v = json(&["quotient", "--h", "2", "--format", "json"]);
    assert_eq!(v["verdict"], "not_applicable");
    assert!(v["mu_quotient"].is_null());
}

#[test]
fn enumerate_outputs() {
    let v = json(&["enumerate", "--modulus", "112", "--format", "json"]);
    assert_eq!(v["residues"], serde_json::json!([0, 1, 8, 49, 56, 57, 64, 105]));
    assert_eq!(v["crt_agrees"], true);
    let o = ekmu(&["enumerate", "--modulus", "56"]);
    assert!(stdout(&o).contains("residues    0, 1, 8, 49"), "{}", stdout(&o));
}

#[test]
fn cases_json() {
    let v = json(&["cases", "--k-range", "-100..=100", "--format", "json"]);
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 4);
    let consts: Vec<(String, String)> = reports
        .iter()
        .map(|r| {
            assert_eq!(r["matches"], true);
            assert_eq!(r["checked"], 201);
            (
                r["half_term_constant"].as_str().unwrap().to_string(),
                r["sign_term_constant"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    let expect = [("0", "31/32"), ("0", "1/32"), ("1/2", "15/32"), ("0", "1/32")];
    for (got, want) in consts.iter().zip(expect) {
        assert_eq!((got.0.as_str(), got.1.as_str()), want);
    }
}

#[test]
fn verify_csv_over_two_hundred_periods() {
    let o = ekmu(&["verify", "--h-range", "-5600..5600", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("h,residue_class,mu_quotient_set,verdict,pass"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 800);
    assert!(rows.iter().all(|r| r.ends_with(",\"{1/32,31/32}\",RP7,true")), "{}", rows[0]);
    assert_eq!(rows[0], "-5600,0,\"{1/32,31/32}\",RP7,true");
}

#[test]
fn verify_parallel_matches_sequential_and_is_deterministic() {
    let seq = ekmu(&["verify", "--h-range", "-2000..=2000", "--format", "json"]);
    let again = ekmu(&["verify", "--h-range", "-2000..=2000", "--format", "json"]);
    let par = ekmu(&["verify", "--h-range", "-2000..=2000", "--format", "json", "--parallel", "3"]);
    let env = Command::new(env!("CARGO_BIN_EXE_ekmu"))
        .args(["verify", "--h-range", "-2000..=2000", "--format", "json"])
        .env("EKMU_PARALLEL", "2")
        .output()
        .unwrap();
    assert_eq!(seq.stdout, again.stdout);
    assert_eq!(seq.stdout, par.stdout);
    assert_eq!(seq.stdout, env.stdout);
    let v: Value = serde_json::from_slice(&seq.stdout).unwrap();
    assert_eq!(v["failed"], 0);
    // independent count: sum(h*(h-1) % 56 == 0 for h in range(-2000, 2001))
    assert_eq!(v["checked"], 284);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["invariants"][..],
        &["quotient", "--h", "x"],
        &["verify", "--h-range", "10..0"],
        &["cases", "--k-range", "nonsense"],
        &["enumerate", "--modulus", "2000000"],
        &["invariants", "--h", "1", "--format", "xml"],
        &[],
    ] {
        let o = ekmu(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

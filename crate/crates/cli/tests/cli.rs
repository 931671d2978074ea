use std::process::Command;

use dsym_core::seqform::SequenceClosedForm;
use dsym_core::symmetry::SymmetryGenerator;
use serde_json::Value;

fn dsym(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dsym"))
        .args(args)
        .output()
        .expect("run dsym");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let (code, out, err) = dsym(&all);
    let v: Value = serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}{err}"));
    (code, v)
}

fn temp_file(name: &str, body: &str) -> String {
    let dir = std::env::temp_dir().join(format!("dsym-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn verify_catalog_generator() {
    let (code, v) = json(&["verify", "--eq", "dP5", "--gen", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["payload"]["verdict"], "pass");
    assert_eq!(
        v["payload"]["residues_checked"],
        serde_json::json!([0, 1, 2])
    );
    let (_, v) = json(&["verify", "--eq", "dP5", "--gen", "X2"]);
    assert_eq!(v["payload"]["anchor"], "dP5/default/X2");
}

#[test]
fn verify_user_generator_fails_with_witness() {
    let g = SymmetryGenerator::monomial(SequenceClosedForm::constant_gq(1.into()), 2, "u^2");
    let path = temp_file("q_u2.json", &g.to_json().to_string());
    let (code, v) = json(&[
        "verify", "--eq", "dP2", "--branch", "zero", "--gen", &path, "--mode", "numeric",
    ]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "verification_failed");
    assert!(v["payload"]["witness"].is_object());
    let (code, _, _) = dsym(&["verify", "--eq", "dP2", "--branch", "zero", "--gen", &path]);
    assert_eq!(code, 2);
}

#[test]
fn unknown_references_are_errors() {
    let (code, v) = json(&["verify", "--eq", "dP9", "--gen", "1"]);
    assert_eq!((code, v["status"].as_str()), (1, Some("error")));
    let (code, _) = json(&["verify", "--eq", "dP1", "--branch", "zero", "--gen", "X7"]);
    assert_eq!(code, 1);
    let (code, _, _) = dsym(&["verify", "--eq", "dP1", "--gen", "X1"]);
    assert_eq!(code, 1, "dP1 has two branches");
}

#[test]
fn determine_examples() {
    let (code, v) = json(&[
        "determine",
        "--eq",
        "dP1",
        "--branch",
        "a_nonzero",
        "--degree",
        "1",
        "--xi",
        "affine",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["generators"].as_array().unwrap().len(), 1);

    let (_, v) = json(&[
        "determine",
        "--eq",
        "dP3",
        "--branch",
        "bcase",
        "--degree",
        "1",
    ]);
    let cs: Vec<&str> = v["payload"]["constraints"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_str().unwrap())
        .collect();
    assert!(
        cs.contains(&"alpha_1: alpha_1(n+2) + alpha_1(n+1) + alpha_1(n) = 0"),
        "{cs:?}"
    );
    assert!(cs.contains(&"alpha_0 = 0"));

    let (_, v) = json(&[
        "determine",
        "--eq",
        "dP1",
        "--branch",
        "zero",
        "--degree",
        "1",
    ]);
    let gens = v["payload"]["generators"].as_array().unwrap();
    assert!(gens.len() >= 4);
    assert!(gens.iter().any(|g| g["xi"] == "1" && g["Q"] == "0"));
}

fn values(v: &Value) -> Vec<Value> {
    v["payload"]["trajectory"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["value"].clone())
        .collect()
}

#[test]
fn simulate_examples() {
    let (_, v) = json(&[
        "simulate", "--eq", "dP1", "--branch", "zero", "--init", "1,1", "--steps", "30",
    ]);
    let vals = values(&v);
    assert_eq!(vals.len(), 32);
    for n in 3..32 {
        assert_eq!(vals[n], vals[n - 3]);
    }

    let (_, u) = json(&[
        "simulate", "--eq", "dP4", "--branch", "zero", "--init", "1,1", "--steps", "10",
    ]);
    let (_, w) = json(&[
        "simulate", "--eq", "dP1", "--branch", "zero", "--init", "1,1", "--steps", "10",
    ]);
    let recip: Vec<String> = values(&u)
        .iter()
        .map(|x| {
            let s = x.as_str().unwrap();
            match s.strip_prefix('-') {
                Some(r) => format!("-{}", invert(r)),
                None => invert(s),
            }
        })
        .collect();
    let w: Vec<String> = values(&w)
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect();
    assert_eq!(recip, w);

    let (code, v) = json(&[
        "simulate",
        "--eq",
        "dP1",
        "--branch",
        "a_nonzero",
        "--param",
        "a=1",
        "--param",
        "b=0",
        "--init",
        "1,0",
        "--steps",
        "3",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["trajectory"][2]["flag"], "singular");
}

/// `p/q ↦ q/p` on positive rational literals.
fn invert(s: &str) -> String {
    match s.split_once('/') {
        Some(("1", q)) => q.to_string(),
        Some((p, q)) => format!("{q}/{p}"),
        None if s == "1" => "1".into(),
        None => format!("1/{s}"),
    }
}

#[test]
fn csv_matches_json() {
    let args = [
        "simulate", "--eq", "dP2", "--branch", "zero", "--init", "1/2+i,3", "--steps", "12",
        "--mode", "float",
    ];
    let (_, v) = json(&args);
    let mut csv_args = args.to_vec();
    csv_args.extend_from_slice(&["--out", "csv"]);
    let (code, out, _) = dsym(&csv_args);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().skip(1).collect();
    let traj = v["payload"]["trajectory"].as_array().unwrap();
    assert_eq!(rows.len(), traj.len());
    for (row, e) in rows.iter().zip(traj) {
        let f: Vec<&str> = row.split(',').collect();
        assert_eq!(f[0].parse::<i64>().unwrap(), e["n"].as_i64().unwrap());
        assert_eq!(f[1].parse::<f64>().unwrap(), e["re"].as_f64().unwrap());
        assert_eq!(f[2].parse::<f64>().unwrap(), e["im"].as_f64().unwrap());
        assert_eq!(f[3], e["flag"].as_str().unwrap());
    }
}

#[test]
fn reduce_examples() {
    let (code, v) = json(&["reduce", "--eq", "dP1", "--branch", "zero", "--gen", "X1"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["reduced_map"], "v(n+1) = (-v(n) - 1)/v(n)");
    assert_eq!(v["payload"]["map_class"], "moebius");

    let (_, v) = json(&[
        "reduce",
        "--eq",
        "dP2",
        "--branch",
        "zero",
        "--gen",
        "X2+iX3",
        "--u0",
        "2",
        "--u1",
        "3",
        "--audit",
        "closed_form",
    ]);
    assert_eq!(v["payload"]["reduced_map"], "v(n+1) = -i*v(n)");
    assert_eq!(v["payload"]["reconstruction"]["checked_steps"], 31);
    assert_eq!(v["payload"]["audit"][0]["verdict"], "mismatch");
    assert_eq!(v["payload"]["audit"][0]["first_fail_n"], 0);

    let (_, v) = json(&[
        "reduce", "--eq", "dP4", "--branch", "zero", "--gen", "X1", "--audit", "ceiling",
    ]);
    assert_eq!(v["payload"]["audit"][0]["verdict"], "mismatch");

    let (code, v) = json(&["reduce", "--eq", "dP5", "--gen", "X1"]);
    assert_eq!(code, 1);
    assert_eq!(v["payload"]["kind"], "UnsupportedFamily");
}

#[test]
fn catalog_export_round_trips() {
    let (code, v) = json(&[
        "catalog",
        "export",
        "--id",
        "dP3",
        "--branch",
        "reciprocal_case",
    ]);
    assert_eq!(code, 0);
    let p = &v["payload"];
    assert_eq!(p["generators"].as_array().unwrap().len(), 7);
    let eq_path = temp_file("dp3.json", &p["equation"].to_string());
    let gen_path = temp_file("dp3_x5.json", &p["generators"][4]["generator"].to_string());
    let (code, v) = json(&["verify", "--eq", &eq_path, "--gen", &gen_path]);
    assert_eq!(code, 0, "{v}");

    let (_, v) = json(&["catalog", "list"]);
    assert_eq!(v["payload"]["total_generators"], 29);
}

#[test]
fn selftest_is_deterministic() {
    let a = dsym(&["--format", "json", "selftest"]);
    let b = dsym(&["--format", "json", "selftest"]);
    assert_eq!(a.0, 0);
    assert_eq!(a, b);
}

/// Exit code and reported status agree over a matrix of invocations.
#[test]
fn exit_code_contract() {
    let matrix: Vec<(Vec<&str>, i32)> = vec![
        (vec!["parse", "u(0)/(u(1)+1)"], 0),
        (vec!["parse", "u(0"], 1),
        (
            vec![
                "verify", "--eq", "dP4", "--branch", "general", "--gen", "X1",
            ],
            2,
        ),
        (
            vec![
                "verify", "--eq", "dP4", "--branch", "general", "--gen", "X1", "--param", "mu=0",
            ],
            0,
        ),
        (
            vec![
                "verify", "--eq", "dP4", "--branch", "general", "--gen", "X3", "--mode", "numeric",
            ],
            0,
        ),
        (vec!["solve-recurrence", "--coeffs", "1,0,1"], 0),
        (vec!["solve-recurrence", "--coeffs", "-1,-1,1"], 1),
        (vec!["transform", "--eq", "dP5", "--kind", "reciprocal"], 0),
        (vec!["transform", "--eq", "dP5", "--kind", "cube"], 1),
        (vec!["catalog", "export", "--id", "dP0"], 1),
        (
            vec![
                "reduce", "--eq", "dP1", "--branch", "zero", "--gen", "X1", "--u0", "0", "--u1",
                "1",
            ],
            1,
        ),
    ];
    for (args, want) in matrix {
        let (code, v) = json(&args);
        assert_eq!(code, want, "{args:?}: {v}");
        let status = match want {
            0 => "ok",
            2 => "verification_failed",
            _ => "error",
        };
        assert_eq!(v["status"], status, "{args:?}");
    }
    let (code, _, _) = dsym(&["no-such-command"]);
    assert_eq!(code, 1);
}

#[test]
fn transform_examples() {
    let (_, v) = json(&[
        "transform",
        "--eq",
        "dP4",
        "--branch",
        "zero",
        "--kind",
        "reciprocal",
    ]);
    assert_eq!(v["payload"]["canonical"], "-u(1) - u(0)");
    let (_, v) = json(&["transform", "--eq", "dP5", "--kind", "reciprocal"]);
    assert_eq!(v["payload"]["canonical"], "-u(1) - u(0) + 2");
}

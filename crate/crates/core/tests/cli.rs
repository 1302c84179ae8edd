use std::fs;

use cellres::cli::run;
use serde_json::Value;

const EXAMPLE_IDEAL: &str = r#"{"ring": {"variables": ["x","y","z","w"]}, "generators": ["y*w", "x*y*z", "x^2*y", "z^4*w"]}"#;

struct Outcome {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cellres(args: &[&str], stdin: &str) -> Outcome {
    let mut argv = vec!["cellres"];
    argv.extend_from_slice(args);
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

/// Runs `first | second`, asserting the first stage succeeds.
fn pipe(first: (&[&str], &str), second: &[&str]) -> Outcome {
    let a = cellres(first.0, first.1);
    assert_eq!(a.code, 0, "{}", a.stderr);
    cellres(second, &a.stdout)
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn taylor_then_check() {
    let o = pipe((&["taylor"], EXAMPLE_IDEAL), &["check"]);
    assert_eq!(o.code, 0);
    let v = json(&o.stdout);
    assert_eq!(v["isResolution"], true);
    assert_eq!(v["isMinimal"], false);
    assert_eq!(v["witness"], Value::Null);
}

#[test]
fn scarf_cycle_check_reports_witness() {
    let ideal =
        r#"{"ring": {"variables": ["x","y","z","w"]}, "generators": ["x*y","y*z","z*w","w*x"]}"#;
    let o = pipe((&["scarf"], ideal), &["check"]);
    let v = json(&o.stdout);
    assert_eq!(v["isResolution"], false);
    assert_eq!(v["witness"]["multidegree"], "x*y*z*w");
    assert_eq!(v["witness"]["degree"], 1);
    assert_eq!(v["witness"]["rank"], 1);
    assert_eq!(v["isMinimal"], true);

    let b = pipe((&["scarf"], ideal), &["betti"]);
    assert_eq!(b.code, 1);
    assert!(b.stderr.contains("not a resolution"));
}

#[test]
fn rp3_homology_over_f2() {
    let o = pipe(
        (&["space", "rpn", "--dim", "3", "--field", "Fp:2"], ""),
        &["homology"],
    );
    assert_eq!(o.code, 0);
    assert_eq!(
        o.stdout,
        "-1 : 0\n 0 : 0\n 1 : ZZ/2^1\n 2 : ZZ/2^1\n 3 : ZZ/2^1\n"
    );
    let z = pipe(
        (&["space", "rpn", "--dim", "3"], ""),
        &["homology", "--coeff", "Z", "--no-reduced"],
    );
    assert_eq!(z.stdout, "0 : ZZ^1\n1 : ZZ/2\n2 : 0\n3 : ZZ^1\n");
}

#[test]
fn poset_of_rp3() {
    let o = pipe((&["space", "rpn", "--dim", "3"], ""), &["poset"]);
    assert_eq!(
        o.stdout,
        "c0 c1 c2 c3\n| 1 1 1 1 |\n| 0 1 1 1 |\n| 0 0 1 1 |\n| 0 0 0 1 |\n"
    );
}

#[test]
fn chain_export() {
    let o = pipe((&["taylor"], EXAMPLE_IDEAL), &["chain"]);
    let v = json(&o.stdout);
    assert_eq!(v["lo"], -1);
    assert_eq!(v["ranks"], serde_json::json!([1, 4, 6, 4, 1]));
    let aug = &v["differentials"][0];
    assert_eq!(aug["degree"], 0);
    assert_eq!(aug["rows"], serde_json::json!(["ambient"]));
    assert_eq!(aug["entries"][0], serde_json::json!([0, 0, 1, "y*w"]));

    let shifted = pipe((&["taylor"], EXAMPLE_IDEAL), &["chain", "--shift", "-1"]);
    let v = json(&shifted.stdout);
    assert_eq!(v["lo"], 0);
    assert_eq!(v["hi"], 4);
}

#[test]
fn graded_homology_output() {
    let o = pipe((&["scarf"], EXAMPLE_IDEAL), &["homology", "--graded"]);
    assert_eq!(
        o.stdout,
        "-1 : cokernel | y*w x*y*z x^2*y z^4*w |\n 0 : 0\n 1 : 0\n 2 : 0\n"
    );
}

#[test]
fn validate_reports_corrupted_sign() {
    let good = cellres(&["taylor"], EXAMPLE_IDEAL);
    let ok = cellres(&["validate"], &good.stdout);
    assert_eq!(ok.code, 0);
    assert_eq!(ok.stdout, "valid\n");

    let mut v = json(&good.stdout);
    let cells = v["cells"].as_array_mut().unwrap();
    let tri = cells.iter_mut().find(|c| c["id"] == "1,2,3").unwrap();
    tri["boundary"][0][1] = Value::from(-1);
    let bad = cellres(&["validate"], &v.to_string());
    assert_eq!(bad.code, 1);
    assert!(bad.stdout.contains("1,2,3"), "{}", bad.stdout);
    assert!(bad.stderr.contains("violation"));
}

#[test]
fn every_constructor_output_validates() {
    let hull = cellres(&["hull"], EXAMPLE_IDEAL);
    let hull_t = cellres(&["hull", "--t", "1000"], EXAMPLE_IDEAL);
    let scarf = cellres(&["scarf"], EXAMPLE_IDEAL);
    let taylor = cellres(&["taylor"], EXAMPLE_IDEAL);
    let torus = cellres(&["space", "torus", "--dim", "3"], "");
    let sphere = cellres(&["space", "sphere", "--dim", "2", "--vars", "a,b"], "");
    let poly = cellres(&["frompoly"], r#"{"vertices": [[0,0],[1,0],[0,1],[1,1]]}"#);
    for o in [hull, hull_t, scarf, taylor, torus, sphere, poly] {
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v = cellres(&["validate"], &o.stdout);
        assert_eq!(v.stdout, "valid\n");
    }
}

#[test]
fn frompoly_with_labels_and_relabel() {
    let dir = std::env::temp_dir().join(format!("cellres-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let segments = r#"[{"vertices": [[5,1],[3,2]]}, {"vertices": [[3,2],[2,3]]}, {"vertices": [["2","3"],["0","7"]]}]"#;
    let labels = dir.join("labels.json");
    fs::write(
        &labels,
        r#"{"5,1": "a^5*b", "(3,2)": "a^3*b^2", "[2,3]": "a^2*b^3", "0,7": "b^7"}"#,
    )
    .unwrap();
    let o = cellres(
        &["frompoly", "--labels", labels.to_str().unwrap()],
        segments,
    );
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o.stdout);
    assert_eq!(v["ring"]["variables"], serde_json::json!(["a", "b"]));
    let edge_labels: Vec<&Value> = v["cells"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["dim"] == 1)
        .map(|c| &c["label"])
        .collect();
    assert_eq!(edge_labels.len(), 3);

    let unlabeled = cellres(&["frompoly", "--vars", "a,b"], segments);
    let vertex_labels = dir.join("vertex-labels.json");
    fs::write(
        &vertex_labels,
        r#"{"p1": "b^7", "p2": "a^2*b^3", "p3": "a^3*b^2", "p4": "a^5*b"}"#,
    )
    .unwrap();
    let relabeled = cellres(
        &["relabel", "--labels", vertex_labels.to_str().unwrap()],
        &unlabeled.stdout,
    );
    assert_eq!(relabeled.code, 0, "{}", relabeled.stderr);
    assert_eq!(json(&relabeled.stdout)["cells"], v["cells"]);

    let out = dir.join("out.json");
    let written = cellres(
        &["frompoly", "--vars", "a,b", "--out", out.to_str().unwrap()],
        segments,
    );
    assert_eq!(written.stdout, "");
    assert_eq!(fs::read_to_string(&out).unwrap(), unlabeled.stdout);
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn ideal_file_errors_and_warnings() {
    let redundant = r#"{"ring": {"variables": ["x","y"]}, "generators": ["x*y","x^2*y"]}"#;
    let o = cellres(&["taylor"], redundant);
    assert_eq!(o.code, 0);
    assert!(o.stderr.contains("warning"));
    assert_eq!(json(&o.stdout)["cells"].as_array().unwrap().len(), 1);

    let empty = r#"{"ring": {"variables": ["x"]}, "generators": []}"#;
    assert_eq!(cellres(&["taylor"], empty).code, 1);

    let bad = r#"{"ring": {"variables": ["x"]}, "generators": ["x", "q^2"]}"#;
    let o = cellres(&["taylor"], bad);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("generator 2"), "{}", o.stderr);

    assert_eq!(cellres(&["taylor"], "not json").code, 2);
    assert_eq!(
        cellres(&["taylor", "-i", "/nonexistent/file.json"], "").code,
        2
    );
}

#[test]
fn usage_and_domain_errors() {
    assert_eq!(cellres(&["bogus"], "").code, 2);
    assert_eq!(cellres(&["space", "sphere", "--dim", "0"], "").code, 1);
    assert_eq!(
        cellres(&["space", "rpn", "--dim", "2", "--field", "Fp:4"], "").code,
        2
    );
    assert_eq!(cellres(&["hull", "--t", "1"], EXAMPLE_IDEAL).code, 1);
    assert_eq!(cellres(&["--help"], "").code, 0);
    let overlapping = r#"[{"vertices": [[0,0],[2,2]]}, {"vertices": [[0,2],[2,0]]}]"#;
    let o = cellres(&["frompoly"], overlapping);
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("not a common face"));
}

#[test]
fn random_ideals_are_reproducible() {
    let a = cellres(&["gen-random-ideal", "--seed", "42"], "");
    let b = cellres(&["gen-random-ideal", "--seed", "42"], "");
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let generic = cellres(
        &[
            "gen-random-ideal",
            "--seed",
            "1",
            "--generic",
            "--max-exponent",
            "9",
        ],
        "",
    );
    assert_eq!(generic.code, 0);
    let t = cellres(&["taylor"], &generic.stdout);
    assert_eq!(t.code, 0);
    assert_eq!(cellres(&["check"], &t.stdout).code, 0);
}

#[test]
fn outputs_are_deterministic() {
    let a = pipe((&["hull"], EXAMPLE_IDEAL), &["chain"]);
    let b = pipe((&["hull"], EXAMPLE_IDEAL), &["chain"]);
    assert_eq!(a.stdout, b.stdout);
}

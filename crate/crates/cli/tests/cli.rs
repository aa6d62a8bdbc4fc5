use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tangle-double")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn temp_doc(name: &str, body: &str) -> std::path::PathBuf {
    let p = std::env::temp_dir().join(format!("tangle-double-cli-{}-{name}.json", std::process::id()));
    std::fs::File::create(&p).unwrap().write_all(body.as_bytes()).unwrap();
    p
}

#[test]
fn double_trefoil_golden() {
    let o = run(&["double", "--knot", "trefoil"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "r[4]\ns[2] d=2 a1=1 a2=1\nsbar[2] d=2 a1=-1 a2=-1\n");
    assert!(stderr(&o).is_empty());
}

#[test]
fn double_segment_tier_goldens() {
    let o = run(&["double", "--knot", "figure8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "r[0]\ns[2] d=0 a1=-1 a2=-1\ns[2] d=1 a1=1 a2=1\nsbar[2] d=0 a1=1 a2=1\nsbar[2] d=1 a1=-1 a2=-1\n"
    );
    assert!(stderr(&o).contains("segments-tier"));
    let o = run(&["double", "--knot", "torus_3_4"]);
    assert_eq!(
        stdout(&o),
        "r[12]\ns[2] d=6 a1=5 a2=5\ns[4] d=2 a1=-2 a2=-2\nsbar[2] d=6 a1=-5 a2=-5\nsbar[4] d=2 a1=2 a2=2\n"
    );
}

#[test]
fn double_is_deterministic() {
    for args in [&["double", "--knot", "trefoil", "--format", "json"][..], &["selftest"][..]] {
        assert_eq!(run(args).stdout, run(args).stdout);
    }
}

#[test]
fn double_json_mirrors_input() {
    let o = run(&["double", "--knot", "trefoil", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["name"], "trefoil");
    assert_eq!(v["tier"], "cfd");
    assert!(v["generators"].is_array());
    assert_eq!(v["graded"], true);
    let curves = v["curves"].as_array().unwrap();
    assert_eq!(curves.len(), 3);
    assert_eq!(curves[0]["kind"], "r");
    assert_eq!(curves[0]["param"], 4);
    assert_eq!(curves[1]["delta"], "2");
}

#[test]
fn ungraded_flag_and_hfk_tier() {
    let o = run(&["double", "--knot", "trefoil", "--ungraded"]);
    assert_eq!(stdout(&o), "r[4]\ns[2]\nsbar[2]\n");
    let p = temp_doc("hfk", r#"{"name":"h","tier":"hfk_minus","tau":1,"torsion":[1]}"#);
    let o = run(&["double", "--file", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "r[4]\ns[2]\nsbar[2]\n");
    assert!(stderr(&o).contains("ungraded"));
}

#[test]
fn segments_command() {
    let o = run(&["segments", "--knot", "trefoil"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("d[2]\n"));
    let o = run(&["segments", "--knot", "trefoil", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tier"], "segments");
    assert_eq!(v["segments"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_builtins() {
    for knot in ["unknot", "trefoil"] {
        let o = run(&["verify", "--knot", knot]);
        assert_eq!(o.status.code(), Some(0), "{knot}: {}", stderr(&o));
        assert_eq!(stdout(&o), "equal\n");
    }
}

#[test]
fn verify_needs_cfd_tier() {
    let o = run(&["verify", "--knot", "figure8"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stderr(&o).lines().count(), 1);
}

#[test]
fn cable_examples() {
    let o = run(&["cable", "--knot", "torus_3_4", "--t", "5"]);
    assert_eq!(stdout(&o), "dim=13 lower=9 upper=17\n");
    let o = run(&["cable", "--knot", "trefoil", "--t", "3"]);
    assert_eq!(stdout(&o), "dim=7 lower=5 upper=7\n");
    let o = run(&["cable", "--knot", "trefoil", "--t", "-3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "dim=13 lower=5 upper=13\n");
    let o = run(&["cable", "--d", "3", "--lmax", "1", "--tau", "1", "--t", "3"]);
    assert_eq!(stdout(&o), "lower=5 upper=7\n");
}

#[test]
fn pair_and_kh_bound() {
    let o = run(&["pair", "--left", "r7", "--right", "s2"]);
    assert_eq!(stdout(&o), "dim=4\n");
    let o = run(&["pair", "--left", "r3", "--right", "r3", "--theory", "kh"]);
    assert_eq!(stdout(&o), "dim=4\n");
    let o = run(&["pair", "--left", "s2", "--right", "sbar2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["kh-bound", "--d", "3", "--theta2", "1", "--t", "1"]);
    assert_eq!(stdout(&o), "lower=17\n");
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 8);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
    for i in ["0", "1", "-2"] {
        assert!(text.contains(&format!("test pairing {i}:")));
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["double"][..],
        &["double", "--knot", "trefoil", "--file", "x"][..],
        &["cable", "--t", "1"][..],
        &["pair", "--left", "s3", "--right", "r1"][..],
        &["frobnicate"][..],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr(&o).lines().count(), 1, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn domain_errors_exit_one() {
    let o = run(&["double", "--knot", "nonesuch"]);
    assert_eq!(o.status.code(), Some(1));
    let p = temp_doc("bad", "{\"name\": \"x\",\n \"tier\": cfd}");
    let o = run(&["double", "--file", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    // An open chain is not loop-type.
    let p = temp_doc(
        "chain",
        r#"{"name":"sq","tier":"cfd","generators":[{"id":"x","idem":"dot"},{"id":"y","idem":"circ"},{"id":"z","idem":"dot"}],
            "arrows":[{"from":"x","to":"y","labels":["s3"]},{"from":"y","to":"z","labels":["s2"]}]}"#,
    );
    let o = run(&["double", "--file", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("loop-type"));
}

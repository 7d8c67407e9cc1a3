use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn penny(args: &[&str], stdin: Option<&[u8]>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_penny"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn penny");
    {
        let mut pipe = child.stdin.take().unwrap();
        if let Some(data) = stdin {
            pipe.write_all(data).unwrap();
        }
    }
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("penny-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const TRIANGLE: &str = r#"{"mode": "exact", "points": [
  {"x": {"num": 0, "den": 1}, "y": {"num": 0, "den": 1}},
  {"x": {"num": 1, "den": 1}, "y": {"num": 0, "den": 1}},
  {"x": {"num": 1, "den": 2}, "y": {"num": 0, "den": 1, "rnum": 1, "rden": 2}}
]}"#;

#[test]
fn audit_triangle_passes() {
    let path = scratch("triangle.json");
    std::fs::write(&path, TRIANGLE).unwrap();
    let out = penny(&["audit", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["general_position"], true);
    assert!(r["checks"].as_object().unwrap().values().all(|c| c["status"] != "violation"));
}

#[test]
fn hex_lattice_discharge_is_not_applicable() {
    let lattice = penny(&["gen", "hex", "--k", "2"], None);
    assert_eq!(lattice.status.code(), Some(0));
    let out = penny(&["discharge", "--variant", "main"], Some(&lattice.stdout));
    assert_eq!(out.status.code(), Some(0));
    let v = &json(&out)["verdict"];
    assert_eq!(v["edges"], 42);
    assert_eq!(v["density"]["num"], 42);
    assert_eq!(v["density"]["den"], 19);
    assert_eq!(v["verdict"], "not applicable: general position fails");
}

#[test]
fn perturbed_discharge_passes_with_exact_bound() {
    let inst = penny(&["gen", "perturbed", "--k", "2", "--magnitude", "1/1000", "--seed", "1"], None);
    let out = penny(&["discharge", "-", "--variant", "weak"], Some(&inst.stdout));
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["verdict"]["verdict"], "pass");
    assert_eq!(r["verdict"]["density_bound"]["num"], 12);
    assert_eq!(r["verdict"]["density_bound"]["den"], 5);
    let out = penny(&["discharge", "-", "--q", "1/3"], Some(&inst.stdout));
    assert_eq!(json(&out)["verdict"]["charge_threshold"]["den"], 3);
}

#[test]
fn planted_violation_exits_2() {
    let fx = penny(&["gen", "fixture", "overlapping_kernels"], None);
    assert_eq!(fx.status.code(), Some(0));
    let out = penny(&["audit"], Some(&fx.stdout));
    assert_eq!(out.status.code(), Some(2));
    let r = json(&out);
    assert_eq!(r["checks"]["kernel_disjoint"]["status"], "violation");
}

#[test]
fn malformed_input_names_the_field() {
    let bad = r#"{"mode": "exact", "points": [{"x": {"num": 1, "den": 0}, "y": {"num": 0, "den": 1}}]}"#;
    let out = penny(&["build"], Some(bad.as_bytes()));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("points[0].x.den"));
    let out = penny(&["build"], Some(b"not json"));
    assert_eq!(out.status.code(), Some(1));
    let out = penny(&["frobnicate"], None);
    assert_eq!(out.status.code(), Some(1));
    let out = penny(&["gen", "fixture", "no_such_fixture"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn generated_file_round_trips() {
    let path = scratch("uniform.json");
    let out = penny(&["gen", "uniform", "--n", "40", "--seed", "3", "-o", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let a = penny(&["build", path.to_str().unwrap()], None);
    let b = penny(&["build", path.to_str().unwrap()], None);
    assert_eq!(a.stdout, b.stdout);
    let summary = json(&a);
    assert_eq!(summary["spec"]["kind"], "uniform");
    assert_eq!(summary["general_position"]["holds"], true);
    let again = penny(&["gen", "uniform", "--n", "40", "--seed", "3"], None);
    assert_eq!(again.stdout, std::fs::read(&path).unwrap());
}

#[test]
fn certify_clover_endpoints_contain_third_pi() {
    let out = penny(&["certify", "clover"], None);
    assert_eq!(out.status.code(), Some(0));
    let c = json(&out);
    let third = std::f64::consts::FRAC_PI_3;
    for key in ["endpoint_left", "endpoint_right"] {
        let (lo, hi) = (c[key]["lo"].as_f64().unwrap(), c[key]["hi"].as_f64().unwrap());
        assert!(lo <= third && third <= hi);
    }
    let out = penny(&["certify", "clover", "--eps", "0.1", "--delta", "1.0"], None);
    assert_eq!(out.status.code(), Some(2));
    let out = penny(&["certify", "clover", "--eps", "0.1"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn certify_kifli_passes() {
    let out = penny(&["certify", "kifli", "--grid", "16"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "pass");
}

#[test]
fn plot_writes_csv() {
    let path = scratch("angle.csv");
    let out = penny(&["plot", "clover-angle", "--samples", "11", "-o", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,angle");
    assert_eq!(lines.len(), 12);
}

#[test]
fn densify_embeds_search_summary() {
    let out = penny(&["gen", "densify", "--n", "12", "--iterations", "50", "--seed", "2"], None);
    assert_eq!(out.status.code(), Some(0));
    let f = json(&out);
    assert_eq!(f["spec"]["kind"], "densified");
    assert_eq!(f["search"]["bound_holds"], true);
    assert_eq!(f["points"].as_array().unwrap().len(), 12);
}

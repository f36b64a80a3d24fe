use minfill_cli::{dispatch, Outcome};
use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run(args: &[&str]) -> Outcome {
    let argv = std::iter::once("minfill".to_string()).chain(args.iter().map(|a| {
        if a.ends_with(".json") || a.ends_with(".csv") {
            fixture(a)
        } else {
            a.to_string()
        }
    }));
    dispatch(argv)
}

fn json(o: &Outcome) -> Value {
    serde_json::from_str(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", o.stdout))
}

#[test]
fn mf_on_the_five_point_space() {
    let o = run(&["mf", "fivepoint.json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    assert_eq!(v["command"], "mf");
    assert_eq!(v["weight"], "13");
    assert_eq!(v["n"], 5);
    assert_eq!(v["additive"], false);
}

#[test]
fn csv_and_json_agree() {
    let a = json(&run(&["mf", "fivepoint.json"]));
    let b = json(&run(&["mf", "fivepoint.csv"]));
    assert_eq!(a["weight"], b["weight"]);
    assert_eq!(a["digest"], b["digest"]);
}

#[test]
fn mpf_of_the_mustache() {
    let v = json(&run(&["mpf", "fivepoint.json", "--topology", "mustache.json"]));
    assert_eq!(v["weight"], "14");
    assert_eq!(v["weight_free"], "13");
}

#[test]
fn additive_simplex_is_a_star() {
    let o = run(&["additive", "simplex4.json"]);
    assert_eq!(o.code, 0);
    let v = json(&o);
    assert_eq!(v["additive"], true);
    let edges = v["tree"]["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 4);
    assert!(edges.iter().all(|e| e[2] == "1/2"));
}

#[test]
fn invalid_space_exits_one() {
    let o = run(&["validate", "bad.json"]);
    assert_eq!(o.code, 1);
    let v = json(&o);
    assert_eq!(v["error"]["kind"], "InvalidSpace");
    assert_eq!(v["error"]["detail"]["violations"][0]["kind"], "triangle_violation");
}

#[test]
fn usage_errors_exit_two() {
    for args in [&["bogus"][..], &["mf"], &["--cap", "0", "mf", "fivepoint.json"], &["ratios", "diamond.json"]] {
        let o = run(args);
        assert_eq!(o.code, 2, "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn help_exits_zero() {
    let o = run(&["--help"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("mf"));
}

#[test]
fn floats_only_in_float_mode() {
    let o = run(&["--mode", "float", "ratios", "diamond.json"]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    let v = json(&o);
    let ssr = v["float"]["ssr"].as_f64().unwrap();
    assert!((ssr - 0.894).abs() < 1e-3, "{ssr}");
    let exact = json(&run(&["ratios", "simplex4.json"]));
    assert!(exact.get("float").is_none());
    assert_eq!(exact["sgr"], "2/3");
}

#[test]
fn rays_agree() {
    let v = json(&run(&["rays", "fivepoint.json", "--a", "-1"]));
    assert_eq!(v["agrees"], true);
    assert_eq!(v["mf_shifted"], "21/2");
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("minfill-out-{}.txt", std::process::id()));
    let p = path.to_str().unwrap();
    let o = run(&["--out", p, "mf", "fivepoint.json"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["weight"], "13");
    std::fs::remove_file(path).ok();
}

#[test]
fn sweeps_are_reproducible() {
    let args = ["--seed", "9", "ratios", "--sweep", "random-metric", "--count", "30"];
    assert_eq!(run(&args), run(&args));
    let v = json(&run(&args));
    assert_eq!(v["violations"], 0);
}

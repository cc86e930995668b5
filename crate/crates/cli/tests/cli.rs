//! End-to-end runs of the command line in-process.

use std::path::PathBuf;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = tvamp_cli::run(std::iter::once("tvamp").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn field<'a>(out: &'a str, kind: &str, key: &str) -> &'a str {
    let line = out.lines().find(|l| l.split(' ').next() == Some(kind)).unwrap_or_else(|| panic!("no {kind} in {out}"));
    let prefix = format!("{key}=");
    line.split(' ').find_map(|f| f.strip_prefix(prefix.as_str())).unwrap_or_else(|| panic!("no {key} in {line}"))
}

#[test]
fn tv_of_the_three_sphere() {
    let (code, out, _) = run(&["tv", &data("boundary-4-simplex.tri"), "--r", "3"]);
    assert_eq!(code, 0);
    let v: f64 = field(&out, "tv", "value").parse().unwrap();
    assert!((v - 0.5).abs() < 1e-9);
    assert!(out.lines().any(|l| l.starts_with("input role=triangulation") && l.contains("sha256=")));
}

#[test]
fn tv_rt_check_passes() {
    let (code, out, _) =
        run(&["check", "tv-rt", "--triangulation", &data("s2xs1.tri"), "--surgery", "unknot:p=0", "--r", "4"]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "tv-rt", "pass"), "true");
}

#[test]
fn mismatched_tv_rt_exits_one() {
    let (code, out, _) =
        run(&["check", "tv-rt", "--triangulation", &data("s2xs1.tri"), "--surgery", "empty", "--r", "4"]);
    assert_eq!(code, 1);
    assert_eq!(field(&out, "tv-rt", "pass"), "false");
}

#[test]
fn input_errors_exit_two() {
    let (code, _, err) = run(&["tv", "missing.tri", "--r", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("kind=FileNotFound"), "{err}");
    let (code, _, _) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _, err) = run(&["tv", &data("boundary-4-simplex.tri")]);
    assert_eq!(code, 2);
    assert!(err.contains("--r"));
}

#[test]
fn parse_errors_carry_positions() {
    let dir = std::env::temp_dir().join(format!("tvamp-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.tri");
    std::fs::write(&bad, "tet 0\nglue 0 0 0 x 123\n").unwrap();
    let (code, _, err) = run(&["tv", bad.to_str().unwrap(), "--r", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("kind=ParseError") && err.contains("line 2"), "{err}");
    let bad = dir.join("bad.mat");
    std::fs::write(&bad, "1, 2\n3, 4/\n").unwrap();
    let (code, _, err) = run(&["amp", "positive", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 2, column 4"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn environment_prefix_sets_the_level() {
    // clap falls back to TVAMP_SEED when --seed is absent
    std::env::set_var("TVAMP_SEED", "9");
    let (code, out, _) = run(&["rt", "--surgery", "empty", "--r", "5"]);
    std::env::remove_var("TVAMP_SEED");
    assert_eq!(code, 0);
    assert_eq!(field(&out, "command", "seed"), "9");
}

#[test]
fn tvcode_projector() {
    let (code, out, _) =
        run(&["tvcode", "--surface", &data("sphere.surf"), "--r", "3", "--check-projector", "--expect-rank", "1"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(field(&out, "projector", "pass"), "true");
    assert_eq!(field(&out, "tvcode", "rank"), "1");
}

#[test]
fn pachner_move_and_output() {
    let dir = std::env::temp_dir().join(format!("tvamp-cli-pachner-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out_file = dir.join("moved.tri");
    let (code, out, _) = run(&[
        "pachner",
        &data("boundary-4-simplex.tri"),
        "--move",
        "2-3",
        "--at",
        "0",
        "--check-tv",
        "--r",
        "3",
        "--output",
        out_file.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(field(&out, "pachner", "tets"), "6");
    assert_eq!(field(&out, "pachner-tv", "pass"), "true");
    let (code, out, _) = run(&["tv", out_file.to_str().unwrap(), "--r", "3"]);
    assert_eq!(code, 0);
    assert!((field(&out, "tv", "value").parse::<f64>().unwrap() - 0.5).abs() < 1e-9);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn amp_commands() {
    let (code, out, _) = run(&["amp", "positive", &data("moment-curve-n6.mat")]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "positive", "totally_positive"), "true");
    let (code, out, _) = run(&["amp", "moment-map", "--c", &data("c-gr24.mat")]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "hypersimplex", "pass"), "true");
    let (code, out, _) = run(&["amp", "pluecker", &data("c-gr24.mat")]);
    assert_eq!(code, 0);
    assert_eq!(field(&out, "pluecker-relations", "violated"), "0");
    let (code, out, _) = run(&[
        "amp",
        "polygon-form",
        "--z",
        &data("moment-curve-n5.mat"),
        "--y",
        &data("y-interior-n5.mat"),
        "--triangulation",
        "1,2,3;1,3,4;1,4,5",
        "--all",
    ]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(field(&out, "polygon-form", "value"), "13/18000");
    assert_eq!(field(&out, "triangulation-independence", "distinct_values"), "1");
    let (code, _, err) = run(&[
        "amp",
        "polygon-form",
        "--z",
        &data("moment-curve-n5.mat"),
        "--y",
        &data("y-interior-n5.mat"),
        "--triangulation",
        "1,2,3;1,3,4",
    ]);
    assert_eq!(code, 2);
    assert!(err.contains("not a triangulation"), "{err}");
}

#[test]
fn thm2_is_side_by_side() {
    let (code, out, _) = run(&[
        "check",
        "thm2",
        "--triangulation",
        &data("boundary-4-simplex.tri"),
        "--z",
        &data("moment-curve-n5.mat"),
        "--y",
        &data("y-interior-n5.mat"),
        "--r",
        "5",
    ]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("thm2-side")).count(), 2);
}

#[test]
fn reports_are_reproducible() {
    let args = ["pachner", &data("s2xs1.tri"), "--random", "6", "--seed", "4", "--check-tv", "--r", "4"];
    let (_, a, _) = run(&args);
    let (_, b, _) = run(&args);
    assert_eq!(a, b);
    let (_, c, _) = run(&["pachner", &data("s2xs1.tri"), "--random", "6", "--seed", "5", "--r", "4"]);
    assert_ne!(field(&a, "pachner", "moves"), field(&c, "pachner", "moves"));
}

#[test]
fn recoupling_table_formats() {
    let (code, out, _) = run(&["recoupling", "table", "--r", "4", "--check"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().filter(|l| l.starts_with("delta ")).count(), 3);
    assert_eq!(out.lines().filter(|l| l.starts_with("identity ") && l.ends_with("pass=true")).count(), 2);
    let (_, tsv, _) = run(&["recoupling", "table", "--r", "4", "--format", "tsv"]);
    assert!(tsv.lines().any(|l| l.starts_with("delta\t2\t")), "{tsv}");
}

#[test]
fn precision_modes_agree() {
    let mut values = Vec::new();
    for bits in ["24", "64", "128"] {
        let (code, out, _) = run(&["tv", &data("boundary-4-simplex.tri"), "--r", "5", "--precision", bits]);
        assert_eq!(code, 0);
        values.push(field(&out, "tv", "value").parse::<f64>().unwrap());
    }
    let exact = (5.0 - 5f64.sqrt()) / 20.0;
    assert!((values[0] - exact).abs() < 1e-5);
    assert!((values[1] - exact).abs() < 1e-12);
    assert!((values[2] - exact).abs() < 1e-15);
}

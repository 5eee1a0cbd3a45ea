use std::path::PathBuf;
use std::process::{Command, Output};

fn sdt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdt"))
        .args(args)
        .output()
        .expect("sdt runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn temp_file(name: &str, contents: &str) -> String {
    let path = std::env::temp_dir().join(format!("sdt-cli-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn square_matches_golden() {
    let out = sdt(&["tri", "--input", &data("square.txt")]);
    assert_eq!(out.status.code(), Some(0));
    let golden = std::fs::read_to_string(data("square_triangles.txt")).unwrap();
    assert_eq!(stdout(&out), golden);
}

#[test]
fn output_is_deterministic() {
    for format in ["triangles", "edges", "off", "svg"] {
        let args = ["tri", "--gen", "300", "--seed", "4", "--format", format];
        assert_eq!(sdt(&args).stdout, sdt(&args).stdout, "{format}");
    }
}

#[test]
fn generated_points_round_trip_through_a_file() {
    let gen = sdt(&["gen", "--gen", "150", "--seed", "8"]);
    assert_eq!(gen.status.code(), Some(0));
    assert!(stdout(&gen).starts_with("# uniform n=150 seed=8\n"));
    let path = temp_file("gen.txt", &stdout(&gen));
    let from_file = sdt(&["tri", "--input", &path]);
    let direct = sdt(&["tri", "--gen", "150", "--seed", "8"]);
    assert_eq!(from_file.stdout, direct.stdout);
    let _ = std::fs::remove_file(path);
}

#[test]
fn hull_lists_original_indices() {
    let path = temp_file("hull.txt", "0.5 0.5\n0 0\n1 0\n1 1\n0 1\n0.5 0\n");
    let out = sdt(&["hull", "--input", &path, "--counters"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1\n2\n3\n4\n");
    assert!(String::from_utf8_lossy(&out.stderr).contains("to_left_calls="));
    let _ = std::fs::remove_file(path);
}

#[test]
fn verify_reports_every_property() {
    let out = sdt(&["verify", "--gen", "20", "--seed", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for prop in [
        "map_consistency",
        "euler_counts",
        "empty_circumcircle",
        "hull_baseline",
        "brute_force_delaunay",
        "to_left_count_identity",
    ] {
        assert!(
            text.contains(&format!("PROP {prop} PASS seed=2")),
            "{prop}\n{text}"
        );
    }
}

#[test]
fn exit_codes() {
    let collinear = temp_file("collinear.txt", "0,0\n1,1\n2,2\n");
    assert_eq!(sdt(&["tri", "--input", &collinear]).status.code(), Some(2));
    assert_eq!(
        sdt(&["verify", "--input", &collinear]).status.code(),
        Some(2)
    );
    let _ = std::fs::remove_file(collinear);

    let nan = temp_file("nan.txt", "0,NaN\n");
    let out = sdt(&["tri", "--input", &nan]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    let _ = std::fs::remove_file(nan);

    assert_eq!(
        sdt(&["tri", "--input", "/nonexistent/points.txt"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(sdt(&["tri"]).status.code(), Some(1));
    assert_eq!(
        sdt(&["tri", "--input", "x", "--gen", "5"]).status.code(),
        Some(1)
    );
    assert_eq!(
        sdt(&["bench", "--sizes", "10,20", "--reps", "2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(sdt(&["--help"]).status.code(), Some(0));
}

#[test]
fn bench_emits_csv() {
    let out = sdt(&["bench", "--sizes", "200,400", "--reps", "3", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("# seed=5\n"));
    assert!(text.contains("n,sort_ns,build_ns,to_left_calls,in_circle_calls\n"));
    assert!(text.lines().any(|l| l.starts_with("400,")));
}

#[test]
fn svg_to_file() {
    let path = std::env::temp_dir().join(format!("sdt-cli-{}-out.svg", std::process::id()));
    let path_str = path.to_string_lossy().into_owned();
    let out = sdt(&[
        "tri", "--gen", "40", "--seed", "1", "--format", "svg", "--out", &path_str,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let svg = std::fs::read_to_string(&path).unwrap();
    assert_eq!(svg.matches("<circle ").count(), 40);
    assert_eq!(svg.matches("<polygon ").count(), 1);
    let _ = std::fs::remove_file(path);
}

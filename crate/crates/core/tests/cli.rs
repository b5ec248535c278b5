use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn roughmat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roughmat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const INDUCE_PAIRS: &str = "\
PARTITION {1,2} {3,4}
THEOREM support-hitting PASS
THEOREM support-axioms PASS
THEOREM support-matroid PASS
THEOREM bases PASS
THEOREM independents PASS
THEOREM rank PASS
THEOREM hyperplanes PASS
THEOREM closed-sets PASS
THEOREM closed-axioms PASS
FAMILY S(R) size=9
{1,3}
{2,3}
{1,2,3}
{1,4}
{2,4}
{1,2,4}
{1,3,4}
{2,3,4}
{1,2,3,4}
FAMILY B(R) size=4
{1,3}
{2,3}
{1,4}
{2,4}
FAMILY I(R) size=9
{}
{1}
{2}
{3}
{1,3}
{2,3}
{4}
{1,4}
{2,4}
FAMILY H(R) size=2
{1,2}
{3,4}
FAMILY L(R) size=4
{}
{1,2}
{3,4}
{1,2,3,4}
RANK r(U)=2
";

#[test]
fn induce_golden() {
    let o = roughmat(&["induce", &fixture("pairs.txt")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), INDUCE_PAIRS);
}

#[test]
fn induce_is_byte_identical_across_runs() {
    let a = roughmat(&["induce", &fixture("pairs.txt")]);
    let b = roughmat(&["induce", &fixture("pairs.txt")]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.txt");
    let o = roughmat(&[
        "induce",
        &fixture("pairs.txt"),
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(path).unwrap(), INDUCE_PAIRS);
}

#[test]
fn approx_reports_rough_set() {
    let o = roughmat(&["approx", &fixture("pairs.txt"), &fixture("single.txt")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "APPROX X={1} lower={} upper={1,2} ROUGH\n");
}

#[test]
fn approx_properties_listing() {
    let o = roughmat(&[
        "approx",
        &fixture("pairs.txt"),
        &fixture("single.txt"),
        "--properties",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("PROPERTIES exhaustive pairs=256\n"));
    for code in [
        "1H", "1L", "2L", "2H", "3L", "3H", "4L", "4H", "5L", "5H", "6H",
    ] {
        assert!(text.contains(&format!("PROPERTY {code} PASS\n")), "{code}");
    }
}

#[test]
fn check_axioms_four_vector_family_passes() {
    let o = roughmat(&[
        "check-axioms",
        "--independents",
        &fixture("four_vectors.txt"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "AXIOM I1 PASS\nAXIOM I2 PASS\nAXIOM I3 PASS\n");
}

#[test]
fn check_axioms_failure_prints_witness() {
    let o = roughmat(&[
        "check-axioms",
        "--independents",
        &fixture("broken_exchange.txt"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        stdout(&o),
        "AXIOM I1 PASS\nAXIOM I2 PASS\nAXIOM I3 FAIL X={a3} Y={a1,a2}\n"
    );
}

#[test]
fn check_axioms_with_explicit_universe() {
    let o = roughmat(&[
        "check-axioms",
        "--supports",
        "--universe",
        "a1 a2 a3 a4",
        &fixture("four_vectors.txt"),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("AXIOM S1 PASS\nAXIOM S2 FAIL"));
}

#[test]
fn verify_is_clean() {
    let o = roughmat(&["verify", &fixture("pairs.txt")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).ends_with("VERIFY diffs=25 failures=0\n"));
}

#[test]
fn sweep_summary() {
    let o = roughmat(&["sweep", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "SWEEP n=4 partitions=15 failures=0\n");
}

#[test]
fn intersect_finds_strict_inclusion() {
    let o = roughmat(&["intersect", &fixture("pairs.txt"), &fixture("crossed.txt")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "REFINED {1} {2} {3} {4}\n\
         SUPPORTS refined=1 common=7\n\
         THEOREM intersection-inclusion PASS strict witness={1,4}\n"
    );
}

#[test]
fn malformed_file_reports_line() {
    let o = roughmat(&["induce", &fixture("malformed.txt")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["sweep", "8"],
        vec!["sweep", "0"],
        vec!["--cap", "25", "sweep", "3"],
        vec!["frobnicate"],
        vec!["check-axioms", "--closed", "--supports", "x.txt"],
        vec!["induce", "/nonexistent/partition.txt"],
    ] {
        let o = roughmat(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
    let pairs = fixture("pairs.txt");
    let o = roughmat(&["--cap", "3", "induce", &pairs]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn in_process_runner_matches_binary() {
    let args = ["roughmat", "induce", &fixture("pairs.txt")];
    let outcome = roughmat::cli::run_from(args);
    assert_eq!(outcome.code, 0);
    assert_eq!(outcome.stdout, INDUCE_PAIRS);
}

//! End-to-end tests of the binary: output formats, round trips through
//! real files, and the exit-code contract.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn noninc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noninc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn noninc_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noninc"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn search_q2_exact_prints_proven_value() {
    let out = noninc(&["search", "--q", "2", "--exact"]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("f=2 proven"));
}

#[test]
fn search_budget_exhaustion_exits_3() {
    let out = noninc(&["search", "--q", "3", "--budget", "1"]);
    assert_eq!(exit_code(&out), 3);
    assert!(stdout(&out).contains("budget_exhausted"));
}

#[test]
fn search_honors_thread_flag_and_env() {
    let out = noninc(&["search", "--q", "3", "--threads", "4"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("f=3 proven"));

    let out = Command::new(env!("CARGO_BIN_EXE_noninc"))
        .env("NONINC_THREADS", "2")
        .args(["search", "--q", "3"])
        .output()
        .unwrap();
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("f=3 proven"));
}

#[test]
fn search_heuristic_writes_verifiable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("h.cert");
    let out = noninc(&[
        "search",
        "--q",
        "8",
        "--heuristic",
        "--seeds",
        "5",
        "--cert",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("heuristic seeds=5"));

    let out = noninc(&["verify", "--plane", "8", "--cert", cert.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("valid"));
}

#[test]
fn figure_csv_crosses_the_diagonal_at_52() {
    let out = noninc(&["figure", "--q", "16", "--s-max", "100"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "s,bound,diagonal");
    assert_eq!(rows[1 + 52], "52,52,52");
    assert_eq!(rows[1 + 51], "51,3552/67,51"); // 3552/67 > 51
    assert_eq!(rows[1 + 53], "53,3520/69,53"); // 3520/69 < 53
    assert_eq!(rows.len(), 102);
}

#[test]
fn bound_csv_has_header_and_known_rows() {
    let out = noninc(&["bound", "--q-max", "16"]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "q,bound,is_square,attained_by_construction");
    assert!(rows.contains(&"2,2,false,false"));
    assert!(rows.contains(&"8,17,false,false"));
    assert!(rows.contains(&"16,52,true,true"));
}

#[test]
fn arc_certificate_verifies_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("arc.cert");
    let out = noninc(&[
        "arc",
        "--v",
        "2",
        "--u",
        "1",
        "--cert",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("s = 6, beta = 2"));

    let out = noninc(&["verify", "--plane", "4", "--cert", cert.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("valid: 6 points and 6 lines"));

    // The same certificate names a different plane: that is an error.
    let out = noninc(&["verify", "--plane", "2", "--cert", cert.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn corrupted_certificate_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("arc.cert");
    noninc(&[
        "arc",
        "--v",
        "2",
        "--u",
        "1",
        "--cert",
        cert.to_str().unwrap(),
    ]);

    // Swap the M line for lines that do meet Y.
    let text = fs::read_to_string(&cert).unwrap();
    let corrupted: String = text
        .lines()
        .map(|l| {
            if l.starts_with("M ") {
                "M 0 1 2 3 4 5".to_owned()
            } else {
                l.to_owned()
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
        + "\n";
    fs::write(&cert, corrupted).unwrap();
    let out = noninc(&["verify", "--plane", "4", "--cert", cert.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("does not verify"));

    // Structural damage is also exit 1.
    fs::write(&cert, "CERT s=6\nnot a certificate\n").unwrap();
    let out = noninc(&["verify", "--plane", "4", "--cert", cert.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn arc_without_extremal_degree_cannot_emit_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("never.cert");
    let out = noninc(&[
        "arc",
        "--v",
        "3",
        "--u",
        "1",
        "--cert",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("not extremal"));
    assert!(!cert.exists());

    // Without --cert the arc itself is fine.
    let out = noninc(&["arc", "--v", "3", "--u", "1"]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("s = 10, beta = 2"));
    assert!(stdout(&out).contains("external lines = 28"));
}

#[test]
fn plane_export_import_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("pg2_3.plane");
    let second = dir.path().join("again.plane");

    let out = noninc(&["plane", "--q", "3", "--export", first.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).contains("order q = 3"));

    let out = noninc(&[
        "plane",
        "--import",
        first.to_str().unwrap(),
        "--export",
        second.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("order q = 3"));
    assert!(stdout(&out).contains("reference = sha256:"));

    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
}

#[test]
fn search_on_imported_plane_produces_portable_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let plane = dir.path().join("fano.plane");
    let cert = dir.path().join("fano.cert");
    noninc(&["plane", "--q", "2", "--export", plane.to_str().unwrap()]);

    let out = noninc(&[
        "search",
        "--import",
        plane.to_str().unwrap(),
        "--cert",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).contains("f=2 proven"));
    assert!(fs::read_to_string(&cert).unwrap().contains("PLANE sha256:"));

    let out = noninc(&[
        "verify",
        "--plane",
        plane.to_str().unwrap(),
        "--cert",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
}

#[test]
fn invalid_imported_matrix_names_the_violated_invariant() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.plane");
    fs::write(&bad, format!("PLANE 7\n{}", "1111111\n".repeat(7))).unwrap();
    let out = noninc(&["plane", "--import", bad.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("expected q+1"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();

    // Unknown subcommand, missing required group, bad parameters.
    assert_eq!(exit_code(&noninc(&["nonsense"])), 2);
    assert_eq!(exit_code(&noninc(&["search"])), 2);
    assert_eq!(exit_code(&noninc(&["plane", "--q", "6"])), 2); // not a prime power
    assert_eq!(exit_code(&noninc(&["arc", "--v", "2", "--u", "2"])), 2);
    assert_eq!(exit_code(&noninc(&["bound", "--q-max", "1"])), 2);

    // Unreadable file paths are usage errors, not invalid data.
    let missing = dir.path().join("missing.plane");
    let out = noninc_in(
        dir.path(),
        &["plane", "--import", missing.to_str().unwrap()],
    );
    assert_eq!(exit_code(&out), 2);
}

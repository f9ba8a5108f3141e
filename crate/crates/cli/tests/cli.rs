use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pdens::io::FingerprintDocument;
use tempfile::TempDir;

const S15: &str = r#"{"period": "15", "motif": ["0", "1", "3", "4", "5", "7", "9", "10", "12"]}"#;
const Q15: &str = r#"{"period": "15", "motif": ["0", "1", "3", "4", "6", "8", "9", "12", "14"]}"#;
const S15_MOVED: &str =
    r#"{"period": "15", "motif": ["0", "1", "3", "4", "5", "7", "9", "10", "11"]}"#;
const THREE: &str = r#"{"period": "1", "motif": ["0", "1/3", "1/2"]}"#;
const SINGLE: &str = r#"{"period": "1", "motif": ["0"]}"#;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self {
            dir: TempDir::new().unwrap(),
        }
    }

    fn file(&self, name: &str, contents: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, contents).unwrap();
        path
    }
}

fn pdens(args: &[&str], files: &[&Path]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdens"))
        .args(args)
        .args(files)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn compare_exit_codes() {
    let ws = Workspace::new();
    let (s, q, moved) = (ws.file("s", S15), ws.file("q", Q15), ws.file("m", S15_MOVED));
    assert_eq!(pdens(&["compare"], &[&s, &q]).status.code(), Some(0));
    let out = pdens(&["compare"], &[&s, &moved]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("psi_"), "{}", stdout(&out));
}

#[test]
fn compare_is_symmetric() {
    let ws = Workspace::new();
    let files = [ws.file("s", S15), ws.file("q", Q15), ws.file("m", S15_MOVED), ws.file("t", THREE)];
    for a in &files {
        for b in &files {
            let ab = pdens(&["compare"], &[a, b]).status.code();
            let ba = pdens(&["compare"], &[b, a]).status.code();
            assert_eq!(ab, ba);
        }
    }
}

#[test]
fn translated_and_reflected_copy_compares_equal() {
    let ws = Workspace::new();
    let s = ws.file("s", S15);
    let t = ws.file("t", r#"{"period": "15", "motif": ["-2/3", "-5/3", "-11/3", "-14/3", "-17/3", "-23/3", "-29/3", "-32/3", "-38/3"]}"#);
    assert_eq!(pdens(&["compare"], &[&s, &t]).status.code(), Some(0));
}

#[test]
fn usage_errors_exit_two() {
    let ws = Workspace::new();
    let s = ws.file("s", S15);
    assert_eq!(pdens(&["compare"], &[&s]).status.code(), Some(2));
    assert_eq!(pdens(&["frobnicate"], &[&s]).status.code(), Some(2));
    assert_eq!(pdens(&["compute"], &[&ws.dir.path().join("missing")]).status.code(), Some(2));
    let broken = ws.file("b", "{\n  \"period\": \"1\",\n  \"motif\": [\"0\", \"1/0\"]\n}");
    let out = pdens(&["compute"], &[&broken]);
    assert_eq!(out.status.code(), Some(2));
    let bad_json = ws.file("j", "{\n  \"period\": \"1\",\n  \"motif\": [\"0\",]\n}");
    let out = pdens(&["compute"], &[&bad_json]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn compute_emits_half_the_functions() {
    let ws = Workspace::new();
    let out = pdens(&["compute"], &[&ws.file("s", S15)]);
    let doc = FingerprintDocument::from_json(&stdout(&out)).unwrap();
    assert_eq!(doc.motif_size, 9);
    assert_eq!(doc.functions.len(), 5);
    assert_eq!(doc.rho.len(), 5);

    let out = pdens(&["compute"], &[&ws.file("one", SINGLE)]);
    let doc = FingerprintDocument::from_json(&stdout(&out)).unwrap();
    assert_eq!(doc.functions.len(), 1);

    let out = pdens(&["compute", "--k-max", "9"], &[&ws.file("s", S15)]);
    let doc = FingerprintDocument::from_json(&stdout(&out)).unwrap();
    let psi0 = doc.function(0).unwrap();
    let psi9 = doc.function(9).unwrap();
    let half = pdens::rational::rat(1, 2);
    assert_eq!(psi9.truncate_below(&half), psi0.shift_right(&half).unwrap());
}

#[test]
fn compute_output_is_canonical() {
    let ws = Workspace::new();
    for (name, text) in [("s", S15), ("t", THREE), ("one", SINGLE)] {
        for extra in [&[][..], &["--k-max", "7"][..], &["--no-rescale"][..]] {
            let mut args = vec!["compute"];
            args.extend_from_slice(extra);
            let first = stdout(&pdens(&args, &[&ws.file(name, text)]));
            let reparsed = FingerprintDocument::from_json(&first).unwrap();
            assert_eq!(reparsed.canonicalize().unwrap().to_json(), first);
            assert_eq!(reparsed.to_json(), first);
        }
    }
}

#[test]
fn csv_has_exact_columns() {
    let ws = Workspace::new();
    let out = stdout(&pdens(&["compute", "--format", "csv"], &[&ws.file("t", THREE)]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("k,x_num,x_den,y_num,y_den"));
    assert_eq!(lines.next(), Some("0,0,1,1,1"));
    assert_eq!(lines.next(), Some("0,1,12,1,2"));
}

#[test]
fn rho_lists_areas() {
    let ws = Workspace::new();
    let out = stdout(&pdens(&["rho", "--format", "csv", "--k-max", "2"], &[&ws.file("t", THREE)]));
    assert_eq!(out, "k,rho_num,rho_den\n0,7,72\n1,11,72\n2,11,72\n");
}

#[test]
fn oracle_check_passes_and_catches_corruption() {
    let ws = Workspace::new();
    let s = ws.file("s", S15);
    let out = pdens(&["oracle-check", "--seed", "3"], &[&s]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let t = ws.file("t", THREE);
    let out = pdens(&["oracle-check"], &[&t]);
    assert_eq!(out.status.code(), Some(0));
    let checked: usize = stdout(&out)
        .split_whitespace()
        .nth(1)
        .unwrap()
        .parse()
        .unwrap();
    assert!(checked >= 3 * 7, "{checked}");
    let out = pdens(&["oracle-check", "--corrupt-k", "1"], &[&t]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("mismatch k=1"));
}

#[test]
fn reconstruct_round_trip() {
    let ws = Workspace::new();
    let g = ws.file("g", r#"{"period": "10", "motif": ["0", "1", "3", "6"]}"#);
    let fp = ws.file("fp", &stdout(&pdens(&["compute", "--no-rescale"], &[&g])));
    let out = pdens(&["reconstruct"], &[&fp]);
    assert_eq!(out.status.code(), Some(0));
    let back = pdens::io::parse_sequence(&stdout(&out)).unwrap();
    let original = pdens::io::parse_sequence(&fs::read_to_string(&g).unwrap()).unwrap();
    assert_eq!(
        back.canonical_isometry_form(),
        original.scale_to_unit().canonical_isometry_form()
    );

    let fp = ws.file("fp15", &stdout(&pdens(&["compute"], &[&ws.file("s", S15)])));
    let out = pdens(&["reconstruct"], &[&fp]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not pairwise distinct"));
}

#[test]
fn plot_writes_svg() {
    let ws = Workspace::new();
    let target = ws.dir.path().join("plot.svg");
    let out = pdens(
        &["plot", "--k-max", "9", "--out", target.to_str().unwrap()],
        &[&ws.file("s", S15)],
    );
    assert_eq!(out.status.code(), Some(0));
    let svg = fs::read_to_string(&target).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<polyline").count(), 10);
    assert!(svg.contains("radius t"));
    assert!(svg.contains("ψ_9"));

    let svg = stdout(&pdens(&["plot"], &[&ws.file("one", SINGLE)]));
    let polyline = svg.lines().find(|l| l.starts_with("<polyline")).unwrap();
    let points = polyline.split("points=\"").nth(1).unwrap().trim_end_matches("\"/>");
    assert_eq!(points.split(' ').count(), 2);
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glyphforge")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn fixtures_to_episodes() {
    let tmp = tempfile::tempdir().unwrap();
    let fx = tmp.path().join("fx");
    ok(&["fixtures", "--out", p(&fx)]);
    let (fonts, textures, alphabet) = (fx.join("fonts"), fx.join("textures"), fx.join("alphabet.txt"));

    let index = tmp.path().join("index.json");
    let text = ok(&["index", "--fonts", p(&fonts), "--alphabet", p(&alphabet), "--out", p(&index)]);
    assert!(text.starts_with("3 of the fonts"), "{text}");

    let ds = tmp.path().join("ds");
    let text = ok(&[
        "generate", "--preset", "meta5", "--fonts", p(&fonts), "--textures", p(&textures), "--alphabet", p(&alphabet),
        "--count", "6", "--seed", "3", "--out", p(&ds), "--rotation_range", "-10,10", "--threads", "2",
    ]);
    assert!(text.starts_with("180 images of 30 classes (32x32)"), "{text}");
    let config = fs::read_to_string(ds.join("label/config.txt")).unwrap();
    assert!(config.contains("rotation_range = -10,10") && config.contains("blend = poisson"));
    assert!(ok(&["validate", p(&ds)]).contains("180 images"));

    let manifest = tmp.path().join("episodes.jsonl");
    let text = ok(&[
        "episodes", "--dataset", p(&ds), "--n", "5", "--k", "1", "--q", "5", "--count", "50", "--mode", "metadata",
        "--metadata-cols", "rotation,shear", "--seed", "1", "--out", p(&manifest),
    ]);
    assert!(text.contains("50 metadata episodes"), "{text}");
    let first = fs::read_to_string(&manifest).unwrap();
    let header = first.lines().next().unwrap();
    assert!(header.contains(r#""metadata_columns":["z_linear_rotation","z_linear_shear_x"]"#), "{header}");
    assert_eq!(first.lines().count(), 51);

    let sheet = tmp.path().join("preview.png");
    ok(&["preview", "--preset", "meta4", "--grid", "6x2", "--out", p(&sheet)]);
    assert_eq!(fs::read(&sheet).unwrap()[1..4], *b"PNG");
}

#[test]
fn errors_exit_nonzero() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&["validate", p(tmp.path())]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("raw_labels.csv"));

    let out = run(&["preview", "--out", "x.png", "--wobble", "3"]);
    assert!(!out.status.success());
    let out = run(&["preview", "--out", p(&tmp.path().join("x.png")), "--margin_top", "0.7"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("margin_top"));
}

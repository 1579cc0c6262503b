use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn fracgo(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracgo"))
        .args(args)
        .env("FRACGO_OUT", out)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn hash_of(dir: &Path) -> String {
    let manifest = fs::read_to_string(dir.join("manifest.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&manifest).unwrap();
    v["manifest_hash"].as_str().unwrap().to_string()
}

#[test]
fn expansion_check_passes_and_stamps_every_artifact() {
    let tmp = tempfile::tempdir().unwrap();
    let o = fracgo(&["run", "expansion-check", "--s", "0.6"], tmp.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let dir = tmp.path().join("expansion-check");
    let hash = hash_of(&dir);
    assert_eq!(hash.len(), 64);
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.contains(&hash), "{} lacks the manifest hash", path.display());
    }
    let csv = fs::read_to_string(dir.join("expansion.csv")).unwrap();
    assert!(csv.starts_with(&format!("# manifest_hash={hash}")));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains(&hash[..16]));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let names = [
        "xray_data.csv",
        "recovered.dat",
        "xray.json",
        "config.resolved.toml",
        "manifest.json",
    ];
    let mut runs = Vec::new();
    for _ in 0..2 {
        let o = fracgo(&["run", "xray-recover", "--jobs", "2"], tmp.path());
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let dir = tmp.path().join("xray-recover");
        runs.push(names.map(|n| fs::read(dir.join(n)).unwrap()));
    }
    for (i, name) in names.iter().enumerate() {
        assert!(runs[0][i] == runs[1][i], "{name} differs between runs");
    }
}

#[test]
fn thread_count_does_not_change_results() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(code(&fracgo(&["run", "expansion-check", "--jobs", "1"], a.path())), 0);
    assert_eq!(code(&fracgo(&["run", "expansion-check", "--jobs", "4"], b.path())), 0);
    let x = fs::read(a.path().join("expansion-check/expansion.csv")).unwrap();
    let y = fs::read(b.path().join("expansion-check/expansion.csv")).unwrap();
    assert!(x == y);
}

#[test]
fn config_file_is_read_and_flags_override_it() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("exp.toml");
    fs::write(&cfg, "schema_version = 1\nkind = \"expansion-check\"\ns = 0.3\n").unwrap();
    let o = fracgo(
        &["run", "expansion-check", "--config", cfg.to_str().unwrap()],
        tmp.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let resolved = fs::read_to_string(tmp.path().join("expansion-check/config.resolved.toml")).unwrap();
    assert!(resolved.contains("s = 0.3"), "{resolved}");
    let first = hash_of(&tmp.path().join("expansion-check"));

    let o = fracgo(
        &[
            "run",
            "expansion-check",
            "--config",
            cfg.to_str().unwrap(),
            "--s",
            "0.75",
        ],
        tmp.path(),
    );
    assert_eq!(code(&o), 0);
    let resolved = fs::read_to_string(tmp.path().join("expansion-check/config.resolved.toml")).unwrap();
    assert!(resolved.contains("s = 0.75"), "{resolved}");
    assert_ne!(first, hash_of(&tmp.path().join("expansion-check")));
}

#[test]
fn bad_configs_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let unknown = tmp.path().join("unknown.toml");
    fs::write(
        &unknown,
        "schema_version = 1\nkind = \"expansion-check\"\nfrobnicate = 3\n",
    )
    .unwrap();
    let o = fracgo(
        &["run", "expansion-check", "--config", unknown.to_str().unwrap()],
        tmp.path(),
    );
    assert_eq!(code(&o), 2);

    let version = tmp.path().join("version.toml");
    fs::write(&version, "schema_version = 99\nkind = \"expansion-check\"\n").unwrap();
    assert_eq!(
        code(&fracgo(
            &["run", "expansion-check", "--config", version.to_str().unwrap()],
            tmp.path()
        )),
        2
    );

    let other = tmp.path().join("other.toml");
    fs::write(&other, "schema_version = 1\nkind = \"xray-recover\"\n").unwrap();
    assert_eq!(
        code(&fracgo(
            &["run", "expansion-check", "--config", other.to_str().unwrap()],
            tmp.path()
        )),
        2
    );

    assert_eq!(code(&fracgo(&["run", "no-such-kind"], tmp.path())), 2);
    assert_eq!(code(&fracgo(&["run", "expansion-check", "--s", "1.5"], tmp.path())), 2);
}

#[test]
fn regime_violations_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let o = fracgo(&["run", "stability-exp", "--s", "0.3"], tmp.path());
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    let o = fracgo(&["run", "phase-ablation", "--s", "0.7"], tmp.path());
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn config_subcommand_prints_a_loadable_default() {
    let tmp = tempfile::tempdir().unwrap();
    let o = fracgo(&["config", "residual-sweep"], tmp.path());
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let cfg = fracgo::cli::ExperimentConfig::from_toml(&text).unwrap();
    assert_eq!(cfg.kind, fracgo::cli::ExperimentKind::ResidualSweep);
}

use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

fn fracks(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracks")).args(args).output().expect("binary runs")
}

fn fracks_with_threads(threads: usize, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fracks"))
        .env("RAYON_NUM_THREADS", threads.to_string())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Contents of every data file in a run directory, keyed by name. The
/// echoed configuration and metadata mention the directory and are skipped.
fn artifacts(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| !matches!(p.file_name().unwrap().to_str(), Some("config.toml" | "metadata.txt")))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect()
}

fn column(csv_text: &str, name: &str) -> Vec<f64> {
    let mut lines = csv_text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().parse().unwrap()).collect()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("experiment.toml");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn missing_config_exits_with_two() {
    let out = fracks(&["run", "/definitely/not/here.toml"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/definitely/not/here.toml"));
}

#[test]
fn unknown_keys_exit_with_three_and_are_all_listed() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(
        dir.path(),
        "study = \"simulate\"\nseed = 1\nspeed = 3\n[grid]\npoints = 16\nresolution = 2\n[solver]\nalpha = 2.0\nstep = 0.1\n",
    );
    let out = fracks(&["run", &path]);
    assert_eq!(out.status.code(), Some(3));
    let err = stderr(&out);
    for key in ["speed", "grid.resolution", "solver.step"] {
        assert!(err.contains(key), "{key} missing from {err}");
    }
}

#[test]
fn invalid_values_and_presets_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_config(dir.path(), "study = \"simulate\"\nseed = 1\n[grid]\npoints = 63\n");
    assert_eq!(fracks(&["run", &path]).status.code(), Some(3));
    assert_eq!(fracks(&["run", "--preset", "no-such-preset"]).status.code(), Some(3));
}

#[test]
fn numerical_failure_exits_with_four_and_names_the_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let run_dir = dir.path().join("run");
    // A window shorter than a decade cannot support a power-law fit.
    let path = write_config(
        dir.path(),
        "study = \"decay-study\"\nseed = 1\n[grid]\npoints = 16\n[solver]\nalpha = 2.0\nhorizon = 1.0\nsamples = 10\n[decay]\nwindow = [0.5, 1.0]\n",
    );
    let out = fracks(&["run", &path, "--out", run_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    let diagnostics = run_dir.join("diagnostics.txt");
    assert!(stderr(&out).contains(diagnostics.to_str().unwrap()));
    assert!(std::fs::read_to_string(diagnostics).unwrap().contains("failure: degenerate fit"));
}

#[test]
fn preset_listing_is_stable() {
    let first = fracks(&["presets"]);
    assert!(first.status.success());
    let text = String::from_utf8(first.stdout.clone()).unwrap();
    for name in ["smalldata-2d", "gevrey-alpha15", "decay-alpha2-sigma1"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
    assert!(text.lines().all(|l| l.split_whitespace().count() >= 2), "every preset has a description");
    assert_eq!(fracks(&["presets"]).stdout, first.stdout);
}

#[test]
fn seeded_decay_preset_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for (threads, out) in [(1, &a), (3, &b)] {
        let o = fracks_with_threads(
            threads,
            &["run", "--preset", "decay-alpha2-sigma1", "--seed", "42", "--out", out.to_str().unwrap()],
        );
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let (fa, fb) = (artifacts(&a), artifacts(&b));
    assert!(fa.contains_key("decay.csv") && fa.contains_key("trajectory.csv") && fa.contains_key("decay_fit.csv"));
    assert_eq!(fa, fb);
}

#[test]
fn small_data_trajectory_is_ordered_and_its_tail_recedes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("small");
    let o = fracks(&["run", "--preset", "smalldata-2d", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(out.join("trajectory.csv")).unwrap();
    assert!(text.starts_with("t,mass,linf,besov_critical,gevrey_norm,tail_fraction\n"));
    let t = column(&text, "t");
    assert!(t.len() > 10 && t.windows(2).all(|w| w[1] > w[0]));
    let tail = column(&text, "tail_fraction");
    let transient = tail.len() / 10;
    assert!(tail[transient..].windows(2).all(|w| w[1] <= w[0]), "{tail:?}");
    for name in ["mass.svg", "linf.svg", "tail_fraction.svg", "initial.snap", "final.snap", "metadata.txt"] {
        assert!(out.join(name).exists(), "{name}");
    }
}

#[test]
fn echoed_config_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let (first, second) = (dir.path().join("first"), dir.path().join("second"));
    let o = fracks(&["run", "--preset", "scaling-dyadic", "--seed", "5", "--out", first.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let echo = first.join("config.toml");
    let o = fracks(&["run", echo.to_str().unwrap(), "--out", second.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(artifacts(&first), artifacts(&second));
    let strip = |p: &Path| {
        std::fs::read_to_string(p).unwrap().lines().filter(|l| !l.starts_with("out = ")).collect::<Vec<_>>().join("\n")
    };
    assert_eq!(strip(&echo), strip(&second.join("config.toml")));
    assert!(strip(&echo).contains("seed = 5"));
}

#[test]
fn snapshots_restart_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let o = fracks(&["run", "--preset", "smalldata-2d", "--out", first.to_str().unwrap()]);
    assert!(o.status.success());
    let snap = first.join("final.snap");
    let config = format!(
        "study = \"simulate\"\nseed = 0\n[grid]\npoints = 32\n[initial]\nkind = \"snapshot\"\npath = \"{}\"\n[solver]\nhorizon = 0.1\nsamples = 2\n",
        snap.display()
    );
    let path = write_config(dir.path(), &config);
    let o = fracks(&["run", &path, "--out", dir.path().join("second").to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));

    let missing = config.replace("final.snap", "absent.snap");
    let path = write_config(dir.path(), &missing);
    assert_eq!(fracks(&["run", &path]).status.code(), Some(2));
}

#[test]
fn verify_reports_every_property() {
    let out = fracks(&["verify"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert!(lines.len() >= 10);
    assert!(lines.iter().all(|l| l.starts_with("PASS ")), "{text}");
}

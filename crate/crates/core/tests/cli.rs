use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dislodyn"));
    c.env_remove("DISLODYN_OUTPUT_ROOT");
    c
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// Manifest without the wall-clock line, which is the only nondeterministic
/// output of a run.
fn manifest_body(dir: &Path) -> String {
    fs::read_to_string(dir.join("manifest.txt"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with("wall_time_seconds"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn shipped_configs_validate() {
    for model in ["micro2d", "gb2d", "sub1d", "gcz1d", "curves"] {
        let out = bin()
            .args(["validate"])
            .arg(configs().join(format!("{model}.cfg")))
            .output()
            .unwrap();
        assert!(out.status.success(), "{model}: {}", stderr(&out));
        let text = stdout(&out);
        assert!(text.starts_with(&format!("{model} configuration is valid")), "{text}");
        assert!(text.contains("[material]"));
    }
}

#[test]
fn invalid_config_reports_every_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    fs::write(
        &path,
        "model = gcz1d\nunknown_key = 1\n[gcz1d]\nn = many\nepsilon = -1\n[time]\nt_max = 1\n",
    )
    .unwrap();
    let out = bin().arg("validate").arg(&path).output().unwrap();
    assert!(!out.status.success());
    let err = stderr(&out);
    let lines: Vec<&str> = err.lines().collect();
    assert!(lines.len() >= 3, "{err}");
    assert!(lines.iter().all(|l| l.starts_with("error kind=config source=")), "{err}");
    for key in ["key=unknown_key", "key=gcz1d.n", "key=gcz1d.epsilon"] {
        assert!(err.contains(key), "missing {key} in {err}");
    }
}

#[test]
fn missing_config_is_an_io_error() {
    let out = bin().args(["run", "/nonexistent/none.cfg"]).output().unwrap();
    assert!(!out.status.success());
    assert!(stderr(&out).starts_with("error kind=io source=/nonexistent/none.cfg"), "{}", stderr(&out));
}

#[test]
fn run_writes_under_output_root_with_flag_overrides() {
    let root = tempfile::tempdir().unwrap();
    let out = bin()
        .env("DISLODYN_OUTPUT_ROOT", root.path())
        .arg("run")
        .arg(configs().join("gcz1d.cfg"))
        .args(["--n", "40", "--tmax", "0.25", "--snapshot-every", "100"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    let dir = root.path().join("gcz1d");
    let manifest = manifest_body(&dir);
    assert!(manifest.contains("model = gcz1d"));
    assert!(manifest.contains("\nn = 40\n"), "{manifest}");
    assert!(manifest.contains("t_max = 0.25"), "{manifest}");
    let snap = fs::read_to_string(dir.join("snapshot_000000.csv")).unwrap();
    let mut lines = snap.lines();
    assert_eq!(lines.next(), Some("y,rho,kappa,theta_plus,theta_minus,tau_b,u2"));
    assert_eq!(lines.count(), 42);
    let diag = fs::read_to_string(dir.join("diagnostics.csv")).unwrap();
    assert!(diag.starts_with("t,residual,min_theta,min_kappa_y,M_gamma,max_rho_yyy\n"));
}

#[test]
fn absolute_output_dir_ignores_output_root() {
    let root = tempfile::tempdir().unwrap();
    let target = tempfile::tempdir().unwrap();
    let cfg = root.path().join("abs.cfg");
    let text = fs::read_to_string(configs().join("sub1d.cfg"))
        .unwrap()
        .replace("output_dir = sub1d", &format!("output_dir = {}", target.path().display()));
    fs::write(&cfg, text).unwrap();
    let out = bin()
        .env("DISLODYN_OUTPUT_ROOT", root.path().join("elsewhere"))
        .arg("run")
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(target.path().join("manifest.txt").exists());
    assert!(!root.path().join("elsewhere").exists());
}

#[test]
fn repeated_runs_are_byte_identical() {
    for model in ["micro2d", "gb2d", "sub1d", "gcz1d", "curves"] {
        let runs: Vec<tempfile::TempDir> = (0..2)
            .map(|_| {
                let root = tempfile::tempdir().unwrap();
                let out = bin()
                    .env("DISLODYN_OUTPUT_ROOT", root.path())
                    .arg("run")
                    .arg(configs().join(format!("{model}.cfg")))
                    .output()
                    .unwrap();
                assert!(out.status.success(), "{model}: {}", stderr(&out));
                root
            })
            .collect();
        let a = runs[0].path().join(model);
        let b = runs[1].path().join(model);
        let mut names: Vec<_> = fs::read_dir(&a)
            .unwrap()
            .map(|e| e.unwrap().file_name())
            .collect();
        names.sort();
        assert!(names.len() >= 2);
        for name in names {
            if name == "manifest.txt" {
                assert_eq!(manifest_body(&a), manifest_body(&b));
            } else {
                assert_eq!(
                    fs::read(a.join(&name)).unwrap(),
                    fs::read(b.join(&name)).unwrap(),
                    "{model}/{name:?} differs"
                );
            }
        }
    }
}

#[test]
fn sweep_runs_every_match_into_its_own_directory() {
    let work = tempfile::tempdir().unwrap();
    let root = tempfile::tempdir().unwrap();
    for model in ["sub1d", "curves"] {
        fs::copy(configs().join(format!("{model}.cfg")), work.path().join(format!("case_{model}.cfg"))).unwrap();
    }
    fs::write(work.path().join("notes.txt"), "not a config").unwrap();
    let pattern = format!("{}/case_*.cfg", work.path().display());
    let out = bin()
        .env("DISLODYN_OUTPUT_ROOT", root.path())
        .args(["sweep", &pattern])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).lines().count(), 2);
    assert!(root.path().join("sub1d/case_sub1d/manifest.txt").exists());
    assert!(root.path().join("curves/case_curves/residuals.csv").exists());
}

#[test]
fn sweep_without_matches_fails() {
    let work = tempfile::tempdir().unwrap();
    let pattern = format!("{}/*.cfg", work.path().display());
    let out = bin().args(["sweep", &pattern]).output().unwrap();
    assert!(!out.status.success());
    assert!(stderr(&out).starts_with("error kind=validation"), "{}", stderr(&out));
}

#[test]
fn failing_run_reports_kind() {
    // A step far beyond the curve's feature size is rejected before running.
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("fast.cfg");
    let text = fs::read_to_string(configs().join("curves.cfg"))
        .unwrap()
        .replace("dt = 0.01", "dt = 0.5");
    fs::write(&cfg, text).unwrap();
    let out = bin()
        .env("DISLODYN_OUTPUT_ROOT", dir.path())
        .arg("run")
        .arg(&cfg)
        .output()
        .unwrap();
    assert!(!out.status.success());
    assert!(stderr(&out).starts_with("error kind="), "{}", stderr(&out));
}

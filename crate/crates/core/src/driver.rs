//! Runs a validated configuration and writes its CSV outputs and manifest.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::config::{
    parse_config_with, CurveShape, CurvesConfig, Gb2dConfig, Gcz1dConfig, GczInitial,
    Micro2dConfig, ModelConfig, Overrides, SimConfig, Sub1dConfig,
};
use crate::curves::{self, Curve, TestFamily};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::gb2d::{self, EntropyMonitor, GBState};
use crate::gcz1d::{self, RunOptions, SlabState1D};
use crate::io::{fmt_f64, CsvWriter};
use crate::micro2d;
use crate::sub1d::{self, Sub1DModel};

/// Environment variable that relocates relative output directories.
pub const OUTPUT_ROOT_ENV: &str = "DISLODYN_OUTPUT_ROOT";

pub const MANIFEST: &str = "manifest.txt";

#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub output_dir: PathBuf,
    pub model: &'static str,
    pub steps: usize,
    pub final_time: f64,
    pub files: Vec<String>,
    /// Model-specific report lines for the manifest.
    pub notes: Vec<(String, String)>,
}

/// `dir` itself when absolute or when no output root is set, otherwise
/// `root/dir`.
pub fn resolve_output_dir(dir: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_ROOT_ENV) {
        Some(root) if dir.is_relative() && !root.is_empty() => PathBuf::from(root).join(dir),
        _ => dir.to_path_buf(),
    }
}

pub fn load_config(path: &Path, overrides: &Overrides) -> Result<SimConfig> {
    let text = fs::read_to_string(path)?;
    parse_config_with(&text, overrides)
}

/// Parses and validates without running.
pub fn validate_file(path: &Path) -> Result<SimConfig> {
    load_config(path, &[])
}

pub fn run_file(path: &Path, overrides: &Overrides) -> Result<RunSummary> {
    let cfg = load_config(path, overrides)?;
    let dir = resolve_output_dir(&cfg.output_dir);
    run(&cfg, &dir, &path.display().to_string())
}

/// Runs every configuration matching `pattern` concurrently. Each run writes
/// to `<output_dir>/<config file stem>`. Results are in sorted path order.
pub fn sweep(pattern: &str) -> Result<Vec<(PathBuf, Result<RunSummary>)>> {
    let paths = expand_pattern(pattern)?;
    if paths.is_empty() {
        return Err(Error::Validation(format!("no configuration matches '{pattern}'")));
    }
    let results = Execution::default().map(paths.len(), |i| {
        let path = &paths[i];
        load_config(path, &[]).and_then(|cfg| {
            let stem = path.file_stem().unwrap_or_default();
            let dir = resolve_output_dir(&cfg.output_dir).join(stem);
            run(&cfg, &dir, &path.display().to_string())
        })
    });
    Ok(paths.into_iter().zip(results).collect())
}

/// Expands `*` and `?` in the file-name part of `pattern`.
pub fn expand_pattern(pattern: &str) -> Result<Vec<PathBuf>> {
    let p = Path::new(pattern);
    let name = p
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| Error::Validation(format!("'{pattern}' has no file-name part")))?;
    let dir = match p.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut out = Vec::new();
    for entry in fs::read_dir(&dir)? {
        let entry = entry?;
        let file = entry.file_name();
        if let Some(f) = file.to_str() {
            if wildcard_match(name.as_bytes(), f.as_bytes()) && entry.path().is_file() {
                out.push(if p.parent().map_or(true, |d| d.as_os_str().is_empty()) {
                    PathBuf::from(f)
                } else {
                    dir.join(f)
                });
            }
        }
    }
    out.sort();
    Ok(out)
}

fn wildcard_match(pat: &[u8], s: &[u8]) -> bool {
    match (pat.first(), s.first()) {
        (None, None) => true,
        (Some(b'*'), _) => wildcard_match(&pat[1..], s) || (!s.is_empty() && wildcard_match(pat, &s[1..])),
        (Some(b'?'), Some(_)) => wildcard_match(&pat[1..], &s[1..]),
        (Some(a), Some(b)) if a == b => wildcard_match(&pat[1..], &s[1..]),
        _ => false,
    }
}

/// Runs `cfg`, writing outputs and `manifest.txt` into `out_dir`.
pub fn run(cfg: &SimConfig, out_dir: &Path, source: &str) -> Result<RunSummary> {
    fs::create_dir_all(out_dir)?;
    let start = Instant::now();
    let mut summary = match &cfg.model {
        ModelConfig::Micro2d(m) => run_micro2d(cfg, m, out_dir)?,
        ModelConfig::Gb2d(m) => run_gb2d(cfg, m, out_dir)?,
        ModelConfig::Sub1d(m) => run_sub1d(cfg, m, out_dir)?,
        ModelConfig::Gcz1d(m) => run_gcz1d(cfg, m, out_dir)?,
        ModelConfig::Curves(m) => run_curves(cfg, m, out_dir)?,
    };
    summary.output_dir = out_dir.to_path_buf();
    let wall = start.elapsed().as_secs_f64();
    write_manifest(&out_dir.join(MANIFEST), cfg, &summary, source, wall)?;
    Ok(summary)
}

fn write_manifest(
    path: &Path,
    cfg: &SimConfig,
    summary: &RunSummary,
    source: &str,
    wall: f64,
) -> std::io::Result<()> {
    let mut text = String::new();
    text.push_str(&format!("dislodyn_version = {}\n", env!("CARGO_PKG_VERSION")));
    text.push_str(&format!("config = {source}\n"));
    text.push_str(&format!("model = {}\n", summary.model));
    text.push_str(&format!("steps = {}\n", summary.steps));
    text.push_str(&format!("final_time = {}\n", fmt_f64(summary.final_time)));
    for (k, v) in &summary.notes {
        text.push_str(&format!("{k} = {v}\n"));
    }
    text.push_str(&format!("outputs = {}\n", summary.files.join(",")));
    text.push_str(&format!("wall_time_seconds = {wall:.6}\n"));
    text.push_str("\n# effective configuration\n");
    text.push_str(&cfg.render());
    fs::write(path, text)
}

fn summary(model: &'static str) -> RunSummary {
    RunSummary {
        output_dir: PathBuf::new(),
        model,
        steps: 0,
        final_time: 0.0,
        files: Vec::new(),
        notes: Vec::new(),
    }
}

fn step_count(t_max: f64, dt: f64) -> usize {
    (t_max / dt).round().max(1.0) as usize
}

fn snapshot_name(k: usize) -> String {
    format!("snapshot_{k:06}.csv")
}

fn run_micro2d(cfg: &SimConfig, m: &Micro2dConfig, dir: &Path) -> Result<RunSummary> {
    let mut s = summary("micro2d");
    let mut system = micro2d::random_system(m.particles, cfg.seed)?;
    let steps = step_count(cfg.t_max, m.dt);
    let mut traj = CsvWriter::create(&dir.join("trajectory.csv"), &["time", "index", "sign", "x1", "x2"])?;
    let mut diag = CsvWriter::create(&dir.join("diagnostics.csv"), &["t", "min_separation", "max_speed"])?;
    let mut record = |sys: &micro2d::ParticleSystem| -> Result<()> {
        sys.write_csv_rows(traj.raw())?;
        let v = micro2d::pairwise_velocity(sys, &cfg.constants)?;
        let vmax = v.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        let sep = if sys.len() > 1 { sys.min_separation() } else { 0.0 };
        diag.row(&[sys.time, sep, vmax])?;
        Ok(())
    };
    record(&system)?;
    for k in 1..=steps {
        system = micro2d::step_particles(&system, m.dt, &cfg.constants, m.min_separation)?;
        system.time = k as f64 * m.dt;
        if k % cfg.snapshot_every == 0 || k == steps {
            record(&system)?;
        }
    }
    traj.finish()?;
    diag.finish()?;
    s.steps = steps;
    s.final_time = system.time;
    s.files = vec!["trajectory.csv".into(), "diagnostics.csv".into()];
    Ok(s)
}

fn run_gb2d(cfg: &SimConfig, m: &Gb2dConfig, dir: &Path) -> Result<RunSummary> {
    let mut s = summary("gb2d");
    let c = &cfg.constants;
    let mut state = GBState::random_smooth(m.n1, m.n2, m.line_density, m.amplitude, m.modes, cfg.seed)?;
    let mut monitor = EntropyMonitor::new(&state, c)?;
    let mut diag = CsvWriter::create(
        &dir.join("diagnostics.csv"),
        &["t", "S", "B", "zygmund_plus", "zygmund_minus"],
    )?;
    let mut files = vec!["diagnostics.csv".to_string()];
    let mut sigma = gb2d::compute_stress(&state, c);
    let mut write = |state: &GBState, sigma: &crate::spectral::PeriodicField2D, b: f64, k: usize, files: &mut Vec<String>| -> Result<()> {
        let name = snapshot_name(k);
        gb2d::write_snapshot(&dir.join(&name), state, sigma)?;
        files.push(name);
        let (zp, zm) = gb2d::zygmund_norms(state);
        diag.row(&[state.time, gb2d::entropy(state)?, b, zp, zm])?;
        Ok(())
    };
    write(&state, &sigma, 0.0, 0, &mut files)?;
    let mut k = 0;
    let mut worst_b = 0.0_f64;
    let mut min_theta = state.theta_plus.min().min(state.theta_minus.min());
    while state.time < cfg.t_max {
        let dt = gb2d::stable_dt(&state, &sigma, &cfg.constants, m.cfl).min(cfg.t_max - state.time);
        state = gb2d::step_with_stress(&state, &sigma, dt, Execution::default())?;
        k += 1;
        sigma = gb2d::compute_stress(&state, c);
        let (_, b) = monitor.record(&state, c)?;
        worst_b = worst_b.max(b);
        min_theta = min_theta.min(state.theta_plus.min().min(state.theta_minus.min()));
        if k % cfg.snapshot_every == 0 || state.time >= cfg.t_max {
            write(&state, &sigma, b, k, &mut files)?;
        }
    }
    diag.finish()?;
    s.steps = k;
    s.final_time = state.time;
    s.files = files;
    s.notes = vec![
        ("max_entropy_budget".into(), fmt_f64(worst_b)),
        ("min_density".into(), fmt_f64(min_theta)),
    ];
    Ok(s)
}

fn run_sub1d(cfg: &SimConfig, m: &Sub1dConfig, dir: &Path) -> Result<RunSummary> {
    let mut s = summary("sub1d");
    let mut model = Sub1DModel::new(&cfg.constants).with_forcing(m.forcing_amplitude, m.forcing_period)?;
    if let Some(c2) = m.c2_override {
        model = model.with_c2(c2);
    }
    let mut state = sub1d::random_monotone_state(m.n, m.line_density, cfg.seed)?;
    let mut diag = CsvWriter::create(
        &dir.join("diagnostics.csv"),
        &["t", "min_forward_difference", "max_slope"],
    )?;
    let mut files = vec!["diagnostics.csv".to_string()];
    let mut write = |state: &sub1d::Sub1DState, k: usize, files: &mut Vec<String>| -> Result<()> {
        let name = snapshot_name(k);
        let v = sub1d::velocity_with_model(state, &model);
        sub1d::write_snapshot(&dir.join(&name), state, &v)?;
        files.push(name);
        diag.row(&[state.time, state.min_forward_difference(), state.max_slope()])?;
        Ok(())
    };
    write(&state, 0, &mut files)?;
    let mut k = 0;
    while state.time < cfg.t_max {
        let dt = sub1d::stable_dt(&state, &model, m.cfl).min(cfg.t_max - state.time);
        state = sub1d::step_with_model(&state, dt, &model)?;
        k += 1;
        if k % cfg.snapshot_every == 0 || state.time >= cfg.t_max {
            write(&state, k, &mut files)?;
        }
    }
    diag.finish()?;
    s.steps = k;
    s.final_time = state.time;
    s.files = files;
    Ok(s)
}

/// Initial slab state selected by the configuration.
pub fn gcz_initial(m: &Gcz1dConfig) -> Result<SlabState1D> {
    match m.initial {
        GczInitial::Gaussian => SlabState1D::gaussian_bump(m.n, m.c0, m.tau, m.epsilon),
        GczInitial::Linear => SlabState1D::linear(m.n, m.c0, m.tau, m.epsilon),
        GczInitial::Sine => SlabState1D::sine_profile(m.n, m.sine_amplitude, m.c0, m.tau, m.epsilon),
    }
}

fn run_gcz1d(cfg: &SimConfig, m: &Gcz1dConfig, dir: &Path) -> Result<RunSummary> {
    let mut s = summary("gcz1d");
    let initial = gcz_initial(m)?;
    let options = RunOptions {
        dt: Some(m.dt),
        residual_tol: m.residual_tol,
        t_max: cfg.t_max,
        snapshot_every: cfg.snapshot_every,
        monitor_gamma: m.monitor_gamma,
        gamma_floor: Some(m.gamma_floor),
    };
    let report = match m.initial {
        GczInitial::Gaussian => gcz1d::run_to_steady(&initial, &options)?,
        _ => gcz1d::evolve(&initial, &options)?,
    };
    let mut files = vec!["diagnostics.csv".to_string()];
    gcz1d::write_diagnostics(&dir.join("diagnostics.csv"), &report.diagnostics)?;
    for (k, snap) in report.snapshots.iter().enumerate() {
        let name = snapshot_name(k);
        gcz1d::write_snapshot(&dir.join(&name), snap, &cfg.constants, m.d0, m.gamma_floor)?;
        files.push(name);
    }
    s.steps = report.steps;
    s.final_time = report.terminal().time;
    s.files = files;
    s.notes = vec![
        ("converged".into(), report.converged.to_string()),
        ("final_residual".into(), fmt_f64(report.final_residual)),
        ("min_theta".into(), fmt_f64(report.min_theta)),
        ("min_monitor".into(), fmt_f64(report.min_monitor)),
    ];
    Ok(s)
}

/// Initial curve selected by the configuration (counterclockwise).
pub fn initial_curve(m: &CurvesConfig) -> Result<Curve> {
    match m.shape {
        CurveShape::Circle { radius } => Curve::circle(m.center, radius, m.vertices, false),
        CurveShape::Ellipse { a, b } => Curve::ellipse(m.center, a, b, m.vertices),
    }
}

fn run_curves(cfg: &SimConfig, m: &CurvesConfig, dir: &Path) -> Result<RunSummary> {
    let mut s = summary("curves");
    let steps = step_count(cfg.t_max, m.dt);
    let trajectory = curves::evolve_trajectory(&initial_curve(m)?, &m.velocity, m.dt, steps, m.redistribute)?;
    let reach = trajectory
        .iter()
        .flat_map(|snap| snap.curve.vertices().iter().map(|v| v[0].abs().max(v[1].abs())))
        .fold(0.0, f64::max);
    let family = TestFamily::random(m.test_functions, cfg.seed, reach, (0.3, 0.8));
    let exec = Execution::default();

    let mut snaps = curves::snapshot_writer(&dir.join("curve_snapshots.csv"))?;
    let mut diag = CsvWriter::create(
        &dir.join("diagnostics.csv"),
        &["t", "mean_radius", "perimeter", "total_g", "total_kappa", "compatibility_residual"],
    )?;
    let mut worst_compat = 0.0_f64;
    for (k, snap) in trajectory.iter().enumerate() {
        let compat = curves::compatibility_residual(&snap.measure, &family, exec);
        worst_compat = worst_compat.max(compat);
        if k % cfg.snapshot_every == 0 || k == steps {
            curves::write_snapshot_rows(&mut snaps, snap)?;
            diag.row(&[
                snap.t,
                snap.curve.mean_radius(),
                snap.curve.perimeter(),
                snap.measure.total_g(),
                snap.measure.total_kappa(),
                compat,
            ])?;
        }
    }
    snaps.finish()?;
    diag.finish()?;
    let mut files = vec!["curve_snapshots.csv".to_string(), "diagnostics.csv".to_string()];
    let mut res = CsvWriter::create(&dir.join("residuals.csv"), &["level", "compatibility", "transport"])?;
    let transport = if trajectory.len() >= 3 {
        curves::transport_residual(&trajectory, &m.velocity, &family, exec)?.max()
    } else {
        f64::NAN
    };
    res.row_mixed(&[0], &[worst_compat, transport])?;
    res.finish()?;
    files.push("residuals.csv".into());
    s.steps = steps;
    s.final_time = trajectory.last().map_or(0.0, |t| t.t);
    s.files = files;
    s.notes = vec![
        ("compatibility_residual".into(), fmt_f64(worst_compat)),
        ("transport_residual".into(), fmt_f64(transport)),
    ];
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wildcards() {
        assert!(wildcard_match(b"*.conf", b"a.conf"));
        assert!(wildcard_match(b"run_??.conf", b"run_01.conf"));
        assert!(!wildcard_match(b"run_?.conf", b"run_01.conf"));
        assert!(wildcard_match(b"*", b""));
        assert!(!wildcard_match(b"*.conf", b"a.toml"));
    }
}

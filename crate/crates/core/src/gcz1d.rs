//! Regularized slab model on `I = (-1, 1)` for `ρ = ρ⁺-ρ⁻` and
//! `κ = ρ⁺+ρ⁻` under a uniform applied shear `τ`:
//!
//! ```text
//! ρ_t = (1+ε) ρ_yy - τ κ_y
//! κ_t = ε κ_yy + ρ_y ρ_yy / κ_y - τ ρ_y
//! ρ(±1) = 0,  κ(±1) = ±c₀
//! ```
//!
//! Nodes are `y_j = -1 + j Δy` for `j = 0..=n+1` with `Δy = 2/(n+1)`; the
//! densities `θ± = (κ_y ± ρ_y)/2` live on the `n+1` faces between nodes.

use std::path::Path;

use crate::elasticity::ElasticConstants;
use crate::error::{Error, Result};
use crate::io::CsvWriter;

/// Tolerance on `θ± ≥ 0` when a state is constructed.
const THETA_TOL: f64 = 1e-10;
/// Number of faces next to each wall on which initial densities must vanish.
const SUPPORT_MARGIN: usize = 2;

#[derive(Clone, Debug, PartialEq)]
pub struct SlabState1D {
    pub n: usize,
    pub rho: Vec<f64>,
    pub kappa: Vec<f64>,
    pub time: f64,
    pub c0: f64,
    pub tau: f64,
    pub epsilon: f64,
}

impl SlabState1D {
    /// Validates the node layout, pins the boundary values and checks
    /// `κ_y ≥ |ρ_y|` on every face.
    pub fn new(
        rho: Vec<f64>,
        kappa: Vec<f64>,
        c0: f64,
        tau: f64,
        epsilon: f64,
    ) -> Result<Self> {
        if rho.len() != kappa.len() || rho.len() < 4 {
            return Err(Error::InvalidState(
                "rho and kappa need the same number of nodes, at least 4".into(),
            ));
        }
        if !(c0 > 0.0) || !(epsilon > 0.0) || !tau.is_finite() {
            return Err(Error::Validation(
                "c0 > 0, epsilon > 0 and a finite tau are required".into(),
            ));
        }
        let n = rho.len() - 2;
        let mut state = Self {
            n,
            rho,
            kappa,
            time: 0.0,
            c0,
            tau,
            epsilon,
        };
        let (r0, rn) = (state.rho[0], state.rho[n + 1]);
        let (k0, kn) = (state.kappa[0], state.kappa[n + 1]);
        let tol = 1e-10 * c0;
        if r0.abs() > tol || rn.abs() > tol || (k0 + c0).abs() > tol || (kn - c0).abs() > tol {
            return Err(Error::InvalidState(format!(
                "boundary values must be rho = 0 and kappa = -+c0, got rho = ({r0}, {rn}), kappa = ({k0}, {kn})"
            )));
        }
        state.pin_boundary();
        let (tp, tm) = state.face_densities();
        if let Some((i, v)) = tp
            .iter()
            .chain(&tm)
            .enumerate()
            .find(|(_, v)| **v < -THETA_TOL)
        {
            return Err(Error::InvalidState(format!(
                "kappa_y < |rho_y| at face {} (theta = {v:e})",
                i % (n + 1)
            )));
        }
        Ok(state)
    }

    /// Integrates face densities from the left wall. The total masses must
    /// reproduce the wall values within `1e-10 c₀`.
    pub fn from_face_densities(
        theta_plus: &[f64],
        theta_minus: &[f64],
        c0: f64,
        tau: f64,
        epsilon: f64,
    ) -> Result<Self> {
        if theta_plus.len() != theta_minus.len() || theta_plus.len() < 3 {
            return Err(Error::InvalidState("face density lengths differ".into()));
        }
        let dy = 2.0 / theta_plus.len() as f64;
        let mut rho = vec![0.0];
        let mut kappa = vec![-c0];
        for (p, m) in theta_plus.iter().zip(theta_minus) {
            rho.push(rho.last().unwrap() + (p - m) * dy);
            kappa.push(kappa.last().unwrap() + (p + m) * dy);
        }
        Self::new(rho, kappa, c0, tau, epsilon)
    }

    /// `ρ ≡ 0`, `κ = c₀ y`.
    pub fn linear(n: usize, c0: f64, tau: f64, epsilon: f64) -> Result<Self> {
        let dy = 2.0 / (n + 1) as f64;
        let kappa = (0..n + 2).map(|j| c0 * (-1.0 + j as f64 * dy)).collect();
        Self::new(vec![0.0; n + 2], kappa, c0, tau, epsilon)
    }

    /// Equal Gaussian densities `θ⁺ = θ⁻` of width 0.25 centred at 0, set to
    /// zero on the two faces next to each wall and normalized to mass `c₀`.
    pub fn gaussian_bump(n: usize, c0: f64, tau: f64, epsilon: f64) -> Result<Self> {
        let dy = 2.0 / (n + 1) as f64;
        let s = 0.25;
        let mut b: Vec<f64> = (0..n + 1)
            .map(|i| {
                let y = -1.0 + (i as f64 + 0.5) * dy;
                (-y * y / (2.0 * s * s)).exp()
            })
            .collect();
        for i in 0..SUPPORT_MARGIN.min(b.len()) {
            b[i] = 0.0;
            let last = b.len() - 1 - i;
            b[last] = 0.0;
        }
        let mass = b.iter().sum::<f64>() * dy;
        b.iter_mut().for_each(|v| *v *= c0 / mass);
        Self::from_face_densities(&b, &b, c0, tau, epsilon)
    }

    /// `θ± ∝ 1 ± a sin(πy)`, each normalized to mass `c₀`.
    pub fn sine_profile(n: usize, amplitude: f64, c0: f64, tau: f64, epsilon: f64) -> Result<Self> {
        let dy = 2.0 / (n + 1) as f64;
        let face = |sign: f64| {
            let mut v: Vec<f64> = (0..n + 1)
                .map(|i| {
                    let y = -1.0 + (i as f64 + 0.5) * dy;
                    1.0 + sign * amplitude * (std::f64::consts::PI * y).sin()
                })
                .collect();
            let mass = v.iter().sum::<f64>() * dy;
            v.iter_mut().for_each(|x| *x *= c0 / mass);
            v
        };
        Self::from_face_densities(&face(1.0), &face(-1.0), c0, tau, epsilon)
    }

    pub fn dy(&self) -> f64 {
        2.0 / (self.n + 1) as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let dy = self.dy();
        (0..self.n + 2).map(|j| -1.0 + j as f64 * dy).collect()
    }

    fn pin_boundary(&mut self) {
        let last = self.n + 1;
        self.rho[0] = 0.0;
        self.rho[last] = 0.0;
        self.kappa[0] = -self.c0;
        self.kappa[last] = self.c0;
    }

    /// Face gradients `(κ_y, ρ_y)`.
    pub fn face_gradients(&self) -> (Vec<f64>, Vec<f64>) {
        let inv = 1.0 / self.dy();
        let d = |v: &[f64]| v.windows(2).map(|w| (w[1] - w[0]) * inv).collect();
        (d(&self.kappa), d(&self.rho))
    }

    /// Face densities `θ± = (κ_y ± ρ_y)/2`.
    pub fn face_densities(&self) -> (Vec<f64>, Vec<f64>) {
        let (ky, ry) = self.face_gradients();
        let tp = ky.iter().zip(&ry).map(|(k, r)| 0.5 * (k + r)).collect();
        let tm = ky.iter().zip(&ry).map(|(k, r)| 0.5 * (k - r)).collect();
        (tp, tm)
    }

    /// Node densities from centred differences, second-order one-sided at the
/// walls.
    pub fn node_densities(&self) -> (Vec<f64>, Vec<f64>) {
        let ky = node_derivative(&self.kappa, self.dy());
        let ry = node_derivative(&self.rho, self.dy());
        let tp = ky.iter().zip(&ry).map(|(k, r)| 0.5 * (k + r)).collect();
        let tm = ky.iter().zip(&ry).map(|(k, r)| 0.5 * (k - r)).collect();
        (tp, tm)
    }

    pub fn min_theta(&self) -> f64 {
        let (tp, tm) = self.face_densities();
        tp.iter().chain(&tm).copied().fold(f64::INFINITY, f64::min)
    }

    pub fn min_kappa_y(&self) -> f64 {
        self.face_gradients().0.into_iter().fold(f64::INFINITY, f64::min)
    }

    /// Largest third difference of `ρ` over the nodes where it is defined.
    pub fn max_rho_yyy(&self) -> f64 {
        let dy3 = self.dy().powi(3);
        self.rho
            .windows(4)
            .map(|w| ((w[3] - 3.0 * w[2] + 3.0 * w[1] - w[0]) / dy3).abs())
            .fold(0.0, f64::max)
    }

    /// Checks that the initial densities vanish on the two faces next to each
    /// wall.
    pub fn validate_compact_support(&self) -> Result<()> {
        let (tp, tm) = self.face_densities();
        let faces = tp.len();
        let tol = 1e-12 * self.c0;
        for i in (0..SUPPORT_MARGIN).chain(faces - SUPPORT_MARGIN..faces) {
            if tp[i].abs() > tol || tm[i].abs() > tol {
                return Err(Error::Precondition(format!(
                    "initial densities must vanish next to the walls; face {i} has theta+ = {:e}, theta- = {:e}",
                    tp[i], tm[i]
                )));
            }
        }
        Ok(())
    }
}

fn node_derivative(v: &[f64], dy: f64) -> Vec<f64> {
    // Second-order one-sided differences at the walls.
    let m = v.len();
    if m < 3 {
        let s = (v[m - 1] - v[0]) / dy;
        return vec![s; m];
    }
    (0..m)
        .map(|j| match j {
            0 => (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dy),
            _ if j == m - 1 => (3.0 * v[m - 1] - 4.0 * v[m - 2] + v[m - 3]) / (2.0 * dy),
            _ => (v[j + 1] - v[j - 1]) / (2.0 * dy),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BackStress {
    pub values: Vec<f64>,
    /// `true` where `θ⁺+θ⁻` fell below the floor.
    pub flagged: Vec<bool>,
}

/// `τ_b = -D₀ (θ⁺-θ⁻)_y / max(θ⁺+θ⁻, floor)` on a uniform grid of spacing
/// `dy`, with centred differences inside and one-sided ones at the ends.
pub fn back_stress(
    theta_plus: &[f64],
    theta_minus: &[f64],
    dy: f64,
    d0: f64,
    floor: f64,
) -> Result<BackStress> {
    if !(d0 > 0.0) || !(floor > 0.0) || !(dy > 0.0) {
        return Err(Error::Validation("D0, floor and dy must be positive".into()));
    }
    if theta_plus.len() != theta_minus.len() || theta_plus.len() < 2 {
        return Err(Error::Validation("density lengths differ".into()));
    }
    let diff: Vec<f64> = theta_plus.iter().zip(theta_minus).map(|(p, m)| p - m).collect();
    let slope = node_derivative(&diff, dy);
    let mut values = Vec::with_capacity(diff.len());
    let mut flagged = Vec::with_capacity(diff.len());
    for (s, (p, m)) in slope.iter().zip(theta_plus.iter().zip(theta_minus)) {
        let total = p + m;
        flagged.push(total < floor);
        values.push(-d0 * s / total.max(floor));
    }
    Ok(BackStress { values, flagged })
}

/// Time derivatives `(ρ_t, κ_t)` at the interior nodes `1..=n`.
///
/// Where `κ_y < γ_floor` at a node the nonlinear term is set to zero if
/// `|ρ_y| ≤ γ_floor` as well (a density vacuum); otherwise, or when
/// `κ_y < -γ_floor`, a degenerate-gradient error is returned.
pub fn rates(state: &SlabState1D, gamma_floor: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    let dy = state.dy();
    let (r, k) = (&state.rho, &state.kappa);
    let inv2 = 1.0 / (2.0 * dy);
    let inv_sq = 1.0 / (dy * dy);
    let eps = state.epsilon;
    let mut drho = Vec::with_capacity(state.n);
    let mut dkap = Vec::with_capacity(state.n);
    for j in 1..=state.n {
        let ry = (r[j + 1] - r[j - 1]) * inv2;
        let ky = (k[j + 1] - k[j - 1]) * inv2;
        let ryy = (r[j + 1] - 2.0 * r[j] + r[j - 1]) * inv_sq;
        let kyy = (k[j + 1] - 2.0 * k[j] + k[j - 1]) * inv_sq;
        let nonlinear = if ky >= gamma_floor {
            ry * ryy / ky
        } else if ky >= -gamma_floor && ry.abs() <= gamma_floor {
            0.0
        } else {
            return Err(Error::DegenerateGradient {
                index: j,
                kappa_y: ky,
                rho_y: ry,
            });
        };
        drho.push((1.0 + eps) * ryy - state.tau * ky);
        dkap.push(eps * kyy + nonlinear - state.tau * ry);
    }
    Ok((drho, dkap))
}

/// `max|ρ_t| + max|κ_t|` over the interior nodes.
pub fn residual(state: &SlabState1D, gamma_floor: f64) -> Result<f64> {
    let (dr, dk) = rates(state, gamma_floor)?;
    let m = |v: &[f64]| v.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    Ok(m(&dr) + m(&dk))
}

/// Largest stable explicit step `Δy² / (2(1+ε))`.
pub fn max_dt(state: &SlabState1D) -> f64 {
    state.dy() * state.dy() / (2.0 * (1.0 + state.epsilon))
}

/// Default step `0.4 Δy² / (1+ε)`.
pub fn default_dt(state: &SlabState1D) -> f64 {
    0.4 * state.dy() * state.dy() / (1.0 + state.epsilon)
}

pub fn step_regularized(state: &SlabState1D, dt: f64, gamma_floor: f64) -> Result<SlabState1D> {
    let (next, _) = step_with_residual(state, dt, gamma_floor)?;
    Ok(next)
}

fn step_with_residual(state: &SlabState1D, dt: f64, gamma_floor: f64) -> Result<(SlabState1D, f64)> {
    let bound = max_dt(state);
    if !(dt > 0.0) || dt > bound * (1.0 + 1e-12) {
        return Err(Error::StepSize { dt, max_dt: bound });
    }
    let (dr, dk) = rates(state, gamma_floor)?;
    let mut next = state.clone();
    let mut mr = 0.0_f64;
    let mut mk = 0.0_f64;
    for j in 1..=state.n {
        next.rho[j] += dt * dr[j - 1];
        next.kappa[j] += dt * dk[j - 1];
        mr = mr.max(dr[j - 1].abs());
        mk = mk.max(dk[j - 1].abs());
    }
    next.pin_boundary();
    next.time += dt;
    Ok((next, mr + mk))
}

/// `min (κ_y - √(γ² + ρ_y²))` over the faces.
pub fn monitor_lower_bound(state: &SlabState1D, gamma: f64) -> f64 {
    let (ky, ry) = state.face_gradients();
    ky.iter()
        .zip(&ry)
        .map(|(k, r)| k - (gamma * gamma + r * r).sqrt())
        .fold(f64::INFINITY, f64::min)
}

/// `u₂(y) = (τ/μ) y + ∫₀^y ρ`, trapezoidal with `ρ(0)` interpolated.
pub fn displacement(state: &SlabState1D, constants: &ElasticConstants) -> Vec<f64> {
    let y = state.nodes();
    let r = &state.rho;
    let dy = state.dy();
    let mut cum = vec![0.0; y.len()];
    for j in 1..y.len() {
        cum[j] = cum[j - 1] + 0.5 * dy * (r[j] + r[j - 1]);
    }
    let k = y.iter().rposition(|&v| v <= 0.0).unwrap_or(0).min(y.len() - 2);
    let s = -y[k];
    let r0 = r[k] + (r[k + 1] - r[k]) * s / dy;
    let at_zero = cum[k] + 0.5 * s * (r[k] + r0);
    y.iter()
        .zip(&cum)
        .map(|(yj, c)| state.tau / constants.mu * yj + c - at_zero)
        .collect()
}

/// Largest `|τ + τ_b| / |τ|` over the nodes where `θ⁺+θ⁻` exceeds
/// `threshold` times its maximum.
pub fn force_balance_defect(state: &SlabState1D, d0: f64, floor: f64, threshold: f64) -> Result<f64> {
    let (tp, tm) = state.node_densities();
    let bs = back_stress(&tp, &tm, state.dy(), d0, floor)?;
    let total: Vec<f64> = tp.iter().zip(&tm).map(|(p, m)| p + m).collect();
    let peak = total.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scale = state.tau.abs().max(f64::MIN_POSITIVE);
    Ok(total
        .iter()
        .zip(&bs.values)
        .filter(|(t, _)| **t > threshold * peak)
        .map(|(_, b)| (state.tau + b).abs() / scale)
        .fold(0.0, f64::max))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    /// Time step; `None` selects [`default_dt`].
    pub dt: Option<f64>,
    pub residual_tol: f64,
    pub t_max: f64,
    /// Steps between stored snapshots.
    pub snapshot_every: usize,
    /// `γ` used by the recorded monitor.
    pub monitor_gamma: f64,
    /// Defaults to `1e-8 c₀` when `None`.
    pub gamma_floor: Option<f64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            dt: None,
            residual_tol: 1e-6,
            t_max: 50.0,
            snapshot_every: 10_000,
            monitor_gamma: 0.0,
            gamma_floor: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Diagnostics {
    pub t: f64,
    pub residual: f64,
    pub min_theta: f64,
    pub min_kappa_y: f64,
    pub m_gamma: f64,
    pub max_rho_yyy: f64,
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub snapshots: Vec<SlabState1D>,
    pub diagnostics: Vec<Diagnostics>,
    pub converged: bool,
    pub steps: usize,
    pub final_residual: f64,
    /// Extremes over every step, not only stored snapshots.
    pub min_theta: f64,
    /// Minimum face `κ_y` over all states with `t > 0`.
    pub min_kappa_y_after_start: f64,
    /// Steps after which some face had `κ_y ≤ 0`.
    pub nonpositive_kappa_steps: Vec<usize>,
    pub min_monitor: f64,
}

impl RunReport {
    pub fn terminal(&self) -> &SlabState1D {
        self.snapshots.last().expect("a run stores at least one snapshot")
    }
}

fn diagnose(state: &SlabState1D, residual: f64, gamma: f64) -> Diagnostics {
    Diagnostics {
        t: state.time,
        residual,
        min_theta: state.min_theta(),
        min_kappa_y: state.min_kappa_y(),
        m_gamma: monitor_lower_bound(state, gamma),
        max_rho_yyy: state.max_rho_yyy(),
    }
}

/// Steps until the residual drops below `residual_tol` or `t_max` is reached,
/// without the compact-support requirement of [`run_to_steady`].
pub fn evolve(initial: &SlabState1D, options: &RunOptions) -> Result<RunReport> {
    let floor = options.gamma_floor.unwrap_or(1e-8 * initial.c0);
    let dt = options.dt.unwrap_or_else(|| default_dt(initial));
    if options.snapshot_every == 0 {
        return Err(Error::Validation("snapshot_every must be at least 1".into()));
    }
    let mut state = initial.clone();
    let mut res = residual(&state, floor)?;
    let first = diagnose(&state, res, options.monitor_gamma);
    let mut report = RunReport {
        snapshots: vec![state.clone()],
        diagnostics: vec![first],
        converged: res < options.residual_tol,
        steps: 0,
        final_residual: res,
        min_theta: first.min_theta,
        min_kappa_y_after_start: f64::INFINITY,
        nonpositive_kappa_steps: Vec::new(),
        min_monitor: first.m_gamma,
    };
    while !report.converged && state.time < options.t_max {
        let (next, r) = step_with_residual(&state, dt.min(options.t_max - state.time), floor)?;
        state = next;
        report.steps += 1;
        // The rate evaluated before the step is the time difference of the step.
        res = r;
        report.min_theta = report.min_theta.min(state.min_theta());
        let min_ky = state.min_kappa_y();
        report.min_kappa_y_after_start = report.min_kappa_y_after_start.min(min_ky);
        if min_ky <= 0.0 {
            report.nonpositive_kappa_steps.push(report.steps);
        }
        report.min_monitor = report.min_monitor.min(monitor_lower_bound(&state, options.monitor_gamma));
        report.converged = res < options.residual_tol;
        let last = report.converged || state.time >= options.t_max;
        if last || report.steps % options.snapshot_every == 0 {
            report.snapshots.push(state.clone());
            report.diagnostics.push(diagnose(&state, res, options.monitor_gamma));
        }
    }
    report.final_residual = res;
    Ok(report)
}

/// [`evolve`] for initial data with compactly supported densities.
pub fn run_to_steady(initial: &SlabState1D, options: &RunOptions) -> Result<RunReport> {
    initial.validate_compact_support()?;
    evolve(initial, options)
}

/// Writes `y,rho,kappa,theta_plus,theta_minus,tau_b,u2` at the nodes.
pub fn write_snapshot(
    path: &Path,
    state: &SlabState1D,
    constants: &ElasticConstants,
    d0: f64,
    floor: f64,
) -> Result<()> {
    let (tp, tm) = state.node_densities();
    let tb = back_stress(&tp, &tm, state.dy(), d0, floor)?;
    let u2 = displacement(state, constants);
    let y = state.nodes();
    let mut w = CsvWriter::create(
        path,
        &["y", "rho", "kappa", "theta_plus", "theta_minus", "tau_b", "u2"],
    )?;
    for j in 0..y.len() {
        w.row(&[y[j], state.rho[j], state.kappa[j], tp[j], tm[j], tb.values[j], u2[j]])?;
    }
    Ok(w.finish()?)
}

pub fn write_diagnostics(path: &Path, diagnostics: &[Diagnostics]) -> std::io::Result<()> {
    let mut w = CsvWriter::create(
        path,
        &["t", "residual", "min_theta", "min_kappa_y", "M_gamma", "max_rho_yyy"],
    )?;
    for d in diagnostics {
        w.row(&[d.t, d.residual, d.min_theta, d.min_kappa_y, d.m_gamma, d.max_rho_yyy])?;
    }
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn back_stress_examples() {
        let c = vec![0.7; 10];
        let b = back_stress(&c, &c, 0.1, 1.0, 1e-8).unwrap();
        assert!(b.values.iter().all(|v| *v == 0.0) && b.flagged.iter().all(|f| !f));

        let errs: Vec<f64> = [100usize, 200]
            .iter()
            .map(|&m| {
                let dy = 2.0 / m as f64;
                let y: Vec<f64> = (0..=m).map(|i| -1.0 + i as f64 * dy).collect();
                let tp: Vec<f64> = y.iter().map(|v| 1.0 + 0.5 * (PI * v).sin()).collect();
                let tm: Vec<f64> = y.iter().map(|v| 1.0 - 0.5 * (PI * v).sin()).collect();
                let b = back_stress(&tp, &tm, dy, 2.0, 1e-8).unwrap();
                (1..m)
                    .map(|i| (b.values[i] + 2.0 * PI * (PI * y[i]).cos() / 2.0).abs())
                    .fold(0.0, f64::max)
            })
            .collect();
        assert!(errs[0] < 1e-2 && errs[1] < errs[0] / 3.5, "{errs:?}");

        let z = vec![0.0; 5];
        let num = vec![0.0, 1e-9, 0.0, -1e-9, 0.0];
        let b = back_stress(&num, &z, 0.5, 1.0, 1e-6).unwrap();
        assert!(b.flagged.iter().all(|f| *f));
        // Largest slope is the one-sided wall stencil, 4·1e-9/(2·0.5).
        assert!(b.values.iter().all(|v| v.abs() <= 1.0 * 4e-9 / 1e-6 + 1e-18));
    }

    #[test]
    fn linear_state_is_stationary_without_load() {
        let s = SlabState1D::linear(50, 1.0, 0.0, 0.1).unwrap();
        assert!(residual(&s, 1e-8).unwrap() < 1e-10);
        let report = run_to_steady(&SlabState1D::linear(50, 1.0, 0.0, 0.1).unwrap(), &RunOptions::default());
        // Linear data has nonzero densities at the walls.
        assert!(report.is_err());
        let report = evolve(&s, &RunOptions::default()).unwrap();
        assert_eq!(report.steps, 0);
        assert!(report.converged);
    }

    #[test]
    fn one_loaded_step_from_linear_state() {
        let (c0, tau) = (1.0, 0.5);
        let s = SlabState1D::linear(40, c0, tau, 0.1).unwrap();
        let dt = default_dt(&s);
        let n = step_regularized(&s, dt, 1e-8).unwrap();
        for j in 1..=40 {
            assert!((n.rho[j] + dt * tau * c0).abs() < 1e-12);
        }
        assert_eq!((n.rho[0], n.rho[41], n.kappa[0], n.kappa[41]), (0.0, 0.0, -c0, c0));
        assert!(matches!(
            step_regularized(&s, 2.0 * max_dt(&s), 1e-8),
            Err(Error::StepSize { .. })
        ));
    }

    #[test]
    fn monitor_examples() {
        let c0 = 1.5;
        let s = SlabState1D::linear(30, c0, 0.0, 0.1).unwrap();
        assert!(monitor_lower_bound(&s, c0).abs() < 1e-12);
        assert!((monitor_lower_bound(&s, c0 / 2.0) - c0 / 2.0).abs() < 1e-12);
        let w = SlabState1D::sine_profile(30, 0.5, c0, 0.0, 0.1).unwrap();
        assert!((monitor_lower_bound(&w, 0.0) - 2.0 * w.min_theta()).abs() < 1e-12);
    }

    #[test]
    fn displacement_examples() {
        let c = ElasticConstants::new(1.0, 2.0).unwrap();
        let s = SlabState1D::linear(20, 1.0, 0.3, 0.1).unwrap();
        for (u, y) in displacement(&s, &c).iter().zip(s.nodes()) {
            assert!((u - 0.15 * y).abs() < 1e-15);
        }

        let mut s = SlabState1D::linear(199, 1.0, 0.0, 0.1).unwrap();
        let y0 = 0.5;
        let y = s.nodes();
        for j in 1..=s.n {
            s.rho[j] = if (0.0..=y0).contains(&y[j]) { 1.0 } else { 0.0 };
        }
        let u = displacement(&s, &c);
        let j0 = y.iter().position(|v| v.abs() < 1e-12).unwrap();
        assert!(u[j0].abs() < 1e-15);
        for j in j0..y.len() {
            assert!((u[j] - y[j].clamp(0.0, y0)).abs() <= s.dy());
        }
    }

    #[test]
    fn gaussian_bump_is_compactly_supported() {
        let s = SlabState1D::gaussian_bump(200, 1.0, 0.5, 0.1).unwrap();
        s.validate_compact_support().unwrap();
        assert_eq!(s.rho, vec![0.0; 202]);
        assert!((s.kappa[201] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn invalid_states_are_rejected() {
        let mut k: Vec<f64> = (0..10).map(|j| -1.0 + 2.0 * j as f64 / 9.0).collect();
        let r = vec![0.0; 10];
        k[4] = k[6] + 0.1;
        assert!(SlabState1D::new(r.clone(), k, 1.0, 0.0, 0.1).is_err());
        let k: Vec<f64> = (0..10).map(|j| -2.0 + 4.0 * j as f64 / 9.0).collect();
        assert!(SlabState1D::new(r, k, 1.0, 0.0, 0.1).is_err());
    }
}

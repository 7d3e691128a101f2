//! Translation-invariant one-dimensional submodel for the primitives `ρ±(y)`:
//!
//! ```text
//! ρ⁺_t = -v ρ⁺_y,   ρ⁻_t = +v ρ⁻_y,
//! v = c₁ [ (ρ⁺-ρ⁻) + c₂ ∫₀¹ (ρ⁺-ρ⁻) + f(t) ]
//! ```
//!
//! Only the 1-periodic parts `p± = ρ± - L y` are stored, on `y_j = j/n`.
//! The reconstructed profile `R_j = p_j + L j/n` is differenced with the
//! wraparound `R_{j+n} = R_j + L`.

use std::f64::consts::TAU;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::elasticity::ElasticConstants;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::io::CsvWriter;

const MONOTONE_TOL: f64 = 1e-12;
/// Ordering slack allowed by [`comparison_check`].
pub const COMPARISON_TOL: f64 = 1e-10;
/// Default fraction of the monotone step bound.
pub const DEFAULT_CFL: f64 = 0.4;

#[derive(Clone, Debug, PartialEq)]
pub struct Sub1DState {
    pub rho_plus: Vec<f64>,
    pub rho_minus: Vec<f64>,
    pub line_density: f64,
    pub time: f64,
}

/// Coefficients of the velocity law, with an optional forcing
/// `f(t) = amplitude · sin(2π t / period)` added to `ρ⁺-ρ⁻`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sub1DModel {
    pub c1: f64,
    pub c2: f64,
    pub forcing_amplitude: f64,
    pub forcing_period: f64,
}

impl Sub1DModel {
    pub fn new(constants: &ElasticConstants) -> Self {
        Self {
            c1: constants.c1,
            c2: constants.c2,
            forcing_amplitude: 0.0,
            forcing_period: 1.0,
        }
    }

    pub fn with_c2(mut self, c2: f64) -> Self {
        self.c2 = c2;
        self
    }

    pub fn with_forcing(mut self, amplitude: f64, period: f64) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::Validation(format!(
                "forcing period must be positive, got {period}"
            )));
        }
        self.forcing_amplitude = amplitude;
        self.forcing_period = period;
        Ok(self)
    }

    pub fn forcing(&self, t: f64) -> f64 {
        if self.forcing_amplitude == 0.0 {
            0.0
        } else {
            self.forcing_amplitude * (TAU * t / self.forcing_period).sin()
        }
    }
}

impl Sub1DState {
    pub fn new(rho_plus: Vec<f64>, rho_minus: Vec<f64>, line_density: f64) -> Result<Self> {
        if rho_plus.len() != rho_minus.len() || rho_plus.len() < 2 {
            return Err(Error::InvalidState(
                "rho+ and rho- need the same length, at least 2".into(),
            ));
        }
        if !(line_density > 0.0) {
            return Err(Error::InvalidState("line density L must be positive".into()));
        }
        if rho_plus.iter().chain(&rho_minus).any(|v| !v.is_finite()) {
            return Err(Error::InvalidState("profiles must be finite".into()));
        }
        let state = Self {
            rho_plus,
            rho_minus,
            line_density,
            time: 0.0,
        };
        for (name, p) in [("rho+", &state.rho_plus), ("rho-", &state.rho_minus)] {
            let (j, d) = state.min_increment(p);
            if d < -MONOTONE_TOL {
                return Err(Error::InvalidState(format!(
                    "{name} decreases by {:e} after grid point {j}",
                    -d
                )));
            }
        }
        Ok(state)
    }

    /// Builds a state from `ρ±` as functions of `y ∈ [0,1)`; the `L y` part is
    /// removed before storage.
    pub fn from_fn(
        n: usize,
        line_density: f64,
        rho_plus: impl Fn(f64) -> f64,
        rho_minus: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let periodic = |f: &dyn Fn(f64) -> f64| {
            (0..n)
                .map(|j| {
                    let y = j as f64 / n as f64;
                    f(y) - line_density * y
                })
                .collect::<Vec<_>>()
        };
        Self::new(periodic(&rho_plus), periodic(&rho_minus), line_density)
    }

    pub fn n(&self) -> usize {
        self.rho_plus.len()
    }

    pub fn dy(&self) -> f64 {
        1.0 / self.n() as f64
    }

    /// Increment `R_{j+1} - R_j`, wrapping at the last point.
    fn increment(&self, p: &[f64], j: usize) -> f64 {
        let n = p.len();
        p[(j + 1) % n] - p[j] + self.line_density / n as f64
    }

    fn min_increment(&self, p: &[f64]) -> (usize, f64) {
        (0..p.len())
            .map(|j| (j, self.increment(p, j)))
            .fold((0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a })
    }

    /// Reconstructed `ρ±(y_j) = p±_j + L y_j`.
    pub fn reconstructed(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n() as f64;
        let r = |p: &[f64]| {
            p.iter()
                .enumerate()
                .map(|(j, v)| v + self.line_density * j as f64 / n)
                .collect()
        };
        (r(&self.rho_plus), r(&self.rho_minus))
    }

    /// Smallest forward difference of the reconstructed profiles.
    pub fn min_forward_difference(&self) -> f64 {
        self.min_increment(&self.rho_plus)
            .1
            .min(self.min_increment(&self.rho_minus).1)
    }

    /// Largest slope `(R_{j+1}-R_j)/Δy` over both profiles.
    pub fn max_slope(&self) -> f64 {
        [&self.rho_plus, &self.rho_minus]
            .into_iter()
            .flat_map(|p| (0..p.len()).map(move |j| self.increment(p, j)))
            .fold(f64::NEG_INFINITY, f64::max)
            / self.dy()
    }
}

/// `v(y_j)` with the integral taken by the periodic trapezoidal rule.
pub fn velocity_field(state: &Sub1DState, constants: &ElasticConstants) -> Vec<f64> {
    velocity_with_model(state, &Sub1DModel::new(constants))
}

pub fn velocity_with_model(state: &Sub1DState, model: &Sub1DModel) -> Vec<f64> {
    let diff: Vec<f64> = state
        .rho_plus
        .iter()
        .zip(&state.rho_minus)
        .map(|(p, m)| p - m)
        .collect();
    let mean = diff.iter().sum::<f64>() / diff.len() as f64;
    let shift = model.c2 * mean + model.forcing(state.time);
    diff.iter().map(|d| model.c1 * (d + shift)).collect()
}

/// Largest `dt` for which the update is monotone: the advective Courant
/// number plus the sensitivity of the local velocity to the profile.
pub fn stable_dt(state: &Sub1DState, model: &Sub1DModel, cfl: f64) -> f64 {
    let v = velocity_with_model(state, model);
    let vmax = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let rate = vmax / state.dy() + model.c1.abs() * state.max_slope().max(0.0);
    if rate == 0.0 {
        f64::INFINITY
    } else {
        cfl / rate
    }
}

/// Upwind update of one periodic part under transport speed `w`
/// (`R_t + w R_y = 0`).
fn upwind(state: &Sub1DState, p: &[f64], w: &[f64], dt: f64) -> Vec<f64> {
    let n = p.len();
    let inv = 1.0 / state.dy();
    (0..n)
        .map(|j| {
            let back = state.increment(p, (j + n - 1) % n) * inv;
            let fwd = state.increment(p, j) * inv;
            p[j] - dt * (w[j].max(0.0) * back + w[j].min(0.0) * fwd)
        })
        .collect()
}

pub fn step(state: &Sub1DState, dt: f64, constants: &ElasticConstants) -> Result<Sub1DState> {
    step_with_model(state, dt, &Sub1DModel::new(constants))
}

pub fn step_with_model(state: &Sub1DState, dt: f64, model: &Sub1DModel) -> Result<Sub1DState> {
    if !(dt > 0.0) {
        return Err(Error::Validation(format!("dt must be positive, got {dt}")));
    }
    let v = velocity_with_model(state, model);
    let vmax = v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    if vmax > 0.0 && dt * vmax / state.dy() > 1.0 {
        return Err(Error::StepSize {
            dt,
            max_dt: state.dy() / vmax,
        });
    }
    let neg: Vec<f64> = v.iter().map(|x| -x).collect();
    Ok(Sub1DState {
        rho_plus: upwind(state, &state.rho_plus, &v, dt),
        rho_minus: upwind(state, &state.rho_minus, &neg, dt),
        line_density: state.line_density,
        time: state.time + dt,
    })
}

/// Steps to `t_final` with `dt = cfl · stable_dt`, calling `observe` after
/// every step.
pub fn evolve(
    state: &Sub1DState,
    model: &Sub1DModel,
    t_final: f64,
    cfl: f64,
    mut observe: impl FnMut(&Sub1DState) -> Result<()>,
) -> Result<Sub1DState> {
    let mut s = state.clone();
    while s.time < t_final {
        let dt = stable_dt(&s, model, cfl).min(t_final - s.time);
        s = step_with_model(&s, dt, model)?;
        observe(&s)?;
    }
    Ok(s)
}

fn ordered(a: &Sub1DState, b: &Sub1DState, tol: f64) -> bool {
    let (ap, am) = a.reconstructed();
    let (bp, bm) = b.reconstructed();
    ap.iter().zip(&bp).all(|(x, y)| *x <= y + tol) && am.iter().zip(&bm).all(|(x, y)| *x <= y + tol)
}

/// Evolves both states with `c₂ = 0` on a shared step schedule and reports
/// whether `ρ^{±,a} ≤ ρ^{±,b} + 1e-10` held at every grid point and step.
pub fn comparison_check(
    pair_a: &Sub1DState,
    pair_b: &Sub1DState,
    t_final: f64,
    constants: &ElasticConstants,
) -> Result<bool> {
    if pair_a.n() != pair_b.n() || pair_a.line_density != pair_b.line_density {
        return Err(Error::Precondition(
            "compared states must share grid and line density".into(),
        ));
    }
    if !ordered(pair_a, pair_b, 0.0) {
        return Err(Error::Precondition(
            "initial profiles are not ordered".into(),
        ));
    }
    let model = Sub1DModel::new(constants).with_c2(0.0);
    let (mut a, mut b) = (pair_a.clone(), pair_b.clone());
    let mut holds = true;
    while a.time < t_final {
        let dt = stable_dt(&a, &model, DEFAULT_CFL)
            .min(stable_dt(&b, &model, DEFAULT_CFL))
            .min(t_final - a.time);
        a = step_with_model(&a, dt, &model)?;
        b = step_with_model(&b, dt, &model)?;
        b.time = a.time;
        holds &= ordered(&a, &b, COMPARISON_TOL);
    }
    Ok(holds)
}

/// Runs [`comparison_check`] over many pairs; results are in input order.
pub fn comparison_campaign(
    pairs: &[(Sub1DState, Sub1DState)],
    t_final: f64,
    constants: &ElasticConstants,
    exec: Execution,
) -> Vec<Result<bool>> {
    exec.map(pairs.len(), |i| {
        comparison_check(&pairs[i].0, &pairs[i].1, t_final, constants)
    })
}

fn random_periodic(rng: &mut ChaCha8Rng, n: usize, line_density: f64) -> Vec<f64> {
    let modes = 4;
    let weights: Vec<f64> = (0..modes).map(|_| rng.gen_range(0.0..1.0)).collect();
    let total: f64 = weights.iter().sum::<f64>().max(1e-12);
    let slope_budget = 0.9 * line_density;
    let terms: Vec<(f64, f64, f64)> = weights
        .iter()
        .enumerate()
        .map(|(m, w)| {
            let k = (m + 1) as f64;
            (slope_budget * w / total, k, rng.gen_range(0.0..TAU))
        })
        .collect();
    let offset = rng.gen_range(-0.5..0.5);
    (0..n)
        .map(|j| {
            let y = j as f64 / n as f64;
            offset
                + terms
                    .iter()
                    .map(|(a, k, ph)| a * (TAU * k * y + ph).sin() / (TAU * k))
                    .sum::<f64>()
        })
        .collect()
}

/// Random nondecreasing profiles: smooth periodic parts whose slope never
/// drops below `-0.9 L`.
pub fn random_monotone_state(n: usize, line_density: f64, seed: u64) -> Result<Sub1DState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = random_periodic(&mut rng, n, line_density);
    let m = random_periodic(&mut rng, n, line_density);
    Sub1DState::new(p, m, line_density)
}

/// Two independent random states, the second lifted so that it lies above the
/// first at every grid point.
pub fn random_ordered_pair(n: usize, line_density: f64, seed: u64) -> Result<(Sub1DState, Sub1DState)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Sub1DState::new(
        random_periodic(&mut rng, n, line_density),
        random_periodic(&mut rng, n, line_density),
        line_density,
    )?;
    let lift = |lower: &[f64], upper: Vec<f64>, extra: f64| {
        let gap = lower
            .iter()
            .zip(&upper)
            .map(|(l, u)| l - u)
            .fold(f64::NEG_INFINITY, f64::max);
        upper.into_iter().map(|u| u + gap + extra).collect::<Vec<_>>()
    };
    let bp = random_periodic(&mut rng, n, line_density);
    let bm = random_periodic(&mut rng, n, line_density);
    let (ep, em) = (rng.gen_range(0.0..0.1), rng.gen_range(0.0..0.1));
    let b = Sub1DState::new(lift(&a.rho_plus, bp, ep), lift(&a.rho_minus, bm, em), line_density)?;
    Ok((a, b))
}

/// Writes `y,rho_plus,rho_minus,velocity` with reconstructed profiles.
pub fn write_snapshot(path: &Path, state: &Sub1DState, velocity: &[f64]) -> std::io::Result<()> {
    let mut w = CsvWriter::create(path, &["y", "rho_plus", "rho_minus", "velocity"])?;
    let (rp, rm) = state.reconstructed();
    for j in 0..state.n() {
        w.row(&[j as f64 * state.dy(), rp[j], rm[j], velocity[j]])?;
    }
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> ElasticConstants {
        ElasticConstants::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn velocity_examples() {
        let c = unit();
        let wavy = |y: f64| y + 0.05 * (TAU * y).sin();
        let s = Sub1DState::from_fn(16, 1.0, wavy, wavy).unwrap();
        assert!(velocity_field(&s, &c).iter().all(|v| *v == 0.0));
        let d = 0.25;
        let s = Sub1DState::from_fn(16, 1.0, |y| y + d, |y| y).unwrap();
        for v in velocity_field(&s, &c) {
            assert!((v - c.c1 * d * (1.0 + c.c2)).abs() < 1e-15);
        }
        let s = Sub1DState::from_fn(
            64,
            2.0,
            |y| 2.0 * y + 0.1 * (TAU * y).sin(),
            |y| 2.0 * y - 0.1 * (TAU * y).sin(),
        )
        .unwrap();
        for (j, v) in velocity_field(&s, &c).iter().enumerate() {
            let y = j as f64 / 64.0;
            assert!((v - c.c1 * 0.2 * (TAU * y).sin()).abs() < 1e-14);
        }
    }

    #[test]
    fn equal_profiles_are_stationary() {
        let c = unit();
        let s = random_monotone_state(32, 1.0, 4).unwrap();
        let s = Sub1DState::new(s.rho_plus.clone(), s.rho_plus, 1.0).unwrap();
        let n = step(&s, 0.01, &c).unwrap();
        assert_eq!(n.rho_plus, s.rho_plus);
        assert_eq!(n.rho_minus, s.rho_minus);
    }

    #[test]
    fn constant_difference_translates_on_eight_points() {
        let c = unit();
        let (l, d, dt) = (1.0, 0.5, 0.01);
        let s = Sub1DState::from_fn(8, l, |y| l * y + d, |y| l * y).unwrap();
        let n = step(&s, dt, &c).unwrap();
        let v = c.c1 * d * (1.0 + c.c2);
        // Both profiles are linear, so upwind differencing is exact:
        // ρ⁺ moves right by v dt, ρ⁻ moves left by v dt.
        for j in 0..8 {
            assert!((n.rho_plus[j] - (d - v * dt * l)).abs() < 1e-15);
            assert!((n.rho_minus[j] - v * dt * l).abs() < 1e-15);
        }
    }

    #[test]
    fn cfl_violation_is_reported() {
        let c = unit();
        let s = Sub1DState::from_fn(8, 1.0, |y| y + 1.0, |y| y).unwrap();
        assert!(matches!(step(&s, 1.0, &c), Err(Error::StepSize { .. })));
    }

    #[test]
    fn decreasing_profiles_are_rejected() {
        assert!(Sub1DState::from_fn(16, 1.0, |y| y - 0.5 * (TAU * y).sin(), |y| y).is_err());
    }

    #[test]
    fn comparison_examples() {
        let c = unit();
        let a = random_monotone_state(64, 1.0, 7).unwrap();
        assert!(comparison_check(&a, &a, 0.2, &c).unwrap());
        let mut b = a.clone();
        b.rho_plus.iter_mut().chain(b.rho_minus.iter_mut()).for_each(|v| *v += 0.1);
        assert!(comparison_check(&a, &b, 0.2, &c).unwrap());
        assert!(matches!(
            comparison_check(&b, &a, 0.2, &c),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn forcing_enters_velocity() {
        let c = unit();
        let model = Sub1DModel::new(&c).with_forcing(2.0, 4.0).unwrap();
        let mut s = Sub1DState::from_fn(8, 1.0, |y| y, |y| y).unwrap();
        s.time = 1.0;
        for v in velocity_with_model(&s, &model) {
            assert!((v - 2.0 * c.c1).abs() < 1e-15);
        }
    }
}

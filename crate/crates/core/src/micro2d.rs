//! Signed straight edge dislocations moving along `e1` under the pairwise
//! Volterra interaction.

use std::io::Write;

use crate::elasticity::{kernel_sigma0, ElasticConstants};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::spectral::PeriodicField2D;

pub const DEFAULT_MIN_SEPARATION: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct ParticleSystem {
    positions: Vec<[f64; 2]>,
    signs: Vec<i8>,
    pub time: f64,
}

impl ParticleSystem {
    /// Builds a system at time 0. Signs must be `±1` and positions pairwise
    /// distinct.
    pub fn new(positions: Vec<[f64; 2]>, signs: Vec<i8>) -> Result<Self> {
        if positions.len() != signs.len() {
            return Err(Error::Validation(format!(
                "{} positions but {} signs",
                positions.len(),
                signs.len()
            )));
        }
        if let Some(i) = signs.iter().position(|&s| s != 1 && s != -1) {
            return Err(Error::Validation(format!(
                "sign of particle {i} must be +1 or -1"
            )));
        }
        if positions.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Validation("particle positions must be finite".into()));
        }
        let system = Self {
            positions,
            signs,
            time: 0.0,
        };
        if let Some((first, second)) = system.closest_pair_within(0.0) {
            return Err(Error::Collision { first, second });
        }
        Ok(system)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    /// First pair (in index order) whose distance is `<= threshold`.
    fn closest_pair_within(&self, threshold: f64) -> Option<(usize, usize)> {
        let t2 = threshold * threshold;
        for i in 0..self.positions.len() {
            for j in i + 1..self.positions.len() {
                let d1 = self.positions[i][0] - self.positions[j][0];
                let d2 = self.positions[i][1] - self.positions[j][1];
                if d1 * d1 + d2 * d2 <= t2 {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.positions.len() {
            for j in i + 1..self.positions.len() {
                let d1 = self.positions[i][0] - self.positions[j][0];
                let d2 = self.positions[i][1] - self.positions[j][1];
                best = best.min((d1 * d1 + d2 * d2).sqrt());
            }
        }
        best
    }

    /// Writes `time,index,sign,x1,x2` rows (no header).
    pub fn write_csv_rows<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        for (i, (p, s)) in self.positions.iter().zip(&self.signs).enumerate() {
            writeln!(
                out,
                "{},{},{},{},{}",
                crate::io::fmt_f64(self.time),
                i,
                s,
                crate::io::fmt_f64(p[0]),
                crate::io::fmt_f64(p[1])
            )?;
        }
        Ok(())
    }
}

/// `x1`-velocity of every particle: `Σ_{j≠i} ε_i ε_j σ₀(X^i - X^j)`.
pub fn pairwise_velocity(system: &ParticleSystem, constants: &ElasticConstants) -> Result<Vec<f64>> {
    pairwise_velocity_with(system, constants, Execution::default())
}

pub fn pairwise_velocity_with(
    system: &ParticleSystem,
    constants: &ElasticConstants,
    exec: Execution,
) -> Result<Vec<f64>> {
    let pos = &system.positions;
    let signs = &system.signs;
    let rows = exec.map(pos.len(), |i| {
        let mut v = 0.0;
        for j in 0..pos.len() {
            if j == i {
                continue;
            }
            let d = [pos[i][0] - pos[j][0], pos[i][1] - pos[j][1]];
            if d[0] == 0.0 && d[1] == 0.0 {
                return Err((i.min(j), i.max(j)));
            }
            v += f64::from(signs[i] * signs[j]) * kernel_sigma0(d, constants);
        }
        Ok(v)
    });
    rows.into_iter()
        .map(|r| r.map_err(|(first, second)| Error::Collision { first, second }))
        .collect()
}

/// One forward-Euler step of the `x1` coordinates.
pub fn step_particles(
    system: &ParticleSystem,
    dt: f64,
    constants: &ElasticConstants,
    min_separation: f64,
) -> Result<ParticleSystem> {
    step_particles_with(system, dt, constants, min_separation, Execution::default())
}

pub fn step_particles_with(
    system: &ParticleSystem,
    dt: f64,
    constants: &ElasticConstants,
    min_separation: f64,
    exec: Execution,
) -> Result<ParticleSystem> {
    if !(dt > 0.0) {
        return Err(Error::Validation(format!("dt must be positive, got {dt}")));
    }
    let v = pairwise_velocity_with(system, constants, exec)?;
    let mut next = system.clone();
    for (p, vi) in next.positions.iter_mut().zip(&v) {
        p[0] += dt * vi;
    }
    next.time += dt;
    if let Some((first, second)) = next.closest_pair_within(min_separation) {
        return Err(Error::Collision { first, second });
    }
    Ok(next)
}

/// Periodized 1D Gaussian of width `w` centred at `c`, sampled at `k/n` and
/// normalized to unit grid quadrature.
fn periodic_gaussian(n: usize, c: f64, w: f64) -> Vec<f64> {
    let images = (6.0 * w).ceil() as i64 + 1;
    let mut g: Vec<f64> = (0..n)
        .map(|k| {
            let x = k as f64 / n as f64;
            (-images..=images)
                .map(|m| {
                    let d = x - c - m as f64;
                    (-d * d / (2.0 * w * w)).exp()
                })
                .sum()
        })
        .collect();
    let mass = g.iter().sum::<f64>() / n as f64;
    g.iter_mut().for_each(|v| *v /= mass);
    g
}

/// Mollified densities `(θ⁺, θ⁻)`: each particle is deposited as a periodized
/// Gaussian bump whose grid quadrature is exactly one.
pub fn empirical_density(
    system: &ParticleSystem,
    grid: (usize, usize),
    smoothing_width: f64,
) -> Result<(PeriodicField2D, PeriodicField2D)> {
    let (n1, n2) = grid;
    if !(smoothing_width > 0.0) {
        return Err(Error::Validation(format!(
            "smoothing width must be positive, got {smoothing_width}"
        )));
    }
    let mut plus = vec![0.0; n1 * n2];
    let mut minus = vec![0.0; n1 * n2];
    for (p, &s) in system.positions.iter().zip(&system.signs) {
        let g1 = periodic_gaussian(n1, p[0].rem_euclid(1.0), smoothing_width);
        let g2 = periodic_gaussian(n2, p[1].rem_euclid(1.0), smoothing_width);
        let target = if s > 0 { &mut plus } else { &mut minus };
        for j in 0..n2 {
            for i in 0..n1 {
                target[j * n1 + i] += g1[i] * g2[j];
            }
        }
    }
    Ok((
        PeriodicField2D::new(n1, n2, plus)?,
        PeriodicField2D::new(n1, n2, minus)?,
    ))
}

/// `count` particles uniformly in the unit cell with alternating signs.
pub fn random_system(count: usize, seed: u64) -> Result<ParticleSystem> {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let positions = (0..count).map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect();
    let signs = (0..count).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
    ParticleSystem::new(positions, signs)
}

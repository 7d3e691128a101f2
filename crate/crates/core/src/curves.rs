//! Front tracking of closed polygonal curves under a prescribed normal
//! velocity, and the lifted measures `(g, κ)` on position-angle space.
//!
//! Angles follow the lifted convention `τ(θ) = (sin θ, -cos θ)` and
//! `n(θ) = (cos θ, sin θ)`: `n` is the traversal tangent rotated a quarter
//! turn counterclockwise. For a counterclockwise curve `n` points inward, the
//! curvature `dθ/ds` is positive and the total turning is `+2π`.
//!
//! The user velocity `c` moves vertices along the *outward* normal. The same
//! motion written with `n(θ)` has speed `-orientation · c`, and that is the
//! speed entering the transport residual.

use std::f64::consts::{PI, TAU};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::io::CsvWriter;

pub const MIN_VERTICES: usize = 8;

type Vec2 = [f64; 2];

fn sub(a: Vec2, b: Vec2) -> Vec2 {
    [a[0] - b[0], a[1] - b[1]]
}

fn dot(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn cross(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn norm(a: Vec2) -> f64 {
    a[0].hypot(a[1])
}

#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    vertices: Vec<Vec2>,
    orientation: i8,
}

impl Curve {
    /// Validates the polygon and derives its orientation from the signed area.
    pub fn new(vertices: Vec<Vec2>) -> Result<Self> {
        Self::new_with(vertices, Execution::default())
    }

    pub fn new_with(vertices: Vec<Vec2>, exec: Execution) -> Result<Self> {
        let m = vertices.len();
        if m < MIN_VERTICES {
            return Err(Error::Validation(format!(
                "a curve needs at least {MIN_VERTICES} vertices, got {m}"
            )));
        }
        if vertices.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Validation("vertices must be finite".into()));
        }
        if let Some(i) = (0..m).find(|&i| vertices[i] == vertices[(i + 1) % m]) {
            return Err(Error::Validation(format!(
                "vertices {i} and {} coincide",
                (i + 1) % m
            )));
        }
        if let Some((i, j)) = first_crossing(&vertices, exec) {
            return Err(Error::Topology(format!("edges {i} and {j} intersect")));
        }
        let area = signed_area(&vertices);
        if area == 0.0 {
            return Err(Error::Topology("polygon has zero area".into()));
        }
        Ok(Self {
            vertices,
            orientation: if area > 0.0 { 1 } else { -1 },
        })
    }

    /// `m` vertices on a circle, counterclockwise unless `clockwise`.
    pub fn circle(center: Vec2, radius: f64, m: usize, clockwise: bool) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Validation("radius must be positive".into()));
        }
        Self::parametric(m, clockwise, |s| {
            [center[0] + radius * s.cos(), center[1] + radius * s.sin()]
        })
    }

    /// Ellipse with semi-axes `a` along `e1` and `b` along `e2`, vertices
    /// uniform in the parameter.
    pub fn ellipse(center: Vec2, a: f64, b: f64, m: usize) -> Result<Self> {
        if !(a > 0.0 && b > 0.0) {
            return Err(Error::Validation("semi-axes must be positive".into()));
        }
        Self::parametric(m, false, |s| [center[0] + a * s.cos(), center[1] + b * s.sin()])
    }

    /// Vertices `point(2π k/m)`, reversed if `clockwise`.
    pub fn parametric(m: usize, clockwise: bool, point: impl Fn(f64) -> Vec2) -> Result<Self> {
        let sign = if clockwise { -1.0 } else { 1.0 };
        Self::new((0..m).map(|k| point(sign * TAU * k as f64 / m as f64)).collect())
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `+1` for counterclockwise, `-1` for clockwise.
    pub fn orientation(&self) -> i8 {
        self.orientation
    }

    fn edge(&self, i: usize) -> Vec2 {
        let m = self.len();
        sub(self.vertices[(i + 1) % m], self.vertices[i])
    }

    pub fn edge_lengths(&self) -> Vec<f64> {
        (0..self.len()).map(|i| norm(self.edge(i))).collect()
    }

    pub fn perimeter(&self) -> f64 {
        self.edge_lengths().iter().sum()
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices).abs()
    }

    pub fn centroid(&self) -> Vec2 {
        let m = self.len() as f64;
        let s = self.vertices.iter().fold([0.0, 0.0], |a, v| [a[0] + v[0], a[1] + v[1]]);
        [s[0] / m, s[1] / m]
    }

    /// Mean distance of the vertices from their centroid.
    pub fn mean_radius(&self) -> f64 {
        let c = self.centroid();
        self.vertices.iter().map(|v| norm(sub(*v, c))).sum::<f64>() / self.len() as f64
    }

    /// Unit tangent at each vertex along the traversal direction, bisecting
    /// the adjacent edge directions.
    pub fn vertex_tangents(&self) -> Vec<Vec2> {
        let m = self.len();
        (0..m)
            .map(|i| {
                let a = self.edge((i + m - 1) % m);
                let b = self.edge(i);
                let (la, lb) = (norm(a), norm(b));
                let t = [a[0] / la + b[0] / lb, a[1] / la + b[1] / lb];
                let lt = norm(t);
                if lt > 1e-14 {
                    [t[0] / lt, t[1] / lt]
                } else {
                    [b[0] / lb, b[1] / lb]
                }
            })
            .collect()
    }

    /// Unit outward normal at each vertex.
    pub fn outward_normals(&self) -> Vec<Vec2> {
        let o = f64::from(self.orientation);
        self.vertex_tangents()
            .into_iter()
            .map(|t| [o * t[1], -o * t[0]])
            .collect()
    }
}

fn signed_area(v: &[Vec2]) -> f64 {
    let m = v.len();
    0.5 * (0..m).map(|i| cross(v[i], v[(i + 1) % m])).sum::<f64>()
}

fn on_segment(p: Vec2, q: Vec2, r: Vec2) -> bool {
    r[0] >= p[0].min(q[0]) && r[0] <= p[0].max(q[0]) && r[1] >= p[1].min(q[1]) && r[1] <= p[1].max(q[1])
}

fn segments_intersect(p1: Vec2, p2: Vec2, q1: Vec2, q2: Vec2) -> bool {
    let d1 = cross(sub(q2, q1), sub(p1, q1));
    let d2 = cross(sub(q2, q1), sub(p2, q1));
    let d3 = cross(sub(p2, p1), sub(q1, p1));
    let d4 = cross(sub(p2, p1), sub(q2, p1));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

/// First pair of non-adjacent intersecting edges.
fn first_crossing(v: &[Vec2], exec: Execution) -> Option<(usize, usize)> {
    let m = v.len();
    let hits = exec.map(m, |i| {
        (i + 2..m)
            .filter(|&j| !(i == 0 && j == m - 1))
            .find(|&j| segments_intersect(v[i], v[(i + 1) % m], v[j], v[(j + 1) % m]))
            .map(|j| (i, j))
    });
    hits.into_iter().flatten().next()
}

/// Prescribed normal velocity with analytic first and second derivatives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VelocityField {
    /// `c(y) = value`.
    Constant(f64),
    /// `c(y) = offset + gradient · y`.
    Linear { gradient: Vec2, offset: f64 },
    /// `c(y) = base + curvature |y|² / 2`.
    Radial { base: f64, curvature: f64 },
}

impl VelocityField {
    pub fn value(&self, y: Vec2, _t: f64) -> f64 {
        match *self {
            VelocityField::Constant(c) => c,
            VelocityField::Linear { gradient, offset } => offset + dot(gradient, y),
            VelocityField::Radial { base, curvature } => base + 0.5 * curvature * dot(y, y),
        }
    }

    pub fn gradient(&self, y: Vec2, _t: f64) -> Vec2 {
        match *self {
            VelocityField::Constant(_) => [0.0, 0.0],
            VelocityField::Linear { gradient, .. } => gradient,
            VelocityField::Radial { curvature, .. } => [curvature * y[0], curvature * y[1]],
        }
    }

    /// `[c_11, c_12, c_22]`.
    pub fn hessian(&self, _y: Vec2, _t: f64) -> [f64; 3] {
        match *self {
            VelocityField::Radial { curvature, .. } => [curvature, 0.0, curvature],
            _ => [0.0, 0.0, 0.0],
        }
    }
}

/// Moves every vertex by `dt c(y,t)` along the outward vertex normal.
///
/// Vertices are redistributed uniformly in arclength afterwards when
/// `redistribute` is set and the edge lengths differ by more than a factor 2.
pub fn evolve_curve(
    curve: &Curve,
    c: &VelocityField,
    t: f64,
    dt: f64,
    redistribute: bool,
) -> Result<Curve> {
    if !(dt > 0.0) {
        return Err(Error::Validation(format!("dt must be positive, got {dt}")));
    }
    let lengths = curve.edge_lengths();
    let min_edge = lengths.iter().copied().fold(f64::INFINITY, f64::min);
    let speeds: Vec<f64> = curve.vertices.iter().map(|v| c.value(*v, t)).collect();
    let cmax = speeds.iter().fold(0.0_f64, |m, s| m.max(s.abs()));
    if dt * cmax >= 0.5 * min_edge {
        return Err(Error::Precondition(format!(
            "dt * max|c| = {:e} must stay below half the shortest edge {:e}",
            dt * cmax,
            0.5 * min_edge
        )));
    }
    let moved: Vec<Vec2> = curve
        .vertices
        .iter()
        .zip(curve.outward_normals())
        .zip(&speeds)
        .map(|((v, n), s)| [v[0] + dt * s * n[0], v[1] + dt * s * n[1]])
        .collect();
    let next = Curve::new(moved)?;
    if next.orientation != curve.orientation {
        return Err(Error::Topology("curve orientation flipped".into()));
    }
    if redistribute {
        let l = next.edge_lengths();
        let (lo, hi) = l
            .iter()
            .fold((f64::INFINITY, 0.0_f64), |(a, b), x| (a.min(*x), b.max(*x)));
        if hi > 2.0 * lo {
            return redistribute_arclength(&next);
        }
    }
    Ok(next)
}

/// Resamples the polygon at uniform arclength, keeping vertex 0 fixed.
pub fn redistribute_arclength(curve: &Curve) -> Result<Curve> {
    let m = curve.len();
    let lengths = curve.edge_lengths();
    let total: f64 = lengths.iter().sum();
    let mut out = Vec::with_capacity(m);
    let mut edge = 0;
    let mut start = 0.0;
    for k in 0..m {
        let s = total * k as f64 / m as f64;
        while edge < m - 1 && start + lengths[edge] < s {
            start += lengths[edge];
            edge += 1;
        }
        let f = ((s - start) / lengths[edge]).clamp(0.0, 1.0);
        let a = curve.vertices[edge];
        let e = curve.edge(edge);
        out.push([a[0] + f * e[0], a[1] + f * e[1]]);
    }
    Curve::new(out)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureSample {
    pub y: Vec2,
    /// Lifted angle in `[0, 2π)`.
    pub theta: f64,
    pub g_weight: f64,
    pub kappa_weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftedMeasure {
    pub samples: Vec<MeasureSample>,
}

impl LiftedMeasure {
    pub fn total_g(&self) -> f64 {
        self.samples.iter().map(|s| s.g_weight).sum()
    }

    pub fn total_kappa(&self) -> f64 {
        self.samples.iter().map(|s| s.kappa_weight).sum()
    }

    /// Copy with every curvature weight set to zero.
    pub fn without_curvature(&self) -> Self {
        Self {
            samples: self
                .samples
                .iter()
                .map(|s| MeasureSample {
                    kappa_weight: 0.0,
                    ..*s
                })
                .collect(),
        }
    }
}

/// Per vertex: lifted tangent angle, half the adjacent edge lengths as
/// arclength mass and the signed turning angle as curvature mass.
pub fn lift_measures(curve: &Curve) -> LiftedMeasure {
    let m = curve.len();
    let lengths = curve.edge_lengths();
    let tangents = curve.vertex_tangents();
    let samples = (0..m)
        .map(|i| {
            let prev = (i + m - 1) % m;
            let a = curve.edge(prev);
            let b = curve.edge(i);
            let t = tangents[i];
            MeasureSample {
                y: curve.vertices[i],
                theta: wrap_angle(t[0].atan2(-t[1])),
                g_weight: 0.5 * (lengths[prev] + lengths[i]),
                kappa_weight: cross(a, b).atan2(dot(a, b)),
            }
        })
        .collect();
    LiftedMeasure { samples }
}

/// `φ(y,θ) = exp(-|y-c|²/(2s²)) · (α + β cos kθ + γ sin kθ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestFunction {
    pub center: Vec2,
    pub width: f64,
    pub mode: u32,
    pub coeffs: [f64; 3],
}

/// `φ` with its `y`-gradient, `θ`-derivative and `y`-Hessian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: Vec2,
    pub d_theta: f64,
    pub hessian: [f64; 3],
}

impl TestFunction {
    pub fn jet(&self, y: Vec2, theta: f64) -> Jet {
        let d = sub(y, self.center);
        let s2 = self.width * self.width;
        let g = (-dot(d, d) / (2.0 * s2)).exp();
        let k = f64::from(self.mode);
        let [a, b, c] = self.coeffs;
        let (sn, cs) = (k * theta).sin_cos();
        let f = a + b * cs + c * sn;
        let fp = k * (c * cs - b * sn);
        let gx = -d[0] / s2 * g;
        let gy = -d[1] / s2 * g;
        let h = |i: usize, j: usize| {
            let delta = if i == j { 1.0 } else { 0.0 };
            g * (d[i] * d[j] / (s2 * s2) - delta / s2)
        };
        Jet {
            value: g * f,
            grad: [gx * f, gy * f],
            d_theta: g * fp,
            hessian: [h(0, 0) * f, h(0, 1) * f, h(1, 1) * f],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TestFamily {
    pub functions: Vec<TestFunction>,
}

impl TestFamily {
    /// `count` functions with centres uniform in `[-box, box]²`, widths in
    /// `width_range` and angular modes cycling through 0, 1 and 2.
    pub fn random(count: usize, seed: u64, box_half_width: f64, width_range: (f64, f64)) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let functions = (0..count)
            .map(|i| TestFunction {
                center: [
                    rng.gen_range(-box_half_width..box_half_width),
                    rng.gen_range(-box_half_width..box_half_width),
                ],
                width: rng.gen_range(width_range.0..width_range.1),
                mode: (i % 3) as u32,
                coeffs: [
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ],
            })
            .collect();
        Self { functions }
    }

    /// Twelve functions centred in `[-2, 2]²` with widths in `[0.3, 0.8]`.
    pub fn default_family(seed: u64) -> Self {
        Self::random(12, seed, 2.0, (0.3, 0.8))
    }
}

/// Angle in `[0, 2π)`; `rem_euclid` alone rounds tiny negatives up to `2π`.
fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

fn tau_of(theta: f64) -> Vec2 {
    [theta.sin(), -theta.cos()]
}

fn n_of(theta: f64) -> Vec2 {
    [theta.cos(), theta.sin()]
}

/// `Σ g τ·∇φ + Σ κ ∂θφ` for one test function.
pub fn compatibility_pairing(measure: &LiftedMeasure, phi: &TestFunction) -> f64 {
    measure
        .samples
        .iter()
        .map(|s| {
            let j = phi.jet(s.y, s.theta);
            s.g_weight * dot(tau_of(s.theta), j.grad) + s.kappa_weight * j.d_theta
        })
        .sum()
}

/// Largest compatibility pairing over the family, divided by the perimeter.
pub fn compatibility_residual(measure: &LiftedMeasure, family: &TestFamily, exec: Execution) -> f64 {
    let perimeter = measure.total_g();
    exec.map(family.functions.len(), |i| {
        compatibility_pairing(measure, &family.functions[i]).abs()
    })
    .into_iter()
    .fold(0.0, f64::max)
        / perimeter
}

/// Spatial and source terms of the two weak transport equations at one
/// snapshot, for one test function and lifted speed `c`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TransportTerms {
    pub g_pairing: f64,
    pub kappa_pairing: f64,
    /// `⟨g, c n·∇φ⟩`
    pub g_flux: f64,
    /// `⟨g, (τ·∇c) ∂θφ⟩`
    pub g_angle: f64,
    /// `⟨c κ, φ⟩`
    pub g_source: f64,
    /// `⟨κ, c n·∇φ⟩`
    pub kappa_flux: f64,
    /// `⟨κ, (τ·∇c) ∂θφ⟩`
    pub kappa_angle: f64,
    /// `⟨κ, (n·∇c) φ⟩`
    pub kappa_normal: f64,
    /// `⟨g, (τ⊗τ : ∇²c) φ⟩`
    pub kappa_hessian: f64,
}

/// Evaluates [`TransportTerms`] with the lifted speed
/// `-orientation · c` (see the module documentation).
pub fn transport_terms(
    measure: &LiftedMeasure,
    orientation: i8,
    c: &VelocityField,
    t: f64,
    phi: &TestFunction,
) -> TransportTerms {
    let o = -f64::from(orientation);
    let mut out = TransportTerms::default();
    for s in &measure.samples {
        let j = phi.jet(s.y, s.theta);
        let tau = tau_of(s.theta);
        let n = n_of(s.theta);
        let cv = o * c.value(s.y, t);
        let gc = c.gradient(s.y, t);
        let gc = [o * gc[0], o * gc[1]];
        let h = c.hessian(s.y, t);
        let tt_h = o * (tau[0] * tau[0] * h[0] + 2.0 * tau[0] * tau[1] * h[1] + tau[1] * tau[1] * h[2]);
        let (g, k) = (s.g_weight, s.kappa_weight);
        out.g_pairing += g * j.value;
        out.kappa_pairing += k * j.value;
        out.g_flux += g * cv * dot(n, j.grad);
        out.g_angle += g * dot(tau, gc) * j.d_theta;
        out.g_source += k * cv * j.value;
        out.kappa_flux += k * cv * dot(n, j.grad);
        out.kappa_angle += k * dot(tau, gc) * j.d_theta;
        out.kappa_normal += k * dot(n, gc) * j.value;
        out.kappa_hessian += g * tt_h * j.value;
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub t: f64,
    pub curve: Curve,
    pub measure: LiftedMeasure,
}

impl Snapshot {
    pub fn new(t: f64, curve: Curve) -> Self {
        let measure = lift_measures(&curve);
        Self { t, curve, measure }
    }
}

/// Residuals of the `g` and `κ` equations, maximized over interior snapshots
/// and the family, each divided by the snapshot perimeter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransportResidual {
    pub g_equation: f64,
    pub kappa_equation: f64,
}

impl TransportResidual {
    pub fn max(&self) -> f64 {
        self.g_equation.max(self.kappa_equation)
    }
}

/// Weak transport residual with centred time differences of the pairings.
pub fn transport_residual(
    trajectory: &[Snapshot],
    c: &VelocityField,
    family: &TestFamily,
    exec: Execution,
) -> Result<TransportResidual> {
    if trajectory.len() < 3 {
        return Err(Error::Precondition(
            "transport residual needs at least three snapshots".into(),
        ));
    }
    let dt = trajectory[1].t - trajectory[0].t;
    if !(dt > 0.0)
        || trajectory
            .windows(2)
            .any(|w| ((w[1].t - w[0].t) - dt).abs() > 1e-9 * dt.max(1.0))
    {
        return Err(Error::Precondition("snapshots must be uniformly spaced in time".into()));
    }
    let orientation = trajectory[0].curve.orientation();
    if trajectory.iter().any(|s| s.curve.orientation() != orientation) {
        return Err(Error::Topology("orientation changes along the trajectory".into()));
    }
    let per_phi = exec.map(family.functions.len(), |f| {
        let phi = &family.functions[f];
        let terms: Vec<TransportTerms> = trajectory
            .iter()
            .map(|s| transport_terms(&s.measure, orientation, c, s.t, phi))
            .collect();
        let mut worst = (0.0_f64, 0.0_f64);
        for k in 1..trajectory.len() - 1 {
            let p = trajectory[k].measure.total_g();
            let tk = &terms[k];
            let dg = (terms[k + 1].g_pairing - terms[k - 1].g_pairing) / (2.0 * dt);
            let dk = (terms[k + 1].kappa_pairing - terms[k - 1].kappa_pairing) / (2.0 * dt);
            let rg = dg - tk.g_flux - tk.g_angle + tk.g_source;
            let rk = dk - tk.kappa_flux - tk.kappa_angle - tk.kappa_normal - tk.kappa_hessian;
            worst.0 = worst.0.max(rg.abs() / p);
            worst.1 = worst.1.max(rk.abs() / p);
        }
        worst
    });
    let (g_equation, kappa_equation) = per_phi
        .into_iter()
        .fold((0.0_f64, 0.0_f64), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    Ok(TransportResidual {
        g_equation,
        kappa_equation,
    })
}

/// `steps` explicit steps of size `dt`, returning every state including the
/// initial one.
pub fn evolve_trajectory(
    initial: &Curve,
    c: &VelocityField,
    dt: f64,
    steps: usize,
    redistribute: bool,
) -> Result<Vec<Snapshot>> {
    let mut out = Vec::with_capacity(steps + 1);
    out.push(Snapshot::new(0.0, initial.clone()));
    let mut curve = initial.clone();
    for k in 0..steps {
        let t = k as f64 * dt;
        curve = evolve_curve(&curve, c, t, dt, redistribute)?;
        out.push(Snapshot::new((k + 1) as f64 * dt, curve.clone()));
    }
    Ok(out)
}

/// Closed-form lifted measure of a counterclockwise circle sampled at `m`
/// equally spaced points with exact arclength and curvature masses.
pub fn exact_circle_measure(center: Vec2, radius: f64, m: usize) -> LiftedMeasure {
    let samples = (0..m)
        .map(|k| {
            let a = TAU * k as f64 / m as f64;
            MeasureSample {
                y: [center[0] + radius * a.cos(), center[1] + radius * a.sin()],
                theta: wrap_angle(a + PI),
                g_weight: TAU * radius / m as f64,
                kappa_weight: TAU / m as f64,
            }
        })
        .collect();
    LiftedMeasure { samples }
}

/// Appends `t,vertex,x,y,theta,g_weight,kappa_weight` rows for one snapshot.
pub fn write_snapshot_rows(w: &mut CsvWriter, snapshot: &Snapshot) -> std::io::Result<()> {
    for (i, s) in snapshot.measure.samples.iter().enumerate() {
        w.row_mixed_at(snapshot.t, i as i64, &[s.y[0], s.y[1], s.theta, s.g_weight, s.kappa_weight])?;
    }
    Ok(())
}

pub fn snapshot_writer(path: &Path) -> std::io::Result<CsvWriter> {
    CsvWriter::create(path, &["t", "vertex", "x", "y", "theta", "g_weight", "kappa_weight"])
}

//! Fourier-coefficient operators on the unit torus `T² = R²/Z²`.
//!
//! Coefficients follow `c_k(f) = ∫ e^{-2iπ k·x} f(x) dx`, approximated by the
//! normalized DFT of the grid samples. Integer frequencies per axis are
//! `k ∈ {-n/2, …, n/2-1}` (for odd `n`, `{-(n-1)/2, …, (n-1)/2}`).
//!
//! Every multiplier is applied in conjugate-symmetrized form
//! `(m(k) + conj(m(k')))/2`, where `k'` is the grid index paired with `k`
//! under complex conjugation, so real input always yields real output. Away
//! from the Nyquist lines this is the multiplier itself; on a Nyquist line an
//! odd multiplier (Riesz transform, antiderivative) is annihilated.

use std::f64::consts::PI;

use rustfft::num_complex::Complex64;
use rustfft::{FftDirection, FftPlanner};

use crate::elasticity::ElasticConstants;
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Real scalar field sampled at `(i/n1, j/n2)` on the unit torus.
///
/// Samples are stored row by row along `x1`: the value at `(i/n1, j/n2)` is
/// `values[j * n1 + i]`, so each `x2`-row is contiguous.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicField2D {
    n1: usize,
    n2: usize,
    values: Vec<f64>,
}

impl PeriodicField2D {
    pub fn new(n1: usize, n2: usize, values: Vec<f64>) -> Result<Self> {
        if n1 < 2 || n2 < 2 {
            return Err(Error::Validation(format!(
                "grid resolution must be at least 2 per axis (got {n1}x{n2})"
            )));
        }
        if values.len() != n1 * n2 {
            return Err(Error::Validation(format!(
                "expected {} samples for a {n1}x{n2} grid, got {}",
                n1 * n2,
                values.len()
            )));
        }
        if let Some(p) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Validation(format!("non-finite sample at index {p}")));
        }
        Ok(Self { n1, n2, values })
    }

    pub fn zeros(n1: usize, n2: usize) -> Self {
        assert!(n1 >= 2 && n2 >= 2, "grid resolution must be at least 2");
        Self {
            n1,
            n2,
            values: vec![0.0; n1 * n2],
        }
    }

    /// Samples `f(x1, x2)` on the grid.
    pub fn from_fn(n1: usize, n2: usize, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut field = Self::zeros(n1, n2);
        for j in 0..n2 {
            for i in 0..n1 {
                field.values[j * n1 + i] = f(i as f64 / n1 as f64, j as f64 / n2 as f64);
            }
        }
        field
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Value at `(i/n1, j/n2)`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.n1 + i]
    }

    /// The `x2 = j/n2` row, indexed by the `x1` grid index.
    pub fn row(&self, j: usize) -> &[f64] {
        &self.values[j * self.n1..(j + 1) * self.n1]
    }

    pub fn dx1(&self) -> f64 {
        1.0 / self.n1 as f64
    }

    pub fn cell_area(&self) -> f64 {
        1.0 / (self.n1 * self.n2) as f64
    }

    /// Rectangle-rule integral over the torus.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.cell_area()
    }

    pub fn mean(&self) -> f64 {
        self.integral()
    }

    pub fn l2_norm(&self) -> f64 {
        (self.values.iter().map(|v| v * v).sum::<f64>() * self.cell_area()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `self + alpha * other`.
    pub fn axpy(&self, alpha: f64, other: &Self) -> Self {
        assert_eq!((self.n1, self.n2), (other.n1, other.n2), "grid mismatch");
        Self {
            n1: self.n1,
            n2: self.n2,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + alpha * b)
                .collect(),
        }
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        Self {
            n1: self.n1,
            n2: self.n2,
            values: self.values.iter().map(|v| alpha * v).collect(),
        }
    }
}

/// Signed integer frequency of DFT index `idx` on an axis of length `n`.
pub fn frequency(idx: usize, n: usize) -> i64 {
    if 2 * idx < n {
        idx as i64
    } else {
        idx as i64 - n as i64
    }
}

/// Normalized Fourier coefficients of a [`PeriodicField2D`], same layout.
#[derive(Clone, Debug)]
pub struct Spectrum {
    n1: usize,
    n2: usize,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn forward(field: &PeriodicField2D, exec: Execution) -> Self {
        let (n1, n2) = (field.n1, field.n2);
        let mut coeffs: Vec<Complex64> =
            field.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft2(&mut coeffs, n1, n2, FftDirection::Forward, exec);
        let norm = 1.0 / (n1 * n2) as f64;
        coeffs.iter_mut().for_each(|c| *c *= norm);
        Self { n1, n2, coeffs }
    }

    /// Coefficient at grid index `(a, b)`.
    pub fn coeff(&self, a: usize, b: usize) -> Complex64 {
        self.coeffs[b * self.n1 + a]
    }

    /// Coefficient at signed frequency `(k1, k2)`.
    pub fn mode(&self, k1: i64, k2: i64) -> Complex64 {
        let a = k1.rem_euclid(self.n1 as i64) as usize;
        let b = k2.rem_euclid(self.n2 as i64) as usize;
        self.coeff(a, b)
    }

    /// Calls `f(k1, k2, c_k)` for every coefficient.
    pub fn for_each_mode(&self, mut f: impl FnMut(i64, i64, Complex64)) {
        for b in 0..self.n2 {
            let k2 = frequency(b, self.n2);
            for a in 0..self.n1 {
                f(frequency(a, self.n1), k2, self.coeffs[b * self.n1 + a]);
            }
        }
    }

    /// Multiplies every coefficient by the conjugate-symmetrized multiplier.
    pub(crate) fn apply(&mut self, m: &(impl Fn(i64, i64) -> Complex64 + Sync)) {
        let (n1, n2) = (self.n1, self.n2);
        for b in 0..n2 {
            let k2 = frequency(b, n2);
            let k2p = frequency((n2 - b) % n2, n2);
            for a in 0..n1 {
                let k1 = frequency(a, n1);
                let k1p = frequency((n1 - a) % n1, n1);
                let sym = 0.5 * (m(k1, k2) + m(k1p, k2p).conj());
                self.coeffs[b * n1 + a] *= sym;
            }
        }
    }

    /// Complex samples `Σ c_k e^{2iπ k·x}` on the grid.
    pub(crate) fn inverse_complex(&self, exec: Execution) -> Vec<Complex64> {
        let mut data = self.coeffs.clone();
        fft2(&mut data, self.n1, self.n2, FftDirection::Inverse, exec);
        data
    }

    pub fn inverse(&self, exec: Execution) -> PeriodicField2D {
        PeriodicField2D {
            n1: self.n1,
            n2: self.n2,
            values: self.inverse_complex(exec).iter().map(|c| c.re).collect(),
        }
    }
}

fn fft2(data: &mut [Complex64], n1: usize, n2: usize, dir: FftDirection, exec: Execution) {
    let mut planner = FftPlanner::<f64>::new();
    let along_x1 = planner.plan_fft(n1, dir);
    let along_x2 = planner.plan_fft(n2, dir);

    exec.for_each_chunk(data, n1, |_, row| along_x1.process(row));

    let mut columns = vec![Complex64::new(0.0, 0.0); n1 * n2];
    for j in 0..n2 {
        for i in 0..n1 {
            columns[i * n2 + j] = data[j * n1 + i];
        }
    }
    exec.for_each_chunk(&mut columns, n2, |_, col| along_x2.process(col));
    for i in 0..n1 {
        for j in 0..n2 {
            data[j * n1 + i] = columns[i * n2 + j];
        }
    }
}

pub(crate) fn apply_multiplier(
    f: &PeriodicField2D,
    m: impl Fn(i64, i64) -> Complex64 + Sync,
    exec: Execution,
) -> PeriodicField2D {
    let mut spectrum = Spectrum::forward(f, exec);
    spectrum.apply(&m);
    spectrum.inverse(exec)
}

fn norm_k(k1: i64, k2: i64) -> f64 {
    ((k1 * k1 + k2 * k2) as f64).sqrt()
}

/// Riesz transform multiplier `-i k_axis/|k|`; the zero mode maps to 0.
pub(crate) fn riesz_multiplier(axis: usize) -> impl Fn(i64, i64) -> Complex64 + Sync {
    move |k1, k2| {
        if k1 == 0 && k2 == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let ki = if axis == 1 { k1 } else { k2 };
        Complex64::new(0.0, -(ki as f64) / norm_k(k1, k2))
    }
}

pub(crate) fn sigma12_multiplier(a_bar: f64) -> impl Fn(i64, i64) -> Complex64 + Sync {
    move |k1, k2| {
        if k1 == 0 && k2 == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let q = (k1 * k1 + k2 * k2) as f64;
        Complex64::new(a_bar * (k1 * k1) as f64 * (k2 * k2) as f64 / (q * q), 0.0)
    }
}

pub(crate) fn antiderivative_multiplier(k1: i64, _k2: i64) -> Complex64 {
    if k1 == 0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new(0.0, -1.0 / (2.0 * PI * k1 as f64))
    }
}

/// Riesz transform `R_axis` (`axis` is 1 or 2).
///
/// The coefficient of the output at `k ≠ 0` has modulus `|k_axis|/|k|·|c_k|`
/// and carries the factor `-i` that makes the transform real-valued.
pub fn riesz_transform(f: &PeriodicField2D, axis: usize) -> Result<PeriodicField2D> {
    riesz_transform_with(f, axis, Execution::default())
}

pub fn riesz_transform_with(
    f: &PeriodicField2D,
    axis: usize,
    exec: Execution,
) -> Result<PeriodicField2D> {
    if axis != 1 && axis != 2 {
        return Err(Error::Validation(format!("axis must be 1 or 2, got {axis}")));
    }
    Ok(apply_multiplier(f, riesz_multiplier(axis), exec))
}

/// Periodic shear stress `ā R₁²R₂²(ρ⁺-ρ⁻)` from the periodic difference of
/// the primitives. The output has zero mean.
pub fn sigma12_from_rho_diff(
    rho_diff: &PeriodicField2D,
    constants: &ElasticConstants,
) -> PeriodicField2D {
    sigma12_from_rho_diff_with(rho_diff, constants, Execution::default())
}

pub fn sigma12_from_rho_diff_with(
    rho_diff: &PeriodicField2D,
    constants: &ElasticConstants,
    exec: Execution,
) -> PeriodicField2D {
    apply_multiplier(rho_diff, sigma12_multiplier(constants.a_bar), exec)
}

/// Spectral primitive along `x1`: divides `c_k` by `2iπk₁` and drops `k₁ = 0`.
pub fn antiderivative_x1(theta_diff: &PeriodicField2D) -> PeriodicField2D {
    antiderivative_x1_with(theta_diff, Execution::default())
}

pub fn antiderivative_x1_with(theta_diff: &PeriodicField2D, exec: Execution) -> PeriodicField2D {
    apply_multiplier(theta_diff, antiderivative_multiplier, exec)
}

/// Luxemburg norm of `f` in the Zygmund space `L ln L(T²)`: the `γ` at which
/// the grid mean of `(|f|/γ) ln(e + |f|/γ)` equals one.
///
/// The integrand is strictly decreasing in `γ`; the root is bracketed in
/// `[1e-300, 10·max|f|]` and refined by geometric bisection until the bracket
/// is narrower than `tol` relative to its upper end.
pub fn zygmund_norm(f: &PeriodicField2D, tol: f64) -> f64 {
    let max = f.max_abs();
    if max == 0.0 {
        return 0.0;
    }
    let tol = if tol > 0.0 { tol } else { 1e-10 };
    let count = f.values.len() as f64;
    let excess = |gamma: f64| {
        f.values
            .iter()
            .map(|v| {
                let r = v.abs() / gamma;
                r * (std::f64::consts::E + r).ln()
            })
            .sum::<f64>()
            / count
            - 1.0
    };
    let (mut lo, mut hi) = (1e-300_f64, 10.0 * max);
    while (hi - lo) > tol * hi {
        let mid = if hi / lo > 4.0 {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn unit() -> ElasticConstants {
        ElasticConstants::new(1.0, 1.0).unwrap()
    }

    fn max_diff(a: &PeriodicField2D, b: &PeriodicField2D) -> f64 {
        a.values
            .iter()
            .zip(&b.values)
            .fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn frequencies_follow_symmetric_layout() {
        let f: Vec<i64> = (0..6).map(|i| frequency(i, 6)).collect();
        assert_eq!(f, vec![0, 1, 2, -3, -2, -1]);
        let f: Vec<i64> = (0..5).map(|i| frequency(i, 5)).collect();
        assert_eq!(f, vec![0, 1, 2, -2, -1]);
    }

    #[test]
    fn forward_recovers_single_mode_coefficients() {
        let f = PeriodicField2D::from_fn(16, 8, |x, y| (TAU * (2.0 * x - 3.0 * y)).cos());
        let s = Spectrum::forward(&f, Execution::Sequential);
        assert!((s.mode(2, -3) - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!((s.mode(-2, 3) - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!(s.mode(1, 1).norm() < 1e-14);
        let back = s.inverse(Execution::Sequential);
        assert!(max_diff(&back, &f) < 1e-14);
    }

    #[test]
    fn riesz_of_constant_vanishes() {
        let f = PeriodicField2D::from_fn(8, 8, |_, _| 7.0);
        assert!(riesz_transform(&f, 1).unwrap().max_abs() < 1e-14);
        assert!(riesz_transform(&f, 2).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn riesz_single_mode() {
        let f = PeriodicField2D::from_fn(16, 16, |x, _| (TAU * x).cos());
        let r1 = riesz_transform(&f, 1).unwrap();
        let expected = PeriodicField2D::from_fn(16, 16, |x, _| (TAU * x).sin());
        assert!(max_diff(&r1, &expected) < 1e-14);
        assert!((r1.l2_norm() - f.l2_norm()).abs() < 1e-14);
        assert!(riesz_transform(&f, 2).unwrap().max_abs() < 1e-14);
        assert!(riesz_transform(&f, 3).is_err());
    }

    #[test]
    fn sigma12_single_modes() {
        let c = unit();
        let f = PeriodicField2D::from_fn(16, 16, |_, _| 5.0);
        assert!(sigma12_from_rho_diff(&f, &c).max_abs() < 1e-14);

        let f = PeriodicField2D::from_fn(16, 16, |x, y| (TAU * (x + y)).sin());
        let s = sigma12_from_rho_diff(&f, &c);
        assert!(max_diff(&s, &f.scaled(c.a_bar / 4.0)) < 1e-14);

        let f = PeriodicField2D::from_fn(16, 16, |x, _| (TAU * x).cos());
        assert!(sigma12_from_rho_diff(&f, &c).max_abs() < 1e-14);
    }

    #[test]
    fn antiderivative_single_modes() {
        let f = PeriodicField2D::from_fn(16, 16, |x, y| (TAU * (x + y)).cos());
        let g = antiderivative_x1(&f);
        let expected = PeriodicField2D::from_fn(16, 16, |x, y| (TAU * (x + y)).sin() / TAU);
        assert!(max_diff(&g, &expected) < 1e-15);

        let f = PeriodicField2D::from_fn(16, 16, |_, _| 3.0);
        assert!(antiderivative_x1(&f).max_abs() < 1e-15);
    }

    #[test]
    fn antiderivative_round_trip() {
        let f = PeriodicField2D::from_fn(32, 16, |x, y| {
            (TAU * (3.0 * x + y)).sin() + 0.5 * (TAU * (x - 2.0 * y)).cos()
        });
        let g = antiderivative_x1(&f);
        let d = apply_multiplier(
            &g,
            |k1, _| Complex64::new(0.0, TAU * k1 as f64),
            Execution::Sequential,
        );
        assert!(max_diff(&d, &f) < 1e-13);
    }

    #[test]
    fn nyquist_lines_of_odd_multipliers_stay_real() {
        let f = PeriodicField2D::from_fn(8, 8, |x, y| {
            (TAU * 4.0 * x).cos() + (TAU * (4.0 * x + y)).sin() + (TAU * 4.0 * y).cos()
        });
        for m in [riesz_multiplier(1), riesz_multiplier(2)] {
            let mut s = Spectrum::forward(&f, Execution::Sequential);
            s.apply(&m);
            let out = s.inverse_complex(Execution::Sequential);
            let imag = out.iter().fold(0.0_f64, |a, c| a.max(c.im.abs()));
            assert!(imag < 1e-12, "imaginary residue {imag}");
        }
    }

    #[test]
    fn zygmund_of_zero_and_constant() {
        let z = PeriodicField2D::zeros(4, 4);
        assert_eq!(zygmund_norm(&z, 1e-10), 0.0);

        // Independent scalar bisection for (1/γ) ln(e + 1/γ) = 1.
        let (mut lo, mut hi) = (0.5_f64, 5.0_f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (1.0 / mid) * (std::f64::consts::E + 1.0 / mid).ln() > 1.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - 1.256_750_618_537_767).abs() < 1e-12);
        let one = PeriodicField2D::from_fn(8, 8, |_, _| 1.0);
        assert!((zygmund_norm(&one, 1e-12) - lo).abs() < 1e-10);
    }
}

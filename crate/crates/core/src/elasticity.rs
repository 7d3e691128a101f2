//! Isotropic elastic constants and the stress field of a straight edge
//! dislocation lying along `x3` with Burgers vector `e1`.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Lamé parameters together with every derived scalar the models use.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ElasticConstants {
    pub lambda: f64,
    pub mu: f64,
    /// Poisson ratio `λ / (2(λ+μ))`.
    pub nu: f64,
    /// Volterra kernel prefactor `μ / (2π(1-ν))`.
    pub a: f64,
    /// Periodic stress prefactor `4μ(λ+μ)/(λ+2μ)`.
    pub a_bar: f64,
    /// `μ(λ+μ)/(λ+2μ)`, the transport speed scale of the 1D submodel.
    pub c1: f64,
    /// `μ/(λ+μ)`, the weight of the nonlocal term of the 1D submodel.
    pub c2: f64,
}

impl ElasticConstants {
    /// Validates `μ > 0`, `3λ + 2μ > 0` and derives the remaining scalars.
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !lambda.is_finite() || !mu.is_finite() {
            return Err(Error::Validation("lambda and mu must be finite".into()));
        }
        if mu <= 0.0 {
            return Err(Error::Validation(format!("mu > 0 violated (mu = {mu})")));
        }
        if 3.0 * lambda + 2.0 * mu <= 0.0 {
            return Err(Error::Validation(format!(
                "3*lambda + 2*mu > 0 violated (lambda = {lambda}, mu = {mu})"
            )));
        }
        let nu = lambda / (2.0 * (lambda + mu));
        Ok(Self {
            lambda,
            mu,
            nu,
            a: mu / (2.0 * PI * (1.0 - nu)),
            a_bar: 4.0 * mu * (lambda + mu) / (lambda + 2.0 * mu),
            c1: mu * (lambda + mu) / (lambda + 2.0 * mu),
            c2: mu / (lambda + mu),
        })
    }
}

/// Shear stress `σ₀(x) = a x₁(x₁²-x₂²)/(x₁²+x₂²)²` created at `x` by a unit
/// edge dislocation at the origin. The self-stress at the origin is zero.
pub fn kernel_sigma0(x: [f64; 2], constants: &ElasticConstants) -> f64 {
    let [x1, x2] = x;
    let r2 = x1 * x1 + x2 * x2;
    if r2 == 0.0 {
        return 0.0;
    }
    constants.a * x1 * (x1 * x1 - x2 * x2) / (r2 * r2)
}

/// Full symmetric stress matrix of the edge dislocation at `x`.
pub fn kernel_full_stress(x: [f64; 2], constants: &ElasticConstants) -> Result<[[f64; 3]; 3]> {
    let [x1, x2] = x;
    let r2 = x1 * x1 + x2 * x2;
    if r2 == 0.0 {
        return Err(Error::SingularPoint);
    }
    let a = constants.a;
    let r4 = r2 * r2;
    let s11 = -a * x2 * (3.0 * x1 * x1 + x2 * x2) / r4;
    let s12 = a * x1 * (x1 * x1 - x2 * x2) / r4;
    let s22 = a * x2 * (x1 * x1 - x2 * x2) / r4;
    Ok([[s11, s12, 0.0], [s12, s22, 0.0], [0.0, 0.0, 0.0]])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> ElasticConstants {
        ElasticConstants::new(1.0, 1.0).unwrap()
    }

    #[test]
    fn derived_constants_unit_lame() {
        let c = unit();
        assert_eq!(c.nu, 0.25);
        assert!((c.a_bar - 8.0 / 3.0).abs() < 1e-15);
        assert!((c.c1 - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.c2, 0.5);
        assert!((c.a - 1.0 / (1.5 * PI)).abs() < 1e-15);
    }

    #[test]
    fn negative_lambda_is_admissible() {
        let c = ElasticConstants::new(-0.5, 1.0).unwrap();
        assert_eq!(c.nu, -0.5);
        assert!(c.a > 0.0 && c.a_bar > 0.0 && c.c1 > 0.0 && c.c2 > 0.0);
    }

    #[test]
    fn preconditions_are_named() {
        let e = ElasticConstants::new(1.0, 0.0).unwrap_err();
        assert!(e.to_string().contains("mu > 0"), "{e}");
        let e = ElasticConstants::new(-1.0, 1.0).unwrap_err();
        assert!(e.to_string().contains("3*lambda + 2*mu > 0"), "{e}");
    }

    #[test]
    fn recompute_reproduces_stored_values() {
        let c = ElasticConstants::new(2.3, 0.7).unwrap();
        assert_eq!(c, ElasticConstants::new(c.lambda, c.mu).unwrap());
        assert!(c.nu > -1.0 && c.nu < 0.5);
    }

    #[test]
    fn sigma0_values() {
        let c = unit();
        assert_eq!(kernel_sigma0([0.0, 0.0], &c), 0.0);
        assert_eq!(kernel_sigma0([1.0, 1.0], &c), 0.0);
        assert!((kernel_sigma0([1.0, 0.0], &c) - c.a).abs() < 1e-15);
        assert!((kernel_sigma0([2.0, 0.0], &c) - c.a / 2.0).abs() < 1e-15);
    }

    #[test]
    fn full_stress_values() {
        let c = unit();
        let s = kernel_full_stress([1.0, 1.0], &c).unwrap();
        assert_eq!(s[0][1], 0.0);
        assert!((s[0][0] + c.a).abs() < 1e-15);

        let s = kernel_full_stress([0.0, 1.0], &c).unwrap();
        assert!((s[0][0] + c.a).abs() < 1e-15);
        assert_eq!(s[0][1], 0.0);
        assert!((s[1][1] + c.a).abs() < 1e-15);

        for x in [[0.3, -1.2], [2.0, 0.5], [-0.7, 0.1]] {
            let s = kernel_full_stress(x, &c).unwrap();
            assert_eq!(s[0][1], kernel_sigma0(x, &c));
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(s[i][j], s[j][i]);
                }
                assert_eq!(s[i][2], 0.0);
            }
        }
        assert!(matches!(
            kernel_full_stress([0.0, 0.0], &c),
            Err(Error::SingularPoint)
        ));
    }
}

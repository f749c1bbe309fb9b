//! Entanglement witnesses, their short-time Taylor series and polynomial fits
//! of numerical trajectories.
//!
//! Taylor coefficients are stored in powers of `x = Nχt`, so
//! `ζ²(t) = 1 + Σ p_k x^k`. With `Ω = Nχ/Λ` the coefficient of `(Ωt)^k` is
//! `p_k Λ^k`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::spin::CovarianceYZ;

/// Witness values at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessRecord {
    pub t: f64,
    pub jx_mean: f64,
    pub gamma: CovarianceYZ,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub xi2_opt: f64,
    pub zeta2_opt: f64,
}

impl WitnessRecord {
    pub fn new(t: f64, jx_mean: f64, gamma: CovarianceYZ, n_particles: usize) -> Result<Self> {
        let (lambda_plus, lambda_minus) = gamma.lambda_pm();
        Ok(Self {
            t,
            jx_mean,
            gamma,
            lambda_plus,
            lambda_minus,
            xi2_opt: xi2_opt(jx_mean, lambda_minus, n_particles)?,
            zeta2_opt: zeta2_opt(lambda_plus)?,
        })
    }
}

/// Optimal spin squeezing `ξ² = N²λ−/(4⟨Ĵx⟩²)`.
pub fn xi2_opt(jx_mean: f64, lambda_minus: f64, n_particles: usize) -> Result<f64> {
    if jx_mean == 0.0 || !jx_mean.is_finite() {
        return Err(Error::UndefinedWitness("mean spin length is zero"));
    }
    let n = n_particles as f64;
    Ok(n * n * lambda_minus / (4.0 * jx_mean * jx_mean))
}

/// Optimal QFI witness `ζ² = N/F_Q = 1/λ+`.
pub fn zeta2_opt(lambda_plus: f64) -> Result<f64> {
    if !(lambda_plus > 0.0) {
        return Err(Error::UndefinedWitness(
            "largest covariance eigenvalue is not positive",
        ));
    }
    Ok(1.0 / lambda_plus)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaylorModel {
    /// State prepared at the `φ = π` point; the series holds on both sides of
    /// `Λ = 1`.
    Pi,
    OneAxisTwisting,
    /// State prepared at the `φ = 0` point.
    Zero,
}

/// Coefficients of `(Nχt)^k` in `ζ²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorCoeffs {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

impl TaylorCoeffs {
    pub fn as_array(&self) -> [f64; 4] {
        [self.p1, self.p2, self.p3, self.p4]
    }

    /// Coefficients of `(Ωt)^k`, i.e. `p_k Λ^k`.
    pub fn per_omega_t(&self, lambda: f64) -> [f64; 4] {
        let mut out = self.as_array();
        let mut scale = 1.0;
        for p in out.iter_mut() {
            scale *= lambda;
            *p *= scale;
        }
        out
    }

    /// `ζ²` predicted by the truncated series.
    pub fn evaluate(&self, x: f64) -> f64 {
        1.0 + x * (self.p1 + x * (self.p2 + x * (self.p3 + x * self.p4)))
    }
}

/// Analytic short-time coefficients. `lambda` is ignored for one-axis twisting.
pub fn taylor_zeta2(model: TaylorModel, lambda: f64) -> Result<TaylorCoeffs> {
    if model != TaylorModel::OneAxisTwisting && !(lambda > 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            reason: "Taylor series need Λ > 0",
        });
    }
    let inv = 1.0 / lambda;
    let inv2 = inv * inv;
    let (p3, p4) = match model {
        TaylorModel::OneAxisTwisting => (-0.125, 0.0),
        TaylorModel::Pi => (-0.125 - inv / 6.0 + inv2 / 6.0, (inv - inv2) / 6.0),
        TaylorModel::Zero => (-0.125 + inv / 6.0 + inv2 / 6.0, -(inv + inv2) / 6.0),
    };
    Ok(TaylorCoeffs {
        p1: -1.0,
        p2: 0.5,
        p3,
        p4,
    })
}

/// Ratio of the third-order coefficients of the `π` series and one-axis
/// twisting, `R = 1 + (4/3)(1/Λ − 1/Λ²)`.
pub fn ratio_r(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            reason: "ratio needs Λ > 0",
        });
    }
    Ok(1.0 + (4.0 / 3.0) * (1.0 / lambda - 1.0 / (lambda * lambda)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MinimumRegime {
    StablePi,
    Zero,
}

/// Depth of the first `ζ²` minimum of the harmonic phase model.
pub fn zeta2_min(regime: MinimumRegime, lambda: f64) -> Result<f64> {
    match regime {
        MinimumRegime::StablePi if lambda > 0.0 && lambda < 1.0 => Ok(1.0 - lambda),
        MinimumRegime::StablePi => Err(Error::RegimeMismatch(
            "the π point is only stable for 0 < Λ < 1",
        )),
        MinimumRegime::Zero if lambda >= 0.0 => Ok(1.0 / (1.0 + lambda)),
        MinimumRegime::Zero => Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            reason: "interaction must be non-negative",
        }),
    }
}

/// Fitted coefficients with diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorFit {
    pub coeffs: TaylorCoeffs,
    /// All fitted coefficients `p_1 … p_degree`.
    pub all: Vec<f64>,
    pub residual_norm: f64,
    /// Ratio of extreme diagonal entries of the triangular factor.
    pub condition: f64,
    pub samples: usize,
}

const MAX_CONDITION: f64 = 1e12;

/// Least-squares polynomial in `x = Nχt` with the constant pinned to 1, using
/// records with `0 < x ≤ window`.
///
/// The regressor is `x / window`, so the design matrix stays well scaled.
pub fn fit_taylor_coeffs(
    records: &[WitnessRecord],
    n_particles: usize,
    chi: f64,
    degree: usize,
    window: f64,
) -> Result<TaylorFit> {
    if degree < 4 {
        return Err(Error::InvalidParameter {
            name: "degree",
            value: degree as f64,
            reason: "need degree ≥ 4 to extract p1…p4",
        });
    }
    if !(window > 0.0) || !(chi > 0.0) {
        return Err(Error::InvalidParameter {
            name: "window",
            value: window,
            reason: "fit window and χ must be positive",
        });
    }
    match records.first() {
        Some(r) if r.t == 0.0 => {}
        _ => {
            return Err(Error::InvalidParameter {
                name: "t0",
                value: records.first().map_or(f64::NAN, |r| r.t),
                reason: "records must start at t = 0",
            })
        }
    }
    let scale = n_particles as f64 * chi;
    let points: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (scale * r.t / window, r.zeta2_opt - 1.0))
        .filter(|(u, _)| *u > 0.0 && *u <= 1.0 + 1e-12)
        .collect();
    if points.len() < degree + 2 {
        return Err(Error::InsufficientSamples {
            needed: degree + 2,
            found: points.len(),
        });
    }

    let rows = points.len();
    let mut design = vec![0.0; rows * degree];
    let mut rhs = vec![0.0; rows];
    for (r, (u, y)) in points.iter().enumerate() {
        let mut power = 1.0;
        for k in 0..degree {
            power *= u;
            design[r * degree + k] = power;
        }
        rhs[r] = *y;
    }
    let (solution, residual_norm, condition) = least_squares(&mut design, rows, degree, &mut rhs);
    if !(condition < MAX_CONDITION) {
        return Err(Error::IllConditioned { condition });
    }
    let mut all = Vec::with_capacity(degree);
    let mut w = 1.0;
    for c in solution {
        w *= window;
        all.push(c / w);
    }
    Ok(TaylorFit {
        coeffs: TaylorCoeffs {
            p1: all[0],
            p2: all[1],
            p3: all[2],
            p4: all[3],
        },
        all,
        residual_norm,
        condition,
        samples: rows,
    })
}

/// Householder QR solve of an overdetermined row-major system. Returns the
/// solution, the residual 2-norm and a diagonal condition estimate.
fn least_squares(a: &mut [f64], rows: usize, cols: usize, b: &mut [f64]) -> (Vec<f64>, f64, f64) {
    for k in 0..cols {
        let norm = math::sqrt((k..rows).map(|i| a[i * cols + k] * a[i * cols + k]).sum());
        if norm == 0.0 {
            continue;
        }
        let alpha = if a[k * cols + k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (k..rows).map(|i| a[i * cols + k]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        for j in k..cols {
            let dot: f64 = (k..rows).map(|i| v[i - k] * a[i * cols + j]).sum();
            let f = 2.0 * dot / vnorm2;
            for i in k..rows {
                a[i * cols + j] -= f * v[i - k];
            }
        }
        let dot: f64 = (k..rows).map(|i| v[i - k] * b[i]).sum();
        let f = 2.0 * dot / vnorm2;
        for i in k..rows {
            b[i] -= f * v[i - k];
        }
    }
    let mut x = vec![0.0; cols];
    for k in (0..cols).rev() {
        let mut acc = b[k];
        for j in k + 1..cols {
            acc -= a[k * cols + j] * x[j];
        }
        x[k] = acc / a[k * cols + k];
    }
    let residual = math::sqrt(b[cols..].iter().map(|r| r * r).sum());
    let diag = (0..cols).map(|k| a[k * cols + k].abs());
    let (lo, hi) = diag.fold((f64::INFINITY, 0.0f64), |(lo, hi), d| {
        (lo.min(d), hi.max(d))
    });
    (x, residual, hi / lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn synthetic(
        coeffs: &[f64],
        n: usize,
        chi: f64,
        window: f64,
        samples: usize,
    ) -> Vec<WitnessRecord> {
        let dt = window / (n as f64 * chi) / samples as f64;
        (0..=samples)
            .map(|i| {
                let t = i as f64 * dt;
                let x = n as f64 * chi * t;
                let zeta2 = 1.0 + coeffs.iter().rev().fold(0.0, |acc, c| (acc + c) * x);
                WitnessRecord {
                    t,
                    jx_mean: 1.0,
                    gamma: CovarianceYZ::identity(),
                    lambda_plus: 1.0 / zeta2,
                    lambda_minus: 1.0,
                    xi2_opt: 1.0,
                    zeta2_opt: zeta2,
                }
            })
            .collect()
    }

    #[test]
    fn witness_examples() {
        assert_eq!(xi2_opt(100.0, 1.0, 200).unwrap(), 1.0);
        assert!((xi2_opt(100.0, 0.5, 200).unwrap() - 0.5).abs() < 1e-15);
        assert!(xi2_opt(0.0, 1.0, 200).is_err());
        assert_eq!(zeta2_opt(1.0).unwrap(), 1.0);
        assert_eq!(zeta2_opt(2.0).unwrap(), 0.5);
        assert_eq!(zeta2_opt(200.0).unwrap(), 1.0 / 200.0);
        assert!(zeta2_opt(0.0).is_err());
    }

    #[test]
    fn taylor_examples() {
        let oat = taylor_zeta2(TaylorModel::OneAxisTwisting, f64::NAN).unwrap();
        assert_eq!(oat.as_array(), [-1.0, 0.5, -0.125, 0.0]);

        let pi = taylor_zeta2(TaylorModel::Pi, 2.0).unwrap().per_omega_t(2.0);
        assert!((pi[1] - 2.0).abs() < 1e-14);
        assert!((pi[2] + 4.0 / 3.0).abs() < 1e-14);
        assert!((pi[3] - 2.0 / 3.0).abs() < 1e-14);

        // third-order differences in Ωt units
        for lambda in [1.5, 2.0, 3.0] {
            let pi = taylor_zeta2(TaylorModel::Pi, lambda)
                .unwrap()
                .per_omega_t(lambda);
            let zero = taylor_zeta2(TaylorModel::Zero, lambda)
                .unwrap()
                .per_omega_t(lambda);
            let oat = oat.per_omega_t(lambda);
            let l2 = lambda * lambda;
            assert!((zero[2] - pi[2] - 2.0 * l2 / 6.0).abs() < 1e-12);
            assert!((pi[2] - oat[2] + (l2 - lambda) / 6.0).abs() < 1e-12);
            assert!(pi[2] - oat[2] < 0.0);
        }
        assert!(taylor_zeta2(TaylorModel::Pi, 0.0).is_err());
    }

    #[test]
    fn ratio_examples() {
        assert!((ratio_r(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((ratio_r(2.0).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert!((ratio_r(1e9).unwrap() - 1.0).abs() < 1e-8);
        let h = 1e-5;
        let slope = (ratio_r(2.0 + h).unwrap() - ratio_r(2.0 - h).unwrap()) / (2.0 * h);
        assert!(slope.abs() < 1e-9);
        // ratio equals p3_pi / p3_oat
        let pi = taylor_zeta2(TaylorModel::Pi, 1.7).unwrap();
        assert!((pi.p3 / -0.125 - ratio_r(1.7).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn minima() {
        assert_eq!(zeta2_min(MinimumRegime::StablePi, 0.5).unwrap(), 0.5);
        assert_eq!(zeta2_min(MinimumRegime::Zero, 1.0).unwrap(), 0.5);
        assert_eq!(zeta2_min(MinimumRegime::Zero, 0.0).unwrap(), 1.0);
        assert!(matches!(
            zeta2_min(MinimumRegime::StablePi, 1.5),
            Err(Error::RegimeMismatch(_))
        ));
    }

    #[test]
    fn exact_polynomial_recovered() {
        let coeffs = [-1.0, 0.5, -0.3, 0.2, 0.05, -0.01];
        let records = synthetic(&coeffs, 200, 0.01, 0.2, 64);
        let fit = fit_taylor_coeffs(&records, 200, 0.01, 6, 0.2).unwrap();
        for (a, b) in fit.all.iter().zip(&coeffs) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        assert!(fit.residual_norm < 1e-12);
    }

    #[test]
    fn fit_preconditions() {
        let records = synthetic(&[-1.0, 0.5], 200, 0.01, 0.2, 5);
        assert!(matches!(
            fit_taylor_coeffs(&records, 200, 0.01, 6, 0.2),
            Err(Error::InsufficientSamples { .. })
        ));
        let records = synthetic(&[-1.0, 0.5], 200, 0.01, 0.2, 64);
        assert!(fit_taylor_coeffs(&records[1..], 200, 0.01, 6, 0.2).is_err());
        assert!(fit_taylor_coeffs(&records, 200, 0.01, 3, 0.2).is_err());
    }

    proptest! {
        #[test]
        fn fit_invariant_under_time_rescaling(s in 0.01f64..100.0, c3 in -1.0f64..1.0) {
            let coeffs = [-1.0, 0.5, c3, 0.1, -0.2];
            let base = synthetic(&coeffs, 100, 0.02, 0.2, 64);
            let rescaled: Vec<WitnessRecord> = base
                .iter()
                .map(|r| WitnessRecord { t: r.t * s, ..*r })
                .collect();
            let a = fit_taylor_coeffs(&base, 100, 0.02, 6, 0.2).unwrap();
            let b = fit_taylor_coeffs(&rescaled, 100, 0.02 / s, 6, 0.2).unwrap();
            for (x, y) in a.all.iter().zip(&b.all) {
                prop_assert!((x - y).abs() < 1e-8 * (1.0 + x.abs()));
            }
        }
    }
}

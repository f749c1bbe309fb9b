//! Closed forms for one-axis twisting, `H = χĴz²`, from the coherent state on
//! the `+x` axis. The twisting angle after time `t` is `μ = 2χt`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::params::check_particle_number;
use crate::spin::CovarianceYZ;
use crate::witness::{xi2_opt, zeta2_opt, WitnessRecord};

/// `⟨Ĵx⟩ = (N/2) cos^{N−1}(χt)`.
pub fn oat_jx(n_particles: usize, chi: f64, t: f64) -> f64 {
    let n = n_particles as f64;
    0.5 * n * math::signed_pow(math::cos(chi * t), n_particles as u32 - 1)
}

/// `A = 1 − cos^{N−2}(2χt)` and `B = 4 sin(χt) cos^{N−2}(χt)`.
fn a_b(n_particles: usize, chi: f64, t: f64) -> (f64, f64) {
    let p = n_particles as u32 - 2;
    let a = 1.0 - math::signed_pow(math::cos(2.0 * chi * t), p);
    let b = 4.0 * math::sin(chi * t) * math::signed_pow(math::cos(chi * t), p);
    (a, b)
}

/// `λ± = 1 + ¼(N − 1)[A ± √(A² + B²)]`.
pub fn oat_lambda_pm(n_particles: usize, chi: f64, t: f64) -> (f64, f64) {
    let (a, b) = a_b(n_particles, chi, t);
    let q = 0.25 * (n_particles as f64 - 1.0);
    let r = math::hypot(a, b);
    let plus = 1.0 + q * (a + r);
    // 1 + q(A − r) loses digits when r ≈ A; use λ+λ− = 1 + 2qA − q²B²
    let minus = (1.0 + 2.0 * q * a - q * q * b * b) / plus;
    (plus, minus)
}

/// `γ = (1, 1 + (N−1)A/2, (N−1)B/4)`.
pub fn oat_covariance(n_particles: usize, chi: f64, t: f64) -> CovarianceYZ {
    let (a, b) = a_b(n_particles, chi, t);
    let m = n_particles as f64 - 1.0;
    CovarianceYZ {
        gzz: 1.0,
        gyy: 1.0 + 0.5 * m * a,
        gyz: 0.25 * m * b,
    }
}

pub fn oat_trajectory(n_particles: usize, chi: f64, times: &[f64]) -> Result<Vec<WitnessRecord>> {
    check_particle_number(n_particles)?;
    times
        .iter()
        .map(|&t| {
            if !(t >= 0.0) {
                return Err(Error::InvalidParameter {
                    name: "t",
                    value: t,
                    reason: "times must be non-negative",
                });
            }
            let jx_mean = oat_jx(n_particles, chi, t);
            let (lambda_plus, lambda_minus) = oat_lambda_pm(n_particles, chi, t);
            Ok(WitnessRecord {
                t,
                jx_mean,
                gamma: oat_covariance(n_particles, chi, t),
                lambda_plus,
                lambda_minus,
                xi2_opt: xi2_opt(jx_mean, lambda_minus, n_particles)?,
                zeta2_opt: zeta2_opt(lambda_plus)?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{eigendecompose, evolve, hamiltonian};
    use crate::params::ModelParams;
    use crate::spin::{coherent_state, covariance_yz, spin_moments};
    use crate::witness::{fit_taylor_coeffs, taylor_zeta2, TaylorModel};

    #[test]
    fn initial_values() {
        assert_eq!(oat_jx(200, 1.0, 0.0), 100.0);
        assert_eq!(oat_lambda_pm(200, 1.0, 0.0), (1.0, 1.0));
        let records = oat_trajectory(200, 1.0, &[0.0]).unwrap();
        assert_eq!(records[0].zeta2_opt, 1.0);
    }

    #[test]
    fn full_revival_flips_spin() {
        assert!((oat_jx(200, 1.0, math::PI) + 100.0).abs() < 1e-10);
    }

    #[test]
    fn matches_exact_dynamics() {
        for n in [4usize, 30] {
            let params = ModelParams::one_axis_twisting(n).unwrap();
            let spec = eigendecompose(&hamiltonian(&params)).unwrap();
            let psi0 = coherent_state(n, math::FRAC_PI_2, 0.0).unwrap();
            for t in [0.01, 0.3, 0.7] {
                let psi = evolve(&spec, &psi0, t).unwrap();
                let g = covariance_yz(&psi).unwrap();
                let h = oat_covariance(n, 1.0, t);
                assert!((g.gzz - h.gzz).abs() < 1e-10);
                assert!((g.gyy - h.gyy).abs() < 1e-10);
                assert!((g.gyz - h.gyz).abs() < 1e-10, "{n} {t}");
                let (p, m) = g.lambda_pm();
                let (q, r) = oat_lambda_pm(n, 1.0, t);
                assert!((p - q).abs() < 1e-10 && (m - r).abs() < 1e-10);
                assert!((spin_moments(&psi).jx - oat_jx(n, 1.0, t)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn short_time_series() {
        let (n, chi) = (200, 1.0);
        let window = 0.2;
        let dt = window / (n as f64 * chi) / 64.0;
        let times: Vec<f64> = (0..=64).map(|i| i as f64 * dt).collect();
        let records = oat_trajectory(n, chi, &times).unwrap();
        let fit = fit_taylor_coeffs(&records, n, chi, 6, window).unwrap();
        let exact = taylor_zeta2(TaylorModel::OneAxisTwisting, 0.0).unwrap();
        assert!((fit.coeffs.p1 - exact.p1).abs() < 0.02);
        assert!((fit.coeffs.p2 - exact.p2).abs() < 0.02);
        assert!((fit.coeffs.p3 - exact.p3).abs() < 0.02);
        assert!((fit.coeffs.p4 - exact.p4).abs() < 0.02);
    }
}

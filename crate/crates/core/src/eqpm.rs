//! Gaussian phase-model solutions of the junction.
//!
//! The state is represented as a wave function `ψ(φ)` over the overcomplete
//! phase basis. Near a fixed point of the effective potential `V(φ)` the
//! dynamics is harmonic and a Gaussian `ψ ∝ exp(−(a + ib)(φ − φ₀)²)` stays
//! Gaussian. Times are in units of `1/Ω`; `Λ = Nχ/Ω`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;
use crate::spin::CovarianceYZ;

/// Closed forms divide by `Λ − 1` on the `π` branch.
pub const CRITICAL_GUARD: f64 = 1e-6;

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter {
            name: "lambda",
            value: lambda,
            reason: "interaction over tunneling must be positive",
        });
    }
    Ok(())
}

fn check_not_critical(lambda: f64) -> Result<()> {
    if (lambda - 1.0).abs() < CRITICAL_GUARD {
        return Err(Error::CriticalPoint { lambda });
    }
    Ok(())
}

/// `V(φ) = −((N+1)/2) cos φ − (N/(8Λ)) cos 2φ`.
pub fn potential(phi: f64, n_particles: usize, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let n = n_particles as f64;
    Ok(-0.5 * (n + 1.0) * math::cos(phi) - n / (8.0 * lambda) * math::cos(2.0 * phi))
}

/// `(ω_π/Ω)² = 1 − Λ(1 + 1/N)`; negative means the `π` point is unstable.
pub fn omega_pi_squared(lambda: f64, n_particles: usize) -> f64 {
    let n = n_particles as f64;
    (n - lambda * (n + 1.0)) / n
}

/// `(ω_0/Ω)² = 1 + Λ(1 + 1/N)`.
pub fn omega_zero_squared(lambda: f64, n_particles: usize) -> f64 {
    let n = n_particles as f64;
    (n + lambda * (n + 1.0)) / n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PacketCenter {
    Zero,
    Pi,
}

impl PacketCenter {
    pub fn phase(self) -> f64 {
        match self {
            PacketCenter::Zero => 0.0,
            PacketCenter::Pi => math::PI,
        }
    }
}

/// `ψ(φ) ∝ exp(−(a + ib)(φ − φ₀)²)`.
///
/// Normalizability needs `𝒜 = 4(a² + b²) + aN > 0`; `a` itself may be
/// negative once the packet has spread.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacket {
    pub a: f64,
    pub b: f64,
    pub center: PacketCenter,
}

impl GaussianPacket {
    pub fn new(a: f64, b: f64, center: PacketCenter, n_particles: usize) -> Result<Self> {
        let packet = Self { a, b, center };
        packet.checked_big_a(n_particles)?;
        Ok(packet)
    }

    /// `𝒜 = 4(a² + b²) + aN`.
    pub fn big_a(&self, n_particles: usize) -> f64 {
        big_a(self.a, self.b, n_particles)
    }

    fn checked_big_a(&self, n_particles: usize) -> Result<f64> {
        let value = self.big_a(n_particles);
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::NonNormalizable { big_a: value });
        }
        Ok(value)
    }
}

fn big_a(a: f64, b: f64, n_particles: usize) -> f64 {
    4.0 * (a * a + b * b) + a * n_particles as f64
}

/// Packet after a quench from `Λ₀` to `Λ`, evaluated with complex frequency so
/// one expression covers the oscillating and the exponential regimes.
fn quench_packet(
    t: f64,
    lambda: f64,
    omega2: f64,
    alpha: f64,
    shift: f64,
    n_particles: usize,
    center: PacketCenter,
) -> Result<GaussianPacket> {
    let n = n_particles as f64;
    let l2 = lambda * lambda;
    let w = Complex64::new(omega2, 0.0).sqrt();
    let arg = w * (2.0 * t);
    let cos2 = arg.cos();
    let w_sin2 = w * arg.sin();
    let ratio = omega2 / l2;
    let den = (cos2 * (ratio - alpha * alpha)) + (ratio + alpha * alpha);
    let a = (n * omega2 / (2.0 * l2) * alpha / den).re + shift;
    let b = (w_sin2 * (n / (4.0 * lambda) * (ratio - alpha * alpha)) / den).re;
    GaussianPacket::new(a, b, center, n_particles)
}

fn check_quench(t: f64, lambda0: f64) -> Result<()> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "time must be non-negative",
        });
    }
    if !(lambda0 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "lambda0",
            value: lambda0,
            reason: "preparation interaction must be positive",
        });
    }
    Ok(())
}

/// `(a_π, b_π)` at time `t` for a packet prepared as the ground state of the
/// `π` well at `Λ₀` and evolved at `Λ`.
pub fn packet_params_pi(
    t: f64,
    lambda: f64,
    lambda0: f64,
    n_particles: usize,
) -> Result<GaussianPacket> {
    check_lambda(lambda)?;
    check_not_critical(lambda)?;
    check_quench(t, lambda0)?;
    let w0_sq = omega_pi_squared(lambda0, n_particles);
    if !(w0_sq > 0.0) {
        return Err(Error::RegimeMismatch(
            "preparation must use a stable π point (Λ₀ < N/(N+1))",
        ));
    }
    let alpha = (1.0 + math::sqrt(w0_sq)) / lambda0 + 1.0 / lambda;
    let shift = -(n_particles as f64) / (4.0 * lambda);
    quench_packet(
        t,
        lambda,
        omega_pi_squared(lambda, n_particles),
        alpha,
        shift,
        n_particles,
        PacketCenter::Pi,
    )
}

/// `(a_0, b_0)` at time `t`, the `φ = 0` counterpart of [`packet_params_pi`].
pub fn packet_params_zero(
    t: f64,
    lambda: f64,
    lambda0: f64,
    n_particles: usize,
) -> Result<GaussianPacket> {
    check_lambda(lambda)?;
    check_quench(t, lambda0)?;
    let alpha =
        (1.0 + math::sqrt(omega_zero_squared(lambda0, n_particles))) / lambda0 - 1.0 / lambda;
    let shift = n_particles as f64 / (4.0 * lambda);
    quench_packet(
        t,
        lambda,
        omega_zero_squared(lambda, n_particles),
        alpha,
        shift,
        n_particles,
        PacketCenter::Zero,
    )
}

/// Stable `π` regime, `0 < Λ < N/(N+1)`. Returns `γ` and `2⟨Ĵx⟩/N`.
pub fn cov_stable_pi(t: f64, lambda: f64, n_particles: usize) -> Result<(CovarianceYZ, f64)> {
    check_lambda(lambda)?;
    check_not_critical(lambda)?;
    let w2 = omega_pi_squared(lambda, n_particles);
    if !(lambda < 1.0) || !(w2 > 0.0) {
        return Err(Error::RegimeMismatch("the π point is unstable for this Λ"));
    }
    let x = 2.0 * math::sqrt(w2) * t;
    let (c, s) = (math::cos(x), math::sin(x));
    let gamma = CovarianceYZ {
        gzz: (lambda + lambda * c - 2.0) / (2.0 * (lambda - 1.0)),
        gyy: (2.0 - lambda + lambda * c) / 2.0,
        gyz: -lambda * s / (2.0 * math::sqrt(1.0 - lambda)),
    };
    let n = n_particles as f64;
    let jx = -1.0 + lambda * lambda / (4.0 * n * (lambda - 1.0)) * (c - 1.0);
    Ok((gamma, jx))
}

/// Unstable `π` regime, `Λ > 1`: the hyperbolic continuation with
/// `ω_π = |√(ω_π²)|`. Returns `γ` and `2⟨Ĵx⟩/N`.
pub fn cov_unstable_pi(t: f64, lambda: f64, n_particles: usize) -> Result<(CovarianceYZ, f64)> {
    check_lambda(lambda)?;
    check_not_critical(lambda)?;
    if !(lambda > 1.0) {
        return Err(Error::RegimeMismatch("the π point is stable for Λ < 1"));
    }
    let kappa = math::sqrt(-omega_pi_squared(lambda, n_particles));
    let x = 2.0 * kappa * t;
    let (c, s) = (math::cosh(x), math::sinh(x));
    let gamma = CovarianceYZ {
        gzz: (lambda + lambda * c - 2.0) / (2.0 * (lambda - 1.0)),
        gyy: (2.0 - lambda + lambda * c) / 2.0,
        gyz: -lambda * s / (2.0 * math::sqrt(lambda - 1.0)),
    };
    let n = n_particles as f64;
    let jx = -1.0 + lambda * lambda / (4.0 * n * (lambda - 1.0)) * (c - 1.0);
    Ok((gamma, jx))
}

/// Either `π` regime, chosen by `Λ`.
pub fn cov_pi(t: f64, lambda: f64, n_particles: usize) -> Result<(CovarianceYZ, f64)> {
    if lambda > 1.0 {
        cov_unstable_pi(t, lambda, n_particles)
    } else {
        cov_stable_pi(t, lambda, n_particles)
    }
}

/// `φ = 0` regime, any `Λ > 0`. Returns `γ` and `2⟨Ĵx⟩/N`.
pub fn cov_zero(t: f64, lambda: f64, n_particles: usize) -> Result<(CovarianceYZ, f64)> {
    check_lambda(lambda)?;
    let x = 2.0 * math::sqrt(omega_zero_squared(lambda, n_particles)) * t;
    let (c, s) = (math::cos(x), math::sin(x));
    let gamma = CovarianceYZ {
        gzz: (2.0 + lambda + lambda * c) / (2.0 * (1.0 + lambda)),
        gyy: (2.0 + lambda - lambda * c) / 2.0,
        gyz: lambda * s / (2.0 * math::sqrt(1.0 + lambda)),
    };
    let n = n_particles as f64;
    let jx = 1.0 + lambda * lambda / (4.0 * n * (1.0 + lambda)) * (c - 1.0);
    Ok((gamma, jx))
}

/// `⟨θ|φ⟩ = (2^N/N!) cos^N((θ − φ)/2)`, evaluated in log space.
pub fn bargmann_overlap(theta: f64, phi: f64, n_particles: usize) -> f64 {
    let n = n_particles as f64;
    let c = math::cos(0.5 * (theta - phi));
    if c == 0.0 {
        return if n_particles == 0 { 1.0 } else { 0.0 };
    }
    let magnitude =
        math::exp(n * core::f64::consts::LN_2 - math::ln_gamma(n + 1.0) + n * math::ln(c.abs()));
    if c < 0.0 && n_particles % 2 == 1 {
        -magnitude
    } else {
        magnitude
    }
}

/// Packet norm `𝒩⁻¹ = ∫∫ ψ*(θ) e^{−N(θ−φ)²/8} ψ(φ) = 2π/√𝒜`.
pub fn normalization(a: f64, b: f64, n_particles: usize) -> Result<f64> {
    let value = big_a(a, b, n_particles);
    if !(value > 0.0) {
        return Err(Error::NonNormalizable { big_a: value });
    }
    Ok(2.0 * math::PI / math::sqrt(value))
}

/// Moments of a Gaussian packet in the Gaussian-kernel approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EqpmMoments {
    pub jx_mean: f64,
    pub jz2_mean: f64,
    pub jy2_mean: f64,
    /// `⟨{Ĵy, Ĵz}⟩`.
    pub anticomm_yz_mean: f64,
}

impl EqpmMoments {
    /// `γ` and `2⟨Ĵx⟩/N`.
    pub fn covariance(&self, n_particles: usize) -> (CovarianceYZ, f64) {
        let n = n_particles as f64;
        (
            CovarianceYZ {
                gzz: 4.0 * self.jz2_mean / n,
                gyy: 4.0 * self.jy2_mean / n,
                gyz: 2.0 * self.anticomm_yz_mean / n,
            },
            2.0 * self.jx_mean / n,
        )
    }
}

/// Closed-form `⟨Ĵx⟩`, `⟨Ĵz²⟩`, `⟨Ĵy²⟩`, `⟨{Ĵy, Ĵz}⟩`.
///
/// With the Gaussian kernel the phase `φ` seen by the operators is Gaussian
/// with complex variance `s = (8a − 8ib + N)/(4𝒜)`, so every moment reduces to
/// `E[φ^p e^{ikφ}]`. A `π` centre flips the sign of the moments that are odd
/// under `φ → φ + π`.
pub fn gaussian_expectations(packet: &GaussianPacket, n_particles: usize) -> Result<EqpmMoments> {
    let big = packet.checked_big_a(n_particles)?;
    let n = n_particles as f64;
    let c = Complex64::new(packet.a, packet.b);
    let s = Complex64::new(8.0 * packet.a + n, -8.0 * packet.b) / (4.0 * big);
    let h = n / 2.0 + 1.0;

    // E[cos kφ], E[φ sin kφ], E[φ² cos kφ]
    let e = |k: f64| (-s * (k * k / 2.0)).exp();
    let phi_sin = |k: f64| s * k * e(k);
    let phi2_cos = |k: f64| (s - s * s * (k * k)) * e(k);

    let jx = e(1.0) * h - c * 2.0 * phi_sin(1.0);
    let jz2 = c * 2.0 - c * c * s * 4.0;
    let jy2 = (c * c * s * 4.0 - c * 2.0) * 0.5
        + (c * c * 4.0 * phi2_cos(2.0) - c * 2.0 * e(2.0)) * 0.5
        + c * (n + 3.0) * phi_sin(2.0)
        + (-e(2.0) + 1.0) * ((h * h + h) * 0.5)
        - h;
    let bracket = (c * c * 4.0 * phi2_cos(1.0) - c * 2.0 * e(1.0)) * 2.0
        + c * 2.0 * (n + 3.0) * phi_sin(1.0)
        - e(1.0) * h;
    let anti = Complex64::new(0.0, 1.0) * bracket;

    let flip = match packet.center {
        PacketCenter::Zero => 1.0,
        PacketCenter::Pi => -1.0,
    };
    Ok(EqpmMoments {
        jx_mean: flip * jx.re,
        jz2_mean: jz2.re,
        jy2_mean: jy2.re,
        anticomm_yz_mean: flip * anti.re,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::witness::zeta2_opt;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn potential_examples() {
        let (n, lambda) = (200, 1.5);
        let v0 = potential(0.0, n, lambda).unwrap();
        assert!(close(v0, -100.5 - 200.0 / 12.0, 1e-12));
        for phi in [0.3, 1.1, 2.9] {
            assert_eq!(
                potential(phi, n, lambda).unwrap(),
                potential(-phi, n, lambda).unwrap()
            );
        }
        let h = 1e-4;
        let curvature = (potential(math::PI + h, 2000, lambda).unwrap()
            - 2.0 * potential(math::PI, 2000, lambda).unwrap()
            + potential(math::PI - h, 2000, lambda).unwrap())
            / (h * h);
        assert!(curvature < 0.0);
        assert!(potential(0.0, n, 0.0).is_err());
    }

    #[test]
    fn frequencies() {
        let n = 200;
        assert_eq!(omega_pi_squared(n as f64 / (n as f64 + 1.0), n), 0.0);
        assert!(close(omega_pi_squared(0.5, 1_000_000_000), 0.5, 1e-9));
        assert!(close(omega_pi_squared(2.0, 1_000_000_000), -1.0, 1e-8));
        assert!(close(omega_zero_squared(1.0, 1_000_000_000), 2.0, 1e-8));
        assert_eq!(omega_zero_squared(0.0, 10), 1.0);
        for lambda in [0.1, 1.0, 10.0, 100.0] {
            assert!(omega_zero_squared(lambda, 200) > 0.0);
        }
    }

    #[test]
    fn closed_forms_start_at_css() {
        for (g, jx) in [
            cov_stable_pi(0.0, 0.5, 200).unwrap(),
            cov_unstable_pi(0.0, 2.0, 200).unwrap(),
            cov_zero(0.0, 1.0, 200).unwrap(),
        ] {
            assert_eq!(g, CovarianceYZ::identity());
            assert_eq!(jx.abs(), 1.0);
        }
        assert_eq!(cov_zero(0.0, 1.0, 200).unwrap().1, 1.0);
        assert_eq!(cov_stable_pi(0.0, 0.5, 200).unwrap().1, -1.0);
    }

    #[test]
    fn half_period_values() {
        let n = 200;
        let w = math::sqrt(omega_pi_squared(0.5, n));
        let (g, _) = cov_stable_pi(math::PI / (2.0 * w), 0.5, n).unwrap();
        assert!(close(g.gzz, 2.0, 1e-12) && close(g.gyy, 0.5, 1e-12) && g.gyz.abs() < 1e-12);
        assert!(close(zeta2_opt(g.lambda_pm().0).unwrap(), 0.5, 1e-12));

        let w = math::sqrt(omega_zero_squared(1.0, n));
        let (g, _) = cov_zero(math::PI / (2.0 * w), 1.0, n).unwrap();
        assert!(close(g.gzz, 0.5, 1e-12) && close(g.gyy, 2.0, 1e-12) && g.gyz.abs() < 1e-12);
        assert!(close(zeta2_opt(g.lambda_pm().0).unwrap(), 0.5, 1e-12));
    }

    #[test]
    fn minima_are_independent_of_n() {
        for n in [20, 200, 2000] {
            for lambda in [0.2, 0.7] {
                let w = math::sqrt(omega_pi_squared(lambda, n));
                let (g, _) = cov_stable_pi(math::PI / (2.0 * w), lambda, n).unwrap();
                assert!(close(
                    zeta2_opt(g.lambda_pm().0).unwrap(),
                    1.0 - lambda,
                    1e-12
                ));
            }
        }
    }

    #[test]
    fn closed_forms_are_pure_gaussian() {
        for t in [0.1, 0.7, 2.3] {
            for (g, _) in [
                cov_stable_pi(t, 0.4, 200).unwrap(),
                cov_unstable_pi(t, 2.5, 200).unwrap(),
                cov_zero(t, 3.0, 200).unwrap(),
            ] {
                assert!(close(g.det(), 1.0, 1e-9 * g.trace() * g.trace()));
            }
        }
    }

    #[test]
    fn regime_guards() {
        assert!(cov_stable_pi(0.1, 1.5, 200).is_err());
        assert!(cov_unstable_pi(0.1, 0.5, 200).is_err());
        assert!(matches!(
            cov_unstable_pi(0.1, 1.0 + 1e-7, 200),
            Err(Error::CriticalPoint { .. })
        ));
        assert!(matches!(
            packet_params_pi(0.1, 1.0, 1e-3, 200),
            Err(Error::CriticalPoint { .. })
        ));
        assert!(packet_params_pi(0.1, 0.5, 0.0, 200).is_err());
        assert!(packet_params_zero(0.1, 0.5, -1.0, 200).is_err());
    }

    #[test]
    fn packets_start_unchirped() {
        assert_eq!(packet_params_pi(0.0, 0.5, 1e-3, 200).unwrap().b, 0.0);
        assert_eq!(packet_params_pi(0.0, 2.0, 1e-3, 200).unwrap().b, 0.0);
        assert_eq!(packet_params_zero(0.0, 0.5, 1e-3, 200).unwrap().b, 0.0);
    }

    #[test]
    fn stable_packets_are_periodic() {
        let n = 200;
        let period = math::PI / math::sqrt(omega_pi_squared(0.5, n));
        let p0 = packet_params_pi(0.3, 0.5, 0.05, n).unwrap();
        let p1 = packet_params_pi(0.3 + period, 0.5, 0.05, n).unwrap();
        assert!(close(p0.a, p1.a, 1e-8 * p0.a.abs()) && close(p0.b, p1.b, 1e-8 * p0.a.abs()));
        let period = math::PI / math::sqrt(omega_zero_squared(0.5, n));
        let q0 = packet_params_zero(0.3, 0.5, 0.05, n).unwrap();
        let q1 = packet_params_zero(0.3 + period, 0.5, 0.05, n).unwrap();
        assert!(close(q0.a, q1.a, 1e-8 * q0.a.abs()) && close(q0.b, q1.b, 1e-8 * q0.a.abs()));
    }

    #[test]
    fn css_limit_of_packets() {
        let n = 200;
        for packet in [
            packet_params_pi(0.0, 0.5, 1e-6, n).unwrap(),
            packet_params_zero(0.0, 0.5, 1e-6, n).unwrap(),
        ] {
            let (g, jx) = gaussian_expectations(&packet, n).unwrap().covariance(n);
            assert!(close(g.gzz, 1.0, 5.0 / n as f64));
            assert!(close(g.gyy, 1.0, 5.0 / n as f64));
            assert!(g.gyz.abs() < 5.0 / n as f64);
            assert!(close(jx.abs(), 1.0, 5.0 / n as f64));
        }
    }

    #[test]
    fn packet_route_tracks_closed_forms() {
        let n = 200;
        let tol = 5.0 / n as f64;
        type Closed = fn(f64, f64, usize) -> Result<(CovarianceYZ, f64)>;
        let cases: [(f64, Closed, bool); 3] = [
            (0.5, cov_stable_pi, true),
            (2.0, cov_unstable_pi, true),
            (1.0, cov_zero, false),
        ];
        for (lambda, closed, pi) in cases {
            for t in [0.2, 0.4, 0.6] {
                let packet = if pi {
                    packet_params_pi(t, lambda, 1e-6, n).unwrap()
                } else {
                    packet_params_zero(t, lambda, 1e-6, n).unwrap()
                };
                let (g, jx) = gaussian_expectations(&packet, n).unwrap().covariance(n);
                let (h, kx) = closed(t, lambda, n).unwrap();
                let scale = h.trace();
                assert!(
                    close(g.gzz, h.gzz, tol * scale),
                    "{lambda} {t} gzz {g:?} {h:?}"
                );
                assert!(
                    close(g.gyy, h.gyy, tol * scale),
                    "{lambda} {t} gyy {g:?} {h:?}"
                );
                assert!(close(g.gyz, h.gyz, tol * scale), "{lambda} {t} gyz");
                assert!(close(jx, kx, tol), "{lambda} {t} jx");
            }
        }
    }

    #[test]
    fn overlap_examples() {
        let n = 200;
        let peak = bargmann_overlap(0.4, 0.4, n);
        let exact = math::exp(n as f64 * core::f64::consts::LN_2 - math::ln_gamma(201.0));
        assert!(close(peak, exact, 1e-12 * exact));
        assert_eq!(bargmann_overlap(math::PI, 0.0, n), 0.0);
        let bound = 4.0 / math::sqrt(n as f64);
        for k in 0..=20 {
            let d = bound * k as f64 / 20.0;
            let ratio = bargmann_overlap(0.1 + d, 0.1, n) / peak;
            let gauss = math::exp(-(n as f64) * d * d / 8.0);
            assert!((ratio - gauss).abs() / gauss < 1e-2, "{d}");
        }
    }

    #[test]
    fn normalization_examples() {
        let a = 1e8;
        assert!(close(
            normalization(a, 0.0, 200).unwrap(),
            math::PI / a,
            1e-6 * math::PI / a
        ));
        assert!(matches!(
            normalization(-50.0, 0.0, 200),
            Err(Error::NonNormalizable { .. })
        ));
        assert!(matches!(
            normalization(0.0, 0.0, 200),
            Err(Error::NonNormalizable { .. })
        ));
    }

    #[test]
    fn localized_packet_is_css() {
        let n = 200;
        let packet = GaussianPacket::new(1e9, 0.0, PacketCenter::Zero, n).unwrap();
        let m = gaussian_expectations(&packet, n).unwrap();
        assert!(close(m.jz2_mean, 50.0, 1e-5));
        assert!(m.anticomm_yz_mean.abs() < 1e-6);
    }

    #[test]
    fn pi_centre_flips_odd_moments() {
        let n = 200;
        let zero = GaussianPacket::new(60.0, 10.0, PacketCenter::Zero, n).unwrap();
        let pi = GaussianPacket {
            center: PacketCenter::Pi,
            ..zero
        };
        let (mz, mp) = (
            gaussian_expectations(&zero, n).unwrap(),
            gaussian_expectations(&pi, n).unwrap(),
        );
        assert_eq!(mz.jx_mean, -mp.jx_mean);
        assert_eq!(mz.anticomm_yz_mean, -mp.anticomm_yz_mean);
        assert_eq!(mz.jy2_mean, mp.jy2_mean);
    }
}

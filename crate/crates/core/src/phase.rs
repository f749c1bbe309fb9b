//! Spin operators acting on phase wave functions `ψ(φ)`.
//!
//! With `h = N/2 + 1` and `∂ = d/dφ`:
//!
//! ```text
//! Ĵx = sinφ ∂ + h cosφ        Ĵy = cosφ ∂ − h sinφ        Ĵz = i∂
//! Ĵx² = sin²φ ∂² + ((N+3)/2) sin2φ ∂ + (h² + h) cos²φ − h
//! Ĵy² = cos²φ ∂² − ((N+3)/2) sin2φ ∂ + (h² + h) sin²φ − h
//! Ĵz² = −∂²
//! {Ĵy, Ĵz} = i[2 cosφ ∂² − (N+3) sinφ ∂ − h cosφ]
//! ```
//!
//! Expectation values pair `ψ*(θ)` and `(Ôψ)(φ)` through the overlap kernel
//! between phase states.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::eqpm::GaussianPacket;
use crate::error::{Error, Result};
use crate::math;

/// Fraction of `|ψ|²` allowed within `0.1π` of `±π`.
pub const BOUNDARY_MASS_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kernel {
    /// `cos^N((θ − φ)/2)`, exact.
    Bargmann,
    /// `exp(−N(θ − φ)²/8)`, its large-`N` form.
    Gaussian,
}

impl Kernel {
    pub fn eval(self, delta: f64, n_particles: usize) -> f64 {
        match self {
            Kernel::Bargmann => math::signed_pow(math::cos(0.5 * delta), n_particles as u32),
            Kernel::Gaussian => math::exp(-(n_particles as f64) * delta * delta / 8.0),
        }
    }
}

/// Normalized moments of a phase wave function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMoments {
    /// `∫∫ ψ*(θ) K(θ − φ) ψ(φ)` in the kernel's own units.
    pub norm: f64,
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub jx2: f64,
    pub jy2: f64,
    pub jz2: f64,
    pub anti_yz: f64,
}

/// Uniform periodic grid `φ_k = −π + 2πk/M`.
pub fn phase_grid(samples: usize) -> Vec<f64> {
    (0..samples)
        .map(|k| -math::PI + math::TAU * k as f64 / samples as f64)
        .collect()
}

/// Samples `exp(−(a + ib)(φ − φ₀)²)` with `φ − φ₀` wrapped into `[−π, π)`.
pub fn sample_packet(packet: &GaussianPacket, samples: usize) -> Vec<Complex64> {
    let c = Complex64::new(packet.a, packet.b);
    phase_grid(samples)
        .into_iter()
        .map(|phi| {
            let d = math::wrap_angle(phi - packet.center.phase());
            (-c * d * d).exp()
        })
        .collect()
}

/// Sixth-order periodic central differences.
fn derivatives(psi: &[Complex64], h: f64) -> (Vec<Complex64>, Vec<Complex64>) {
    let m = psi.len();
    let at = |k: isize| psi[k.rem_euclid(m as isize) as usize];
    let mut d1 = vec![Complex64::new(0.0, 0.0); m];
    let mut d2 = vec![Complex64::new(0.0, 0.0); m];
    for k in 0..m {
        let k = k as isize;
        let (fm3, fm2, fm1, f0, fp1, fp2, fp3) = (
            at(k - 3),
            at(k - 2),
            at(k - 1),
            at(k),
            at(k + 1),
            at(k + 2),
            at(k + 3),
        );
        d1[k as usize] =
            (-fm3 + fm2 * 9.0 - fm1 * 45.0 + fp1 * 45.0 - fp2 * 9.0 + fp3) / (60.0 * h);
        d2[k as usize] = (fm3 * 2.0 - fm2 * 27.0 + fm1 * 270.0 - f0 * 490.0 + fp1 * 270.0
            - fp2 * 27.0
            + fp3 * 2.0)
            / (180.0 * h * h);
    }
    (d1, d2)
}

/// Evaluates the differential representations on a sampled wave function by
/// finite differences and trapezoidal quadrature against `kernel`.
///
/// `psi` holds samples on [`phase_grid`]. Fails with [`Error::BoundaryMass`]
/// when the packet reaches the ends of the interval, where the periodic
/// derivative and the unwrapped kernel stop being faithful.
pub fn spin_phase_operators_check(
    psi: &[Complex64],
    n_particles: usize,
    kernel: Kernel,
) -> Result<PhaseMoments> {
    let m = psi.len();
    if m < 16 {
        return Err(Error::InsufficientSamples {
            needed: 16,
            found: m,
        });
    }
    let grid = phase_grid(m);
    let total: f64 = psi.iter().map(|c| c.norm_sqr()).sum();
    let edge: f64 = grid
        .iter()
        .zip(psi)
        .filter(|(phi, _)| phi.abs() > 0.9 * math::PI)
        .map(|(_, c)| c.norm_sqr())
        .sum();
    let mass = edge / total;
    if !(mass <= BOUNDARY_MASS_LIMIT) {
        return Err(Error::BoundaryMass { mass });
    }

    let h = math::TAU / m as f64;
    let (d1, d2) = derivatives(psi, h);

    // g(φ) = ∫ ψ*(θ) K(θ − φ) dθ
    let g: Vec<Complex64> = grid
        .iter()
        .map(|&phi| {
            grid.iter()
                .zip(psi)
                .map(|(&theta, c)| c.conj() * kernel.eval(theta - phi, n_particles))
                .sum::<Complex64>()
                * h
        })
        .collect();

    let n = n_particles as f64;
    let hh = n / 2.0 + 1.0;
    let i = Complex64::new(0.0, 1.0);
    let pair = |f: &dyn Fn(usize, f64) -> Complex64| -> Complex64 {
        grid.iter()
            .enumerate()
            .map(|(k, &phi)| g[k] * f(k, phi))
            .sum::<Complex64>()
            * h
    };

    let norm = pair(&|k, _| psi[k]);
    let mean = |f: &dyn Fn(usize, f64) -> Complex64| (pair(f) / norm).re;
    Ok(PhaseMoments {
        norm: norm.re,
        jx: mean(&|k, phi| d1[k] * math::sin(phi) + psi[k] * (hh * math::cos(phi))),
        jy: mean(&|k, phi| d1[k] * math::cos(phi) - psi[k] * (hh * math::sin(phi))),
        jz: mean(&|k, _| i * d1[k]),
        jx2: mean(&|k, phi| {
            let (s, c) = (math::sin(phi), math::cos(phi));
            d2[k] * (s * s)
                + d1[k] * (0.5 * (n + 3.0) * 2.0 * s * c)
                + psi[k] * ((hh * hh + hh) * c * c - hh)
        }),
        jy2: mean(&|k, phi| {
            let (s, c) = (math::sin(phi), math::cos(phi));
            d2[k] * (c * c) - d1[k] * (0.5 * (n + 3.0) * 2.0 * s * c)
                + psi[k] * ((hh * hh + hh) * s * s - hh)
        }),
        jz2: mean(&|k, _| -d2[k]),
        anti_yz: mean(&|k, phi| {
            let (s, c) = (math::sin(phi), math::cos(phi));
            i * (d2[k] * (2.0 * c) - d1[k] * ((n + 3.0) * s) - psi[k] * (hh * c))
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eqpm::{gaussian_expectations, PacketCenter};

    #[test]
    fn matches_closed_form_gaussian_moments() {
        let n = 200;
        let packet = GaussianPacket::new(60.0, 10.0, PacketCenter::Zero, n).unwrap();
        let closed = gaussian_expectations(&packet, n).unwrap();
        let m =
            spin_phase_operators_check(&sample_packet(&packet, 512), n, Kernel::Gaussian).unwrap();
        let rel = |a: f64, b: f64| (a - b).abs() / b.abs();
        assert!(rel(m.jx, closed.jx_mean) < 1e-2);
        assert!(rel(m.jz2, closed.jz2_mean) < 1e-2);
        assert!(rel(m.jy2, closed.jy2_mean) < 1e-2);
        assert!(rel(m.anti_yz, closed.anticomm_yz_mean) < 1e-2);
    }

    #[test]
    fn exact_kernel_close_to_gaussian_kernel() {
        let n = 200;
        let packet = GaussianPacket::new(40.0, -5.0, PacketCenter::Zero, n).unwrap();
        let closed = gaussian_expectations(&packet, n).unwrap();
        let m =
            spin_phase_operators_check(&sample_packet(&packet, 512), n, Kernel::Bargmann).unwrap();
        assert!((m.jx - closed.jx_mean).abs() / closed.jx_mean < 1e-2);
        assert!((m.jz2 - closed.jz2_mean).abs() / closed.jz2_mean < 2e-2);
    }

    #[test]
    fn even_real_packet_has_no_jz() {
        let n = 100;
        let packet = GaussianPacket::new(30.0, 0.0, PacketCenter::Zero, n).unwrap();
        let m =
            spin_phase_operators_check(&sample_packet(&packet, 256), n, Kernel::Bargmann).unwrap();
        assert!(m.jz.abs() < 1e-10);
        assert!(m.jy.abs() < 1e-10);
    }

    #[test]
    fn narrow_packet_points_along_x() {
        let n = 200;
        let packet = GaussianPacket::new(2000.0, 0.0, PacketCenter::Zero, n).unwrap();
        let m =
            spin_phase_operators_check(&sample_packet(&packet, 2048), n, Kernel::Bargmann).unwrap();
        assert!((m.jx - 100.0).abs() < 1.0);
        // Casimir from the second-order forms
        let casimir = m.jx2 + m.jy2 + m.jz2;
        assert!((casimir - 100.0 * 101.0).abs() < 1e-3 * casimir);
    }

    #[test]
    fn boundary_mass_rejected() {
        let n = 200;
        let packet = GaussianPacket::new(30.0, 0.0, PacketCenter::Pi, n).unwrap();
        assert!(matches!(
            spin_phase_operators_check(&sample_packet(&packet, 256), n, Kernel::Gaussian),
            Err(Error::BoundaryMass { .. })
        ));
    }
}

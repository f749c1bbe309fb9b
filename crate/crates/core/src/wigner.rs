//! Spherical Wigner function from the multipole expansion of `|ψ⟩⟨ψ|`, and
//! the mean-field separatrix through the `φ = π` fixed point.
//!
//! `T_kq = Σ (−1)^{j−m'} ⟨j m; j −m' | k q⟩ |m⟩⟨m'|`, `ρ_kq = Tr(T_kq† ρ)` and
//! `W(θ, φ) = √((N+1)/4π) Σ ρ_kq Y_kq(θ, φ)`, which integrates to one over the
//! sphere.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;
use crate::spin::{ladder, StateVector};
use crate::tridiag;

const ORTHONORMALITY_LIMIT: f64 = 1e-6;
const IMAGINARY_LIMIT: f64 = 1e-8;

/// Coupling coefficients `⟨j m1; j (M − m1) | k M⟩` for all `k ≥ |M|`, as
/// eigenvectors of the `Ĵ²` block at fixed `M`.
struct CouplingBlock {
    /// Smallest `m1` in the block.
    m1_min: i64,
    /// `vectors[k − |M|][m1 − m1_min]`.
    vectors: Vec<Vec<f64>>,
}

impl CouplingBlock {
    /// Condon–Shortley phase: the `m1 = j` entry is positive for `M ≥ 0`, and
    /// `⟨j −m1; j −m2 | k −M⟩ = (−1)^k ⟨j m1; j m2 | k M⟩` for `M < 0`.
    fn new(j: i64, big_m: i64) -> Result<Self> {
        let m_abs = big_m.abs();
        let lo = (m_abs - j).max(-j);
        let hi = j;
        let jf = j as f64;
        let jj = jf * (jf + 1.0);
        let diag: Vec<f64> = (lo..=hi)
            .map(|m1| {
                let m2 = m_abs - m1;
                2.0 * jj + 2.0 * (m1 * m2) as f64
            })
            .collect();
        let off: Vec<f64> = (lo..hi)
            .map(|m1| {
                let m2 = m_abs - m1;
                ladder(jf, m1 as f64) * ladder(jf, (m2 - 1) as f64)
            })
            .collect();
        let dim = diag.len();
        let mut vectors = Vec::with_capacity(dim);
        for (idx, k) in (m_abs..=2 * j).enumerate() {
            let kk = (k * (k + 1)) as f64;
            let mut v = if dim == 1 {
                vec![1.0]
            } else {
                tridiag::eigenvector_for(&diag, &off, kk)?
            };
            if v[dim - 1] < 0.0 {
                v.iter_mut().for_each(|x| *x = -*x);
            }
            let deviation = block_residual(&diag, &off, kk, &v) / gap(k);
            if !(deviation <= ORTHONORMALITY_LIMIT) {
                return Err(Error::CouplingInstability {
                    k: k as usize,
                    q: big_m,
                    deviation,
                });
            }
            if big_m < 0 {
                v.reverse();
                if k % 2 == 1 {
                    v.iter_mut().for_each(|x| *x = -*x);
                }
            }
            debug_assert_eq!(idx, (k - m_abs) as usize);
            vectors.push(v);
        }
        let m1_min = if big_m < 0 { -hi } else { lo };
        Ok(Self { m1_min, vectors })
    }
}

/// Distance from `k(k+1)` to the nearest other eigenvalue of the block; it
/// bounds the loss of orthogonality as `residual / gap`.
fn gap(k: i64) -> f64 {
    (2 * k.max(1)) as f64
}

fn block_residual(diag: &[f64], off: &[f64], lambda: f64, v: &[f64]) -> f64 {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut acc = (diag[i] - lambda) * v[i];
            if i > 0 {
                acc += off[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                acc += off[i] * v[i + 1];
            }
            acc.abs()
        })
        .fold(0.0, f64::max)
}

/// `⟨j m1; j (M − m1) | k M⟩`; zero outside the allowed range.
pub fn clebsch_gordan(n_particles: usize, m1: i64, m2: i64, k: i64, big_m: i64) -> Result<f64> {
    let j = (n_particles / 2) as i64;
    if m1 + m2 != big_m || m1.abs() > j || m2.abs() > j || k < big_m.abs() || k > 2 * j {
        return Ok(0.0);
    }
    let block = CouplingBlock::new(j, big_m)?;
    Ok(block.vectors[(k - big_m.abs()) as usize][(m1 - block.m1_min) as usize])
}

/// Multipole coefficients `ρ_kq`, `k = 0…N`, `q = −k…k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Multipoles {
    n_particles: usize,
    coeffs: Vec<Complex64>,
}

impl Multipoles {
    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn get(&self, k: usize, q: i64) -> Complex64 {
        self.coeffs[k * k + (q + k as i64) as usize]
    }

    /// `Σ |ρ_kq|² = Tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

pub fn density_multipoles(psi: &StateVector) -> Result<Multipoles> {
    let n = psi.n_particles();
    let j = (n / 2) as i64;
    let kmax = n;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); (kmax + 1) * (kmax + 1)];
    for q in -(2 * j)..=2 * j {
        let block = CouplingBlock::new(j, q)?;
        for (idx, v) in block.vectors.iter().enumerate() {
            let k = q.abs() + idx as i64;
            let mut acc = Complex64::new(0.0, 0.0);
            for (offset, cg) in v.iter().enumerate() {
                let m = block.m1_min + offset as i64;
                let mp = m - q;
                let sign = if (j - mp) % 2 == 0 { 1.0 } else { -1.0 };
                acc += psi.amplitude(m) * psi.amplitude(mp).conj() * (sign * cg);
            }
            let k = k as usize;
            coeffs[k * k + (q + k as i64) as usize] = acc;
        }
    }
    Ok(Multipoles {
        n_particles: n,
        coeffs,
    })
}

/// Orthonormal associated Legendre functions with the Condon–Shortley phase,
/// `P̄[k][q]` for `0 ≤ q ≤ k ≤ kmax`, so `Y_kq = P̄_k^q(cosθ) e^{iqφ}`.
fn legendre_table(kmax: usize, theta: f64) -> Vec<Vec<f64>> {
    let (x, s) = (math::cos(theta), math::sin(theta));
    let mut p = vec![vec![0.0; kmax + 1]; kmax + 1];
    p[0][0] = 1.0 / math::sqrt(4.0 * math::PI);
    for q in 1..=kmax {
        let qf = q as f64;
        p[q][q] = -math::sqrt((2.0 * qf + 1.0) / (2.0 * qf)) * s * p[q - 1][q - 1];
    }
    for q in 0..kmax {
        p[q + 1][q] = math::sqrt(2.0 * q as f64 + 3.0) * x * p[q][q];
        for k in q + 2..=kmax {
            let (kf, qf) = (k as f64, q as f64);
            let a = math::sqrt((4.0 * kf * kf - 1.0) / (kf * kf - qf * qf));
            let b = math::sqrt(
                ((kf - 1.0) * (kf - 1.0) - qf * qf) / (4.0 * (kf - 1.0) * (kf - 1.0) - 1.0),
            );
            p[k][q] = a * (x * p[k - 1][q] - b * p[k - 2][q]);
        }
    }
    p
}

/// `Y_kq(θ, φ)`.
pub fn spherical_harmonic(k: usize, q: i64, theta: f64, phi: f64) -> Complex64 {
    let qa = q.unsigned_abs() as usize;
    if qa > k {
        return Complex64::new(0.0, 0.0);
    }
    let p = legendre_table(k, theta)[k][qa];
    let y = Complex64::from_polar(p, qa as f64 * phi);
    if q < 0 {
        let sign = if qa.is_multiple_of(2) { 1.0 } else { -1.0 };
        y.conj() * sign
    } else {
        y
    }
}

/// `A_q(θ) = Σ_k ρ_kq P̄_k^{|q|}(cosθ)·phase`, indexed by `q + kmax`.
fn theta_row(rho: &Multipoles, theta: f64) -> Vec<Complex64> {
    let kmax = rho.n_particles;
    let p = legendre_table(kmax, theta);
    let mut row = vec![Complex64::new(0.0, 0.0); 2 * kmax + 1];
    for (qi, slot) in row.iter_mut().enumerate() {
        let q = qi as i64 - kmax as i64;
        let qa = q.unsigned_abs() as usize;
        let sign = if q < 0 && qa % 2 == 1 { -1.0 } else { 1.0 };
        *slot = (qa..=kmax).map(|k| rho.get(k, q) * (sign * p[k][qa])).sum();
    }
    row
}

fn prefactor(n_particles: usize) -> f64 {
    math::sqrt((n_particles as f64 + 1.0) / (4.0 * math::PI))
}

/// `W(θ, φ)` with its imaginary residue.
pub fn wigner_at(rho: &Multipoles, theta: f64, phi: f64) -> Complex64 {
    let kmax = rho.n_particles as i64;
    let row = theta_row(rho, theta);
    let w: Complex64 = row
        .iter()
        .enumerate()
        .map(|(qi, a)| a * Complex64::from_polar(1.0, (qi as i64 - kmax) as f64 * phi))
        .sum();
    w * prefactor(rho.n_particles)
}

/// Sampling of the sphere: `θ` uniform on `[0, π]` with both poles, `φ`
/// uniform on `[−π, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    pub n_theta: usize,
    pub n_phi: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_theta: 181,
            n_phi: 361,
        }
    }
}

impl GridSpec {
    /// The default grid, refined when the band limit of `N` demands it.
    pub fn for_particles(n_particles: usize) -> Self {
        let need = 2 * (n_particles + 1);
        let d = Self::default();
        Self {
            n_theta: d.n_theta.max(need),
            n_phi: d.n_phi.max(need),
        }
    }

    pub fn theta_samples(&self) -> Vec<f64> {
        (0..self.n_theta)
            .map(|i| math::PI * i as f64 / (self.n_theta - 1) as f64)
            .collect()
    }

    pub fn phi_samples(&self) -> Vec<f64> {
        (0..self.n_phi)
            .map(|i| -math::PI + math::TAU * i as f64 / self.n_phi as f64)
            .collect()
    }
}

/// Real samples over the sphere, row-major in `θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    pub theta_samples: Vec<f64>,
    pub phi_samples: Vec<f64>,
    pub values: Vec<f64>,
}

impl SphereGrid {
    pub fn value(&self, i_theta: usize, i_phi: usize) -> f64 {
        self.values[i_theta * self.phi_samples.len() + i_phi]
    }

    /// `∮ W dΩ`: trapezoid in `θ`, periodic rectangle rule in `φ`.
    pub fn integral(&self) -> f64 {
        let nt = self.theta_samples.len();
        let np = self.phi_samples.len();
        let dt = math::PI / (nt - 1) as f64;
        let dp = math::TAU / np as f64;
        (0..nt)
            .map(|i| {
                let w = if i == 0 || i == nt - 1 { 0.5 } else { 1.0 };
                let row: f64 = (0..np).map(|j| self.value(i, j)).sum();
                w * math::sin(self.theta_samples[i]) * row
            })
            .sum::<f64>()
            * dt
            * dp
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `(θ, φ)` of the largest sample.
    pub fn argmax(&self) -> (f64, f64) {
        let np = self.phi_samples.len();
        let idx =
            self.values.iter().enumerate().fold(
                0,
                |best, (i, v)| if *v > self.values[best] { i } else { best },
            );
        (self.theta_samples[idx / np], self.phi_samples[idx % np])
    }

    /// Values divided by the maximum, so the peak reads 1.
    pub fn peak_normalized(&self) -> Vec<f64> {
        let peak = self.max();
        self.values.iter().map(|v| v / peak).collect()
    }
}

/// `W` on a grid; the returned values integrate to one.
pub fn wigner(psi: &StateVector, grid: GridSpec) -> Result<SphereGrid> {
    let n = psi.n_particles();
    let need = 2 * (n + 1);
    for (axis, found) in [("theta", grid.n_theta), ("phi", grid.n_phi)] {
        if found < need {
            return Err(Error::UnderResolvedGrid {
                axis,
                needed: need,
                found,
            });
        }
    }
    let rho = density_multipoles(psi)?;
    let theta_samples = grid.theta_samples();
    let phi_samples = grid.phi_samples();
    let kmax = n as i64;
    let pref = prefactor(n);
    // e^{iqφ} for every column
    let phases: Vec<Vec<Complex64>> = phi_samples
        .iter()
        .map(|&phi| {
            (-kmax..=kmax)
                .map(|q| Complex64::from_polar(1.0, q as f64 * phi))
                .collect()
        })
        .collect();
    let mut values = Vec::with_capacity(theta_samples.len() * phi_samples.len());
    let mut residue = 0.0f64;
    for &theta in &theta_samples {
        let row = theta_row(&rho, theta);
        for phase in &phases {
            let w: Complex64 = row.iter().zip(phase).map(|(a, e)| a * e).sum::<Complex64>() * pref;
            residue = residue.max(w.im.abs());
            values.push(w.re);
        }
    }
    if residue > IMAGINARY_LIMIT {
        return Err(Error::ComplexWigner { residue });
    }
    Ok(SphereGrid {
        theta_samples,
        phi_samples,
        values,
    })
}

/// Mean-field energy `Λz²/2 − √(1 − z²) cos φ`; the separatrix is its level
/// set through the `(π, 0)` fixed point, where it equals 1.
pub fn mean_field_energy(lambda: f64, phi: f64, z: f64) -> f64 {
    0.5 * lambda * z * z - math::sqrt((1.0 - z * z).max(0.0)) * math::cos(phi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparatrixCurve {
    pub lambda: f64,
    /// Upper half, `z ≥ 0`; the lower half is its mirror `z → −z`.
    pub points: Vec<(f64, f64)>,
}

/// Upper half of the separatrix, sampled uniformly in `δ = φ − π`.
///
/// With `s = √(1 − z²)` and `c = cos δ` the level set reads
/// `(Λ/2)s² − c s + 1 − Λ/2 = 0`, so `s = (c ± r)/Λ` with
/// `r² = (Λ − 1)² − sin²δ`. For `Λ < 2` the curve is a lobe around `φ = π`
/// with two branches; from `Λ = 2` on it reaches the poles and wraps around.
pub fn separatrix(lambda: f64, n_points: usize) -> Result<SeparatrixCurve> {
    if !(lambda > 1.0) || !lambda.is_finite() {
        return Err(Error::NoSeparatrix { lambda });
    }
    let n_points = n_points.max(3);
    let lm1 = lambda - 1.0;
    let delta_max = if lambda < 2.0 {
        // lobe edge where r = 0, sin δ = Λ − 1
        math::asin(lm1)
    } else {
        math::PI
    };
    let delta_at = |i: usize| -delta_max + 2.0 * delta_max * i as f64 / (n_points - 1) as f64;

    // Roots s = (c ∓ r)/Λ. Since c² − r² = Λ(2 − Λ), the cancelling
    // combination is rewritten as a quotient, and 1 − s uses the factored form
    // near s = 1. This keeps (π, 0) and the poles exact.
    let z_of = |delta: f64, outer: bool| -> Option<f64> {
        let sin_d = math::sin(delta);
        let r2 = lm1 * lm1 - sin_d * sin_d;
        if r2 < 0.0 {
            return None;
        }
        let r = math::sqrt(r2);
        let c = math::cos(delta);
        let one_minus_c = 2.0 * math::sin(0.5 * delta) * math::sin(0.5 * delta);
        let (s, factored) = if outer {
            if !(c + r > 0.0) {
                return None;
            }
            ((2.0 - lambda) / (c + r), (lm1 + r + one_minus_c) / lambda)
        } else {
            let s = if c >= 0.0 {
                (c + r) / lambda
            } else {
                (lambda - 2.0) / (r - c)
            };
            (s, (lm1 - r + one_minus_c) / lambda)
        };
        if !(0.0..=1.0).contains(&s) {
            return None;
        }
        let one_minus_s = if s < 0.5 { 1.0 - s } else { factored };
        Some(math::sqrt((one_minus_s * (1.0 + s)).max(0.0)))
    };
    let phi_of = |delta: f64| {
        if delta == 0.0 {
            math::PI
        } else {
            math::wrap_angle(math::PI + delta)
        }
    };

    let mut points = Vec::new();
    for i in 0..n_points {
        let d = delta_at(i);
        if let Some(z) = z_of(d, true) {
            points.push((phi_of(d), z));
        }
    }
    for i in (0..n_points).rev() {
        let d = delta_at(i);
        if let Some(z) = z_of(d, false) {
            points.push((phi_of(d), z));
        }
    }
    // the fixed point itself, exactly
    if !points.iter().any(|&(phi, z)| phi == math::PI && z == 0.0) {
        points.push((math::PI, 0.0));
    }
    Ok(SeparatrixCurve { lambda, points })
}

//! Collective spin operators on the Dicke basis, coherent spin states and the
//! `y`–`z` covariance matrix.
//!
//! Amplitudes are stored with `m = −N/2 … N/2` ascending, so index `i` holds
//! `m = i − N/2`. `Ĵ+ = â†b̂` raises `m`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::math;
use crate::params::check_particle_number;

const NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
const RESIDUE_TOL: f64 = 1e-10;

/// `⟨m+1|Ĵ+|m⟩ = √(j(j+1) − m(m+1))`.
#[inline]
pub fn ladder(j: f64, m: f64) -> f64 {
    math::sqrt((j * (j + 1.0) - m * (m + 1.0)).max(0.0))
}

#[inline]
fn m_of(n_particles: usize, index: usize) -> f64 {
    index as f64 - n_particles as f64 / 2.0
}

/// Normalized pure state over the Dicke basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_particles: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn new(n_particles: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_particle_number(n_particles)?;
        if amplitudes.len() != n_particles + 1 {
            return Err(Error::DimensionMismatch {
                expected: n_particles + 1,
                found: amplitudes.len(),
            });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self {
            n_particles,
            amplitudes,
        })
    }

    /// Dicke state `|m⟩`.
    pub fn dicke(n_particles: usize, m: i64) -> Result<Self> {
        check_particle_number(n_particles)?;
        let half = (n_particles / 2) as i64;
        if m.abs() > half {
            return Err(Error::InvalidParameter {
                name: "m",
                value: m as f64,
                reason: "magnetic number must lie in [-N/2, N/2]",
            });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); n_particles + 1];
        amplitudes[(m + half) as usize] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_particles,
            amplitudes,
        })
    }

    /// Skips the normalization check; for states produced by unitary maps.
    pub(crate) fn from_unitary_image(n_particles: usize, amplitudes: Vec<Complex64>) -> Self {
        Self {
            n_particles,
            amplitudes,
        }
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude of `|m⟩`.
    pub fn amplitude(&self, m: i64) -> Complex64 {
        self.amplitudes[(m + (self.n_particles / 2) as i64) as usize]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Hermitian operator on the `(N+1)`-dimensional Dicke space, stored dense and
/// row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveOperator {
    n_particles: usize,
    matrix: Vec<Complex64>,
    is_tridiagonal: bool,
}

impl CollectiveOperator {
    /// Validates Hermiticity and, when flagged, the tridiagonal pattern.
    pub fn new(n_particles: usize, matrix: Vec<Complex64>, is_tridiagonal: bool) -> Result<Self> {
        check_particle_number(n_particles)?;
        let dim = n_particles + 1;
        if matrix.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: matrix.len(),
            });
        }
        let op = Self {
            n_particles,
            matrix,
            is_tridiagonal,
        };
        let residue = op.hermitian_residue();
        if residue > HERMITIAN_TOL {
            return Err(Error::NonHermitian { residue });
        }
        if is_tridiagonal && !op.has_tridiagonal_pattern() {
            return Err(Error::NotTridiagonal);
        }
        Ok(op)
    }

    /// Real symmetric tridiagonal operator from its diagonal and off-diagonal.
    pub fn real_tridiagonal(n_particles: usize, diag: &[f64], off: &[f64]) -> Result<Self> {
        check_particle_number(n_particles)?;
        let dim = n_particles + 1;
        if diag.len() != dim || off.len() != dim - 1 {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: diag.len(),
            });
        }
        let mut matrix = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            matrix[i * dim + i] = Complex64::new(diag[i], 0.0);
        }
        for i in 0..dim - 1 {
            matrix[i * dim + i + 1] = Complex64::new(off[i], 0.0);
            matrix[(i + 1) * dim + i] = Complex64::new(off[i], 0.0);
        }
        Ok(Self {
            n_particles,
            matrix,
            is_tridiagonal: true,
        })
    }

    pub fn identity(n_particles: usize) -> Result<Self> {
        let dim = n_particles + 1;
        Self::real_tridiagonal(n_particles, &vec![1.0; dim], &vec![0.0; dim - 1])
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn dim(&self) -> usize {
        self.n_particles + 1
    }

    pub fn is_tridiagonal(&self) -> bool {
        self.is_tridiagonal
    }

    pub fn matrix(&self) -> &[Complex64] {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[row * self.dim() + col]
    }

    pub fn hermitian_residue(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                let d = self.get(i, j) - self.get(j, i).conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    fn has_tridiagonal_pattern(&self) -> bool {
        let dim = self.dim();
        (0..dim).all(|i| {
            (0..dim).all(|j| i.abs_diff(j) <= 1 || self.get(i, j) == Complex64::new(0.0, 0.0))
        })
    }

    /// Diagonal and first off-diagonal when the operator is real tridiagonal.
    pub fn real_tridiagonal_parts(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        if !self.is_tridiagonal {
            return Err(Error::NotTridiagonal);
        }
        let dim = self.dim();
        let mut diag = Vec::with_capacity(dim);
        let mut off = Vec::with_capacity(dim - 1);
        for i in 0..dim {
            let d = self.get(i, i);
            if d.im != 0.0 {
                return Err(Error::NotTridiagonal);
            }
            diag.push(d.re);
            if i + 1 < dim {
                let e = self.get(i, i + 1);
                if e.im != 0.0 {
                    return Err(Error::NotTridiagonal);
                }
                off.push(e.re);
            }
        }
        Ok((diag, off))
    }

    /// `op |ψ⟩` as raw amplitudes; O(N) for tridiagonal operators.
    pub fn apply(&self, amplitudes: &[Complex64]) -> Result<Vec<Complex64>> {
        let dim = self.dim();
        if amplitudes.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: amplitudes.len(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (i, slot) in out.iter_mut().enumerate() {
            let (lo, hi) = if self.is_tridiagonal {
                (i.saturating_sub(1), (i + 2).min(dim))
            } else {
                (0, dim)
            };
            *slot = (lo..hi).map(|j| self.get(i, j) * amplitudes[j]).sum();
        }
        Ok(out)
    }

    /// Matrix product; the result is not assumed Hermitian.
    pub fn matmul(&self, other: &CollectiveOperator) -> Result<Vec<Complex64>> {
        self.check_same_dim(other)?;
        let dim = self.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for k in 0..dim {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..dim {
                    out[i * dim + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// `A·B + B·A`, Hermitian when both factors are.
    pub fn anticommutator(&self, other: &CollectiveOperator) -> Result<CollectiveOperator> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        let matrix: Vec<Complex64> = ab.iter().zip(&ba).map(|(x, y)| x + y).collect();
        CollectiveOperator::new(self.n_particles, matrix, false)
    }

    /// `A²`.
    pub fn square(&self) -> Result<CollectiveOperator> {
        CollectiveOperator::new(self.n_particles, self.matmul(self)?, false)
    }

    /// `α A + β B`.
    pub fn linear_combination(
        &self,
        alpha: f64,
        other: &CollectiveOperator,
        beta: f64,
    ) -> Result<CollectiveOperator> {
        self.check_same_dim(other)?;
        let matrix = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .map(|(a, b)| a * alpha + b * beta)
            .collect();
        Ok(CollectiveOperator {
            n_particles: self.n_particles,
            matrix,
            is_tridiagonal: self.is_tridiagonal && other.is_tridiagonal,
        })
    }

    fn check_same_dim(&self, other: &CollectiveOperator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

/// `(Ĵx, Ĵy, Ĵz)` for `N` particles, spin `j = N/2`.
pub fn build_spin_operators(
    n_particles: usize,
) -> Result<(CollectiveOperator, CollectiveOperator, CollectiveOperator)> {
    check_particle_number(n_particles)?;
    let dim = n_particles + 1;
    let j = n_particles as f64 / 2.0;
    let zero = Complex64::new(0.0, 0.0);
    let mut jx = vec![zero; dim * dim];
    let mut jy = vec![zero; dim * dim];
    let mut jz = vec![zero; dim * dim];
    for i in 0..dim {
        let m = m_of(n_particles, i);
        jz[i * dim + i] = Complex64::new(m, 0.0);
        if i + 1 < dim {
            let half = ladder(j, m) / 2.0;
            // row i+1, column i holds <m+1|.|m>
            jx[(i + 1) * dim + i] = Complex64::new(half, 0.0);
            jx[i * dim + i + 1] = Complex64::new(half, 0.0);
            jy[(i + 1) * dim + i] = Complex64::new(0.0, -half);
            jy[i * dim + i + 1] = Complex64::new(0.0, half);
        }
    }
    let op = |matrix| CollectiveOperator {
        n_particles,
        matrix,
        is_tridiagonal: true,
    };
    Ok((op(jx), op(jy), op(jz)))
}

/// `|θ, φ⟩ ∝ (â† cos(θ/2) + b̂† e^{iφ} sin(θ/2))^N |0⟩`, mean spin along
/// `(sinθ cosφ, sinθ sinφ, cosθ)`.
///
/// `φ = π` is accepted alongside `[−π, π)` since it names the `−x` pole.
pub fn coherent_state(n_particles: usize, theta: f64, phi: f64) -> Result<StateVector> {
    check_particle_number(n_particles)?;
    if !(0.0..=math::PI).contains(&theta) {
        return Err(Error::InvalidParameter {
            name: "theta",
            value: theta,
            reason: "polar angle must lie in [0, π]",
        });
    }
    if !(-math::PI..=math::PI).contains(&phi) {
        return Err(Error::InvalidParameter {
            name: "phi",
            value: phi,
            reason: "azimuth must lie in [-π, π]",
        });
    }
    let n = n_particles as f64;
    let (c, s) = (math::cos(theta / 2.0), math::sin(theta / 2.0));
    let ln_n_fact = math::ln_gamma(n + 1.0);
    let amplitudes = (0..=n_particles)
        .map(|i| {
            let n_a = i;
            let n_b = n_particles - i;
            let weight = if (c == 0.0 && n_a > 0) || (s == 0.0 && n_b > 0) {
                0.0
            } else {
                let mut ln_w = 0.5
                    * (ln_n_fact
                        - math::ln_gamma(n_a as f64 + 1.0)
                        - math::ln_gamma(n_b as f64 + 1.0));
                if n_a > 0 {
                    ln_w += n_a as f64 * math::ln(c);
                }
                if n_b > 0 {
                    ln_w += n_b as f64 * math::ln(s);
                }
                math::exp(ln_w)
            };
            Complex64::from_polar(weight, n_b as f64 * phi)
        })
        .collect();
    Ok(StateVector {
        n_particles,
        amplitudes,
    })
}

/// `⟨ψ|op|ψ⟩`. An imaginary part above `1e−10·max(1, |⟨op⟩|)` means the
/// operator was not Hermitian.
pub fn expectation(op: &CollectiveOperator, psi: &StateVector) -> Result<f64> {
    let image = op.apply(&psi.amplitudes)?;
    let value: Complex64 = psi
        .amplitudes
        .iter()
        .zip(&image)
        .map(|(a, b)| a.conj() * b)
        .sum();
    let scale = value.re.abs().max(1.0);
    if value.im.abs() > RESIDUE_TOL * scale {
        return Err(Error::NonHermitian {
            residue: value.im.abs(),
        });
    }
    Ok(value.re)
}

/// Raw first and second moments needed by the witnesses, computed with O(N)
/// ladder arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinMoments {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
    pub jy2: f64,
    pub jz2: f64,
    /// `⟨{Ĵy, Ĵz}⟩`.
    pub anti_yz: f64,
}

pub fn spin_moments(psi: &StateVector) -> SpinMoments {
    let n_particles = psi.n_particles;
    let j = n_particles as f64 / 2.0;
    let c = &psi.amplitudes;
    let dim = c.len();
    let zero = Complex64::new(0.0, 0.0);

    // Ĵ+ψ and Ĵ−ψ in the same index layout.
    let mut plus = vec![zero; dim];
    let mut minus = vec![zero; dim];
    for i in 0..dim - 1 {
        let k = ladder(j, m_of(n_particles, i));
        plus[i + 1] = c[i] * k;
        minus[i] = c[i + 1] * k;
    }
    let jx_psi: Vec<Complex64> = plus
        .iter()
        .zip(&minus)
        .map(|(p, q)| (p + q) * 0.5)
        .collect();
    let jy_psi: Vec<Complex64> = plus
        .iter()
        .zip(&minus)
        .map(|(p, q)| (p - q) * Complex64::new(0.0, -0.5))
        .collect();

    let mut jx = zero;
    let mut jy = zero;
    let mut jz = 0.0;
    let mut jy2 = 0.0;
    let mut jz2 = 0.0;
    let mut cross = zero;
    for i in 0..dim {
        let m = m_of(n_particles, i);
        jx += c[i].conj() * jx_psi[i];
        jy += c[i].conj() * jy_psi[i];
        jz += m * c[i].norm_sqr();
        jz2 += m * m * c[i].norm_sqr();
        jy2 += jy_psi[i].norm_sqr();
        cross += jy_psi[i].conj() * c[i] * m;
    }
    SpinMoments {
        jx: jx.re,
        jy: jy.re,
        jz,
        jy2,
        jz2,
        anti_yz: 2.0 * cross.re,
    }
}

/// Symmetric `y`–`z` block of the covariance matrix, normalized as
/// `γ_ij = 2⟨{Ĵi, Ĵj}⟩/N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceYZ {
    pub gzz: f64,
    pub gyy: f64,
    pub gyz: f64,
}

impl CovarianceYZ {
    pub fn new(gzz: f64, gyy: f64, gyz: f64) -> Result<Self> {
        for (name, value) in [("gzz", gzz), ("gyy", gyy)] {
            if !(value >= 0.0) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "diagonal covariance entries must be non-negative",
                });
            }
        }
        if !gyz.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gyz",
                value: gyz,
                reason: "off-diagonal covariance must be finite",
            });
        }
        Ok(Self { gzz, gyy, gyz })
    }

    pub fn identity() -> Self {
        Self {
            gzz: 1.0,
            gyy: 1.0,
            gyz: 0.0,
        }
    }

    pub fn trace(&self) -> f64 {
        self.gzz + self.gyy
    }

    pub fn det(&self) -> f64 {
        self.gzz * self.gyy - self.gyz * self.gyz
    }

    /// `(λ+, λ−)`, see [`lambda_pm`].
    pub fn lambda_pm(&self) -> (f64, f64) {
        lambda_pm(self)
    }
}

/// Eigenvalues `λ± = ½[gzz + gyy ± √((gzz − gyy)² + (2gyz)²)]`, `λ+ ≥ λ−`.
pub fn lambda_pm(gamma: &CovarianceYZ) -> (f64, f64) {
    let mean = 0.5 * (gamma.gzz + gamma.gyy);
    let radius = 0.5 * math::hypot(gamma.gzz - gamma.gyy, 2.0 * gamma.gyz);
    let plus = mean + radius;
    // the smaller root from the product avoids cancellation when det ≪ tr²
    let minus = if plus > 0.0 {
        gamma.det() / plus
    } else {
        mean - radius
    };
    (plus, minus)
}

/// Covariance of a state whose mean spin lies on the `x` axis.
///
/// Fails with [`Error::NonzeroFirstMoments`] when `|⟨Ĵy⟩|` or `|⟨Ĵz⟩|`
/// exceeds `1e−8·N`: the raw second moments would then not be a covariance.
pub fn covariance_yz(psi: &StateVector) -> Result<CovarianceYZ> {
    covariance_from_moments(psi.n_particles, &spin_moments(psi))
}

pub fn covariance_from_moments(n_particles: usize, m: &SpinMoments) -> Result<CovarianceYZ> {
    let n = n_particles as f64;
    let bound = 1e-8 * n;
    if m.jy.abs() > bound || m.jz.abs() > bound {
        return Err(Error::NonzeroFirstMoments { jy: m.jy, jz: m.jz });
    }
    Ok(CovarianceYZ {
        gzz: 4.0 * m.jz2 / n,
        gyy: 4.0 * m.jy2 / n,
        gyz: 2.0 * m.anti_yz / n,
    })
}

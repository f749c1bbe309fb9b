//! Exact diagonalization of `H = χĴz² − ΩĴx` and spectral propagation.
//!
//! `H` commutes with the reflection `m → −m`, so the solver splits the Dicke
//! space into even and odd sectors and diagonalizes each tridiagonal block
//! separately. Both sectors keep the tridiagonal shape.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::spin::{self, ladder, CollectiveOperator, StateVector};
use crate::tridiag;
use crate::witness::WitnessRecord;

/// `χĴz² − ΩĴx` as a real tridiagonal operator.
pub fn hamiltonian(params: &ModelParams) -> CollectiveOperator {
    let n = params.n_particles();
    let j = n as f64 / 2.0;
    let diag: Vec<f64> = (0..=n)
        .map(|i| {
            let m = i as f64 - j;
            params.chi() * m * m
        })
        .collect();
    let off: Vec<f64> = (0..n)
        .map(|i| -0.5 * params.omega() * ladder(j, i as f64 - j))
        .collect();
    CollectiveOperator::real_tridiagonal(n, &diag, &off)
        .expect("ModelParams guarantees a valid particle number")
}

/// Eigenpairs of a real symmetric operator, eigenvalues ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    n_particles: usize,
    eigenvalues: Vec<f64>,
    /// Column `k` of the eigenvector matrix, stored contiguously.
    eigenvectors: Vec<Vec<f64>>,
}

impl Spectrum {
    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, k: usize) -> &[f64] {
        &self.eigenvectors[k]
    }

    pub fn eigenvectors(&self) -> &[Vec<f64>] {
        &self.eigenvectors
    }
}

fn is_reflection_symmetric(diag: &[f64], off: &[f64]) -> bool {
    let n = diag.len();
    (0..n).all(|i| diag[i] == diag[n - 1 - i]) && (0..n - 1).all(|i| off[i] == off[n - 2 - i])
}

/// Full spectrum of a real symmetric tridiagonal operator.
pub fn eigendecompose(h: &CollectiveOperator) -> Result<Spectrum> {
    let (diag, off) = h.real_tridiagonal_parts()?;
    let dim = diag.len();
    let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(dim);

    if dim % 2 == 1 && dim > 1 && is_reflection_symmetric(&diag, &off) {
        let c = dim / 2;
        let r = core::f64::consts::FRAC_1_SQRT_2;

        // even sector: (|i⟩ + |dim−1−i⟩)/√2 for i < c, then |c⟩
        let even_diag = diag[..=c].to_vec();
        let mut even_off = off[..c].to_vec();
        even_off[c - 1] *= core::f64::consts::SQRT_2;
        let (values, vectors) = tridiag::eigensystem(&even_diag, &even_off)?;
        for (value, v) in values.into_iter().zip(vectors) {
            let mut full = vec![0.0; dim];
            for i in 0..c {
                full[i] = v[i] * r;
                full[dim - 1 - i] = v[i] * r;
            }
            full[c] = v[c];
            pairs.push((value, full));
        }

        // odd sector: (|i⟩ − |dim−1−i⟩)/√2 for i < c
        let (values, vectors) = tridiag::eigensystem(&diag[..c], &off[..c - 1])?;
        for (value, v) in values.into_iter().zip(vectors) {
            let mut full = vec![0.0; dim];
            for i in 0..c {
                full[i] = v[i] * r;
                full[dim - 1 - i] = -v[i] * r;
            }
            pairs.push((value, full));
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    } else {
        let (values, vectors) = tridiag::eigensystem(&diag, &off)?;
        pairs.extend(values.into_iter().zip(vectors));
    }

    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    Ok(Spectrum {
        n_particles: h.n_particles(),
        eigenvalues,
        eigenvectors,
    })
}

/// Spectral propagator for a fixed initial state: overlaps with the
/// eigenvectors are computed once, each time then costs O(N²).
#[derive(Debug, Clone)]
pub struct Propagator<'a> {
    spectrum: &'a Spectrum,
    initial: StateVector,
    overlaps: Vec<Complex64>,
}

impl<'a> Propagator<'a> {
    pub fn new(spectrum: &'a Spectrum, psi0: &StateVector) -> Result<Self> {
        if psi0.dim() != spectrum.dim() {
            return Err(Error::DimensionMismatch {
                expected: spectrum.dim(),
                found: psi0.dim(),
            });
        }
        let overlaps = spectrum
            .eigenvectors
            .iter()
            .map(|v| v.iter().zip(psi0.amplitudes()).map(|(a, c)| c * a).sum())
            .collect();
        Ok(Self {
            spectrum,
            initial: psi0.clone(),
            overlaps,
        })
    }

    pub fn state_at(&self, t: f64) -> StateVector {
        if t == 0.0 {
            return self.initial.clone();
        }
        let dim = self.spectrum.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        for (k, v) in self.spectrum.eigenvectors.iter().enumerate() {
            let w =
                self.overlaps[k] * Complex64::from_polar(1.0, -self.spectrum.eigenvalues[k] * t);
            if w == Complex64::new(0.0, 0.0) {
                continue;
            }
            out.iter_mut().zip(v).for_each(|(o, a)| *o += w * a);
        }
        StateVector::from_unitary_image(self.spectrum.n_particles, out)
    }

    /// Witness record of the evolved state at `t`.
    pub fn record_at(&self, t: f64) -> Result<WitnessRecord> {
        let psi = self.state_at(t);
        witness_record(t, &psi)
    }
}

/// `|ψ(t)⟩ = Σ_k e^{−iE_k t}⟨v_k|ψ0⟩|v_k⟩`.
pub fn evolve(spectrum: &Spectrum, psi0: &StateVector, t: f64) -> Result<StateVector> {
    Ok(Propagator::new(spectrum, psi0)?.state_at(t))
}

pub fn witness_record(t: f64, psi: &StateVector) -> Result<WitnessRecord> {
    let moments = spin::spin_moments(psi);
    let gamma = spin::covariance_from_moments(psi.n_particles(), &moments)?;
    WitnessRecord::new(t, moments.jx, gamma, psi.n_particles())
}

/// One witness record per requested time.
pub fn trajectory(
    params: &ModelParams,
    psi0: &StateVector,
    times: &[f64],
) -> Result<Vec<WitnessRecord>> {
    if let Some(&t) = times.iter().find(|t| !(**t >= 0.0)) {
        return Err(Error::InvalidParameter {
            name: "t",
            value: t,
            reason: "times must be non-negative",
        });
    }
    if psi0.n_particles() != params.n_particles() {
        return Err(Error::DimensionMismatch {
            expected: params.n_particles() + 1,
            found: psi0.dim(),
        });
    }
    let spectrum = eigendecompose(&hamiltonian(params))?;
    let propagator = Propagator::new(&spectrum, psi0)?;
    times.iter().map(|&t| propagator.record_at(t)).collect()
}

/// `⟨ψ|H|ψ⟩`.
pub fn energy(h: &CollectiveOperator, psi: &StateVector) -> Result<f64> {
    spin::expectation(h, psi)
}

/// Uniform grid `0, dt, …, t_max` with `steps` intervals.
pub fn uniform_times(t_max: f64, steps: usize) -> Vec<f64> {
    (0..=steps)
        .map(|i| t_max * i as f64 / steps as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;
    use crate::spin::{build_spin_operators, coherent_state, expectation};

    fn reconstruct(spec: &Spectrum) -> Vec<f64> {
        let dim = spec.dim();
        let mut out = vec![0.0; dim * dim];
        for (k, v) in spec.eigenvectors().iter().enumerate() {
            let e = spec.eigenvalues()[k];
            for i in 0..dim {
                for j in 0..dim {
                    out[i * dim + j] += e * v[i] * v[j];
                }
            }
        }
        out
    }

    #[test]
    fn twisting_hamiltonian_n2() {
        let h = hamiltonian(&ModelParams::new(2, 1.0, 0.0).unwrap());
        let (d, e) = h.real_tridiagonal_parts().unwrap();
        assert_eq!(d, vec![1.0, 0.0, 1.0]);
        assert_eq!(e, vec![0.0, 0.0]);
        let spec = eigendecompose(&h).unwrap();
        assert_eq!(spec.eigenvalues(), &[0.0, 1.0, 1.0]);
    }

    #[test]
    fn rabi_spectrum_n2() {
        let h = hamiltonian(&ModelParams::new(2, 0.0, 1.0).unwrap());
        let spec = eigendecompose(&h).unwrap();
        for (e, exact) in spec.eigenvalues().iter().zip([-1.0, 0.0, 1.0]) {
            assert!((e - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn structure_at_n200() {
        let h = hamiltonian(&ModelParams::from_lambda(200, 2.0).unwrap());
        assert!(h.is_tridiagonal());
        assert!(h.hermitian_residue() == 0.0);
    }

    #[test]
    fn reconstruction_n200() {
        let h = hamiltonian(&ModelParams::from_lambda(200, 0.5).unwrap());
        let spec = eigendecompose(&h).unwrap();
        let dim = spec.dim();
        let back = reconstruct(&spec);
        let worst = (0..dim * dim)
            .map(|idx| (back[idx] - h.matrix()[idx].re).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst}");
        for (k, u) in spec.eigenvectors().iter().enumerate() {
            for (l, v) in spec.eigenvectors().iter().enumerate().skip(k) {
                let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
                let expected = if k == l { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn residuals_in_self_trapping_regime() {
        let h = hamiltonian(&ModelParams::from_lambda(200, 50.0).unwrap());
        let spec = eigendecompose(&h).unwrap();
        let (d, e) = h.real_tridiagonal_parts().unwrap();
        let scale = tridiag::norm_bound(&d, &e);
        for (k, v) in spec.eigenvectors().iter().enumerate() {
            let lambda = spec.eigenvalues()[k];
            let res = (0..v.len())
                .map(|i| {
                    let mut acc = (d[i] - lambda) * v[i];
                    if i > 0 {
                        acc += e[i - 1] * v[i - 1];
                    }
                    if i + 1 < v.len() {
                        acc += e[i] * v[i + 1];
                    }
                    acc.abs()
                })
                .fold(0.0, f64::max);
            assert!(res < 1e-8 * scale);
        }
    }

    #[test]
    fn twisting_spectrum_is_chi_m_squared() {
        let h = hamiltonian(&ModelParams::one_axis_twisting(200).unwrap());
        let spec = eigendecompose(&h).unwrap();
        let mut exact: Vec<f64> = (-100i64..=100).map(|m| (m * m) as f64).collect();
        exact.sort_by(f64::total_cmp);
        assert_eq!(spec.eigenvalues(), exact.as_slice());
    }

    #[test]
    fn evolution_is_unitary_and_exact_at_zero() {
        let params = ModelParams::from_lambda(60, 2.0).unwrap();
        let spec = eigendecompose(&hamiltonian(&params)).unwrap();
        let psi0 = coherent_state(60, math::FRAC_PI_2, math::PI).unwrap();
        assert_eq!(evolve(&spec, &psi0, 0.0).unwrap(), psi0);
        for t in [0.1, 1.0, 7.3, 100.0] {
            let psi = evolve(&spec, &psi0, t).unwrap();
            assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn energy_is_conserved() {
        let params = ModelParams::from_lambda(80, 1.3).unwrap();
        let h = hamiltonian(&params);
        let spec = eigendecompose(&h).unwrap();
        let psi0 = coherent_state(80, 1.1, 2.0).unwrap();
        let e0 = energy(&h, &psi0).unwrap();
        for t in [0.5, 3.0, 20.0] {
            let e = energy(&h, &evolve(&spec, &psi0, t).unwrap()).unwrap();
            assert!((e - e0).abs() < 1e-10 * e0.abs().max(1.0));
        }
    }

    #[test]
    fn reflection_commutes_with_hamiltonian() {
        let h = hamiltonian(&ModelParams::from_lambda(40, 1.7).unwrap());
        let dim = h.dim();
        let worst = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .map(|(i, j)| (h.get(dim - 1 - i, dim - 1 - j) - h.get(i, j)).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-10);
    }

    #[test]
    fn twisting_mean_spin_closed_form() {
        let params = ModelParams::one_axis_twisting(200).unwrap();
        let spec = eigendecompose(&hamiltonian(&params)).unwrap();
        let psi0 = coherent_state(200, math::FRAC_PI_2, 0.0).unwrap();
        let (jx, _, _) = build_spin_operators(200).unwrap();
        for t in [0.0, 0.01, 0.05, 0.2] {
            let value = expectation(&jx, &evolve(&spec, &psi0, t).unwrap()).unwrap();
            let exact = 100.0 * math::signed_pow(math::cos(t), 199);
            assert!((value - exact).abs() < 1e-8);
        }
    }

    #[test]
    fn trajectory_starts_at_shot_noise() {
        let params = ModelParams::from_lambda(100, 0.5).unwrap();
        let psi0 = coherent_state(100, math::FRAC_PI_2, math::PI).unwrap();
        let records = trajectory(&params, &psi0, &[0.0, 0.5]).unwrap();
        assert!((records[0].xi2_opt - 1.0).abs() < 1e-12);
        assert!((records[0].zeta2_opt - 1.0).abs() < 1e-12);
        assert!(trajectory(&params, &psi0, &[-1.0]).is_err());
    }
}

use crate::error::{Error, Result};

/// Physical parameters of `H = χ Jz² − Ω Jx`.
///
/// `Λ = Nχ/Ω` is derived, never stored, so it cannot drift out of sync.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n_particles: usize,
    chi: f64,
    omega: f64,
}

impl ModelParams {
    pub fn new(n_particles: usize, chi: f64, omega: f64) -> Result<Self> {
        check_particle_number(n_particles)?;
        if !chi.is_finite() || chi < 0.0 {
            return Err(Error::InvalidParameter {
                name: "chi",
                value: chi,
                reason: "interaction rate must be finite and non-negative",
            });
        }
        if !omega.is_finite() || omega < 0.0 {
            return Err(Error::InvalidParameter {
                name: "omega",
                value: omega,
                reason: "coupling rate must be finite and non-negative",
            });
        }
        Ok(Self {
            n_particles,
            chi,
            omega,
        })
    }

    /// Ω = 1 units: time is measured in 1/Ω and χ = Λ/N.
    pub fn from_lambda(n_particles: usize, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "interaction over tunneling must be positive",
            });
        }
        check_particle_number(n_particles)?;
        Self::new(n_particles, lambda / n_particles as f64, 1.0)
    }

    /// The one-axis-twisting limit Ω = 0 with χ = 1.
    pub fn one_axis_twisting(n_particles: usize) -> Result<Self> {
        Self::new(n_particles, 1.0, 0.0)
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn chi(&self) -> f64 {
        self.chi
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    /// `Λ = Nχ/Ω`, undefined in the twisting limit.
    pub fn lambda(&self) -> Option<f64> {
        (self.omega > 0.0).then(|| self.n_particles as f64 * self.chi / self.omega)
    }
}

pub(crate) fn check_particle_number(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        Err(Error::InvalidParticleNumber(n))
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_times_omega_is_n_chi() {
        let p = ModelParams::new(200, 0.01, 0.5).unwrap();
        let lambda = p.lambda().unwrap();
        assert!((lambda * p.omega() - 200.0 * p.chi()).abs() < 1e-12);
    }

    #[test]
    fn from_lambda_uses_unit_coupling() {
        let p = ModelParams::from_lambda(200, 2.0).unwrap();
        assert_eq!(p.omega(), 1.0);
        assert!((p.chi() - 0.01).abs() < 1e-15);
        assert!((p.lambda().unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_odd_or_small_n() {
        assert_eq!(
            ModelParams::new(3, 1.0, 1.0),
            Err(Error::InvalidParticleNumber(3))
        );
        assert_eq!(
            ModelParams::new(0, 1.0, 1.0),
            Err(Error::InvalidParticleNumber(0))
        );
        assert!(ModelParams::from_lambda(10, 0.0).is_err());
        assert!(ModelParams::from_lambda(10, -1.0).is_err());
        assert!(ModelParams::new(10, -0.1, 1.0).is_err());
    }

    #[test]
    fn twisting_limit_has_no_lambda() {
        let p = ModelParams::one_axis_twisting(50).unwrap();
        assert_eq!(p.lambda(), None);
    }
}

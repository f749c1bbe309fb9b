use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("particle number must be even and at least 2, got {0}")]
    InvalidParticleNumber(usize),

    #[error("parameter `{name}` = {value} is out of range: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("state is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("operator is not Hermitian (residue {residue:e})")]
    NonHermitian { residue: f64 },

    #[error("operator must be real symmetric tridiagonal")]
    NotTridiagonal,

    #[error("first moments in the y-z plane do not vanish (<Jy> = {jy:e}, <Jz> = {jz:e})")]
    NonzeroFirstMoments { jy: f64, jz: f64 },

    #[error("eigensolver did not converge for eigenvalue {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("witness undefined: {0}")]
    UndefinedWitness(&'static str),

    #[error("interaction ratio {lambda} is within the critical guard of Λ = 1")]
    CriticalPoint { lambda: f64 },

    #[error("regime mismatch: {0}")]
    RegimeMismatch(&'static str),

    #[error("Gaussian packet is not normalizable (A = {big_a})")]
    NonNormalizable { big_a: f64 },

    #[error("need at least {needed} samples inside the fit window, found {found}")]
    InsufficientSamples { needed: usize, found: usize },

    #[error("least-squares design matrix is ill-conditioned (condition ≈ {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("grid of {found} points along {axis} is under-resolved, need at least {needed}")]
    UnderResolvedGrid {
        axis: &'static str,
        needed: usize,
        found: usize,
    },

    #[error("Clebsch-Gordan vector for k = {k}, q = {q} lost orthonormality ({deviation:e})")]
    CouplingInstability { k: usize, q: i64, deviation: f64 },

    #[error("Wigner function has imaginary residue {residue:e}")]
    ComplexWigner { residue: f64 },

    #[error("no separatrix through the π fixed point for Λ = {lambda} (needs Λ > 1)")]
    NoSeparatrix { lambda: f64 },

    #[error("wave function carries {mass:e} of its weight near the phase boundary")]
    BoundaryMass { mass: f64 },

    #[error("adaptive quadrature did not reach tolerance (estimated error {estimate:e})")]
    QuadratureFailure { estimate: f64 },
}

//! Float helpers over `libm`, so the crate stays `no_std`.

#[allow(unused_imports)]
pub use core::f64::consts::{FRAC_PI_2, PI, TAU};

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn sinh(x: f64) -> f64 {
    libm::sinh(x)
}

#[inline]
pub fn cosh(x: f64) -> f64 {
    libm::cosh(x)
}

#[inline]
pub fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

#[inline]
pub fn asin(x: f64) -> f64 {
    libm::asin(x)
}

/// `base^exponent` for integer exponents, through `exp(e·ln|base|)` with the sign
/// tracked separately. Stays accurate for exponents in the hundreds.
pub fn signed_pow(base: f64, exponent: u32) -> f64 {
    if exponent == 0 {
        return 1.0;
    }
    if base == 0.0 {
        return 0.0;
    }
    let magnitude = exp(exponent as f64 * ln(base.abs()));
    if base < 0.0 && exponent % 2 == 1 {
        -magnitude
    } else {
        magnitude
    }
}

/// Wraps an angle into `[-π, π)`.
pub fn wrap_angle(phi: f64) -> f64 {
    let mut x = libm::fmod(phi + PI, TAU);
    if x < 0.0 {
        x += TAU;
    }
    x - PI
}

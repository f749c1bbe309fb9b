//! Adaptive Gauss–Kronrod (7/15) quadrature for complex integrands, with a
//! nested 2-D variant over rectangles.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights on the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_segments: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-12,
            rel: 1e-8,
            max_segments: 2000,
        }
    }
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Self {
            rel,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

struct Segment {
    lo: f64,
    hi: f64,
    value: Complex64,
    error: f64,
}

fn kronrod<F: FnMut(f64) -> Complex64>(f: &mut F, lo: f64, hi: f64) -> Segment {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let f_center = f(center);
    let mut kronrod = f_center * WGK[7];
    let mut gauss = f_center * WG[3];
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += pair * WGK[i];
        if i % 2 == 1 {
            gauss += pair * WG[i / 2];
        }
    }
    Segment {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).norm(),
    }
}

/// `∫_lo^hi f(x) dx` by global adaptive bisection.
pub fn integrate<F: FnMut(f64) -> Complex64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: Tolerance,
) -> Result<Estimate> {
    let mut segments: Vec<Segment> = Vec::new();
    segments.push(kronrod(&mut f, lo, hi));
    let mut evaluations = 15;
    loop {
        let value: Complex64 = segments.iter().map(|s| s.value).sum();
        let error: f64 = segments.iter().map(|s| s.error).sum();
        if error <= tol.abs.max(tol.rel * value.norm()) {
            return Ok(Estimate {
                value,
                error,
                evaluations,
            });
        }
        if segments.len() >= tol.max_segments {
            return Err(Error::QuadratureFailure { estimate: error });
        }
        let worst = segments
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let seg = segments.swap_remove(worst);
        let mid = 0.5 * (seg.lo + seg.hi);
        if mid <= seg.lo || mid >= seg.hi {
            return Err(Error::QuadratureFailure { estimate: error });
        }
        segments.push(kronrod(&mut f, seg.lo, mid));
        segments.push(kronrod(&mut f, mid, seg.hi));
        evaluations += 30;
    }
}

/// Real-valued convenience wrapper.
pub fn integrate_real<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: Tolerance,
) -> Result<f64> {
    integrate(|x| Complex64::new(f(x), 0.0), lo, hi, tol).map(|e| e.value.re)
}

/// `∫∫ f(x, y) dy dx` over a rectangle, as an adaptive integral over `x` of
/// adaptive integrals over `y`.
pub fn integrate_2d<F: FnMut(f64, f64) -> Complex64>(
    mut f: F,
    x_range: (f64, f64),
    y_range: (f64, f64),
    tol: Tolerance,
) -> Result<Estimate> {
    let inner_tol = Tolerance {
        abs: tol.abs * 1e-2,
        rel: tol.rel * 1e-1,
        ..tol
    };
    let mut inner_failure: Option<Error> = None;
    let mut inner_error = 0.0f64;
    let mut evaluations = 0;
    let outer = integrate(
        |x| {
            if inner_failure.is_some() {
                return Complex64::new(0.0, 0.0);
            }
            match integrate(|y| f(x, y), y_range.0, y_range.1, inner_tol) {
                Ok(e) => {
                    inner_error = inner_error.max(e.error);
                    evaluations += e.evaluations;
                    e.value
                }
                Err(err) => {
                    inner_failure = Some(err);
                    Complex64::new(0.0, 0.0)
                }
            }
        },
        x_range.0,
        x_range.1,
        tol,
    );
    if let Some(err) = inner_failure {
        return Err(err);
    }
    let outer = outer?;
    Ok(Estimate {
        value: outer.value,
        error: outer.error + inner_error * (x_range.1 - x_range.0).abs(),
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;

    #[test]
    fn polynomial_is_exact() {
        let e =
            integrate_real(|x| x * x * x * x - 3.0 * x, -1.0, 2.0, Tolerance::default()).unwrap();
        assert!((e - (33.0 / 5.0 - 4.5)).abs() < 1e-13);
    }

    #[test]
    fn narrow_gaussian() {
        let a = 400.0;
        let e = integrate_real(
            |x| math::exp(-a * x * x),
            -math::PI,
            math::PI,
            Tolerance::default(),
        )
        .unwrap();
        assert!((e - math::sqrt(math::PI / a)).abs() < 1e-10);
    }

    #[test]
    fn oscillatory_complex() {
        // ∫_0^π e^{ikx} dx
        let k = 7.0;
        let e = integrate(
            |x| Complex64::new(0.0, k * x).exp(),
            0.0,
            math::PI,
            Tolerance::relative(1e-12),
        )
        .unwrap();
        let exact = (Complex64::new(0.0, k * math::PI).exp() - 1.0) / Complex64::new(0.0, k);
        assert!((e.value - exact).norm() < 1e-11);
    }

    #[test]
    fn gaussian_double_integral() {
        // ∫∫ e^{−x² − y² − (x−y)²} = π/√3
        let e = integrate_2d(
            |x, y| Complex64::new(math::exp(-x * x - y * y - (x - y) * (x - y)), 0.0),
            (-8.0, 8.0),
            (-8.0, 8.0),
            Tolerance::relative(1e-10),
        )
        .unwrap();
        assert!((e.value.re - math::PI / math::sqrt(3.0)).abs() < 1e-9);
    }

    #[test]
    fn segment_budget_reported() {
        let tol = Tolerance {
            abs: 0.0,
            rel: 1e-15,
            max_segments: 4,
        };
        assert!(matches!(
            integrate_real(|x| math::sqrt(x.abs()), -1.0, 1.0, tol),
            Err(Error::QuadratureFailure { .. })
        ));
    }
}

//! Real symmetric tridiagonal eigensolver: implicit-shift QL for the
//! eigenvalues, inverse iteration for the eigenvectors.
//!
//! `off[i]` couples rows `i` and `i + 1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

const MAX_QL_SWEEPS: usize = 60;
const MAX_INVERSE_STEPS: usize = 8;

/// Gershgorin bound on the spectral radius.
pub fn norm_bound(diag: &[f64], off: &[f64]) -> f64 {
    (0..diag.len())
        .map(|i| {
            let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
            let right = if i < off.len() { off[i].abs() } else { 0.0 };
            diag[i].abs() + left + right
        })
        .fold(0.0, f64::max)
}

fn check_shape(diag: &[f64], off: &[f64]) -> Result<()> {
    if diag.is_empty() || off.len() + 1 != diag.len() {
        return Err(Error::DimensionMismatch {
            expected: diag.len().saturating_sub(1),
            found: off.len(),
        });
    }
    Ok(())
}

/// All eigenvalues, ascending.
pub fn eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    check_shape(diag, off)?;
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(Error::NoConvergence {
                    index: l,
                    iterations: sweeps,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = math::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = math::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// LU factors of `T − σ` with partial pivoting (two super-diagonals after
/// row swaps). Tiny pivots are lifted to `ε‖T‖` as inverse iteration needs.
struct ShiftedLu {
    diag: Vec<f64>,
    sup1: Vec<f64>,
    sup2: Vec<f64>,
    mult: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedLu {
    fn new(diag: &[f64], off: &[f64], shift: f64, tiny: f64) -> Self {
        let n = diag.len();
        let mut d: Vec<f64> = diag.iter().map(|x| x - shift).collect();
        let mut sup1: Vec<f64> = off.to_vec();
        sup1.push(0.0);
        let mut sup2 = vec![0.0; n];
        let mut mult = vec![0.0; n];
        let mut swapped = vec![false; n];
        let mut below: Vec<f64> = off.to_vec();
        below.push(0.0);

        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= below[i].abs() {
                if d[i].abs() < tiny {
                    d[i] = tiny;
                }
                let f = below[i] / d[i];
                mult[i] = f;
                d[i + 1] -= f * sup1[i];
            } else {
                swapped[i] = true;
                let f = d[i] / below[i];
                mult[i] = f;
                d[i] = below[i];
                let next = d[i + 1];
                d[i + 1] = sup1[i] - f * next;
                if i + 2 < n {
                    sup2[i] = sup1[i + 1];
                    sup1[i + 1] = -f * sup2[i];
                }
                sup1[i] = next;
            }
        }
        if d[n - 1].abs() < tiny {
            d[n - 1] = tiny;
        }
        Self {
            diag: d,
            sup1,
            sup2,
            mult,
            swapped,
        }
    }

    fn solve(&self, rhs: &mut [f64]) {
        let n = rhs.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                let top = rhs[i];
                rhs[i] = rhs[i + 1];
                rhs[i + 1] = top - self.mult[i] * rhs[i + 1];
            } else {
                rhs[i + 1] -= self.mult[i] * rhs[i];
            }
        }
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            if i + 1 < n {
                acc -= self.sup1[i] * rhs[i + 1];
            }
            if i + 2 < n {
                acc -= self.sup2[i] * rhs[i + 2];
            }
            rhs[i] = acc / self.diag[i];
        }
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = math::sqrt(v.iter().map(|x| x * x).sum());
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

fn residual(diag: &[f64], off: &[f64], lambda: f64, v: &[f64]) -> f64 {
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

/// Deterministic, non-degenerate start vector.
fn start_vector(n: usize, salt: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 1.0 + 0.5 * math::sin(0.7 * (i + 1) as f64 + 1.3 * salt as f64))
        .collect()
}

/// Unit eigenvector for a known eigenvalue, orthogonalized against `against`.
fn inverse_iteration(
    diag: &[f64],
    off: &[f64],
    lambda: f64,
    scale: f64,
    against: &[&[f64]],
    salt: usize,
) -> Result<Vec<f64>> {
    let n = diag.len();
    let tiny = f64::EPSILON * scale.max(f64::MIN_POSITIVE);
    let lu = ShiftedLu::new(diag, off, lambda, tiny);
    let mut v = start_vector(n, salt);
    let tol = 64.0 * f64::EPSILON * scale.max(f64::MIN_POSITIVE) * math::sqrt(n as f64);
    for step in 0..MAX_INVERSE_STEPS {
        for u in against {
            let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u.iter()).for_each(|(x, y)| *x -= dot * y);
        }
        normalize(&mut v);
        lu.solve(&mut v);
        for u in against {
            let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u.iter()).for_each(|(x, y)| *x -= dot * y);
        }
        normalize(&mut v);
        if step >= 1 && residual(diag, off, lambda, &v) <= tol {
            fix_sign(&mut v);
            return Ok(v);
        }
    }
    Err(Error::NoConvergence {
        index: salt,
        iterations: MAX_INVERSE_STEPS,
    })
}

/// Largest-magnitude component positive, so results are reproducible.
fn fix_sign(v: &mut [f64]) {
    let pivot = v
        .iter()
        .copied()
        .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    if pivot < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Unit eigenvector of `T` for the eigenvalue `lambda`, which must be accurate
/// to working precision. Sign: largest component positive.
pub fn eigenvector_for(diag: &[f64], off: &[f64], lambda: f64) -> Result<Vec<f64>> {
    check_shape(diag, off)?;
    let scale = norm_bound(diag, off);
    inverse_iteration(diag, off, lambda, scale, &[], 0)
}

/// Eigenvalues ascending and the matching unit eigenvectors.
///
/// Eigenvalues closer than `1e−3‖T‖` form a cluster; each new vector in a
/// cluster is orthogonalized against the earlier ones.
pub fn eigensystem(diag: &[f64], off: &[f64]) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    check_shape(diag, off)?;
    let n = diag.len();
    if off.iter().all(|&e| e == 0.0) {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| diag[a].total_cmp(&diag[b]));
        let values = order.iter().map(|&i| diag[i]).collect();
        let vectors = order
            .iter()
            .map(|&i| {
                let mut v = vec![0.0; n];
                v[i] = 1.0;
                v
            })
            .collect();
        return Ok((values, vectors));
    }

    let values = eigenvalues(diag, off)?;
    let scale = norm_bound(diag, off);
    let cluster_gap = 1e-3 * scale;
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut cluster_start = 0;
    for k in 0..n {
        if k > 0 && values[k] - values[k - 1] > cluster_gap {
            cluster_start = k;
        }
        let against: Vec<&[f64]> = vectors[cluster_start..k]
            .iter()
            .map(|v| v.as_slice())
            .collect();
        vectors.push(inverse_iteration(diag, off, values[k], scale, &against, k)?);
    }
    Ok((values, vectors))
}

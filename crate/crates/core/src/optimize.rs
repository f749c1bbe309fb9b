//! One-dimensional minimization by golden-section search.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimum of a unimodal `f` on `[lo, hi]`, located to within `tol`.
/// Returns `(x, f(x))`.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let fx = f(x);
    // endpoints of the final bracket can win for monotone f
    [(c, fc), (d, fd)].into_iter().fold(
        (x, fx),
        |best, cand| if cand.1 < best.1 { cand } else { best },
    )
}

/// Global minimum of `f` on `[lo, hi]`: the best of `samples` grid points is
/// refined by golden section inside its neighbouring cells.
pub fn minimize_sampled<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    samples: usize,
    tol: f64,
) -> (f64, f64) {
    let samples = samples.max(3);
    let step = (hi - lo) / (samples - 1) as f64;
    let mut best = (lo, f(lo));
    let mut best_index = 0;
    for i in 1..samples {
        let x = lo + step * i as f64;
        let fx = f(x);
        if fx < best.1 {
            best = (x, fx);
            best_index = i;
        }
    }
    let left = lo + step * best_index.saturating_sub(1) as f64;
    let right = lo + step * (best_index + 1).min(samples - 1) as f64;
    let refined = golden_section(&mut f, left, right, tol);
    if refined.1 < best.1 {
        refined
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math;

    #[test]
    fn parabola_minimum() {
        let (x, fx) = golden_section(|x| (x - 0.3) * (x - 0.3) + 2.0, -1.0, 2.0, 1e-8);
        assert!((x - 0.3).abs() < 1e-7);
        assert!((fx - 2.0).abs() < 1e-12);
    }

    #[test]
    fn monotone_function_hits_endpoint() {
        let (x, _) = golden_section(|x| x, 0.0, 1.0, 1e-9);
        assert!(x < 1e-8);
    }

    #[test]
    fn sampled_search_finds_global_minimum() {
        let f = |x: f64| math::cos(3.0 * x) + 0.1 * x;
        let (x, _) = minimize_sampled(f, 0.0, 6.0, 200, 1e-10);
        // minima near (2k+1)π/3; the first one has the smallest linear penalty
        let guess = math::PI / 3.0;
        let (refined, _) = golden_section(f, guess - 0.3, guess + 0.3, 1e-12);
        assert!((x - refined).abs() < 1e-8);
    }
}

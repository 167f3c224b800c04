//! Shared numerical helpers: grids, golden-section refinement, single-peak
//! scans, and bisection.

/// `count` equispaced points from `lo` to `hi` inclusive, endpoints exact.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2, "linspace needs at least two points");
    let step = (hi - lo) / (count - 1) as f64;
    let mut out: Vec<f64> = (0..count).map(|i| lo + step * i as f64).collect();
    out[0] = lo;
    *out.last_mut().unwrap() = hi;
    out
}

/// First index attaining the maximum of `ys`.
pub fn argmax_first(ys: &[f64]) -> usize {
    let mut best = 0;
    for (i, &y) in ys.iter().enumerate() {
        if y > ys[best] {
            best = i;
        }
    }
    best
}

/// Golden-section maximization of a unimodal function on `[a, b]` down to an
/// interval of width `xtol`. Returns the evaluated maximizer.
pub fn golden_max(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    const INVPHI: f64 = 0.618_033_988_749_894_9;
    const INVPHI2: f64 = 1.0 - INVPHI;
    let mut h = b - a;
    if h <= xtol {
        let x = 0.5 * (a + b);
        return (x, f(x));
    }
    let mut c = a + INVPHI2 * h;
    let mut d = a + INVPHI * h;
    let mut yc = f(c);
    let mut yd = f(d);
    for _ in 0..120 {
        if h <= xtol {
            break;
        }
        if yc > yd {
            b = d;
            d = c;
            yd = yc;
            h = b - a;
            c = a + INVPHI2 * h;
            yc = f(c);
        } else {
            a = c;
            c = d;
            yc = yd;
            h = b - a;
            d = a + INVPHI * h;
            yd = f(d);
        }
    }
    if yc > yd {
        (c, yc)
    } else {
        (d, yd)
    }
}

/// Looks for an interior dip: indices i < j < k with
/// `ys[j] <= min(ys[i], ys[k]) - tol`. Returns the first such triple,
/// choosing the smallest j, then the smallest i and k.
pub fn single_peak_violation(ys: &[f64], tol: f64) -> Option<(usize, usize, usize)> {
    let n = ys.len();
    if n < 3 {
        return None;
    }
    let mut prefix = vec![f64::NEG_INFINITY; n];
    let mut run = f64::NEG_INFINITY;
    for j in 0..n {
        prefix[j] = run;
        run = run.max(ys[j]);
    }
    let mut suffix = vec![f64::NEG_INFINITY; n];
    run = f64::NEG_INFINITY;
    for j in (0..n).rev() {
        suffix[j] = run;
        run = run.max(ys[j]);
    }
    for j in 1..n - 1 {
        if prefix[j] >= ys[j] + tol && suffix[j] >= ys[j] + tol {
            let i = (0..j).find(|&i| ys[i] >= ys[j] + tol)?;
            let k = (j + 1..n).find(|&k| ys[k] >= ys[j] + tol)?;
            return Some((i, j, k));
        }
    }
    None
}

/// Bisection for a sign change of `g` on `[lo, hi]` down to `xtol`; the caller
/// guarantees `g(lo)` and `g(hi)` have opposite signs.
pub fn bisect_root(mut g: impl FnMut(f64) -> f64, mut lo: f64, mut hi: f64, xtol: f64) -> f64 {
    let mut g_lo = g(lo);
    for _ in 0..200 {
        if hi - lo <= xtol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid);
        if (g_mid >= 0.0) == (g_lo >= 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn linspace_hits_endpoints() {
        let xs = linspace(0.0, 1.0, 5);
        assert_eq!(xs, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }

    #[test]
    fn golden_finds_quadratic_peak() {
        let (x, y) = golden_max(|t| -(t - 0.37).powi(2), 0.0, 1.0, 1e-10);
        assert_abs_diff_eq!(x, 0.37, epsilon = 1e-8);
        assert!(y <= 0.0);
    }

    #[test]
    fn dip_detection() {
        let ys = [0.0, 1.0, 0.2, 1.5, 0.0];
        let (i, j, k) = single_peak_violation(&ys, 1e-12).unwrap();
        assert_eq!((i, j, k), (1, 2, 3));
        let peaked = [0.0, 1.0, 2.0, 1.0, 0.5];
        assert!(single_peak_violation(&peaked, 1e-12).is_none());
    }

    #[test]
    fn bisect_finds_crossing() {
        let root = bisect_root(|t| 1.0 / (t + 0.2) - 1.0 / (1.0 - t), 0.01, 0.99, 1e-12);
        assert_abs_diff_eq!(root, 0.4, epsilon = 1e-10);
    }
}

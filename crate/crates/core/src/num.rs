//! Small numerical utilities shared across modules: bracketed root refinement,
//! compensated cumulative quadrature, interpolation, and finite differences.

use crate::error::{Error, Result};

/// Bracketed bisection+Newton hybrid for a scalar root of `f` on `[lo, hi]`.
///
/// `f(lo)` and `f(hi)` must have opposite (or zero) signs. Newton steps are
/// taken whenever they stay inside the current bracket; otherwise the step
/// falls back to bisection, so convergence is guaranteed while retaining the
/// quadratic endgame. Terminates when the bracket width drops below
/// `tol_rel · max(1, |x|)` or the residual underflows.
pub(crate) fn newton_bisect<F, D>(f: F, df: D, lo: f64, hi: f64, tol_rel: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let (mut lo, mut hi) = (lo, hi);
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::precondition(format!(
            "root bracket [{lo}, {hi}] has no sign change (f: {flo} .. {fhi})"
        )));
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        if hi - lo <= tol_rel * x.abs().max(1.0) {
            return Ok(0.5 * (lo + hi));
        }
        let d = df(x);
        let newton = x - fx / d;
        x = if d != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Ok(0.5 * (lo + hi))
}

/// Plain bisection for a sign change of `f` on `[lo, hi]`, for callers without
/// a usable derivative. Runs to f64 resolution of the bracket.
pub(crate) fn bisect<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::precondition(format!(
            "bisection bracket [{lo}, {hi}] has no sign change"
        )));
    }
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket at f64 resolution
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Kahan-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct KahanSum {
    sum: f64,
    carry: f64,
}

impl KahanSum {
    pub fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum
    }
}

/// Cumulative trapezoid integral of samples `f` over the (possibly
/// nonuniform) ascending grid `x`, anchored at zero at the first node.
/// Compensated summation keeps the accumulation error near rounding level
/// even over 10⁴–10⁵ nodes.
pub(crate) fn cumtrapz(x: &[f64], f: &[f64]) -> Vec<f64> {
    debug_assert_eq!(x.len(), f.len());
    let mut out = Vec::with_capacity(x.len());
    let mut acc = KahanSum::default();
    out.push(0.0);
    for i in 1..x.len() {
        acc.add(0.5 * (x[i] - x[i - 1]) * (f[i] + f[i - 1]));
        out.push(acc.value());
    }
    out
}

/// Linear interpolation of `(xs, ys)` at `x`, clamped to the end values
/// outside the grid. `xs` must be strictly ascending.
pub(crate) fn interp_clamped(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    // index of the first grid node strictly above x; x lies in [xs[j-1], xs[j])
    let j = xs.partition_point(|&g| g <= x);
    let (x0, x1) = (xs[j - 1], xs[j]);
    let t = (x - x0) / (x1 - x0);
    ys[j - 1] + t * (ys[j] - ys[j - 1])
}

/// First derivative of samples `f` on an ascending, possibly nonuniform grid
/// `x`: 3-point central differences inside, 2nd-order one-sided at the ends.
pub(crate) fn derivative_nonuniform(x: &[f64], f: &[f64]) -> Vec<f64> {
    let n = x.len();
    debug_assert!(n >= 3);
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        let hm = x[i] - x[i - 1];
        let hp = x[i + 1] - x[i];
        out[i] = -hp / (hm * (hm + hp)) * f[i - 1]
            + (hp - hm) / (hm * hp) * f[i]
            + hm / (hp * (hm + hp)) * f[i + 1];
    }
    // one-sided 2nd-order ends (derivative of the quadratic through 3 nodes)
    let (h0, h1) = (x[1] - x[0], x[2] - x[1]);
    out[0] = -(2.0 * h0 + h1) / (h0 * (h0 + h1)) * f[0] + (h0 + h1) / (h0 * h1) * f[1]
        - h0 / (h1 * (h0 + h1)) * f[2];
    let (hm, hl) = (x[n - 2] - x[n - 3], x[n - 1] - x[n - 2]);
    out[n - 1] = hl / (hm * (hm + hl)) * f[n - 3] - (hm + hl) / (hm * hl) * f[n - 2]
        + (2.0 * hl + hm) / (hl * (hm + hl)) * f[n - 1];
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn newton_bisect_finds_cubic_root() {
        let f = |x: f64| x * x * x - 2.0;
        let df = |x: f64| 3.0 * x * x;
        let r = newton_bisect(f, df, 0.0, 4.0, 1e-14).unwrap();
        assert_abs_diff_eq!(r, 2f64.cbrt(), epsilon = 1e-13);
    }

    #[test]
    fn newton_bisect_rejects_unbracketed() {
        assert!(newton_bisect(|x| x * x + 1.0, |x| 2.0 * x, -1.0, 1.0, 1e-12).is_err());
    }

    #[test]
    fn cumtrapz_linear_is_exact() {
        let x: Vec<f64> = (0..101).map(|i| i as f64 * 0.01).collect();
        let f: Vec<f64> = x.iter().map(|&t| 3.0 * t + 1.0).collect();
        let s = cumtrapz(&x, &f);
        for (i, &xi) in x.iter().enumerate() {
            assert_abs_diff_eq!(s[i], 1.5 * xi * xi + xi, epsilon = 1e-14);
        }
    }

    #[test]
    fn interp_clamps_and_interpolates() {
        let xs = [0.0, 1.0, 3.0];
        let ys = [0.0, 2.0, 4.0];
        assert_abs_diff_eq!(interp_clamped(&xs, &ys, -5.0), 0.0);
        assert_abs_diff_eq!(interp_clamped(&xs, &ys, 0.5), 1.0);
        assert_abs_diff_eq!(interp_clamped(&xs, &ys, 2.0), 3.0);
        assert_abs_diff_eq!(interp_clamped(&xs, &ys, 9.0), 4.0);
    }

    #[test]
    fn derivative_nonuniform_is_second_order() {
        // quadratics are differentiated exactly, including the one-sided ends
        let x = [0.0, 0.1, 0.25, 0.4, 0.6];
        let f: Vec<f64> = x.iter().map(|&t| 2.0 * t * t - t + 3.0).collect();
        let d = derivative_nonuniform(&x, &f);
        for (i, &xi) in x.iter().enumerate() {
            assert_abs_diff_eq!(d[i], 4.0 * xi - 1.0, epsilon = 1e-12);
        }
    }
}

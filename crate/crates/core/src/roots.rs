//! Bracketed root refinement and sign-change scanning for oscillatory
//! scalar functions.

use crate::error::{Error, Result};

const MAX_ITER: usize = 200;

/// Brent's method on a sign-changing bracket `[a, b]`.
///
/// Terminates once the bracket is narrower than `xtol` (plus a few ulps of
/// the root) or an exact zero is hit.
pub fn brent<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, xtol: f64) -> Result<f64> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::NoConvergence { near: 0.5 * (a + b) });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when only two points differ
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
    }
    Err(Error::NoConvergence { near: b })
}

/// Golden-section search for the minimum of `g` on `[a, b]`.
pub fn golden_min<F: Fn(f64) -> f64>(g: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut g1, mut g2) = (g(x1), g(x2));
    for _ in 0..iters {
        if g1 < g2 {
            b = x2;
            x2 = x1;
            g2 = g1;
            x1 = b - r * (b - a);
            g1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            g1 = g2;
            x2 = a + r * (b - a);
            g2 = g(x2);
        }
    }
    if g1 < g2 {
        (x1, g1)
    } else {
        (x2, g2)
    }
}

/// A root located by [`scan_roots`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScannedRoot {
    pub x: f64,
    /// Touching zero without a sign change; counts as two coincident roots.
    pub double: bool,
}

/// Locate every root of `f` on the ascending grid `xs`.
///
/// Sign changes between neighbours are refined with [`brent`]. Where `|f|`
/// dips between two same-signed neighbours, a golden-section search looks for
/// a hidden pair of roots (a crossing of zero) or a tangency.
pub fn scan_roots<F: Fn(f64) -> f64>(f: &F, xs: &[f64], xtol: &dyn Fn(f64) -> f64) -> Result<Vec<ScannedRoot>> {
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    scan_values(f, xs, &ys, xtol)
}

/// [`scan_roots`] with precomputed samples `ys[i] = f(xs[i])`.
pub fn scan_values<F: Fn(f64) -> f64>(
    f: &F,
    xs: &[f64],
    ys: &[f64],
    xtol: &dyn Fn(f64) -> f64,
) -> Result<Vec<ScannedRoot>> {
    let mut out = Vec::new();
    let n = xs.len();
    for i in 0..n {
        if ys[i] == 0.0 {
            out.push(ScannedRoot { x: xs[i], double: false });
            continue;
        }
        if i + 1 < n && ys[i + 1] != 0.0 && ys[i].signum() != ys[i + 1].signum() {
            let x = brent(f, xs[i], xs[i + 1], xtol(xs[i]))?;
            out.push(ScannedRoot { x, double: false });
        }
        // hidden pair inside [x_{i-1}, x_{i+1}]
        if i > 0 && i + 1 < n {
            let (yl, ym, yr) = (ys[i - 1], ys[i], ys[i + 1]);
            let same = yl.signum() == ym.signum() && ym.signum() == yr.signum() && yl != 0.0 && yr != 0.0;
            if same && ym.abs() < yl.abs() && ym.abs() <= yr.abs() {
                let s = ym.signum();
                let (xm, gm) = golden_min(|x| s * f(x), xs[i - 1], xs[i + 1], 80);
                let scale = yl.abs().max(yr.abs());
                if gm < 0.0 {
                    let r1 = brent(f, xs[i - 1], xm, xtol(xm))?;
                    let r2 = brent(f, xm, xs[i + 1], xtol(xm))?;
                    out.push(ScannedRoot { x: r1, double: false });
                    out.push(ScannedRoot { x: r2, double: false });
                } else if gm <= 1e-13 * scale {
                    out.push(ScannedRoot { x: xm, double: true });
                }
            }
        }
    }
    out.sort_by(|a, b| a.x.total_cmp(&b.x));
    out.dedup_by(|a, b| a.x == b.x && !a.double && !b.double);
    Ok(out)
}

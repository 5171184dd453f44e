use super::{Basis, Wavefunction};
use crate::error::{Error, Result};

// b^3 * sum_{j,l} u1^j u2^l / ((2j+1)! (2l+1)! (2j+2l+3)), u = -2E b^2
fn series(q1: f64, q2: f64, len: f64) -> f64 {
    const TERMS: usize = 14;
    let (u1, u2) = (-q1 * len * len, -q2 * len * len);
    let mut inv_fact = [0.0; TERMS];
    let mut f = 1.0;
    for (j, slot) in inv_fact.iter_mut().enumerate() {
        if j > 0 {
            f /= ((2 * j) * (2 * j + 1)) as f64;
        }
        *slot = f;
    }
    let mut sum = 0.0;
    let mut p1 = 1.0;
    for j in 0..TERMS {
        let mut p2 = 1.0;
        for l in 0..TERMS - j {
            sum += p1 * p2 * inv_fact[j] * inv_fact[l] / (2 * j + 2 * l + 3) as f64;
            p2 *= u2;
        }
        p1 *= u1;
    }
    sum * len.powi(3)
}

fn sinc(z: f64) -> f64 {
    if z.abs() < 1e-4 {
        1.0 - z * z / 6.0
    } else {
        z.sin() / z
    }
}

/// `scale1 * scale2 * integral_0^len s(y; E1) s(y; E2) dy`, in closed form.
///
/// Regimes: a double power series when both `|2E| len^2 <= 1`; the
/// sum-and-difference form when the energies share a sign and are close;
/// otherwise the Wronskian identity `(s1 c2 - c1 s2) / (2(E1 - E2))`.
pub fn side_integral(e1: f64, e2: f64, len: f64) -> f64 {
    let (b1, b2) = (Basis::new(e1), Basis::new(e2));
    side_integral_basis(&b1, &b2, len)
}

pub(crate) fn side_integral_basis(b1: &Basis, b2: &Basis, len: f64) -> f64 {
    let (q1, q2) = (b1.q, b2.q);
    let qmax = q1.abs().max(q2.abs());
    if qmax * len * len <= 1.0 {
        return series(q1, q2, len) * b1.scale(len) * b2.scale(len);
    }
    let close = (q1 - q2).abs() <= 0.5 * qmax;
    if close && q1 > 0.0 && q2 > 0.0 {
        let (k1, k2) = (b1.root, b2.root);
        let (kb, d) = (0.5 * (k1 + k2), 0.5 * (k1 - k2));
        return (2.0 * len * kb * sinc(2.0 * d * len) - (2.0 * kb * len).sin()) / (4.0 * kb * k1 * k2);
    }
    if close && q1 < 0.0 && q2 < 0.0 {
        let (k1, k2) = (b1.root, b2.root);
        let (kb, d) = (0.5 * (k1 + k2), 0.5 * (k1 - k2));
        let damp = -2.0 * kb * len;
        let first = -(2.0 * damp).exp_m1() / 2.0;
        let z = 2.0 * d * len;
        let second = if z.abs() < 1e-4 {
            2.0 * len * kb * (1.0 + z * z / 6.0) * damp.exp()
        } else {
            2.0 * len * kb * 0.5 * ((z + damp).exp() - (damp - z).exp()) / z
        };
        return (first - second) / (4.0 * kb * k1 * k2);
    }
    let w = b1.s(len, len) * b2.c(len, len) - b1.c(len, len) * b2.s(len, len);
    w / (q1 - q2)
}

/// `<psi1|psi2>` over the whole box, from the side integrals.
pub fn overlap(wf1: &Wavefunction, wf2: &Wavefunction) -> Result<f64> {
    if wf1.domain != wf2.domain {
        return Err(Error::DomainMismatch);
    }
    let (b1, b2) = (Basis::new(wf1.level.energy), Basis::new(wf2.level.energy));
    let (a, b) = (wf1.domain.right_len(), wf1.domain.left_len());
    let left = side_integral_basis(&b1, &b2, b);
    let right = side_integral_basis(&b1, &b2, a);
    Ok(wf1.amp_minus * wf2.amp_minus * left + wf1.amp_plus * wf2.amp_plus * right)
}

#[cfg(test)]
mod tests {
    use super::*;

    // composite Gauss-Legendre reference, independent of the closed forms
    fn quad(e1: f64, e2: f64, len: f64) -> f64 {
        const X: [f64; 5] = [0.0, -0.538_469_310_105_683, 0.538_469_310_105_683, -0.906_179_845_938_664, 0.906_179_845_938_664];
        const W: [f64; 5] = [
            0.568_888_888_888_889,
            0.478_628_670_499_366,
            0.478_628_670_499_366,
            0.236_926_885_056_189,
            0.236_926_885_056_189,
        ];
        let f = |e: f64, y: f64| {
            let k = (2.0 * e.abs()).sqrt();
            if e > 0.0 {
                (k * y).sin() / k
            } else if e == 0.0 {
                y
            } else {
                (k * (y - len)).exp() * (1.0 - (-2.0 * k * y).exp()) / (2.0 * k)
            }
        };
        let panels = 4000;
        let h = len / panels as f64;
        let mut sum = 0.0;
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * h;
            for (x, w) in X.iter().zip(W) {
                let y = mid + 0.5 * h * x;
                sum += w * 0.5 * h * f(e1, y) * f(e2, y);
            }
        }
        sum
    }

    #[test]
    fn closed_forms_match_quadrature_in_every_regime() {
        let cases = [
            (0.1, 0.2, 0.6),
            (0.5, -0.3, 0.6),
            (50.0, 50.0, 0.6),
            (50.0, 50.0001, 0.6),
            (50.0, 30.0, 0.6),
            (50.0, 0.001, 0.6),
            (200.0, -10.0, 0.4),
            (-40.0, -40.0, 0.6),
            (-40.0, -39.999, 0.6),
            (-40.0, -5.0, 0.6),
            (-3000.0, -2990.0, 0.38),
            (0.0, 10.0, 0.5),
            (0.0, 0.0, 0.5),
        ];
        for (e1, e2, len) in cases {
            let exact = quad(e1, e2, len);
            let got = side_integral(e1, e2, len);
            let scale = quad(e1, e1, len).sqrt() * quad(e2, e2, len).sqrt();
            assert!((got - exact).abs() <= 1e-11 * scale, "({e1},{e2},{len}): {got} vs {exact}");
        }
    }

    #[test]
    fn integral_is_continuous_across_regime_boundaries() {
        // |2E| len^2 = 1 switches from the series to the closed form
        let len = 0.5;
        let e = 2.0;
        let lo = side_integral(e * (1.0 - 1e-12), e, len);
        let hi = side_integral(e * (1.0 + 1e-12), e * (1.0 + 2e-12), len);
        assert!((lo - hi).abs() < 1e-13);
    }
}

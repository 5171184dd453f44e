use std::f64::consts::PI;

use super::overlap::side_integral_basis;
use super::{Basis, Domain, EnergyLevel};
use crate::error::{Error, Result};
use crate::params::Coupling;

/// Tolerance on the relative boundary-condition residuals of an eigenfunction.
pub const BC_TOL: f64 = 1e-9;

/// Which one-sided limit to take at the interaction point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A normalized eigenfunction
///
/// ```text
/// psi(x) =  A- s(x + rL) exp(-kappa rL)           for x < 0
/// psi(x) = -A+ s((1-r)L - x) exp(-kappa (1-r)L)   for x > 0
/// ```
///
/// (the exponential factors only for bound states). For `E > 0` the ratio
/// `A+/A-` is that of the amplitudes of `A sin k(x - x_wall)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavefunction {
    pub level: EnergyLevel,
    pub amp_minus: f64,
    pub amp_plus: f64,
    pub domain: Domain,
    pub coupling: Coupling,
}

/// Values and slopes on both sides of the origin.
#[derive(Debug, Clone, Copy)]
struct Junction {
    left: f64,
    left_slope: f64,
    right: f64,
    right_slope: f64,
}

fn junction(basis: &Basis, domain: &Domain, amp_plus: f64, amp_minus: f64) -> Junction {
    let (a, b) = (domain.right_len(), domain.left_len());
    Junction {
        left: amp_minus * basis.s(b, b),
        left_slope: amp_minus * basis.c(b, b),
        right: -amp_plus * basis.s(a, a),
        right_slope: amp_plus * basis.c(a, a),
    }
}

fn residuals(j: &Junction, c: &Coupling, basis: &Basis, domain: &Domain) -> (f64, f64) {
    let ell = 1.0 / basis.root.max(1.0 / domain.length);
    let norm = (j.left.powi(2) + j.right.powi(2) + ell * ell * (j.left_slope.powi(2) + j.right_slope.powi(2))).sqrt();
    let row = |terms: [f64; 3], scale: f64| {
        let sum: f64 = terms.iter().sum();
        let big = terms.iter().fold(0.0f64, |m, t| m.max(t.abs()));
        let denom = big.max(1e-3 * scale);
        if denom == 0.0 {
            0.0
        } else {
            sum.abs() / denom
        }
    };
    let r1 = row(
        [j.right_slope, c.alpha * j.left_slope, c.beta * j.left],
        (1.0 + c.alpha.abs()) * norm / ell + c.beta.abs() * norm,
    );
    let r2 = row(
        [c.weight * j.right, c.weight_gamma * j.left, c.weight_delta * j.left_slope],
        (c.weight.abs() + c.weight_gamma.abs()) * norm + c.weight_delta.abs() * norm / ell,
    );
    (r1, r2)
}

// unit-max amplitude pair solving both matching rows, scaled basis
fn scaled_amplitudes(energy: f64, coupling: &Coupling, domain: &Domain) -> Result<(f64, f64, f64)> {
    let basis = Basis::new(energy);
    let (a, b) = (domain.right_len(), domain.left_len());
    let (sa, ca, sb, cb) = (basis.s(a, a), basis.c(a, a), basis.s(b, b), basis.c(b, b));
    let c = coupling;
    let candidates = [
        (c.alpha * cb + c.beta * sb, -ca),
        (c.weight_gamma * sb + c.weight_delta * cb, c.weight * sa),
    ];
    let mut best: Option<(f64, f64, f64)> = None;
    for (p, m) in candidates {
        let scale = p.abs().max(m.abs());
        if scale == 0.0 || !scale.is_finite() {
            continue;
        }
        let (p, m) = (p / scale, m / scale);
        let (r1, r2) = residuals(&junction(&basis, domain, p, m), c, &basis, domain);
        let r = r1.max(r2);
        if best.is_none_or(|(_, _, rb)| r < rb) {
            best = Some((p, m, r));
        }
    }
    best.ok_or(Error::NotAnEigenvalue { energy, residual: f64::INFINITY })
}

/// Amplitudes `(A+, A-)` of an eigenfunction at `energy`, unnormalized
/// (largest magnitude 1), with `A- >= 0`.
///
/// The amplitudes multiply `s(x - x_wall)`, i.e. `sin(k(x - x_wall))/k` above
/// zero energy and `sinh(kappa(x - x_wall))/kappa` below.
pub fn amplitude_ratio(energy: f64, coupling: &Coupling, domain: &Domain) -> Result<(f64, f64)> {
    let (p, m, r) = scaled_amplitudes(energy, coupling, domain)?;
    if r > BC_TOL {
        return Err(Error::NotAnEigenvalue { energy, residual: r });
    }
    let basis = Basis::new(energy);
    let (mut p, mut m) = (p / basis.scale(domain.right_len()), m / basis.scale(domain.left_len()));
    let scale = p.abs().max(m.abs());
    p /= scale;
    m /= scale;
    if m < 0.0 || (m == 0.0 && p < 0.0) {
        p = -p;
        m = -m;
    }
    Ok((p, m))
}

/// Normalized eigenfunction for a level of `coupling`.
pub fn wavefunction(level: &EnergyLevel, coupling: &Coupling, domain: &Domain) -> Result<Wavefunction> {
    let energy = level.energy;
    let (p, m, r) = scaled_amplitudes(energy, coupling, domain)?;
    if r > BC_TOL {
        return Err(Error::NotAnEigenvalue { energy, residual: r });
    }
    let basis = Basis::new(energy);
    let norm2 = m * m * side_integral_basis(&basis, &basis, domain.left_len())
        + p * p * side_integral_basis(&basis, &basis, domain.right_len());
    let norm = norm2.sqrt();
    let (mut p, mut m) = (p / norm, m / norm);
    if m < 0.0 || (m == 0.0 && p < 0.0) {
        p = -p;
        m = -m;
    }
    Ok(Wavefunction { level: *level, amp_minus: m, amp_plus: p, domain: *domain, coupling: *coupling })
}

impl Wavefunction {
    fn basis(&self) -> Basis {
        Basis::new(self.level.energy)
    }

    fn junction(&self) -> Junction {
        junction(&self.basis(), &self.domain, self.amp_plus, self.amp_minus)
    }

    /// `psi(x)`; at the origin the chosen one-sided limit.
    pub fn value(&self, x: f64, side: Side) -> Result<f64> {
        if !self.domain.contains(x) || x.is_nan() {
            return Err(Error::OutOfDomain(x));
        }
        let basis = self.basis();
        let (a, b) = (self.domain.right_len(), self.domain.left_len());
        let left = x < 0.0 || (x == 0.0 && side == Side::Left);
        Ok(if left {
            self.amp_minus * basis.s(x + b, b)
        } else {
            -self.amp_plus * basis.s(a - x, a)
        })
    }

    /// `psi'(x)`; at the origin the chosen one-sided limit.
    pub fn slope(&self, x: f64, side: Side) -> Result<f64> {
        if !self.domain.contains(x) || x.is_nan() {
            return Err(Error::OutOfDomain(x));
        }
        let basis = self.basis();
        let (a, b) = (self.domain.right_len(), self.domain.left_len());
        let left = x < 0.0 || (x == 0.0 && side == Side::Left);
        Ok(if left {
            self.amp_minus * basis.c(x + b, b)
        } else {
            self.amp_plus * basis.c(a - x, a)
        })
    }

    /// Pointwise values; `x = 0` is taken from the left.
    pub fn evaluate(&self, xs: &[f64]) -> Result<Vec<f64>> {
        self.evaluate_side(xs, Side::Left)
    }

    pub fn evaluate_side(&self, xs: &[f64], side: Side) -> Result<Vec<f64>> {
        xs.iter().map(|&x| self.value(x, side)).collect()
    }

    pub fn norm(&self) -> f64 {
        let basis = self.basis();
        (self.amp_minus.powi(2) * side_integral_basis(&basis, &basis, self.domain.left_len())
            + self.amp_plus.powi(2) * side_integral_basis(&basis, &basis, self.domain.right_len()))
        .sqrt()
    }

    pub fn params(&self) -> Option<crate::params::BCParams> {
        self.coupling.params()
    }
}

/// Relative residuals of the two matching conditions at the origin.
pub fn check_bc(wf: &Wavefunction) -> (f64, f64) {
    residuals(&wf.junction(), &wf.coupling, &wf.basis(), &wf.domain)
}

// zeros of s(y) strictly inside (0, len), and whether one sits at y = len
fn side_zeros(basis: &Basis, len: f64) -> (usize, bool) {
    if basis.q <= 0.0 {
        return (0, false);
    }
    const ETA: f64 = 1e-9;
    let t = basis.root * len;
    let m = (t / PI).round();
    let at_end = m >= 1.0 && (t - m * PI).abs() <= ETA;
    let inside = ((t - ETA) / PI).ceil() as i64 - 1;
    (inside.max(0) as usize, at_end)
}

/// Interior zeros of `psi`, counting a sign flip across the origin as one node.
pub fn node_count(wf: &Wavefunction) -> usize {
    let basis = wf.basis();
    let (a, b) = (wf.domain.right_len(), wf.domain.left_len());
    let tiny = 1e-12 * wf.amp_minus.abs().max(wf.amp_plus.abs());
    let left_live = wf.amp_minus.abs() > tiny;
    let right_live = wf.amp_plus.abs() > tiny;
    let (nl, left_at_end) = side_zeros(&basis, b);
    let (nr, right_at_end) = side_zeros(&basis, a);
    let mut nodes = 0;
    if left_live {
        nodes += nl;
    }
    if right_live {
        nodes += nr;
    }
    if left_live && right_live {
        let j = wf.junction();
        let sign_left = if left_at_end { -j.left_slope.signum() } else { j.left.signum() };
        let sign_right = if right_at_end { j.right_slope.signum() } else { j.right.signum() };
        if sign_left != sign_right {
            nodes += 1;
        }
    }
    nodes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{BCParams, SliceCoords};
    use crate::spectrum::{eigenvalues, eigenvalues_with, SpectrumOptions};

    fn free_levels(r: f64, n: usize) -> (Domain, Vec<EnergyLevel>) {
        let d = Domain::new(1.0, r).unwrap();
        (d, eigenvalues(&BCParams::free(), &d, n, f64::NEG_INFINITY).unwrap())
    }

    #[test]
    fn free_amplitude_ratio_alternates() {
        let (d, levels) = free_levels(0.5, 2);
        let c = Coupling::from(BCParams::free());
        let (p, m) = amplitude_ratio(levels[0].energy, &c, &d).unwrap();
        assert!((p / m + 1.0).abs() < 1e-12);
        let (p, m) = amplitude_ratio(levels[1].energy, &c, &d).unwrap();
        assert!((p / m - 1.0).abs() < 1e-12);
        assert!(matches!(amplitude_ratio(3.0, &c, &d), Err(Error::NotAnEigenvalue { .. })));
    }

    #[test]
    fn free_ground_state_is_half_sine() {
        let (d, levels) = free_levels(0.5, 1);
        let c = Coupling::from(BCParams::free());
        let wf = wavefunction(&levels[0], &c, &d).unwrap();
        assert!((wf.norm() - 1.0).abs() < 1e-12);
        for x in [-0.4, -0.1, 0.0, 0.2, 0.45] {
            let exact = 2f64.sqrt() * (PI * (x + 0.5)).sin();
            assert!((wf.value(x, Side::Left).unwrap() - exact).abs() < 1e-10);
            assert!((wf.value(x, Side::Right).unwrap() - exact).abs() < 1e-10);
        }
        assert_eq!(wf.evaluate(&[-0.5, 0.5]).unwrap(), vec![0.0, 0.0]);
        assert!(matches!(wf.evaluate(&[2.0]), Err(Error::OutOfDomain(_))));
        let (r1, r2) = check_bc(&wf);
        assert!(r1 < 1e-12 && r2 < 1e-12);
        assert_eq!(node_count(&wf), 0);
    }

    #[test]
    fn free_node_law() {
        for r in [0.5, 0.618034, 0.3] {
            let (d, levels) = free_levels(r, 12);
            let c = Coupling::from(BCParams::free());
            for l in &levels {
                let wf = wavefunction(l, &c, &d).unwrap();
                assert_eq!(node_count(&wf), l.index, "r={r} n={}", l.index);
                let (r1, r2) = check_bc(&wf);
                assert!(r1 < 1e-11 && r2 < 1e-11, "r={r} n={} {r1} {r2}", l.index);
            }
        }
    }

    #[test]
    fn perturbed_amplitude_violates_matching() {
        let d = Domain::default();
        let p = BCParams::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let c = Coupling::from(p);
        let levels = eigenvalues(&p, &d, 3, f64::NEG_INFINITY).unwrap();
        for l in &levels {
            let mut wf = wavefunction(l, &c, &d).unwrap();
            let (r1, r2) = check_bc(&wf);
            assert!(r1 <= BC_TOL && r2 <= BC_TOL);
            wf.amp_plus *= 1.01;
            let (r1, r2) = check_bc(&wf);
            assert!(r1.max(r2) > 1e-3, "{r1} {r2}");
        }
    }

    #[test]
    fn one_sided_state_on_decoupled_line() {
        let c = Coupling::from_slice(SliceCoords { gamma0: -1.0, alpha: -0.5, beta: 0.0 }).unwrap();
        let d = Domain::default();
        let levels = eigenvalues_with(&c, &d, 4, f64::NEG_INFINITY, &SpectrumOptions::default()).unwrap();
        for l in &levels {
            let wf = wavefunction(l, &c, &d).unwrap();
            assert!(wf.amp_minus.abs() < 1e-9 || wf.amp_plus.abs() < 1e-9, "{wf:?}");
            assert!((wf.norm() - 1.0).abs() < 1e-10);
            let (r1, r2) = check_bc(&wf);
            assert!(r1 <= BC_TOL && r2 <= BC_TOL);
        }
    }

    #[test]
    fn zero_energy_state_is_linear() {
        let p = BCParams::new(1.0, 0.0, 1.0, -1.0).unwrap();
        let d = Domain::new(1.0, 0.5).unwrap();
        let c = Coupling::from(p);
        let level = EnergyLevel::new(0, 0.0);
        let wf = wavefunction(&level, &c, &d).unwrap();
        let v1 = wf.value(-0.25, Side::Left).unwrap();
        let v2 = wf.value(-0.125, Side::Left).unwrap();
        assert!((v2 / v1 - 1.5).abs() < 1e-12);
    }
}

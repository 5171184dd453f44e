use std::f64::consts::PI;

use super::{secular_scaled, Domain, EnergyLevel};
use crate::error::{Error, Result};
use crate::params::{BCParams, Coupling};
use crate::roots::scan_values;

/// Solver knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumOptions {
    /// Eigenvalues are refined to `|dE| <= root_tol * max(1, |E|)` or better.
    pub root_tol: f64,
    /// Scan points per quarter period `pi / (4L)` of the momentum grid.
    pub scan_refine: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        Self { root_tol: 1e-10, scan_refine: 4 }
    }
}

/// Eigenvalues above an energy floor, plus the number hidden below it.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub below_floor: usize,
    /// Ascending; `index` counts every eigenvalue below, including hidden ones.
    pub levels: Vec<EnergyLevel>,
}

impl Window {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy).collect()
    }
}

// signed momentum: x < 0 is kappa = -x on the bound-state side
fn energy_of(x: f64) -> f64 {
    0.5 * x * x.abs()
}

/// Positive roots of the large-kappa limit `w delta k^2 + (w alpha + w gamma) k + w beta`.
fn asymptotic_roots(c: &Coupling) -> Vec<f64> {
    let qa = c.weight_delta;
    let qb = c.weight * c.alpha + c.weight_gamma;
    let qc = c.weight * c.beta;
    let mut out = Vec::new();
    if qa == 0.0 {
        if qb != 0.0 {
            out.push(-qc / qb);
        }
    } else {
        let disc = qb * qb - 4.0 * qa * qc;
        if disc >= 0.0 {
            let q = -0.5 * (qb + disc.sqrt().copysign(qb));
            out.push(q / qa);
            if q != 0.0 {
                out.push(qc / q);
            }
        }
    }
    out.retain(|k| k.is_finite() && *k > 0.0);
    out
}

/// Number of eigenvalues strictly below `energy` with Dirichlet walls at the origin.
///
/// Any point interaction differs from this reference by at most two levels.
pub fn decoupled_count(energy: f64, domain: &Domain) -> usize {
    if energy <= 0.0 {
        return 0;
    }
    let k = (2.0 * energy).sqrt();
    let side = |len: f64| {
        let t = k * len / PI;
        if t.fract() == 0.0 {
            (t as usize).saturating_sub(1)
        } else {
            t.floor() as usize
        }
    };
    side(domain.left_len()) + side(domain.right_len())
}

/// Largest `|n - k_n L / pi|` over the positive levels.
pub fn weyl_defect(levels: &[EnergyLevel], domain: &Domain) -> f64 {
    levels
        .iter()
        .filter(|l| l.energy > 0.0)
        .map(|l| (l.index as f64 - l.momentum * domain.length / PI).abs())
        .fold(0.0, f64::max)
}

fn scan_grid(coupling: &Coupling, domain: &Domain, refine: usize, k_max: f64) -> Vec<f64> {
    let (a, b) = (domain.right_len(), domain.left_len());
    let h = PI / (4.0 * refine as f64 * domain.length);
    // beyond k_switch the exp(-2 kappa side) corrections are below 1e-17
    let k_switch = 20.0 / a.min(b);
    let mut neg: Vec<f64> = (1..=(k_switch / h).ceil() as usize).map(|j| j as f64 * h).collect();
    let roots = asymptotic_roots(coupling);
    let mut far = k_switch;
    for &r in &roots {
        if r > k_switch {
            neg.push(r * (1.0 - 1e-3));
            neg.push(r * (1.0 + 1e-3));
        }
        far = far.max(r);
    }
    neg.push(4.0 * far);
    neg.sort_by(f64::total_cmp);
    neg.dedup();
    let mut xs: Vec<f64> = neg.iter().rev().map(|k| -k).collect();
    xs.push(0.0);
    let n_pos = (k_max / h).ceil() as usize;
    xs.extend((1..=n_pos).map(|j| j as f64 * h));
    xs
}

fn check_counts(energies: &[f64], domain: &Domain) -> std::result::Result<(), Error> {
    for i in 0..energies.len().saturating_sub(1) {
        if energies[i] == energies[i + 1] {
            continue;
        }
        let mid = 0.5 * (energies[i] + energies[i + 1]);
        let found = i + 1;
        let reference = decoupled_count(mid, domain);
        if found.abs_diff(reference) > 2 {
            return Err(Error::MissedRoots { energy: mid, found, reference });
        }
    }
    Ok(())
}

/// Lowest `count` eigenvalues strictly above `floor`, for any coupling.
///
/// Roots below the floor are counted (there are at most two negative
/// eigenvalues) so indices stay absolute.
pub fn spectrum_window(
    coupling: &Coupling,
    domain: &Domain,
    count: usize,
    floor: f64,
    opts: &SpectrumOptions,
) -> Result<Window> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let phi = |x: f64| secular_scaled(energy_of(x), coupling, domain);
    let xtol = |x: f64| opts.root_tol * 1e-5 * x.abs().max(1.0);
    let mut refine = opts.scan_refine.max(1);
    let mut k_max = (count + 6) as f64 * PI / domain.length;
    let mut last_err = None;
    for _ in 0..12 {
        let xs = scan_grid(coupling, domain, refine, k_max);
        let ys: Vec<f64> = xs.iter().map(|&x| phi(x)).collect();
        let roots = scan_values(&phi, &xs, &ys, &xtol)?;
        let mut energies = Vec::with_capacity(roots.len() + 2);
        for r in &roots {
            let e = energy_of(r.x);
            energies.push(e);
            if r.double {
                energies.push(e);
            }
        }
        let below = energies.iter().filter(|&&e| e <= floor).count();
        if energies.len() - below < count + 1 {
            k_max *= 2.0;
            continue;
        }
        if let Err(e) = check_counts(&energies, domain) {
            last_err = Some(e);
            refine *= 4;
            continue;
        }
        let levels = energies
            .iter()
            .enumerate()
            .skip(below)
            .take(count)
            .map(|(i, &e)| EnergyLevel::new(i, e))
            .collect();
        return Ok(Window { below_floor: below, levels });
    }
    Err(last_err.unwrap_or(Error::NoConvergence { near: energy_of(k_max) }))
}

/// Lowest `count` eigenvalues above `floor` for full parameters.
///
/// Fails with `FloorTooHigh` when some eigenvalue lies at or below the floor.
pub fn eigenvalues(params: &BCParams, domain: &Domain, count: usize, floor: f64) -> Result<Vec<EnergyLevel>> {
    eigenvalues_with(&Coupling::from(*params), domain, count, floor, &SpectrumOptions::default())
}

pub fn eigenvalues_with(
    coupling: &Coupling,
    domain: &Domain,
    count: usize,
    floor: f64,
    opts: &SpectrumOptions,
) -> Result<Vec<EnergyLevel>> {
    let w = spectrum_window(coupling, domain, count, floor, opts)?;
    if w.below_floor > 0 {
        return Err(Error::FloorTooHigh { floor, below: w.below_floor });
    }
    Ok(w.levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{from_polar, PolarCoords, SliceCoords};

    #[test]
    fn free_spectrum_is_n_squared() {
        for r in [0.3, 0.5, 0.618034] {
            let d = Domain::new(1.0, r).unwrap();
            let levels = eigenvalues(&BCParams::free(), &d, 3, f64::NEG_INFINITY).unwrap();
            for (n, l) in levels.iter().enumerate() {
                let exact = ((n + 1) as f64 * PI).powi(2) / 2.0;
                assert!((l.energy - exact).abs() <= 1e-10 * exact, "r={r} n={n}");
                assert_eq!(l.index, n);
            }
        }
    }

    // tan(k/2) = -k solved by plain bisection on (pi, 2 pi), away from the pole at pi
    fn delta_well_root() -> f64 {
        let g = |k: f64| (k / 2.0).sin() + k * (k / 2.0).cos();
        let (mut lo, mut hi) = (PI + 1e-9, 2.0 * PI - 1e-9);
        assert!(g(lo).signum() != g(hi).signum());
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid).signum() == g(lo).signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn repulsive_delta_ground_state() {
        let k0 = delta_well_root();
        assert!((k0 - 3.6732).abs() < 1e-4);
        let d = Domain::new(1.0, 0.5).unwrap();
        let levels = eigenvalues(&BCParams::delta_potential(1.0), &d, 2, f64::NEG_INFINITY).unwrap();
        assert!((levels[0].momentum - k0).abs() < 1e-10 * k0);
        // the odd state does not feel the delta
        assert!((levels[1].momentum - 2.0 * PI).abs() < 1e-10);
    }

    #[test]
    fn deep_bound_state_near_theta_zero_plus() {
        let p = from_polar(PolarCoords { gamma0: -1.0, rho: 0.1, theta: 0.05 }).unwrap();
        let d = Domain::new(1.0, 0.618034).unwrap();
        let levels = eigenvalues(&p, &d, 3, f64::NEG_INFINITY).unwrap();
        assert!(levels[0].energy < -100.0, "{:?}", levels[0]);
        // brute-force sign scan of D on the negative axis sees the same root
        let c = Coupling::from(p);
        let f = |kappa: f64| secular_scaled(-0.5 * kappa * kappa, &c, &d);
        let target = levels[0].momentum;
        let (lo, hi) = (target * 0.99, target * 1.01);
        assert!(f(lo).signum() != f(hi).signum());
    }

    #[test]
    fn floor_too_high_is_reported() {
        let p = from_polar(PolarCoords { gamma0: -1.0, rho: 0.1, theta: 0.05 }).unwrap();
        let d = Domain::default();
        assert!(matches!(eigenvalues(&p, &d, 3, -10.0), Err(Error::FloorTooHigh { below: 1, .. })));
        let w = spectrum_window(&Coupling::from(p), &d, 3, -10.0, &SpectrumOptions::default()).unwrap();
        assert_eq!(w.below_floor, 1);
        assert_eq!(w.levels[0].index, 1);
    }

    #[test]
    fn zero_energy_eigenvalue() {
        // D(0) = 0.5 alpha + 0.25 beta + 0.5 gamma + delta = 0 for (1, 0, 1, -1)
        let p = BCParams::new(1.0, 0.0, 1.0, -1.0).unwrap();
        let d = Domain::new(1.0, 0.5).unwrap();
        let levels = eigenvalues(&p, &d, 4, f64::NEG_INFINITY).unwrap();
        assert!(levels.iter().any(|l| l.energy.abs() < 1e-12), "{levels:?}");
    }

    #[test]
    fn degenerate_pair_on_decoupled_symmetric_box() {
        // beta = 0 on the slice: Neumann on both halves of a symmetric box
        let c = Coupling::from_slice(SliceCoords { gamma0: -1.0, alpha: -0.5, beta: 0.0 }).unwrap();
        let d = Domain::new(1.0, 0.5).unwrap();
        let levels = eigenvalues_with(&c, &d, 4, f64::NEG_INFINITY, &SpectrumOptions::default()).unwrap();
        // cos(k/2) = 0 twice: k = pi, pi, 3 pi, 3 pi
        let k: Vec<f64> = levels.iter().map(|l| l.momentum).collect();
        assert!((k[0] - PI).abs() < 1e-6 && (k[1] - PI).abs() < 1e-6, "{k:?}");
        assert!((k[2] - 3.0 * PI).abs() < 1e-6 && (k[3] - 3.0 * PI).abs() < 1e-6, "{k:?}");
    }

    #[test]
    fn counting_stays_within_two_of_decoupled_reference() {
        let d = Domain::default();
        let p = BCParams::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let levels = eigenvalues(&p, &d, 30, f64::NEG_INFINITY).unwrap();
        for l in &levels {
            let above = l.energy * (1.0 + 1e-9) + 1e-12;
            let n = l.index + 1;
            assert!(n.abs_diff(decoupled_count(above, &d)) <= 2);
        }
        assert!(weyl_defect(&levels[10..], &d) <= 2.0);
    }

    #[test]
    fn asymptotic_quadratic_roots() {
        let c = Coupling::from(BCParams { alpha: -1.0, beta: 0.5, gamma: -1.0, delta: 0.01 });
        let r = asymptotic_roots(&c);
        // 0.01 k^2 - 2 k + 0.5
        assert_eq!(r.len(), 2);
        assert!(r.iter().any(|k| (k - 199.75).abs() < 0.01));
    }
}

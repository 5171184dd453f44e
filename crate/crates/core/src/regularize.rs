//! The point interaction as the `a -> 0` limit of three Dirac deltas at
//! `-a`, `0`, `+a`, solved by transfer matrices.
//!
//! Each delta of strength `v` imposes `psi'(x+) - psi'(x-) = 2 v psi(x)` for the
//! Hamiltonian `-(1/2) d^2/dx^2`.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::BCParams;
use crate::roots::scan_values;
use crate::spectrum::{eigenvalues, Basis, Domain, EnergyLevel, SpectrumOptions};

/// Three deltas: `v_minus` at `-a`, `u` at `0`, `v_plus` at `+a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleDelta {
    pub a: f64,
    pub v_minus: f64,
    pub u: f64,
    pub v_plus: f64,
}

impl TripleDelta {
    pub fn new(a: f64, v_minus: f64, u: f64, v_plus: f64) -> Result<Self> {
        let td = Self { a, v_minus, u, v_plus };
        if ![a, v_minus, u, v_plus].iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("triple delta"));
        }
        let bare = v_minus == 0.0 && v_plus == 0.0;
        if a < 0.0 || (a == 0.0 && !bare) {
            return Err(Error::InvalidArgument(format!("half-spacing {a} must be positive")));
        }
        Ok(td)
    }

    /// A lone delta of strength `v` at the origin.
    pub fn single(strength: f64) -> Self {
        Self { a: 0.0, v_minus: 0.0, u: strength, v_plus: 0.0 }
    }

    fn check_inside(&self, domain: &Domain) -> Result<()> {
        if 2.0 * self.a >= domain.left_len().min(domain.right_len()) {
            return Err(Error::InvalidArgument(format!(
                "deltas at +-{} do not fit inside the box",
                self.a
            )));
        }
        Ok(())
    }
}

/// Strength schedule reproducing `params` as `a -> 0`.
pub fn strengths(a: f64, params: &BCParams) -> Result<TripleDelta> {
    let (al, be, ga, de) = (params.alpha, params.beta, params.gamma, params.delta);
    if be == 0.0 || de == 0.0 {
        return Err(Error::UnrepresentableParams);
    }
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!("half-spacing {a} must be positive")));
    }
    TripleDelta::new(
        a,
        -0.5 / a + (ga - 1.0) / (2.0 * de),
        -1.0 / a - (al * ga - 1.0) / (2.0 * be * a * a),
        -0.5 / a + (al - 1.0) / (2.0 * de),
    )
}

/// Free propagation of `(psi, psi')` over `len` at energy `E`.
///
/// Unimodular; entries grow like `cosh` below zero, so the solver itself
/// works with rescaled entries.
pub fn segment_matrix(energy: f64, len: f64) -> [[f64; 2]; 2] {
    let b = Basis::new(energy);
    let inv = 1.0 / b.scale(len);
    let (s, c) = (b.s(len, len) * inv, b.c(len, len) * inv);
    [[c, s], [-b.q * s, c]]
}

/// Jump of `(psi, psi')` across a delta of strength `v`.
pub fn jump_matrix(strength: f64) -> [[f64; 2]; 2] {
    [[1.0, 0.0], [2.0 * strength, 1.0]]
}

fn apply(m: &[[f64; 2]; 2], v: [f64; 2]) -> [f64; 2] {
    [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
}

/// `psi` at the right wall for the solution leaving the left wall with unit
/// slope, up to a positive factor.
pub fn wall_mismatch(energy: f64, td: &TripleDelta, domain: &Domain) -> f64 {
    let b = Basis::new(energy);
    let segs = [
        domain.left_len() - td.a,
        td.a,
        td.a,
        domain.right_len() - td.a,
    ];
    let jumps = [td.v_minus, td.u, td.v_plus];
    let mut v = [0.0, 1.0];
    for (i, &len) in segs.iter().enumerate() {
        if len > 0.0 {
            // scaled entries; the dropped factor exp(-kappa len) is positive
            let (s, c) = (b.s(len, len), b.c(len, len));
            v = [c * v[0] + s * v[1], -b.q * s * v[0] + c * v[1]];
            let m = v[0].abs().max(v[1].abs());
            if m > 0.0 {
                v = [v[0] / m, v[1] / m];
            }
        }
        if i < 3 {
            v = apply(&jump_matrix(jumps[i]), v);
        }
    }
    v[0]
}

fn energy_of(x: f64) -> f64 {
    0.5 * x * x.abs()
}

fn free_count(energy: f64, domain: &Domain) -> usize {
    if energy <= 0.0 {
        return 0;
    }
    let t = (2.0 * energy).sqrt() * domain.length / PI;
    if t.fract() == 0.0 {
        (t as usize).saturating_sub(1)
    } else {
        t.floor() as usize
    }
}

fn grid(td: &TripleDelta, domain: &Domain, refine: usize, k_max: f64) -> Vec<f64> {
    let h = PI / (4.0 * refine as f64 * domain.length);
    let reach = 2.0 * (td.v_minus.abs() + td.u.abs() + td.v_plus.abs()) + 50.0 / domain.length;
    let near = 50.0 / domain.length;
    let mut neg: Vec<f64> = (1..=(near / h).ceil() as usize).map(|j| j as f64 * h).collect();
    let ratio = 1.0 + 1.0 / (8.0 * refine as f64);
    let mut k = near;
    while k < reach {
        k *= ratio;
        neg.push(k);
    }
    let mut xs: Vec<f64> = neg.iter().rev().map(|k| -k).collect();
    xs.push(0.0);
    xs.extend((1..=(k_max / h).ceil() as usize).map(|j| j as f64 * h));
    xs
}

/// Lowest `count` eigenvalues of the box with three deltas, from the bottom.
///
/// At small `a` the lowest entries include the deep states bound by the
/// diverging strengths; [`convergence_study`] skips them.
pub fn spectrum_finite_a(td: &TripleDelta, domain: &Domain, count: usize) -> Result<Vec<EnergyLevel>> {
    spectrum_finite_a_with(td, domain, count, &SpectrumOptions::default())
}

pub fn spectrum_finite_a_with(
    td: &TripleDelta,
    domain: &Domain,
    count: usize,
    opts: &SpectrumOptions,
) -> Result<Vec<EnergyLevel>> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    td.check_inside(domain)?;
    let f = |x: f64| wall_mismatch(energy_of(x), td, domain);
    let xtol = |x: f64| opts.root_tol * 1e-5 * x.abs().max(1.0);
    let mut refine = opts.scan_refine.max(1);
    let mut k_max = (count + 6) as f64 * PI / domain.length;
    let mut last_err = None;
    for _ in 0..12 {
        let xs = grid(td, domain, refine, k_max);
        let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
        let roots = scan_values(&f, &xs, &ys, &xtol)?;
        let mut energies = Vec::new();
        for r in &roots {
            energies.push(energy_of(r.x));
            if r.double {
                energies.push(energy_of(r.x));
            }
        }
        if energies.len() < count + 1 {
            k_max *= 2.0;
            continue;
        }
        // three rank-one perturbations of the bare box move the count by at most three
        let bad = (0..energies.len() - 1).find_map(|i| {
            let mid = 0.5 * (energies[i] + energies[i + 1]);
            let reference = free_count(mid, domain);
            (energies[i] != energies[i + 1] && (i + 1).abs_diff(reference) > 3)
                .then_some(Error::MissedRoots { energy: mid, found: i + 1, reference })
        });
        if let Some(e) = bad {
            last_err = Some(e);
            refine *= 4;
            continue;
        }
        return Ok(energies.into_iter().take(count).enumerate().map(|(i, e)| EnergyLevel::new(i, e)).collect());
    }
    Err(last_err.unwrap_or(Error::NoConvergence { near: energy_of(k_max) }))
}

/// One row of a convergence table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub a: f64,
    /// Index in the point-interaction spectrum.
    pub level: usize,
    pub energy: f64,
    pub abs_error: f64,
}

// deep states bound by the diverging strengths sit below the matched window
const MAX_SPURIOUS: usize = 3;

/// Finite-`a` spectra against the point spectrum, level by level.
///
/// Rows are ordered by `a` as given, then by level.
pub fn convergence_study(
    params: &BCParams,
    domain: &Domain,
    a_list: &[f64],
    count: usize,
) -> Result<Vec<ConvergenceRow>> {
    if params.beta == 0.0 || params.delta == 0.0 {
        return Err(Error::UnrepresentableParams);
    }
    if a_list.is_empty() {
        return Ok(Vec::new());
    }
    let point = eigenvalues(params, domain, count, f64::NEG_INFINITY)?;
    let blocks: Vec<Result<Vec<ConvergenceRow>>> = a_list
        .par_iter()
        .map(|&a| {
            let td = strengths(a, params)?;
            let fin = spectrum_finite_a(&td, domain, count + MAX_SPURIOUS)?;
            let err_at = |m: usize| {
                point.iter().zip(&fin[m..]).map(|(p, f)| (p.energy - f.energy).abs()).fold(0.0, f64::max)
            };
            let offset = (0..=MAX_SPURIOUS).min_by(|&i, &j| err_at(i).total_cmp(&err_at(j))).unwrap_or(0);
            Ok(point
                .iter()
                .zip(&fin[offset..])
                .map(|(p, f)| ConvergenceRow { a, level: p.index, energy: f.energy, abs_error: (f.energy - p.energy).abs() })
                .collect())
        })
        .collect();
    let mut rows = Vec::new();
    for b in blocks {
        rows.extend(b?);
    }
    Ok(rows)
}

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};
use crate::params::{Coupling, PolarCoords};
use crate::spectrum::{spectrum_window, Domain, SpectrumOptions};

/// Distance from a tangent pole below which [`theta_branch`] refuses to evaluate.
pub const POLE_EPS: f64 = 1e-9;

fn pole_distance(arg: f64) -> f64 {
    let y = (arg - FRAC_PI_2).rem_euclid(PI);
    y.min(PI - y)
}

/// Polar angle at which `k` is an eigen-momentum in the `rho -> 0` limit,
///
/// ```text
/// theta(k) = arctan( tan(k (1-r)L) / (k gamma0^2) + tan(k r L) / k )
/// ```
///
/// as a principal value in `(-pi/2, pi/2)`; the branch is defined modulo `pi`.
pub fn theta_branch(k: f64, gamma0: f64, domain: &Domain) -> Result<f64> {
    if gamma0 == 0.0 {
        return Err(Error::InvalidGamma0);
    }
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidArgument(format!("momentum {k} must be positive")));
    }
    let (a, b) = (k * domain.right_len(), k * domain.left_len());
    if pole_distance(a) <= POLE_EPS || pole_distance(b) <= POLE_EPS {
        return Err(Error::NearPole { k, eps: POLE_EPS });
    }
    Ok((a.tan() / (k * gamma0 * gamma0) + b.tan() / k).atan())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticOptions {
    /// Polar angles sampled uniformly over one turn.
    pub theta_samples: usize,
    /// Momenta whose tangent arguments come closer than this to a pole are skipped.
    pub pole_margin: f64,
    pub spectrum: SpectrumOptions,
}

impl Default for AsymptoticOptions {
    fn default() -> Self {
        Self { theta_samples: 96, pole_margin: 1e-2, spectrum: SpectrumOptions::default() }
    }
}

/// Largest deviation, modulo `pi`, between the sampled polar angle and
/// [`theta_branch`] of every eigen-momentum in `k_window` on the circle of
/// radius `rho`.
pub fn compare_asymptotic(
    gamma0: f64,
    rho: f64,
    domain: &Domain,
    k_window: (f64, f64),
    opts: &AsymptoticOptions,
) -> Result<f64> {
    let (k_lo, k_hi) = k_window;
    if !(k_lo > 0.0 && k_hi > k_lo) {
        return Err(Error::InvalidArgument(format!("bad momentum window ({k_lo}, {k_hi})")));
    }
    if opts.theta_samples == 0 {
        return Err(Error::InvalidArgument("theta_samples must be positive".into()));
    }
    let floor = 0.5 * k_lo * k_lo;
    let count = ((k_hi - k_lo) * domain.length / PI).ceil() as usize + 4;
    let mut worst = 0.0f64;
    for j in 0..opts.theta_samples {
        let theta = TAU * (j as f64 + 0.5) / opts.theta_samples as f64;
        let c = Coupling::from_slice(PolarCoords { gamma0, rho, theta }.to_slice())?;
        let win = spectrum_window(&c, domain, count, floor, &opts.spectrum)?;
        for l in win.levels.iter().filter(|l| l.momentum <= k_hi) {
            let k = l.momentum;
            let margin = pole_distance(k * domain.right_len()).min(pole_distance(k * domain.left_len()));
            if margin < opts.pole_margin {
                continue;
            }
            let d = (theta - theta_branch(k, gamma0, domain)?).rem_euclid(PI);
            worst = worst.max(d.min(PI - d));
        }
    }
    Ok(worst)
}

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{swept_angle, Coupling, ParameterPath, SliceCoords};
use crate::spectrum::{eigenvalues_with, overlap, spectrum_window, wavefunction, Domain, SpectrumOptions, Wavefunction};

/// Finite-difference overlap connection `A[n][m] = <psi_n | d psi_m>` along one direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectionMatrix {
    /// Unit vector in `(alpha, beta)`.
    pub direction: (f64, f64),
    pub entries: Vec<Vec<f64>>,
    pub h: f64,
}

fn states(slice: SliceCoords, domain: &Domain, n: usize, opts: &SpectrumOptions) -> Result<Vec<Wavefunction>> {
    let c = Coupling::from_slice(slice)?;
    eigenvalues_with(&c, domain, n, f64::NEG_INFINITY, opts)?
        .iter()
        .map(|l| wavefunction(l, &c, domain))
        .collect()
}

fn flip(wf: &mut Wavefunction) {
    wf.amp_minus = -wf.amp_minus;
    wf.amp_plus = -wf.amp_plus;
}

/// Central-difference connection at a slice point, for the lowest `n_levels` states.
///
/// Displaced states are sign-aligned with the centre; an alignment overlap
/// below one half means `h` is too large or a level crossed.
pub fn connection(
    point: SliceCoords,
    direction: (f64, f64),
    h: f64,
    n_levels: usize,
    domain: &Domain,
) -> Result<ConnectionMatrix> {
    let norm = direction.0.hypot(direction.1);
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::InvalidArgument("direction must be a non-zero vector".into()));
    }
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("step {h} must be positive")));
    }
    let dir = (direction.0 / norm, direction.1 / norm);
    let opts = SpectrumOptions::default();
    let at = |s: f64| SliceCoords { gamma0: point.gamma0, alpha: point.alpha + s * h * dir.0, beta: point.beta + s * h * dir.1 };
    let centre = states(point, domain, n_levels, &opts)?;
    let mut plus = states(at(1.0), domain, n_levels, &opts)?;
    let mut minus = states(at(-1.0), domain, n_levels, &opts)?;
    for side in [&mut plus, &mut minus] {
        for (m, wf) in side.iter_mut().enumerate() {
            let o = overlap(&centre[m], wf)?;
            if o.abs() < 0.5 {
                return Err(Error::GaugeAmbiguity { level: m, overlap: o.abs() });
            }
            if o < 0.0 {
                flip(wf);
            }
        }
    }
    let mut entries = vec![vec![0.0; n_levels]; n_levels];
    for (n, row) in entries.iter_mut().enumerate() {
        for (m, e) in row.iter_mut().enumerate() {
            *e = (overlap(&centre[n], &plus[m])? - overlap(&centre[n], &minus[m])?) / (2.0 * h);
        }
    }
    Ok(ConnectionMatrix { direction: dir, entries, h })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionOptions {
    /// Extra levels carried above the reported ones.
    pub buffer: usize,
    /// Smallest acceptable norm of a reported row of the product.
    pub leak_tol: f64,
    /// Window floor; `None` means `-1e4 / L^2`.
    pub energy_floor: Option<f64>,
    pub spectrum: SpectrumOptions,
}

impl Default for EvolutionOptions {
    fn default() -> Self {
        Self { buffer: 8, leak_tol: 0.9, energy_floor: None, spectrum: SpectrumOptions::default() }
    }
}

/// Adiabatic evolution matrix along the vertices of `path`.
///
/// Each step overlap `<psi_p(step i) | psi_q(step i+1)>` is reduced to its
/// adiabatic part: the entry linking every state to its continuation (largest
/// overlap) is kept and non-adiabatic transitions are dropped. The ordered
/// product of these steps is returned for the lowest `n_levels` rows and
/// columns; row `n` describes where the `n`-th starting state ends.
///
/// Labels count the levels above the energy floor from the bottom, so a level
/// rising through the floor moves every label above it up by one.
pub fn evolution_matrix(path: &ParameterPath, domain: &Domain, n_levels: usize, opts: &EvolutionOptions) -> Result<Vec<Vec<f64>>> {
    if n_levels == 0 {
        return Err(Error::InvalidArgument("n_levels must be at least 1".into()));
    }
    swept_angle(path)?;
    let size = n_levels + opts.buffer;
    let floor = opts.energy_floor.unwrap_or(-1e4 / (domain.length * domain.length));
    let gamma0 = path.gamma0();
    let windows: Vec<Vec<Wavefunction>> = path
        .points()
        .par_iter()
        .map(|&(alpha, beta)| {
            let c = Coupling::from_slice(SliceCoords { gamma0, alpha, beta })?;
            spectrum_window(&c, domain, size, floor, &opts.spectrum)?
                .levels
                .iter()
                .map(|l| wavefunction(l, &c, domain))
                .collect()
        })
        .collect::<Result<_>>()?;

    let mut prod: Vec<Vec<f64>> = (0..n_levels).map(|n| (0..size).map(|m| f64::from(n == m)).collect()).collect();
    let mut prev = windows[0].clone();
    for next in &windows[1..] {
        let mut next = next.clone();
        // continuation map: column q takes its amplitude from row from[q]
        let mut from: Vec<Option<(usize, f64)>> = vec![None; size];
        for (q, wf) in next.iter_mut().enumerate() {
            let mut best = (0, 0.0f64);
            for (p, pw) in prev.iter().enumerate() {
                let o = overlap(pw, wf)?;
                if o.abs() > best.1.abs() {
                    best = (p, o);
                }
            }
            if best.1 < 0.0 {
                flip(wf);
                best.1 = -best.1;
            }
            // a state entering from below the floor has no predecessor
            if best.1 > 0.5 {
                from[q] = Some(best);
            }
        }
        prod = prod
            .iter()
            .map(|row| from.iter().map(|f| f.map_or(0.0, |(p, o)| row[p] * o)).collect())
            .collect();
        prev = next;
    }
    for (n, row) in prod.iter().enumerate() {
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < opts.leak_tol {
            return Err(Error::TruncationLeak { level: n, norm });
        }
    }
    Ok(prod.into_iter().map(|row| row[..n_levels].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_path_gives_identity() {
        let path = ParameterPath::open(-1.0, vec![(-0.7, 0.4); 6]).unwrap();
        let u = evolution_matrix(&path, &Domain::default(), 4, &EvolutionOptions::default()).unwrap();
        for (n, row) in u.iter().enumerate() {
            for (m, v) in row.iter().enumerate() {
                assert!((v - f64::from(n == m)).abs() < 1e-10, "{n},{m}: {v}");
            }
        }
    }

    #[test]
    fn connection_is_antisymmetric() {
        let p = SliceCoords::new(-1.0, -0.6, 0.3).unwrap();
        let a = connection(p, (0.3, 1.0), 1e-5, 5, &Domain::default()).unwrap();
        for n in 0..5 {
            assert!(a.entries[n][n].abs() <= 1e-6);
            for m in 0..5 {
                assert!((a.entries[n][m] + a.entries[m][n]).abs() <= 1e-4);
            }
        }
        assert!(a.entries[0][1].abs() > 1e-3);
    }

    #[test]
    fn coarse_step_is_refused() {
        // alpha = 1/gamma0 is where a deep bound state enters and relabels the levels
        let p = SliceCoords::new(-1.0, -0.99, 0.3).unwrap();
        assert!(matches!(
            connection(p, (1.0, 0.0), 0.02, 3, &Domain::default()),
            Err(Error::GaugeAmbiguity { .. })
        ));
    }
}

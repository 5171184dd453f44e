use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{swept_angle, winding_number, Coupling, ParameterPath, SliceCoords};
use crate::spectrum::{spectrum_window, Domain, SpectrumOptions, Window};

/// Tracker knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrackOptions {
    /// Levels below this energy are dropped; `None` means `-1e4 / L^2`.
    pub energy_floor: Option<f64>,
    /// A step is ambiguous when the runner-up assignment costs less than this
    /// multiple of the best one.
    pub ambiguity_factor: f64,
    /// Largest accepted energy change per step, in units of the local level gap.
    pub max_rel_jump: f64,
    /// Smallest step, as a fraction of the whole path.
    pub min_step: f64,
    /// Clean steps before the step is doubled again.
    pub grow_after: usize,
    /// Relative tolerance on the endpoint spectra of a closed loop.
    pub match_tol: f64,
    pub spectrum: SpectrumOptions,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self {
            energy_floor: None,
            ambiguity_factor: 3.0,
            max_rel_jump: 0.25,
            min_step: 1e-6,
            grow_after: 8,
            match_tol: 1e-8,
            spectrum: SpectrumOptions::default(),
        }
    }
}

impl TrackOptions {
    pub fn floor(&self, domain: &Domain) -> f64 {
        self.energy_floor.unwrap_or(-1e4 / (domain.length * domain.length))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LevelStatus {
    /// Followed from the start of the path to its end.
    Tracked,
    /// Dove below the energy floor.
    Absorbed,
    /// Rose above the energy floor part way along.
    Emitted,
}

/// Energy history of one level.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackedLevel {
    /// Absolute spectral index where the history begins.
    pub start_index: usize,
    /// Absolute spectral index at the last sample (or where it left the window).
    pub end_index: usize,
    pub status: LevelStatus,
    /// `(path position in [0, 1], energy)`.
    pub samples: Vec<(f64, f64)>,
}

/// Outcome of a closed-loop run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopResult {
    pub winding: i64,
    /// Index displacement of every level followed around the loop.
    pub shift: i64,
    pub spectra_match_error: f64,
    /// `shift / (2 winding)` when the loop winds; `+1` for the counterclockwise rule.
    pub orientation: Option<i64>,
    pub levels: Vec<TrackedLevel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evolution: Option<Vec<Vec<f64>>>,
}

/// Measured sign in `shift = 2 * ORIENTATION * winding`: a counterclockwise
/// turn in `(alpha, beta)` moves every level two slots up.
pub const ORIENTATION: i64 = 1;

// extra levels solved above the followed ones, to see the next gap
const MARGIN: usize = 3;
const MAX_OFFSET: i64 = 2;

#[derive(Debug, Clone, Copy)]
struct Active {
    track: usize,
    index: usize,
    energy: f64,
}

fn gap(prev: &Window, index: usize, energy: f64) -> f64 {
    let pos = index - prev.below_floor;
    let mut g = f64::INFINITY;
    if pos > 0 {
        g = g.min(energy - prev.levels[pos - 1].energy);
    }
    if let Some(up) = prev.levels.get(pos + 1) {
        g = g.min(up.energy - energy);
    }
    if !g.is_finite() {
        g = energy.abs().max(1.0);
    }
    g.max(1e-12 * energy.abs().max(1.0))
}

// Best uniform index offset between consecutive windows, or None when the
// assignment is ambiguous or too large a jump.
fn assign(active: &[Active], prev: &Window, next: &Window, floor: f64, opts: &TrackOptions) -> Option<i64> {
    let mut costs = Vec::new();
    for o in -MAX_OFFSET..=MAX_OFFSET {
        let mut cost = 0.0f64;
        let mut mapped = 0;
        let mut valid = true;
        for a in active {
            let g = gap(prev, a.index, a.energy);
            let target = a.index as i64 + o;
            if target < 0 {
                valid = false;
                break;
            }
            let target = target as usize;
            if target < next.below_floor {
                cost = cost.max((a.energy - floor).max(0.0) / g);
                continue;
            }
            match next.levels.get(target - next.below_floor) {
                Some(l) => {
                    cost = cost.max((l.energy - a.energy).abs() / g);
                    mapped += 1;
                }
                None => {
                    valid = false;
                    break;
                }
            }
        }
        if valid && mapped > 0 {
            costs.push((cost, o));
        }
    }
    costs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let &(best, o) = costs.first()?;
    if best > opts.max_rel_jump {
        return None;
    }
    if let Some(&(second, _)) = costs.get(1) {
        if second <= opts.ambiguity_factor * best {
            return None;
        }
    }
    Some(o)
}

/// Follow the lowest `n_levels` levels at the path start to its end.
///
/// Every vertex of the path is visited; steps between vertices are halved
/// whenever matching by energy is ambiguous and regrown after clean steps.
/// Levels that rise through the energy floor start new histories with
/// status `Emitted`.
pub fn trace_path(path: &ParameterPath, domain: &Domain, n_levels: usize, opts: &TrackOptions) -> Result<Vec<TrackedLevel>> {
    if n_levels == 0 {
        return Err(Error::InvalidArgument("n_levels must be at least 1".into()));
    }
    swept_angle(path)?;
    let floor = opts.floor(domain);
    let pts = path.points();
    let gamma0 = path.gamma0();
    let window_at = |i: usize, f: f64, count: usize| -> Result<Window> {
        let (alpha, beta) = if f == 0.0 {
            pts[i]
        } else {
            let (p, q) = (pts[i], pts[i + 1]);
            (p.0 + f * (q.0 - p.0), p.1 + f * (q.1 - p.1))
        };
        let c = Coupling::from_slice(SliceCoords { gamma0, alpha, beta })?;
        spectrum_window(&c, domain, count, floor, &opts.spectrum)
    };

    let mut win = window_at(0, 0.0, n_levels + MARGIN)?;
    let mut tracks: Vec<TrackedLevel> = Vec::new();
    let mut active: Vec<Active> = Vec::new();
    for l in win.levels.iter().take(n_levels) {
        active.push(Active { track: tracks.len(), index: l.index, energy: l.energy });
        tracks.push(TrackedLevel {
            start_index: l.index,
            end_index: l.index,
            status: LevelStatus::Tracked,
            samples: vec![(0.0, l.energy)],
        });
    }

    let n = path.segments();
    let min_df = opts.min_step * n as f64;
    let (mut seg, mut frac, mut df, mut clean) = (0usize, 0.0f64, 1.0f64, 0usize);
    while seg < n && !active.is_empty() {
        let f_new = (frac + df).min(1.0);
        let (i2, f2) = if f_new >= 1.0 { (seg + 1, 0.0) } else { (seg, f_new) };
        let next = window_at(i2, f2, active.len() + MARGIN)?;
        let Some(o) = assign(&active, &win, &next, floor, opts) else {
            df *= 0.5;
            clean = 0;
            if df < min_df {
                return Err(Error::StepUnderflow {
                    position: (seg as f64 + frac) / n as f64,
                    min_step: opts.min_step,
                });
            }
            continue;
        };
        let position = (i2 as f64 + f2) / n as f64;
        let mut lowest = usize::MAX;
        active.retain_mut(|a| {
            let target = (a.index as i64 + o) as usize;
            let tr = &mut tracks[a.track];
            tr.end_index = target;
            if target < next.below_floor {
                tr.status = LevelStatus::Absorbed;
                return false;
            }
            let e = next.levels[target - next.below_floor].energy;
            a.index = target;
            a.energy = e;
            tr.samples.push((position, e));
            lowest = lowest.min(target);
            true
        });
        for l in next.levels.iter().take_while(|l| l.index < lowest) {
            active.push(Active { track: tracks.len(), index: l.index, energy: l.energy });
            tracks.push(TrackedLevel {
                start_index: l.index,
                end_index: l.index,
                status: LevelStatus::Emitted,
                samples: vec![(position, l.energy)],
            });
        }
        active.sort_by_key(|a| a.index);
        win = next;
        seg = i2;
        frac = f2;
        clean += 1;
        if clean >= opts.grow_after {
            df = (2.0 * df).min(1.0);
            clean = 0;
        }
    }
    Ok(tracks)
}

/// Trace a closed loop and extract the index permutation of its levels.
pub fn loop_permutation(path: &ParameterPath, domain: &Domain, n_levels: usize, opts: &TrackOptions) -> Result<LoopResult> {
    if !path.is_closed() {
        return Err(Error::InvalidPath("loop_permutation needs a closed path".into()));
    }
    let winding = winding_number(path)?;
    let levels = trace_path(path, domain, n_levels, opts)?;
    let survivors: Vec<&TrackedLevel> = levels.iter().filter(|l| l.status == LevelStatus::Tracked).collect();
    let Some(first) = survivors.first() else {
        return Err(Error::SpectraMismatch("no level survived the loop".into()));
    };
    let shift = first.end_index as i64 - first.start_index as i64;
    if survivors.iter().any(|l| l.end_index as i64 - l.start_index as i64 != shift) {
        return Err(Error::SpectraMismatch("followed levels disagree on the index shift".into()));
    }
    // end energies against the start spectrum at the displaced indices
    let floor = opts.floor(domain);
    let start = Coupling::from_slice(path.slice_at(0.0))?;
    let below = spectrum_window(&start, domain, 1, floor, &opts.spectrum)?.below_floor;
    let top = survivors.iter().map(|l| l.end_index).max().unwrap_or(0);
    let reference = spectrum_window(&start, domain, top + 1 - below.min(top), floor, &opts.spectrum)?;
    let mut err = 0.0f64;
    for l in &survivors {
        let e_end = l.samples.last().map(|s| s.1).unwrap_or(f64::NAN);
        let e_ref = reference
            .levels
            .iter()
            .find(|r| r.index == l.end_index)
            .map(|r| r.energy)
            .ok_or_else(|| Error::SpectraMismatch(format!("index {} missing from the start spectrum", l.end_index)))?;
        err = err.max((e_end - e_ref).abs() / e_ref.abs().max(1.0));
    }
    if !(err <= opts.match_tol) {
        return Err(Error::SpectraMismatch(format!("relative mismatch {err:e} exceeds {:e}", opts.match_tol)));
    }
    let orientation = (winding != 0 && shift % (2 * winding) == 0).then(|| shift / (2 * winding));
    Ok(LoopResult { winding, shift, spectra_match_error: err, orientation, levels, evolution: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::PolarLoop;

    #[test]
    fn constant_path_keeps_every_level() {
        let path = ParameterPath::open(-1.0, vec![(-1.0, 0.5); 5]).unwrap();
        let tracks = trace_path(&path, &Domain::default(), 4, &TrackOptions::default()).unwrap();
        assert_eq!(tracks.len(), 4);
        for t in &tracks {
            assert_eq!(t.samples.len(), 5);
            assert!(t.samples.iter().all(|s| s.1 == t.samples[0].1));
            assert_eq!(t.start_index, t.end_index);
        }
    }

    #[test]
    fn quarter_loops_compose() {
        // a quarter turn ending on the beta = 0 line must still track
        let p = ParameterPath::polar_loop(PolarLoop::around_singularity(-1.0, 0.5, 0.25, 50)).unwrap();
        let tracks = trace_path(&p, &Domain::default(), 3, &TrackOptions::default()).unwrap();
        assert!(tracks.iter().all(|t| t.samples.last().unwrap().0 == 1.0));
    }

    #[test]
    fn loop_needs_closed_path() {
        let p = ParameterPath::open(-1.0, vec![(-1.0, 0.5), (-1.0, 0.6)]).unwrap();
        assert!(matches!(
            loop_permutation(&p, &Domain::default(), 2, &TrackOptions::default()),
            Err(Error::InvalidPath(_))
        ));
    }
}

//! Levels followed once around the singular point come back two slots higher.

use spiral_spectrum::holonomy::{loop_permutation, LevelStatus, TrackOptions};
use spiral_spectrum::{Domain, ParameterPath, PolarLoop};

fn main() -> spiral_spectrum::Result<()> {
    let domain = Domain::default();
    let opts = TrackOptions::default();
    for (turns, offset) in [(1.0, (0.0, 0.0)), (-1.0, (0.0, 0.0)), (2.0, (0.0, 0.0)), (1.0, (5.0, 5.0))] {
        let spec = PolarLoop { center_offset: offset, ..PolarLoop::around_singularity(-1.0, 0.5, turns, 1000) };
        let res = loop_permutation(&ParameterPath::polar_loop(spec)?, &domain, 6, &opts)?;
        println!(
            "turns={turns:+} offset={offset:?}: winding={} shift={} mismatch={:.1e}",
            res.winding, res.shift, res.spectra_match_error
        );
        for t in &res.levels {
            let (first, last) = (t.samples[0].1, t.samples[t.samples.len() - 1].1);
            let tag = match t.status {
                LevelStatus::Tracked => "",
                LevelStatus::Absorbed => " (absorbed)",
                LevelStatus::Emitted => " (emitted)",
            };
            println!("  {:>2} -> {:>2}   E {first:>12.5} -> {last:>12.5}{tag}", t.start_index, t.end_index);
        }
    }
    Ok(())
}

//! Ground-state shape and node count along one turn of the spiral.

use spiral_spectrum::holonomy::{trace_path, TrackOptions};
use spiral_spectrum::spectrum::{check_bc, node_count, wavefunction};
use spiral_spectrum::{Coupling, Domain, EnergyLevel, ParameterPath, PolarLoop};

fn main() -> spiral_spectrum::Result<()> {
    let domain = Domain::default();
    let path = ParameterPath::polar_loop(PolarLoop::around_singularity(-1.0, 0.5, 1.0, 1000))?;
    let track = &trace_path(&path, &domain, 1, &TrackOptions::default())?[0];
    let mut last = None;
    for &(t, e) in &track.samples {
        let slice = path.slice_at(t);
        let c = Coupling::from_slice(slice)?;
        let wf = wavefunction(&EnergyLevel::new(track.start_index, e), &c, &domain)?;
        let nodes = node_count(&wf);
        if last != Some(nodes) {
            let (r1, r2) = check_bc(&wf);
            println!(
                "t={t:.4} alpha={:+.4} beta={:+.4} E={e:+.5} nodes={nodes} bc=({r1:.1e}, {r2:.1e})",
                slice.alpha, slice.beta
            );
            let xs: Vec<f64> = (0..=8).map(|j| -domain.left_len() + domain.length * j as f64 / 8.0).collect();
            let psi = wf.evaluate(&xs)?;
            println!("    psi: {}", psi.iter().map(|v| format!("{v:+.3}")).collect::<Vec<_>>().join(" "));
            last = Some(nodes);
        }
    }
    Ok(())
}

//! Attractive and repulsive delta potentials at the split point.

use spiral_spectrum::spectrum::{eigenvalues, node_count, wavefunction};
use spiral_spectrum::{BCParams, Coupling, Domain};

fn main() -> spiral_spectrum::Result<()> {
    let domain = Domain::default();
    for v in [-5.0, -1.0, 1.0, 5.0] {
        let p = BCParams::delta_potential(v);
        let c = Coupling::from(p);
        println!("v = {v:+}");
        for l in eigenvalues(&p, &domain, 5, f64::NEG_INFINITY)? {
            let wf = wavefunction(&l, &c, &domain)?;
            let kind = if l.is_bound() { "bound" } else { "" };
            println!("  {:>2}  E={:>16.10}  nodes={}  {kind}", l.index, l.energy, node_count(&wf));
        }
    }
    Ok(())
}

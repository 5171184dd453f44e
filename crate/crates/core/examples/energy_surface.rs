//! Lowest levels on a grid of the `(alpha, beta)` slice at fixed `gamma0`.
//!
//! Writes `alpha,beta,level,energy` to stdout.
//! Usage: `cargo run --release --example energy_surface > surface.csv`

use std::io::Write;

use rayon::prelude::*;
use spiral_spectrum::format::sig12;
use spiral_spectrum::spectrum::eigenvalues_with;
use spiral_spectrum::spectrum::SpectrumOptions;
use spiral_spectrum::{Coupling, Domain, SliceCoords};

const N: usize = 41;
const LEVELS: usize = 4;

fn main() {
    let domain = Domain::default();
    let gamma0 = -1.0;
    let grid: Vec<(f64, f64)> = (0..N)
        .flat_map(|i| (0..N).map(move |j| (-2.0 + 2.0 * i as f64 / (N - 1) as f64, -1.0 + 2.0 * j as f64 / (N - 1) as f64)))
        .collect();
    let rows: Vec<String> = grid
        .par_iter()
        .map(|&(alpha, beta)| {
            let levels = SliceCoords::new(gamma0, alpha, beta)
                .and_then(Coupling::from_slice)
                .and_then(|c| eigenvalues_with(&c, &domain, LEVELS, f64::NEG_INFINITY, &SpectrumOptions::default()));
            match levels {
                Ok(ls) => ls.iter().map(|l| format!("{},{},{},{}\n", sig12(alpha), sig12(beta), l.index, sig12(l.energy))).collect(),
                Err(e) => format!("{},{},-1,nan  # {e}\n", sig12(alpha), sig12(beta)),
            }
        })
        .collect();
    let text = format!("alpha,beta,level,energy\n{}", rows.concat());
    // a closed pipe (e.g. `| head`) is not an error here
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

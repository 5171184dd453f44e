//! Adiabatic evolution matrix of an encircling and a non-encircling loop.

use spiral_spectrum::holonomy::{evolution_matrix, EvolutionOptions};
use spiral_spectrum::{Domain, ParameterPath, PolarLoop};

fn show(label: &str, u: &[Vec<f64>]) {
    println!("{label}");
    for row in u {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:8.4}")).collect();
        println!("  [{}]", cells.join(" "));
    }
}

fn main() -> spiral_spectrum::Result<()> {
    let domain = Domain::default();
    let opts = EvolutionOptions::default();
    let around = PolarLoop::around_singularity(-1.0, 0.5, 1.0, 2000);
    let u = evolution_matrix(&ParameterPath::polar_loop(around)?, &domain, 4, &opts)?;
    show("around (-1, 0):", &u);
    let aside = PolarLoop { center_offset: (5.0, 5.0), ..around };
    let u = evolution_matrix(&ParameterPath::polar_loop(aside)?, &domain, 4, &opts)?;
    show("centred at (4, 5):", &u);
    Ok(())
}

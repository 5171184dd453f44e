//! Finite-difference connection `<psi_n | d psi_m>` at a regular slice point.

use spiral_spectrum::holonomy::connection;
use spiral_spectrum::{Domain, SliceCoords};

fn main() -> spiral_spectrum::Result<()> {
    let point = SliceCoords::new(-1.0, -0.6, 0.3)?;
    for dir in [(1.0, 0.0), (0.0, 1.0)] {
        let a = connection(point, dir, 1e-5, 5, &Domain::default())?;
        println!("direction {:?}", a.direction);
        for row in &a.entries {
            println!("  {}", row.iter().map(|v| format!("{v:+10.5}")).collect::<Vec<_>>().join(" "));
        }
    }
    Ok(())
}

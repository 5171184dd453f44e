//! Free box: the point interaction is switched off and `E_n = n^2 pi^2 / 2 L^2`.

use std::f64::consts::PI;

use spiral_spectrum::spectrum::eigenvalues;
use spiral_spectrum::{BCParams, Domain};

fn main() -> spiral_spectrum::Result<()> {
    for r in [0.3, 0.5, 0.618034] {
        let domain = Domain::new(1.0, r)?;
        let levels = eigenvalues(&BCParams::free(), &domain, 8, f64::NEG_INFINITY)?;
        println!("r = {r}");
        for l in &levels {
            let n = (l.index + 1) as f64;
            let exact = 0.5 * (n * PI).powi(2);
            println!("  n={:<2} E={:<18.12} rel.err={:.1e}", l.index + 1, l.energy, (l.energy - exact).abs() / exact);
        }
    }
    Ok(())
}

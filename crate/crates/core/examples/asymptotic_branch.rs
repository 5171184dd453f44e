//! Eigen-angles on small circles against the limiting branch `theta(k)`.

use spiral_spectrum::holonomy::{compare_asymptotic, theta_branch, AsymptoticOptions};
use spiral_spectrum::Domain;

fn main() -> spiral_spectrum::Result<()> {
    let domain = Domain::default();
    println!("theta(k), gamma0 = -1");
    for k in [1.0, 2.5, 4.0, 7.0, 11.0] {
        println!("  k={k:<5} theta={:+.6}", theta_branch(k, -1.0, &domain)?);
    }
    let opts = AsymptoticOptions::default();
    let mut prev: Option<f64> = None;
    for rho in [1e-2, 1e-3, 1e-4] {
        let dev = compare_asymptotic(-1.0, rho, &domain, (1.0, 20.0), &opts)?;
        let ratio = prev.map_or(String::new(), |p| format!("  ratio {:.2}", p / dev));
        println!("rho={rho:.0e}  max deviation {dev:.3e}{ratio}");
        prev = Some(dev);
    }
    Ok(())
}

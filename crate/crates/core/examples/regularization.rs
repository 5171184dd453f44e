//! Three nearby delta potentials converging to a point interaction as `a -> 0`.

use spiral_spectrum::regularize::{convergence_study, strengths};
use spiral_spectrum::{BCParams, Domain};

fn main() -> spiral_spectrum::Result<()> {
    let domain = Domain::default();
    let params = BCParams::new(2.0, 1.0, 1.0, 1.0)?;
    let a_list = [1e-2, 1e-3, 1e-4];
    for &a in &a_list {
        let td = strengths(a, &params)?;
        println!("a={a:.0e}: v- = {:.4e}, u = {:.4e}, v+ = {:.4e}", td.v_minus, td.u, td.v_plus);
    }
    let rows = convergence_study(&params, &domain, &a_list, 5)?;
    println!("{:>6} {:>5} {:>18} {:>12}", "a", "level", "energy", "abs error");
    for r in &rows {
        println!("{:>6.0e} {:>5} {:>18.10} {:>12.3e}", r.a, r.level, r.energy, r.abs_error);
    }
    Ok(())
}

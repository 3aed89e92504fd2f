//! Local radii and both spectra of a reducible matrix.
//!
//! `cargo run --example spectrum [-- path/to/matrix.csv]`

use maxspec::io::load_matrix;
use maxspec::{spectrum, NonnegMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = match std::env::args().nth(1) {
        Some(path) => load_matrix(path)?,
        // two loops feeding a 2-cycle
        None => NonnegMatrix::from_rows(&[
            [1.0, 0.0, 0.0, 0.0],
            [0.5, 2.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 3.0],
            [0.0, 0.0, 0.5, 0.0],
        ])?,
    };

    let p = spectrum(&a)?;
    println!("classes: {:?}", p.classes);
    println!("{:>3} {:>12} {:>12}", "i", "r_{e_i}", "rho_{e_i}");
    for i in 0..p.n {
        println!("{:>3} {:>12.6} {:>12.6}", i + 1, p.r[i], p.rho[i]);
    }
    println!("max-algebra spectrum:    {:?}", p.sigma_max);
    println!("distinguished spectrum:  {:?}", p.sigma_dist);
    println!(
        "r(A) = {:.6}, rho(A) = {:.6}",
        p.max_cycle_mean(),
        p.spectral_radius()
    );

    // r_{e_i} <= rho_{e_i} <= n r_{e_i}
    let n = p.n as f64;
    for i in 0..p.n {
        assert!(p.r[i] <= p.rho[i] * (1.0 + 1e-12) && p.rho[i] <= n * p.r[i] * (1.0 + 1e-12));
    }
    Ok(())
}

//! One eigenvector per spectral value, in both semirings. Vertex 1 sees
//! no cycle, so 0 is a spectral value too.

use maxspec::spectrum::{dist_eigenvector, dist_residual, max_eigenvector, max_residual};
use maxspec::{spectrum, NonnegMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = NonnegMatrix::from_rows(&[
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.5, 2.0, 0.0],
        [0.0, 0.0, 0.0, 4.0],
        [0.0, 0.0, 1.0, 0.0],
    ])?;
    let p = spectrum(&a)?;

    for &lambda in &p.sigma_max {
        let w = p
            .max_witness_index(lambda)
            .expect("value comes from an index");
        let v = max_eigenvector(&a, lambda, w)?;
        let res = max_residual(&a, lambda, &v)?;
        println!(
            "A ⊗ v = {lambda:.4} v   v = {:?}   residual {res:.1e}",
            v.entries()
        );
        assert!(res < 1e-9);
    }
    for &lambda in &p.sigma_dist {
        let w = p
            .dist_witness_index(lambda)
            .expect("value comes from an index");
        let v = dist_eigenvector(&a, lambda, w)?;
        let res = dist_residual(&a, lambda, &v)?;
        println!(
            "A v   = {lambda:.4} v   v = {:?}   residual {res:.1e}",
            v.entries()
        );
        assert!(res < 1e-9);
    }
    Ok(())
}

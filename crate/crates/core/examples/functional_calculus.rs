//! Power series of matrices in both semirings and the spectral mapping
//! checks.

use maxspec::calculus::{
    check_commuting_family, check_spectral_map_dist, check_spectral_map_max, eval_matrix_classical,
    eval_matrix_max, FamilyPolynomial, MaxPolynomial, Monomial, PowerSeries,
};
use maxspec::{spectrum, NonnegMatrix};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = NonnegMatrix::from_rows(&[[0.0, 1.0 / 3.0], [1.0 / 3.0, 0.0]])?;

    for f in ["exp", "cosh", "sinh", "geom:2", "coeffs:1,0,3"] {
        let f: PowerSeries = f.parse()?;
        let fm = eval_matrix_max(&f, &a)?;
        let fc = eval_matrix_classical(&f, &a)?;
        println!("{f:>14}: f⊗(A) = {:?}", fm.rows());
        println!("{:>14}  f(A)  = {:?}", "", fc.rows());
        println!(
            "{:>14}  σ⊗ {:?}  σ_D {:?}",
            "",
            spectrum(&fm)?.sigma_max,
            spectrum(&fc)?.sigma_dist
        );
        assert!(!check_spectral_map_max(&f, &a)?.verdict.is_violated());
        assert!(!check_spectral_map_dist(&f, &a)?.verdict.is_violated());
    }

    // p(X, Y) = X ⊗ Y ⊕ 2 X on a commuting diagonal pair
    let x = NonnegMatrix::diag(&[1.0, 3.0])?;
    let y = NonnegMatrix::diag(&[2.0, 0.5])?;
    let p = MaxPolynomial::new(
        2,
        vec![
            Monomial::new(1.0, vec![1, 1]),
            Monomial::new(2.0, vec![1, 0]),
        ],
    )?;
    let r = check_commuting_family(&FamilyPolynomial::Max(p), &[x, y])?;
    println!("commuting family: {:?}", r.verdict);
    assert!(!r.verdict.is_violated());
    Ok(())
}

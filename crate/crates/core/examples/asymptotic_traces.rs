//! The four limit traces linking max-algebra and classical radii.

use maxspec::asymptotics::{
    bapat_trace, classical_power_trace, default_t_grid, max_power_trace, schur_trace, LimitTrace,
    DEFAULT_K_MAX,
};
use maxspec::NonnegMatrix;

fn show(name: &str, t: &LimitTrace) {
    let c = t.check();
    println!("{name}: limit {:.6}", t.limit);
    for j in (0..t.grid.len()).step_by((t.grid.len() / 6).max(1)) {
        println!(
            "  {:>6}  {:.6}  (scaled {:.6})",
            t.grid[j], t.values[j], t.scaled[j]
        );
    }
    println!(
        "  last {:.6}, gap {:.2e}, monotone {:?}, passed {}",
        t.last_value(),
        c.terminal_gap,
        c.monotone,
        c.passed()
    );
    assert!(c.passed());
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = NonnegMatrix::from_rows(&[[0.5, 2.0, 0.0], [1.0, 0.0, 0.3], [0.0, 0.0, 1.2]])?;
    let i = 2;
    show(
        "rho_{e_i}(A^(t))^(1/t)",
        &schur_trace(&a, i, &default_t_grid())?,
    );
    show(
        "rho_{e_i}(A^k max)^(1/k)",
        &max_power_trace(&a, i, DEFAULT_K_MAX)?,
    );
    show(
        "r_{e_i}(A^k)^(1/k)",
        &classical_power_trace(&a, i, DEFAULT_K_MAX)?,
    );
    show("r(A^k)^(1/k)", &bapat_trace(&a, DEFAULT_K_MAX)?);
    Ok(())
}

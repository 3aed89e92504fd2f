//! Fast routines against the brute-force oracles on random matrices.
//!
//! `cargo run --release --example oracle_crosscheck -- [count] [seed]`

use maxspec::oracles::{
    generate, oracle_classes, oracle_local_r, oracle_mcgm_enumerate, oracle_perron_bracket,
    GeneratorSpec,
};
use maxspec::spectrum;
use maxspec::spectrum::{max_cycle_mean, spectral_radius};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let count: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(300);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let spec = GeneratorSpec::general(1, 7, 0.5);

    let (mut worst_r, mut worst_local) = (0.0f64, 0.0f64);
    for k in 0..count {
        let a = generate(&spec, seed.wrapping_add(k))?;
        let rel = |x: f64, y: f64| {
            if x == y {
                0.0
            } else {
                (x - y).abs() / x.max(y)
            }
        };

        worst_r = worst_r.max(rel(max_cycle_mean(&a), oracle_mcgm_enumerate(&a)?));
        let p = spectrum(&a)?;
        assert_eq!(p.classes, oracle_classes(&a));
        for i in 0..a.n() {
            worst_local = worst_local.max(rel(p.r[i], oracle_local_r(&a, i)?));
        }
        let rho = spectral_radius(&a)?;
        let (lo, hi) = oracle_perron_bracket(&a, 12);
        assert!(rho >= lo * (1.0 - 1e-9) && rho <= hi * (1.0 + 1e-9));
    }
    println!("{count} matrices");
    println!("Karp vs enumeration: worst relative difference {worst_r:.2e}");
    println!("local radii vs enumeration: worst relative difference {worst_local:.2e}");
    assert!(worst_r <= 1e-12 && worst_local <= 1e-12);
    Ok(())
}

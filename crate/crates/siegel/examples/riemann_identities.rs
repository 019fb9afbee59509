//! Residuals of the Riemann relations between theta constants and second
//! order theta constants, plus the two-variable addition formula.

use num_complex::Complex64;
use siegel::theta::{verify_addition_formula, verify_riemann_product, verify_riemann_squares};
use siegel::{EvalOptions, SiegelPoint, SplitMix64};

fn main() {
    let opts = EvalOptions::default();
    let mut rng = SplitMix64::new(19);
    for g in [2usize, 3] {
        let tau = SiegelPoint::random(g, &mut rng);
        println!(
            "g = {g}: product relation residual {:.2e}, squares relation residual {:.2e}",
            verify_riemann_product(&tau, opts).unwrap(),
            verify_riemann_squares(&tau, opts).unwrap()
        );
    }
    let tau = SiegelPoint::random(2, &mut rng);
    let z: Vec<Complex64> = (0..2)
        .map(|_| Complex64::new(0.3 * rng.symmetric(), 0.2 * rng.symmetric()))
        .collect();
    let w: Vec<Complex64> = (0..2)
        .map(|_| Complex64::new(0.3 * rng.symmetric(), 0.2 * rng.symmetric()))
        .collect();
    println!(
        "addition formula (g = 2, random z, w): residual {:.2e}",
        verify_addition_formula(&tau, &z, &w, opts).unwrap()
    );
}

//! The squaring endomorphism of P^3 has degree 8: generic points have
//! exactly eight projective preimages, and on theta coordinates the map is
//! (f_a) -> (f_a^2).

use num_complex::Complex64;
use siegel::genus2::{f_vector, fiber_count, squaring_map, ProjectivePoint3};
use siegel::{EvalOptions, SiegelPoint, SplitMix64};

fn main() {
    let mut rng = SplitMix64::new(12);
    let mut counts = std::collections::BTreeMap::new();
    for _ in 0..100 {
        let coords = [
            Complex64::new(rng.symmetric() + 1.5, rng.symmetric()),
            Complex64::new(rng.symmetric() + 1.5, rng.symmetric()),
            Complex64::new(rng.symmetric() - 1.5, rng.symmetric()),
            Complex64::new(rng.symmetric() + 1.5, rng.symmetric()),
        ];
        let p = ProjectivePoint3::new(coords).unwrap();
        *counts.entry(fiber_count(&p, 1e-9)).or_insert(0usize) += 1;
    }
    println!("fiber sizes over 100 generic points: {counts:?}");

    let degenerate = ProjectivePoint3::new([
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    ])
    .unwrap();
    println!(
        "degenerate fiber over [1, 0, 0, 0]: {} point(s)",
        fiber_count(&degenerate, 1e-9)
    );

    // the modular interpretation
    let tau = SiegelPoint::random(2, &mut rng);
    let fv = f_vector(&tau, EvalOptions::default()).unwrap();
    let image = squaring_map(&ProjectivePoint3::new(fv).unwrap());
    let squares =
        ProjectivePoint3::new([fv[0] * fv[0], fv[1] * fv[1], fv[2] * fv[2], fv[3] * fv[3]])
            .unwrap();
    println!(
        "squaring the f-vector matches (f_a^2) projectively: {}",
        image.approx_eq(&squares, 1e-10)
    );
}

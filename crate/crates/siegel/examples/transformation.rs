//! Verifies the classical theta transformation formula on random symplectic
//! matrices and extracts the 8th root of unity kappa(gamma), checking its
//! closed-form 4th and 2nd powers.

use num_complex::Complex64;
use siegel::cocycle::{kappa_pow2, kappa_pow4, verify_transformation};
use siegel::group::GroupDescriptor;
use siegel::{EvalOptions, SiegelPoint, SplitMix64};

fn main() {
    let opts = EvalOptions::default();
    let mut rng = SplitMix64::new(7);
    let sp = GroupDescriptor::sp(2);
    println!("random gamma in Sp(4, Z), word length <= 12:");
    let mut shown = 0;
    while shown < 8 {
        let w = rng.below(13);
        let gamma = sp.random_element_with(&mut rng, w).unwrap();
        let tau = SiegelPoint::random(2, &mut rng);
        let gt = match tau.apply(&gamma) {
            Ok(t) if t.lambda_min() > 0.02 => t,
            _ => continue,
        };
        let _ = gt;
        let rep = match verify_transformation(&gamma, &tau, opts) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let k4 = kappa_pow4(&gamma);
        println!(
            "  word {w:2}  residual {:.2e}  kappa = {:+.4}{:+.4}i  kappa^4 = {k4:+} (exact {})",
            rep.relative(),
            rep.kappa.re,
            rep.kappa.im,
            (rep.kappa.powi(4) - Complex64::new(k4 as f64, 0.0)).norm() < 1e-9,
        );
        shown += 1;
    }

    println!("\nkappa^2 on level-2 principal congruence samples:");
    let d2 = GroupDescriptor::principal(2, 2);
    let mut shown = 0;
    while shown < 4 {
        let gamma = d2.random_element_with(&mut rng, 6).unwrap();
        let tau = SiegelPoint::random(2, &mut rng);
        if tau.apply(&gamma).map(|t| t.lambda_min()).unwrap_or(0.0) < 0.02 {
            continue;
        }
        let rep = match verify_transformation(&gamma, &tau, opts) {
            Ok(r) => r,
            Err(_) => continue,
        };
        let k2 = kappa_pow2(&gamma).unwrap();
        println!(
            "  kappa^2 = {:+.6}  closed form {k2:+}",
            rep.kappa.powi(2).re
        );
        shown += 1;
    }
}

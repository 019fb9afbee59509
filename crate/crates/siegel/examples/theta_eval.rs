//! Evaluates theta constants with certified truncation at a few points,
//! including the classical value theta[0;0](i) = pi^{1/4} / Gamma(3/4).

use siegel::chars::{enumerate, ParityFilter, ThetaCharacteristic};
use siegel::theta::{theta_constant, truncation_radius};
use siegel::{EvalOptions, SiegelPoint, SplitMix64};

fn main() {
    let opts = EvalOptions::default();

    // genus 1 at tau = i
    let tau = SiegelPoint::scaled_identity(1, 1.0);
    let m = ThetaCharacteristic::zero(1);
    let v = theta_constant(&m, &tau, opts).unwrap();
    println!("theta[0;0](i)        = {:.15}", v.value.re);
    println!("pi^(1/4)/Gamma(3/4)  = 1.086434811213308");
    println!("radius {} tail bound {:.2e}\n", v.radius, v.tail_bound);

    // all even theta constants at a random genus-2 point
    let mut rng = SplitMix64::new(42);
    let tau = SiegelPoint::random(2, &mut rng);
    println!("even theta constants at a random genus-2 point:");
    for m in enumerate(2, ParityFilter::Even) {
        let v = theta_constant(&m, &tau, opts).unwrap();
        println!("  theta[{m}] = {:+.12} {:+.12}i", v.value.re, v.value.im);
    }
    println!("(odd ones vanish identically at z = 0)");

    // the certified radius at the default tolerance
    let r = truncation_radius(tau.im(), 1e-12).unwrap();
    println!("\ncertified truncation radius at tol 1e-12: {r}");
}

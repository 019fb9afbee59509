//! Counts even and odd theta characteristics for small genus and checks
//! the closed forms 2^{g-1}(2^g + 1) and 2^{g-1}(2^g - 1).

use siegel::chars::{enumerate, ParityFilter};

fn main() {
    println!("genus | even | odd  | closed form");
    for g in 1..=4usize {
        let even = enumerate(g, ParityFilter::Even).len();
        let odd = enumerate(g, ParityFilter::Odd).len();
        let p = 1usize << (g - 1);
        let ok = even == p * ((1 << g) + 1) && odd == p * ((1 << g) - 1);
        println!(
            "  {g}   | {even:4} | {odd:4} | {}",
            if ok { "matches" } else { "MISMATCH" }
        );
    }
    let odd1 = enumerate(1, ParityFilter::Odd);
    println!("\nthe single odd genus-1 characteristic: {}", odd1[0]);
}

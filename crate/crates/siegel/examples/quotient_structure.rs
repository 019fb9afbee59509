//! Enumerates the finite quotients by coset BFS over residues and reports
//! the structure of G = Gamma_0(2)/Gamma_2^2(2,4).

use siegel::genus3;
use siegel::group::GroupDescriptor;
use siegel::quotient::{structure_report, FiniteQuotient};

fn main() {
    let dom = FiniteQuotient::enumerate(
        GroupDescriptor::gamma0(2, 2),
        GroupDescriptor::igusa_upper(2),
    )
    .unwrap();
    println!("[Gamma_0(2) : Gamma_2^2(2,4)] = {}", dom.order());

    let f2q = FiniteQuotient::enumerate(
        GroupDescriptor::igusa_upper(2),
        GroupDescriptor::igusa(2),
    )
    .unwrap();
    println!(
        "Gamma_2^2(2,4)/Gamma_2(2,4): order {}, abelian {}, exponent {}",
        f2q.order(),
        f2q.is_abelian(),
        f2q.exponent()
    );

    let q64 = genus3::phi_sum_quotient().unwrap();
    println!(
        "Gamma_3^2(2,4)/Gamma_3(2,4): order {} (the 2^6 translation words)",
        q64.order()
    );

    let st = structure_report(&dom, 16);
    println!("\nstructure of G (order {}):", st.order);
    println!("  abelian: {}", st.abelian);
    println!("  exponent: {}", st.exponent);
    println!("  conjugacy class sizes: {:?}", st.conjugacy_class_sizes);
    match st.normal_subgroup {
        Some(n) => println!(
            "  normal subgroup of order {} (exponent {}) with quotient of order {} ({}abelian)\n  => G = F_2^4 x| S_3",
            n.order,
            n.exponent,
            n.quotient_order,
            if n.quotient_abelian { "" } else { "non" }
        ),
        None => println!("  no normal elementary abelian subgroup of order 16 found"),
    }
}

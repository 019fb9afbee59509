//! Tour of the exact symplectic layer: membership predicates, random group
//! words, Fricke conjugation, and the characteristic action.

use siegel::chars::{act, inverse_act, ThetaCharacteristic};
use siegel::group::GroupDescriptor;
use siegel::{IntMat, SymplecticMatrix};

fn main() {
    // gamma_S with S = [[2,0],[0,0]] is M_1 of the genus-2 story
    let b1 = IntMat::symmetric_from_upper(2, &[2, 0, 0]);
    let m1 = SymplecticMatrix::gamma_s(&b1).unwrap();
    println!("M1 =\n{m1}");
    let upper = GroupDescriptor::igusa_upper(2);
    let igusa = GroupDescriptor::igusa(2);
    println!("M1 in Gamma_2^2(2,4): {}", upper.member(&m1).unwrap());
    println!("M1^2 in Gamma_2(2,4): {}", igusa.member(&m1.mul(&m1)).unwrap());

    // Fricke conjugation needs C = 0 mod 2 and is an involution
    let gamma = GroupDescriptor::gamma0(2, 2).random_element(5, 6).unwrap();
    let conj = gamma.fricke_conjugate().unwrap();
    println!(
        "\nrandom gamma in Gamma_0(2): conjugate of conjugate returns gamma: {}",
        conj.fricke_conjugate().unwrap() == gamma
    );
    println!(
        "J (odd C block) is not conjugable: {}",
        SymplecticMatrix::j(2).fricke_conjugate().is_err()
    );

    // the affine action on characteristics preserves parity
    let m = ThetaCharacteristic::new(vec![1, 0], vec![1, 1]).unwrap();
    let im = act(&gamma, &m).unwrap();
    println!(
        "\ncharacteristic {m} (parity {:+}) maps to {im} (parity {:+})",
        m.parity(),
        im.parity()
    );
    println!(
        "round trip through the inverse action: {}",
        act(&gamma, &inverse_act(&gamma, &m).unwrap()).unwrap() == m
    );
}

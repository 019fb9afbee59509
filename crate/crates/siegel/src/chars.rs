//! Theta characteristics: parity, enumeration, and the affine symplectic
//! action on F_2^{2g}.

use crate::error::{Error, Result};
use crate::intmat::mat_vec;
use crate::symplectic::SymplecticMatrix;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A column vector in F_2^{2g} split as (m', m''), entries canonically in
/// {0, 1}. The division by 2 inside the theta series happens in the theta
/// engine, not here.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ThetaCharacteristic {
    top: Vec<u8>,
    bot: Vec<u8>,
}

impl ThetaCharacteristic {
    pub fn new(top: Vec<u8>, bot: Vec<u8>) -> Result<ThetaCharacteristic> {
        if top.len() != bot.len() || top.is_empty() {
            return Err(Error::Dimension(top.len(), bot.len()));
        }
        if top.iter().chain(&bot).any(|&b| b > 1) {
            return Err(Error::Precondition("characteristic entries must be bits".into()));
        }
        Ok(ThetaCharacteristic { top, bot })
    }

    pub fn zero(g: usize) -> ThetaCharacteristic {
        ThetaCharacteristic {
            top: vec![0; g],
            bot: vec![0; g],
        }
    }

    pub fn genus(&self) -> usize {
        self.top.len()
    }

    /// m' entries.
    pub fn top(&self) -> &[u8] {
        &self.top
    }

    /// m'' entries.
    pub fn bot(&self) -> &[u8] {
        &self.bot
    }

    /// e(m) = (-1)^{t(m') m''}.
    pub fn parity(&self) -> i8 {
        let dot: u32 = self
            .top
            .iter()
            .zip(&self.bot)
            .map(|(&a, &b)| (a & b) as u32)
            .sum();
        if dot % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == 1
    }

    pub fn is_odd(&self) -> bool {
        self.parity() == -1
    }

    /// Position in the lexicographic enumeration of F_2^{2g}.
    pub fn index(&self) -> usize {
        let mut k = 0usize;
        for &b in self.top.iter().chain(&self.bot) {
            k = 2 * k + b as usize;
        }
        k
    }

    pub fn from_index(g: usize, mut k: usize) -> ThetaCharacteristic {
        let mut bits = vec![0u8; 2 * g];
        for i in (0..2 * g).rev() {
            bits[i] = (k & 1) as u8;
            k >>= 1;
        }
        ThetaCharacteristic {
            top: bits[..g].to_vec(),
            bot: bits[g..].to_vec(),
        }
    }
}

impl fmt::Display for ThetaCharacteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.top {
            write!(f, "{}", b)?;
        }
        write!(f, "|")?;
        for b in &self.bot {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ParityFilter {
    All,
    Even,
    Odd,
}

/// All characteristics of genus g in lexicographic order, filtered by parity.
pub fn enumerate(g: usize, filter: ParityFilter) -> Vec<ThetaCharacteristic> {
    (0..1usize << (2 * g))
        .map(|k| ThetaCharacteristic::from_index(g, k))
        .filter(|m| match filter {
            ParityFilter::All => true,
            ParityFilter::Even => m.is_even(),
            ParityFilter::Odd => m.is_odd(),
        })
        .collect()
}

/// The affine image of m under gamma before reduction mod 2:
/// (D m' - C m'' + diag(C tD), -B m' + A m'' + diag(A tB)).
pub fn act_unreduced(
    gamma: &SymplecticMatrix,
    m: &ThetaCharacteristic,
) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    if gamma.genus() != m.genus() {
        return Err(Error::GenusMismatch(gamma.genus(), m.genus()));
    }
    let (a, b, c, d) = (gamma.a(), gamma.b(), gamma.c(), gamma.d());
    let mp: Vec<BigInt> = m.top.iter().map(|&x| BigInt::from(x)).collect();
    let mpp: Vec<BigInt> = m.bot.iter().map(|&x| BigInt::from(x)).collect();
    let ctd = (&c * &d.transpose()).diag();
    let atb = (&a * &b.transpose()).diag();
    let dm = mat_vec(&d, &mp);
    let cm = mat_vec(&c, &mpp);
    let bm = mat_vec(&b, &mp);
    let am = mat_vec(&a, &mpp);
    let top: Vec<BigInt> = (0..m.genus())
        .map(|i| &dm[i] - &cm[i] + &ctd[i])
        .collect();
    let bot: Vec<BigInt> = (0..m.genus())
        .map(|i| -&bm[i] + &am[i] + &atb[i])
        .collect();
    Ok((top, bot))
}

fn reduce_bits(v: &[BigInt]) -> Vec<u8> {
    v.iter()
        .map(|x| {
            let r = x % BigInt::from(2);
            if r == BigInt::from(0) {
                0
            } else {
                1
            }
        })
        .collect()
}

/// The action on theta characteristics, reduced mod 2. Parity is preserved.
pub fn act(gamma: &SymplecticMatrix, m: &ThetaCharacteristic) -> Result<ThetaCharacteristic> {
    let (top, bot) = act_unreduced(gamma, m)?;
    ThetaCharacteristic::new(reduce_bits(&top), reduce_bits(&bot))
}

/// act(gamma^{-1}, m); the round trip act(gamma, inverse_act(gamma, m)) = m.
pub fn inverse_act(
    gamma: &SymplecticMatrix,
    m: &ThetaCharacteristic,
) -> Result<ThetaCharacteristic> {
    act(&gamma.inverse(), m)
}

/// Ordered list of distinct odd characteristics, the matrix M of the
/// gradient construction.
#[derive(Clone, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub struct CharacteristicMatrix {
    cols: Vec<ThetaCharacteristic>,
}

impl CharacteristicMatrix {
    pub fn new(cols: Vec<ThetaCharacteristic>) -> Result<CharacteristicMatrix> {
        if cols.is_empty() {
            return Err(Error::Precondition("empty characteristic matrix".into()));
        }
        let g = cols[0].genus();
        for m in &cols {
            if m.genus() != g {
                return Err(Error::GenusMismatch(m.genus(), g));
            }
            if !m.is_odd() {
                return Err(Error::Precondition(format!("column {m} is not odd")));
            }
        }
        for i in 0..cols.len() {
            for j in (i + 1)..cols.len() {
                if cols[i] == cols[j] {
                    return Err(Error::Precondition("duplicate columns".into()));
                }
            }
        }
        Ok(CharacteristicMatrix { cols })
    }

    pub fn genus(&self) -> usize {
        self.cols[0].genus()
    }

    pub fn columns(&self) -> &[ThetaCharacteristic] {
        &self.cols
    }

    /// Columnwise action, reduced mod 2.
    pub fn act(&self, gamma: &SymplecticMatrix) -> Result<CharacteristicMatrix> {
        let cols = self
            .cols
            .iter()
            .map(|m| act(gamma, m))
            .collect::<Result<Vec<_>>>()?;
        CharacteristicMatrix::new(cols)
    }

    pub fn inverse_act(&self, gamma: &SymplecticMatrix) -> Result<CharacteristicMatrix> {
        self.act(&gamma.inverse())
    }
}

impl fmt::Display for CharacteristicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.cols.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupDescriptor;
    use crate::rng::SplitMix64;

    #[test]
    fn parity_basics() {
        let g2_zero = ThetaCharacteristic::zero(2);
        assert_eq!(g2_zero.parity(), 1);
        let m = ThetaCharacteristic::new(vec![1, 0], vec![1, 0]).unwrap();
        assert_eq!(m.parity(), -1);
    }

    #[test]
    fn census_matches_closed_form() {
        // 2^{g-1}(2^g + 1) even and 2^{g-1}(2^g - 1) odd characteristics
        for g in 1..=4usize {
            let even = enumerate(g, ParityFilter::Even).len();
            let odd = enumerate(g, ParityFilter::Odd).len();
            let p = 1usize << (g - 1);
            assert_eq!(even, p * ((1 << g) + 1));
            assert_eq!(odd, p * ((1 << g) - 1));
            assert_eq!(even + odd, 1 << (2 * g));
        }
    }

    #[test]
    fn only_odd_genus_one_characteristic() {
        let odd = enumerate(1, ParityFilter::Odd);
        assert_eq!(odd.len(), 1);
        assert_eq!(odd[0], ThetaCharacteristic::new(vec![1], vec![1]).unwrap());
    }

    #[test]
    fn identity_acts_trivially() {
        let id = SymplecticMatrix::identity(3);
        for m in enumerate(3, ParityFilter::All) {
            assert_eq!(act(&id, &m).unwrap(), m);
        }
    }

    #[test]
    fn action_preserves_parity_and_permutes() {
        for g in [2usize, 3] {
            let sp = GroupDescriptor::sp(g);
            let mut rng = SplitMix64::new(17);
            for _ in 0..25 {
                let gamma = sp.random_element_with(&mut rng, 8).unwrap();
                let all = enumerate(g, ParityFilter::All);
                let mut seen = std::collections::BTreeSet::new();
                for m in &all {
                    let im = act(&gamma, m).unwrap();
                    assert_eq!(im.parity(), m.parity());
                    seen.insert(im.index());
                }
                assert_eq!(seen.len(), all.len(), "action is a permutation");
            }
        }
    }

    #[test]
    fn translation_action_matches_block_formula() {
        // gamma_B with A = D = 1, C = 0 maps m to (m', -B m' + m'' + diag(B))
        use crate::intmat::IntMat;
        let b = IntMat::symmetric_from_upper(2, &[2, 1, 0]);
        let gamma = SymplecticMatrix::gamma_s(&b).unwrap();
        for m in enumerate(2, ParityFilter::All) {
            let im = act(&gamma, &m).unwrap();
            assert_eq!(im.top(), m.top());
            for i in 0..2 {
                let mut want = m.bot()[i] as i64 + b.get(i, i).clone().try_into().unwrap_or(0i64);
                for j in 0..2 {
                    let bij: i64 = b.get(i, j).clone().try_into().unwrap();
                    want -= bij * m.top()[j] as i64;
                }
                assert_eq!(im.bot()[i] as i64, want.rem_euclid(2));
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let sp = GroupDescriptor::sp(2);
        let mut rng = SplitMix64::new(3);
        for _ in 0..50 {
            let gamma = sp.random_element_with(&mut rng, 7).unwrap();
            for m in enumerate(2, ParityFilter::All) {
                let back = act(&gamma, &inverse_act(&gamma, &m).unwrap()).unwrap();
                assert_eq!(back, m);
            }
        }
    }

    #[test]
    fn deep_congruence_fixes_characteristics() {
        // gamma in Gamma_g(4,8): gamma^{-1} . m = m
        use crate::group::GroupKind;
        for g in [2usize, 3] {
            let d = GroupDescriptor::new(GroupKind::Igusa(4), g);
            let mut rng = SplitMix64::new(11);
            for _ in 0..20 {
                let gamma = d.random_element_with(&mut rng, 6).unwrap();
                for m in enumerate(g, ParityFilter::All) {
                    assert_eq!(inverse_act(&gamma, &m).unwrap(), m);
                }
            }
        }
    }

    #[test]
    fn characteristic_matrix_validation() {
        let odd = enumerate(3, ParityFilter::Odd);
        assert!(CharacteristicMatrix::new(vec![odd[0].clone(), odd[1].clone()]).is_ok());
        assert!(CharacteristicMatrix::new(vec![odd[0].clone(), odd[0].clone()]).is_err());
        let even = enumerate(3, ParityFilter::Even);
        assert!(CharacteristicMatrix::new(vec![odd[0].clone(), even[0].clone()]).is_err());
    }
}

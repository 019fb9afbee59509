//! The genus-3 payload: rank-one gradient forms W(M), the exact character
//! chi_M, the symmetrization Phi(M) over the 64-element quotient
//! Gamma_3^2(2,4)/Gamma_3(2,4), the classification of the 378 odd pairs,
//! and the R_16 relation between theta constants.

use crate::chars::{enumerate, CharacteristicMatrix, ParityFilter, ThetaCharacteristic};
use crate::cocycle::{kappa_pow4, phi};
use crate::cyclotomic::Cyclotomic8;
use crate::error::{Error, Result};
use crate::group::GroupDescriptor;
use crate::intmat::IntMat;
use crate::quotient::FiniteQuotient;
use crate::symplectic::SymplecticMatrix;
use crate::theta::{
    cocycle_matrix, second_order, theta_constant, theta_gradient, EvalOptions, SiegelPoint,
};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// The six symmetric matrices B_1..B_6 whose translations generate the
/// quotient Gamma_3^2(2,4)/Gamma_3(2,4).
pub fn b_matrices() -> Vec<IntMat> {
    let mut out = Vec::new();
    for i in 0..3 {
        let mut b = IntMat::zeros(3, 3);
        b.set(i, i, 2.into());
        out.push(b);
    }
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let mut b = IntMat::zeros(3, 3);
        b.set(i, j, 1.into());
        b.set(j, i, 1.into());
        out.push(b);
    }
    out
}

/// The translation generators M_1..M_6 of the quotient.
pub fn phi_sum_generators() -> Vec<SymplecticMatrix> {
    b_matrices()
        .iter()
        .map(|b| SymplecticMatrix::gamma_s(b).unwrap())
        .collect()
}

/// The 64-element quotient Gamma_3^2(2,4)/Gamma_3(2,4). The enumerated
/// order must be exactly 2^6; anything else is a hard failure.
pub fn phi_sum_quotient() -> Result<FiniteQuotient> {
    let q = FiniteQuotient::enumerate_with(
        GroupDescriptor::igusa_upper(3),
        GroupDescriptor::igusa(3),
        &phi_sum_generators(),
        256,
    )?;
    if q.order() != 64 {
        return Err(Error::Inconsistent(format!(
            "expected 64 cosets from the 2^6 words, found {}",
            q.order()
        )));
    }
    Ok(q)
}

fn complex_outer(w: &[Complex64]) -> DMatrix<Complex64> {
    let g = w.len();
    DMatrix::from_fn(g, g, |i, j| w[i] * w[j])
}

fn cross3(a: &[Complex64], b: &[Complex64]) -> [Complex64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// W(M)(tau) = pi^{-4} (psi_1 x psi_2) t(psi_1 x psi_2) for a pair of
/// distinct odd genus-3 characteristics; symmetric of rank at most one.
pub fn gradient_form(
    m: &CharacteristicMatrix,
    tau: &SiegelPoint,
    opts: EvalOptions,
) -> Result<DMatrix<Complex64>> {
    if m.genus() != 3 || m.columns().len() != 2 {
        return Err(Error::Precondition(
            "gradient form needs two odd genus-3 characteristics".into(),
        ));
    }
    if tau.genus() != 3 {
        return Err(Error::GenusMismatch(tau.genus(), 3));
    }
    let p1 = theta_gradient(&m.columns()[0], tau, opts)?.value;
    let p2 = theta_gradient(&m.columns()[1], tau, opts)?.value;
    let w = cross3(&p1, &p2);
    let scale = PI.powi(-4);
    Ok(complex_outer(&w) * Complex64::new(scale, 0.0))
}

/// chi_M(gamma) = kappa(gamma)^{2g-2} e(2 phi_{m_1}(gamma) + 2 phi_{m_2}(gamma))
/// as an exact element of Z[zeta_8]; for g = 3 the kappa power is
/// kappa^4 = (-1)^{Tr(tB C)}.
pub fn chi(m: &CharacteristicMatrix, gamma: &SymplecticMatrix) -> Result<Cyclotomic8> {
    if m.genus() != gamma.genus() {
        return Err(Error::GenusMismatch(m.genus(), gamma.genus()));
    }
    let mut acc = Cyclotomic8::from_int(kappa_pow4(gamma) as i64);
    for col in m.columns() {
        acc = acc * phi(col, gamma)?.exp_double();
    }
    Ok(acc)
}

/// Key of a W-term: the unordered pair of characteristics. W is invariant
/// under column swap (the wedge flips sign, the outer product does not).
pub type PairKey = (ThetaCharacteristic, ThetaCharacteristic);

pub fn canonical_key(m: &CharacteristicMatrix) -> PairKey {
    let a = m.columns()[0].clone();
    let b = m.columns()[1].clone();
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A finite exact combination sum of c_N W(N).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalThetaCombination {
    coeffs: BTreeMap<PairKey, Cyclotomic8>,
}

impl FormalThetaCombination {
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coefficients(&self) -> &BTreeMap<PairKey, Cyclotomic8> {
        &self.coeffs
    }

    pub fn coefficient(&self, key: &PairKey) -> Cyclotomic8 {
        self.coeffs.get(key).copied().unwrap_or(Cyclotomic8::ZERO)
    }

    /// Numerical evaluation: the matrix sum and the largest single-term
    /// norm as the cancellation scale.
    pub fn evaluate(
        &self,
        tau: &SiegelPoint,
        opts: EvalOptions,
    ) -> Result<(DMatrix<Complex64>, f64)> {
        let mut acc: DMatrix<Complex64> = DMatrix::zeros(3, 3);
        let mut scale: f64 = 0.0;
        for (key, c) in &self.coeffs {
            let m = CharacteristicMatrix::new(vec![key.0.clone(), key.1.clone()])?;
            let w = gradient_form(&m, tau, opts)?;
            scale = scale.max(w.norm() * c.to_complex().norm());
            acc += w * c.to_complex();
        }
        Ok((acc, scale))
    }
}

/// The formal symmetrization
///   Phi(M) = sum over the quotient of kappa(gamma)^4
///            e(2 phi_{n_1}(gamma) + 2 phi_{n_2}(gamma)) W(N),
/// with N = gamma^{-1}.M, grouped by unordered key. Coefficients are exact;
/// terms with kappa^4 = 1 and phases in i^Z stay in Z[i].
pub fn symmetrize(
    m: &CharacteristicMatrix,
    quotient: &FiniteQuotient,
) -> Result<FormalThetaCombination> {
    let mut coeffs: BTreeMap<PairKey, Cyclotomic8> = BTreeMap::new();
    for (key, c) in symmetrize_terms(m, quotient)? {
        let entry = coeffs.entry(key).or_insert(Cyclotomic8::ZERO);
        *entry = *entry + c;
    }
    coeffs.retain(|_, c| !c.is_zero());
    Ok(FormalThetaCombination { coeffs })
}

/// Same sum with ordered keys (n_1, n_2) kept as inherited from (m_1, m_2);
/// this is the granularity in which the four terms N_1..N_4 of the worked
/// example each carry coefficient 16.
pub fn symmetrize_ordered(
    m: &CharacteristicMatrix,
    quotient: &FiniteQuotient,
) -> Result<BTreeMap<(ThetaCharacteristic, ThetaCharacteristic), Cyclotomic8>> {
    let mut coeffs: BTreeMap<(ThetaCharacteristic, ThetaCharacteristic), Cyclotomic8> =
        BTreeMap::new();
    for i in 0..quotient.order() as u16 {
        let gamma = quotient.lift(i);
        debug_assert!(gamma.c().is_zero(), "quotient lift is not a translation");
        let n = m.inverse_act(gamma)?;
        let c = chi(&n, gamma)?;
        let key = (n.columns()[0].clone(), n.columns()[1].clone());
        let entry = coeffs.entry(key).or_insert(Cyclotomic8::ZERO);
        *entry = *entry + c;
    }
    coeffs.retain(|_, c| !c.is_zero());
    Ok(coeffs)
}

fn symmetrize_terms(
    m: &CharacteristicMatrix,
    quotient: &FiniteQuotient,
) -> Result<Vec<(PairKey, Cyclotomic8)>> {
    let mut out = Vec::with_capacity(quotient.order());
    for i in 0..quotient.order() as u16 {
        let gamma = quotient.lift(i);
        let n = m.inverse_act(gamma)?;
        let c = chi(&n, gamma)?;
        out.push((canonical_key(&n), c));
    }
    Ok(out)
}

/// Direct numerical slash sum over the 64 cosets: translations have
/// C = 0 and det(C tau + D) = 1, so each term is W(M)(tau + B).
pub fn phi_direct(
    m: &CharacteristicMatrix,
    quotient: &FiniteQuotient,
    tau: &SiegelPoint,
    opts: EvalOptions,
) -> Result<(DMatrix<Complex64>, f64)> {
    let mut acc: DMatrix<Complex64> = DMatrix::zeros(3, 3);
    let mut scale: f64 = 0.0;
    for i in 0..quotient.order() as u16 {
        let gamma = quotient.lift(i);
        let shifted = tau.translate(&gamma.b())?;
        let w = gradient_form(m, &shifted, opts)?;
        scale = scale.max(w.norm());
        acc += w;
    }
    Ok((acc, scale))
}

/// All 378 unordered pairs of distinct odd genus-3 characteristics.
pub fn odd_pairs() -> Vec<CharacteristicMatrix> {
    let odd = enumerate(3, ParityFilter::Odd);
    let mut out = Vec::with_capacity(378);
    for i in 0..odd.len() {
        for j in (i + 1)..odd.len() {
            out.push(CharacteristicMatrix::new(vec![odd[i].clone(), odd[j].clone()]).unwrap());
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub total: usize,
    pub nonvanishing: Vec<CharacteristicMatrix>,
    pub vanishing_count: usize,
    /// nonvanishing set is exactly the pairs with equal first components
    pub criterion_matches: bool,
    /// 42 agrees with the direct census over the 28 odd characteristics
    pub census_consistent: bool,
}

/// Iterates all pairs, decides vanishing of the exact formal combination,
/// and cross-checks the m_1' = m_2' criterion and the combinatorial census.
pub fn classify_all(quotient: &FiniteQuotient) -> Result<ClassificationReport> {
    let pairs = odd_pairs();
    let flags: Vec<bool> = pairs
        .par_iter()
        .map(|m| symmetrize(m, quotient).map(|c| !c.is_zero()))
        .collect::<Result<Vec<bool>>>()?;
    let mut nonvanishing = Vec::new();
    let mut criterion_matches = true;
    for (m, &nz) in pairs.iter().zip(&flags) {
        let same_top = m.columns()[0].top() == m.columns()[1].top();
        if nz != same_top {
            criterion_matches = false;
        }
        if nz {
            nonvanishing.push(m.clone());
        }
    }
    // census: for each nonzero m' there are 4 odd characteristics sharing it
    let odd = enumerate(3, ParityFilter::Odd);
    let mut by_top: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    for m in &odd {
        *by_top.entry(m.top().to_vec()).or_insert(0) += 1;
    }
    let census: usize = by_top.values().map(|&k| k * (k.saturating_sub(1)) / 2).sum();
    Ok(ClassificationReport {
        total: pairs.len(),
        vanishing_count: pairs.len() - nonvanishing.len(),
        census_consistent: census == nonvanishing.len(),
        nonvanishing,
        criterion_matches,
    })
}

/// Numerical residual of the transformation law of W under gamma:
///   W(gamma.M)(gamma.tau) = chi_M(gamma) det(C tau + D)^4
///                           t(C tau+D)^{-1} W(M)(tau) (C tau+D)^{-1}.
pub fn verify_w_transformation(
    m: &CharacteristicMatrix,
    gamma: &SymplecticMatrix,
    tau: &SiegelPoint,
    opts: EvalOptions,
) -> Result<f64> {
    let gamma_tau = tau.apply(gamma)?;
    let lhs = gradient_form(&m.act(gamma)?, &gamma_tau, opts)?;
    let cd = cocycle_matrix(gamma, tau);
    let det = cd.determinant();
    let cd_inv = cd
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::IllConditioned("C tau + D singular".into()))?;
    let w = gradient_form(m, tau, opts)?;
    let rhs = cd_inv.transpose() * w * &cd_inv * (chi(m, gamma)?.to_complex() * det.powi(4));
    let scale = lhs.norm().max(rhs.norm()).max(1e-30);
    Ok((lhs - rhs).norm() / scale)
}

/// Relative residual of R_16 = 2^3 sum theta_m^16 - (sum theta_m^8)^2 over
/// the 36 even characteristics, scaled by the larger of the two sides.
pub fn verify_r16(tau: &SiegelPoint, opts: EvalOptions) -> Result<f64> {
    if tau.genus() != 3 {
        return Err(Error::GenusMismatch(tau.genus(), 3));
    }
    let (s16, s8) = r16_sums(tau, opts)?;
    let lhs = s16 * 8.0;
    let rhs = s8 * s8;
    let scale = lhs.norm().max(rhs.norm()).max(1e-30);
    Ok((lhs - rhs).norm() / scale)
}

/// The two power sums of the R_16 relation.
pub fn r16_sums(tau: &SiegelPoint, opts: EvalOptions) -> Result<(Complex64, Complex64)> {
    let mut s16 = Complex64::new(0.0, 0.0);
    let mut s8 = Complex64::new(0.0, 0.0);
    for m in enumerate(tau.genus(), ParityFilter::Even) {
        let v = theta_constant(&m, tau, opts)?.value;
        s8 += v.powi(8);
        s16 += v.powi(16);
    }
    Ok((s16, s8))
}

/// The genus-2 analogue of the R_16 expression. No relation is expected
/// there; the value is reported, never asserted.
pub fn r16_genus2_value(tau: &SiegelPoint, opts: EvalOptions) -> Result<f64> {
    if tau.genus() != 2 {
        return Err(Error::GenusMismatch(tau.genus(), 2));
    }
    let (s16, s8) = r16_sums(tau, opts)?;
    let lhs = s16 * 8.0;
    let rhs = s8 * s8;
    let scale = lhs.norm().max(rhs.norm()).max(1e-30);
    Ok((lhs - rhs).norm() / scale)
}

/// q = prod over a in F_2^3 of f_a; exact sign census plus the numerical
/// invariance ratio q(M_i . tau)/q(tau) for each quotient generator.
pub fn verify_q_invariance(
    tau: &SiegelPoint,
    opts: EvalOptions,
) -> Result<QInvarianceReport> {
    if tau.genus() != 3 {
        return Err(Error::GenusMismatch(tau.genus(), 3));
    }
    // exact census: Theta[a](tau + B) = i^{taBa} Theta[a](tau); the product
    // of the phases over all a must be exactly 1 for each generator
    let mut census_ok = true;
    for b in b_matrices() {
        let mut phase = Cyclotomic8::ONE;
        let bv = b.to_i64_rows()?;
        for idx in 0..8usize {
            let a = [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1];
            let mut quad = 0i64;
            for i in 0..3 {
                for j in 0..3 {
                    quad += bv[i][j] * a[i] as i64 * a[j] as i64;
                }
            }
            phase = phase * Cyclotomic8::i_pow(quad);
        }
        if phase != Cyclotomic8::ONE {
            census_ok = false;
        }
    }
    let q_at = |t: &SiegelPoint| -> Result<Complex64> {
        let mut p = Complex64::new(1.0, 0.0);
        for idx in 0..8usize {
            let a = [
                ((idx >> 2) & 1) as u8,
                ((idx >> 1) & 1) as u8,
                (idx & 1) as u8,
            ];
            p *= second_order(&a, t, opts)?.value;
        }
        Ok(p)
    };
    let q0 = q_at(tau)?;
    if q0.norm() < 1e-8 {
        return Err(Error::IllConditioned(
            "q nearly vanishes at tau; resample".into(),
        ));
    }
    let mut worst: f64 = 0.0;
    for b in b_matrices() {
        let q1 = q_at(&tau.translate(&b)?)?;
        worst = worst.max((q1 / q0 - Complex64::new(1.0, 0.0)).norm());
    }
    Ok(QInvarianceReport {
        sign_census_ok: census_ok,
        max_ratio_deviation: worst,
    })
}

#[derive(Clone, Debug)]
pub struct QInvarianceReport {
    pub sign_census_ok: bool,
    pub max_ratio_deviation: f64,
}

/// The worked example: M with columns (001|001) and (001|011), whose
/// symmetrization is supported on four ordered terms of coefficient 16.
pub fn worked_example() -> CharacteristicMatrix {
    CharacteristicMatrix::new(vec![
        ThetaCharacteristic::new(vec![0, 0, 1], vec![0, 0, 1]).unwrap(),
        ThetaCharacteristic::new(vec![0, 0, 1], vec![0, 1, 1]).unwrap(),
    ])
    .unwrap()
}

/// The four ordered terms of the worked example.
pub fn worked_example_terms() -> [(ThetaCharacteristic, ThetaCharacteristic); 4] {
    let c = |top: [u8; 3], bot: [u8; 3]| {
        ThetaCharacteristic::new(top.to_vec(), bot.to_vec()).unwrap()
    };
    [
        (c([0, 0, 1], [0, 0, 1]), c([0, 0, 1], [0, 1, 1])),
        (c([0, 0, 1], [0, 1, 1]), c([0, 0, 1], [0, 0, 1])),
        (c([0, 0, 1], [1, 0, 1]), c([0, 0, 1], [1, 1, 1])),
        (c([0, 0, 1], [1, 1, 1]), c([0, 0, 1], [1, 0, 1])),
    ]
}

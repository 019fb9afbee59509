//! The genus-2 payload: sign actions of the F_2^3 quotient on the four
//! second order theta constants f_a, the degree-8 squaring endomorphism of
//! P^3 and its modular interpretation, exact G-module equivariance of
//! f_a -> f_a^2 across the B -> 2B isomorphism, the Fricke identities, and
//! the Igusa quartic evaluator.

use crate::cocycle::{det_sqrt, det_sqrt_continued, extract_kappa};
use crate::cyclotomic::Cyclotomic8;
use crate::error::{Error, Result};
use crate::group::{gl_generators, sym_basis, GroupDescriptor};
use crate::intmat::IntMat;
use crate::quotient::{phi_iso, FiniteQuotient};
use crate::rng::SplitMix64;
use crate::symplectic::SymplecticMatrix;
use crate::theta::{cocycle_matrix, second_order, theta_constant, EvalOptions, SiegelPoint};
use crate::ThetaCharacteristic;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Sign of f_a under M_i (i = 1, 2, 3): (-1)^{a_1}, (-1)^{a_2}, (-1)^{a_1 a_2}.
pub fn sign_action(i: usize, a: [u8; 2]) -> i8 {
    let bit = match i {
        1 => a[0],
        2 => a[1],
        3 => a[0] & a[1],
        _ => panic!("sign_action index must be 1, 2 or 3"),
    };
    if bit == 0 {
        1
    } else {
        -1
    }
}

/// Index of a in F_2^2 in the basis order 00, 01, 10, 11.
pub fn a_index(a: [u8; 2]) -> usize {
    (2 * a[0] + a[1]) as usize
}

pub fn index_a(i: usize) -> [u8; 2] {
    [(i as u8 >> 1) & 1, i as u8 & 1]
}

/// A monomial-with-phase map on the basis (f_00, f_01, f_10, f_11):
/// f_a maps to phase[a] * f_{perm[a]}.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonomialAction {
    pub perm: [usize; 4],
    pub phase: [Cyclotomic8; 4],
}

impl MonomialAction {
    pub fn identity() -> MonomialAction {
        MonomialAction {
            perm: [0, 1, 2, 3],
            phase: [Cyclotomic8::ONE; 4],
        }
    }

    /// The action of "first self, then next": matches slash composition
    /// f|_{xy} = (f|_x)|_y.
    pub fn then(&self, next: &MonomialAction) -> MonomialAction {
        let mut perm = [0usize; 4];
        let mut phase = [Cyclotomic8::ONE; 4];
        for a in 0..4 {
            perm[a] = next.perm[self.perm[a]];
            phase[a] = self.phase[a] * next.phase[self.perm[a]];
        }
        MonomialAction { perm, phase }
    }

    pub fn inverse(&self) -> MonomialAction {
        let mut perm = [0usize; 4];
        let mut phase = [Cyclotomic8::ONE; 4];
        for a in 0..4 {
            perm[self.perm[a]] = a;
            phase[self.perm[a]] = self.phase[a].conj();
        }
        MonomialAction { perm, phase }
    }

    /// 4x4 matrix over Z[zeta_8] with entry (perm[a], a) = phase[a].
    pub fn matrix(&self) -> [[Cyclotomic8; 4]; 4] {
        let mut m = [[Cyclotomic8::ZERO; 4]; 4];
        for a in 0..4 {
            m[self.perm[a]][a] = self.phase[a];
        }
        m
    }

    /// Applies the action to an evaluation vector: out[perm[a]] = phase[a] in[a].
    pub fn apply(&self, values: &[Complex64; 4]) -> [Complex64; 4] {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for a in 0..4 {
            out[self.perm[a]] = self.phase[a].to_complex() * values[a];
        }
        out
    }
}

/// One generator family of Gamma_0(2); the
/// domain-side matrix acts on the f_a^2 and its image under the B -> 2B
/// map acts on the f_a by the same monomial data.
#[derive(Clone, Debug)]
pub enum GenFamily {
    /// t(gamma_{2S}): index shift a -> a - diag S, no phase.
    LowerTranslation(IntMat),
    /// diag(A, tA^{-1}): a -> A a, no phase.
    BlockDiag(IntMat),
    /// gamma_S on the squares side, gamma_{2S} on the f side:
    /// phase i^{t(a) 2S a}, identity permutation.
    UpperTranslation(IntMat),
}

impl GenFamily {
    pub fn action(&self) -> MonomialAction {
        let mut act = MonomialAction::identity();
        match self {
            GenFamily::LowerTranslation(s) => {
                let d = [
                    i64::try_from(s.get(0, 0)).unwrap() as u8 & 1,
                    i64::try_from(s.get(1, 1)).unwrap() as u8 & 1,
                ];
                for a in 0..4 {
                    let v = index_a(a);
                    act.perm[a] = a_index([(v[0] + d[0]) & 1, (v[1] + d[1]) & 1]);
                }
            }
            GenFamily::BlockDiag(m) => {
                // the preimage of [a; 0] under the tilde of diag(A, tA^{-1})
                // has top part tA a, so the index map is a -> tA a mod 2
                let e = |i: usize, j: usize| i64::try_from(m.get(i, j)).unwrap();
                for a in 0..4 {
                    let v = index_a(a);
                    let w = [
                        ((e(0, 0) * v[0] as i64 + e(1, 0) * v[1] as i64).rem_euclid(2)) as u8,
                        ((e(0, 1) * v[0] as i64 + e(1, 1) * v[1] as i64).rem_euclid(2)) as u8,
                    ];
                    act.perm[a] = a_index(w);
                }
            }
            GenFamily::UpperTranslation(s) => {
                let e = |i: usize, j: usize| i64::try_from(s.get(i, j)).unwrap();
                for a in 0..4 {
                    let v = index_a(a);
                    let mut quad = 0i64;
                    for i in 0..2 {
                        for j in 0..2 {
                            quad += 2 * e(i, j) * v[i] as i64 * v[j] as i64;
                        }
                    }
                    act.phase[a] = Cyclotomic8::i_pow(quad);
                }
            }
        }
        act
    }

    /// Matrix acting on the f_a^2 (the Gamma_0(2) side).
    pub fn domain_matrix(&self) -> SymplecticMatrix {
        match self {
            GenFamily::LowerTranslation(s) => {
                SymplecticMatrix::gamma_s_lower(&s.scale(2)).unwrap()
            }
            GenFamily::BlockDiag(a) => SymplecticMatrix::block_diag(a).unwrap(),
            GenFamily::UpperTranslation(s) => SymplecticMatrix::gamma_s(s).unwrap(),
        }
    }

    /// Its image under phi, acting on the f_a (the Gamma_0^0(2) side).
    pub fn codomain_matrix(&self) -> SymplecticMatrix {
        match self {
            GenFamily::LowerTranslation(s) => {
                SymplecticMatrix::gamma_s_lower(&s.scale(2)).unwrap()
            }
            GenFamily::BlockDiag(a) => SymplecticMatrix::block_diag(a).unwrap(),
            GenFamily::UpperTranslation(s) => SymplecticMatrix::gamma_s(&s.scale(2)).unwrap(),
        }
    }
}

/// The generator families of Gamma_0(2): lower translations,
/// block diagonals over GL(2, Z) generators, upper translations.
pub fn gmodule_generators() -> Vec<GenFamily> {
    let mut out = Vec::new();
    for s in sym_basis(2) {
        out.push(GenFamily::LowerTranslation(s));
    }
    for a in gl_generators(2) {
        out.push(GenFamily::BlockDiag(a));
    }
    for s in sym_basis(2) {
        out.push(GenFamily::UpperTranslation(s));
    }
    out
}

/// Evaluations of the four f_a at tau.
pub fn f_vector(tau: &SiegelPoint, opts: EvalOptions) -> Result<[Complex64; 4]> {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (i, v) in out.iter_mut().enumerate() {
        let a = index_a(i);
        *v = second_order(&a, tau, opts)?.value;
    }
    Ok(out)
}

/// theta_b = theta[0; b] evaluations at tau.
pub fn theta_b_vector(tau: &SiegelPoint, opts: EvalOptions) -> Result<[Complex64; 4]> {
    let mut out = [Complex64::new(0.0, 0.0); 4];
    for (i, v) in out.iter_mut().enumerate() {
        let b = index_a(i);
        let m = ThetaCharacteristic::new(vec![0, 0], b.to_vec())?;
        *v = theta_constant(&m, tau, opts)?.value;
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct GModuleReport {
    /// composition of class actions is a homomorphism up to a global scalar
    /// (the v_Theta multiplier is a system on Gamma_2(2,4), not on all of
    /// Gamma_0(2); on Proj coordinates the scalar is immaterial)
    pub projective_homomorphism: bool,
    /// every composition defect is the global scalar +-1
    pub defects_are_signs: bool,
    /// the defect of (x, y) equals the defect of (phi x, phi y) everywhere,
    /// so the intertwining is coherent at the level of the cocycle too
    pub defects_match_across_phi: bool,
    /// exact equality of the monomial actions across phi for all classes
    pub exact_match_all_classes: bool,
    /// worst numerical slash residual over the generators, f side
    pub max_residual_f: f64,
    /// worst numerical slash residual over the generators, f^2 side
    pub max_residual_fsq: f64,
    pub classes_checked: usize,
}

/// Global scalar relating `composed` to `direct`, if they differ by one.
fn scalar_defect(composed: &MonomialAction, direct: &MonomialAction) -> Option<Cyclotomic8> {
    if composed.perm != direct.perm {
        return None;
    }
    let first = composed.phase[0] * direct.phase[0].conj();
    for a in 1..4 {
        if composed.phase[a] * direct.phase[a].conj() != first {
            return None;
        }
    }
    if !first.is_root_of_unity() {
        return None;
    }
    Some(first)
}

/// Verifies that f_a -> f_a^2 intertwines the G-actions: exact monomial
/// matrices per class agree across the isomorphism, and the per-generator
/// slash identities hold numerically with the right multiplier.
///
/// `h_gens`: optional generator matrices (domain side, Gamma_0(2)) cutting
/// out a subgroup H whose classes are checked; None checks all of G.
pub fn verify_g_module(
    h_gens: Option<&[SymplecticMatrix]>,
    tau_samples: usize,
    seed: u64,
    opts: EvalOptions,
) -> Result<GModuleReport> {
    let families = gmodule_generators();
    let dom_gens: Vec<SymplecticMatrix> = families.iter().map(|f| f.domain_matrix()).collect();
    let cod_gens: Vec<SymplecticMatrix> = families.iter().map(|f| f.codomain_matrix()).collect();
    let dom = FiniteQuotient::enumerate_with(
        GroupDescriptor::gamma0(2, 2),
        GroupDescriptor::igusa_upper(2),
        &dom_gens,
        crate::quotient::DEFAULT_ELEMENT_BOUND,
    )?;
    let cod = FiniteQuotient::enumerate_with(
        GroupDescriptor::gamma00(2),
        GroupDescriptor::igusa(2),
        &cod_gens,
        crate::quotient::DEFAULT_ELEMENT_BOUND,
    )?;
    let map = phi_iso(&dom, &cod)?;
    // actions for the generator pool: families then their inverses
    let base: Vec<MonomialAction> = families.iter().map(|f| f.action()).collect();
    let pool_actions = |q: &FiniteQuotient| -> Vec<MonomialAction> {
        let mut v = base.clone();
        v.extend(base.iter().map(|a| a.inverse()));
        let _ = q;
        v
    };
    let dom_actions = pool_actions(&dom);
    let cod_actions = pool_actions(&cod);
    let compose = |word: &[usize], actions: &[MonomialAction]| -> MonomialAction {
        let mut acc = MonomialAction::identity();
        for &k in word {
            acc = acc.then(&actions[k]);
        }
        acc
    };
    let class_set: Vec<u16> = match h_gens {
        None => (0..dom.order() as u16).collect(),
        Some(gens) => {
            let mut seeds = Vec::new();
            for g in gens {
                seeds.push(dom.class_of(g)?);
            }
            let h = dom.subgroup_closure(&seeds);
            if !dom.is_subgroup(&h) {
                return Err(Error::NotSubgroup);
            }
            h.into_iter().collect()
        }
    };
    let dom_action_of: Vec<MonomialAction> = (0..dom.order() as u16)
        .map(|i| compose(dom.word(i), &dom_actions))
        .collect();
    let cod_action_of: Vec<MonomialAction> = (0..cod.order() as u16)
        .map(|i| compose(cod.word(i), &cod_actions))
        .collect();
    let mut projective_homomorphism = true;
    let mut defects_are_signs = true;
    let mut defects_match_across_phi = true;
    let one = Cyclotomic8::ONE;
    let minus_one = Cyclotomic8::from_int(-1);
    for &i in &class_set {
        for &j in &class_set {
            let prod = dom.mul(i, j);
            let composed = dom_action_of[i as usize].then(&dom_action_of[j as usize]);
            let dom_defect = scalar_defect(&composed, &dom_action_of[prod as usize]);
            match dom_defect {
                None => {
                    projective_homomorphism = false;
                }
                Some(c) if c != one && c != minus_one => {
                    defects_are_signs = false;
                }
                _ => {}
            }
            let (yi, yj) = (map.apply(i), map.apply(j));
            let composed_cod = cod_action_of[yi as usize].then(&cod_action_of[yj as usize]);
            let cod_defect = scalar_defect(
                &composed_cod,
                &cod_action_of[cod.mul(yi, yj) as usize],
            );
            if dom_defect != cod_defect {
                defects_match_across_phi = false;
            }
        }
    }
    let mut exact_match_all_classes = true;
    for &i in &class_set {
        let y = map.apply(i);
        if dom_action_of[i as usize] != cod_action_of[y as usize] {
            exact_match_all_classes = false;
        }
    }
    // numerical slash residuals per generator family
    let mut rng = SplitMix64::new(seed);
    let mut max_residual_f: f64 = 0.0;
    let mut max_residual_fsq: f64 = 0.0;
    for _ in 0..tau_samples {
        let tau = SiegelPoint::random(2, &mut rng);
        let fv = f_vector(&tau, opts)?;
        if fv.iter().any(|v| v.norm() < 1e-6) {
            continue;
        }
        for fam in &families {
            let act = fam.action();
            // f side: f_a(gamma_c . tau) = kappa(til) det_til^{1/2} [act f](tau)
            let gc = fam.codomain_matrix();
            let gct = tau.apply(&gc)?;
            let lhs = f_vector(&gct, opts)?;
            let til = gc.tilde()?;
            let two_tau = tau.double();
            let kap = extract_kappa(&til, &two_tau, opts)?.kappa;
            let lam = kap * det_sqrt(&til, &two_tau)?;
            let rhs = act.apply(&fv);
            for a in 0..4 {
                let denom = lhs[a].norm().max(1e-12);
                max_residual_f = max_residual_f.max((lhs[a] - lam * rhs[a]).norm() / denom);
            }
            // f^2 side: f_a^2(gamma_d . tau) = kappa(til_d)^2 det [act f^2](tau)
            let gd = fam.domain_matrix();
            let gdt = tau.apply(&gd)?;
            let lhs2 = f_vector(&gdt, opts)?;
            let tild = gd.tilde()?;
            let kap2 = extract_kappa(&tild, &two_tau, opts)?.kappa.powi(2);
            let det = cocycle_matrix(&gd, &tau).determinant();
            let fsq: [Complex64; 4] = [
                fv[0] * fv[0],
                fv[1] * fv[1],
                fv[2] * fv[2],
                fv[3] * fv[3],
            ];
            let rhs2 = act.apply(&fsq);
            for a in 0..4 {
                let denom = (lhs2[a] * lhs2[a]).norm().max(1e-12);
                max_residual_fsq = max_residual_fsq
                    .max((lhs2[a] * lhs2[a] - kap2 * det * rhs2[a]).norm() / denom);
            }
        }
    }
    Ok(GModuleReport {
        projective_homomorphism,
        defects_are_signs,
        defects_match_across_phi,
        exact_match_all_classes,
        max_residual_f,
        max_residual_fsq,
        classes_checked: class_set.len(),
    })
}

/// A point of P^3 as homogeneous coordinates, not all zero.
#[derive(Clone, Debug)]
pub struct ProjectivePoint3(pub [Complex64; 4]);

impl ProjectivePoint3 {
    pub fn new(coords: [Complex64; 4]) -> Result<ProjectivePoint3> {
        if coords.iter().all(|c| c.norm() == 0.0) {
            return Err(Error::Precondition("projective point must be nonzero".into()));
        }
        Ok(ProjectivePoint3(coords))
    }

    /// Scale so the coordinate of largest modulus is 1.
    pub fn normalized(&self) -> [Complex64; 4] {
        let mut k = 0;
        for i in 1..4 {
            if self.0[i].norm() > self.0[k].norm() {
                k = i;
            }
        }
        let pivot = self.0[k];
        [
            self.0[0] / pivot,
            self.0[1] / pivot,
            self.0[2] / pivot,
            self.0[3] / pivot,
        ]
    }

    pub fn approx_eq(&self, other: &ProjectivePoint3, tol: f64) -> bool {
        let a = self.normalized();
        let b = other.normalized();
        a.iter()
            .zip(&b)
            .all(|(x, y)| (x - y).norm() <= tol)
    }
}

/// The degree-8 endomorphism of P^3 squaring each coordinate.
pub fn squaring_map(p: &ProjectivePoint3) -> ProjectivePoint3 {
    ProjectivePoint3([
        p.0[0] * p.0[0],
        p.0[1] * p.0[1],
        p.0[2] * p.0[2],
        p.0[3] * p.0[3],
    ])
}

/// Number of projective preimages of `target` under the squaring map,
/// counted by enumerating sign choices of coordinate square roots and
/// deduplicating projectively.
pub fn fiber_count(target: &ProjectivePoint3, tol: f64) -> usize {
    let roots: Vec<Complex64> = target.0.iter().map(|c| c.sqrt()).collect();
    let mut reps: Vec<ProjectivePoint3> = Vec::new();
    for mask in 0..16u32 {
        let coords = [
            roots[0] * sign_of(mask, 0),
            roots[1] * sign_of(mask, 1),
            roots[2] * sign_of(mask, 2),
            roots[3] * sign_of(mask, 3),
        ];
        let p = match ProjectivePoint3::new(coords) {
            Ok(p) => p,
            Err(_) => continue,
        };
        if squaring_map(&p).approx_eq(target, tol) && !reps.iter().any(|r| r.approx_eq(&p, tol)) {
            reps.push(p);
        }
    }
    reps.len()
}

fn sign_of(mask: u32, bit: usize) -> Complex64 {
    if (mask >> bit) & 1 == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::new(-1.0, 0.0)
    }
}

#[derive(Clone, Debug)]
pub struct SubringReport {
    /// f_a^2 is invariant under the M_i up to the stated tolerance
    pub max_fsq_deviation: f64,
    /// theta_b^2, expressed through the f_sigma^2, is invariant as well
    pub max_thetasq_deviation: f64,
    /// residual of the Riemann expansion theta_b^2 = sum_s (-1)^{s.b} f_s^2
    pub max_expansion_residual: f64,
    /// the 8 sign vectors of the F_2^3 quotient are pairwise distinct and
    /// fix f_00, so C(f_a) has degree 8 over C(f_a^2)
    pub characters_separate: bool,
}

/// The two numerical facts behind the integer-weight subring statement:
/// the F_2^3 quotient acts trivially on the f_a^2 and the theta_b^2, and
/// its sign characters separate the 8 sign patterns on (f_a).
pub fn verify_integer_weight_subring(
    tau_samples: usize,
    seed: u64,
    opts: EvalOptions,
) -> Result<SubringReport> {
    let b1 = IntMat::symmetric_from_upper(2, &[2, 0, 0]);
    let b2 = IntMat::symmetric_from_upper(2, &[0, 0, 2]);
    let b3 = IntMat::symmetric_from_upper(2, &[0, 1, 0]);
    let ms: Vec<SymplecticMatrix> = [&b1, &b2, &b3]
        .iter()
        .map(|b| SymplecticMatrix::gamma_s(b).unwrap())
        .collect();
    let mut rng = SplitMix64::new(seed);
    let mut max_fsq: f64 = 0.0;
    let mut max_thetasq: f64 = 0.0;
    let mut max_expansion: f64 = 0.0;
    for _ in 0..tau_samples {
        let tau = SiegelPoint::random(2, &mut rng);
        let fv = f_vector(&tau, opts)?;
        let tv = theta_b_vector(&tau, opts)?;
        if fv.iter().any(|v| v.norm() < 1e-6) {
            continue;
        }
        // expansion theta_b^2 = sum_sigma (-1)^{sigma . b} f_sigma^2
        for bi in 0..4 {
            let b = index_a(bi);
            let mut s = Complex64::new(0.0, 0.0);
            for ai in 0..4 {
                let a = index_a(ai);
                let sgn = if (a[0] & b[0]) ^ (a[1] & b[1]) == 1 {
                    -1.0
                } else {
                    1.0
                };
                s += fv[ai] * fv[ai] * sgn;
            }
            let direct = tv[bi] * tv[bi];
            max_expansion =
                max_expansion.max((s - direct).norm() / direct.norm().max(1e-12));
        }
        for m in &ms {
            let mt = tau.apply(m)?;
            let fm = f_vector(&mt, opts)?;
            let tm = theta_b_vector(&mt, opts)?;
            for a in 0..4 {
                let r = (fm[a] * fm[a]) / (fv[a] * fv[a]);
                max_fsq = max_fsq.max((r - Complex64::new(1.0, 0.0)).norm());
                let r = (tm[a] * tm[a]) / (tv[a] * tv[a]);
                max_thetasq = max_thetasq.max((r - Complex64::new(1.0, 0.0)).norm());
            }
        }
    }
    // sign characters of the 8 group elements
    let mut vectors = std::collections::BTreeSet::new();
    let mut fixes_f00 = true;
    for eps in 0..8u8 {
        let mut v = [0i8; 4];
        for ai in 0..4 {
            let a = index_a(ai);
            let mut s = 1i8;
            if eps & 1 != 0 {
                s *= sign_action(1, a);
            }
            if eps & 2 != 0 {
                s *= sign_action(2, a);
            }
            if eps & 4 != 0 {
                s *= sign_action(3, a);
            }
            v[ai] = s;
        }
        if v[0] != 1 {
            fixes_f00 = false;
        }
        vectors.insert(v);
    }
    Ok(SubringReport {
        max_fsq_deviation: max_fsq,
        max_thetasq_deviation: max_thetasq,
        max_expansion_residual: max_expansion,
        characters_separate: vectors.len() == 8 && fixes_f00,
    })
}

#[derive(Clone, Debug)]
pub struct FrickeReport {
    /// spread of f_a(J2.tau) / (det(tau)^{1/2} theta_a(tau)) over all a and
    /// all samples
    pub ratio_spread: f64,
    /// the common ratio, v_Theta(J2)
    pub multiplier: Complex64,
    /// |multiplier^8 - 1|
    pub eighth_root_defect: f64,
    /// worst residual of the Hadamard change of basis in both directions
    pub hadamard_residual: f64,
}

/// The Fricke identities: constancy of f_a(J2.tau)/(det tau^{1/2} theta_a),
/// and the exact +-1 Hadamard matrix relating (f_a^2) and (theta_b^2).
pub fn verify_fricke_identities(
    tau_samples: usize,
    seed: u64,
    opts: EvalOptions,
) -> Result<FrickeReport> {
    let mut rng = SplitMix64::new(seed);
    let mut ratios: Vec<Complex64> = Vec::new();
    let mut hadamard: f64 = 0.0;
    let mut sampled = 0usize;
    while sampled < tau_samples {
        let tau = SiegelPoint::random(2, &mut rng);
        let fv = f_vector(&tau, opts)?;
        let tv = theta_b_vector(&tau, opts)?;
        if fv.iter().chain(tv.iter()).any(|v| v.norm() < 1e-3) {
            continue;
        }
        sampled += 1;
        // det(tau)^{1/2} by continuation with C = I, D = 0
        let id = DMatrix::identity(2, 2);
        let zero = DMatrix::zeros(2, 2);
        let ds = det_sqrt_continued(&id, &zero, &tau)?;
        let jt = tau.apply_fricke()?;
        let fj = f_vector(&jt, opts)?;
        for a in 0..4 {
            ratios.push(fj[a] / (ds * tv[a]));
        }
        // f_a^2 = 1/4 sum_b (-1)^{a.b} theta_b^2 and the inverse relation
        for ai in 0..4 {
            let a = index_a(ai);
            let mut s = Complex64::new(0.0, 0.0);
            let mut t = Complex64::new(0.0, 0.0);
            for bi in 0..4 {
                let b = index_a(bi);
                let sgn = if (a[0] & b[0]) ^ (a[1] & b[1]) == 1 {
                    -1.0
                } else {
                    1.0
                };
                s += tv[bi] * tv[bi] * sgn;
                t += fv[bi] * fv[bi] * sgn;
            }
            let lhs = fv[ai] * fv[ai];
            hadamard = hadamard.max((lhs - s * 0.25).norm() / lhs.norm().max(1e-12));
            let rhs = tv[ai] * tv[ai];
            hadamard = hadamard.max((rhs - t).norm() / rhs.norm().max(1e-12));
        }
    }
    let first = ratios[0];
    let spread = ratios
        .iter()
        .map(|r| (r - first).norm())
        .fold(0.0, f64::max);
    Ok(FrickeReport {
        ratio_spread: spread,
        multiplier: first,
        eighth_root_defect: (first.powi(8) - Complex64::new(1.0, 0.0)).norm(),
        hadamard_residual: hadamard,
    })
}

/// The Igusa quartic
/// (x0 x1 + x0 x2 + x1 x2 - x3^2)^2 - 4 x0 x1 x2 (x0 + x1 + x2 + x3 + x4),
/// carried as a standalone evaluator.
pub fn igusa_quartic(x: &[Complex64; 5]) -> Complex64 {
    let q = x[0] * x[1] + x[0] * x[2] + x[1] * x[2] - x[3] * x[3];
    q * q - x[0] * x[1] * x[2] * (x[0] + x[1] + x[2] + x[3] + x[4]) * 4.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> EvalOptions {
        EvalOptions::default()
    }

    #[test]
    fn sign_table() {
        assert_eq!(sign_action(1, [0, 0]), 1);
        assert_eq!(sign_action(2, [0, 0]), 1);
        assert_eq!(sign_action(3, [0, 0]), 1);
        assert_eq!(sign_action(3, [1, 1]), -1);
        assert_eq!(sign_action(1, [1, 0]), -1);
        assert_eq!(sign_action(2, [0, 1]), -1);
    }

    #[test]
    fn signs_match_theta_ratios() {
        let b1 = IntMat::symmetric_from_upper(2, &[2, 0, 0]);
        let b2 = IntMat::symmetric_from_upper(2, &[0, 0, 2]);
        let b3 = IntMat::symmetric_from_upper(2, &[0, 1, 0]);
        let mut rng = SplitMix64::new(6);
        for _ in 0..3 {
            let tau = SiegelPoint::random(2, &mut rng);
            let fv = f_vector(&tau, opts()).unwrap();
            for (i, b) in [&b1, &b2, &b3].iter().enumerate() {
                let m = SymplecticMatrix::gamma_s(b).unwrap();
                let fm = f_vector(&tau.apply(&m).unwrap(), opts()).unwrap();
                for ai in 0..4 {
                    let want = sign_action(i + 1, index_a(ai)) as f64;
                    let r = fm[ai] / fv[ai];
                    assert!(
                        (r - Complex64::new(want, 0.0)).norm() < 1e-8,
                        "sign mismatch i={} a={:?}",
                        i + 1,
                        index_a(ai)
                    );
                }
            }
        }
    }

    #[test]
    fn generic_fibers_have_eight_points() {
        let mut rng = SplitMix64::new(30);
        for _ in 0..50 {
            let coords = [
                Complex64::new(rng.symmetric() + 1.5, rng.symmetric()),
                Complex64::new(rng.symmetric() + 1.5, rng.symmetric()),
                Complex64::new(rng.symmetric() - 1.5, rng.symmetric()),
                Complex64::new(rng.symmetric() + 1.5, rng.symmetric()),
            ];
            let p = ProjectivePoint3::new(coords).unwrap();
            assert_eq!(fiber_count(&p, 1e-9), 8);
        }
        // degenerate fiber
        let p = ProjectivePoint3::new([
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        assert_eq!(fiber_count(&p, 1e-9), 1);
        // [1,1,1,1] maps to itself and has 8 preimage classes
        let e = ProjectivePoint3::new([Complex64::new(1.0, 0.0); 4]).unwrap();
        assert!(squaring_map(&e).approx_eq(&e, 1e-12));
        assert_eq!(fiber_count(&e, 1e-9), 8);
    }

    #[test]
    fn theta_compatibility_of_squaring() {
        // squaring the f-vector is the squaring map on the modular side
        let mut rng = SplitMix64::new(44);
        let tau = SiegelPoint::random(2, &mut rng);
        let fv = f_vector(&tau, opts()).unwrap();
        let p = ProjectivePoint3::new(fv).unwrap();
        let sq = squaring_map(&p);
        let direct = ProjectivePoint3::new([
            fv[0] * fv[0],
            fv[1] * fv[1],
            fv[2] * fv[2],
            fv[3] * fv[3],
        ])
        .unwrap();
        assert!(sq.approx_eq(&direct, 1e-12));
    }

    #[test]
    fn igusa_quartic_values() {
        let z = |x: f64| Complex64::new(x, 0.0);
        assert_eq!(igusa_quartic(&[z(0.0); 5]), z(0.0));
        let v = igusa_quartic(&[z(1.0), z(1.0), z(1.0), z(0.0), z(-3.0)]);
        assert!((v - z(9.0)).norm() < 1e-14);
        for t in [-2.0, 0.0, 5.0] {
            let v = igusa_quartic(&[z(0.0), z(0.0), z(0.0), z(1.0), z(t)]);
            assert!((v - z(1.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn monomial_action_composition() {
        let fams = gmodule_generators();
        for f in &fams {
            let a = f.action();
            let id = a.then(&a.inverse());
            assert_eq!(id, MonomialAction::identity());
        }
    }

    #[test]
    fn subring_and_characters() {
        let rep = verify_integer_weight_subring(3, 9, opts()).unwrap();
        assert!(rep.max_fsq_deviation < 1e-8, "{}", rep.max_fsq_deviation);
        assert!(
            rep.max_thetasq_deviation < 1e-8,
            "{}",
            rep.max_thetasq_deviation
        );
        assert!(
            rep.max_expansion_residual < 1e-8,
            "{}",
            rep.max_expansion_residual
        );
        assert!(rep.characters_separate);
    }
}

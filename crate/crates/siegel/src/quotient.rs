//! Finite quotient groups of congruence subgroups by coset enumeration
//! over residues, the isomorphism sending "B" to "2B", its Fricke
//! conjugate, and structural identification of the quotients.
//!
//! Both the ambient group and the kernel are decidable from residues mod a
//! common modulus M* (4 or 8 here), and the kernel contains the principal
//! congruence subgroup of level M*, so equality of cosets is exactly a
//! residue computation: x and y represent the same class iff x^{-1} y
//! passes the kernel predicate mod M*.

use crate::error::{Error, Result};
use crate::group::{intermediate_descriptors, GroupDescriptor};
use crate::intmat::IntMat;
use crate::symplectic::SymplecticMatrix;
use serde::Serialize;
use std::collections::{BTreeSet, VecDeque};

/// Multiplication of reduced matrices mod m (row-major, size n x n).
fn red_mul(a: &[u8], b: &[u8], n: usize, m: u32) -> Vec<u8> {
    let mut out = vec![0u8; n * n];
    for i in 0..n {
        for k in 0..n {
            let av = a[i * n + k] as u32;
            if av == 0 {
                continue;
            }
            for j in 0..n {
                let cur = out[i * n + j] as u32 + av * b[k * n + j] as u32;
                out[i * n + j] = (cur % m) as u8;
            }
        }
    }
    out
}

/// Inverse of a reduced symplectic matrix: [[tD, -tB], [-tC, tA]] mod m.
fn red_inverse(a: &[u8], g: usize, m: u32) -> Vec<u8> {
    let n = 2 * g;
    let mut out = vec![0u8; n * n];
    let neg = |v: u8| ((m - v as u32) % m) as u8;
    for i in 0..g {
        for j in 0..g {
            out[i * n + j] = a[(g + j) * n + (g + i)]; // tD
            out[i * n + (g + j)] = neg(a[j * n + (g + i)]); // -tB
            out[(g + i) * n + j] = neg(a[(g + j) * n + i]); // -tC
            out[(g + i) * n + (g + j)] = a[j * n + i]; // tA
        }
    }
    out
}

/// A finite quotient big/kernel with representatives, exact lifts as
/// generator words, and the full multiplication table.
#[derive(Clone, Debug)]
pub struct FiniteQuotient {
    pub ambient: GroupDescriptor,
    pub kernel: GroupDescriptor,
    pub modulus: u32,
    gens: Vec<SymplecticMatrix>,
    reps: Vec<Vec<u8>>,
    lifts: Vec<SymplecticMatrix>,
    words: Vec<Vec<usize>>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    gen_classes: Vec<u16>,
}

pub const DEFAULT_ELEMENT_BOUND: usize = 4096;

impl FiniteQuotient {
    /// Enumerates big/kernel with the ambient group's registered generators.
    pub fn enumerate(big: GroupDescriptor, kernel: GroupDescriptor) -> Result<FiniteQuotient> {
        let gens = big.generators()?;
        FiniteQuotient::enumerate_with(big, kernel, &gens, DEFAULT_ELEMENT_BOUND)
    }

    /// Enumerates the subgroup of big/kernel generated by the classes of
    /// `gens` (each must lie in the ambient group).
    pub fn enumerate_with(
        big: GroupDescriptor,
        kernel: GroupDescriptor,
        gens: &[SymplecticMatrix],
        bound: usize,
    ) -> Result<FiniteQuotient> {
        if big.genus != kernel.genus {
            return Err(Error::GenusMismatch(big.genus, kernel.genus));
        }
        let g = big.genus;
        let modulus = lcm(big.modulus().max(1), kernel.modulus().max(1));
        if modulus > 8 {
            return Err(Error::Precondition(format!(
                "common modulus {modulus} out of range"
            )));
        }
        for gen in gens {
            if !big.member(gen)? {
                return Err(Error::Precondition(format!(
                    "generator outside the ambient group {big}"
                )));
            }
        }
        let mut pool: Vec<SymplecticMatrix> = gens.to_vec();
        pool.extend(gens.iter().map(|m| m.inverse()));
        let n = 2 * g;
        let same_class = |x: &[u8], y: &[u8]| -> Result<bool> {
            let xinv = red_inverse(x, g, modulus);
            kernel.member_residues(&red_mul(&xinv, y, n, modulus), modulus, g)
        };
        let mut reps: Vec<Vec<u8>> = vec![SymplecticMatrix::identity(g).reduce(modulus)];
        let mut lifts = vec![SymplecticMatrix::identity(g)];
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let class_of_red = |reps: &Vec<Vec<u8>>, x: &[u8]| -> Result<Option<usize>> {
            for (i, r) in reps.iter().enumerate() {
                if same_class(r, x)? {
                    return Ok(Some(i));
                }
            }
            Ok(None)
        };
        let pool_red: Vec<Vec<u8>> = pool.iter().map(|m| m.reduce(modulus)).collect();
        let mut queue: VecDeque<usize> = VecDeque::from([0]);
        while let Some(i) = queue.pop_front() {
            for (k, gr) in pool_red.iter().enumerate() {
                let prod = red_mul(&reps[i], gr, n, modulus);
                if class_of_red(&reps, &prod)?.is_none() {
                    if reps.len() >= bound {
                        return Err(Error::EnumerationBound(bound));
                    }
                    reps.push(prod);
                    lifts.push(lifts[i].mul(&pool[k]));
                    let mut w = words[i].clone();
                    w.push(k);
                    words.push(w);
                    queue.push_back(reps.len() - 1);
                }
            }
        }
        let count = reps.len();
        let mut mul = vec![0u16; count * count];
        for i in 0..count {
            for j in 0..count {
                let prod = red_mul(&reps[i], &reps[j], n, modulus);
                let c = class_of_red(&reps, &prod)?
                    .ok_or_else(|| Error::Inconsistent("product escaped the class set".into()))?;
                mul[i * count + j] = c as u16;
            }
        }
        let mut inv = vec![0u16; count];
        for i in 0..count {
            let found = (0..count)
                .find(|&j| mul[i * count + j] == 0)
                .ok_or_else(|| Error::Inconsistent("element without inverse".into()))?;
            inv[i] = found as u16;
        }
        let mut gen_classes = Vec::with_capacity(gens.len());
        for grm in gens {
            let c = class_of_red(&reps, &grm.reduce(modulus))?
                .ok_or_else(|| Error::Inconsistent("generator class missing".into()))?;
            gen_classes.push(c as u16);
        }
        Ok(FiniteQuotient {
            ambient: big,
            kernel,
            modulus,
            gens: pool,
            reps,
            lifts,
            words,
            mul,
            inv,
            gen_classes,
        })
    }

    pub fn order(&self) -> usize {
        self.reps.len()
    }

    pub fn identity(&self) -> u16 {
        0
    }

    pub fn mul(&self, i: u16, j: u16) -> u16 {
        self.mul[i as usize * self.order() + j as usize]
    }

    pub fn inv(&self, i: u16) -> u16 {
        self.inv[i as usize]
    }

    /// Exact lift of the class representative (a word in the generators).
    pub fn lift(&self, i: u16) -> &SymplecticMatrix {
        &self.lifts[i as usize]
    }

    pub fn rep(&self, i: u16) -> &[u8] {
        &self.reps[i as usize]
    }

    pub fn word(&self, i: u16) -> &[usize] {
        &self.words[i as usize]
    }

    pub fn generator(&self, k: usize) -> &SymplecticMatrix {
        &self.gens[k]
    }

    pub fn generator_count(&self) -> usize {
        self.gens.len() / 2
    }

    /// Class indices of the (non-inverted) generators.
    pub fn generator_classes(&self) -> &[u16] {
        &self.gen_classes
    }

    /// Class of an arbitrary element of the ambient group.
    pub fn class_of(&self, x: &SymplecticMatrix) -> Result<u16> {
        if !self.ambient.member(x)? {
            return Err(Error::Precondition(format!(
                "element not in the ambient group {}",
                self.ambient
            )));
        }
        let g = self.ambient.genus;
        let n = 2 * g;
        let xr = x.reduce(self.modulus);
        for (i, r) in self.reps.iter().enumerate() {
            let rinv = red_inverse(r, g, self.modulus);
            if self
                .kernel
                .member_residues(&red_mul(&rinv, &xr, n, self.modulus), self.modulus, g)?
            {
                return Ok(i as u16);
            }
        }
        Err(Error::Inconsistent(
            "element is in no enumerated class; generators do not generate".into(),
        ))
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|i| (0..n).all(|j| self.mul[i * n + j] == self.mul[j * n + i]))
    }

    pub fn element_order(&self, i: u16) -> usize {
        let mut o = 1;
        let mut x = i;
        while x != 0 {
            x = self.mul(x, i);
            o += 1;
        }
        o
    }

    pub fn exponent(&self) -> usize {
        (0..self.order() as u16)
            .map(|i| self.element_order(i))
            .fold(1, lcm_usize)
    }

    /// Closure of a set of classes under the group operation.
    pub fn subgroup_closure(&self, seed: &[u16]) -> BTreeSet<u16> {
        let mut set: BTreeSet<u16> = BTreeSet::new();
        set.insert(0);
        for &s in seed {
            set.insert(s);
        }
        loop {
            let mut next = set.clone();
            for &a in &set {
                for &b in &set {
                    next.insert(self.mul(a, b));
                }
                next.insert(self.inv(a));
            }
            if next.len() == set.len() {
                return set;
            }
            set = next;
        }
    }

    pub fn is_subgroup(&self, set: &BTreeSet<u16>) -> bool {
        set.contains(&0)
            && set
                .iter()
                .all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    pub fn is_normal(&self, set: &BTreeSet<u16>) -> bool {
        (0..self.order() as u16).all(|h| {
            set.iter()
                .all(|&x| set.contains(&self.mul(self.mul(h, x), self.inv(h))))
        })
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<u16>> {
        let n = self.order() as u16;
        let mut seen = vec![false; n as usize];
        let mut out = Vec::new();
        for i in 0..n {
            if seen[i as usize] {
                continue;
            }
            let mut orbit = BTreeSet::new();
            for h in 0..n {
                orbit.insert(self.mul(self.mul(h, i), self.inv(h)));
            }
            for &x in &orbit {
                seen[x as usize] = true;
            }
            out.push(orbit.into_iter().collect());
        }
        out
    }

    /// Full JSON export: reduced representatives mod M* and the generator
    /// words that lift them.
    pub fn to_json(&self) -> crate::error::Result<serde_json::Value> {
        let elements: Vec<serde_json::Value> = (0..self.order() as u16)
            .map(|i| {
                serde_json::json!({
                    "reduced": self.rep(i),
                    "word": self.word(i),
                })
            })
            .collect();
        let generators = self
            .gens
            .iter()
            .take(self.generator_count())
            .map(|g| g.to_json().map(|j| j.rows))
            .collect::<crate::error::Result<Vec<_>>>()?;
        Ok(serde_json::json!({
            "ambient": self.ambient.to_json().group,
            "kernel": self.kernel.to_json().group,
            "genus": self.ambient.genus,
            "modulus": self.modulus,
            "order": self.order(),
            "generators": generators,
            "elements": elements,
        }))
    }

    /// Abstract fingerprint used for isomorphism bookkeeping.
    pub fn fingerprint_of(&self, set: &BTreeSet<u16>) -> SubgroupFingerprint {
        let elems: Vec<u16> = set.iter().copied().collect();
        let mut orders: Vec<usize> = elems.iter().map(|&i| self.element_order(i)).collect();
        orders.sort_unstable();
        let abelian = elems
            .iter()
            .all(|&a| elems.iter().all(|&b| self.mul(a, b) == self.mul(b, a)));
        SubgroupFingerprint {
            order: elems.len(),
            abelian,
            element_orders: orders,
        }
    }
}

fn lcm(a: u32, b: u32) -> u32 {
    let gcd = |mut x: u32, mut y: u32| {
        while y != 0 {
            let t = x % y;
            x = y;
            y = t;
        }
        x
    };
    a / gcd(a, b) * b
}

fn lcm_usize(a: usize, b: usize) -> usize {
    let gcd = |mut x: usize, mut y: usize| {
        while y != 0 {
            let t = x % y;
            x = y;
            y = t;
        }
        x
    };
    a / gcd(a, b) * b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubgroupFingerprint {
    pub order: usize,
    pub abelian: bool,
    pub element_orders: Vec<usize>,
}

/// A multiplicative bijection between two enumerated quotients, verified on
/// the full tables at construction.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    images: Vec<u16>,
    preimages: Vec<u16>,
}

impl QuotientMap {
    pub fn new(
        domain: &FiniteQuotient,
        codomain: &FiniteQuotient,
        images: Vec<u16>,
    ) -> Result<QuotientMap> {
        let n = domain.order();
        if codomain.order() != n || images.len() != n {
            return Err(Error::Inconsistent(format!(
                "map between groups of different orders: {} vs {}",
                n,
                codomain.order()
            )));
        }
        let mut preimages = vec![u16::MAX; n];
        for (i, &img) in images.iter().enumerate() {
            if preimages[img as usize] != u16::MAX {
                return Err(Error::Inconsistent("map is not injective".into()));
            }
            preimages[img as usize] = i as u16;
        }
        for i in 0..n as u16 {
            for j in 0..n as u16 {
                let lhs = images[domain.mul(i, j) as usize];
                let rhs = codomain.mul(images[i as usize], images[j as usize]);
                if lhs != rhs {
                    return Err(Error::Inconsistent(format!(
                        "map is not multiplicative at ({i}, {j})"
                    )));
                }
            }
        }
        Ok(QuotientMap { images, preimages })
    }

    pub fn apply(&self, i: u16) -> u16 {
        self.images[i as usize]
    }

    pub fn invert(&self, i: u16) -> u16 {
        self.preimages[i as usize]
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }
}

/// An LDU representative of a class in Gamma_0(2)/Gamma_2^2(2,4):
/// t(gamma_{2 lower}) . diag(A, tA^{-1}) . gamma_{upper}.
#[derive(Clone, Debug)]
pub struct LduRep {
    pub lower: IntMat,
    pub a: IntMat,
    pub upper: IntMat,
}

impl LduRep {
    pub fn assemble(&self) -> SymplecticMatrix {
        let l = SymplecticMatrix::gamma_s_lower(&self.lower.scale(2)).unwrap();
        let d = SymplecticMatrix::block_diag(&self.a).unwrap();
        let u = SymplecticMatrix::gamma_s(&self.upper).unwrap();
        l.mul(&d).mul(&u)
    }

    /// The image under the B -> 2B map: same L and D factors, doubled U.
    pub fn phi_image(&self) -> SymplecticMatrix {
        let l = SymplecticMatrix::gamma_s_lower(&self.lower.scale(2)).unwrap();
        let d = SymplecticMatrix::block_diag(&self.a).unwrap();
        let u = SymplecticMatrix::gamma_s(&self.upper.scale(2)).unwrap();
        l.mul(&d).mul(&u)
    }
}

/// Searches an LDU representative for every class of the 96-element group
/// G = Gamma_0(2)/Gamma_2^2(2,4). The candidate factors range over diagonal
/// patterns of the symmetric part and unimodular lifts of GL(2, F_2); the
/// representative choice is realized by this bounded search.
pub fn ldu_representatives(q: &FiniteQuotient) -> Result<Vec<LduRep>> {
    let g = q.ambient.genus;
    if g != 2 {
        return Err(Error::Precondition("LDU table is a genus 2 construction".into()));
    }
    let sym_choices: Vec<IntMat> = vec![
        IntMat::zeros(2, 2),
        IntMat::symmetric_from_upper(2, &[1, 0, 0]),
        IntMat::symmetric_from_upper(2, &[0, 0, 1]),
        IntMat::symmetric_from_upper(2, &[1, 0, 1]),
    ];
    let gl_lifts: Vec<IntMat> = vec![
        IntMat::from_rows(&[vec![1, 0], vec![0, 1]]),
        IntMat::from_rows(&[vec![0, 1], vec![1, 0]]),
        IntMat::from_rows(&[vec![1, 1], vec![0, 1]]),
        IntMat::from_rows(&[vec![1, 0], vec![1, 1]]),
        IntMat::from_rows(&[vec![0, 1], vec![1, 1]]),
        IntMat::from_rows(&[vec![1, 1], vec![1, 0]]),
    ];
    let mut out: Vec<Option<LduRep>> = vec![None; q.order()];
    let mut found = 0usize;
    for lower in &sym_choices {
        for a in &gl_lifts {
            for upper in &sym_choices {
                let rep = LduRep {
                    lower: lower.clone(),
                    a: a.clone(),
                    upper: upper.clone(),
                };
                let cls = q.class_of(&rep.assemble())? as usize;
                if out[cls].is_none() {
                    out[cls] = Some(rep);
                    found += 1;
                }
            }
        }
    }
    if found != q.order() {
        let missing = out.iter().position(|o| o.is_none()).unwrap();
        return Err(Error::NoRepresentative(missing));
    }
    Ok(out.into_iter().map(|o| o.unwrap()).collect())
}

/// The isomorphism Gamma_0(2)/Gamma_2^2(2,4) -> Gamma_0^0(2)/Gamma_2(2,4)
/// sending "B" to "2B" through the LDU factorization of a representative.
/// Multiplicativity and bijectivity are verified on the full tables.
pub fn phi_iso(domain: &FiniteQuotient, codomain: &FiniteQuotient) -> Result<QuotientMap> {
    let ldu = ldu_representatives(domain)?;
    let mut images = Vec::with_capacity(domain.order());
    for rep in &ldu {
        images.push(codomain.class_of(&rep.phi_image())?);
    }
    QuotientMap::new(domain, codomain, images)
}

/// The Fricke variant: Gamma_0(2)/Gamma_2^2(2,4) -> Gamma_0(4)/Gamma_2(2,4)^{J2},
/// the composition of phi with conjugation by J2.
pub fn fricke_iso(domain: &FiniteQuotient, codomain: &FiniteQuotient) -> Result<QuotientMap> {
    let ldu = ldu_representatives(domain)?;
    let mut images = Vec::with_capacity(domain.order());
    for rep in &ldu {
        let img = rep.phi_image().fricke_conjugate()?;
        images.push(codomain.class_of(&img)?);
    }
    QuotientMap::new(domain, codomain, images)
}

/// Structure report: order, abelianness, and the search for a normal
/// elementary abelian subgroup of the requested order whose quotient is
/// small and nonabelian.
#[derive(Clone, Debug, Serialize)]
pub struct StructureReport {
    pub order: usize,
    pub abelian: bool,
    pub exponent: usize,
    pub conjugacy_class_sizes: Vec<usize>,
    pub normal_subgroup: Option<NormalSubgroupReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalSubgroupReport {
    pub order: usize,
    pub exponent: usize,
    pub quotient_order: usize,
    pub quotient_abelian: bool,
}

pub fn structure_report(q: &FiniteQuotient, normal_target: usize) -> StructureReport {
    let mut sizes: Vec<usize> = q.conjugacy_classes().iter().map(|c| c.len()).collect();
    sizes.sort_unstable();
    let normal_subgroup = find_normal_elementary(q, normal_target).map(|set| {
        let qo = q.order() / set.len();
        let quotient_abelian = quotient_is_abelian(q, &set);
        NormalSubgroupReport {
            order: set.len(),
            exponent: set
                .iter()
                .map(|&i| q.element_order(i))
                .fold(1, lcm_usize),
            quotient_order: qo,
            quotient_abelian,
        }
    });
    StructureReport {
        order: q.order(),
        abelian: q.is_abelian(),
        exponent: q.exponent(),
        conjugacy_class_sizes: sizes,
        normal_subgroup,
    }
}

/// Normal subgroups are unions of conjugacy classes; search unions of
/// involution classes that close up to the target order.
fn find_normal_elementary(q: &FiniteQuotient, target: usize) -> Option<BTreeSet<u16>> {
    let classes: Vec<Vec<u16>> = q
        .conjugacy_classes()
        .into_iter()
        .filter(|c| c.iter().all(|&x| q.element_order(x) <= 2))
        .filter(|c| c != &vec![0u16])
        .collect();
    fn dfs(
        q: &FiniteQuotient,
        classes: &[Vec<u16>],
        start: usize,
        acc: &mut BTreeSet<u16>,
        target: usize,
    ) -> Option<BTreeSet<u16>> {
        if acc.len() == target {
            if q.is_subgroup(acc) && q.is_normal(acc) {
                return Some(acc.clone());
            }
            return None;
        }
        for k in start..classes.len() {
            if acc.len() + classes[k].len() > target {
                continue;
            }
            let mut next = acc.clone();
            next.extend(classes[k].iter().copied());
            if let Some(found) = dfs(q, classes, k + 1, &mut next, target) {
                return Some(found);
            }
        }
        None
    }
    let mut acc: BTreeSet<u16> = BTreeSet::new();
    acc.insert(0);
    dfs(q, &classes, 0, &mut acc, target)
}

fn quotient_is_abelian(q: &FiniteQuotient, n: &BTreeSet<u16>) -> bool {
    // commutator of coset representatives must land in N
    let reps: Vec<u16> = {
        let mut assigned = vec![false; q.order()];
        let mut reps = Vec::new();
        for x in 0..q.order() as u16 {
            if assigned[x as usize] {
                continue;
            }
            reps.push(x);
            for &k in n {
                assigned[q.mul(x, k) as usize] = true;
            }
        }
        reps
    };
    reps.iter().all(|&a| {
        reps.iter().all(|&b| {
            let comm = q.mul(q.mul(a, b), q.inv(q.mul(b, a)));
            n.contains(&comm)
        })
    })
}

/// Result of matching a subgroup H of G with the pair of intermediate
/// groups whose quotients realize it on both sides of phi.
#[derive(Clone, Debug)]
pub struct SubgroupMatch {
    pub h_order: usize,
    /// Descriptor with Gamma/Gamma_2(2,4) = H (codomain side), if a named
    /// descriptor matches.
    pub gamma: Option<GroupDescriptor>,
    /// Descriptor with Gamma'/Gamma_2^2(2,4) = phi^{-1}(H) (domain side).
    pub gamma_prime: Option<GroupDescriptor>,
    pub fingerprints_equal: bool,
    pub generator_lifts: Vec<SymplecticMatrix>,
}

/// Matches H = <classes of h_gens> inside the codomain Gamma_0^0(2)/Gamma_2(2,4)
/// with named intermediate groups on both sides of the isomorphism. The
/// generators are handed over as matrices in Gamma_0^0(2); their preimage
/// under phi defines the subgroup on the Gamma_0(2) side.
pub fn match_subgroups(
    domain: &FiniteQuotient,
    codomain: &FiniteQuotient,
    map: &QuotientMap,
    h_gens: &[SymplecticMatrix],
) -> Result<SubgroupMatch> {
    let mut seed = Vec::new();
    for m in h_gens {
        seed.push(codomain.class_of(m)?);
    }
    let h = codomain.subgroup_closure(&seed);
    if !codomain.is_subgroup(&h) {
        return Err(Error::NotSubgroup);
    }
    let h_dom: BTreeSet<u16> = h.iter().map(|&x| map.invert(x)).collect();
    if !domain.is_subgroup(&h_dom) {
        return Err(Error::NotSubgroup);
    }
    let fp_cod = codomain.fingerprint_of(&h);
    let fp_dom = domain.fingerprint_of(&h_dom);
    let match_descriptor = |q: &FiniteQuotient, set: &BTreeSet<u16>| -> Result<Option<GroupDescriptor>> {
        'outer: for cand in intermediate_descriptors(q.ambient.genus) {
            if q.modulus % cand.modulus().max(1) != 0 {
                continue;
            }
            // kernel must sit inside the candidate
            let kernel_gens = match q.kernel.generators() {
                Ok(gs) => gs,
                Err(_) => continue,
            };
            for kg in &kernel_gens {
                if !cand.member(kg)? {
                    continue 'outer;
                }
            }
            let mut cls: BTreeSet<u16> = BTreeSet::new();
            for i in 0..q.order() as u16 {
                if cand.member_residues(q.rep(i), q.modulus, q.ambient.genus)? {
                    cls.insert(i);
                }
            }
            if &cls == set {
                return Ok(Some(cand));
            }
        }
        Ok(None)
    };
    let gamma = match_descriptor(codomain, &h)?;
    let gamma_prime = match_descriptor(domain, &h_dom)?;
    let generator_lifts = seed
        .iter()
        .map(|&c| codomain.lift(c).clone())
        .collect();
    Ok(SubgroupMatch {
        h_order: h.len(),
        gamma,
        gamma_prime,
        fingerprints_equal: fp_cod == fp_dom,
        generator_lifts,
    })
}

/// Sampled normality of the kernel in the ambient group: t k t^{-1} stays
/// in the kernel for ambient generators t and random kernel elements k.
pub fn verify_kernel_normality(q: &FiniteQuotient, samples: usize, seed: u64) -> Result<bool> {
    let mut rng = crate::rng::SplitMix64::new(seed);
    let ambient_gens = q.ambient.generators()?;
    for _ in 0..samples {
        let k = q.kernel.random_element_with(&mut rng, 6)?;
        for t in &ambient_gens {
            let conj = t.mul(&k).mul(&t.inverse());
            if !q.kernel.member(&conj)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::GroupDescriptor;

    fn g224_quotient() -> FiniteQuotient {
        FiniteQuotient::enumerate(
            GroupDescriptor::gamma0(2, 2),
            GroupDescriptor::igusa_upper(2),
        )
        .unwrap()
    }

    fn codomain_quotient() -> FiniteQuotient {
        FiniteQuotient::enumerate(GroupDescriptor::gamma00(2), GroupDescriptor::igusa(2)).unwrap()
    }

    #[test]
    fn index_96_and_structure() {
        let q = g224_quotient();
        assert_eq!(q.order(), 96);
        assert!(!q.is_abelian());
        let report = structure_report(&q, 16);
        let n = report.normal_subgroup.expect("normal F_2^4 found");
        assert_eq!(n.order, 16);
        assert_eq!(n.exponent, 2);
        assert_eq!(n.quotient_order, 6);
        assert!(!n.quotient_abelian);
    }

    #[test]
    fn f2_cubed_quotient() {
        // Gamma_2^2(2,4)/Gamma_2(2,4) has order 8, elementary abelian,
        // generated by the classes of M_1, M_2, M_3
        let b1 = IntMat::symmetric_from_upper(2, &[2, 0, 0]);
        let b2 = IntMat::symmetric_from_upper(2, &[0, 0, 2]);
        let b3 = IntMat::symmetric_from_upper(2, &[0, 1, 0]);
        let gens: Vec<SymplecticMatrix> = [b1, b2, b3]
            .iter()
            .map(|b| SymplecticMatrix::gamma_s(b).unwrap())
            .collect();
        let q = FiniteQuotient::enumerate_with(
            GroupDescriptor::igusa_upper(2),
            GroupDescriptor::igusa(2),
            &gens,
            64,
        )
        .unwrap();
        assert_eq!(q.order(), 8);
        assert!(q.is_abelian());
        assert_eq!(q.exponent(), 2);
        // full-generator enumeration agrees
        let q_full = FiniteQuotient::enumerate(
            GroupDescriptor::igusa_upper(2),
            GroupDescriptor::igusa(2),
        )
        .unwrap();
        assert_eq!(q_full.order(), 8);
    }

    #[test]
    fn trivial_quotient() {
        let q = FiniteQuotient::enumerate(
            GroupDescriptor::igusa_upper(2),
            GroupDescriptor::igusa_upper(2),
        )
        .unwrap();
        assert_eq!(q.order(), 1);
        let report = structure_report(&q, 16);
        assert_eq!(report.order, 1);
    }

    #[test]
    fn phi_is_an_isomorphism() {
        let dom = g224_quotient();
        let cod = codomain_quotient();
        assert_eq!(cod.order(), 96);
        let map = phi_iso(&dom, &cod).unwrap();
        // identity to identity
        assert_eq!(map.apply(0), 0);
        // images of the generator classes generate the codomain
        let img_classes: Vec<u16> = dom
            .generator_classes()
            .iter()
            .map(|&c| map.apply(c))
            .collect();
        let gen = cod.subgroup_closure(&img_classes);
        assert_eq!(gen.len(), cod.order());
    }

    #[test]
    fn coset_enumeration_generator_order_independent() {
        use crate::rng::SplitMix64;
        let big = GroupDescriptor::gamma0(2, 2);
        let small = GroupDescriptor::igusa_upper(2);
        let gens = big.generators().unwrap();
        let baseline = FiniteQuotient::enumerate_with(big, small, &gens, 4096)
            .unwrap();
        let mut rng = SplitMix64::new(12);
        for _ in 0..5 {
            let mut shuffled = gens.clone();
            // Fisher-Yates
            for i in (1..shuffled.len()).rev() {
                let j = rng.below(i + 1);
                shuffled.swap(i, j);
            }
            let q = FiniteQuotient::enumerate_with(big, small, &shuffled, 4096).unwrap();
            assert_eq!(q.order(), baseline.order());
            // same class set: every baseline rep appears
            for i in 0..baseline.order() as u16 {
                assert!(q.class_of(baseline.lift(i)).is_ok());
            }
        }
    }

    #[test]
    fn kernel_normality_sampled() {
        let q = g224_quotient();
        assert!(verify_kernel_normality(&q, 10, 3).unwrap());
        let q = codomain_quotient();
        assert!(verify_kernel_normality(&q, 10, 4).unwrap());
    }

    #[test]
    fn match_trivial_and_full_subgroups() {
        let dom = g224_quotient();
        let cod = codomain_quotient();
        let map = phi_iso(&dom, &cod).unwrap();
        // trivial H: the matched pair is (Gamma_2(2,4), Gamma_2^2(2,4))
        let m = match_subgroups(&dom, &cod, &map, &[]).unwrap();
        assert_eq!(m.h_order, 1);
        assert_eq!(m.gamma, Some(GroupDescriptor::igusa(2)));
        assert_eq!(m.gamma_prime, Some(GroupDescriptor::igusa_upper(2)));
        assert!(m.fingerprints_equal);
        // full G: the pair is (Gamma_0^0(2), Gamma_0(2))
        let all_gens: Vec<SymplecticMatrix> = GroupDescriptor::gamma00(2)
            .generators()
            .unwrap();
        let m = match_subgroups(&dom, &cod, &map, &all_gens).unwrap();
        assert_eq!(m.h_order, 96);
        assert_eq!(m.gamma, Some(GroupDescriptor::gamma00(2)));
        assert_eq!(m.gamma_prime, Some(GroupDescriptor::gamma0(2, 2)));
    }

    #[test]
    fn match_gopel_subgroup_pair() {
        // H = <M1, M2, tM1, tM2> (classes on the codomain side):
        // Gamma = Gamma_2(2) and Gamma' = Gamma_1(2)
        let dom = g224_quotient();
        let cod = codomain_quotient();
        let map = phi_iso(&dom, &cod).unwrap();
        let b1 = IntMat::symmetric_from_upper(2, &[2, 0, 0]);
        let b2 = IntMat::symmetric_from_upper(2, &[0, 0, 2]);
        let gens = vec![
            SymplecticMatrix::gamma_s(&b1).unwrap(),
            SymplecticMatrix::gamma_s(&b2).unwrap(),
            SymplecticMatrix::gamma_s_lower(&b1).unwrap(),
            SymplecticMatrix::gamma_s_lower(&b2).unwrap(),
        ];
        let m = match_subgroups(&dom, &cod, &map, &gens).unwrap();
        assert_eq!(m.h_order, 16);
        assert_eq!(m.gamma, Some(GroupDescriptor::principal(2, 2)));
        assert_eq!(m.gamma_prime, Some(GroupDescriptor::gamma1(2)));
        assert!(m.fingerprints_equal);
        // re-enumerate both matched quotients directly and compare the
        // abstract fingerprints with H
        let q_gamma = FiniteQuotient::enumerate(
            GroupDescriptor::principal(2, 2),
            GroupDescriptor::igusa(2),
        )
        .unwrap();
        let q_gamma_prime = FiniteQuotient::enumerate(
            GroupDescriptor::gamma1(2),
            GroupDescriptor::igusa_upper(2),
        )
        .unwrap();
        assert_eq!(q_gamma.order(), 16);
        assert_eq!(q_gamma_prime.order(), 16);
        let all_g: std::collections::BTreeSet<u16> = (0..16u16).collect();
        let fp1 = q_gamma.fingerprint_of(&all_g);
        let fp2 = q_gamma_prime.fingerprint_of(&all_g);
        assert_eq!(fp1, fp2);
        let h_seed: Vec<u16> = gens.iter().map(|g| cod.class_of(g).unwrap()).collect();
        let h = cod.subgroup_closure(&h_seed);
        assert_eq!(cod.fingerprint_of(&h), fp1);
    }

    #[test]
    fn genus3_quotient_is_the_word_set() {
        // Gamma_3^2(2,4)/Gamma_3(2,4) enumerates to 64 = 2^6 classes
        let gens: Vec<SymplecticMatrix> = crate::genus3::phi_sum_generators()
            .into_iter()
            .collect();
        let q = FiniteQuotient::enumerate_with(
            GroupDescriptor::igusa_upper(3),
            GroupDescriptor::igusa(3),
            &gens,
            256,
        )
        .unwrap();
        assert_eq!(q.order(), 64);
        assert!(q.is_abelian());
        assert_eq!(q.exponent(), 2);
    }

    #[test]
    fn fricke_map_is_an_isomorphism_mod_8() {
        let dom = g224_quotient();
        let cod = FiniteQuotient::enumerate(
            GroupDescriptor::gamma0(4, 2),
            GroupDescriptor::igusa_fricke(2),
        )
        .unwrap();
        assert_eq!(cod.order(), 96);
        assert_eq!(cod.modulus, 8);
        let map = fricke_iso(&dom, &cod).unwrap();
        assert_eq!(map.apply(0), 0);
    }
}

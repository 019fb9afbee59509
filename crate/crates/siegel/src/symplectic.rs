//! Exact arithmetic in the integral symplectic group Sp(2g, Z).

use crate::error::{Error, Result};
use crate::intmat::IntMat;
use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use std::fmt;

/// An element of Sp(2g, Z), validated on construction: t(M) J M = J holds
/// exactly, which is equivalent to the block relations
/// A tB = B tA, C tD = D tC, A tD - B tC = 1.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymplecticMatrix {
    g: usize,
    m: IntMat,
}

/// JSON form used by the CLI and golden files.
#[derive(Serialize, Deserialize)]
pub struct MatrixJson {
    pub g: usize,
    pub rows: Vec<Vec<i64>>,
}

pub fn standard_form(g: usize) -> IntMat {
    let mut j = IntMat::zeros(2 * g, 2 * g);
    for i in 0..g {
        j.set(i, g + i, BigInt::one());
        j.set(g + i, i, BigInt::from(-1));
    }
    j
}

/// True iff the square integer matrix satisfies t(M) J M = J.
pub fn is_symplectic(m: &IntMat) -> Result<bool> {
    if m.rows() != m.cols() || m.rows() % 2 != 0 || m.rows() == 0 {
        return Err(Error::Dimension(m.rows(), m.cols()));
    }
    let g = m.rows() / 2;
    let j = standard_form(g);
    Ok(&(&m.transpose() * &j) * m == j)
}

impl SymplecticMatrix {
    pub fn new(m: IntMat) -> Result<SymplecticMatrix> {
        if is_symplectic(&m)? {
            Ok(SymplecticMatrix {
                g: m.rows() / 2,
                m,
            })
        } else {
            Err(Error::NotSymplectic)
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<SymplecticMatrix> {
        SymplecticMatrix::new(IntMat::from_rows(rows))
    }

    pub fn identity(g: usize) -> SymplecticMatrix {
        SymplecticMatrix {
            g,
            m: IntMat::identity(2 * g),
        }
    }

    /// The standard form J = [[0, 1], [-1, 0]] as a group element.
    pub fn j(g: usize) -> SymplecticMatrix {
        SymplecticMatrix {
            g,
            m: standard_form(g),
        }
    }

    /// Upper translation [[1, S], [0, 1]] for symmetric S.
    pub fn gamma_s(s: &IntMat) -> Result<SymplecticMatrix> {
        if !s.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let g = s.rows();
        let mut m = IntMat::identity(2 * g);
        for i in 0..g {
            for j in 0..g {
                m.set(i, g + j, s.get(i, j).clone());
            }
        }
        Ok(SymplecticMatrix { g, m })
    }

    /// Lower translation [[1, 0], [S, 1]] for symmetric S.
    pub fn gamma_s_lower(s: &IntMat) -> Result<SymplecticMatrix> {
        Ok(SymplecticMatrix::gamma_s(s)?.transpose())
    }

    /// Block diagonal [[A, 0], [0, tA^{-1}]] for unimodular A.
    pub fn block_diag(a: &IntMat) -> Result<SymplecticMatrix> {
        let g = a.rows();
        let ainv_t = a.inverse_unimodular()?.transpose();
        let mut m = IntMat::zeros(2 * g, 2 * g);
        for i in 0..g {
            for j in 0..g {
                m.set(i, j, a.get(i, j).clone());
                m.set(g + i, g + j, ainv_t.get(i, j).clone());
            }
        }
        SymplecticMatrix::new(m)
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn matrix(&self) -> &IntMat {
        &self.m
    }

    fn block(&self, r0: usize, c0: usize) -> IntMat {
        let mut b = IntMat::zeros(self.g, self.g);
        for i in 0..self.g {
            for j in 0..self.g {
                b.set(i, j, self.m.get(r0 + i, c0 + j).clone());
            }
        }
        b
    }

    pub fn a(&self) -> IntMat {
        self.block(0, 0)
    }

    pub fn b(&self) -> IntMat {
        self.block(0, self.g)
    }

    pub fn c(&self) -> IntMat {
        self.block(self.g, 0)
    }

    pub fn d(&self) -> IntMat {
        self.block(self.g, self.g)
    }

    pub fn mul(&self, rhs: &SymplecticMatrix) -> SymplecticMatrix {
        assert_eq!(self.g, rhs.g, "genus mismatch");
        // product of symplectic matrices is symplectic
        SymplecticMatrix {
            g: self.g,
            m: &self.m * &rhs.m,
        }
    }

    /// Exact inverse [[tD, -tB], [-tC, tA]].
    pub fn inverse(&self) -> SymplecticMatrix {
        let g = self.g;
        let (a, b, c, d) = (self.a(), self.b(), self.c(), self.d());
        let mut m = IntMat::zeros(2 * g, 2 * g);
        let dt = d.transpose();
        let bt = b.transpose();
        let ct = c.transpose();
        let at = a.transpose();
        for i in 0..g {
            for j in 0..g {
                m.set(i, j, dt.get(i, j).clone());
                m.set(i, g + j, -bt.get(i, j).clone());
                m.set(g + i, j, -ct.get(i, j).clone());
                m.set(g + i, g + j, at.get(i, j).clone());
            }
        }
        SymplecticMatrix { g, m }
    }

    pub fn transpose(&self) -> SymplecticMatrix {
        // the transpose of a symplectic matrix is symplectic
        SymplecticMatrix {
            g: self.g,
            m: self.m.transpose(),
        }
    }

    pub fn neg(&self) -> SymplecticMatrix {
        SymplecticMatrix {
            g: self.g,
            m: -(&self.m),
        }
    }

    pub fn pow(&self, n: i64) -> SymplecticMatrix {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut acc = SymplecticMatrix::identity(self.g);
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    /// Conjugation by the Fricke matrix: gamma^{J2} = [[D, -C/2], [-2B, A]].
    /// Integral exactly when C = 0 mod 2.
    pub fn fricke_conjugate(&self) -> Result<SymplecticMatrix> {
        let c = self.c();
        if !c.is_zero_mod(2) {
            return Err(Error::NotConjugable);
        }
        let g = self.g;
        let (a, b, d) = (self.a(), self.b(), self.d());
        let mut m = IntMat::zeros(2 * g, 2 * g);
        for i in 0..g {
            for j in 0..g {
                m.set(i, j, d.get(i, j).clone());
                m.set(i, g + j, -(c.get(i, j) / BigInt::from(2)));
                m.set(g + i, j, b.get(i, j).clone() * BigInt::from(-2));
                m.set(g + i, g + j, a.get(i, j).clone());
            }
        }
        SymplecticMatrix::new(m)
    }

    /// gamma~ = [[A, 2B], [C/2, D]], the matrix with 2(gamma.tau) = gamma~.(2 tau).
    /// Integral exactly when C = 0 mod 2.
    pub fn tilde(&self) -> Result<SymplecticMatrix> {
        let c = self.c();
        if !c.is_zero_mod(2) {
            return Err(Error::NotConjugable);
        }
        let g = self.g;
        let (a, b, d) = (self.a(), self.b(), self.d());
        let mut m = IntMat::zeros(2 * g, 2 * g);
        for i in 0..g {
            for j in 0..g {
                m.set(i, j, a.get(i, j).clone());
                m.set(i, g + j, b.get(i, j).clone() * BigInt::from(2));
                m.set(g + i, j, c.get(i, j) / BigInt::from(2));
                m.set(g + i, g + j, d.get(i, j).clone());
            }
        }
        SymplecticMatrix::new(m)
    }

    /// Entries reduced mod n, row-major.
    pub fn reduce(&self, n: u32) -> Vec<u8> {
        self.m.reduce(n)
    }

    pub fn to_json(&self) -> Result<MatrixJson> {
        Ok(MatrixJson {
            g: self.g,
            rows: self.m.to_i64_rows()?,
        })
    }

    pub fn from_json(j: &MatrixJson) -> Result<SymplecticMatrix> {
        if j.rows.len() != 2 * j.g || j.rows.iter().any(|r| r.len() != 2 * j.g) {
            return Err(Error::Dimension(j.rows.len(), j.g));
        }
        SymplecticMatrix::from_rows(&j.rows)
    }
}

impl fmt::Display for SymplecticMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.m)
    }
}

/// The Fricke matrix J2 = (1/sqrt 2) [[0, 1], [-2, 0]], kept symbolic: only
/// its Moebius action and the conjugation formula are ever needed, and both
/// are rational in the entries.
#[derive(Clone, Copy, Debug)]
pub struct FrickeJ2 {
    pub genus: usize,
}

impl FrickeJ2 {
    pub fn new(genus: usize) -> FrickeJ2 {
        FrickeJ2 { genus }
    }

    pub fn conjugate(&self, gamma: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        if gamma.genus() != self.genus {
            return Err(Error::GenusMismatch(gamma.genus(), self.genus));
        }
        gamma.fricke_conjugate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s2(entries: [i64; 3]) -> IntMat {
        IntMat::symmetric_from_upper(2, &entries)
    }

    #[test]
    fn identity_and_j_are_symplectic() {
        for g in 1..=4 {
            assert!(is_symplectic(SymplecticMatrix::identity(g).matrix()).unwrap());
            assert!(is_symplectic(SymplecticMatrix::j(g).matrix()).unwrap());
        }
    }

    #[test]
    fn translation_requires_symmetric_block() {
        // [[1,S],[0,1]] with S = [[2,0],[0,0]] is symplectic
        let m = IntMat::from_rows(&[
            vec![1, 0, 2, 0],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ]);
        assert!(is_symplectic(&m).unwrap());
        // non-symmetric S fails
        let m = IntMat::from_rows(&[
            vec![1, 0, 0, 1],
            vec![0, 1, 0, 0],
            vec![0, 0, 1, 0],
            vec![0, 0, 0, 1],
        ]);
        assert!(!is_symplectic(&m).unwrap());
    }

    #[test]
    fn odd_dimension_rejected() {
        let m = IntMat::identity(3);
        assert!(matches!(is_symplectic(&m), Err(Error::Dimension(3, 3))));
    }

    #[test]
    fn inverse_and_products() {
        let s = s2([1, 2, -1]);
        let g1 = SymplecticMatrix::gamma_s(&s).unwrap();
        let g2 = SymplecticMatrix::j(2);
        let p = g1.mul(&g2);
        assert!(is_symplectic(p.matrix()).unwrap());
        let e = p.mul(&p.inverse());
        assert_eq!(e, SymplecticMatrix::identity(2));
    }

    #[test]
    fn fricke_conjugate_is_involution() {
        let s = s2([2, 1, 0]);
        let gamma = SymplecticMatrix::gamma_s(&s)
            .unwrap()
            .mul(&SymplecticMatrix::gamma_s_lower(&s.scale(2)).unwrap());
        let c1 = gamma.fricke_conjugate().unwrap();
        let c2 = c1.fricke_conjugate().unwrap();
        assert_eq!(c2, gamma);
        // identity maps to identity
        let id = SymplecticMatrix::identity(2);
        assert_eq!(id.fricke_conjugate().unwrap(), id);
    }

    #[test]
    fn fricke_conjugate_rejects_odd_c() {
        let gamma = SymplecticMatrix::j(2);
        assert!(matches!(
            gamma.fricke_conjugate(),
            Err(Error::NotConjugable)
        ));
    }

    #[test]
    fn json_round_trip() {
        let g = SymplecticMatrix::j(2);
        let j = g.to_json().unwrap();
        let back = SymplecticMatrix::from_json(&j).unwrap();
        assert_eq!(g, back);
    }
}

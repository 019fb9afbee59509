//! Dense integer matrices with arbitrary-precision entries.
//!
//! Generator words keep magnitudes small but nothing in the crate assumes
//! entries fit a machine word; products of long words stay exact.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    e: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> IntMat {
        IntMat {
            rows,
            cols,
            e: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMat {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> IntMat {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut m = IntMat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, BigInt::from(v));
            }
        }
        m
    }

    /// Symmetric matrix from its upper triangle, row-major.
    pub fn symmetric_from_upper(n: usize, upper: &[i64]) -> IntMat {
        assert_eq!(upper.len(), n * (n + 1) / 2);
        let mut m = IntMat::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                m.set(i, j, BigInt::from(upper[k]));
                m.set(j, i, BigInt::from(upper[k]));
                k += 1;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.e[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.e[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> IntMat {
        let mut t = IntMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, k: i64) -> IntMat {
        let k = BigInt::from(k);
        let mut m = self.clone();
        for v in &mut m.e {
            *v *= &k;
        }
        m
    }

    pub fn diag(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .collect()
    }

    pub fn trace(&self) -> BigInt {
        self.diag().into_iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(|v| v.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && *self == self.transpose()
    }

    /// Every entry congruent to the matching entry of `other` mod n.
    pub fn congruent_mod(&self, other: &IntMat, n: u32) -> bool {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let n = BigInt::from(n);
        self.e
            .iter()
            .zip(&other.e)
            .all(|(a, b)| ((a - b) % &n).is_zero())
    }

    pub fn is_zero_mod(&self, n: u32) -> bool {
        let n = BigInt::from(n);
        self.e.iter().all(|v| (v % &n).is_zero())
    }

    /// Entries reduced into 0..n, row-major.
    pub fn reduce(&self, n: u32) -> Vec<u8> {
        assert!(n <= 255);
        let nn = BigInt::from(n);
        self.e
            .iter()
            .map(|v| {
                let r = v.mod_floor_ref(&nn);
                u8::try_from(r).expect("residue fits u8")
            })
            .collect()
    }

    /// Exact determinant by cofactor expansion; intended for small blocks.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        match self.rows {
            0 => BigInt::one(),
            1 => self.get(0, 0).clone(),
            2 => self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0),
            n => {
                let mut acc = BigInt::zero();
                for j in 0..n {
                    let mut minor = IntMat::zeros(n - 1, n - 1);
                    for i in 1..n {
                        let mut cj = 0;
                        for k in 0..n {
                            if k == j {
                                continue;
                            }
                            minor.set(i - 1, cj, self.get(i, k).clone());
                            cj += 1;
                        }
                    }
                    let term = self.get(0, j) * minor.det();
                    if j % 2 == 0 {
                        acc += term;
                    } else {
                        acc -= term;
                    }
                }
                acc
            }
        }
    }

    /// Inverse of a unimodular matrix (det = +-1); errors otherwise.
    pub fn inverse_unimodular(&self) -> Result<IntMat> {
        assert_eq!(self.rows, self.cols);
        let d = self.det();
        if !(d.clone().abs().is_one()) {
            return Err(Error::Precondition(format!(
                "matrix is not unimodular (det {})",
                d
            )));
        }
        let n = self.rows;
        let sign = d;
        let mut adj = IntMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let mut minor = IntMat::zeros(n - 1, n - 1);
                let mut mi = 0;
                for r in 0..n {
                    if r == i {
                        continue;
                    }
                    let mut mj = 0;
                    for c in 0..n {
                        if c == j {
                            continue;
                        }
                        minor.set(mi, mj, self.get(r, c).clone());
                        mj += 1;
                    }
                    mi += 1;
                }
                let mut cof = minor.det();
                if (i + j) % 2 == 1 {
                    cof = -cof;
                }
                adj.set(j, i, cof * &sign);
            }
        }
        Ok(adj)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.e
            .iter()
            .map(|v| {
                i64::try_from(v).map(|x| x as f64).unwrap_or_else(|_| {
                    // fall back through string for giants; precision loss accepted
                    v.to_string().parse::<f64>().unwrap()
                })
            })
            .collect()
    }

    pub fn to_i64_rows(&self) -> Result<Vec<Vec<i64>>> {
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                row.push(i64::try_from(self.get(i, j)).map_err(|_| {
                    Error::Config("entry exceeds i64; cannot serialize".into())
                })?);
            }
            out.push(row);
        }
        Ok(out)
    }

    /// Max absolute value of entries, saturating to f64.
    pub fn max_abs(&self) -> f64 {
        self.e
            .iter()
            .map(|v| {
                i64::try_from(v.clone().abs())
                    .map(|x| x as f64)
                    .unwrap_or(f64::INFINITY)
            })
            .fold(0.0, f64::max)
    }
}

trait ModFloorRef {
    fn mod_floor_ref(&self, n: &BigInt) -> BigInt;
}

impl ModFloorRef for BigInt {
    fn mod_floor_ref(&self, n: &BigInt) -> BigInt {
        let r = self % n;
        if r.is_negative() {
            r + n
        } else {
            r
        }
    }
}

impl Add for &IntMat {
    type Output = IntMat;
    fn add(self, rhs: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut m = self.clone();
        for (a, b) in m.e.iter_mut().zip(&rhs.e) {
            *a += b;
        }
        m
    }
}

impl Sub for &IntMat {
    type Output = IntMat;
    fn sub(self, rhs: &IntMat) -> IntMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let mut m = self.clone();
        for (a, b) in m.e.iter_mut().zip(&rhs.e) {
            *a -= b;
        }
        m
    }
}

impl Neg for &IntMat {
    type Output = IntMat;
    fn neg(self) -> IntMat {
        let mut m = self.clone();
        for a in &mut m.e {
            *a = -a.clone();
        }
        m
    }
}

impl Mul for &IntMat {
    type Output = IntMat;
    fn mul(self, rhs: &IntMat) -> IntMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = IntMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = a * rhs.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }
}

/// Matrix-vector product over BigInt.
pub fn mat_vec(m: &IntMat, v: &[BigInt]) -> Vec<BigInt> {
    assert_eq!(m.cols(), v.len());
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j) * &v[j]).sum())
        .collect()
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_det() {
        let a = IntMat::from_rows(&[vec![1, 2], vec![3, 4]]);
        let b = IntMat::from_rows(&[vec![0, 1], vec![1, 0]]);
        let ab = &a * &b;
        assert_eq!(ab, IntMat::from_rows(&[vec![2, 1], vec![4, 3]]));
        assert_eq!(a.det(), BigInt::from(-2));
        let c = IntMat::from_rows(&[vec![2, 0, 1], vec![0, 1, 0], vec![1, 0, 1]]);
        assert_eq!(c.det(), BigInt::from(1));
        let cinv = c.inverse_unimodular().unwrap();
        assert_eq!(&c * &cinv, IntMat::identity(3));
    }

    #[test]
    fn reduce_handles_negatives() {
        let a = IntMat::from_rows(&[vec![-1, 5], vec![-7, 4]]);
        assert_eq!(a.reduce(4), vec![3, 1, 1, 0]);
    }
}

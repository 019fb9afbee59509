//! Exact arithmetic in Z[zeta_8].
//!
//! The multiplier kappa(gamma) is an 8th root of unity and the phases
//! e(phi_m(gamma)) have denominator 8, so every exact phase computation in
//! the crate lives in the ring Z[zeta_8] with zeta_8 = e^{2 pi i / 8}.
//! Elements are stored on the basis 1, zeta, zeta^2, zeta^3 with the
//! reduction zeta^4 = -1 applied eagerly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// An element a0 + a1*zeta + a2*zeta^2 + a3*zeta^3 of Z[zeta_8].
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub struct Cyclotomic8(pub [i64; 4]);

impl Cyclotomic8 {
    pub const ZERO: Cyclotomic8 = Cyclotomic8([0, 0, 0, 0]);
    pub const ONE: Cyclotomic8 = Cyclotomic8([1, 0, 0, 0]);

    /// zeta_8^k for any integer k.
    pub fn root_of_unity(k: i64) -> Cyclotomic8 {
        let k = k.rem_euclid(8) as usize;
        let mut c = [0i64; 4];
        if k < 4 {
            c[k] = 1;
        } else {
            c[k - 4] = -1;
        }
        Cyclotomic8(c)
    }

    /// i^k as an element of the ring (i = zeta^2).
    pub fn i_pow(k: i64) -> Cyclotomic8 {
        Cyclotomic8::root_of_unity(2 * k)
    }

    pub fn from_int(n: i64) -> Cyclotomic8 {
        Cyclotomic8([n, 0, 0, 0])
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0, 0]
    }

    /// True when the element is one of the eight roots of unity.
    pub fn is_root_of_unity(&self) -> bool {
        (0..8).any(|k| *self == Cyclotomic8::root_of_unity(k))
    }

    /// Complex conjugate (zeta -> zeta^{-1}).
    pub fn conj(&self) -> Cyclotomic8 {
        let [a0, a1, a2, a3] = self.0;
        // zeta^{-1} = -zeta^3, zeta^{-2} = -zeta^2, zeta^{-3} = -zeta.
        Cyclotomic8([a0, -a3, -a2, -a1])
    }

    pub fn to_complex(&self) -> Complex64 {
        let z = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        let mut acc = Complex64::new(self.0[0] as f64, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for k in 1..4 {
            p *= z;
            acc += p * self.0[k] as f64;
        }
        acc
    }
}

impl Add for Cyclotomic8 {
    type Output = Cyclotomic8;
    fn add(self, rhs: Cyclotomic8) -> Cyclotomic8 {
        let mut c = [0i64; 4];
        for k in 0..4 {
            c[k] = self.0[k] + rhs.0[k];
        }
        Cyclotomic8(c)
    }
}

impl Sub for Cyclotomic8 {
    type Output = Cyclotomic8;
    fn sub(self, rhs: Cyclotomic8) -> Cyclotomic8 {
        self + (-rhs)
    }
}

impl Neg for Cyclotomic8 {
    type Output = Cyclotomic8;
    fn neg(self) -> Cyclotomic8 {
        Cyclotomic8([-self.0[0], -self.0[1], -self.0[2], -self.0[3]])
    }
}

impl Mul for Cyclotomic8 {
    type Output = Cyclotomic8;
    fn mul(self, rhs: Cyclotomic8) -> Cyclotomic8 {
        let mut c = [0i64; 4];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.0.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                let k = i + j;
                if k < 4 {
                    c[k] += a * b;
                } else {
                    c[k - 4] -= a * b;
                }
            }
        }
        Cyclotomic8(c)
    }
}

impl fmt::Display for Cyclotomic8 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "z", "z^2", "z^3"];
        let mut first = true;
        for k in 0..4 {
            let a = self.0[k];
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, " {} ", if a > 0 { "+" } else { "-" })?;
            } else if a < 0 {
                write!(f, "-")?;
            }
            let m = a.abs();
            if k == 0 || m != 1 {
                write!(f, "{}", m)?;
            }
            write!(f, "{}", names[k])?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The rational phase phi_m(gamma) reduced mod 1. Its denominator divides 8,
/// so the residue of the numerator mod 8 carries the whole value.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PhiValue {
    eighths: u8,
}

impl PhiValue {
    pub fn from_eighths(num: i64) -> PhiValue {
        PhiValue {
            eighths: num.rem_euclid(8) as u8,
        }
    }

    /// Numerator of phi mod 1 over the fixed denominator 8.
    pub fn eighths(&self) -> u8 {
        self.eighths
    }

    pub fn is_zero(&self) -> bool {
        self.eighths == 0
    }

    /// e(phi) as an exact 8th root of unity.
    pub fn exp(&self) -> Cyclotomic8 {
        Cyclotomic8::root_of_unity(self.eighths as i64)
    }

    /// e(2 phi) as an exact 4th root of unity.
    pub fn exp_double(&self) -> Cyclotomic8 {
        Cyclotomic8::root_of_unity(2 * self.eighths as i64)
    }

    pub fn to_complex(&self) -> Complex64 {
        self.exp().to_complex()
    }
}

//! Numerical theta functions with certified series truncation.
//!
//! The series for theta with characteristic m at (tau, z) is
//!
//!   sum over n in Z^g of e( 1/2 t(n + m'/2) tau (n + m'/2)
//!                           + t(n + m'/2) (z + m''/2) ),
//!
//! with e(t) = exp(2 pi i t). The engine sums over the box |n_i| <= R and
//! certifies the cutoff with a Gaussian shell bound: every term with
//! |n|_inf = k has |p| = |n + a| >= k - 1 for half-integer shifts, so the
//! tail is dominated by sum_k count(k) exp(-pi lambda_min(Y) (k-1)^2 + ...),
//! a one-dimensional sum that is evaluated to exhaustion.

use crate::chars::ThetaCharacteristic;
use crate::error::{Error, Result};
use crate::intmat::IntMat;
use crate::rng::SplitMix64;
use crate::symplectic::SymplecticMatrix;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Evaluation point: a complex symmetric g x g matrix with positive
/// definite imaginary part.
#[derive(Clone, Debug)]
pub struct SiegelPoint {
    g: usize,
    x: DMatrix<f64>,
    y: DMatrix<f64>,
}

/// JSON form: {"re": rows, "im": rows}.
#[derive(Serialize, Deserialize)]
pub struct SiegelPointJson {
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl SiegelPoint {
    /// Builds tau = x + i y; x and y must be exactly symmetric and y must
    /// admit a Cholesky factorization.
    pub fn new(x: DMatrix<f64>, y: DMatrix<f64>) -> Result<SiegelPoint> {
        let g = x.nrows();
        if x.ncols() != g || y.nrows() != g || y.ncols() != g || g == 0 {
            return Err(Error::Dimension(x.nrows(), x.ncols()));
        }
        for i in 0..g {
            for j in 0..g {
                if x[(i, j)] != x[(j, i)] || y[(i, j)] != y[(j, i)] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        if nalgebra::linalg::Cholesky::new(y.clone()).is_none() {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(SiegelPoint { g, x, y })
    }

    pub fn from_complex(m: &DMatrix<Complex64>) -> Result<SiegelPoint> {
        let g = m.nrows();
        let x = DMatrix::from_fn(g, g, |i, j| m[(i, j)].re);
        let y = DMatrix::from_fn(g, g, |i, j| m[(i, j)].im);
        SiegelPoint::new(x, y)
    }

    /// Symmetrizes the numerical matrix first; used for Moebius images whose
    /// asymmetry is pure roundoff.
    pub fn from_complex_symmetrized(m: &DMatrix<Complex64>) -> Result<SiegelPoint> {
        let g = m.nrows();
        let s = DMatrix::from_fn(g, g, |i, j| (m[(i, j)] + m[(j, i)]) * 0.5);
        SiegelPoint::from_complex(&s)
    }

    /// i * t * I_g.
    pub fn scaled_identity(g: usize, t: f64) -> SiegelPoint {
        SiegelPoint::new(DMatrix::zeros(g, g), DMatrix::identity(g, g) * t).unwrap()
    }

    /// Random point: X symmetric with entries uniform in [-1, 1),
    /// Y = L tL + I/2 with L uniform in [-1, 1). Draw order is pinned:
    /// the upper triangle of X row by row, then all of L row by row.
    pub fn random(g: usize, rng: &mut SplitMix64) -> SiegelPoint {
        let mut x = DMatrix::zeros(g, g);
        for i in 0..g {
            for j in i..g {
                let v = rng.symmetric();
                x[(i, j)] = v;
                x[(j, i)] = v;
            }
        }
        let l = DMatrix::from_fn(g, g, |_, _| rng.symmetric());
        let mut y = &l * l.transpose();
        for i in 0..g {
            y[(i, i)] += 0.5;
        }
        // L tL can be numerically asymmetric in the last bit
        let ys = DMatrix::from_fn(g, g, |i, j| 0.5 * (y[(i, j)] + y[(j, i)]));
        SiegelPoint::new(x, ys).expect("random Y is positive definite")
    }

    pub fn genus(&self) -> usize {
        self.g
    }

    pub fn re(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn im(&self) -> &DMatrix<f64> {
        &self.y
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.g, self.g, |i, j| {
            Complex64::new(self.x[(i, j)], self.y[(i, j)])
        })
    }

    /// Smallest eigenvalue of Im(tau).
    pub fn lambda_min(&self) -> f64 {
        self.y
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b))
    }

    /// Moebius action (A tau + B)(C tau + D)^{-1}.
    pub fn apply(&self, gamma: &SymplecticMatrix) -> Result<SiegelPoint> {
        if gamma.genus() != self.g {
            return Err(Error::GenusMismatch(gamma.genus(), self.g));
        }
        let tau = self.matrix();
        let a = complex_from_intmat(&gamma.a());
        let b = complex_from_intmat(&gamma.b());
        let num = &a * &tau + b;
        let den = cocycle_matrix(gamma, self);
        let den_inv = den
            .try_inverse()
            .ok_or_else(|| Error::IllConditioned("C tau + D is singular".into()))?;
        SiegelPoint::from_complex_symmetrized(&(num * den_inv))
    }

    /// Fricke action tau -> -(2 tau)^{-1}.
    pub fn apply_fricke(&self) -> Result<SiegelPoint> {
        let tau = self.matrix() * Complex64::new(2.0, 0.0);
        let inv = tau
            .try_inverse()
            .ok_or_else(|| Error::IllConditioned("2 tau is singular".into()))?;
        SiegelPoint::from_complex_symmetrized(&(-inv))
    }

    /// 2 tau.
    pub fn double(&self) -> SiegelPoint {
        SiegelPoint {
            g: self.g,
            x: &self.x * 2.0,
            y: &self.y * 2.0,
        }
    }

    /// tau + S for integral symmetric S.
    pub fn translate(&self, s: &IntMat) -> Result<SiegelPoint> {
        if s.rows() != self.g || !s.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let sf = s.to_f64();
        let mut x = self.x.clone();
        for i in 0..self.g {
            for j in 0..self.g {
                x[(i, j)] += sf[i * self.g + j];
            }
        }
        Ok(SiegelPoint {
            g: self.g,
            x,
            y: self.y.clone(),
        })
    }

    pub fn to_json(&self) -> SiegelPointJson {
        let rows = |m: &DMatrix<f64>| {
            (0..self.g)
                .map(|i| (0..self.g).map(|j| m[(i, j)]).collect())
                .collect()
        };
        SiegelPointJson {
            re: rows(&self.x),
            im: rows(&self.y),
        }
    }

    pub fn from_json(j: &SiegelPointJson) -> Result<SiegelPoint> {
        let g = j.re.len();
        if j.im.len() != g || j.re.iter().chain(&j.im).any(|r| r.len() != g) {
            return Err(Error::Dimension(g, j.im.len()));
        }
        let x = DMatrix::from_fn(g, g, |i, jj| j.re[i][jj]);
        let y = DMatrix::from_fn(g, g, |i, jj| j.im[i][jj]);
        SiegelPoint::new(x, y)
    }
}

/// C tau + D as a complex matrix.
pub fn cocycle_matrix(gamma: &SymplecticMatrix, tau: &SiegelPoint) -> DMatrix<Complex64> {
    let c = complex_from_intmat(&gamma.c());
    let d = complex_from_intmat(&gamma.d());
    &c * tau.matrix() + d
}

pub fn complex_from_intmat(m: &IntMat) -> DMatrix<Complex64> {
    let vals = m.to_f64();
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        Complex64::new(vals[i * m.cols() + j], 0.0)
    })
}

/// Truncation and tolerance policy for one evaluation.
#[derive(Clone, Copy, Debug)]
pub struct EvalOptions {
    pub tol: f64,
    pub max_radius: u32,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            tol: 1e-12,
            max_radius: 320,
        }
    }
}

impl EvalOptions {
    pub fn with_tol(tol: f64) -> EvalOptions {
        EvalOptions {
            tol,
            ..Default::default()
        }
    }
}

/// A certified evaluation: |value - true value| <= tail_bound < tol.
#[derive(Clone, Copy, Debug)]
pub struct ThetaValue {
    pub value: Complex64,
    pub radius: u32,
    pub tail_bound: f64,
}

/// A certified gradient evaluation.
#[derive(Clone, Debug)]
pub struct GradientValue {
    pub value: Vec<Complex64>,
    pub radius: u32,
    pub tail_bound: f64,
}

/// Shell bound for |n|_inf = k: the number of lattice points on the shell
/// times the Gaussian majorant at distance k - 1, with a correction for
/// Im(z) and an optional polynomial factor for gradients.
fn shell_bound(k: u32, g: usize, lambda: f64, zeta: f64, gradient: bool) -> f64 {
    let count = {
        let a = (2 * k + 1) as f64;
        let b = (2 * k - 1) as f64;
        a.powi(g as i32) - b.powi(g as i32)
    };
    let q = (k - 1) as f64;
    let expo = if lambda * q >= zeta {
        -PI * lambda * q * q + 2.0 * PI * zeta * q
    } else {
        PI * zeta * zeta / lambda
    };
    let poly = if gradient {
        2.0 * PI * (g as f64).sqrt() * ((k + 1) as f64)
    } else {
        1.0
    };
    count * poly * expo.exp()
}

fn radius_for(
    lambda: f64,
    g: usize,
    tol: f64,
    zeta: f64,
    gradient: bool,
    cap: u32,
) -> Result<(u32, f64)> {
    if tol <= 0.0 {
        return Err(Error::BadTolerance(tol));
    }
    if !(lambda > 0.0) {
        return Err(Error::NotPositiveDefinite);
    }
    // shells decay superexponentially; walk out to underflow
    let hard_stop = cap + 4000;
    let mut shells: Vec<f64> = Vec::new();
    let mut k = 2u32;
    loop {
        let s = shell_bound(k, g, lambda, zeta, gradient);
        shells.push(s);
        let far_enough = lambda * ((k - 1) as f64) > zeta;
        if (s < 1e-320 && far_enough) || k >= hard_stop {
            break;
        }
        k += 1;
    }
    // suffix sums: tail(R) = sum of shells with k >= R + 1
    let mut tail = vec![0.0f64; shells.len() + 1];
    for i in (0..shells.len()).rev() {
        tail[i] = tail[i + 1] + shells[i];
    }
    for r in 1..=cap {
        let idx = (r - 1) as usize; // shells start at k = 2 = R(1) + 1
        let t = if idx < tail.len() { tail[idx] } else { 0.0 };
        if t < tol {
            return Ok((r, t));
        }
    }
    Err(Error::RadiusExceeded {
        needed: cap + 1,
        cap,
    })
}

/// Smallest R whose certified Gaussian tail at z = 0 is below tol.
pub fn truncation_radius(y: &DMatrix<f64>, tol: f64) -> Result<u32> {
    let g = y.nrows();
    let lambda = y
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .fold(f64::INFINITY, |a, &b| a.min(b));
    radius_for(lambda, g, tol, 0.0, false, EvalOptions::default().max_radius).map(|(r, _)| r)
}

fn cis(t: f64) -> Complex64 {
    Complex64::new(t.cos(), t.sin())
}

struct SumResult {
    value: Complex64,
    grad: Vec<Complex64>,
}

/// Lattice sum in lexicographic order over the box [-R, R]^g.
fn lattice_sum(
    a: &[f64],
    b: &[f64],
    tau: &DMatrix<Complex64>,
    z: &[Complex64],
    radius: u32,
    want_grad: bool,
) -> SumResult {
    let g = a.len();
    let r = radius as i64;
    let mut n = vec![-r; g];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut gacc = vec![Complex64::new(0.0, 0.0); g];
    let mut p = vec![0.0f64; g];
    loop {
        for i in 0..g {
            p[i] = n[i] as f64 + a[i];
        }
        // w = 1/2 tp tau p + tp (z + b)
        let mut w = Complex64::new(0.0, 0.0);
        for i in 0..g {
            let mut row = tau[(i, i)] * p[i] * 0.5;
            for j in (i + 1)..g {
                row += tau[(i, j)] * p[j];
            }
            w += row * p[i];
            w += (z[i] + Complex64::new(b[i], 0.0)) * p[i];
        }
        let term = (-2.0 * PI * w.im).exp() * cis(2.0 * PI * w.re);
        acc += term;
        if want_grad {
            for i in 0..g {
                gacc[i] += Complex64::new(0.0, 2.0 * PI * p[i]) * term;
            }
        }
        // odometer, last index fastest
        let mut idx = g;
        loop {
            if idx == 0 {
                return SumResult {
                    value: acc,
                    grad: gacc,
                };
            }
            idx -= 1;
            n[idx] += 1;
            if n[idx] <= r {
                break;
            }
            n[idx] = -r;
        }
    }
}

fn check_genus(len: usize, tau: &SiegelPoint) -> Result<()> {
    if len != tau.genus() {
        return Err(Error::GenusMismatch(len, tau.genus()));
    }
    Ok(())
}

/// Theta with arbitrary real shift vectors: the series over n of
/// e(1/2 t(n+a) tau (n+a) + t(n+a)(z+b)). The characteristic wrappers pass
/// a = m'/2, b = m''/2. The a-vector is reduced mod 1 into [-1/2, 1/2]
/// (an exact reindexing of the sum); b is left untouched since integer
/// shifts of b change the value.
pub fn theta_raw(
    a: &[f64],
    b: &[f64],
    tau: &SiegelPoint,
    z: &[Complex64],
    opts: EvalOptions,
) -> Result<ThetaValue> {
    check_genus(a.len(), tau)?;
    if b.len() != a.len() || z.len() != a.len() {
        return Err(Error::Dimension(b.len(), z.len()));
    }
    let ar: Vec<f64> = a.iter().map(|&v| v - v.round()).collect();
    let zeta = z.iter().map(|w| w.im * w.im).sum::<f64>().sqrt();
    let lambda = tau.lambda_min();
    let (radius, tail) = radius_for(lambda, tau.genus(), opts.tol, zeta, false, opts.max_radius)?;
    let sum = lattice_sum(&ar, b, &tau.matrix(), z, radius, false);
    Ok(ThetaValue {
        value: sum.value,
        radius,
        tail_bound: tail,
    })
}

/// Theta with characteristic m at (tau, z).
pub fn theta(
    m: &ThetaCharacteristic,
    tau: &SiegelPoint,
    z: &[Complex64],
    opts: EvalOptions,
) -> Result<ThetaValue> {
    check_genus(m.genus(), tau)?;
    let a: Vec<f64> = m.top().iter().map(|&v| v as f64 / 2.0).collect();
    let b: Vec<f64> = m.bot().iter().map(|&v| v as f64 / 2.0).collect();
    theta_raw(&a, &b, tau, z, opts)
}

/// Theta constant: theta(m, tau, 0).
pub fn theta_constant(
    m: &ThetaCharacteristic,
    tau: &SiegelPoint,
    opts: EvalOptions,
) -> Result<ThetaValue> {
    let zeros = vec![Complex64::new(0.0, 0.0); m.genus()];
    theta(m, tau, &zeros, opts)
}

/// Second order theta constant Theta[a](tau) = theta[(a; 0)](2 tau).
pub fn second_order(a: &[u8], tau: &SiegelPoint, opts: EvalOptions) -> Result<ThetaValue> {
    check_genus(a.len(), tau)?;
    let m = ThetaCharacteristic::new(a.to_vec(), vec![0; a.len()])?;
    theta_constant(&m, &tau.double(), opts)
}

/// Gradient of theta in z at z = 0 for an odd characteristic, summed
/// termwise with its own certified tail.
pub fn theta_gradient(
    m: &ThetaCharacteristic,
    tau: &SiegelPoint,
    opts: EvalOptions,
) -> Result<GradientValue> {
    check_genus(m.genus(), tau)?;
    if !m.is_odd() {
        return Err(Error::Precondition(format!(
            "gradient requires an odd characteristic, got {m}"
        )));
    }
    let g = m.genus();
    let a: Vec<f64> = m.top().iter().map(|&v| v as f64 / 2.0).collect();
    let b: Vec<f64> = m.bot().iter().map(|&v| v as f64 / 2.0).collect();
    let ar: Vec<f64> = a.iter().map(|&v| v - v.round()).collect();
    let lambda = tau.lambda_min();
    let (radius, tail) = radius_for(lambda, g, opts.tol, 0.0, true, opts.max_radius)?;
    let z = vec![Complex64::new(0.0, 0.0); g];
    let sum = lattice_sum(&ar, &b, &tau.matrix(), &z, radius, true);
    Ok(GradientValue {
        value: sum.grad,
        radius,
        tail_bound: tail,
    })
}

/// Max relative residual of the product identity
///   Theta[s](tau) Theta[s + e](tau)
///     = 2^{-g} sum over e' of (-1)^{t(s) e'} theta[e; e']^2(tau)
/// over all (s, e) in F_2^g x F_2^g.
pub fn verify_riemann_product(tau: &SiegelPoint, opts: EvalOptions) -> Result<f64> {
    let g = tau.genus();
    let count = 1usize << g;
    let bits = |k: usize| -> Vec<u8> { (0..g).map(|i| ((k >> (g - 1 - i)) & 1) as u8).collect() };
    // cache second order values and squared theta constants
    let mut so = Vec::with_capacity(count);
    for k in 0..count {
        so.push(second_order(&bits(k), tau, opts)?.value);
    }
    let mut worst: f64 = 0.0;
    for s in 0..count {
        for e in 0..count {
            let lhs = so[s] * so[s ^ e];
            let mut rhs = Complex64::new(0.0, 0.0);
            let mut scale: f64 = lhs.norm();
            for ep in 0..count {
                let m = ThetaCharacteristic::new(bits(e), bits(ep))?;
                let v = theta_constant(&m, tau, opts)?.value;
                let term = v * v
                    * Complex64::new(
                        if (s & ep).count_ones() % 2 == 0 {
                            1.0
                        } else {
                            -1.0
                        },
                        0.0,
                    );
                scale = scale.max(term.norm() / count as f64);
                rhs += term;
            }
            rhs /= count as f64;
            worst = worst.max((lhs - rhs).norm() / scale.max(1e-30));
        }
    }
    Ok(worst)
}

/// Max relative residual of the inverse identity
///   theta[e; e']^2(tau) = sum over s of (-1)^{t(s) e'} Theta[s] Theta[s + e].
pub fn verify_riemann_squares(tau: &SiegelPoint, opts: EvalOptions) -> Result<f64> {
    let g = tau.genus();
    let count = 1usize << g;
    let bits = |k: usize| -> Vec<u8> { (0..g).map(|i| ((k >> (g - 1 - i)) & 1) as u8).collect() };
    let mut so = Vec::with_capacity(count);
    for k in 0..count {
        so.push(second_order(&bits(k), tau, opts)?.value);
    }
    let mut worst: f64 = 0.0;
    for e in 0..count {
        for ep in 0..count {
            let m = ThetaCharacteristic::new(bits(e), bits(ep))?;
            let v = theta_constant(&m, tau, opts)?.value;
            let lhs = v * v;
            let mut rhs = Complex64::new(0.0, 0.0);
            let mut scale: f64 = lhs.norm();
            for s in 0..count {
                let sgn = if (s & ep).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                let term = so[s] * so[s ^ e] * sgn;
                scale = scale.max(term.norm());
                rhs += term;
            }
            worst = worst.max((lhs - rhs).norm() / scale.max(1e-30));
        }
    }
    Ok(worst)
}

/// Max relative residual of the two-variable addition formula
///   theta[e;e'](tau, (z+w)/2) theta[d;d'](tau, (z-w)/2)
///     = sum over s of theta[(e+d)/2 - s; e'+d'](2 tau, z)
///                     theta[(e-d)/2 + s; e'-d'](2 tau, w)
/// over all pairs of characteristics, with the half-integral slots handled
/// by the raw engine.
pub fn verify_addition_formula(
    tau: &SiegelPoint,
    z: &[Complex64],
    w: &[Complex64],
    opts: EvalOptions,
) -> Result<f64> {
    let g = tau.genus();
    let count = 1usize << g;
    let bits = |k: usize| -> Vec<f64> {
        (0..g)
            .map(|i| ((k >> (g - 1 - i)) & 1) as f64)
            .collect()
    };
    let two_tau = tau.double();
    let zs: Vec<Complex64> = z.iter().zip(w).map(|(a, b)| (a + b) * 0.5).collect();
    let zd: Vec<Complex64> = z.iter().zip(w).map(|(a, b)| (a - b) * 0.5).collect();
    let mut worst: f64 = 0.0;
    for eidx in 0..count {
        for epidx in 0..count {
            for didx in 0..count {
                for dpidx in 0..count {
                    let e = bits(eidx);
                    let ep = bits(epidx);
                    let d = bits(didx);
                    let dp = bits(dpidx);
                    let a1: Vec<f64> = e.iter().map(|&x| x / 2.0).collect();
                    let b1: Vec<f64> = ep.iter().map(|&x| x / 2.0).collect();
                    let a2: Vec<f64> = d.iter().map(|&x| x / 2.0).collect();
                    let b2: Vec<f64> = dp.iter().map(|&x| x / 2.0).collect();
                    let lhs = theta_raw(&a1, &b1, tau, &zs, opts)?.value
                        * theta_raw(&a2, &b2, tau, &zd, opts)?.value;
                    let mut rhs = Complex64::new(0.0, 0.0);
                    let mut scale: f64 = lhs.norm();
                    for sidx in 0..count {
                        let s = bits(sidx);
                        // slots (e+d)/2 - s and (e-d)/2 + s, divided by 2 for the engine
                        let sa1: Vec<f64> = (0..g)
                            .map(|i| ((e[i] + d[i]) / 2.0 - s[i]) / 2.0)
                            .collect();
                        let sb1: Vec<f64> = (0..g).map(|i| (ep[i] + dp[i]) / 2.0).collect();
                        let sa2: Vec<f64> = (0..g)
                            .map(|i| ((e[i] - d[i]) / 2.0 + s[i]) / 2.0)
                            .collect();
                        let sb2: Vec<f64> = (0..g).map(|i| (ep[i] - dp[i]) / 2.0).collect();
                        let term = theta_raw(&sa1, &sb1, &two_tau, z, opts)?.value
                            * theta_raw(&sa2, &sb2, &two_tau, w, opts)?.value;
                        scale = scale.max(term.norm());
                        rhs += term;
                    }
                    worst = worst.max((lhs - rhs).norm() / scale.max(1e-30));
                }
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::{enumerate, ParityFilter};

    fn opts() -> EvalOptions {
        EvalOptions::default()
    }

    /// Independent 1-dimensional oracle: direct summation with a fixed wide
    /// cutoff, written without the engine's machinery.
    fn theta1d_oracle(a: f64, b: f64, tau: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for n in -60..=60 {
            let p = n as f64 + a;
            let w = tau * p * p * 0.5 + Complex64::new(b * p, 0.0);
            acc += (Complex64::new(0.0, 2.0 * PI) * w).exp();
        }
        acc
    }

    #[test]
    fn genus_one_reference_value() {
        // theta[0;0](i) = pi^{1/4} / Gamma(3/4)
        let tau = SiegelPoint::scaled_identity(1, 1.0);
        let m = ThetaCharacteristic::zero(1);
        let v = theta_constant(&m, &tau, opts()).unwrap();
        assert!((v.value.re - 1.086_434_811_213_308).abs() < 1e-12);
        assert!(v.value.im.abs() < 1e-14);
        let gamma_34 = statrs::function::gamma::gamma(0.75);
        let reference = PI.powf(0.25) / gamma_34;
        assert!((v.value.re - reference).abs() < 1e-12);
        // independent series oracle
        let o = theta1d_oracle(0.0, 0.0, Complex64::new(0.0, 1.0));
        assert!((v.value - o).norm() < 1e-13);
        assert!(v.tail_bound < 1e-12);
    }

    #[test]
    fn diagonal_tau_factorizes() {
        // g = 2, tau = i I_2, zero characteristic: value is the square of the
        // one-dimensional value
        let tau = SiegelPoint::scaled_identity(2, 1.0);
        let m = ThetaCharacteristic::zero(2);
        let v = theta_constant(&m, &tau, opts()).unwrap().value;
        let one = theta1d_oracle(0.0, 0.0, Complex64::new(0.0, 1.0));
        assert!((v - one * one).norm() < 1e-12);
    }

    #[test]
    fn odd_characteristics_vanish_at_zero() {
        let mut rng = SplitMix64::new(21);
        for g in [2usize, 3] {
            for _ in 0..3 {
                let tau = SiegelPoint::random(g, &mut rng);
                for m in enumerate(g, ParityFilter::Odd) {
                    let v = theta_constant(&m, &tau, opts()).unwrap();
                    assert!(v.value.norm() < 1e-10, "odd theta nonzero at {m}");
                }
            }
        }
    }

    #[test]
    fn truncation_radius_examples() {
        // Y = I_2, tol 1e-12: R <= 5
        let y = DMatrix::identity(2, 2);
        let r = truncation_radius(&y, 1e-12).unwrap();
        assert!(r <= 5, "R = {r}");
        // scaling lambda_min by 4 does not increase R
        let y4 = DMatrix::identity(2, 2) * 4.0;
        assert!(truncation_radius(&y4, 1e-12).unwrap() <= r);
        // tiny tolerance still terminates
        let y3 = DMatrix::identity(3, 3) * 0.5;
        let r = truncation_radius(&y3, 1e-30).unwrap();
        assert!(r >= 1);
        // tol <= 0 rejected
        assert!(matches!(
            truncation_radius(&y, 0.0),
            Err(Error::BadTolerance(_))
        ));
    }

    #[test]
    fn tail_bound_certified_against_wider_radius() {
        let mut rng = SplitMix64::new(2);
        for k in 0..100 {
            let tau = SiegelPoint::random(2, &mut rng);
            let m = ThetaCharacteristic::from_index(2, (rng.next_u64() % 16) as usize);
            // half the samples with a nonzero complex z
            let z: Vec<Complex64> = if k % 2 == 0 {
                vec![Complex64::new(0.0, 0.0); 2]
            } else {
                (0..2)
                    .map(|_| Complex64::new(0.4 * rng.symmetric(), 0.3 * rng.symmetric()))
                    .collect()
            };
            let v = theta(&m, &tau, &z, opts()).unwrap();
            // re-sum with a larger box
            let a: Vec<f64> = m.top().iter().map(|&x| x as f64 / 2.0).collect();
            let b: Vec<f64> = m.bot().iter().map(|&x| x as f64 / 2.0).collect();
            let wide = lattice_sum(&a, &b, &tau.matrix(), &z, v.radius + 2, false);
            assert!(
                (wide.value - v.value).norm() <= v.tail_bound.max(1e-15),
                "tail bound violated"
            );
        }
    }

    #[test]
    fn evenness_in_z() {
        // theta(m, tau, -z) = e(m) theta(m, tau, z)
        let mut rng = SplitMix64::new(8);
        for g in [2usize, 3] {
            for _ in 0..4 {
                let tau = SiegelPoint::random(g, &mut rng);
                let z: Vec<Complex64> = (0..g)
                    .map(|_| Complex64::new(0.3 * rng.symmetric(), 0.2 * rng.symmetric()))
                    .collect();
                let zneg: Vec<Complex64> = z.iter().map(|w| -w).collect();
                for m in enumerate(g, ParityFilter::All) {
                    let v1 = theta(&m, &tau, &z, opts()).unwrap().value;
                    let v2 = theta(&m, &tau, &zneg, opts()).unwrap().value;
                    let sign = m.parity() as f64;
                    assert!((v2 - v1 * sign).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = SplitMix64::new(5);
        let tau = SiegelPoint::random(1, &mut rng);
        let m = ThetaCharacteristic::new(vec![1], vec![1]).unwrap();
        let grad = theta_gradient(&m, &tau, opts()).unwrap();
        assert!(grad.value[0].norm() > 1e-3, "gradient should not vanish");
        let h = 1e-5;
        let plus = theta(&m, &tau, &[Complex64::new(h, 0.0)], opts())
            .unwrap()
            .value;
        let minus = theta(&m, &tau, &[Complex64::new(-h, 0.0)], opts())
            .unwrap()
            .value;
        let fd = (plus - minus) / (2.0 * h);
        assert!((fd - grad.value[0]).norm() < 1e-5);
    }

    #[test]
    fn gradient_matches_finite_differences_genus_3() {
        // all 28 odd characteristics at random points; the oracle is a
        // central difference of the series itself
        let fd_opts = EvalOptions::with_tol(1e-10);
        let mut rng = SplitMix64::new(28);
        let h = 1e-5;
        for _ in 0..10 {
            let tau = SiegelPoint::random(3, &mut rng);
            for m in enumerate(3, ParityFilter::Odd) {
                let grad = theta_gradient(&m, &tau, fd_opts).unwrap();
                for i in 0..3 {
                    let mut zp = vec![Complex64::new(0.0, 0.0); 3];
                    zp[i] = Complex64::new(h, 0.0);
                    let zm: Vec<Complex64> = zp.iter().map(|w| -w).collect();
                    let fd = (theta(&m, &tau, &zp, fd_opts).unwrap().value
                        - theta(&m, &tau, &zm, fd_opts).unwrap().value)
                        / (2.0 * h);
                    assert!(
                        (fd - grad.value[i]).norm() < 1e-5,
                        "finite difference mismatch at {m}, component {i}"
                    );
                }
            }
        }
    }

    #[test]
    fn gradient_real_on_imaginary_axis() {
        // tau purely imaginary pairs n with -n - m' (p with -p), sending each
        // summand to its conjugate; the paired gradient contribution
        // 2 pi i p (term - conj term) = -4 pi p Im(term) is purely real
        let tau = SiegelPoint::scaled_identity(3, 0.9);
        for m in enumerate(3, ParityFilter::Odd).into_iter().take(6) {
            let grad = theta_gradient(&m, &tau, opts()).unwrap();
            for c in grad.value {
                assert!(c.im.abs() < 1e-10, "expected purely real, got {c}");
            }
        }
    }

    #[test]
    fn gradient_rejects_even_characteristic() {
        let tau = SiegelPoint::scaled_identity(2, 1.0);
        let m = ThetaCharacteristic::zero(2);
        assert!(theta_gradient(&m, &tau, opts()).is_err());
    }

    #[test]
    fn second_order_equals_shifted_constant() {
        let mut rng = SplitMix64::new(14);
        let tau = SiegelPoint::random(2, &mut rng);
        let v = second_order(&[1, 0], &tau, opts()).unwrap().value;
        let m = ThetaCharacteristic::new(vec![1, 0], vec![0, 0]).unwrap();
        let w = theta_constant(&m, &tau.double(), opts()).unwrap().value;
        assert_eq!(v, w);
    }

    #[test]
    fn siegel_point_validation() {
        let x = DMatrix::from_row_slice(2, 2, &[0.0, 0.3, 0.2, 0.0]);
        let y = DMatrix::identity(2, 2);
        assert!(matches!(SiegelPoint::new(x, y), Err(Error::NotSymmetric)));
        let x = DMatrix::zeros(2, 2);
        let y = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(
            SiegelPoint::new(x, y),
            Err(Error::NotPositiveDefinite)
        ));
    }

    #[test]
    fn riemann_identities_hold() {
        let mut rng = SplitMix64::new(19);
        for g in [2usize, 3] {
            let tau = SiegelPoint::random(g, &mut rng);
            let r = verify_riemann_product(&tau, opts()).unwrap();
            assert!(r < 1e-8, "product identity residual {r} at g={g}");
            let r = verify_riemann_squares(&tau, opts()).unwrap();
            assert!(r < 1e-8, "squares identity residual {r} at g={g}");
        }
    }

    #[test]
    fn addition_formula_holds() {
        let mut rng = SplitMix64::new(20);
        let tau = SiegelPoint::random(2, &mut rng);
        let z: Vec<Complex64> = (0..2)
            .map(|_| Complex64::new(0.3 * rng.symmetric(), 0.2 * rng.symmetric()))
            .collect();
        let w: Vec<Complex64> = (0..2)
            .map(|_| Complex64::new(0.3 * rng.symmetric(), 0.2 * rng.symmetric()))
            .collect();
        let r = verify_addition_formula(&tau, &z, &w, opts()).unwrap();
        assert!(r < 1e-8, "addition formula residual {r}");
    }

    #[test]
    fn moebius_by_j_inverts() {
        let mut rng = SplitMix64::new(4);
        let tau = SiegelPoint::random(2, &mut rng);
        let j = SymplecticMatrix::j(2);
        let jt = tau.apply(&j).unwrap();
        // J . tau = -tau^{-1}
        let prod = jt.matrix() * tau.matrix();
        let minus_id = DMatrix::from_fn(2, 2, |i, jj| {
            if i == jj {
                Complex64::new(-1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        assert!((prod - minus_id).norm() < 1e-12);
        // Fricke applied twice returns tau
        let f2 = tau.apply_fricke().unwrap().apply_fricke().unwrap();
        assert!((f2.matrix() - tau.matrix()).norm() < 1e-12);
    }
}

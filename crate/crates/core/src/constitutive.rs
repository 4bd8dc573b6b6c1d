//! The N-function `φ = φ_{p,δ}` and the extra stress with (p, δ)-structure.
//!
//! `φ'(t) = (δ + t)^{p-2} t`. Shifting by `a ≥ 0` gives
//! `φ'_a(t) = φ'(a + t) t / (a + t) = (δ + a + t)^{p-2} t`, so every shifted
//! function is again of the same family with shift `δ + a`; all scalar
//! evaluations below reduce to [`nfunction`] and [`nfunction_conjugate`].

use crate::{Error, Result};

/// Parameters of the power-law stress `S(A) = ν (δ + |A^sym|)^{p-2} A^sym`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StressParams {
    pub p: f64,
    pub delta: f64,
    pub nu: f64,
}

impl StressParams {
    pub fn new(p: f64, delta: f64, nu: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::domain(format!("exponent p = {p} must lie in (1, inf)")));
        }
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::domain(format!("shift delta = {delta} must be >= 0")));
        }
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::domain(format!("viscosity nu = {nu} must be > 0")));
        }
        Ok(Self { p, delta, nu })
    }

    /// Benchmark configuration: `δ = 1e-5`, `ν = 0.1` for `p ≥ 2`, else `ν = 100`.
    pub fn benchmark(p: f64) -> Result<Self> {
        Self::new(p, 1e-5, if p >= 2.0 { 0.1 } else { 100.0 })
    }

    pub fn phi(&self, t: f64) -> Result<f64> {
        check_nonneg("t", t)?;
        Ok(nfunction(self.p, self.delta, t))
    }

    pub fn phi_prime(&self, t: f64) -> Result<f64> {
        check_nonneg("t", t)?;
        Ok(nfunction_prime(self.p, self.delta, t))
    }

    /// `φ_a(t)`.
    pub fn phi_shifted(&self, a: f64, t: f64) -> Result<f64> {
        check_nonneg("a", a)?;
        check_nonneg("t", t)?;
        Ok(nfunction(self.p, self.delta + a, t))
    }

    /// `φ'_a(t)`.
    pub fn phi_shifted_prime(&self, a: f64, t: f64) -> Result<f64> {
        check_nonneg("a", a)?;
        check_nonneg("t", t)?;
        Ok(nfunction_prime(self.p, self.delta + a, t))
    }

    /// `φ*(t) = sup_s (s t − φ(s))`.
    pub fn phi_conjugate(&self, t: f64) -> Result<f64> {
        check_nonneg("t", t)?;
        nfunction_conjugate(self.p, self.delta, t)
    }

    /// `(φ_a)*(t)`.
    pub fn phi_shifted_conjugate(&self, a: f64, t: f64) -> Result<f64> {
        check_nonneg("a", a)?;
        check_nonneg("t", t)?;
        nfunction_conjugate(self.p, self.delta + a, t)
    }

    /// `F(A) = (δ + |A^sym|)^{(p-2)/2} A^sym`, with `F(0) = 0`.
    pub fn f_of(&self, a: &Tensor2) -> SymTensor2 {
        self.f_of_sym(&a.sym())
    }

    pub fn f_of_sym(&self, a: &SymTensor2) -> SymTensor2 {
        let n = a.norm();
        if n == 0.0 {
            return SymTensor2::ZERO;
        }
        a.scale((self.delta + n).powf(0.5 * (self.p - 2.0)))
    }

    /// `S(A) = ν (δ + |A^sym|)^{p-2} A^sym`, with `S(0) = 0`.
    pub fn s_of(&self, a: &Tensor2) -> SymTensor2 {
        self.s_of_sym(&a.sym())
    }

    pub fn s_of_sym(&self, a: &SymTensor2) -> SymTensor2 {
        let n = a.norm();
        if n == 0.0 {
            return SymTensor2::ZERO;
        }
        a.scale(self.nu * (self.delta + n).powf(self.p - 2.0))
    }

    /// Derivative of `S` at `A`, as a symmetric 3×3 matrix acting on
    /// [Mandel vectors](SymTensor2::mandel) `(h11, √2 h12, h22)`.
    ///
    /// In that orthonormal basis the Frobenius product is the Euclidean one,
    /// so the matrix is symmetric exactly when the map is self-adjoint.
    pub fn s_jacobian(&self, a: &Tensor2) -> Result<[[f64; 3]; 3]> {
        self.s_jacobian_sym(&a.sym())
    }

    pub fn s_jacobian_sym(&self, a: &SymTensor2) -> Result<[[f64; 3]; 3]> {
        let n = a.norm();
        let base = self.delta + n;
        if base == 0.0 && self.p < 2.0 {
            return Err(Error::Singular(format!("S'(0) does not exist for delta = 0 and p = {} < 2", self.p)));
        }
        let g = self.nu * base.powf(self.p - 2.0);
        let c = if n == 0.0 { 0.0 } else { self.nu * (self.p - 2.0) * base.powf(self.p - 3.0) / n };
        let m = a.mandel();
        let mut jac = [[0.0; 3]; 3];
        for i in 0..3 {
            jac[i][i] = g + c * m[i] * m[i];
            for j in 0..i {
                // c (m_i m_j) keeps the matrix exactly symmetric.
                let v = c * (m[i] * m[j]);
                jac[i][j] = v;
                jac[j][i] = v;
            }
        }
        Ok(jac)
    }
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("{name} = {v} must be a finite nonnegative number")))
    }
}

/// `∫₀ᵗ (d + s)^{p-2} s ds` for `t ≥ 0`.
///
/// The antiderivative `(d+t)^p/p − d (d+t)^{p-1}/(p-1) + d^p/(p(p-1))`
/// cancels badly once `t ≪ d`; there the binomial series in `t/d` is used.
pub fn nfunction(p: f64, d: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    if d == 0.0 {
        return t.powf(p) / p;
    }
    let x = t / d;
    if x < 0.5 {
        // d^p Σ_k C(p-2, k) x^{k+2} / (k+2)
        let alpha = p - 2.0;
        let mut binom = 1.0;
        let mut xpow = x * x;
        let mut sum = 0.0;
        for k in 0..200 {
            let term = binom * xpow / (k as f64 + 2.0);
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
            binom *= (alpha - k as f64) / (k as f64 + 1.0);
            xpow *= x;
        }
        d.powf(p) * sum
    } else {
        let s = d + t;
        s.powf(p) / p - d * s.powf(p - 1.0) / (p - 1.0) + d.powf(p) / (p * (p - 1.0))
    }
}

/// `(d + t)^{p-2} t`.
pub fn nfunction_prime(p: f64, d: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    (d + t).powf(p - 2.0) * t
}

/// `(d + t)^{p-3} ((p-1) t + d)`, the derivative of [`nfunction_prime`].
fn nfunction_second(p: f64, d: f64, t: f64) -> f64 {
    (d + t).powf(p - 3.0) * ((p - 1.0) * t + d)
}

/// Solves `(d + s)^{p-2} s = y` for `s ≥ 0`.
///
/// Safeguarded Newton on a doubling bracket; `φ'` is strictly increasing
/// from 0 to ∞ for every `p > 1`.
pub fn nfunction_prime_inverse(p: f64, d: f64, y: f64) -> Result<f64> {
    if y == 0.0 {
        return Ok(0.0);
    }
    // Initial guess from the two asymptotic regimes.
    let small = if d > 0.0 { y * d.powf(2.0 - p) } else { f64::INFINITY };
    let large = y.powf(1.0 / (p - 1.0));
    let guess = small.min(large);
    let mut lo = 0.0;
    let mut hi = guess.max(f64::MIN_POSITIVE);
    let mut grow = 0;
    while nfunction_prime(p, d, hi) < y {
        lo = hi;
        hi *= 2.0;
        grow += 1;
        if grow > 2100 || !hi.is_finite() {
            return Err(Error::Numeric(format!("cannot bracket (phi')^-1({y})")));
        }
    }
    let mut s = guess.clamp(lo, hi);
    for _ in 0..200 {
        let f = nfunction_prime(p, d, s) - y;
        if f == 0.0 {
            return Ok(s);
        }
        if f < 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let df = nfunction_second(p, d, s);
        let mut next = s - f / df;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        if (next - s).abs() <= 1e-15 * next.abs() || hi - lo <= 1e-15 * hi {
            return Ok(next);
        }
        s = next;
    }
    Err(Error::Numeric(format!("root finder for (phi')^-1({y}) did not converge (p = {p}, shift = {d})")))
}

/// `φ*(y) = y s − φ(s)` with `φ'(s) = y`.
pub fn nfunction_conjugate(p: f64, d: f64, y: f64) -> Result<f64> {
    let s = nfunction_prime_inverse(p, d, y)?;
    Ok((y * s - nfunction(p, d, s)).max(0.0))
}

/// A general real 2×2 tensor, row-major: `self.0[i][j] = A_ij`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Tensor2(pub [[f64; 2]; 2]);

impl Tensor2 {
    pub const ZERO: Tensor2 = Tensor2([[0.0; 2]; 2]);

    pub fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Tensor2([[a11, a12], [a21, a22]])
    }

    pub fn identity() -> Self {
        Tensor2([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn sym(&self) -> SymTensor2 {
        let a = &self.0;
        SymTensor2 { a11: a[0][0], a12: 0.5 * (a[0][1] + a[1][0]), a22: a[1][1] }
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn transpose(&self) -> Self {
        let a = &self.0;
        Tensor2([[a[0][0], a[1][0]], [a[0][1], a[1][1]]])
    }

    pub fn add(&self, other: &Tensor2) -> Self {
        let mut out = *self;
        for i in 0..2 {
            for j in 0..2 {
                out.0[i][j] += other.0[i][j];
            }
        }
        out
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        out.0.iter_mut().flatten().for_each(|x| *x *= s);
        out
    }
}

/// Symmetric 2×2 tensor stored as `(a11, a12, a22)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SymTensor2 {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

impl SymTensor2 {
    pub const ZERO: SymTensor2 = SymTensor2 { a11: 0.0, a12: 0.0, a22: 0.0 };

    pub fn new(a11: f64, a12: f64, a22: f64) -> Self {
        Self { a11, a12, a22 }
    }

    /// Frobenius product `A : B`.
    pub fn dot(&self, other: &SymTensor2) -> f64 {
        self.a11 * other.a11 + 2.0 * self.a12 * other.a12 + self.a22 * other.a22
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(s * self.a11, s * self.a12, s * self.a22)
    }

    pub fn add(&self, other: &SymTensor2) -> Self {
        Self::new(self.a11 + other.a11, self.a12 + other.a12, self.a22 + other.a22)
    }

    pub fn sub(&self, other: &SymTensor2) -> Self {
        Self::new(self.a11 - other.a11, self.a12 - other.a12, self.a22 - other.a22)
    }

    /// Coordinates in the orthonormal basis `E11, (E12 + E21)/√2, E22`.
    pub fn mandel(&self) -> [f64; 3] {
        [self.a11, std::f64::consts::SQRT_2 * self.a12, self.a22]
    }

    pub fn from_mandel(m: [f64; 3]) -> Self {
        Self::new(m[0], m[1] / std::f64::consts::SQRT_2, m[2])
    }

    pub fn to_tensor(&self) -> Tensor2 {
        Tensor2::new(self.a11, self.a12, self.a12, self.a22)
    }
}

/// Applies a Mandel-basis matrix (as returned by [`StressParams::s_jacobian`]).
pub fn apply_mandel(m: &[[f64; 3]; 3], h: &SymTensor2) -> SymTensor2 {
    let v = h.mandel();
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
    }
    SymTensor2::from_mandel(out)
}

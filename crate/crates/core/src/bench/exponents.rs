//! Exponent bookkeeping in two space dimensions and the predicted rates.

use crate::{Error, Result};

/// Exponents attached to `p` for `d = 2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentSet {
    pub p: f64,
    pub p_conj: f64,
    /// `s = max{p, (p*/2)'}`, equal to `p` for `p ≥ 2`.
    pub s: f64,
    pub s_conj: f64,
    /// `ℓ = max{2, s}`.
    pub ell: f64,
    /// `ℓ' = min{2, s'}`.
    pub ell_conj: f64,
    /// `r = min{2, p}`.
    pub r: f64,
    /// Sobolev exponent `p* = 2p/(2−p)`; infinite for `p ≥ 2`.
    pub sobolev_p_star: f64,
}

pub fn conjugate(a: f64) -> f64 {
    if a.is_infinite() {
        1.0
    } else {
        a / (a - 1.0)
    }
}

pub fn exponents(p: f64) -> Result<ExponentSet> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::domain(format!("exponent p = {p} must lie in (1, inf)")));
    }
    let (s, p_star) = if p < 2.0 {
        let p_star = 2.0 * p / (2.0 - p);
        // (p*/2)' = p/(2(p−1)) for d = 2.
        (p.max(p / (2.0 * (p - 1.0))), p_star)
    } else {
        (p, f64::INFINITY)
    };
    let s_conj = conjugate(s);
    Ok(ExponentSet {
        p,
        p_conj: conjugate(p),
        s,
        s_conj,
        ell: s.max(2.0),
        ell_conj: s_conj.min(2.0),
        r: p.min(2.0),
        sobolev_p_star: p_star,
    })
}

/// Predicted velocity rate in the `F`-distance for the less regular case:
/// `min{1, p'/2}`.
pub fn rate_v_case1(p: f64) -> f64 {
    (0.5 * conjugate(p)).min(1.0)
}

/// Predicted pressure rate in the `s'`-norm: `min{2/p', p'/2}`.
pub fn rate_q_s(p: f64) -> f64 {
    let pc = conjugate(p);
    (2.0 / pc).min(0.5 * pc)
}

/// Predicted pressure rate in the `ℓ'`-norm.
pub fn rate_q_ell(_p: f64) -> f64 {
    1.0
}

#[cfg(test)]
mod tests {
    use approx::assert_relative_eq;

    use super::*;

    #[test]
    fn examples() {
        let e = exponents(4.0 / 3.0).unwrap();
        assert_relative_eq!(e.s, 2.0, max_relative = 1e-15);
        assert_relative_eq!(e.s_conj, 2.0, max_relative = 1e-14);
        assert_relative_eq!(e.ell, 2.0, max_relative = 1e-15);
        assert_relative_eq!(e.ell_conj, 2.0, max_relative = 1e-14);
        assert_relative_eq!(e.r, 4.0 / 3.0);

        let e = exponents(2.0).unwrap();
        assert_eq!((e.s, e.s_conj, e.ell, e.ell_conj, e.r), (2.0, 2.0, 2.0, 2.0, 2.0));

        let e = exponents(3.0).unwrap();
        assert_eq!((e.s, e.s_conj, e.ell, e.ell_conj, e.r), (3.0, 1.5, 3.0, 1.5, 2.0));
        assert!(exponents(1.0).is_err());
    }

    #[test]
    fn conjugate_identities() {
        for k in 0..50 {
            let p = 1.05 + 0.05 * k as f64;
            let e = exponents(p).unwrap();
            assert_relative_eq!(1.0 / e.s + 1.0 / e.s_conj, 1.0, max_relative = 1e-14);
            assert_relative_eq!(1.0 / e.p + 1.0 / e.p_conj, 1.0, max_relative = 1e-14);
            assert_relative_eq!(1.0 / e.ell + 1.0 / conjugate(e.ell), 1.0, max_relative = 1e-14);
            assert!((e.ell_conj - conjugate(e.ell)).abs() < 1e-12);
        }
    }

    #[test]
    fn rates() {
        assert_relative_eq!(rate_v_case1(2.25), 0.9, max_relative = 1e-14);
        assert_relative_eq!(rate_q_s(4.0 / 3.0), 0.5, max_relative = 1e-14);
        assert_eq!((rate_v_case1(2.0), rate_q_s(2.0), rate_q_ell(2.0)), (1.0, 1.0, 1.0));
    }
}

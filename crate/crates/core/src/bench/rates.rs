//! Analytic exponent and rate curves as functions of `p`.

use std::io::{self, Write};

use crate::bench::exponents::{exponents, rate_q_ell, rate_q_s, rate_v_case1};
use crate::bench::table::fmt_f64;
use crate::{Error, Result};

pub const RATES_HEADER: &str = "p,s,s_conj,ell,ell_conj,rate_v_case1,rate_q_s,rate_q_ell";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatesRow {
    pub p: f64,
    pub s: f64,
    pub s_conj: f64,
    pub ell: f64,
    pub ell_conj: f64,
    pub rate_v_case1: f64,
    pub rate_q_s: f64,
    pub rate_q_ell: f64,
}

pub fn rates_curves(p_grid: &[f64]) -> Result<Vec<RatesRow>> {
    p_grid
        .iter()
        .map(|&p| {
            let e = exponents(p)?;
            Ok(RatesRow {
                p,
                s: e.s,
                s_conj: e.s_conj,
                ell: e.ell,
                ell_conj: e.ell_conj,
                rate_v_case1: rate_v_case1(p),
                rate_q_s: rate_q_s(p),
                rate_q_ell: rate_q_ell(p),
            })
        })
        .collect()
}

/// `n` equidistant points of `[p_min, p_max]`.
pub fn p_grid(p_min: f64, p_max: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(p_min > 1.0 && p_min < p_max && p_max.is_finite()) {
        return Err(Error::config(format!("invalid grid [{p_min}, {p_max}] with {n} points")));
    }
    Ok((0..n).map(|i| p_min + (p_max - p_min) * i as f64 / (n - 1) as f64).collect())
}

pub fn write_rates_csv<W: Write>(rows: &[RatesRow], mut w: W) -> io::Result<()> {
    writeln!(w, "{RATES_HEADER}")?;
    for r in rows {
        let cells = [r.p, r.s, r.s_conj, r.ell, r.ell_conj, r.rate_v_case1, r.rate_q_s, r.rate_q_ell].map(fmt_f64);
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let rows = rates_curves(&[2.25, 4.0 / 3.0, 2.0]).unwrap();
        assert!((rows[0].rate_v_case1 - 0.9).abs() < 1e-14);
        assert!((rows[1].rate_q_s - 0.5).abs() < 1e-14);
        assert_eq!((rows[2].rate_v_case1, rows[2].rate_q_s, rows[2].rate_q_ell), (1.0, 1.0, 1.0));
        let mut buf = Vec::new();
        write_rates_csv(&rows, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 4);
    }

    #[test]
    fn grid() {
        let g = p_grid(1.5, 3.0, 4).unwrap();
        assert_eq!(g, vec![1.5, 2.0, 2.5, 3.0]);
        assert!(p_grid(1.0, 3.0, 4).is_err());
        assert!(p_grid(2.0, 1.5, 4).is_err());
    }
}

//! Experimental orders of convergence and their CSV form.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::bench::cases::Case;
use crate::fem::ElementPair;
use crate::{Error, Result};

/// `EOC_i = log(e_i / e_{i−1}) / log(h_i / h_{i−1})` for `i ≥ 1`; `None`
/// where an error is not a positive finite number.
pub fn eoc(errors: &[f64], hs: &[f64]) -> Result<Vec<Option<f64>>> {
    if errors.len() != hs.len() || errors.len() < 2 {
        return Err(Error::config(format!(
            "EOC needs two equally long sequences of length >= 2 (got {} and {})",
            errors.len(),
            hs.len()
        )));
    }
    let ok = |x: f64| x > 0.0 && x.is_finite();
    Ok(errors
        .windows(2)
        .zip(hs.windows(2))
        .map(|(e, h)| (ok(e[0]) && ok(e[1]) && ok(h[0]) && ok(h[1])).then(|| (e[1] / e[0]).ln() / (h[1] / h[0]).ln()))
        .collect())
}

#[derive(Clone, Debug, PartialEq)]
pub struct EocRow {
    pub level: usize,
    pub h: f64,
    pub ndof_v: usize,
    pub ndof_q: usize,
    pub e_v: f64,
    pub e_q_s: f64,
    pub e_q_ell: f64,
    pub e_q_p: f64,
    pub newton_iters: usize,
    pub dual_modular: f64,
    /// `‖v_h‖_{1,p} + ‖q_h‖_{s'}`.
    pub apriori: f64,
    /// Multiplier of the zero-mean constraint at convergence.
    pub multiplier: f64,
}

/// Convergence history of one `(pair, case, p)` configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct EocTable {
    pub pair: ElementPair,
    pub case: Case,
    pub p: f64,
    pub rows: Vec<EocRow>,
}

pub const CSV_HEADER: &str =
    "level,h,ndof_v,ndof_q,e_v,eoc_v,e_q_s,eoc_q_s,e_q_ell,eoc_q_ell,e_q_p,eoc_q_p,newton_iters,dual_modular";

impl EocTable {
    /// EOC column aligned with the rows (first entry `None`).
    pub fn eoc_column(&self, f: impl Fn(&EocRow) -> f64) -> Vec<Option<f64>> {
        let mut out = vec![None];
        if self.rows.len() >= 2 {
            let e: Vec<f64> = self.rows.iter().map(&f).collect();
            let h: Vec<f64> = self.rows.iter().map(|r| r.h).collect();
            out.extend(eoc(&e, &h).expect("lengths match"));
        }
        out.truncate(self.rows.len());
        out
    }

    pub fn eoc_v(&self) -> Vec<Option<f64>> {
        self.eoc_column(|r| r.e_v)
    }

    pub fn eoc_q_s(&self) -> Vec<Option<f64>> {
        self.eoc_column(|r| r.e_q_s)
    }

    pub fn eoc_q_ell(&self) -> Vec<Option<f64>> {
        self.eoc_column(|r| r.e_q_ell)
    }

    pub fn eoc_q_p(&self) -> Vec<Option<f64>> {
        self.eoc_column(|r| r.e_q_p)
    }

    /// EOC of the finest level for the given error column.
    pub fn final_eoc(&self, f: impl Fn(&EocRow) -> f64) -> Option<f64> {
        self.eoc_column(f).last().copied().flatten()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        let cols = [self.eoc_v(), self.eoc_q_s(), self.eoc_q_ell(), self.eoc_q_p()];
        for (i, r) in self.rows.iter().enumerate() {
            let e = |k: usize| cols[k][i].map(fmt_f64).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                r.level,
                fmt_f64(r.h),
                r.ndof_v,
                r.ndof_q,
                fmt_f64(r.e_v),
                e(0),
                fmt_f64(r.e_q_s),
                e(1),
                fmt_f64(r.e_q_ell),
                e(2),
                fmt_f64(r.e_q_p),
                e(3),
                r.newton_iters,
                fmt_f64(r.dual_modular)
            )?;
        }
        Ok(())
    }

    pub fn emit_csv(&self, path: &Path) -> Result<()> {
        let io_err = |source| Error::Io { path: path.to_path_buf(), source };
        let file = File::create(path).map_err(io_err)?;
        let mut w = BufWriter::new(file);
        self.write_csv(&mut w).map_err(io_err)?;
        w.flush().map_err(io_err)
    }

    /// File name used for this configuration inside a study directory.
    pub fn file_name(&self) -> String {
        format!("eoc_{}_case{}_p{}.csv", self.pair, self.case, format_p(self.p))
    }
}

/// Compact label for `p` in file names (`4/3` becomes `1.3333`).
pub fn format_p(p: f64) -> String {
    let s = format!("{p:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    s.to_string()
}

/// Seventeen significant digits, enough to round-trip every `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// One parsed CSV line: every cell as `Option<f64>` (empty cells are `None`).
pub fn parse_csv(text: &str) -> Result<Vec<Vec<Option<f64>>>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(Error::config(format!("unexpected CSV header {other:?}"))),
    }
    lines
        .map(|line| {
            line.split(',')
                .map(|cell| {
                    if cell.is_empty() {
                        Ok(None)
                    } else {
                        cell.parse::<f64>().map(Some).map_err(|e| Error::config(format!("bad CSV cell '{cell}': {e}")))
                    }
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eoc_examples() {
        assert_eq!(eoc(&[0.4, 0.2], &[0.5, 0.25]).unwrap(), vec![Some(1.0)]);
        assert_eq!(eoc(&[0.4, 0.1], &[0.5, 0.25]).unwrap(), vec![Some(2.0)]);
        assert_eq!(eoc(&[0.3, 0.3, 0.3], &[1.0, 0.5, 0.25]).unwrap(), vec![Some(0.0), Some(0.0)]);
        assert_eq!(eoc(&[0.4, 0.0, 0.1], &[1.0, 0.5, 0.25]).unwrap(), vec![None, None]);
        assert!(eoc(&[1.0], &[1.0]).is_err());
        assert!(eoc(&[1.0, 2.0], &[1.0]).is_err());
    }

    fn row(level: usize, e: f64) -> EocRow {
        EocRow {
            level,
            h: 0.5f64.powi(level as i32),
            ndof_v: 10 * (level + 1),
            ndof_q: level + 3,
            e_v: e,
            e_q_s: e / 3.0,
            e_q_ell: e * 0.7,
            e_q_p: 0.1 + e,
            newton_iters: 4,
            dual_modular: 1.0 / 7.0,
            apriori: 1.0,
            multiplier: 0.0,
        }
    }

    #[test]
    fn csv_round_trip() {
        let t = EocTable {
            pair: ElementPair::Mini,
            case: Case::One,
            p: 4.0 / 3.0,
            rows: vec![row(0, 0.3), row(1, 0.1 + 1e-17)],
        };
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        let parsed = parse_csv(&text).unwrap();
        assert_eq!(parsed[0][5], None);
        assert_eq!(parsed[0][7], None);
        assert_eq!(parsed[1][4], Some(t.rows[1].e_v));
        assert_eq!(parsed[1][5], t.eoc_v()[1]);
        assert_eq!(parsed[1][1], Some(0.5));
        assert_eq!(parsed[0][13], Some(1.0 / 7.0));
        assert_eq!(t.file_name(), "eoc_mini_case1_p1.3333.csv");
    }
}

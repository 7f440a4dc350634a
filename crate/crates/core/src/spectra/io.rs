use std::fmt::Write as _;

use super::ComplexSpectrum;
use crate::error::{Error, Result};
use crate::linalg::C64;

pub const CSV_HEADER: &str = "re,im,kx,ky,boundary_weight,bc,tag";

/// One parsed CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub value: C64,
    pub kx: Option<f64>,
    pub ky: Option<f64>,
    pub boundary_weight: Option<f64>,
    pub bc: String,
    pub tag: String,
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(v: &Option<Vec<f64>>, i: usize) -> String {
    v.as_ref().map(|v| num(v[i])).unwrap_or_default()
}

impl ComplexSpectrum {
    /// CSV rows (no header), one per eigenvalue, 17 significant digits.
    pub fn csv_rows(&self, tag: &str) -> String {
        let mut out = String::new();
        for (i, e) in self.eigenvalues.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                num(e.re),
                num(e.im),
                opt(&self.kx, i),
                opt(&self.ky, i),
                opt(&self.boundary_weight, i),
                self.meta.bc,
                tag
            );
        }
        out
    }

    pub fn to_csv(&self, tag: &str) -> String {
        format!("{CSV_HEADER}\n{}", self.csv_rows(tag))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Several spectra in one CSV document under a single header.
pub fn spectra_to_csv<'a>(items: impl IntoIterator<Item = (&'a ComplexSpectrum, &'a str)>) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for (s, tag) in items {
        out.push_str(&s.csv_rows(tag));
    }
    out
}

pub fn read_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == CSV_HEADER => {}
        _ => return Err(Error::Config(format!("spectrum CSV must start with `{CSV_HEADER}`"))),
    }
    let mut rows = Vec::new();
    for (n, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |what: &str| Error::Config(format!("line {}: {what}", n + 1));
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 7 {
            return Err(bad(&format!("expected 7 fields, got {}", f.len())));
        }
        let req = |s: &str| s.parse::<f64>().map_err(|_| bad(&format!("bad number `{s}`")));
        let optional = |s: &str| if s.is_empty() { Ok(None) } else { req(s).map(Some) };
        rows.push(CsvRow {
            value: C64::new(req(f[0])?, req(f[1])?),
            kx: optional(f[2])?,
            ky: optional(f[3])?,
            boundary_weight: optional(f[4])?,
            bc: f[5].to_string(),
            tag: f[6].to_string(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::KGrid;
    use crate::hamiltonian::ModelParams;
    use crate::spectra::bloch_spectrum;

    #[test]
    fn csv_round_trip_is_lossless() {
        let s = bloch_spectrum(&ModelParams::reference(), &KGrid::new(3, 2)).unwrap();
        let rows = read_csv(&s.to_csv("a")).unwrap();
        assert_eq!(rows.len(), s.len());
        for (r, e) in rows.iter().zip(&s.eigenvalues) {
            assert_eq!(r.value, *e);
            assert_eq!(r.bc, "PBC");
            assert!(r.boundary_weight.is_none());
        }
        assert_eq!(rows[5].kx, Some(s.kx.as_ref().unwrap()[5]));
    }

    #[test]
    fn malformed_csv_is_rejected() {
        assert!(read_csv("x,y\n").is_err());
        assert!(read_csv(&format!("{CSV_HEADER}\n1,2,3\n")).is_err());
        assert!(read_csv(&format!("{CSV_HEADER}\n1,zz,,,,PBC,t\n")).is_err());
    }

    #[test]
    fn json_embeds_meta() {
        let s = bloch_spectrum(&ModelParams::reference(), &KGrid::new(2, 2)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s.to_json().unwrap()).unwrap();
        assert_eq!(v["meta"]["bc"], "PBC");
        assert_eq!(v["meta"]["params"]["gamma_ex"], 0.4);
        let back: ComplexSpectrum = serde_json::from_str(&s.to_json().unwrap()).unwrap();
        assert_eq!(back, s);
    }
}

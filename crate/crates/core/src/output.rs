//! CSV and JSON emission for scan tables and ground-state reports.
//!
//! CSV uses `,` separators, `.` decimals and `\n` line endings. Floats are
//! printed with 17 significant digits (`{:.16e}`), which round-trips every
//! `f64` bit-exactly. Infinite values are written as `inf`.

use std::io::{Read, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::interferometer::{RowFlag, ScanRow};
use crate::model::{chi, GapRow, GroundSolution};

pub const SCAN_HEADER: [&str; 7] = [
    "theta",
    "parity",
    "sigma_parity",
    "parity_deriv",
    "sigma_theta",
    "precision_norm",
    "flag",
];

pub const GAP_HEADER: [&str; 7] = ["N", "chi", "U", "E0", "E1", "gap", "underflow_flag"];

pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

pub fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::invalid(format!("not a number: '{s}'")))
}

fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

fn io_err(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::invalid(format!("malformed CSV: {e}"))
}

/// Singular rows have no `sigma_theta`; it is written as `inf`.
pub fn write_scan_csv<W: Write>(w: W, rows: &[ScanRow]) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(SCAN_HEADER).map_err(io_err)?;
    for r in rows {
        out.write_record([
            fmt_f64(r.theta),
            fmt_f64(r.parity),
            fmt_f64(r.sigma_parity),
            fmt_f64(r.parity_deriv),
            fmt_f64(r.sigma_theta.unwrap_or(f64::INFINITY)),
            fmt_f64(r.precision_norm),
            r.flag.as_str().to_string(),
        ])
        .map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

pub fn read_scan_csv<R: Read>(r: R) -> Result<Vec<ScanRow>> {
    let mut reader = csv::Reader::from_reader(r);
    let header = reader.headers().map_err(parse_err)?.clone();
    if header.iter().ne(SCAN_HEADER) {
        return Err(Error::invalid("unexpected scan CSV header"));
    }
    reader
        .records()
        .map(|rec| {
            let rec = rec.map_err(parse_err)?;
            let f = |k: usize| parse_f64(&rec[k]);
            let sigma_theta = f(4)?;
            Ok(ScanRow {
                theta: f(0)?,
                parity: f(1)?,
                sigma_parity: f(2)?,
                parity_deriv: f(3)?,
                sigma_theta: sigma_theta.is_finite().then_some(sigma_theta),
                precision_norm: f(5)?,
                flag: rec[6].parse::<RowFlag>()?,
            })
        })
        .collect()
}

pub fn write_gap_csv<W: Write>(w: W, rows: &[GapRow]) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(GAP_HEADER).map_err(io_err)?;
    for r in rows {
        out.write_record([
            r.n.to_string(),
            fmt_f64(r.chi),
            fmt_f64(r.u),
            fmt_f64(r.e0),
            fmt_f64(r.e1),
            fmt_f64(r.gap),
            u8::from(r.underflow).to_string(),
        ])
        .map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

pub fn read_gap_csv<R: Read>(r: R) -> Result<Vec<GapRow>> {
    let mut reader = csv::Reader::from_reader(r);
    let header = reader.headers().map_err(parse_err)?.clone();
    if header.iter().ne(GAP_HEADER) {
        return Err(Error::invalid("unexpected gap CSV header"));
    }
    reader
        .records()
        .map(|rec| {
            let rec = rec.map_err(parse_err)?;
            let f = |k: usize| parse_f64(&rec[k]);
            Ok(GapRow {
                n: rec[0].parse().map_err(|_| Error::invalid("bad N column"))?,
                chi: f(1)?,
                u: f(2)?,
                e0: f(3)?,
                e1: f(4)?,
                gap: f(5)?,
                underflow: &rec[6] == "1",
            })
        })
        .collect()
}

/// JSON view of a [`GroundSolution`]. Amplitudes are `[re, im]` pairs and an
/// infinite `chi` (no interaction) is `null`.
#[derive(Debug, Serialize)]
pub struct GroundReport {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "J")]
    pub j: f64,
    #[serde(rename = "U")]
    pub u: f64,
    pub eps: f64,
    pub chi: Option<f64>,
    #[serde(rename = "E0")]
    pub e0: f64,
    #[serde(rename = "E1")]
    pub e1: f64,
    pub gap: f64,
    pub underflow: bool,
    pub repulsive: bool,
    pub ground_sector: Option<&'static str>,
    pub excited_sector: Option<&'static str>,
    pub psi0: Vec<[f64; 2]>,
    pub psi1: Vec<[f64; 2]>,
}

impl From<&GroundSolution> for GroundReport {
    fn from(sol: &GroundSolution) -> Self {
        let p = sol.params;
        let c = chi(&p);
        let amps =
            |s: &crate::spinalg::StateVector| s.amplitudes().iter().map(|z| [z.re, z.im]).collect();
        Self {
            n: p.n,
            j: p.j,
            u: p.u,
            eps: p.eps,
            chi: c.is_finite().then_some(c),
            e0: sol.e0,
            e1: sol.e1,
            gap: sol.gap,
            underflow: sol.underflow(),
            repulsive: p.is_repulsive(),
            ground_sector: sol.ground_sector.map(|s| s.as_str()),
            excited_sector: sol.excited_sector.map(|s| s.as_str()),
            psi0: amps(&sol.psi0),
            psi1: amps(&sol.psi1),
        }
    }
}

pub fn write_ground_json<W: Write>(mut w: W, sol: &GroundSolution) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, &GroundReport::from(sol)).map_err(io_err)?;
    writeln!(w).map_err(io_err)
}

/// One CSV row per basis index; the scalar columns repeat on every row.
pub fn write_ground_csv<W: Write>(w: W, sol: &GroundSolution) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record([
        "N",
        "n_left",
        "E0",
        "E1",
        "gap",
        "chi",
        "ground_sector",
        "excited_sector",
        "psi0_re",
        "psi0_im",
        "psi1_re",
        "psi1_im",
    ])
    .map_err(io_err)?;
    let c = chi(&sol.params);
    let label = |s: Option<crate::model::Sector>| s.map_or("none", |s| s.as_str()).to_string();
    for (i, (a, b)) in sol
        .psi0
        .amplitudes()
        .iter()
        .zip(sol.psi1.amplitudes())
        .enumerate()
    {
        out.write_record([
            sol.params.n.to_string(),
            i.to_string(),
            fmt_f64(sol.e0),
            fmt_f64(sol.e1),
            fmt_f64(sol.gap),
            fmt_f64(c),
            label(sol.ground_sector),
            label(sol.excited_sector),
            fmt_f64(a.re),
            fmt_f64(a.im),
            fmt_f64(b.re),
            fmt_f64(b.im),
        ])
        .map_err(io_err)?;
    }
    out.flush().map_err(io_err)
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(mut w: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, value).map_err(io_err)?;
    writeln!(w).map_err(io_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(f64::INFINITY), "inf");
        assert_eq!(parse_f64("inf").unwrap(), f64::INFINITY);
    }

    proptest! {
        #[test]
        fn float_text_round_trip(bits in any::<u64>()) {
            let x = f64::from_bits(bits);
            prop_assume!(!x.is_nan());
            prop_assert_eq!(parse_f64(&fmt_f64(x)).unwrap().to_bits(), x.to_bits());
        }

        #[test]
        fn scan_csv_round_trip(vals in proptest::collection::vec((-10.0f64..10.0, 0.0f64..1.0, any::<bool>()), 1..20)) {
            let rows: Vec<ScanRow> = vals
                .iter()
                .map(|&(t, s, sing)| ScanRow {
                    theta: t,
                    parity: (1.0 - s * s).sqrt(),
                    sigma_parity: s,
                    parity_deriv: t * 3.1,
                    sigma_theta: (!sing).then_some(s / 7.0),
                    precision_norm: if sing { 0.0 } else { 1.0 / s },
                    flag: if sing { RowFlag::Singular } else { RowFlag::Ok },
                })
                .collect();
            let mut buf = Vec::new();
            write_scan_csv(&mut buf, &rows).unwrap();
            prop_assert_eq!(read_scan_csv(buf.as_slice()).unwrap(), rows);
        }
    }

    #[test]
    fn gap_csv_round_trip() {
        let rows = crate::model::gap_scan(&[3, 6], &[0.5, 1.0, f64::INFINITY], 1.0).unwrap();
        let mut buf = Vec::new();
        write_gap_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("N,chi,U,E0,E1,gap,underflow_flag\n"));
        assert!(!text.contains('\r'));
        assert_eq!(read_gap_csv(buf.as_slice()).unwrap(), rows);
    }

    #[test]
    fn rejects_wrong_header() {
        assert!(read_scan_csv("a,b\n1,2\n".as_bytes()).is_err());
        assert!(read_gap_csv("a,b\n1,2\n".as_bytes()).is_err());
    }
}

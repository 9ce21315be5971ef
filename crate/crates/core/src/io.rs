//! Serialization: complex numbers as explicit `{re, im}` pairs and
//! fixed-format CSV tables with 17 significant digits.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelKind, Regime};
use crate::error::{Error, Result};
use crate::solution::SidebandSolution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReIm {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ReIm {
    fn from(z: Complex64) -> Self {
        ReIm { re: z.re, im: z.im }
    }
}

impl From<ReIm> for Complex64 {
    fn from(z: ReIm) -> Self {
        Complex64::new(z.re, z.im)
    }
}

pub mod reim {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReIm::from(*z).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Complex64, D::Error> {
        ReIm::deserialize(d).map(Into::into)
    }
}

pub mod reim_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|z| ReIm::from(*z)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Complex64>, D::Error> {
        Vec::<ReIm>::deserialize(d).map(|v| v.into_iter().map(Into::into).collect())
    }
}

pub mod reim_array2 {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Complex64; 2], s: S) -> std::result::Result<S::Ok, S::Error> {
        [ReIm::from(v[0]), ReIm::from(v[1])].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<[Complex64; 2], D::Error> {
        <[ReIm; 2]>::deserialize(d).map(|[a, b]| [a.into(), b.into()])
    }
}

/// Formats a float with 17 significant digits; non-finite values as
/// `nan`, `inf`, `-inf`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x:.16e}")
    }
}

pub fn parse_f64(s: &str) -> Result<f64> {
    match s.trim() {
        "nan" | "" => Ok(f64::NAN),
        "inf" => Ok(f64::INFINITY),
        "-inf" => Ok(f64::NEG_INFINITY),
        t => t.parse().map_err(|e| Error::Parse(format!("`{t}`: {e}"))),
    }
}

/// Simple CSV writer: header row plus formatted rows, `\n` line endings.
#[derive(Debug, Default)]
pub struct CsvTable {
    buf: String,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        let mut buf = header.join(",");
        buf.push('\n');
        CsvTable { buf }
    }

    pub fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.buf, "{}", cells.join(","));
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// Splits a CSV document into header and rows; checks the header.
pub fn read_csv<'a>(text: &'a str, header: &[&str]) -> Result<Vec<Vec<&'a str>>> {
    let mut lines = text.lines();
    let head = lines.next().ok_or_else(|| Error::Parse("empty CSV".into()))?;
    let got: Vec<&str> = head.split(',').collect();
    if got != header {
        return Err(Error::Parse(format!("unexpected header {got:?}, expected {header:?}")));
    }
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            let cells: Vec<&str> = l.split(',').collect();
            if cells.len() != header.len() {
                Err(Error::Parse(format!(
                    "row `{l}` has {} cells, expected {}",
                    cells.len(),
                    header.len()
                )))
            } else {
                Ok(cells)
            }
        })
        .collect()
}

pub const SIDEBAND_HEADER: [&str; 5] = ["n", "re_r", "im_r", "I_n", "kind"];

/// One row per channel: index, reflection amplitude, intensity |t_n|², kind.
pub fn sideband_csv(sol: &SidebandSolution) -> String {
    let mut table = CsvTable::new(&SIDEBAND_HEADER);
    for n in sol.indices() {
        let r = sol.r(n);
        let kind = sol.channel(n).map_or("", |c| c.kind.as_str());
        table.row(&[
            n.to_string(),
            fmt_f64(r.re),
            fmt_f64(r.im),
            fmt_f64(sol.intensity(n)),
            kind.to_string(),
        ]);
    }
    table.finish()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SidebandRow {
    pub n: i32,
    pub r: Complex64,
    pub intensity: f64,
    pub kind: ChannelKind,
}

pub fn read_sideband_csv(text: &str) -> Result<Vec<SidebandRow>> {
    read_csv(text, &SIDEBAND_HEADER)?
        .into_iter()
        .map(|c| {
            Ok(SidebandRow {
                n: c[0].parse().map_err(|e| Error::Parse(format!("n `{}`: {e}", c[0])))?,
                r: Complex64::new(parse_f64(c[1])?, parse_f64(c[2])?),
                intensity: parse_f64(c[3])?,
                kind: ChannelKind::parse(c[4]).ok_or_else(|| Error::Parse(format!("channel kind `{}`", c[4])))?,
            })
        })
        .collect()
}

pub(crate) fn parse_regime(s: &str) -> Result<Regime> {
    Regime::parse(s).ok_or_else(|| Error::Parse(format!("regime `{s}`")))
}

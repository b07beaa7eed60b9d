//! JSON and CSV output. Every number is written with 17 significant digits,
//! so emitted values round-trip exactly.

use std::fmt::Write as _;
use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter, Serializer};

use crate::bisectors::{self, BisectorsSpec};
use crate::error::{Error, Result};
use crate::geometry::ElementKind;
use crate::heights::{self, HeightsFamilySpec};
use crate::median_height::{self, MedianHeightSpec};
use crate::numerics::ScanConfig;

/// `x` in scientific notation with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Pretty JSON whose floats carry 17 significant digits.
struct Digits17<'a>(PrettyFormatter<'a>);

impl Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        w.write_all(fmt_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = Serializer::with_formatter(&mut out, Digits17(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Serialization(e.to_string()))?;
    out.push(b'\n');
    String::from_utf8(out).map_err(|e| Error::Serialization(e.to_string()))
}

fn push_row(out: &mut String, cells: &[String]) {
    out.push_str(&cells.join(","));
    out.push('\n');
}

/// Columns `gamma,l_a,m_a,a,b,c`.
pub fn heights_sweep_csv(spec: &HeightsFamilySpec, n: usize) -> Result<String> {
    let mut out = String::from("gamma,l_a,m_a,a,b,c\n");
    for row in heights::sweep(spec, n)? {
        push_row(&mut out, &row.map(fmt_f64));
    }
    Ok(out)
}

/// Columns `gamma,branch,l_c,a,b,c`.
pub fn median_height_sweep_csv(spec: &MedianHeightSpec, n: usize) -> Result<String> {
    let mut out = String::from("gamma,branch,l_c,a,b,c\n");
    for (gamma, tag, v) in median_height::sweep(spec, n)? {
        let mut cells = vec![fmt_f64(gamma), tag.label().to_string()];
        cells.extend(v.map(fmt_f64));
        push_row(&mut out, &cells);
    }
    Ok(out)
}

const BISECTOR_COLUMNS: [ElementKind; 14] = [
    ElementKind::AngleA,
    ElementKind::AngleC,
    ElementKind::SideA,
    ElementKind::SideB,
    ElementKind::SideC,
    ElementKind::HeightA,
    ElementKind::HeightB,
    ElementKind::HeightC,
    ElementKind::MedianA,
    ElementKind::MedianB,
    ElementKind::MedianC,
    ElementKind::BisectorA,
    ElementKind::BisectorB,
    ElementKind::BisectorC,
];

/// Columns `beta,alpha,gamma,a,b,c,h_a,h_b,h_c,m_a,m_b,m_c,l_a,l_b,l_c,part`.
pub fn bisectors_sweep_csv(spec: &BisectorsSpec, n: usize, cfg: &ScanConfig) -> Result<String> {
    let mut out = String::from("beta");
    for k in BISECTOR_COLUMNS {
        let _ = write!(out, ",{k}");
    }
    out.push_str(",part\n");
    for s in bisectors::sweep(spec, n, cfg)?.samples {
        let mut cells = vec![fmt_f64(s.beta)];
        cells.extend(BISECTOR_COLUMNS.iter().map(|&k| fmt_f64(s.shape.element(k))));
        cells.push(s.part.to_string());
        push_row(&mut out, &cells);
    }
    Ok(out)
}

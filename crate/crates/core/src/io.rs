//! Text formats: vorticity fields as CSV, reports and lattices as JSON.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::basis::Mat2;
use crate::error::{Error, Result};
use crate::field::{FieldEntry, VorticityField, VorticityMatrix};
use crate::lattice::{Site, SiteRole};
use crate::su2::DegreeReport;

pub const FIELD_COLUMNS: [&str; 13] = [
    "x",
    "y",
    "role",
    "omega11",
    "omega12",
    "omega21",
    "omega22",
    "omegahat11",
    "omegahat12",
    "omegahat21",
    "omegahat22",
    "eigengap",
    "principal_angle",
];

/// 17 significant digits: every `f64` survives a round trip.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn entries4(m: &Mat2) -> [f64; 4] {
    [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
}

pub fn write_field_csv<W: Write>(field: &VorticityField, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(FIELD_COLUMNS)?;
    for e in &field.entries {
        let mut rec = vec![
            e.site.x.to_string(),
            e.site.y.to_string(),
            e.role.as_str().to_string(),
        ];
        rec.extend(entries4(&e.matrix.omega).iter().map(|&v| fmt_f64(v)));
        rec.extend(entries4(&e.matrix.reduced).iter().map(|&v| fmt_f64(v)));
        rec.push(fmt_f64(e.matrix.eigengap()));
        rec.push(fmt_f64(e.matrix.principal_angle()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn field_to_csv_string(field: &VorticityField) -> Result<String> {
    let mut buf = Vec::new();
    write_field_csv(field, &mut buf)?;
    String::from_utf8(buf).map_err(|e| Error::Parse(e.to_string()))
}

/// Reads a field written by [`write_field_csv`]. `Ω̂` is recomputed from `Ω`
/// and must agree with the stored columns.
pub fn read_field_csv<R: Read>(reader: R) -> Result<VorticityField> {
    let mut r = csv::Reader::from_reader(reader);
    let headers = r.headers()?.clone();
    if headers.iter().ne(FIELD_COLUMNS.iter().copied()) {
        return Err(Error::Parse(format!(
            "unexpected header {:?}, expected {:?}",
            headers.iter().collect::<Vec<_>>(),
            FIELD_COLUMNS
        )));
    }
    let mut entries = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let row = line + 2;
        let num = |i: usize| -> Result<f64> {
            rec[i]
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("row {row}, column {}: {e}", FIELD_COLUMNS[i])))
        };
        let int = |i: usize| -> Result<i64> {
            rec[i]
                .trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("row {row}, column {}: {e}", FIELD_COLUMNS[i])))
        };
        let role: SiteRole = rec[2]
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("row {row}: unknown role {:?}", &rec[2])))?;
        let omega = Mat2::new(num(3)?, num(4)?, num(5)?, num(6)?);
        let stored = Mat2::new(num(7)?, num(8)?, num(9)?, num(10)?);
        let matrix = VorticityMatrix::from_omega(omega);
        let tol = 1e-12 * (1.0 + omega.abs().max());
        if (matrix.reduced - stored).abs().max() > tol {
            return Err(Error::Parse(format!(
                "row {row}: reduced matrix inconsistent with omega"
            )));
        }
        entries.push(FieldEntry {
            site: Site::new(int(0)?, int(1)?),
            role,
            matrix,
        });
    }
    let mut field = VorticityField { entries };
    field.sort();
    if field.entries.windows(2).any(|w| w[0].site == w[1].site) {
        return Err(Error::Parse("duplicate site".into()));
    }
    Ok(field)
}

/// JSON form of a [`DegreeReport`] with the contour it belongs to.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeRecord {
    pub contour: String,
    pub samples: usize,
    pub s_squared: f64,
    pub s: f64,
    pub s_abs: f64,
    pub winding: Option<i64>,
    pub min_lambda: f64,
}

impl DegreeRecord {
    pub fn new(contour: impl Into<String>, report: &DegreeReport) -> Self {
        Self {
            contour: contour.into(),
            samples: report.samples,
            s_squared: report.s_squared,
            s: report.s,
            s_abs: report.s.abs(),
            winding: report.winding,
            min_lambda: report.min_lambda,
        }
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> VorticityField {
        let m = |a: f64, b: f64, c: f64, d: f64| VorticityMatrix::from_omega(Mat2::new(a, b, c, d));
        VorticityField {
            entries: vec![
                FieldEntry {
                    site: Site::new(0, 0),
                    role: SiteRole::Boundary,
                    matrix: m(0.7, 0.1, 0.1, 0.3),
                },
                FieldEntry {
                    site: Site::new(1, 0),
                    role: SiteRole::Interior,
                    matrix: m(
                        1.0 / 3.0,
                        std::f64::consts::PI * 1e-9,
                        -2e-300,
                        0.123_456_789_012_345_68,
                    ),
                },
            ],
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let f = sample();
        let text = field_to_csv_string(&f).unwrap();
        assert!(text.starts_with("x,y,role,omega11,"));
        let back = read_field_csv(text.as_bytes()).unwrap();
        assert_eq!(back, f);
        assert_eq!(field_to_csv_string(&back).unwrap(), text);
    }

    #[test]
    fn malformed_csv() {
        assert!(matches!(
            read_field_csv("a,b\n1,2\n".as_bytes()),
            Err(Error::Parse(_))
        ));
        let text = field_to_csv_string(&sample())
            .unwrap()
            .replace("interior", "center");
        assert!(matches!(
            read_field_csv(text.as_bytes()),
            Err(Error::Parse(_))
        ));
    }
}

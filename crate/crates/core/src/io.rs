//! Text formats: trajectory CSV and the hand-writable density-matrix file.
//!
//! CSV numbers are written with 17 significant digits, `.` as the decimal
//! separator and LF line endings.

use std::fmt::Write as _;
use std::io::{self, BufRead, Write};
use std::path::Path;

use crate::dynamics::Trajectory;
use crate::error::{Error, Result};
use crate::model::DensityMatrix;
use crate::qmath::{ComplexMatrix, ComplexScalar};

/// Formats `x` with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Column names of the 16 density-matrix entries, row-major, real part first.
pub fn rho_columns() -> Vec<String> {
    let mut cols = Vec::with_capacity(32);
    for i in 1..=4 {
        for j in 1..=4 {
            cols.push(format!("rho{i}{j}_re"));
            cols.push(format!("rho{i}{j}_im"));
        }
    }
    cols
}

pub fn trajectory_header() -> String {
    let mut h = String::from("t,gamma_t,C");
    for c in rho_columns() {
        h.push(',');
        h.push_str(&c);
    }
    h
}

/// Appends the 32 comma-separated entry values of `m` (leading comma included).
pub fn push_rho_fields(line: &mut String, m: &ComplexMatrix) {
    for z in m.as_slice() {
        let _ = write!(line, ",{},{}", fmt_f64(z.re), fmt_f64(z.im));
    }
}

pub fn write_trajectory_csv<W: Write>(mut w: W, traj: &Trajectory) -> io::Result<()> {
    writeln!(w, "{}", trajectory_header())?;
    for ((t, rho), c) in traj.times.iter().zip(&traj.states).zip(&traj.concurrences) {
        let mut line = format!("{},{},{}", fmt_f64(*t), fmt_f64(t * traj.gamma), fmt_f64(*c));
        push_rho_fields(&mut line, rho.matrix());
        writeln!(w, "{line}")?;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct TrajectoryRow {
    pub t: f64,
    pub gamma_t: f64,
    pub c: f64,
    pub rho: ComplexMatrix,
}

pub fn read_trajectory_csv<R: BufRead>(r: R) -> Result<Vec<TrajectoryRow>> {
    let mut lines = r.lines().enumerate();
    let header = match lines.next() {
        Some((_, line)) => line?,
        None => {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "empty file".into(),
            })
        }
    };
    if header.trim_end() != trajectory_header() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "unexpected trajectory header".into(),
        });
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let mut values = Vec::with_capacity(35);
        let mut column = 1;
        for field in line.split(',') {
            let v: f64 = field.trim().parse().map_err(|_| Error::Parse {
                line: idx + 1,
                column,
                message: format!("not a number: '{field}'"),
            })?;
            values.push(v);
            column += field.len() + 1;
        }
        if values.len() != 35 {
            return Err(Error::Parse {
                line: idx + 1,
                column: 1,
                message: format!("expected 35 fields, found {}", values.len()),
            });
        }
        let entries = values[3..]
            .chunks(2)
            .map(|c| ComplexScalar::new(c[0], c[1]))
            .collect();
        rows.push(TrajectoryRow {
            t: values[0],
            gamma_t: values[1],
            c: values[2],
            rho: ComplexMatrix::from_vec(4, entries)?,
        });
    }
    Ok(rows)
}

/// Parses `a+bi`, `a-bi`, `bi` or a plain real `a`.
pub fn parse_complex(token: &str) -> Option<ComplexScalar> {
    let t = token.trim();
    if t.is_empty() {
        return None;
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().ok().map(|re| ComplexScalar::new(re, 0.0));
    };
    // split before the last sign that is not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "+" | "" => 1.0,
        "-" => -1.0,
        s => s.parse::<f64>().ok()?,
    };
    let re = re.parse::<f64>().ok()?;
    Some(ComplexScalar::new(re, im))
}

/// Parses the density-matrix text format: four non-comment lines with four
/// whitespace-separated complex entries each; `#` starts a comment line.
pub fn parse_density_matrix(text: &str) -> Result<DensityMatrix> {
    let mut entries = Vec::with_capacity(16);
    let mut rows = 0;
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        rows += 1;
        if rows > 4 {
            return Err(Error::Parse {
                line: idx + 1,
                column: 1,
                message: "more than 4 matrix rows".into(),
            });
        }
        let mut count = 0;
        let mut offset = 0;
        for token in line.split_whitespace() {
            let column = line[offset..].find(token).map_or(offset, |p| offset + p) + 1;
            offset = column - 1 + token.len();
            let z = parse_complex(token).ok_or_else(|| Error::Parse {
                line: idx + 1,
                column,
                message: format!("invalid complex number '{token}'"),
            })?;
            entries.push(z);
            count += 1;
        }
        if count != 4 {
            return Err(Error::Parse {
                line: idx + 1,
                column: 1,
                message: format!("expected 4 entries, found {count}"),
            });
        }
    }
    if rows != 4 {
        return Err(Error::Parse {
            line: text.lines().count().max(1),
            column: 1,
            message: format!("expected 4 matrix rows, found {rows}"),
        });
    }
    DensityMatrix::new(ComplexMatrix::from_vec(4, entries)?)
}

pub fn read_density_matrix_file(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path)?;
    parse_density_matrix(&text)
}

/// Writes `m` in the density-matrix text format.
pub fn format_density_matrix(m: &ComplexMatrix) -> String {
    let mut out = String::new();
    for i in 0..4 {
        let row: Vec<String> = (0..4)
            .map(|j| {
                let z = m[(i, j)];
                let sign = if z.im.is_sign_negative() { '-' } else { '+' };
                format!("{:e}{sign}{:e}i", z.re, z.im.abs())
            })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::named_initial_state;

    #[test]
    fn complex_tokens() {
        let c = |re, im| Some(ComplexScalar::new(re, im));
        assert_eq!(parse_complex("1+2i"), c(1.0, 2.0));
        assert_eq!(parse_complex("0.25-0.5i"), c(0.25, -0.5));
        assert_eq!(parse_complex("-1e-3+2E-4i"), c(-1e-3, 2e-4));
        assert_eq!(parse_complex("1e+2-1e+1i"), c(100.0, -10.0));
        assert_eq!(parse_complex("0.5"), c(0.5, 0.0));
        assert_eq!(parse_complex("-2i"), c(0.0, -2.0));
        assert_eq!(parse_complex("i"), c(0.0, 1.0));
        assert_eq!(parse_complex("1+i"), c(1.0, 1.0));
        assert_eq!(parse_complex("abc"), None);
        assert_eq!(parse_complex("1+xi"), None);
    }

    #[test]
    fn ground_state_file() {
        let text = "# |gg><gg|\n0+0i 0+0i 0+0i 0+0i\n0+0i 0+0i 0+0i 0+0i\n0+0i 0+0i 0+0i 0+0i\n0+0i 0+0i 0+0i 1+0i\n";
        let rho = parse_density_matrix(text).unwrap();
        assert_eq!(rho, named_initial_state("gg").unwrap());
    }

    #[test]
    fn mixed_state_file_matches_named_state() {
        let text = "\
# equal mixture of |gg> and (|eg>+|ge>)/sqrt2
0+0i 0+0i    0+0i    0+0i
0+0i 0.25+0i 0.25+0i 0+0i
0+0i 0.25+0i 0.25+0i 0+0i
0+0i 0+0i    0+0i    0.5+0i
";
        let rho = parse_density_matrix(text).unwrap();
        assert!(rho.max_abs_diff(&named_initial_state("mixed_fig1").unwrap()) < 1e-15);
    }

    #[test]
    fn bad_trace_is_reported() {
        let text = "0 0 0 0\n0 0 0 0\n0 0 0 0\n0 0 0 0.9\n";
        let err = parse_density_matrix(text).unwrap_err();
        assert!(err.to_string().contains("trace"), "{err}");
    }

    #[test]
    fn parse_errors_carry_position() {
        let text = "1 0 0 0\n0 0 0 0\n0 0 zz 0\n0 0 0 0\n";
        match parse_density_matrix(text).unwrap_err() {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 3);
                assert_eq!(column, 5);
            }
            other => panic!("unexpected {other}"),
        }
        assert!(matches!(
            parse_density_matrix("1 0 0\n"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(parse_density_matrix("1 0 0 0\n"), Err(Error::Parse { .. })));
    }

    #[test]
    fn writer_output_parses_back() {
        let rho = named_initial_state("bell_gg_ee").unwrap();
        let text = format_density_matrix(rho.matrix());
        assert_eq!(parse_density_matrix(&text).unwrap(), rho);
    }

    #[test]
    fn number_format_has_17_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(1.0 / 3.0).parse::<f64>().unwrap(), 1.0 / 3.0);
    }
}

//! Truth-table files: a header line `n=<int> range=<indicator|signed>`
//! followed by the `2^n` values in index order, whitespace separated.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use stability_lab_core::{BooleanFunction, Error, RangeTag};

use crate::error::{LabError, Result};

/// Renders `f` in the file format. Values use the shortest representation
/// that parses back to the same `f64`.
pub fn format_table(f: &BooleanFunction) -> String {
    let mut out = format!("n={} range={}\n", f.n(), f.range());
    for (i, v) in f.values().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{v:?}").expect("writing to a String");
    }
    out.push('\n');
    out
}

pub fn parse_table(text: &str) -> std::result::Result<BooleanFunction, Error> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("malformed header: empty file".into()))?;
    let (n, range) = parse_header(header)?;
    let values = lines
        .flat_map(str::split_whitespace)
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| Error::Parse(format!("malformed value {tok:?}")))
        })
        .collect::<std::result::Result<Vec<f64>, Error>>()?;
    BooleanFunction::new(n, values, range)
}

fn parse_header(line: &str) -> std::result::Result<(usize, RangeTag), Error> {
    let bad = || Error::Parse(format!("malformed header {line:?}"));
    let mut n = None;
    let mut range = None;
    for field in line.split_whitespace() {
        match field.split_once('=') {
            Some(("n", v)) => n = Some(v.parse::<usize>().map_err(|_| bad())?),
            Some(("range", v)) => range = Some(v.parse::<RangeTag>().map_err(|_| bad())?),
            _ => return Err(bad()),
        }
    }
    Ok((n.ok_or_else(bad)?, range.ok_or_else(bad)?))
}

pub fn load(path: impl AsRef<Path>) -> Result<BooleanFunction> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    Ok(parse_table(&text)?)
}

pub fn save(path: impl AsRef<Path>, f: &BooleanFunction) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_table(f)).map_err(|e| LabError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_variants() {
        let f = parse_table("n=1 range=signed\n-1 1\n").unwrap();
        assert_eq!(f.values(), &[-1.0, 1.0]);
        let f = parse_table("range=indicator n=2\n0 1\n0.25\n1").unwrap();
        assert_eq!(f.n(), 2);
        for bad in ["", "n=2", "n=x range=signed\n", "n=1 range=bool\n1 1", "n=1 range=signed extra=1\n1 1"] {
            assert!(matches!(parse_table(bad), Err(Error::Parse(_))), "{bad:?}");
        }
    }

    #[test]
    fn error_messages() {
        let e = parse_table("n=2 range=signed\n1 1 1\n").unwrap_err();
        assert!(e.to_string().contains("value count mismatch"), "{e}");
        let e = parse_table("n=1 range=indicator\n1.5 0\n").unwrap_err();
        assert!(e.to_string().contains("range violation"), "{e}");
    }

    #[test]
    fn awkward_values_round_trip() {
        let v = vec![0.1, 1.0 / 3.0, f64::MIN_POSITIVE, 1.0 - f64::EPSILON];
        let f = BooleanFunction::new(2, v, RangeTag::Indicator).unwrap();
        assert_eq!(parse_table(&format_table(&f)).unwrap(), f);
    }
}

//! Two-column numeric tables `(r, value)` for tabulated profiles, weights and
//! growth functions.

use std::path::Path;

use crate::{Error, Result};

/// Minimum number of data rows in a table.
pub const MIN_ROWS: usize = 4;

/// Parses whitespace- or comma-separated `(r, value)` rows. Blank lines and
/// lines starting with `#` are skipped. `r` must be strictly increasing.
pub fn parse_table(text: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut rs = Vec::new();
    let mut values = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = content
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line,
                message: format!("expected 2 columns, found {}", fields.len()),
            });
        }
        let parse = |s: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| Error::Parse {
                line,
                message: format!("`{s}` is not a number"),
            })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Parse {
                    line,
                    message: format!("`{s}` is not finite"),
                })
            }
        };
        let r = parse(fields[0])?;
        let v = parse(fields[1])?;
        if let Some(&prev) = rs.last() {
            if r <= prev {
                return Err(Error::Parse {
                    line,
                    message: format!("r = {r} does not increase (previous {prev})"),
                });
            }
        }
        rs.push(r);
        values.push(v);
    }
    if rs.len() < MIN_ROWS {
        return Err(Error::Parse {
            line: last_line,
            message: format!("need at least {MIN_ROWS} rows, found {}", rs.len()),
        });
    }
    Ok((rs, values))
}

pub fn load_table(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_table(&text).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mixed_separators_and_comments() {
        let (r, v) = parse_table("# r phi\n0 0\n0.5, 0.48\n\n1.0\t0.84\n1.5 0.997\n").unwrap();
        assert_eq!(r, vec![0.0, 0.5, 1.0, 1.5]);
        assert_eq!(v[3], 0.997);
    }

    #[test]
    fn errors_cite_line_numbers() {
        let err = parse_table("0 0\n1 1\n2 x\n3 3\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                message: "`x` is not a number".into()
            }
        );

        let err = parse_table("0 0\n1 1\n1 2\n3 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));

        let err = parse_table("0 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn too_few_rows() {
        assert!(matches!(parse_table("0 0\n1 1\n2 2\n"), Err(Error::Parse { .. })));
    }
}

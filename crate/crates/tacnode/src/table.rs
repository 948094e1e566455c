//! CSV and JSON output. Reals are written with 17 significant digits so
//! that parsing them back is exact.

use std::fmt::Write as _;

use crate::error::CliError;

pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Header line followed by one line per row.
pub fn csv_string<R>(header: &[&str], rows: R) -> String
where
    R: IntoIterator,
    R::Item: AsRef<[f64]>,
{
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let mut first = true;
        for &x in row.as_ref() {
            if !first {
                s.push(',');
            }
            first = false;
            s.push_str(&fmt_real(x));
        }
        s.push('\n');
    }
    s
}

/// Parse a numeric CSV written by [`csv_string`]; lines starting with `#`
/// are skipped.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = match lines.next() {
        Some(h) => h.split(',').map(str::to_string).collect::<Vec<_>>(),
        None => return Err(CliError::Usage("empty csv".into())),
    };
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let row: Result<Vec<f64>, _> = line.split(',').map(str::parse::<f64>).collect();
        let row = row.map_err(|e| CliError::Usage(format!("csv row {}: {e}", n + 1)))?;
        if row.len() != header.len() {
            return Err(CliError::Usage(format!(
                "csv row {} has {} fields",
                n + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// Quote a text field for CSV when needed.
pub fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        let mut out = String::with_capacity(s.len() + 2);
        out.push('"');
        for ch in s.chars() {
            if ch == '"' {
                out.push('"');
            }
            out.push(ch);
        }
        out.push('"');
        out
    } else {
        s.to_string()
    }
}

/// Pretty JSON with a trailing newline.
pub fn json_string<T: serde::Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value)?;
    let _ = writeln!(s);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_table_is_header_only() {
        assert_eq!(
            csv_string::<Vec<Vec<f64>>>(&["u", "v", "value"], vec![]),
            "u,v,value\n"
        );
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_real(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_real(-2.0), "-2.0000000000000000e0");
    }

    #[test]
    fn quoting() {
        assert_eq!(csv_text("a,b"), "\"a,b\"");
        assert_eq!(csv_text("x \"y\""), "\"x \"\"y\"\"\"");
        assert_eq!(csv_text("plain"), "plain");
    }

    #[test]
    fn parse_skips_comments_and_checks_width() {
        let (h, r) = parse_csv("# note\na,b\n1e0,2e0\n").unwrap();
        assert_eq!(h, vec!["a", "b"]);
        assert_eq!(r, vec![vec![1.0, 2.0]]);
        assert!(parse_csv("a,b\n1\n").is_err());
    }

    proptest::proptest! {
        #[test]
        fn csv_round_trip_is_exact(xs in proptest::collection::vec(proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO, 0..20)) {
            let rows: Vec<Vec<f64>> = xs.iter().map(|&x| vec![x, -x]).collect();
            let (_, back) = parse_csv(&csv_string(&["a", "b"], &rows)).unwrap();
            proptest::prop_assert_eq!(back.len(), rows.len());
            for (a, b) in back.iter().zip(&rows) {
                proptest::prop_assert_eq!(a[0].to_bits(), b[0].to_bits());
                proptest::prop_assert_eq!(a[1].to_bits(), b[1].to_bits());
            }
        }
    }
}

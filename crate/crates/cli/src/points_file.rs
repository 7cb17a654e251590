//! Points files: UTF-8 text, one point per line, whitespace-separated
//! decimals, `#` starts a comment. Two fields are read as a planar point
//! `(Re z, Im z)`, three as `(a, Re z, Im z)`.

use thiserror::Error;

use crate::number::fmt_f64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: expected 2 or 3 fields, found {found}")]
    FieldCount { line: usize, found: usize },
    #[error("line {line}: `{token}` is not a finite number")]
    BadNumber { line: usize, token: String },
}

pub fn parse(text: &str) -> Result<Vec<[f64; 3]>, ParseError> {
    let mut points = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let mut values = Vec::with_capacity(3);
        for token in &tokens {
            match token.parse::<f64>() {
                Ok(v) if v.is_finite() => values.push(v),
                _ => {
                    return Err(ParseError::BadNumber {
                        line,
                        token: token.to_string(),
                    })
                }
            }
        }
        match values[..] {
            [x, y] => points.push([0.0, x, y]),
            [a, x, y] => points.push([a, x, y]),
            _ => {
                return Err(ParseError::FieldCount {
                    line,
                    found: tokens.len(),
                })
            }
        }
    }
    Ok(points)
}

/// One `a re im` line per point.
pub fn format(points: &[[f64; 3]]) -> String {
    points
        .iter()
        .map(|p| format!("{} {} {}\n", fmt_f64(p[0]), fmt_f64(p[1]), fmt_f64(p[2])))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn comments_blank_lines_and_planar_rows() {
        let text = "# header\n\n1 2   # planar\n0.5\t-1 3\n";
        assert_eq!(
            parse(text).unwrap(),
            vec![[0.0, 1.0, 2.0], [0.5, -1.0, 3.0]]
        );
    }

    #[test]
    fn errors_carry_line_numbers() {
        assert_eq!(
            parse("1 2\n1\n"),
            Err(ParseError::FieldCount { line: 2, found: 1 })
        );
        assert_eq!(
            parse("1 2 3 4"),
            Err(ParseError::FieldCount { line: 1, found: 4 })
        );
        assert_eq!(
            parse("1 x"),
            Err(ParseError::BadNumber {
                line: 1,
                token: "x".into()
            })
        );
        assert!(parse("1 inf").is_err());
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(points in prop::collection::vec(
            prop::array::uniform3(prop::num::f64::NORMAL | prop::num::f64::ZERO | prop::num::f64::SUBNORMAL),
            0..10,
        )) {
            let parsed = parse(&format(&points)).unwrap();
            prop_assert_eq!(parsed.len(), points.len());
            for (p, q) in parsed.iter().zip(&points) {
                for i in 0..3 {
                    // -0 is written as 0
                    prop_assert!(p[i] == q[i] && (p[i].to_bits() == q[i].to_bits() || q[i] == 0.0));
                }
            }
        }
    }
}

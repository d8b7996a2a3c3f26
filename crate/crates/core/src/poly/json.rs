//! JSON file format for polynomials:
//!
//! ```json
//! {"field": "complex", "degree": 2, "dim": 3,
//!  "terms": [{"alpha": [2, 0, 0], "re": 1.0, "im": 0.0}, ...]}
//! ```

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::HomogeneousPolynomial;
use crate::error::{Error, Result};
use crate::spaces::Field;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub alpha: Vec<u32>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolynomialFile {
    pub field: Field,
    pub degree: u32,
    pub dim: usize,
    pub terms: Vec<TermRecord>,
}

impl From<&HomogeneousPolynomial> for PolynomialFile {
    fn from(p: &HomogeneousPolynomial) -> Self {
        PolynomialFile {
            field: p.field(),
            degree: p.degree(),
            dim: p.dim(),
            terms: p
                .terms()
                .map(|(a, c)| TermRecord {
                    alpha: a.0.clone(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
        }
    }
}

/// Line and column (1-based) of the `index`-th term object, located by
/// its `"alpha"` key.
fn locate_term(text: &str, index: usize) -> (usize, usize) {
    let Some((offset, _)) = text.match_indices("\"alpha\"").nth(index) else {
        return (1, 1);
    };
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

/// Parses a polynomial from JSON text; `origin` names the source in errors.
pub fn parse_polynomial(text: &str, origin: &str) -> Result<HomogeneousPolynomial> {
    let file: PolynomialFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        origin: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let anchored = |i: usize, message: String| {
        let (line, column) = locate_term(text, i);
        Error::Parse {
            origin: origin.to_string(),
            line,
            column,
            message,
        }
    };
    if file.dim == 0 {
        return Err(Error::Parse {
            origin: origin.to_string(),
            line: 1,
            column: 1,
            message: "dim must be at least 1".into(),
        });
    }
    for (i, t) in file.terms.iter().enumerate() {
        if t.alpha.len() != file.dim {
            return Err(anchored(
                i,
                format!("term {i}: alpha has {} entries, expected dim = {}", t.alpha.len(), file.dim),
            ));
        }
        let order: u32 = t.alpha.iter().sum();
        if order != file.degree {
            return Err(anchored(
                i,
                format!("term {i}: |alpha| = {order} differs from degree {}", file.degree),
            ));
        }
        if file.field == Field::Real && t.im != 0.0 {
            return Err(anchored(i, format!("term {i}: nonzero imaginary part in a real polynomial")));
        }
    }
    HomogeneousPolynomial::new(
        file.field,
        file.degree,
        file.dim,
        file.terms
            .into_iter()
            .map(|t| (t.alpha, Complex64::new(t.re, t.im))),
    )
}

pub fn read_polynomial(path: &Path) -> Result<HomogeneousPolynomial> {
    let text = std::fs::read_to_string(path)?;
    parse_polynomial(&text, &path.display().to_string())
}

/// Canonical JSON text of a polynomial.
pub fn write_polynomial(p: &HomogeneousPolynomial) -> String {
    serde_json::to_string_pretty(&PolynomialFile::from(p)).expect("polynomial serializes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{random_polynomial, varopoulos};

    #[test]
    fn round_trip() {
        for p in [varopoulos(), random_polynomial(3, 2, Field::Complex, 4).unwrap()] {
            let text = write_polynomial(&p);
            assert_eq!(parse_polynomial(&text, "mem").unwrap(), p);
        }
    }

    #[test]
    fn canonical_term_order_in_output() {
        let text = write_polynomial(&varopoulos());
        let file: PolynomialFile = serde_json::from_str(&text).unwrap();
        let alphas: Vec<Vec<u32>> = file.terms.into_iter().map(|t| t.alpha).collect();
        assert_eq!(
            alphas,
            vec![vec![2, 0, 0], vec![1, 1, 0], vec![1, 0, 1], vec![0, 2, 0], vec![0, 1, 1], vec![0, 0, 2]]
        );
    }

    #[test]
    fn rejects_wrong_order_with_line_anchor() {
        let text = "{\n  \"field\": \"real\",\n  \"degree\": 2,\n  \"dim\": 2,\n  \"terms\": [\n    {\"alpha\": [2, 0], \"re\": 1.0},\n    {\"alpha\": [1, 0], \"re\": 1.0}\n  ]\n}\n";
        match parse_polynomial(text, "bad.json") {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 7);
                assert!(message.contains("|alpha| = 1"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        let text = "{\n \"field\": \"real\",\n \"degree\": 2\n \"dim\": 2 }";
        match parse_polynomial(text, "broken.json") {
            Err(Error::Parse { line, origin, .. }) => {
                assert_eq!(line, 4);
                assert_eq!(origin, "broken.json");
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}

//! Recursive-descent parser for Laurent polynomials.
//!
//! Grammar (whitespace insignificant, unary leading '-' allowed):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := coeff ('*' factor)* | factor ('*' factor)*
//! factor := var ('^' int)?
//! var    := 'x' digit
//! coeff  := uint
//! int    := '-'? uint
//! ```

use lnp_core::lfunction::LaurentPolynomial;
use std::collections::BTreeMap;
use std::fmt;

const MAX_EXPONENT: i64 = 1_000_000;

#[derive(Debug)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { bytes: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { position: self.pos, message: message.into() })
    }

    fn uint(&mut self, p: u64) -> Result<u64, ParseError> {
        let Some(first) = self.peek() else {
            return self.err("expected a number");
        };
        if !first.is_ascii_digit() {
            return self.err("expected a number");
        }
        let mut value = 0u64;
        while let Some(b) = self.bytes.get(self.pos).copied() {
            if !b.is_ascii_digit() {
                break;
            }
            // Reduce on the fly so arbitrarily long literals stay exact.
            value = (value * 10 + (b - b'0') as u64) % p;
            self.pos += 1;
        }
        Ok(value)
    }

    fn raw_uint(&mut self) -> Result<i64, ParseError> {
        let Some(first) = self.peek() else {
            return self.err("expected a number");
        };
        if !first.is_ascii_digit() {
            return self.err("expected a number");
        }
        let mut value: i64 = 0;
        while let Some(b) = self.bytes.get(self.pos).copied() {
            if !b.is_ascii_digit() {
                break;
            }
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add((b - b'0') as i64))
                .filter(|&v| v <= MAX_EXPONENT)
                .ok_or(ParseError {
                    position: self.pos,
                    message: format!("exponent exceeds the limit {MAX_EXPONENT}"),
                })?;
            self.pos += 1;
        }
        Ok(value)
    }
}

/// One parsed term: a signed coefficient on a sparse exponent map.
struct Term {
    coeff: i64,
    exponents: BTreeMap<u8, i64>,
}

/// Parses `text` into a reduced canonical polynomial over F_p. The
/// variables become positional in increasing label order; unused labels do
/// not create phantom torus coordinates.
pub fn parse_laurent(text: &str, p: u64) -> Result<LaurentPolynomial, ParseError> {
    if !lnp_core::field::is_prime(p) {
        return Err(ParseError { position: 0, message: format!("{p} is not prime") });
    }
    let mut cur = Cursor::new(text);
    let mut terms: Vec<Term> = Vec::new();
    let mut sign: i64 = 1;
    if cur.peek() == Some(b'-') {
        cur.bump();
        sign = -1;
    }
    loop {
        let term = parse_term(&mut cur, p)?;
        terms.push(Term { coeff: sign * term.coeff, exponents: term.exponents });
        match cur.peek() {
            None => break,
            Some(b'+') => {
                cur.bump();
                sign = 1;
            }
            Some(b'-') => {
                cur.bump();
                sign = -1;
            }
            Some(c) => {
                return cur.err(format!("unexpected character '{}'", c as char));
            }
        }
    }

    let mut labels: Vec<u8> = terms
        .iter()
        .flat_map(|t| t.exponents.keys().copied())
        .collect();
    labels.sort_unstable();
    labels.dedup();
    if labels.is_empty() {
        // A constant polynomial still needs one variable slot.
        labels.push(1);
    }
    let slot: BTreeMap<u8, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let raw_terms: Vec<(Vec<i64>, i64)> = terms
        .into_iter()
        .map(|t| {
            let mut expo = vec![0i64; labels.len()];
            for (label, e) in t.exponents {
                expo[slot[&label]] = e;
            }
            (expo, t.coeff)
        })
        .collect();
    LaurentPolynomial::from_terms_with_labels(p, labels.len(), labels, raw_terms)
        .map_err(|e| ParseError { position: 0, message: e.to_string() })
}

fn parse_term(cur: &mut Cursor, p: u64) -> Result<Term, ParseError> {
    let mut coeff: i64;
    let mut exponents: BTreeMap<u8, i64> = BTreeMap::new();
    match cur.peek() {
        Some(b) if b.is_ascii_digit() => {
            coeff = cur.uint(p)? as i64;
        }
        Some(b'x') => {
            coeff = 1;
            let (var, e) = parse_factor(cur)?;
            add_exponent(cur, &mut exponents, var, e)?;
        }
        _ => return cur.err("expected a coefficient or a variable"),
    }
    while cur.peek() == Some(b'*') {
        cur.bump();
        let (var, e) = parse_factor(cur)?;
        add_exponent(cur, &mut exponents, var, e)?;
    }
    coeff = coeff.rem_euclid(p as i64);
    Ok(Term { coeff, exponents })
}

fn add_exponent(
    cur: &Cursor,
    exponents: &mut BTreeMap<u8, i64>,
    var: u8,
    e: i64,
) -> Result<(), ParseError> {
    let entry = exponents.entry(var).or_insert(0);
    *entry += e;
    if entry.abs() > MAX_EXPONENT {
        return Err(ParseError {
            position: cur.pos,
            message: format!("accumulated exponent exceeds the limit {MAX_EXPONENT}"),
        });
    }
    Ok(())
}

fn parse_factor(cur: &mut Cursor) -> Result<(u8, i64), ParseError> {
    match cur.bump() {
        Some(b'x') => {}
        _ => return cur.err("expected a variable like x1"),
    }
    let var = match self_digit(cur) {
        Some(d) => d,
        None => return cur.err("variable index must be a single digit 0-9"),
    };
    let mut exponent = 1i64;
    if cur.peek() == Some(b'^') {
        cur.bump();
        let mut neg = false;
        if cur.peek() == Some(b'-') {
            cur.bump();
            neg = true;
        }
        exponent = cur.raw_uint()?;
        if neg {
            exponent = -exponent;
        }
    }
    Ok((var, exponent))
}

fn self_digit(cur: &mut Cursor) -> Option<u8> {
    let b = cur.bytes.get(cur.pos).copied()?;
    if b.is_ascii_digit() {
        cur.pos += 1;
        Some(b - b'0')
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_one_polynomial() {
        let f = parse_laurent("x1*x2^3 + x1^3*x2 + x1*x2", 3).unwrap();
        assert_eq!(f.n_vars(), 2);
        assert_eq!(f.terms().len(), 3);
        assert_eq!(f.coeff(&[1, 3]), 1);
        assert_eq!(f.canonical_string(), "x1*x2 + x1*x2^3 + x1^3*x2");
    }

    #[test]
    fn laurent_terms_and_labels() {
        let f = parse_laurent("x0^-1 + 2*x0", 3).unwrap();
        assert_eq!(f.n_vars(), 1);
        assert_eq!(f.coeff(&[-1]), 1);
        assert_eq!(f.coeff(&[1]), 2);
        assert_eq!(f.canonical_string(), "x0^-1 + 2*x0");
    }

    #[test]
    fn coefficient_collapse_to_zero() {
        let f = parse_laurent("x1 + 2*x1", 3).unwrap();
        assert!(f.is_zero());
    }

    #[test]
    fn subtraction_and_leading_minus() {
        let f = parse_laurent("-x1 + 4", 3).unwrap();
        assert_eq!(f.coeff(&[1]), 2);
        assert_eq!(f.coeff(&[0]), 1);
        let g = parse_laurent("2 - x1", 3).unwrap();
        assert_eq!(g.coeff(&[1]), 2);
    }

    #[test]
    fn repeated_variables_multiply() {
        let f = parse_laurent("x1*x1*x2", 5).unwrap();
        assert_eq!(f.coeff(&[2, 1]), 1);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_laurent("x1 + * x2", 3).unwrap_err();
        assert_eq!(e.position, 5);
        let e = parse_laurent("x", 3).unwrap_err();
        assert!(e.message.contains("single digit"));
        let e = parse_laurent("x1^9999999", 3).unwrap_err();
        assert!(e.message.contains("exceeds the limit"));
        let e = parse_laurent("x12", 3).unwrap_err();
        assert!(e.message.contains("unexpected character"));
    }

    #[test]
    fn huge_coefficients_reduce_exactly() {
        let f = parse_laurent("123456789012345678901234567890*x1", 7).unwrap();
        // The literal mod 7: computed digit by digit.
        let expect = "123456789012345678901234567890"
            .bytes()
            .fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % 7);
        assert_eq!(f.coeff(&[1]), expect);
    }

    #[test]
    fn roundtrip_through_canonical_string() {
        for (text, p) in [
            ("x1*x2^3 + x1^3*x2 + x1*x2", 3u64),
            ("x0^-1 + 1 + 2*x0*x1^2", 3),
            ("4*x1^2 + x2 + 6", 7),
        ] {
            let f = parse_laurent(text, p).unwrap();
            let printed = f.canonical_string();
            let g = parse_laurent(&printed, p).unwrap();
            assert_eq!(f, g, "roundtrip of {text}");
        }
    }
}

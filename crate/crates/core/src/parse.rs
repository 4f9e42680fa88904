//! Exact parsing of series, vector, and weight literals.
//!
//! The literal syntax, byte for byte what `Display` produces:
//!
//! ```text
//! series   = "0" | [term ("+"|"-" term)*] ["+" bigoh] | bigoh
//! term     = coeff "*" monomial | monomial | coeff
//! monomial = "T^(" rational ")"
//! bigoh    = "O(T^(" rational "))"
//! coeff    = rational
//! rational = ["-"] digits ["/" digits]
//! ```
//!
//! Whitespace is allowed around tokens. A "-" separator negates the
//! following term's coefficient. Errors carry the byte offset.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::exponent::Exponent;
use crate::field::Field;
use crate::linalg::{ValuedVector, WeightVector};
use crate::series::{NovikovSeries, Precision};

#[derive(Error, Debug, Clone, PartialEq)]
#[error("parse error at byte {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn done(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected {token:?}")))
        }
    }

    fn digits(&mut self) -> Result<&'a str, ParseError> {
        let start = self.pos;
        let len = self.rest().chars().take_while(char::is_ascii_digit).count();
        if len == 0 {
            return Err(self.error("expected digits"));
        }
        self.pos += len;
        Ok(&self.src[start..start + len])
    }

    /// rational = ["-"] digits ["/" digits]
    fn rational(&mut self) -> Result<(BigInt, BigInt), ParseError> {
        self.skip_ws();
        let negative = self.eat("-");
        self.skip_ws();
        let num_digits = self.digits()?;
        let mut num = BigInt::from_str(num_digits).expect("digits parse");
        if negative {
            num = -num;
        }
        let den = if self.rest().starts_with('/') {
            self.pos += 1;
            let den_digits = self.digits()?;
            let den = BigInt::from_str(den_digits).expect("digits parse");
            if den.is_zero() {
                return Err(self.error("zero denominator"));
            }
            den
        } else {
            BigInt::from(1)
        };
        Ok((num, den))
    }

    fn exponent(&mut self) -> Result<Exponent, ParseError> {
        let (num, den) = self.rational()?;
        Ok(Exponent::from_rational(num_rational::BigRational::new(
            num, den,
        )))
    }

    /// monomial = "T^(" rational ")"
    fn monomial_exponent(&mut self) -> Result<Exponent, ParseError> {
        self.expect("T^(")?;
        let e = self.exponent()?;
        self.expect(")")?;
        Ok(e)
    }

    /// bigoh = "O(T^(" rational "))"
    fn bigoh(&mut self) -> Result<Exponent, ParseError> {
        self.expect("O(T^(")?;
        let e = self.exponent()?;
        self.expect("))")?;
        Ok(e)
    }
}

/// Parse an exponent literal: `5/2`, `-3`, `0`.
pub fn parse_exponent(s: &str) -> Result<Exponent, ParseError> {
    let mut c = Cursor::new(s);
    let e = c.exponent()?;
    if !c.done() {
        return Err(c.error("trailing input after exponent"));
    }
    Ok(e)
}

/// Parse a series literal such as `3/1*T^(0) + 1/1*T^(5/2) + O(T^(4))`.
pub fn parse_series<F: Field>(field: &F, s: &str) -> Result<NovikovSeries<F>, ParseError> {
    let mut c = Cursor::new(s);
    let series = series_inner(field, &mut c)?;
    if !c.done() {
        return Err(c.error("trailing input after series"));
    }
    Ok(series)
}

fn series_inner<F: Field>(field: &F, c: &mut Cursor<'_>) -> Result<NovikovSeries<F>, ParseError> {
    let mut terms: Vec<(Exponent, F::Elem)> = Vec::new();
    let mut precision = Precision::Exact;
    let mut negate_next = false;
    let mut first = true;
    loop {
        c.skip_ws();
        if first && c.peek().is_none() {
            return Err(c.error("empty series literal"));
        }
        if c.rest().starts_with("O(") {
            let bound = c.bigoh()?;
            precision = Precision::Below(bound);
            break;
        }
        let (e, coeff) = term(field, c)?;
        let coeff = if negate_next { field.neg(&coeff) } else { coeff };
        terms.push((e, coeff));
        first = false;
        c.skip_ws();
        if c.eat("+") {
            negate_next = false;
            continue;
        }
        if c.eat("-") {
            negate_next = true;
            continue;
        }
        break;
    }
    Ok(NovikovSeries::from_terms(field.clone(), terms, precision))
}

/// term = coeff "*" monomial | monomial | coeff
fn term<F: Field>(field: &F, c: &mut Cursor<'_>) -> Result<(Exponent, F::Elem), ParseError> {
    c.skip_ws();
    if c.rest().starts_with("T^(") {
        let e = c.monomial_exponent()?;
        return Ok((e, field.one()));
    }
    let coeff_pos = c.pos;
    let (num, den) = c.rational()?;
    let coeff = field.from_ratio(&num, &den).ok_or(ParseError {
        pos: coeff_pos,
        message: format!("coefficient {num}/{den} has no meaning in {}", field.name()),
    })?;
    c.skip_ws();
    if c.eat("*") {
        let e = c.monomial_exponent()?;
        Ok((e, coeff))
    } else {
        // bare rational: a constant term
        Ok((Exponent::zero(), coeff))
    }
}

/// Parse a vector literal: `[series, series, ...]`.
pub fn parse_vector<F: Field>(field: &F, s: &str) -> Result<ValuedVector<F>, ParseError> {
    let mut c = Cursor::new(s);
    c.expect("[")?;
    let close = s.rfind(']').ok_or_else(|| ParseError {
        pos: s.len(),
        message: "expected closing ]".to_owned(),
    })?;
    let inner = &s[c.pos..close];
    let base = c.pos;
    let mut entries = Vec::new();
    let mut offset = 0usize;
    for piece in inner.split(',') {
        parse_series(field, piece)
            .map(|series| entries.push(series))
            .map_err(|e| ParseError {
                pos: base + offset + e.pos,
                message: e.message,
            })?;
        offset += piece.len() + 1;
    }
    let mut tail = Cursor::new(s);
    tail.pos = close + 1;
    if !tail.done() {
        return Err(tail.error("trailing input after vector"));
    }
    Ok(ValuedVector::new(field.clone(), entries))
}

/// Parse weights: comma-separated rationals, optionally bracketed.
pub fn parse_weights(s: &str) -> Result<WeightVector, ParseError> {
    let trimmed = s.trim();
    let inner = match trimmed.strip_prefix('[') {
        Some(rest) => rest.strip_suffix(']').ok_or_else(|| ParseError {
            pos: s.len(),
            message: "expected closing ]".to_owned(),
        })?,
        None => trimmed,
    };
    let mut out = Vec::new();
    for piece in inner.split(',') {
        out.push(parse_exponent(piece)?);
    }
    Ok(WeightVector::new(out))
}

/// Render a vector the way `parse_vector` reads it.
pub fn format_vector<F: Field>(v: &ValuedVector<F>) -> String {
    format!("{v}")
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, t) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn ex(n: i64, d: i64) -> Exponent {
        Exponent::from_ratio(n, d)
    }

    #[test]
    fn parses_the_documented_literal() {
        let s = parse_series(&Rationals, "3/1*T^(0) + 1/1*T^(5/2)").unwrap();
        assert_eq!(s.terms().len(), 2);
        assert_eq!(s.to_string(), "3/1*T^(0) + 1/1*T^(5/2)");
        let with_prec = parse_series(&Rationals, "3/1*T^(0) + 1/1*T^(5/2) + O(T^(4))").unwrap();
        assert_eq!(with_prec.precision(), &Precision::Below(ex(4, 1)));
        assert_eq!(with_prec.to_string(), "3/1*T^(0) + 1/1*T^(5/2) + O(T^(4))");
    }

    #[test]
    fn zero_forms() {
        assert!(parse_series(&Rationals, "0").unwrap().is_exact_zero());
        assert!(parse_series(&Rationals, " 0 ").unwrap().is_exact_zero());
        let blind = parse_series(&Rationals, "O(T^(4))").unwrap();
        assert!(!blind.is_known_nonzero());
        assert_eq!(blind.precision(), &Precision::Below(ex(4, 1)));
        let blind2 = parse_series(&Rationals, "0 + O(T^(4))").unwrap();
        assert_eq!(blind2, blind);
    }

    #[test]
    fn sign_separators_and_bare_terms() {
        let s = parse_series(&Rationals, "1 - T^(1)").unwrap();
        assert_eq!(s.to_string(), "1/1*T^(0) + -1/1*T^(1)");
        let t = parse_series(&Rationals, "-1/2*T^(-1) + T^(0)").unwrap();
        assert_eq!(t.coefficient_at(&ex(-1, 1)).unwrap(), Rationals.from_ratio(&(-1).into(), &2.into()).unwrap());
        // round-trip of the canonical form
        let back = parse_series(&Rationals, &t.to_string()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse_series(&Rationals, "1 + ").unwrap_err();
        assert_eq!(err.pos, 4);
        let err = parse_series(&Rationals, "T^(1/0)").unwrap_err();
        assert!(err.message.contains("denominator"));
        let err = parse_series(&PrimeField::new(2), "1/2*T^(0)").unwrap_err();
        assert_eq!(err.pos, 0);
        assert!(err.message.contains("F2"));
        let err = parse_series(&Rationals, "1 $ 2").unwrap_err();
        assert!(err.pos >= 2);
    }

    #[test]
    fn prime_field_coefficients() {
        let f3 = PrimeField::new(3);
        let s = parse_series(&f3, "2*T^(0) + 1/2*T^(1)").unwrap();
        // 1/2 = 2 in F_3
        assert_eq!(s.coefficient_at(&ex(1, 1)).unwrap(), 2);
        assert_eq!(s.to_string(), "2*T^(0) + 2*T^(1)");
    }

    #[test]
    fn vectors_and_weights() {
        let v = parse_vector(&Rationals, "[1, 0, T^(1/2)]").unwrap();
        assert_eq!(v.len(), 3);
        assert!(v.entry(1).is_exact_zero());
        let rendered = format_vector(&v);
        let back = parse_vector(&Rationals, &rendered).unwrap();
        assert_eq!(back, v);

        let w = parse_weights("0, 1/2, -3").unwrap();
        assert_eq!(w.as_slice(), &[ex(0, 1), ex(1, 2), ex(-3, 1)]);
        let w2 = parse_weights("[0, 1/2, -3]").unwrap();
        assert_eq!(w, w2);
        assert!(parse_weights("0, x").is_err());
    }

    #[test]
    fn vector_error_positions_are_global() {
        let err = parse_vector(&Rationals, "[1, T^(]").unwrap_err();
        assert!(err.pos >= 4, "position {} should point into the vector", err.pos);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_series() -> impl Strategy<Value = NovikovSeries<Rationals>> {
            let term = (-9i64..=9, 1i64..=3, -9i64..=9)
                .prop_map(|(n, d, c)| (ex(n, d), Rationals.from_int(c)));
            (
                proptest::collection::vec(term, 0..5),
                proptest::option::of(1i64..=8),
            )
                .prop_map(|(terms, prec)| {
                    let precision = match prec {
                        None => Precision::Exact,
                        Some(p) => Precision::Below(ex(p, 1)),
                    };
                    NovikovSeries::from_terms(Rationals, terms, precision)
                })
        }

        proptest! {
            #[test]
            fn display_parse_roundtrip(s in arb_series()) {
                let rendered = s.to_string();
                let back = parse_series(&Rationals, &rendered).unwrap();
                prop_assert_eq!(back, s);
            }
        }
    }
}

//! Text grammar for types and formulas.
//!
//! Types: `type := "1" | factor (SP factor)*`, `factor := gen ("^" exp)?`,
//! `gen := ("A"|"D"|"E") digit sign?`, `exp := positive integer`. A sign
//! binds to a generator only when directly adjacent (`A3+ A1` vs `A3 + A1`).
//!
//! Formulas: `line := lhs "=" rhs`, `rhs := term (("+"|"-") term)*`,
//! `term := [rational "*"] type`, `rational := int["/"int]`. Inside a
//! `@family k` block the A1 factor carries a symbolic exponent `A1^{k}` or
//! `A1^{k-3}`; integer exponents elsewhere.
//!
//! Fixture files are split into blocks by blank lines. A block holds
//! directives (`@table 3`, `@requires H0`, `@family k`, `@modulus 2`) and one
//! or more formulas; a line without `=` continues the previous formula.
//! `#` starts a comment.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{Coeff, Element};
use crate::collapse::CollapsedMonomial;
use crate::generator::Generator;
use crate::monomial::Monomial;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct DslError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl DslError {
    fn new(line: usize, col: usize, msg: impl Into<String>) -> DslError {
        DslError { line, col, msg: msg.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LowerK,
    Eq,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LowerK => write!(f, "`k`"),
            Tok::Eq => write!(f, "`=`"),
        }
    }
}

fn scan(src: &str, line: usize) -> Result<Vec<(usize, Tok)>, DslError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let col = i + 1;
        match c {
            ' ' | '\t' => {
                i += 1;
            }
            '+' => {
                out.push((col, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((col, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((col, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((col, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((col, Tok::Caret));
                i += 1;
            }
            '{' => {
                out.push((col, Tok::LBrace));
                i += 1;
            }
            '}' => {
                out.push((col, Tok::RBrace));
                i += 1;
            }
            '(' => {
                out.push((col, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((col, Tok::RParen));
                i += 1;
            }
            '=' => {
                out.push((col, Tok::Eq));
                i += 1;
            }
            'k' => {
                out.push((col, Tok::LowerK));
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: i64 = src[start..i]
                    .parse()
                    .map_err(|_| DslError::new(line, col, "integer out of range"))?;
                out.push((col, Tok::Int(n)));
            }
            'A'..='Z' => {
                let start = i;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                // A sign directly after the digits belongs to the generator.
                if i > start + 1 && i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
                    i += 1;
                }
                out.push((col, Tok::Ident(src[start..i].to_string())));
            }
            _ => {
                return Err(DslError::new(line, col, format!("unexpected character `{c}`")));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Exp {
    Plain(u16),
    /// `A1^{k-shift}`.
    Symbolic(u16),
}

/// A parsed term before interpretation: factors are raw generator tokens.
struct RawTerm {
    col: usize,
    coeff: Coeff,
    factors: Vec<(String, Exp)>,
}

struct Parser {
    line: usize,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn new(src: &str, line: usize) -> Result<Parser, DslError> {
        Ok(Parser { line, toks: scan(src, line)?, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(c, _)| *c)
            .unwrap_or(1)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> DslError {
        DslError::new(self.line, self.col(), msg)
    }

    fn expect(&mut self, want: Tok) -> Result<(), DslError> {
        match self.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => Err(DslError::new(self.line, self.col(), format!("expected {want}, found {t}"))),
            None => Err(self.err(format!("expected {want}, found end of line"))),
        }
    }

    fn expect_int(&mut self) -> Result<i64, DslError> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(n),
            Some(t) => Err(DslError::new(self.line, self.col(), format!("expected an integer, found {t}"))),
            None => Err(self.err("expected an integer, found end of line")),
        }
    }

    fn at_term_boundary(&self) -> bool {
        matches!(self.peek(), None | Some(Tok::Plus) | Some(Tok::Minus) | Some(Tok::Eq))
    }

    fn parse_exponent(&mut self) -> Result<Exp, DslError> {
        match self.next() {
            Some(Tok::Int(n)) => {
                if n < 1 {
                    return Err(self.err("exponent must be a positive integer"));
                }
                let e = u16::try_from(n).map_err(|_| self.err("exponent out of range"))?;
                Ok(Exp::Plain(e))
            }
            Some(Tok::LBrace) => {
                self.expect(Tok::LowerK)?;
                let shift = if self.peek() == Some(&Tok::Minus) {
                    self.next();
                    let n = self.expect_int()?;
                    if n < 1 {
                        return Err(self.err("shift must be a positive integer"));
                    }
                    u16::try_from(n).map_err(|_| self.err("shift out of range"))?
                } else {
                    0
                };
                self.expect(Tok::RBrace)?;
                Ok(Exp::Symbolic(shift))
            }
            Some(t) => Err(DslError::new(self.line, self.col(), format!("expected an exponent, found {t}"))),
            None => Err(self.err("expected an exponent, found end of line")),
        }
    }

    /// Factor list of one type; consumes `1` as the unit type.
    fn parse_factors(&mut self) -> Result<Vec<(String, Exp)>, DslError> {
        if let Some(Tok::Int(1)) = self.peek() {
            self.next();
            if !self.at_term_boundary() {
                return Err(self.err("the unit type `1` takes no factors"));
            }
            return Ok(Vec::new());
        }
        let mut factors = Vec::new();
        while let Some(Tok::Ident(_)) = self.peek() {
            let tok = match self.next() {
                Some(Tok::Ident(s)) => s,
                _ => unreachable!(),
            };
            let exp = if self.peek() == Some(&Tok::Caret) {
                self.next();
                self.parse_exponent()?
            } else {
                Exp::Plain(1)
            };
            factors.push((tok, exp));
        }
        if factors.is_empty() {
            return Err(self.err("expected a type"));
        }
        Ok(factors)
    }

    fn parse_term(&mut self, sign: i64) -> Result<RawTerm, DslError> {
        let col = self.col();
        let mut coeff = Coeff::from_integer(sign.into());
        let factors = match self.peek() {
            Some(Tok::Int(n)) if *n != 1 || self.is_rational_ahead() => {
                let n = self.expect_int()?;
                let mut r = Coeff::from_integer(n.into());
                if self.peek() == Some(&Tok::Slash) {
                    self.next();
                    let d = self.expect_int()?;
                    if d == 0 {
                        return Err(self.err("zero denominator"));
                    }
                    r /= Coeff::from_integer(d.into());
                }
                coeff *= r;
                if self.peek() == Some(&Tok::Star) {
                    self.next();
                    self.parse_factors()?
                } else if self.at_term_boundary() {
                    Vec::new() // bare rational: coefficient on the unit type
                } else {
                    return Err(self.err("expected `*`, `+`, `-` or end after a coefficient"));
                }
            }
            _ => self.parse_factors()?,
        };
        Ok(RawTerm { col, coeff, factors })
    }

    // Distinguishes the rational-coefficient `1/2 * X` and `1 * X` forms
    // from the unit type `1`.
    fn is_rational_ahead(&self) -> bool {
        matches!(
            self.toks.get(self.pos + 1).map(|(_, t)| t),
            Some(Tok::Slash) | Some(Tok::Star)
        )
    }

    fn parse_combo(&mut self) -> Result<Vec<RawTerm>, DslError> {
        let mut terms = Vec::new();
        let mut sign = 1i64;
        if self.peek() == Some(&Tok::Minus) {
            self.next();
            sign = -1;
        }
        loop {
            terms.push(self.parse_term(sign)?);
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    sign = 1;
                }
                Some(Tok::Minus) => {
                    self.next();
                    sign = -1;
                }
                Some(Tok::Eq) | None => return Ok(terms),
                Some(t) => return Err(self.err(format!("expected `+`, `-` or `=`, found {t}"))),
            }
        }
    }

    fn end(&mut self) -> Result<(), DslError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.err(format!("unexpected trailing {t}"))),
        }
    }
}

fn signed_monomial(term: &RawTerm, line: usize) -> Result<Monomial, DslError> {
    let mut m = Monomial::ONE;
    for (tok, exp) in &term.factors {
        let g = Generator::from_token(tok)
            .map_err(|_| DslError::new(line, term.col, format!("unknown generator token `{tok}`")))?;
        let e = match exp {
            Exp::Plain(e) => *e,
            Exp::Symbolic(_) => {
                return Err(DslError::new(
                    line,
                    term.col,
                    "symbolic exponent is only valid in a `@family k` row",
                ))
            }
        };
        for _ in 0..e {
            m = m.mul_gen(g);
        }
    }
    Ok(m)
}

fn collapsed_monomial(term: &RawTerm, line: usize) -> Result<CollapsedMonomial, DslError> {
    let mut m = CollapsedMonomial::ONE;
    for (tok, exp) in &term.factors {
        let i = CollapsedMonomial::generator_index(tok).ok_or_else(|| {
            DslError::new(line, term.col, format!("unknown caustic symbol `{tok}`"))
        })?;
        let e = match exp {
            Exp::Plain(e) => *e,
            Exp::Symbolic(_) => {
                return Err(DslError::new(
                    line,
                    term.col,
                    "symbolic exponent is only valid in a `@family k` row",
                ))
            }
        };
        for _ in 0..e {
            m = m.mul(&CollapsedMonomial::generator(i));
        }
    }
    Ok(m)
}

/// `(coefficient, A1-free base, shift)`: the term `coeff * base * A1^{k-shift}`.
pub type ParametricTerm = (Coeff, Monomial, u16);

fn parametric_term(term: &RawTerm, line: usize) -> Result<ParametricTerm, DslError> {
    let mut base = Monomial::ONE;
    let mut shift: Option<u16> = None;
    for (tok, exp) in &term.factors {
        let g = Generator::from_token(tok)
            .map_err(|_| DslError::new(line, term.col, format!("unknown generator token `{tok}`")))?;
        match exp {
            Exp::Symbolic(s) => {
                if g != Generator::A1 {
                    return Err(DslError::new(line, term.col, "symbolic exponent is valid on A1 only"));
                }
                if shift.replace(*s).is_some() {
                    return Err(DslError::new(line, term.col, "duplicate symbolic A1 factor"));
                }
            }
            Exp::Plain(e) => {
                if g == Generator::A1 {
                    return Err(DslError::new(
                        line,
                        term.col,
                        "A1 must carry the symbolic exponent in a `@family k` row",
                    ));
                }
                for _ in 0..*e {
                    base = base.mul_gen(g);
                }
            }
        }
    }
    let shift = shift.ok_or_else(|| {
        DslError::new(line, term.col, "each term of a `@family k` row needs an A1^{k-s} factor")
    })?;
    Ok((term.coeff.clone(), base, shift))
}

fn terms_to_element(terms: &[RawTerm], line: usize) -> Result<Element, DslError> {
    let mut e = Element::zero();
    for t in terms {
        e.add_term(signed_monomial(t, line)?, t.coeff.clone());
    }
    Ok(e)
}

/// Linear combination over caustic symbols.
pub type CollapsedCombo = BTreeMap<CollapsedMonomial, Coeff>;

fn terms_to_collapsed(terms: &[RawTerm], line: usize) -> Result<CollapsedCombo, DslError> {
    let mut out = CollapsedCombo::new();
    for t in terms {
        let m = collapsed_monomial(t, line)?;
        let entry = out.entry(m).or_insert_with(Coeff::zero);
        *entry += &t.coeff;
        if entry.is_zero() {
            out.remove(&m);
        }
    }
    Ok(out)
}

/// Parse a multisingularity type: `"D4+ A3- A1^3"`, `"1"`, `"A2^5"`.
pub fn parse_type(src: &str) -> Result<Monomial, DslError> {
    let mut p = Parser::new(src, 1)?;
    let factors = p.parse_factors()?;
    p.end()?;
    signed_monomial(&RawTerm { col: 1, coeff: Coeff::one(), factors }, 1)
}

/// Parse a caustic symbol: `"D4+ A3 A2^2"`, `"A3^2"`.
pub fn parse_collapsed_type(src: &str) -> Result<CollapsedMonomial, DslError> {
    let mut p = Parser::new(src, 1)?;
    let factors = p.parse_factors()?;
    p.end()?;
    collapsed_monomial(&RawTerm { col: 1, coeff: Coeff::one(), factors }, 1)
}

/// Parse a signed linear combination: `"D5+ A2 + D5- A2"`, `"1/2 * A4 - A2^3"`.
pub fn parse_element(src: &str) -> Result<Element, DslError> {
    parse_element_at(src, 1)
}

pub(crate) fn parse_element_at(src: &str, line: usize) -> Result<Element, DslError> {
    let mut p = Parser::new(src, line)?;
    let terms = p.parse_combo()?;
    p.end()?;
    terms_to_element(&terms, line)
}

/// Parse a linear combination over caustic symbols.
pub fn parse_collapsed_combo(src: &str) -> Result<CollapsedCombo, DslError> {
    parse_collapsed_combo_at(src, 1)
}

pub(crate) fn parse_collapsed_combo_at(src: &str, line: usize) -> Result<CollapsedCombo, DslError> {
    let mut p = Parser::new(src, line)?;
    let terms = p.parse_combo()?;
    p.end()?;
    terms_to_collapsed(&terms, line)
}

/// Parse `lhs = rhs` over signed types; both sides are general combinations.
pub fn parse_equation(src: &str, line: usize) -> Result<(Element, Element), DslError> {
    let mut p = Parser::new(src, line)?;
    let lhs = p.parse_combo()?;
    p.expect(Tok::Eq)?;
    let rhs = p.parse_combo()?;
    p.end()?;
    Ok((terms_to_element(&lhs, line)?, terms_to_element(&rhs, line)?))
}

/// Parse `lhs = rhs` over caustic symbols.
pub fn parse_collapsed_equation(
    src: &str,
    line: usize,
) -> Result<(CollapsedCombo, CollapsedCombo), DslError> {
    let mut p = Parser::new(src, line)?;
    let lhs = p.parse_combo()?;
    p.expect(Tok::Eq)?;
    let rhs = p.parse_combo()?;
    p.end()?;
    Ok((terms_to_collapsed(&lhs, line)?, terms_to_collapsed(&rhs, line)?))
}

/// Parse a `@family k` row: `B0 A1^{k} = sum of coeff * B A1^{k-s}`.
/// Returns the A1-free left base and the shift-term list.
pub fn parse_parametric_equation(
    src: &str,
    line: usize,
) -> Result<(Monomial, Vec<ParametricTerm>), DslError> {
    let mut p = Parser::new(src, line)?;
    let lhs = p.parse_combo()?;
    p.expect(Tok::Eq)?;
    let rhs = p.parse_combo()?;
    p.end()?;
    if lhs.len() != 1 {
        return Err(DslError::new(line, 1, "parametric row needs a single left-hand type"));
    }
    let (c0, base0, s0) = parametric_term(&lhs[0], line)?;
    if !c0.is_one() {
        return Err(DslError::new(line, 1, "parametric left-hand side has coefficient 1"));
    }
    if s0 != 0 {
        return Err(DslError::new(line, 1, "parametric left-hand side must carry A1^{k}"));
    }
    let mut terms = Vec::with_capacity(rhs.len());
    for t in &rhs {
        terms.push(parametric_term(t, line)?);
    }
    Ok((base0, terms))
}

/// Parse a J-table line: `J(<gen>) = <element>`.
pub fn parse_jtable_line(src: &str, line: usize) -> Result<(Generator, Element), DslError> {
    let mut p = Parser::new(src, line)?;
    match p.next() {
        Some(Tok::Ident(s)) if s == "J" => {}
        _ => return Err(DslError::new(line, 1, "expected `J(<generator>) = ...`")),
    }
    p.expect(Tok::LParen)?;
    let g = match p.next() {
        Some(Tok::Ident(s)) => Generator::from_token(&s)
            .map_err(|_| DslError::new(line, p.col(), format!("unknown generator token `{s}`")))?,
        _ => return Err(DslError::new(line, p.col(), "expected a generator")),
    };
    p.expect(Tok::RParen)?;
    p.expect(Tok::Eq)?;
    let rhs = p.parse_combo()?;
    p.end()?;
    Ok((g, terms_to_element(&rhs, line)?))
}

/// One fixture block: directives followed by formula lines.
#[derive(Debug, Clone, Default)]
pub struct Block {
    pub start_line: usize,
    pub directives: BTreeMap<String, String>,
    /// (line number, logical line with continuations joined)
    pub formulas: Vec<(usize, String)>,
}

/// Split a fixture file into blank-line-separated blocks. `#` starts a
/// comment; a non-directive line without `=` continues the previous formula.
pub fn split_blocks(src: &str) -> Result<Vec<Block>, DslError> {
    let mut blocks = Vec::new();
    let mut current: Option<Block> = None;
    for (i, raw) in src.lines().enumerate() {
        let line_no = i + 1;
        let text = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let text = text.trim();
        if text.is_empty() {
            if let Some(b) = current.take() {
                blocks.push(b);
            }
            continue;
        }
        let block = current.get_or_insert_with(|| Block { start_line: line_no, ..Block::default() });
        if let Some(rest) = text.strip_prefix('@') {
            let (name, value) = match rest.split_once(char::is_whitespace) {
                Some((n, v)) => (n.trim(), v.trim()),
                None => (rest.trim(), ""),
            };
            if block.directives.insert(name.to_string(), value.to_string()).is_some() {
                return Err(DslError::new(line_no, 1, format!("duplicate directive `@{name}`")));
            }
        } else if text.contains('=') {
            block.formulas.push((line_no, text.to_string()));
        } else {
            match block.formulas.last_mut() {
                Some((_, f)) => {
                    f.push(' ');
                    f.push_str(text);
                }
                None => {
                    return Err(DslError::new(line_no, 1, "continuation line without a formula"));
                }
            }
        }
    }
    if let Some(b) = current.take() {
        blocks.push(b);
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{coeff_int, coeff_ratio, mono};

    #[test]
    fn parses_grammar_cases() {
        let m = parse_type("D4+ A3- A1^3").unwrap();
        assert_eq!(m, mono(&[("D4+", 1), ("A3-", 1)]).mul_a1(3));
        assert_eq!(parse_type("1").unwrap(), Monomial::ONE);
        let m = parse_type("A2^5").unwrap();
        assert_eq!(m, mono(&[("A2", 5)]));
        assert_eq!(m.codim(), 5);
    }

    #[test]
    fn round_trips_with_display() {
        for m in Monomial::enumerate(5, 12) {
            assert_eq!(parse_type(&m.to_string()).unwrap(), m, "{m}");
        }
    }

    #[test]
    fn rejects_malformed_types() {
        for bad in ["A7", "E6", "A2^0", "A2^-1", "A2^", "1 A2", "A2 ^2 junk", "Q5"] {
            assert!(parse_type(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn element_terms_and_signs() {
        let e = parse_element("1 + A1^2 - A2").unwrap();
        assert_eq!(e.coeff(&Monomial::ONE), coeff_int(1));
        assert_eq!(e.coeff(&Monomial::ONE.mul_a1(2)), coeff_int(1));
        assert_eq!(e.coeff(&mono(&[("A2", 1)])), coeff_int(-1));

        let e = parse_element("-5/2 * A2^5 + 3 * A6").unwrap();
        assert_eq!(e.coeff(&mono(&[("A2", 5)])), coeff_ratio(-5, 2));
        assert_eq!(e.coeff(&mono(&[("A6", 1)])), coeff_int(3));

        assert!(parse_element("0").unwrap().is_zero());
        let e = parse_element("1/4").unwrap();
        assert_eq!(e.coeff(&Monomial::ONE), coeff_ratio(1, 4));
    }

    #[test]
    fn sign_binding_distinguishes_generator_signs() {
        let sum = parse_element("A3+ A1 + A3- A1").unwrap();
        assert_eq!(sum.len(), 2);
        let product = parse_element("A3+ A1").unwrap();
        assert_eq!(product.len(), 1);
    }

    #[test]
    fn element_display_round_trips() {
        for text in ["1 + A1^2 - A2", "1/4 - 5/2 * A2", "A3+ A1 - 2 * A2 A1"] {
            let e = parse_element(text).unwrap();
            assert_eq!(parse_element(&e.to_string()).unwrap(), e);
        }
    }

    #[test]
    fn parametric_rows_extract_shift_terms() {
        let (base, terms) = parse_parametric_equation(
            "D5+ A1^{k} = E6+ A1^{k-1} + 1/2 * D5+ A2 A1^{k}",
            1,
        )
        .unwrap();
        assert_eq!(base, mono(&[("D5+", 1)]));
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0], (coeff_int(1), mono(&[("E6+", 1)]), 1));
        assert_eq!(terms[1], (coeff_ratio(1, 2), mono(&[("D5+", 1), ("A2", 1)]), 0));
    }

    #[test]
    fn parametric_rows_reject_plain_a1() {
        assert!(parse_parametric_equation("D5+ A1^{k} = E6+ A1^2", 1).is_err());
        assert!(parse_parametric_equation("D5+ A1^{k} = E6+", 1).is_err());
        assert!(parse_parametric_equation("D5+ A1^{k-1} = E6+ A1^{k}", 1).is_err());
    }

    #[test]
    fn collapsed_mode_accepts_unsigned_odd_symbols() {
        let c = parse_collapsed_type("D4+ A3 A2^2").unwrap();
        assert_eq!(c.to_string(), "D4+ A3 A2^2");
        assert!(parse_collapsed_type("A3+").is_err());
        let combo = parse_collapsed_combo("D5 A2 + 1/2 * A4 A3").unwrap();
        assert_eq!(combo.len(), 2);
    }

    #[test]
    fn jtable_line() {
        let (g, e) = parse_jtable_line("J(A2) = 1 + A1^2 - A2", 7).unwrap();
        assert_eq!(g, Generator::A2);
        assert_eq!(e.len(), 3);
        assert!(parse_jtable_line("J(A9) = 1", 1).is_err());
    }

    #[test]
    fn block_splitting_with_comments_and_continuations() {
        let src = "\
# header comment

@table 1
@requires H0
D6+ + D6- = 0

@requires H2
A6 = E6+
  + E6-  # continuation
";
        let blocks = split_blocks(src).unwrap();
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].directives.get("table").map(String::as_str), Some("1"));
        assert_eq!(blocks[0].formulas.len(), 1);
        assert_eq!(blocks[1].formulas[0].1, "A6 = E6+ + E6-");
    }

    #[test]
    fn errors_carry_line_and_column() {
        let err = parse_equation("A6 = E7+", 3).unwrap_err();
        assert_eq!(err.line, 3);
        assert!(err.col > 0);
        assert!(err.to_string().contains("E7+"));
    }
}

//! Recursive-descent parser for the mission DSL.
//!
//! ```text
//! formula := "true" | pred | "!" formula | formula "&&" formula
//!          | formula "||" formula | formula "=>" formula
//!          | "G[" num "," num "]" formula | "F[" num "," num "]" formula
//!          | formula "U[" num "," num "]" formula | "(" formula ")"
//! pred    := "in(" ident "," ident ")" | "out(" ident "," ident ")"
//!          | "sep(" ident "," ident ")" ">=" num | affine ">=" num
//! affine  := ["-"] term (("+" | "-") term)*
//! term    := [num "*"] ident "." ("px" | "py" | "pz")
//! ```

use std::fmt;

use thiserror::Error;

use super::formula::Formula;
use super::interval::Interval;
use super::predicate::{Atom, Axis};

#[derive(Debug, Clone, PartialEq)]
pub enum ParseErrorKind {
    Syntax(String),
    Interval { lo: f64, hi: f64 },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "{msg}"),
            ParseErrorKind::Interval { lo, hi } => {
                write!(f, "invalid interval [{lo},{hi}]: bounds must satisfy 0 <= lo <= hi")
            }
        }
    }
}

/// Parse failure at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(f64),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Star,
    Dot,
    Plus,
    Minus,
    Bang,
    AndAnd,
    OrOr,
    Arrow,
    Ge,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "number {n}"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Bang => write!(f, "`!`"),
            Tok::AndAnd => write!(f, "`&&`"),
            Tok::OrOr => write!(f, "`||`"),
            Tok::Arrow => write!(f, "`=>`"),
            Tok::Ge => write!(f, "`>=`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, column, kind: ParseErrorKind::Syntax(msg.into()) }
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut tokens = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = if c.is_ascii_alphabetic() || c == '_' {
            let len = chars[i..]
                .iter()
                .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                .count();
            (Tok::Ident(chars[i..i + len].iter().collect()), len)
        } else if c.is_ascii_digit() || (c == '.' && next.is_some_and(|n| n.is_ascii_digit())) {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            if j < chars.len() && chars[j] == '.' {
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
            }
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                let mut k = j + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    while k < chars.len() && chars[k].is_ascii_digit() {
                        k += 1;
                    }
                    j = k;
                }
            }
            let literal: String = chars[i..j].iter().collect();
            let value = literal
                .parse::<f64>()
                .map_err(|_| syntax(line, col, format!("malformed number `{literal}`")))?;
            (Tok::Num(value), j - i)
        } else {
            match (c, next) {
                ('&', Some('&')) => (Tok::AndAnd, 2),
                ('|', Some('|')) => (Tok::OrOr, 2),
                ('=', Some('>')) => (Tok::Arrow, 2),
                ('>', Some('=')) => (Tok::Ge, 2),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('[', _) => (Tok::LBracket, 1),
                (']', _) => (Tok::RBracket, 1),
                (',', _) => (Tok::Comma, 1),
                ('*', _) => (Tok::Star, 1),
                ('.', _) => (Tok::Dot, 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('!', _) => (Tok::Bang, 1),
                _ => return Err(syntax(line, col, format!("unexpected character `{c}`"))),
            }
        };
        tokens.push(Token { tok, line: start_line, column: start_col });
        i += len;
        col += len;
    }
    tokens.push(Token { tok: Tok::Eof, line, column: col });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn peek_at(&self, offset: usize) -> &Tok {
        let i = (self.pos + offset).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn here(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        let t = self.here();
        syntax(t.line, t.column, msg)
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        self.error(format!("expected {expected}, found {}", self.peek()))
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&tok.to_string()))
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                Ok(name)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn signed_number(&mut self) -> Result<f64, ParseError> {
        let negative = match self.peek() {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        match *self.peek() {
            Tok::Num(v) => {
                self.bump();
                Ok(if negative { -v } else { v })
            }
            _ => Err(self.unexpected("a number")),
        }
    }

    fn is_temporal(&self, keyword: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == keyword) && *self.peek_at(1) == Tok::LBracket
    }

    /// Parses `X[lo,hi]` where the keyword `X` is the current token.
    fn interval(&mut self) -> Result<Interval, ParseError> {
        let at = self.bump();
        self.expect(Tok::LBracket)?;
        let lo = self.signed_number()?;
        self.expect(Tok::Comma)?;
        let hi = self.signed_number()?;
        self.expect(Tok::RBracket)?;
        Interval::new(lo, hi).map_err(|_| ParseError {
            line: at.line,
            column: at.column,
            kind: ParseErrorKind::Interval { lo, hi },
        })
    }

    fn implies(&mut self) -> Result<Formula<Atom>, ParseError> {
        let lhs = self.until()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula<Atom>, ParseError> {
        let lhs = self.or()?;
        if self.is_temporal("U") {
            let iv = self.interval()?;
            let rhs = self.or()?;
            if self.is_temporal("U") {
                return Err(self.error("`U` is non-associative; parenthesize chained untils"));
            }
            return Ok(Formula::until(iv, lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula<Atom>, ParseError> {
        let mut children = vec![self.and()?];
        while *self.peek() == Tok::OrOr {
            self.bump();
            children.push(self.and()?);
        }
        Ok(Formula::or(children))
    }

    fn and(&mut self) -> Result<Formula<Atom>, ParseError> {
        let mut children = vec![self.unary()?];
        while *self.peek() == Tok::AndAnd {
            self.bump();
            children.push(self.unary()?);
        }
        Ok(Formula::and(children))
    }

    fn unary(&mut self) -> Result<Formula<Atom>, ParseError> {
        if *self.peek() == Tok::Bang {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        if self.is_temporal("G") {
            let iv = self.interval()?;
            return Ok(Formula::always(iv, self.unary()?));
        }
        if self.is_temporal("F") {
            let iv = self.interval()?;
            return Ok(Formula::eventually(iv, self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula<Atom>, ParseError> {
        let start = self.here().clone();
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let inner = self.implies()?;
                self.expect(Tok::RParen)?;
                Ok(inner)
            }
            Tok::Ident(word) if word == "true" && *self.peek_at(1) != Tok::Dot => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(word)
                if matches!(word.as_str(), "in" | "out" | "sep") && *self.peek_at(1) == Tok::LParen =>
            {
                self.bump();
                self.bump();
                let first = self.ident()?;
                self.expect(Tok::Comma)?;
                let second = self.ident()?;
                self.expect(Tok::RParen)?;
                let atom = match word.as_str() {
                    "in" => Atom::Inside { agent: first, region: second },
                    "out" => Atom::Outside { agent: first, region: second },
                    _ => {
                        self.expect(Tok::Ge)?;
                        let delta_min = self.signed_number()?;
                        Atom::Separation { first, second, delta_min }
                    }
                };
                atom.check().map_err(|e| syntax(start.line, start.column, e.to_string()))?;
                Ok(Formula::pred(atom))
            }
            Tok::Ident(_) | Tok::Num(_) | Tok::Minus | Tok::Plus => self.affine(),
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn affine(&mut self) -> Result<Formula<Atom>, ParseError> {
        let start = self.here().clone();
        let mut coeffs = [0.0; 3];
        let mut agent: Option<String> = None;
        let mut sign = match self.peek() {
            Tok::Minus => {
                self.bump();
                -1.0
            }
            Tok::Plus => {
                self.bump();
                1.0
            }
            _ => 1.0,
        };
        loop {
            let coeff = match *self.peek() {
                Tok::Num(v) => {
                    self.bump();
                    self.expect(Tok::Star)?;
                    v
                }
                _ => 1.0,
            };
            let at = self.here().clone();
            let name = self.ident()?;
            self.expect(Tok::Dot)?;
            let axis = match self.ident()?.as_str() {
                "px" => Axis::X,
                "py" => Axis::Y,
                "pz" => Axis::Z,
                other => {
                    return Err(syntax(
                        at.line,
                        at.column,
                        format!("unknown state component `{other}`; expected px, py or pz"),
                    ))
                }
            };
            match &agent {
                Some(existing) if *existing != name => {
                    return Err(syntax(
                        at.line,
                        at.column,
                        format!("affine predicate mixes agents `{existing}` and `{name}`"),
                    ))
                }
                Some(_) => {}
                None => agent = Some(name),
            }
            coeffs[axis.index()] += sign * coeff;
            sign = match self.peek() {
                Tok::Plus => 1.0,
                Tok::Minus => -1.0,
                _ => break,
            };
            self.bump();
        }
        self.expect(Tok::Ge)?;
        let bound = self.signed_number()?;
        let atom = Atom::Affine { agent: agent.expect("at least one term"), coeffs, offset: -bound };
        atom.check().map_err(|e| syntax(start.line, start.column, e.to_string()))?;
        Ok(Formula::pred(atom))
    }
}

/// Parses a mission formula. Agent and region names are not checked here;
/// see [`Formula::resolve`].
pub fn parse_formula(text: &str) -> Result<Formula<Atom>, ParseError> {
    let mut parser = Parser { tokens: lex(text)?, pos: 0 };
    let formula = parser.implies()?;
    if *parser.peek() != Tok::Eof {
        return Err(parser.unexpected("end of input"));
    }
    Ok(formula)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn parses_true() {
        assert_eq!(parse_formula("true").unwrap(), Formula::True);
    }

    #[test]
    fn parses_separation() {
        assert_eq!(
            parse_formula("G[0,10] sep(d1,d2) >= 0.5").unwrap(),
            Formula::always(iv(0.0, 10.0), Formula::pred(Atom::separation("d1", "d2", 0.5)))
        );
    }

    #[test]
    fn temporal_binds_tighter_than_and() {
        assert_eq!(
            parse_formula("F[0,20] in(d1,goal) && G[0,20] out(d1,obs)").unwrap(),
            Formula::And(vec![
                Formula::eventually(iv(0.0, 20.0), Formula::pred(Atom::inside("d1", "goal"))),
                Formula::always(iv(0.0, 20.0), Formula::pred(Atom::outside("d1", "obs"))),
            ])
        );
    }

    #[test]
    fn reversed_interval_is_an_interval_error() {
        let err = parse_formula("G[5,2] true").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Interval { lo: 5.0, hi: 2.0 });
        assert_eq!((err.line, err.column), (1, 1));
        let err = parse_formula("true && F[-1,2] true").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Interval { lo: -1.0, hi: 2.0 });
        assert_eq!(err.column, 9);
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_formula("true &&\n  in(d1,)").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Syntax(_)));
        assert_eq!((err.line, err.column), (2, 9));
        assert!(parse_formula("in(d1,goal) in(d1,goal)").is_err());
        let chained = parse_formula("true U[0,1] true U[0,1] true").unwrap_err();
        assert!(matches!(chained.kind, ParseErrorKind::Syntax(ref m) if m.contains("non-associative")));
        assert!(parse_formula("d1.vx >= 0").is_err());
        assert!(parse_formula("d1.px + d2.py >= 0").is_err());
        assert!(parse_formula("sep(d1,d1) >= 1").is_err());
        assert!(parse_formula("sep(d1,d2) >= 0").is_err());
        assert!(parse_formula("").is_err());
    }

    #[test]
    fn affine_terms_accumulate() {
        assert_eq!(
            parse_formula("-2*d1.px + d1.pz - 0.5*d1.px >= -3").unwrap(),
            Formula::pred(Atom::affine("d1", [-2.5, 0.0, 1.0], 3.0))
        );
    }

    #[test]
    fn operator_precedence() {
        let f = parse_formula("!true || true && true U[0,1] true => true").unwrap();
        let t = || Formula::<Atom>::True;
        let expected = Formula::implies(
            Formula::until(
                iv(0.0, 1.0),
                Formula::Or(vec![Formula::not(t()), Formula::And(vec![t(), t()])]),
                t(),
            ),
            t(),
        );
        assert_eq!(f, expected);
        let right = parse_formula("true => true => true").unwrap();
        assert_eq!(right, Formula::implies(t(), Formula::implies(t(), t())));
    }

    #[test]
    fn parentheses_keep_nested_aggregates() {
        let f = parse_formula("true && (true && true)").unwrap();
        assert_eq!(
            f,
            Formula::And(vec![Formula::True, Formula::And(vec![Formula::True, Formula::True])])
        );
        assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn keywords_can_still_name_agents() {
        let f = parse_formula("in(F,G) && G.pz >= 1").unwrap();
        assert_eq!(
            f,
            Formula::And(vec![
                Formula::pred(Atom::inside("F", "G")),
                Formula::pred(Atom::affine("G", [0.0, 0.0, 1.0], -1.0)),
            ])
        );
    }
}

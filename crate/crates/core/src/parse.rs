//! Surface syntax for series and polynomials.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr     := ["-"] term (("+" | "-") term)*
//! term     := factor ("*" factor)*
//! factor   := atom ["^" exponent]
//! atom     := number | "x" | "y" | "xi" | "(" expr ")"
//! exponent := int | "(" rat ")"
//! rat      := ["-"] int ["/" int]
//! number   := int | "(" rat ")"  (coefficients may be written 2, 1/2 via parens)
//! ```
//!
//! Fractional or negative exponents are only allowed on the bare variable x.
//! Lowering to a series requires exactly one xi term, linear in xi, with the
//! strictly smallest exponent; lowering to a polynomial rejects xi, negative
//! and fractional exponents.

use num::bigint::BigInt;
use num::traits::{One, Zero};

use crate::cyclo::{CycloNum, Rational};
use crate::dwps::{DwpsPoly, GenericParam, Semidegree};
use crate::error::{Error, Result};
use crate::laurent::LaurentBiPoly;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    X,
    Y,
    Xi,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

struct Lexer {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

fn lex(text: &str) -> Result<Lexer> {
    let mut toks = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tline, tcol) = (line, col);
        let bump = |c: char, line: &mut usize, col: &mut usize| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
                bump(c, &mut line, &mut col);
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                        bump(d, &mut line, &mut col);
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Num(digits.parse().unwrap()), tline, tcol));
            }
            'x' | 'y' => {
                chars.next();
                bump(c, &mut line, &mut col);
                if c == 'x' && chars.peek() == Some(&'i') {
                    chars.next();
                    bump('i', &mut line, &mut col);
                    toks.push((Tok::Xi, tline, tcol));
                } else if c == 'x' {
                    toks.push((Tok::X, tline, tcol));
                } else {
                    toks.push((Tok::Y, tline, tcol));
                }
            }
            '+' | '-' | '*' | '^' | '/' | '(' | ')' => {
                chars.next();
                bump(c, &mut line, &mut col);
                toks.push((
                    match c {
                        '+' => Tok::Plus,
                        '-' => Tok::Minus,
                        '*' => Tok::Star,
                        '^' => Tok::Caret,
                        '/' => Tok::Slash,
                        '(' => Tok::LParen,
                        _ => Tok::RParen,
                    },
                    tline,
                    tcol,
                ));
            }
            other => {
                return Err(Error::Parse {
                    line,
                    col,
                    msg: format!("unexpected character '{}'", other),
                });
            }
        }
    }
    Ok(Lexer { toks, pos: 0 })
}

impl Lexer {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|(_, l, c)| (*l, *c))
            .unwrap_or((1, 1))
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.here();
        Error::Parse { line, col, msg: msg.into() }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        match self.next() {
            Some(t) if t == tok => Ok(()),
            _ => {
                self.pos = self.pos.saturating_sub(1);
                Err(self.err(format!("expected {}", what)))
            }
        }
    }
}

/// Parsed expression, evaluated into the Laurent carrier. The xi atom enters
/// with the parameter name "xi".
fn parse_expr(lx: &mut Lexer) -> Result<LaurentBiPoly> {
    let mut acc = LaurentBiPoly::zero();
    let mut negate = match lx.peek() {
        Some(Tok::Minus) => {
            lx.next();
            true
        }
        _ => false,
    };
    loop {
        let term = parse_term(lx)?;
        acc = if negate { acc.sub(&term) } else { acc.add(&term) };
        match lx.peek() {
            Some(Tok::Plus) => {
                lx.next();
                negate = false;
            }
            Some(Tok::Minus) => {
                lx.next();
                negate = true;
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_term(lx: &mut Lexer) -> Result<LaurentBiPoly> {
    let mut acc = parse_factor(lx)?;
    loop {
        match lx.peek() {
            Some(Tok::Star) => {
                lx.next();
                acc = acc.mul(&parse_factor(lx)?);
            }
            Some(Tok::Slash) => {
                // Division only by nonzero constants, for rational coefficients.
                lx.next();
                let divisor = parse_factor(lx)?;
                let c = constant_of(&divisor)
                    .ok_or_else(|| lx.err("division is only defined by nonzero constants"))?;
                acc = acc.scale(&c.inverse().map_err(|_| lx.err("division by zero"))?);
            }
            _ => return Ok(acc),
        }
    }
}

fn constant_of(p: &LaurentBiPoly) -> Option<CycloNum> {
    let mut terms = p.terms();
    let ((x, y, xi), c) = terms.next()?;
    if terms.next().is_some() || !x.is_zero() || *y != 0 || !xi.is_constant() || c.is_zero() {
        return None;
    }
    Some(c.clone())
}

enum Atom {
    Poly(LaurentBiPoly),
    BareX,
}

fn parse_factor(lx: &mut Lexer) -> Result<LaurentBiPoly> {
    let atom = parse_atom(lx)?;
    if lx.peek() != Some(&Tok::Caret) {
        return Ok(match atom {
            Atom::BareX => LaurentBiPoly::var_x(),
            Atom::Poly(p) => p,
        });
    }
    lx.next();
    let exp = parse_exponent(lx)?;
    match atom {
        Atom::BareX => Ok(LaurentBiPoly::monomial(exp, 0, CycloNum::one())),
        Atom::Poly(p) => {
            if !exp.denom().is_one() || exp < Rational::zero() {
                Err(lx.err("fractional or negative exponents are allowed on x only"))
            } else {
                let e = num::traits::ToPrimitive::to_u32(&exp.to_integer())
                    .ok_or_else(|| lx.err("exponent too large"))?;
                Ok(p.pow(e))
            }
        }
    }
}

fn parse_atom(lx: &mut Lexer) -> Result<Atom> {
    match lx.next() {
        Some(Tok::Num(n)) => Ok(Atom::Poly(LaurentBiPoly::constant(
            CycloNum::from_rational(Rational::from_integer(n)),
        ))),
        Some(Tok::X) => Ok(Atom::BareX),
        Some(Tok::Y) => Ok(Atom::Poly(LaurentBiPoly::var_y())),
        Some(Tok::Xi) => Ok(Atom::Poly(LaurentBiPoly::param_monomial(
            Rational::zero(),
            &GenericParam::new("xi"),
            CycloNum::one(),
        ))),
        Some(Tok::LParen) => {
            let inner = parse_expr(lx)?;
            lx.expect(Tok::RParen, "closing parenthesis")?;
            Ok(Atom::Poly(inner))
        }
        _ => {
            lx.pos = lx.pos.saturating_sub(1);
            Err(lx.err("expected a number, variable, or parenthesized expression"))
        }
    }
}

fn parse_exponent(lx: &mut Lexer) -> Result<Rational> {
    match lx.next() {
        Some(Tok::Num(n)) => Ok(Rational::from_integer(n)),
        Some(Tok::Minus) => match lx.next() {
            Some(Tok::Num(n)) => Ok(-Rational::from_integer(n)),
            _ => Err(lx.err("expected an integer exponent")),
        },
        Some(Tok::LParen) => {
            let neg = if lx.peek() == Some(&Tok::Minus) {
                lx.next();
                true
            } else {
                false
            };
            let num = match lx.next() {
                Some(Tok::Num(n)) => n,
                _ => return Err(lx.err("expected an integer in the exponent")),
            };
            let den = if lx.peek() == Some(&Tok::Slash) {
                lx.next();
                match lx.next() {
                    Some(Tok::Num(n)) if !n.is_zero() => n,
                    _ => return Err(lx.err("expected a nonzero denominator")),
                }
            } else {
                BigInt::one()
            };
            lx.expect(Tok::RParen, "closing parenthesis in exponent")?;
            let r = Rational::new(num, den);
            Ok(if neg { -r } else { r })
        }
        _ => {
            lx.pos = lx.pos.saturating_sub(1);
            Err(lx.err("expected an exponent"))
        }
    }
}

fn parse_to_laurent(text: &str) -> Result<LaurentBiPoly> {
    let mut lx = lex(text)?;
    let out = parse_expr(&mut lx)?;
    if lx.peek().is_some() {
        return Err(lx.err("unexpected trailing input"));
    }
    Ok(out)
}

/// Parse a generic series: a sum of c*x^r terms plus exactly one xi*x^r term
/// whose exponent is strictly smallest.
pub fn parse_series(text: &str) -> Result<Semidegree> {
    let p = parse_to_laurent(text)?;
    let mut fixed: Vec<(Rational, CycloNum)> = Vec::new();
    let mut xi_term: Option<Rational> = None;
    for ((x, y, xi), c) in p.terms() {
        if *y > 0 {
            return Err(Error::precondition(
                "a series may not involve the variable y",
            ));
        }
        if xi.is_constant() {
            fixed.push((x.clone(), c.clone()));
            continue;
        }
        let deg: u32 = xi.params().map(|p| xi.degree_of(p)).sum();
        if deg != 1 || xi.params().count() != 1 {
            return Err(Error::precondition("the series must be linear in xi"));
        }
        // A rational coefficient on the xi term folds into the generic
        // parameter (rescaling a transcendental keeps it generic).
        if c.as_rational().is_none() {
            return Err(Error::precondition(
                "the xi term must have a rational coefficient",
            ));
        }
        if xi_term.replace(x.clone()).is_some() {
            return Err(Error::precondition("exactly one xi term required"));
        }
    }
    let Some(r) = xi_term else {
        return Err(Error::precondition("exactly one xi term required"));
    };
    let phi = DwpsPoly::new(fixed);
    if let Some(min) = phi.min_exponent() {
        if &r >= min {
            return Err(Error::precondition(
                "xi-term exponent must be strictly smallest",
            ));
        }
    }
    Semidegree::new(phi, r, "xi")
}

/// Parse a polynomial in C[x, y]: no xi, nonnegative integer exponents.
pub fn parse_poly(text: &str) -> Result<LaurentBiPoly> {
    let p = parse_to_laurent(text)?;
    if p.has_params() {
        return Err(Error::precondition("a polynomial may not involve xi"));
    }
    if !p.is_plane_polynomial() {
        return Err(Error::precondition(
            "polynomial exponents must be nonnegative integers",
        ));
    }
    Ok(p)
}

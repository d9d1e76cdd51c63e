//! Text grammar for polynomials.
//!
//! Integer coefficients, named variables (a lowercase letter optionally
//! followed by digits, e.g. `s`, `t`, `x0`), operators `+ - * ^` and
//! parentheses. `^` takes a nonnegative integer exponent. Formatting writes
//! the canonical form: terms in graded-lex descending order, `*` between
//! factors, `^` only for exponents above 1.

use super::{IntPoly, PolyError};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i128),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => { out.push((Tok::Plus, i)); i += 1 }
            '-' => { out.push((Tok::Minus, i)); i += 1 }
            '*' => { out.push((Tok::Star, i)); i += 1 }
            '^' => { out.push((Tok::Caret, i)); i += 1 }
            '(' => { out.push((Tok::LParen, i)); i += 1 }
            ')' => { out.push((Tok::RParen, i)); i += 1 }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let lit = &text[start..i];
                let v = lit.parse::<i128>().map_err(|_| PolyError::Syntax {
                    pos: start,
                    msg: format!("integer literal `{lit}` out of range"),
                })?;
                out.push((Tok::Int(v), start));
            }
            'a'..='z' => {
                let start = i;
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                return Err(PolyError::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    vars: &'a [&'a str],
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, p)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<IntPoly, PolyError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = int_add(&acc, &self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = int_add(&acc, &int_neg(&self.term()?)?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<IntPoly, PolyError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.bump();
            acc = int_mul(&acc, &self.unary()?)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<IntPoly, PolyError> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            return int_neg(&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<IntPoly, PolyError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let pos = self.here();
        match self.bump() {
            Some(Tok::Int(e)) if (0..=u32::MAX as i128).contains(&e) => int_pow(&base, e as u32),
            _ => Err(PolyError::Syntax { pos, msg: "expected a nonnegative integer exponent".into() }),
        }
    }

    fn atom(&mut self) -> Result<IntPoly, PolyError> {
        let pos = self.here();
        match self.bump() {
            Some(Tok::Int(v)) => IntPoly::new(self.vars.len(), vec![(vec![0; self.vars.len()], v)]),
            Some(Tok::Ident(name)) => {
                let Some(i) = self.vars.iter().position(|v| **v == name) else {
                    return Err(PolyError::UnknownVariable { name, pos });
                };
                let mut e = vec![0u32; self.vars.len()];
                e[i] = 1;
                IntPoly::new(self.vars.len(), vec![(e, 1)])
            }
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    return Err(PolyError::Syntax { pos, msg: "unclosed parenthesis".into() });
                }
                Ok(inner)
            }
            other => Err(PolyError::Syntax {
                pos,
                msg: match other {
                    None => "unexpected end of input".into(),
                    Some(_) => "expected a number, variable, or parenthesis".into(),
                },
            }),
        }
    }
}

fn int_add(a: &IntPoly, b: &IntPoly) -> Result<IntPoly, PolyError> {
    let mut terms = a.terms().to_vec();
    terms.extend(b.terms().iter().cloned());
    IntPoly::new(a.nvars(), terms)
}

fn int_neg(a: &IntPoly) -> Result<IntPoly, PolyError> {
    IntPoly::new(
        a.nvars(),
        a.terms().iter().map(|(e, c)| (e.clone(), -c)).collect(),
    )
}

fn int_mul(a: &IntPoly, b: &IntPoly) -> Result<IntPoly, PolyError> {
    let mut terms = Vec::with_capacity(a.terms().len() * b.terms().len());
    for (ea, ca) in a.terms() {
        for (eb, cb) in b.terms() {
            let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            let c = ca.checked_mul(*cb).ok_or(PolyError::CoefficientOverflow)?;
            terms.push((e, c));
        }
    }
    IntPoly::new(a.nvars(), terms)
}

fn int_pow(a: &IntPoly, e: u32) -> Result<IntPoly, PolyError> {
    let mut acc = IntPoly::new(a.nvars(), vec![(vec![0; a.nvars()], 1)])?;
    for _ in 0..e {
        acc = int_mul(&acc, a)?;
    }
    Ok(acc)
}

pub(super) fn parse(text: &str, vars: &[&str]) -> Result<IntPoly, PolyError> {
    let toks = tokenize(text)?;
    let mut parser = Parser { toks, pos: 0, vars, end: text.len() };
    let poly = parser.expr()?;
    if parser.pos != parser.toks.len() {
        return Err(PolyError::Syntax { pos: parser.here(), msg: "trailing input".into() });
    }
    Ok(poly)
}

fn format_monomial(e: &[u32], vars: &[&str]) -> String {
    let mut parts = Vec::new();
    for (j, &exp) in e.iter().enumerate() {
        match exp {
            0 => {}
            1 => parts.push(vars[j].to_string()),
            _ => parts.push(format!("{}^{}", vars[j], exp)),
        }
    }
    parts.join("*")
}

/// Canonical text for integer-coefficient terms (assumed normalized).
pub fn format_int_terms(terms: &[(Vec<u32>, i128)], vars: &[&str]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (e, c)) in terms.iter().enumerate() {
        let mag = c.unsigned_abs();
        if k == 0 {
            if *c < 0 {
                out.push('-');
            }
        } else {
            out.push_str(if *c < 0 { " - " } else { " + " });
        }
        let mono = format_monomial(e, vars);
        if mono.is_empty() {
            out.push_str(&mag.to_string());
        } else if mag == 1 {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{mag}*{mono}"));
        }
    }
    out
}

/// Canonical text for residue-coefficient terms (assumed normalized).
pub fn format_terms(terms: &[(Vec<u32>, u64)], vars: &[&str]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    terms
        .iter()
        .map(|(e, c)| {
            let mono = format_monomial(e, vars);
            if mono.is_empty() {
                c.to_string()
            } else if *c == 1 {
                mono
            } else {
                format!("{c}*{mono}")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

#[cfg(test)]
mod tests {
    use super::super::{IntPoly, MultiPoly, PolyError};
    use crate::field::Fp;

    #[test]
    fn parse_basic_shapes() {
        let vars = ["x0", "x1", "x2"];
        let f = IntPoly::parse("x0^2 + 3*x1*x2", &vars).unwrap();
        assert_eq!(f.terms().len(), 2);
        assert_eq!(f.format(&vars), "x0^2 + 3*x1*x2");

        let z = IntPoly::parse("x0 - x0", &vars).unwrap();
        assert!(z.is_zero());
        assert_eq!(z.format(&vars), "0");
    }

    #[test]
    fn unknown_variable_reports_position() {
        let err = IntPoly::parse("x0 + x9", &["x0", "x1", "x2"]).unwrap_err();
        assert_eq!(err, PolyError::UnknownVariable { name: "x9".into(), pos: 5 });
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = IntPoly::parse("x0 + ", &["x0"]).unwrap_err();
        assert!(matches!(err, PolyError::Syntax { pos: 5, .. }));
        let err = IntPoly::parse("x0 $ 2", &["x0"]).unwrap_err();
        assert!(matches!(err, PolyError::Syntax { pos: 3, .. }));
        let err = IntPoly::parse("(x0", &["x0"]).unwrap_err();
        assert!(matches!(err, PolyError::Syntax { .. }));
        let err = IntPoly::parse("x0^t", &["x0", "t"]).unwrap_err();
        assert!(matches!(err, PolyError::Syntax { .. }));
    }

    #[test]
    fn negatives_and_parens() {
        let vars = ["s", "t"];
        let f = IntPoly::parse("-(s - t)^2 + s^2", &vars).unwrap();
        // -(s^2 - 2st + t^2) + s^2 = 2st - t^2
        assert_eq!(f.format(&vars), "2*s*t - t^2");
    }

    #[test]
    fn reduction_mod_small_prime() {
        let fp = Fp::new(7);
        let f = MultiPoly::parse("7*s + 8*t - 1", &["s", "t"], &fp).unwrap();
        assert_eq!(f.format(&["s", "t"]), "t + 6");
    }

    #[test]
    fn format_parse_roundtrip_is_identity() {
        let vars = ["x0", "x1", "x2"];
        for text in [
            "x0^4 - 12*x0*x1*x2 + 3",
            "0",
            "-x0 + x1",
            "5",
            "x0*x1^3 - x2^4 + x1",
        ] {
            let f = IntPoly::parse(text, &vars).unwrap();
            let printed = f.format(&vars);
            let again = IntPoly::parse(&printed, &vars).unwrap();
            assert_eq!(f, again);
            assert_eq!(printed, again.format(&vars));
        }
    }
}

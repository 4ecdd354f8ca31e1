//! Recursive-descent parser for the surface syntax
//!
//! ```text
//! formula := disj
//! disj    := conj ("|" conj)*
//! conj    := unary ("&" unary)*
//! unary   := "<>" unary | "[]" unary | "~" unary | atom | "true" | "false" | "(" formula ")"
//! ```
//!
//! General negation is accepted and pushed down to the atoms immediately.

use super::{Formula, PropSignature};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Dia,
    Box,
    Not,
    And,
    Or,
    LParen,
    RParen,
    True,
    False,
    Ident(String),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'<' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Token::Dia
            }
            b'[' if bytes.get(i + 1) == Some(&b']') => {
                i += 2;
                Token::Box
            }
            b'~' => {
                i += 1;
                Token::Not
            }
            b'&' => {
                i += 1;
                Token::And
            }
            b'|' => {
                i += 1;
                Token::Or
            }
            b'(' => {
                i += 1;
                Token::LParen
            }
            b')' => {
                i += 1;
                Token::RParen
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                match &text[start..i] {
                    "true" => Token::True,
                    "false" => Token::False,
                    name => Token::Ident(name.to_string()),
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap();
                return Err(Error::Syntax { pos: i, msg: format!("unexpected character `{ch}`") });
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    sig: &'a PropSignature,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    // `negated` tracks the polarity so negation never reaches the AST.
    fn disj(&mut self, negated: bool) -> Result<Formula> {
        let mut parts = vec![self.conj(negated)?];
        while self.peek() == Some(&Token::Or) {
            self.bump();
            parts.push(self.conj(negated)?);
        }
        Ok(if negated { Formula::and(parts) } else { Formula::or(parts) })
    }

    fn conj(&mut self, negated: bool) -> Result<Formula> {
        let mut parts = vec![self.unary(negated)?];
        while self.peek() == Some(&Token::And) {
            self.bump();
            parts.push(self.unary(negated)?);
        }
        Ok(if negated { Formula::or(parts) } else { Formula::and(parts) })
    }

    fn unary(&mut self, negated: bool) -> Result<Formula> {
        let offset = self.offset();
        match self.bump() {
            Some(Token::Dia) => {
                let c = self.unary(negated)?;
                Ok(if negated { Formula::boxed(c) } else { Formula::dia(c) })
            }
            Some(Token::Box) => {
                let c = self.unary(negated)?;
                Ok(if negated { Formula::dia(c) } else { Formula::boxed(c) })
            }
            Some(Token::Not) => self.unary(!negated),
            Some(Token::True) => Ok(if negated { Formula::Bot } else { Formula::Top }),
            Some(Token::False) => Ok(if negated { Formula::Top } else { Formula::Bot }),
            Some(Token::Ident(name)) => {
                if !self.sig.contains(&name) {
                    return Err(Error::UnknownProp(name));
                }
                Ok(if negated { Formula::NegAtom(name) } else { Formula::Atom(name) })
            }
            Some(Token::LParen) => {
                let inner = self.disj(negated)?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => Err(Error::Syntax { pos: self.offset_of_prev(), msg: "expected `)`".into() }),
                }
            }
            Some(t) => Err(Error::Syntax { pos: offset, msg: format!("unexpected token {t:?}") }),
            None => Err(Error::Syntax { pos: offset, msg: "unexpected end of input".into() }),
        }
    }

    fn offset_of_prev(&self) -> usize {
        self.tokens.get(self.pos.saturating_sub(1)).map(|(o, _)| *o).unwrap_or(self.end)
    }
}

/// Parses `text` into a formula in negation normal form over `sig`.
pub fn parse_formula(text: &str, sig: &PropSignature) -> Result<Formula> {
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0, end: text.len(), sig };
    let phi = parser.disj(false)?;
    if parser.pos < parser.tokens.len() {
        return Err(Error::Syntax { pos: parser.offset(), msg: "trailing input".into() });
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> PropSignature {
        PropSignature::new(["p", "q", "r"]).unwrap()
    }

    #[test]
    fn parses_examples() {
        let s = sig();
        assert_eq!(
            parse_formula("p & (q | r)", &s).unwrap(),
            Formula::And(vec![Formula::atom("p"), Formula::Or(vec![Formula::atom("q"), Formula::atom("r")])])
        );
        assert_eq!(parse_formula("~(<>p)", &s).unwrap(), Formula::boxed(Formula::neg_atom("p")));
        assert_eq!(parse_formula("~~p", &s).unwrap(), Formula::atom("p"));
    }

    #[test]
    fn pushes_negation_through_everything() {
        let s = sig();
        assert_eq!(parse_formula("~(p & q)", &s).unwrap(), parse_formula("~p | ~q", &s).unwrap());
        assert_eq!(parse_formula("~[]p", &s).unwrap(), parse_formula("<>~p", &s).unwrap());
        assert_eq!(parse_formula("~true", &s).unwrap(), Formula::Bot);
        assert_eq!(parse_formula("~(p | ~<>q)", &s).unwrap(), parse_formula("~p & <>q", &s).unwrap());
    }

    #[test]
    fn precedence_and_flattening() {
        let s = sig();
        let phi = parse_formula("p | q & r | p", &s).unwrap();
        assert_eq!(
            phi,
            Formula::Or(vec![
                Formula::atom("p"),
                Formula::And(vec![Formula::atom("q"), Formula::atom("r")]),
                Formula::atom("p")
            ])
        );
        assert_eq!(parse_formula("(p & q) & r", &s).unwrap(), parse_formula("p & q & r", &s).unwrap());
        assert_eq!(parse_formula("<>[]p", &s).unwrap(), Formula::dia(Formula::boxed(Formula::atom("p"))));
    }

    #[test]
    fn errors() {
        let s = sig();
        assert!(matches!(parse_formula("p & ", &s), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_formula("(p", &s), Err(Error::Syntax { .. })));
        assert!(matches!(parse_formula("p q", &s), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_formula("p # q", &s), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse_formula("s", &s), Err(Error::UnknownProp(n)) if n == "s"));
        assert!(matches!(parse_formula("", &s), Err(Error::Syntax { .. })));
    }
}

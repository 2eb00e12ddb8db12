//! Recursive-descent parser for the surface syntax
//!
//! ```text
//! F := var | ~F | (F&F) | (F|F) | (F>F)
//! ```
//!
//! Precedence is `~` > `&` > `|` > `>`; `&` and `|` associate to the left and
//! `>` to the right. Redundant parentheses and ASCII whitespace are accepted.

use crate::error::{Error, Result};
use crate::logic::{Formula, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tok {
    Var(Var),
    Not,
    And,
    Or,
    Implies,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::with_capacity(text.len());
    for (offset, c) in text.char_indices() {
        let tok = match c {
            '~' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '>' => Tok::Implies,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_whitespace() => continue,
            c => match Var::from_char(c) {
                Some(v) => Tok::Var(v),
                None => return Err(Error::UnknownSymbol { offset, symbol: c }),
            },
        };
        out.push((offset, tok));
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<Tok> {
        self.toks.get(self.pos).map(|t| t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            offset: self.offset(),
            message: message.into(),
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(Tok::Implies) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(Tok::Or) {
            self.pos += 1;
            lhs = Formula::or(lhs, self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(Tok::And) {
            self.pos += 1;
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(Tok::Var(v)) => {
                self.pos += 1;
                Ok(Formula::Var(v))
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.implication()?;
                if self.peek() != Some(Tok::RParen) {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(_) => Err(self.error("expected a variable, '~' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

/// Parses one formula; the whole input must be consumed.
pub fn parse(text: &str) -> Result<Formula> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let f = parser.implication()?;
    if parser.pos != parser.toks.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(f)
}

impl std::str::FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

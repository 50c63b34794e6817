//! Element literal syntax: atoms `a0`, sets `{e1, e2, ...}`, empty set `{}`.

use std::str::FromStr;

use super::{Element, HfaError};
use crate::atoms_perms::Atom;

/// Parses one element literal starting at byte `pos` of `src`, returning the
/// element and the byte offset just past it. Leading whitespace is skipped.
pub fn parse_element_prefix(src: &str, pos: usize) -> Result<(Element, usize), HfaError> {
    let mut p = LiteralParser { src, pos };
    let e = p.element()?;
    Ok((e, p.pos))
}

struct LiteralParser<'a> {
    src: &'a str,
    pos: usize,
}

impl LiteralParser<'_> {
    fn err(&self, message: impl Into<String>) -> HfaError {
        HfaError::Literal {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn element(&mut self) -> Result<Element, HfaError> {
        self.skip_ws();
        match self.peek() {
            Some('{') => {
                self.pos += 1;
                let mut members = Vec::new();
                self.skip_ws();
                if self.peek() == Some('}') {
                    self.pos += 1;
                    return Ok(Element::empty());
                }
                loop {
                    members.push(self.element()?);
                    self.skip_ws();
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some('}') => {
                            self.pos += 1;
                            return Ok(Element::set(members));
                        }
                        _ => return Err(self.err("expected `,` or `}` in set literal")),
                    }
                }
            }
            Some('a') => {
                let rest = &self.src[self.pos..];
                let len = 1 + rest[1..]
                    .find(|c: char| !c.is_ascii_alphanumeric())
                    .unwrap_or(rest.len() - 1);
                let word = &rest[..len];
                let atom: Atom = word
                    .parse()
                    .map_err(|_| self.err(format!("unknown element literal `{word}`")))?;
                self.pos += len;
                Ok(Element::atom(atom))
            }
            Some(c) => Err(self.err(format!("unexpected `{c}` in element literal"))),
            None => Err(self.err("unexpected end of element literal")),
        }
    }
}

impl FromStr for Element {
    type Err = HfaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (e, end) = parse_element_prefix(s, 0)?;
        if !s[end..].trim().is_empty() {
            return Err(HfaError::Literal {
                offset: end,
                message: "trailing input after element literal".into(),
            });
        }
        Ok(e)
    }
}

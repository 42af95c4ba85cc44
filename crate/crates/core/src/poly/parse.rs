//! Text format for polynomials and polynomial files.
//!
//! A file starts with a `vars: x,y,z` header listing variables in ascending
//! order. Each further non-empty line holds one polynomial; `#` starts a
//! comment, a line `---` separates sections and a leading `!=` marks an
//! inequation.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Polynomial, VariableOrder};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

struct Lexed {
    tok: Tok,
    col: usize,
}

fn lex(s: &str, line: usize, col0: usize) -> Result<Vec<Lexed>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = col0 + i;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            d if d.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Lexed {
                    tok: Tok::Num(text.parse().expect("digits")),
                    col,
                });
                continue;
            }
            a if a.is_alphabetic() || a == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Lexed {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    col,
                });
                continue;
            }
            other => {
                return Err(Error::Parse {
                    line,
                    column: col,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push(Lexed { tok, col });
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Lexed>,
    pos: usize,
    order: &'a Arc<VariableOrder>,
    line: usize,
    end_col: usize,
}

impl Parser<'_> {
    fn err<T>(&self, message: impl Into<String>) -> Result<T> {
        let column = self.toks.get(self.pos).map(|t| t.col).unwrap_or(self.end_col);
        Err(Error::Parse {
            line: self.line,
            column,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let d = self.unary()?;
                    match d.constant_value() {
                        Some(c) if !c.is_zero() => acc = acc.scale(&c.recip()),
                        Some(_) => return self.err("division by zero"),
                        None => return self.err("division is only allowed by constants"),
                    }
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    acc = &acc * &self.power()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(-&self.unary()?)
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    let e: u32 = match u32::try_from(&n) {
                        Ok(e) => e,
                        Err(_) => return self.err("exponent too large"),
                    };
                    self.pos += 1;
                    Ok(base.pow(e))
                }
                _ => self.err("expected a non-negative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(Polynomial::constant(self.order, BigRational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => match self.order.index_of(&name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(Polynomial::var(self.order, i))
                }
                None => self.err(format!("unknown variable `{name}`")),
            },
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if let Some(Tok::RParen) = self.peek() {
                    self.pos += 1;
                    Ok(inner)
                } else {
                    self.err("expected `)`")
                }
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_at(s: &str, order: &Arc<VariableOrder>, line: usize, col0: usize) -> Result<Polynomial> {
    let toks = lex(s, line, col0)?;
    if toks.is_empty() {
        return Err(Error::Parse {
            line,
            column: col0,
            message: "empty polynomial".into(),
        });
    }
    let mut p = Parser {
        toks,
        pos: 0,
        order,
        line,
        end_col: col0 + s.chars().count(),
    };
    let poly = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(poly)
}

/// Parses a single polynomial such as `2*x^2*y - 1/3`.
pub fn parse_polynomial(s: &str, order: &Arc<VariableOrder>) -> Result<Polynomial> {
    parse_at(s, order, 1, 1)
}

/// One `---`-separated block of a polynomial file.
#[derive(Debug, Clone, Default)]
pub struct Section {
    pub equations: Vec<Polynomial>,
    pub inequations: Vec<Polynomial>,
}

/// Parsed polynomial file.
#[derive(Debug, Clone)]
pub struct PolynomialFile {
    pub order: Arc<VariableOrder>,
    pub sections: Vec<Section>,
}

impl PolynomialFile {
    /// All equations of all sections, in file order.
    pub fn equations(&self) -> Vec<Polynomial> {
        self.sections.iter().flat_map(|s| s.equations.iter().cloned()).collect()
    }

    pub fn inequations(&self) -> Vec<Polynomial> {
        self.sections
            .iter()
            .flat_map(|s| s.inequations.iter().cloned())
            .collect()
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses the file format. When `order` is given the header may be omitted.
pub fn parse_polynomial_file(text: &str, order: Option<&Arc<VariableOrder>>) -> Result<PolynomialFile> {
    let mut order = order.cloned();
    let mut sections = vec![Section::default()];
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = strip_comment(raw);
        let trimmed = content.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix("vars:") {
            let names: Vec<&str> = rest.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
            let parsed = VariableOrder::new(&names).map_err(|e| Error::Parse {
                line: line_no,
                column: 1,
                message: e.to_string(),
            })?;
            if let Some(existing) = &order {
                if existing.names() != parsed.names() {
                    return Err(Error::Parse {
                        line: line_no,
                        column: 1,
                        message: "header disagrees with the requested variable order".into(),
                    });
                }
            } else {
                order = Some(parsed);
            }
            continue;
        }
        let order = order.as_ref().ok_or(Error::Parse {
            line: line_no,
            column: 1,
            message: "missing `vars:` header".into(),
        })?;
        if trimmed == "---" {
            sections.push(Section::default());
            continue;
        }
        let lead = content.len() - content.trim_start().len();
        let section = sections.last_mut().expect("non-empty");
        if let Some(rest) = trimmed.strip_prefix("!=") {
            let col = content[..lead].chars().count() + 3;
            section.inequations.push(parse_at(rest, order, line_no, col)?);
        } else {
            let col = content[..lead].chars().count() + 1;
            section.equations.push(parse_at(trimmed, order, line_no, col)?);
        }
    }
    let order = match order {
        Some(o) => o,
        None => {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "missing `vars:` header".into(),
            })
        }
    };
    if sections.len() > 1
        && sections
            .last()
            .map(|s| s.equations.is_empty() && s.inequations.is_empty())
            .unwrap_or(false)
    {
        sections.pop();
    }
    Ok(PolynomialFile { order, sections })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn parses_spec_style_input() {
        let o = VariableOrder::new(&["x", "y", "z"]).unwrap();
        let p = parse_polynomial("2*x^2*y - 1/3", &o).unwrap();
        assert_eq!(p.num_terms(), 2);
        let pt = [rat(1), rat(1), rat(0)];
        assert_eq!(p.evaluate(&pt).unwrap(), BigRational::new(5.into(), 3.into()));
        let q = parse_polynomial("2x^2 y - (1/3)", &o).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn parse_errors_cite_position() {
        let o = VariableOrder::new(&["x"]).unwrap();
        match parse_polynomial("x + w", &o) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 5)),
            other => panic!("unexpected {other:?}"),
        }
        let text = "vars: x,y\nx*y\n  y + $\n";
        match parse_polynomial_file(text, None) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 7)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn file_sections_and_inequations() {
        let text = "# demo\nvars: x, y\nx^2 - 1 # first\ny - x\n---\nx\n!= y\n";
        let f = parse_polynomial_file(text, None).unwrap();
        assert_eq!(f.order.names(), &["x", "y"]);
        assert_eq!(f.sections.len(), 2);
        assert_eq!(f.sections[0].equations.len(), 2);
        assert_eq!(f.sections[1].inequations.len(), 1);
    }
}

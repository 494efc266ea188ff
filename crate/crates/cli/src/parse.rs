//! Parsers for the expression grammar, module vectors, and prime lists.
//! Every error carries the offending token and its byte offset.

use std::collections::BTreeSet;
use std::fmt;

use semistar_core::model::{Comp, ModuleVec, PrimeSet, Subset};
use semistar_core::semistar::expr::{b_op, t_op, w_op, SemistarExpr};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

struct Scanner<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(src: &'a str) -> Scanner<'a> {
        Scanner { src, pos: 0 }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(|c: char| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            self.err(format!("expected '{c}', found '{}'", self.rest_token()))
        }
    }

    fn try_eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    /// The token starting at the cursor, for error messages.
    fn rest_token(&self) -> &str {
        let rest = self.src[self.pos..].trim_start();
        if rest.is_empty() {
            return "end of input";
        }
        let end = rest
            .char_indices()
            .find(|&(_, c)| c.is_whitespace() || "(){}<>,:".contains(c))
            .map(|(i, _)| i.max(1))
            .unwrap_or(rest.len());
        &rest[..end]
    }

    fn ident(&mut self) -> Result<&'a str, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        if start == self.pos {
            self.err(format!("expected an operation name, found '{}'", self.rest_token()))
        } else {
            Ok(&self.src[start..self.pos])
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.src[self.pos..].starts_with('-') {
            self.pos += 1;
        }
        while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text = &self.src[start..self.pos];
        if text.is_empty() || text == "-" {
            self.pos = start;
            return self.err(format!("expected an integer, found '{}'", self.rest_token()));
        }
        text.parse::<i64>().or_else(|_| {
            self.pos = start;
            self.err(format!("integer out of range: '{text}'"))
        })
    }

    /// `{i,j,...}` with 1-based indices bounded by the model.
    fn subset(&mut self, k: u8) -> Result<Subset, ParseError> {
        self.eat('{')?;
        let mut out = Subset::EMPTY;
        if !self.try_eat('}') {
            loop {
                let at = self.pos;
                let i = self.integer()?;
                if i < 1 || i > k as i64 {
                    self.pos = at;
                    return self.err(format!("index {i} outside 1..={k}"));
                }
                out = out.with((i - 1) as u8);
                if self.try_eat('}') {
                    break;
                }
                self.eat(',')?;
            }
        }
        Ok(out)
    }

    /// `{(0),m1,...}`; `0` is accepted for the zero ideal too.
    fn prime_set(&mut self, k: u8) -> Result<PrimeSet, ParseError> {
        self.eat('{')?;
        let mut zero = false;
        let mut maxes = Subset::EMPTY;
        if !self.try_eat('}') {
            loop {
                match self.peek() {
                    Some('(') => {
                        self.eat('(')?;
                        let n = self.integer()?;
                        if n != 0 {
                            return self.err(format!("unknown prime ({n}); only (0) is a prime here"));
                        }
                        self.eat(')')?;
                        zero = true;
                    }
                    Some('0') => {
                        self.eat('0')?;
                        zero = true;
                    }
                    Some('m') => {
                        self.eat('m')?;
                        let at = self.pos;
                        let i = self.integer()?;
                        if i < 1 || i > k as i64 {
                            self.pos = at;
                            return self.err(format!("maximal ideal m{i} outside m1..=m{k}"));
                        }
                        maxes = maxes.with((i - 1) as u8);
                    }
                    _ => {
                        return self.err(format!(
                            "expected a prime ((0) or m1..m{k}), found '{}'",
                            self.rest_token()
                        ))
                    }
                }
                if self.try_eat('}') {
                    break;
                }
                self.eat(',')?;
            }
        }
        Ok(PrimeSet::new(zero, maxes))
    }

    fn expr_list(&mut self, k: u8) -> Result<Vec<SemistarExpr>, ParseError> {
        self.eat('(')?;
        let mut out = vec![self.expr(k)?];
        while self.try_eat(',') {
            out.push(self.expr(k)?);
        }
        self.eat(')')?;
        Ok(out)
    }

    fn expr(&mut self, k: u8) -> Result<SemistarExpr, ParseError> {
        self.skip_ws();
        let at = self.pos;
        let name = self.ident()?;
        match name {
            "d" => Ok(SemistarExpr::Identity),
            "e" => Ok(SemistarExpr::FieldOp),
            "v" => Ok(SemistarExpr::Divisorial),
            "t" => Ok(t_op()),
            "w" => Ok(w_op()),
            "b" => Ok(b_op(k)),
            "wedge" => {
                let t = self.subset(k)?;
                let fam: BTreeSet<Subset> = [t].into_iter().collect();
                Ok(SemistarExpr::Wedge(fam))
            }
            "s" => {
                let ps = self.prime_set(k)?;
                Ok(SemistarExpr::Spectral(ps))
            }
            "ft" => {
                self.eat('(')?;
                let inner = self.expr(k)?;
                self.eat(')')?;
                Ok(SemistarExpr::FiniteType(Box::new(inner)))
            }
            "stable" => {
                self.eat('(')?;
                let inner = self.expr(k)?;
                self.eat(')')?;
                Ok(SemistarExpr::StableClosure(Box::new(inner)))
            }
            "inf" => Ok(SemistarExpr::Inf(self.expr_list(k)?)),
            "sup" => Ok(SemistarExpr::Sup(self.expr_list(k)?)),
            "compose" => Ok(SemistarExpr::Compose(self.expr_list(k)?)),
            "locfin" => {
                self.eat('(')?;
                let mut pairs = Vec::new();
                loop {
                    let t_at = self.pos;
                    let t = self.subset(k)?;
                    if t.is_empty() {
                        self.pos = t_at;
                        return self.err("the overring of a transfer needs at least one index");
                    }
                    self.eat(':')?;
                    // The inner operation lives on the submodel cut out by
                    // the overring, so its indices range over 1..=|T|.
                    let inner = self.expr(t.len() as u8)?;
                    pairs.push((t, inner));
                    if self.try_eat(')') {
                        break;
                    }
                    self.eat(',')?;
                }
                Ok(SemistarExpr::LocFin(pairs))
            }
            other => {
                self.pos = at;
                self.err(format!("unknown operation '{other}'"))
            }
        }
    }

    fn module(&mut self, k: u8) -> Result<ModuleVec, ParseError> {
        self.eat('<')?;
        let mut comps = Vec::new();
        loop {
            self.skip_ws();
            if self.src[self.pos..].starts_with('K') {
                self.pos += 1;
                comps.push(Comp::Full);
            } else {
                comps.push(Comp::Exp(self.integer()?));
            }
            if self.try_eat('>') {
                break;
            }
            self.eat(',')?;
        }
        if comps.len() != k as usize {
            return self.err(format!(
                "module has {} components, the model has {k}",
                comps.len()
            ));
        }
        Ok(ModuleVec::new(comps))
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            self.err(format!("trailing input '{}'", self.rest_token()))
        }
    }
}

pub fn parse_expr(src: &str, k: u8) -> Result<SemistarExpr, ParseError> {
    let mut sc = Scanner::new(src);
    let e = sc.expr(k)?;
    sc.finish()?;
    Ok(e)
}

pub fn parse_module(src: &str, k: u8) -> Result<ModuleVec, ParseError> {
    let mut sc = Scanner::new(src);
    let m = sc.module(k)?;
    sc.finish()?;
    Ok(m)
}

pub fn parse_primes(src: &str) -> Result<Vec<u64>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in src.split(',') {
        let token = part.trim();
        match token.parse::<u64>() {
            Ok(p) => out.push(p),
            Err(_) => {
                return Err(ParseError {
                    offset,
                    message: format!("'{token}' is not a number"),
                })
            }
        }
        offset += part.len() + 1;
    }
    Ok(out)
}

pub fn parse_checks(src: &str) -> Vec<String> {
    src.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

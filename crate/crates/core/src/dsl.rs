//! Text syntax for groups.
//!
//! ```text
//! spec := term ('x' term)*
//! term := NAME '(' [int (',' int)*] ')'
//!       | 'perm' '(' degree ';' [generator (',' generator)*] ')'
//! generator := cycle+          cycle := '(' int* ')'
//! ```
//!
//! Cycle points are 1-based. `×` is accepted in place of `x`, so group
//! labels produced by [`crate::group::direct_product`] parse back.

use std::fmt;

use crate::catalog::construct_named;
use crate::error::{Error, Result};
use crate::group::{direct_product, GroupTable};
use crate::perm::{close_permutation_generators, from_cycles};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Named {
        name: String,
        params: Vec<u64>,
    },
    /// Generators, each a product of cycles over 1-based points.
    Perm {
        degree: usize,
        generators: Vec<Vec<Vec<usize>>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    pub factors: Vec<Term>,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Named { name, params } => {
                let params: Vec<String> = params.iter().map(u64::to_string).collect();
                write!(f, "{name}({})", params.join(", "))
            }
            Term::Perm { degree, generators } => {
                write!(f, "perm({degree};")?;
                for (i, generator) in generators.iter().enumerate() {
                    f.write_str(if i == 0 { " " } else { ", " })?;
                    if generator.is_empty() {
                        f.write_str("()")?;
                    }
                    for cycle in generator {
                        let pts: Vec<String> = cycle.iter().map(usize::to_string).collect();
                        write!(f, "({})", pts.join(" "))?;
                    }
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, term) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" x ")?;
            }
            write!(f, "{term}")?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: impl fmt::Display) -> Error {
        Error::input(format!("syntax error at position {}: {msg}", self.pos))
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(match self.peek() {
                Some(found) => self.error(format!("expected '{c}', found '{found}'")),
                None => self.error(format!("expected '{c}', found end of input")),
            })
        }
    }

    fn name(&mut self) -> Result<String> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .char_indices()
            .find(|&(i, c)| !(c.is_ascii_alphabetic() || (i > 0 && c.is_ascii_digit())))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 {
            return Err(self.error("expected a group name"));
        }
        self.pos += len;
        Ok(rest[..len].to_string())
    }

    fn int(&mut self) -> Result<u64> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .find(|c: char| !c.is_ascii_digit())
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.error("expected an integer"));
        }
        let value = rest[..len]
            .parse()
            .map_err(|_| self.error("integer out of range"))?;
        self.pos += len;
        Ok(value)
    }

    fn term(&mut self) -> Result<Term> {
        let name = self.name()?;
        self.expect('(')?;
        if name == "perm" {
            let degree = self.int()? as usize;
            self.expect(';')?;
            let mut generators = Vec::new();
            if self.peek() != Some(')') {
                loop {
                    generators.push(self.generator()?);
                    if !self.eat(',') {
                        break;
                    }
                }
            }
            self.expect(')')?;
            return Ok(Term::Perm { degree, generators });
        }
        let mut params = Vec::new();
        if self.peek() != Some(')') {
            loop {
                params.push(self.int()?);
                if !self.eat(',') {
                    break;
                }
            }
        }
        self.expect(')')?;
        Ok(Term::Named { name, params })
    }

    fn generator(&mut self) -> Result<Vec<Vec<usize>>> {
        if self.peek() != Some('(') {
            return Err(self.error("expected a cycle"));
        }
        let mut cycles = Vec::new();
        while self.eat('(') {
            let mut cycle = Vec::new();
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                cycle.push(self.int()? as usize);
            }
            self.expect(')')?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
        }
        Ok(cycles)
    }

    fn spec(&mut self) -> Result<GroupSpec> {
        let mut factors = vec![self.term()?];
        while self.eat('x') || self.eat('×') {
            factors.push(self.term()?);
        }
        if let Some(c) = self.peek() {
            return Err(self.error(format!("unexpected '{c}'")));
        }
        Ok(GroupSpec { factors })
    }
}

impl GroupSpec {
    pub fn parse(text: &str) -> Result<GroupSpec> {
        Parser { text, pos: 0 }.spec()
    }

    /// Builds every factor and folds the direct product from the left. The
    /// result is labelled with the canonical spec text.
    pub fn build(&self, max_order: usize) -> Result<GroupTable> {
        let mut acc: Option<GroupTable> = None;
        for term in &self.factors {
            let factor = term.build(max_order)?;
            acc = Some(match acc {
                None => factor,
                Some(left) => direct_product(&left, &factor, max_order)?,
            });
        }
        Ok(acc
            .expect("a spec has at least one factor")
            .with_label(self.to_string()))
    }
}

impl Term {
    pub fn build(&self, max_order: usize) -> Result<GroupTable> {
        match self {
            Term::Named { name, params } => construct_named(name, params, max_order),
            Term::Perm { degree, generators } => {
                if *degree == 0 {
                    return Err(Error::input("permutation degree must be positive"));
                }
                let perms = generators
                    .iter()
                    .map(|cycles| from_cycles(*degree, cycles))
                    .collect::<Result<Vec<_>>>()?;
                close_permutation_generators(*degree, &perms, max_order)
            }
        }
    }
}

/// Parses and constructs a group from spec text.
pub fn parse_group_spec(text: &str, max_order: usize) -> Result<GroupTable> {
    GroupSpec::parse(text)?.build(max_order)
}

/// A catalog file: one spec per line; `#` starts a comment.
pub fn parse_catalog(text: &str) -> Result<Vec<GroupSpec>> {
    let mut specs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let spec = GroupSpec::parse(line).map_err(|e| match e {
            Error::Input(msg) => Error::Input(format!("line {}: {msg}", lineno + 1)),
            other => other,
        })?;
        specs.push(spec);
    }
    Ok(specs)
}

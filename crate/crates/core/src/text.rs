//! Character-level cursor shared by every grammar in the crate.
//!
//! The grammars are small and context dependent (`v` is a join operator
//! inside a lattice term, `|` is part of an element name inside a structure),
//! so each parser pulls exactly the token shape it expects instead of going
//! through a global lexer.

use crate::error::{Error, Result};

/// Characters that terminate an element name.
pub(crate) const ELEMENT_DELIMITERS: &[char] = &['{', '}', '(', ')', ',', '=', '#', ':', ';', '"'];

pub(crate) fn is_element_name(s: &str) -> bool {
    !s.is_empty()
        && s
            .chars()
            .all(|c| !c.is_whitespace() && !ELEMENT_DELIMITERS.contains(&c))
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(is_ident_continue)
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub(crate) fn skip_ws(&mut self) {
        loop {
            let rest = self.rest();
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                let line_end = trimmed.find('\n').unwrap_or(trimmed.len());
                self.pos += line_end;
            } else {
                break;
            }
        }
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    /// Consumes `lit` if it comes next.
    pub(crate) fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, lit: &str) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{lit}`{}", self.found())))
        }
    }

    /// Consumes `kw` if the next identifier is exactly `kw`.
    pub(crate) fn eat_keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        let rest = self.rest();
        if rest.starts_with(kw)
            && !rest[kw.len()..]
                .chars()
                .next()
                .is_some_and(is_ident_continue)
        {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    pub(crate) fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{kw}`{}", self.found())))
        }
    }

    pub(crate) fn peek_ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let first = rest.chars().next()?;
        if !(first.is_ascii_alphabetic() || first == '_') {
            return None;
        }
        let end = rest
            .char_indices()
            .find(|&(_, c)| !is_ident_continue(c))
            .map_or(rest.len(), |(i, _)| i);
        Some(&rest[..end])
    }

    pub(crate) fn ident(&mut self) -> Result<String> {
        match self.peek_ident() {
            Some(id) => {
                self.pos += id.len();
                Ok(id.to_string())
            }
            None => Err(self.error(format!("expected identifier{}", self.found()))),
        }
    }

    pub(crate) fn element(&mut self) -> Result<String> {
        self.skip_ws();
        let rest = self.rest();
        let end = rest
            .char_indices()
            .find(|&(_, c)| c.is_whitespace() || ELEMENT_DELIMITERS.contains(&c))
            .map_or(rest.len(), |(i, _)| i);
        if end == 0 {
            return Err(self.error(format!("expected element name{}", self.found())));
        }
        self.pos += end;
        Ok(rest[..end].to_string())
    }

    pub(crate) fn number(&mut self) -> Result<usize> {
        self.skip_ws();
        let rest = self.rest();
        let end = rest
            .char_indices()
            .find(|&(_, c)| !c.is_ascii_digit())
            .map_or(rest.len(), |(i, _)| i);
        if end == 0 {
            return Err(self.error(format!("expected number{}", self.found())));
        }
        let n = rest[..end]
            .parse()
            .map_err(|_| self.error("number out of range"))?;
        self.pos += end;
        Ok(n)
    }

    pub(crate) fn quoted(&mut self) -> Result<String> {
        self.expect("\"")?;
        let rest = self.rest();
        match rest.find('"') {
            Some(end) => {
                self.pos += end + 1;
                Ok(rest[..end].to_string())
            }
            None => Err(self.error("unterminated string")),
        }
    }

    /// Parses `{ item, item, ... }`, allowing a trailing comma.
    pub(crate) fn braced_list<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T>,
    ) -> Result<Vec<T>> {
        self.expect("{")?;
        let mut out = Vec::new();
        loop {
            if self.eat("}") {
                return Ok(out);
            }
            out.push(item(self)?);
            if !self.eat(",") {
                self.expect("}")?;
                return Ok(out);
            }
        }
    }

    /// Parses `( item, item, ... )`.
    pub(crate) fn paren_list<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T>,
    ) -> Result<Vec<T>> {
        self.expect("(")?;
        let mut out = Vec::new();
        if self.eat(")") {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if !self.eat(",") {
                self.expect(")")?;
                return Ok(out);
            }
        }
    }

    pub(crate) fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.error(format!("unexpected trailing input{}", self.found())))
        }
    }

    fn found(&self) -> String {
        let rest = self.rest().trim_start();
        match rest.chars().next() {
            None => ", found end of input".to_string(),
            Some(_) => {
                let snippet: String = rest.chars().take(12).collect();
                format!(", found `{}`", snippet.split_whitespace().next().unwrap_or(""))
            }
        }
    }

    pub(crate) fn position(&self) -> (usize, usize) {
        let before = &self.src[..self.pos];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.position();
        Error::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    pub(crate) fn mark(&self) -> usize {
        self.pos
    }

    pub(crate) fn error_at(&self, mark: usize, msg: impl Into<String>) -> Error {
        Cursor {
            src: self.src,
            pos: mark,
        }
        .error(msg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_positions() {
        let mut c = Cursor::new("# header\n  foo  # trailing\n bar");
        assert_eq!(c.ident().unwrap(), "foo");
        assert_eq!(c.ident().unwrap(), "bar");
        assert!(c.at_end());
        let mut c = Cursor::new("a\n  ?");
        c.ident().unwrap();
        match c.ident() {
            Err(Error::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 3)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn keyword_needs_boundary() {
        let mut c = Cursor::new("existsy");
        assert!(!c.eat_keyword("exists"));
        assert_eq!(c.ident().unwrap(), "existsy");
    }

    #[test]
    fn element_names_stop_at_delimiters() {
        let mut c = Cursor::new("0|1,a.b)");
        assert_eq!(c.element().unwrap(), "0|1");
        c.expect(",").unwrap();
        assert_eq!(c.element().unwrap(), "a.b");
        assert!(is_element_name("0|1"));
        assert!(!is_element_name("a b"));
        assert!(!is_element_name(""));
    }
}

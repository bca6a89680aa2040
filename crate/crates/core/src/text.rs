//! Whitespace tokenizer with 1-based line/column positions for error reports.

use std::str::FromStr;

use crate::error::{Error, Result};

pub(crate) struct Tokens<'a> {
    items: Vec<(usize, usize, &'a str)>,
    pos: usize,
    last_line: usize,
}

impl<'a> Tokens<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        let mut items = Vec::new();
        let mut last_line = 1;
        for (i, line) in text.lines().enumerate() {
            last_line = i + 1;
            let mut rest = line;
            let mut offset = 0;
            while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
                let tail = &rest[start..];
                let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
                let column = line[..offset + start].chars().count() + 1;
                items.push((i + 1, column, &tail[..len]));
                offset += start + len;
                rest = &tail[len..];
            }
        }
        Tokens {
            items,
            pos: 0,
            last_line,
        }
    }

    pub(crate) fn next_value<T: FromStr>(&mut self, what: &str) -> Result<(usize, usize, T)> {
        match self.items.get(self.pos) {
            Some(&(line, column, tok)) => {
                self.pos += 1;
                tok.parse()
                    .map(|v| (line, column, v))
                    .map_err(|_| Error::parse(line, column, format!("expected {what}, found {tok:?}")))
            }
            None => Err(Error::parse(
                self.last_line,
                1,
                format!("unexpected end of input, expected {what}"),
            )),
        }
    }

    pub(crate) fn next_usize(&mut self, what: &str) -> Result<(usize, usize, usize)> {
        self.next_value(what)
    }

    /// Line of the next token, or of the end of input.
    pub(crate) fn peek_line(&self) -> usize {
        self.items.get(self.pos).map_or(self.last_line, |t| t.0)
    }

    pub(crate) fn expect_end(&self) -> Result<()> {
        match self.items.get(self.pos) {
            None => Ok(()),
            Some(&(line, column, tok)) => {
                Err(Error::parse(line, column, format!("trailing token {tok:?}")))
            }
        }
    }
}

//! Line-oriented text formats: tokenizing with positions and parse errors.

use std::fmt;
use std::str::FromStr;

/// Parse failure with a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A whitespace-separated token and where it starts.
#[derive(Debug, Clone, Copy)]
pub struct Token<'a> {
    pub text: &'a str,
    pub line: usize,
    pub column: usize,
}

impl<'a> Token<'a> {
    pub fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.column, message: message.into() }
    }

    pub fn parse<T: FromStr>(&self, what: &str) -> Result<T, ParseError> {
        self.text.parse().map_err(|_| self.error(format!("expected {what}, found `{}`", self.text)))
    }
}

/// Non-empty lines with `#` comments stripped, split into positioned tokens.
pub fn token_lines(input: &str) -> impl Iterator<Item = Vec<Token<'_>>> {
    input.lines().enumerate().filter_map(|(idx, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push(Token { text: &content[s..pos], line: idx + 1, column: s + 1 });
                    start = None;
                }
                _ => {}
            }
        }
        (!tokens.is_empty()).then_some(tokens)
    })
}

/// Checks the argument count of a directive line.
pub fn expect_arity(tokens: &[Token<'_>], arity: usize) -> Result<(), ParseError> {
    if tokens.len() == arity + 1 {
        Ok(())
    } else {
        let at = tokens.get(arity + 1).unwrap_or(&tokens[tokens.len() - 1]);
        Err(at.error(format!("`{}` takes {arity} arguments, found {}", tokens[0].text, tokens.len() - 1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_carry_positions() {
        let lines: Vec<_> = token_lines("# header\n\n  edge 3  x # trailing\n").collect();
        assert_eq!(lines.len(), 1);
        let t = &lines[0];
        assert_eq!(t.len(), 3);
        assert_eq!((t[0].text, t[0].line, t[0].column), ("edge", 3, 3));
        assert_eq!((t[2].text, t[2].column), ("x", 11));
        let err = t[2].parse::<u32>("an integer").unwrap_err();
        assert_eq!((err.line, err.column), (3, 11));
        assert!(expect_arity(t, 2).is_ok());
        assert!(expect_arity(t, 3).is_err());
    }
}

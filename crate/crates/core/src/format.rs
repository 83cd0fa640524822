//! Plain-text profile files.
//!
//! ```text
//! # comments run to end of line; blank lines are ignored
//! 2          # n
//! 1 2        # men's rows, 1-based woman labels, most preferred first
//! 2 1
//! 1 2        # women's rows, 1-based man labels
//! 2 1
//! ```

use std::fmt;

use thiserror::Error;

use crate::profile::{PreferenceProfile, ProfileError, Side};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    /// 1-based line number; for missing rows, one past the last line.
    pub line: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error(transparent)]
    Profile(ProfileError),
}

fn syntax(line: usize, reason: impl fmt::Display) -> ParseError {
    ParseError { line, kind: ParseErrorKind::Syntax(reason.to_string()) }
}

pub fn parse_profile(text: &str) -> Result<PreferenceProfile, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let eof_line = text.lines().count() + 1;

    let (n_line, n_text) = lines.next().ok_or_else(|| syntax(eof_line, "missing size line"))?;
    let n: usize = match n_text.split_whitespace().collect::<Vec<_>>().as_slice() {
        [one] => one.parse().map_err(|_| syntax(n_line, format!("size `{one}` is not a positive integer")))?,
        _ => return Err(syntax(n_line, "size line must hold exactly one integer")),
    };
    if n == 0 {
        return Err(ParseError { line: n_line, kind: ParseErrorKind::Profile(ProfileError::Empty) });
    }

    let mut rows = Vec::with_capacity(2 * n);
    let mut row_lines = Vec::with_capacity(2 * n);
    for k in 0..2 * n {
        let side = if k < n { "men's" } else { "women's" };
        let (line, body) = lines
            .next()
            .ok_or_else(|| syntax(eof_line, format!("expected {n} {side} rows, found {}", k % n)))?;
        let row = body
            .split_whitespace()
            .map(|tok| match tok.parse::<usize>() {
                Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
                Ok(v) => Err(syntax(line, format!("entry {v} out of range 1..={n}"))),
                Err(_) => Err(syntax(line, format!("`{tok}` is not an integer"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
        row_lines.push(line);
    }
    if let Some((line, _)) = lines.next() {
        return Err(syntax(line, format!("unexpected extra row; the profile already has 2n = {} rows", 2 * n)));
    }

    let (men, women) = rows.split_at(n);
    PreferenceProfile::new(n, men, women).map_err(|e| {
        let line = match &e {
            ProfileError::RowLengthMismatch { agent, .. }
            | ProfileError::OutOfRange { agent, .. }
            | ProfileError::DuplicateEntry { agent, .. } => {
                row_lines[agent.index + if agent.side == Side::Man { 0 } else { n }]
            }
            _ => n_line,
        };
        ParseError { line, kind: ParseErrorKind::Profile(e) }
    })
}

/// Canonical text for `profile`; [`parse_profile`] reads it back unchanged.
pub fn render_profile(profile: &PreferenceProfile) -> String {
    let mut s = format!("{}\n", profile.n());
    for side in [Side::Man, Side::Woman] {
        for row in profile.rows(side) {
            let labels: Vec<String> = row.iter().map(|x| (x + 1).to_string()).collect();
            s.push_str(&labels.join(" "));
            s.push('\n');
        }
    }
    s
}

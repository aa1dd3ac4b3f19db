//! Flat `key = value` documents used by the classification, agent and synth
//! config files.
//!
//! One entry per line. Blank lines and lines starting with `#` are skipped.
//! A key may be wrapped in single quotes so that characters such as `#`,
//! `=` or a space can be used as keys (`'#' = Solid`).

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum KvError {
    #[error("line {line}: expected `key = value`")]
    MissingSeparator { line: usize },
    #[error("line {line}: empty key")]
    EmptyKey { line: usize },
    #[error("line {line}: unterminated quoted key")]
    UnterminatedQuote { line: usize },
}

/// A single parsed entry, with the 1-based line it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub value: String,
}

pub fn parse(text: &str) -> Result<Vec<Entry>, KvError> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, rest) = if let Some(quoted) = trimmed.strip_prefix('\'') {
            // Quoted keys are a single character followed by a closing quote.
            let mut chars = quoted.char_indices();
            let (_, c) = chars.next().ok_or(KvError::UnterminatedQuote { line })?;
            match chars.next() {
                Some((i, '\'')) => (c.to_string(), quoted[i + 1..].trim_start()),
                _ => return Err(KvError::UnterminatedQuote { line }),
            }
        } else {
            let eq = trimmed
                .find('=')
                .ok_or(KvError::MissingSeparator { line })?;
            (trimmed[..eq].trim_end().to_string(), &trimmed[eq..])
        };
        let value = rest
            .strip_prefix('=')
            .ok_or(KvError::MissingSeparator { line })?
            .trim();
        if key.is_empty() {
            return Err(KvError::EmptyKey { line });
        }
        entries.push(Entry {
            line,
            key,
            value: value.trim_matches('"').to_string(),
        });
    }
    Ok(entries)
}

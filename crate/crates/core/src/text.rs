//! Indexed text and query patterns.
//!
//! A [`Text`] is the user's byte sequence followed by the sentinel symbol `0`,
//! which the library appends itself. Text positions reported by queries are
//! 1-based.

use thiserror::Error;

/// Symbol appended to every indexed text. It sorts before every other byte.
pub const SENTINEL: u8 = 0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TextError {
    #[error("input contains the reserved byte 0 at offset {0}")]
    ReservedByte(usize),
    #[error("input is empty")]
    Empty,
    #[error("text must end with the sentinel and contain it nowhere else")]
    BadSentinel,
}

/// An indexed text `T = [1..σ]^{n-1} · 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Text {
    bytes: Vec<u8>,
}

impl Text {
    /// Builds a text from user bytes, appending the sentinel.
    pub fn new(input: &[u8]) -> Result<Self, TextError> {
        if input.is_empty() {
            return Err(TextError::Empty);
        }
        if let Some(at) = input.iter().position(|&b| b == SENTINEL) {
            return Err(TextError::ReservedByte(at));
        }
        let mut bytes = Vec::with_capacity(input.len() + 1);
        bytes.extend_from_slice(input);
        bytes.push(SENTINEL);
        Ok(Text { bytes })
    }

    /// Wraps a byte vector that already carries the trailing sentinel.
    pub fn from_terminated(bytes: Vec<u8>) -> Result<Self, TextError> {
        match bytes.split_last() {
            Some((&SENTINEL, body)) if !body.is_empty() && !body.contains(&SENTINEL) => {
                Ok(Text { bytes })
            }
            _ => Err(TextError::BadSentinel),
        }
    }

    /// Total length including the sentinel.
    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All symbols, sentinel included.
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// The user's bytes, sentinel stripped.
    pub fn body(&self) -> &[u8] {
        &self.bytes[..self.bytes.len() - 1]
    }

    /// Largest symbol value occurring in the text.
    pub fn sigma(&self) -> u8 {
        self.bytes.iter().copied().max().unwrap_or(0)
    }
}

/// A query string. [`Pattern::new`] rejects the sentinel;
/// [`Pattern::from_symbols`] admits it so that queries can address the end of
/// the text.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Pattern {
    bytes: Vec<u8>,
}

impl Pattern {
    pub fn new(bytes: &[u8]) -> Result<Self, TextError> {
        if let Some(at) = bytes.iter().position(|&b| b == SENTINEL) {
            return Err(TextError::ReservedByte(at));
        }
        Ok(Pattern {
            bytes: bytes.to_vec(),
        })
    }

    /// Raw symbols; `0` matches the sentinel.
    pub fn from_symbols(bytes: &[u8]) -> Self {
        Pattern {
            bytes: bytes.to_vec(),
        }
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }
}

/// Renders symbols for diagnostics, showing the sentinel as `#`.
pub fn display_symbols(bytes: &[u8]) -> String {
    bytes
        .iter()
        .map(|&b| match b {
            SENTINEL => '#',
            0x20..=0x7e => b as char,
            _ => '?',
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sentinel_is_appended() {
        let t = Text::new(b"banana").unwrap();
        assert_eq!(t.len(), 7);
        assert_eq!(t.as_bytes()[6], SENTINEL);
        assert_eq!(t.body(), b"banana");
        assert_eq!(t.sigma(), b'n');
    }

    #[test]
    fn rejects_reserved_byte_and_empty() {
        assert_eq!(Text::new(b"ab\0c"), Err(TextError::ReservedByte(2)));
        assert_eq!(Text::new(b""), Err(TextError::Empty));
        assert!(Pattern::new(b"a\0").is_err());
        assert_eq!(Pattern::from_symbols(b"a\0").len(), 2);
    }

    #[test]
    fn terminated_round_trip() {
        let t = Text::new(b"ab").unwrap();
        let u = Text::from_terminated(t.as_bytes().to_vec()).unwrap();
        assert_eq!(t, u);
        assert!(Text::from_terminated(b"ab".to_vec()).is_err());
        assert!(Text::from_terminated(b"\0".to_vec()).is_err());
        assert!(Text::from_terminated(b"a\0b\0".to_vec()).is_err());
    }
}

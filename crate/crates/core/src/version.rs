//! Version strings and release dates: the two orderings every graph query
//! builds on.
//!
//! Version ordering follows the token scheme used by Maven-style build
//! tools. A version string is split on `.`, `-` and letter/digit
//! boundaries; digit runs become numeric tokens and letter runs become
//! lowercase qualifiers. Numeric tokens compare by value, positive numbers
//! outrank every qualifier, and qualifiers follow the fixed precedence
//!
//! ```text
//! alpha < beta < milestone < rc = cr < snapshot
//!       < release (empty, "ga", "final") < sp < anything else (lexical)
//! ```
//!
//! Trailing minimum tokens (`0` and the release qualifier) are trimmed, so
//! `1.0`, `1.0.0` and `1-ga` all compare equal. The lexical fallback for
//! unrecognized qualifiers is a local choice; the upstream policy does not
//! define an order among them.
//!
//! A zero numeric token sits at the same level as the release qualifier.
//! That identification is what trimming and end-padding already imply, and
//! it is the only completion of the scheme that keeps the comparison a
//! total order.

use std::cmp::Ordering;
use std::fmt;

use chrono::NaiveDate;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VersionError {
    #[error("empty version string")]
    Empty,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DateError {
    #[error("invalid date {0:?}, expected YYYY-MM-DD")]
    Invalid(String),
}

/// A calendar date at day granularity, parsed from ISO `YYYY-MM-DD`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReleaseDate(NaiveDate);

impl ReleaseDate {
    pub fn parse(text: &str) -> Result<Self, DateError> {
        NaiveDate::parse_from_str(text, "%Y-%m-%d")
            .map(ReleaseDate)
            .map_err(|_| DateError::Invalid(text.to_owned()))
    }

    pub fn from_ymd(year: i32, month: u32, day: u32) -> Option<Self> {
        NaiveDate::from_ymd_opt(year, month, day).map(ReleaseDate)
    }

    /// Whole days from `earlier` to `self`; negative if `self` is earlier.
    pub fn days_since(&self, earlier: &ReleaseDate) -> i64 {
        (self.0 - earlier.0).num_days()
    }

    pub fn plus_days(&self, days: i64) -> ReleaseDate {
        ReleaseDate(self.0 + chrono::Duration::days(days))
    }
}

impl fmt::Display for ReleaseDate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.format("%Y-%m-%d"))
    }
}

/// Arbitrary-precision numeric token, kept as its normalized decimal
/// digits (no leading zeros) and compared by length then lexically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Number(String);

impl Number {
    fn from_digits(digits: &str) -> Self {
        let trimmed = digits.trim_start_matches('0');
        if trimmed.is_empty() {
            Number("0".to_owned())
        } else {
            Number(trimmed.to_owned())
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0 == "0"
    }

    pub fn digits(&self) -> &str {
        &self.0
    }
}

impl Ord for Number {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Number {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Textual version qualifier, case-insensitive.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Qualifier {
    Alpha,
    Beta,
    Milestone,
    /// `rc` and its alias `cr`.
    ReleaseCandidate,
    Snapshot,
    /// The empty qualifier and its aliases `ga`, `final`, `release`.
    Release,
    ServicePack,
    /// Anything else, ordered lexically after `sp`.
    Other(String),
}

impl Qualifier {
    fn from_text(text: &str) -> Self {
        match text.to_lowercase().as_str() {
            "alpha" => Qualifier::Alpha,
            "beta" => Qualifier::Beta,
            "milestone" => Qualifier::Milestone,
            "rc" | "cr" => Qualifier::ReleaseCandidate,
            "snapshot" => Qualifier::Snapshot,
            "" | "ga" | "final" | "release" => Qualifier::Release,
            "sp" => Qualifier::ServicePack,
            other => Qualifier::Other(other.to_owned()),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            Qualifier::Alpha => 0,
            Qualifier::Beta => 1,
            Qualifier::Milestone => 2,
            Qualifier::ReleaseCandidate => 3,
            Qualifier::Snapshot => 4,
            Qualifier::Release => 5,
            Qualifier::ServicePack => 6,
            Qualifier::Other(_) => 7,
        }
    }

    fn text(&self) -> &str {
        match self {
            Qualifier::Alpha => "alpha",
            Qualifier::Beta => "beta",
            Qualifier::Milestone => "milestone",
            Qualifier::ReleaseCandidate => "rc",
            Qualifier::Snapshot => "snapshot",
            Qualifier::Release => "",
            Qualifier::ServicePack => "sp",
            Qualifier::Other(s) => s,
        }
    }
}

impl Ord for Qualifier {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| match (self, other) {
                (Qualifier::Other(a), Qualifier::Other(b)) => a.cmp(b),
                _ => Ordering::Equal,
            })
    }
}

impl PartialOrd for Qualifier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Token {
    Number(Number),
    Qualifier(Qualifier),
}

impl Token {
    fn is_minimum(&self) -> bool {
        match self {
            Token::Number(n) => n.is_zero(),
            Token::Qualifier(q) => *q == Qualifier::Release,
        }
    }

    fn cmp_token(&self, other: &Token) -> Ordering {
        match (self, other) {
            (Token::Number(a), Token::Number(b)) => a.cmp(b),
            (Token::Qualifier(a), Token::Qualifier(b)) => a.cmp(b),
            // Zero is level with the release qualifier; any positive
            // number outranks every qualifier.
            (Token::Number(a), Token::Qualifier(b)) => {
                if a.is_zero() {
                    Qualifier::Release.cmp(b)
                } else {
                    Ordering::Greater
                }
            }
            (Token::Qualifier(a), Token::Number(b)) => {
                if b.is_zero() {
                    a.cmp(&Qualifier::Release)
                } else {
                    Ordering::Less
                }
            }
        }
    }

    /// Comparison against the implicit padding past the end of a shorter
    /// token sequence. The pad is the minimum of the token's own kind.
    fn cmp_padding(&self) -> Ordering {
        match self {
            Token::Number(n) => {
                if n.is_zero() {
                    Ordering::Equal
                } else {
                    Ordering::Greater
                }
            }
            Token::Qualifier(q) => q.cmp(&Qualifier::Release),
        }
    }
}

/// Parsed version string implementing the version ordering.
///
/// `VersionKey` equality and ordering are the comparison semantics, so
/// distinct spellings of the same version (`1.0` and `1.0.0`) compare and
/// hash-independently test equal. The original string is kept for display.
#[derive(Debug, Clone)]
pub struct VersionKey {
    raw: String,
    tokens: Vec<Token>,
}

impl VersionKey {
    /// Parses a version string. Fails only on empty input.
    pub fn parse(text: &str) -> Result<Self, VersionError> {
        if text.is_empty() {
            return Err(VersionError::Empty);
        }
        let mut tokens = tokenize(text);
        while tokens.last().is_some_and(Token::is_minimum) {
            tokens.pop();
        }
        Ok(VersionKey {
            raw: text.to_owned(),
            tokens,
        })
    }

    pub fn raw(&self) -> &str {
        &self.raw
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Canonical dotted rendering of the trimmed token sequence.
    pub fn canonical(&self) -> String {
        let parts: Vec<&str> = self
            .tokens
            .iter()
            .map(|t| match t {
                Token::Number(n) => n.digits(),
                Token::Qualifier(q) => q.text(),
            })
            .collect();
        parts.join(".")
    }
}

fn tokenize(text: &str) -> Vec<Token> {
    #[derive(PartialEq, Clone, Copy)]
    enum Kind {
        Digit,
        Letter,
    }

    let mut tokens = Vec::new();
    let mut run = String::new();
    let mut kind = None;

    let mut flush = |run: &mut String, kind: &mut Option<Kind>| {
        if let Some(k) = kind.take() {
            let token = match k {
                Kind::Digit => Token::Number(Number::from_digits(run)),
                Kind::Letter => Token::Qualifier(Qualifier::from_text(run)),
            };
            tokens.push(token);
            run.clear();
        }
    };

    for ch in text.chars() {
        let next = if ch.is_ascii_digit() {
            Some(Kind::Digit)
        } else if ch.is_alphabetic() {
            Some(Kind::Letter)
        } else {
            None
        };
        match next {
            None => flush(&mut run, &mut kind),
            Some(k) => {
                if kind != Some(k) {
                    flush(&mut run, &mut kind);
                    kind = Some(k);
                }
                run.push(ch);
            }
        }
    }
    flush(&mut run, &mut kind);
    tokens
}

/// The version ordering over parsed keys. Total: antisymmetric,
/// transitive, and defined for every pair of keys.
pub fn compare_versions(a: &VersionKey, b: &VersionKey) -> Ordering {
    let len = a.tokens.len().max(b.tokens.len());
    for i in 0..len {
        let ord = match (a.tokens.get(i), b.tokens.get(i)) {
            (Some(x), Some(y)) => x.cmp_token(y),
            (Some(x), None) => x.cmp_padding(),
            (None, Some(y)) => y.cmp_padding().reverse(),
            (None, None) => unreachable!(),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

impl PartialEq for VersionKey {
    fn eq(&self, other: &Self) -> bool {
        compare_versions(self, other) == Ordering::Equal
    }
}

impl Eq for VersionKey {}

impl Ord for VersionKey {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_versions(self, other)
    }
}

impl PartialOrd for VersionKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VersionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.raw)
    }
}

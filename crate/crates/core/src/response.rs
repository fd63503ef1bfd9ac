//! Response levels and the short token grammar used in assessment files
//! (`Y`, `N`, `L`, `M`, `H`, `L-M`, `M-H`).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Response scale of a criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Binary,
    Graded,
}

impl Scale {
    /// Atomic levels admitted by this scale, in ascending order.
    pub fn atomic_levels(self) -> &'static [ResponseLevel] {
        match self {
            Scale::Binary => &[ResponseLevel::No, ResponseLevel::Yes],
            Scale::Graded => &[
                ResponseLevel::Low,
                ResponseLevel::Medium,
                ResponseLevel::High,
            ],
        }
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scale::Binary => "binary",
            Scale::Graded => "graded",
        })
    }
}

/// One step of the graded scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Grade {
    Low,
    Medium,
    High,
}

impl Grade {
    pub fn level(self) -> ResponseLevel {
        match self {
            Grade::Low => ResponseLevel::Low,
            Grade::Medium => ResponseLevel::Medium,
            Grade::High => ResponseLevel::High,
        }
    }

    fn token(self) -> &'static str {
        match self {
            Grade::Low => "L",
            Grade::Medium => "M",
            Grade::High => "H",
        }
    }

    fn from_token(token: &str) -> Option<Grade> {
        match token {
            "L" => Some(Grade::Low),
            "M" => Some(Grade::Medium),
            "H" => Some(Grade::High),
            _ => None,
        }
    }
}

/// A response to one criterion.
///
/// `Mixed` records two adjacent graded answers that were kept and averaged
/// when two raters disagreed by one step. Build it with
/// [`ResponseLevel::mixed`] to get the adjacency check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ResponseLevel {
    No,
    Yes,
    Low,
    Medium,
    High,
    Mixed { lower: Grade, upper: Grade },
}

impl ResponseLevel {
    /// Mixed value of two adjacent grades, in either order.
    pub fn mixed(a: Grade, b: Grade) -> Option<ResponseLevel> {
        let (lower, upper) = if a <= b { (a, b) } else { (b, a) };
        match (lower, upper) {
            (Grade::Low, Grade::Medium) | (Grade::Medium, Grade::High) => {
                Some(ResponseLevel::Mixed { lower, upper })
            }
            _ => None,
        }
    }

    pub fn is_atomic(self) -> bool {
        !matches!(self, ResponseLevel::Mixed { .. })
    }

    pub fn grade(self) -> Option<Grade> {
        match self {
            ResponseLevel::Low => Some(Grade::Low),
            ResponseLevel::Medium => Some(Grade::Medium),
            ResponseLevel::High => Some(Grade::High),
            _ => None,
        }
    }

    /// Whether this level is admissible on `scale`, including the adjacency
    /// rule for mixed values.
    pub fn is_valid_for(self, scale: Scale) -> bool {
        match (self, scale) {
            (ResponseLevel::No | ResponseLevel::Yes, Scale::Binary) => true,
            (ResponseLevel::Low | ResponseLevel::Medium | ResponseLevel::High, Scale::Graded) => {
                true
            }
            (ResponseLevel::Mixed { lower, upper }, Scale::Graded) => {
                ResponseLevel::mixed(lower, upper) == Some(self) && lower < upper
            }
            _ => false,
        }
    }

    /// Inverse of the tokenizer: `Y`, `N`, `L`, `M`, `H`, `L-M`, `M-H`.
    pub fn token(self) -> String {
        match self {
            ResponseLevel::No => "N".into(),
            ResponseLevel::Yes => "Y".into(),
            ResponseLevel::Low => "L".into(),
            ResponseLevel::Medium => "M".into(),
            ResponseLevel::High => "H".into(),
            ResponseLevel::Mixed { lower, upper } => format!("{}-{}", lower.token(), upper.token()),
        }
    }

    /// Human-readable label used in reports.
    pub fn label(self) -> String {
        match self {
            ResponseLevel::No => "No".into(),
            ResponseLevel::Yes => "Yes".into(),
            ResponseLevel::Low => "Low".into(),
            ResponseLevel::Medium => "Medium".into(),
            ResponseLevel::High => "High".into(),
            ResponseLevel::Mixed { lower, upper } => {
                format!("{}-{}", lower.level().label(), upper.level().label())
            }
        }
    }
}

impl fmt::Display for ResponseLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty response token")]
    Empty,
    #[error("unknown response token `{0}`")]
    UnknownToken(String),
    #[error("mixed response `{0}` is not allowed on a binary scale")]
    MixedOnBinary(String),
    #[error("mixed response `{0}` must pair adjacent levels (L-M or M-H)")]
    NonAdjacentPair(String),
    #[error("response `{token}` is not valid on a {scale} scale")]
    ScaleMismatch { token: String, scale: Scale },
}

impl ParseError {
    /// Stable machine-readable kind, used in service error bodies.
    pub fn kind(&self) -> &'static str {
        match self {
            ParseError::Empty => "empty_token",
            ParseError::UnknownToken(_) => "unknown_token",
            ParseError::MixedOnBinary(_) => "mixed_on_binary",
            ParseError::NonAdjacentPair(_) => "non_adjacent_pair",
            ParseError::ScaleMismatch { .. } => "scale_mismatch",
        }
    }
}

/// Parses a token without reference to a scale. Mixed pairs are checked for
/// adjacency; scale membership is not.
pub fn parse_token(text: &str) -> Result<ResponseLevel, ParseError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(ParseError::Empty);
    }
    let upper = trimmed.to_ascii_uppercase();
    match upper.as_str() {
        "Y" | "YES" => return Ok(ResponseLevel::Yes),
        "N" | "NO" => return Ok(ResponseLevel::No),
        "L" | "LOW" => return Ok(ResponseLevel::Low),
        "M" | "MEDIUM" => return Ok(ResponseLevel::Medium),
        "H" | "HIGH" => return Ok(ResponseLevel::High),
        _ => {}
    }
    let Some((a, b)) = upper.split_once('-') else {
        return Err(ParseError::UnknownToken(trimmed.to_string()));
    };
    match (Grade::from_token(a.trim()), Grade::from_token(b.trim())) {
        (Some(a), Some(b)) => ResponseLevel::mixed(a, b)
            .ok_or_else(|| ParseError::NonAdjacentPair(trimmed.to_string())),
        _ => Err(ParseError::UnknownToken(trimmed.to_string())),
    }
}

/// Parses a response token for a criterion on `scale`.
pub fn parse_response(text: &str, scale: Scale) -> Result<ResponseLevel, ParseError> {
    let level = parse_token(text)?;
    if level.is_valid_for(scale) {
        return Ok(level);
    }
    let token = text.trim().to_string();
    Err(match (level, scale) {
        (ResponseLevel::Mixed { .. }, Scale::Binary) => ParseError::MixedOnBinary(token),
        _ => ParseError::ScaleMismatch { token, scale },
    })
}

impl FromStr for ResponseLevel {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_token(s)
    }
}

impl Serialize for ResponseLevel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.token())
    }
}

impl<'de> Deserialize<'de> for ResponseLevel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_token(&text).map_err(serde::de::Error::custom)
    }
}

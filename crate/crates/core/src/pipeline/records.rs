use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InteractionKind {
    Mention,
    Reply,
    Quote,
    Retweet,
    Other,
}

impl InteractionKind {
    pub const ALL: [InteractionKind; 5] = [
        InteractionKind::Mention,
        InteractionKind::Reply,
        InteractionKind::Quote,
        InteractionKind::Retweet,
        InteractionKind::Other,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InteractionKind::Mention => "mention",
            InteractionKind::Reply => "reply",
            InteractionKind::Quote => "quote",
            InteractionKind::Retweet => "retweet",
            InteractionKind::Other => "other",
        }
    }
}

impl fmt::Display for InteractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InteractionKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        InteractionKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown interaction kind `{s}`"))
    }
}

/// One directed interaction between two users.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractionRecord {
    pub source_user: String,
    pub target_user: String,
    pub kind: InteractionKind,
    /// UTC seconds.
    pub timestamp: u64,
}

/// A line that could not be turned into a record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reject {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedRecords {
    pub records: Vec<InteractionRecord>,
    pub rejects: Vec<Reject>,
}

/// Parses line-delimited interaction records. The format is chosen from the
/// first content line: a line starting with `{` selects one JSON object per
/// line, anything else selects tab-separated
/// `source_user, target_user, kind, timestamp`. A tab-separated header line
/// naming those fields is skipped. Blank lines and `#` comments are ignored;
/// malformed lines are collected in `rejects`.
pub fn parse_records(text: &str) -> Result<ParsedRecords> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .peekable();
    let json = match lines.peek() {
        Some((_, l)) => l.trim_start().starts_with('{'),
        None => {
            return Err(Error::Parse {
                line: 0,
                reason: "no records in input".into(),
            })
        }
    };
    let mut out = ParsedRecords::default();
    for (no, line) in lines {
        let parsed = if json {
            parse_json_line(line)
        } else if is_header(line) {
            continue;
        } else {
            parse_tsv_line(line)
        };
        match parsed.and_then(validate) {
            Ok(r) => out.records.push(r),
            Err(reason) => out.rejects.push(Reject { line: no, reason }),
        }
    }
    Ok(out)
}

fn is_header(line: &str) -> bool {
    let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
    fields == ["source_user", "target_user", "kind", "timestamp"]
}

fn parse_tsv_line(line: &str) -> std::result::Result<InteractionRecord, String> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != 4 {
        return Err(format!(
            "expected 4 tab-separated fields, found {}",
            fields.len()
        ));
    }
    let timestamp = fields[3]
        .trim()
        .parse::<u64>()
        .map_err(|e| format!("bad timestamp `{}`: {e}", fields[3].trim()))?;
    Ok(InteractionRecord {
        source_user: fields[0].trim().to_string(),
        target_user: fields[1].trim().to_string(),
        kind: fields[2].parse()?,
        timestamp,
    })
}

fn parse_json_line(line: &str) -> std::result::Result<InteractionRecord, String> {
    serde_json::from_str(line).map_err(|e| e.to_string())
}

fn validate(r: InteractionRecord) -> std::result::Result<InteractionRecord, String> {
    if r.source_user.is_empty() || r.target_user.is_empty() {
        return Err("empty user id".into());
    }
    Ok(r)
}

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::records::{InteractionKind, InteractionRecord};
use crate::adjacency::SparseAdjacency;
use crate::error::{Error, Result};

/// Kinds that form edges unless a window says otherwise. Retweets are excluded.
pub const DEFAULT_KINDS: [InteractionKind; 3] = [
    InteractionKind::Mention,
    InteractionKind::Reply,
    InteractionKind::Quote,
];

/// Half-open time window `[start, end)` in UTC seconds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSpec {
    pub label: String,
    pub start: u64,
    pub end: u64,
    pub include_kinds: Vec<InteractionKind>,
}

impl WindowSpec {
    pub fn new(label: impl Into<String>, start: u64, end: u64) -> Result<Self> {
        Self::with_kinds(label, start, end, DEFAULT_KINDS.to_vec())
    }

    pub fn with_kinds(
        label: impl Into<String>,
        start: u64,
        end: u64,
        include_kinds: Vec<InteractionKind>,
    ) -> Result<Self> {
        let label = label.into();
        if start >= end {
            return Err(Error::param(
                "window",
                format!("`{label}` must have start < end, got [{start}, {end})"),
            ));
        }
        Ok(WindowSpec {
            label,
            start,
            end,
            include_kinds,
        })
    }

    pub fn contains(&self, timestamp: u64) -> bool {
        (self.start..self.end).contains(&timestamp)
    }

    pub fn includes(&self, record: &InteractionRecord) -> bool {
        self.contains(record.timestamp) && self.include_kinds.contains(&record.kind)
    }
}

/// Checks that windows are time-ordered and do not overlap.
pub fn validate_series(windows: &[WindowSpec]) -> Result<()> {
    for pair in windows.windows(2) {
        if pair[1].start < pair[0].end {
            return Err(Error::param(
                "windows",
                format!(
                    "`{}` starts before `{}` ends; windows must be ordered and disjoint",
                    pair[1].label, pair[0].label
                ),
            ));
        }
    }
    Ok(())
}

/// Builds the communication network of one window. Nodes are the users of
/// the included records, indexed by first appearance and labelled with their ids.
pub fn build_window_network(
    records: &[InteractionRecord],
    window: &WindowSpec,
    directed: bool,
) -> Result<SparseAdjacency> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    for r in records.iter().filter(|r| window.includes(r)) {
        let s = intern(&mut index, &mut labels, &r.source_user);
        let t = intern(&mut index, &mut labels, &r.target_user);
        edges.push((s, t));
    }
    if labels.is_empty() {
        return Err(Error::EmptyNetwork(window.label.clone()));
    }
    SparseAdjacency::from_edges(labels.len(), &edges, directed)?.with_labels(labels)
}

fn intern<'r>(index: &mut HashMap<&'r str, usize>, labels: &mut Vec<String>, s: &'r str) -> usize {
    *index.entry(s).or_insert_with(|| {
        labels.push(s.to_string());
        labels.len() - 1
    })
}

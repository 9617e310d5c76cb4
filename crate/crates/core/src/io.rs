//! JSON instance files.
//!
//! ```json
//! {
//!   "expected": {"copnum": 3, "footprint_copnum": 2, "max_snapshot_copnum": 4},
//!   "labels": ["000", "001"],
//!   "n": 8,
//!   "period": 3,
//!   "snapshots": [
//!     [[0,4],[1,5]],
//!     [[0,2],[1,3]]
//!   ],
//!   "version": 1
//! }
//! ```
//!
//! `expected` and `labels` are optional. Unknown fields are rejected and
//! [`to_canonical_string`] produces the exact layout above.

use serde::{Deserialize, Serialize};

use crate::constructions::ExpectedTriple;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::periodic::PeriodicGraph;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawExpected {
    #[serde(default)]
    copnum: Option<usize>,
    #[serde(default)]
    footprint_copnum: Option<usize>,
    #[serde(default)]
    max_snapshot_copnum: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    #[serde(default)]
    expected: Option<RawExpected>,
    #[serde(default)]
    labels: Option<Vec<String>>,
    n: usize,
    period: usize,
    snapshots: Vec<Vec<[usize; 2]>>,
    version: u32,
}

/// A parsed instance file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: PeriodicGraph,
    pub expected: Option<ExpectedTriple>,
}

impl InstanceFile {
    pub fn new(instance: PeriodicGraph) -> Self {
        InstanceFile {
            instance,
            expected: None,
        }
    }

    pub fn with_expected(instance: PeriodicGraph, expected: ExpectedTriple) -> Self {
        InstanceFile {
            instance,
            expected: Some(expected),
        }
    }
}

fn parse_error(code: &'static str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        code,
        line,
        message: message.into(),
    }
}

/// Parses and validates an instance file.
pub fn parse(text: &str) -> Result<InstanceFile> {
    let raw: RawInstance = serde_json::from_str(text).map_err(|e| {
        let code = match e.classify() {
            serde_json::error::Category::Data => "E002",
            _ => "E001",
        };
        parse_error(code, e.line(), e.to_string())
    })?;
    if raw.version != FORMAT_VERSION {
        return Err(parse_error(
            "E007",
            key_line(text, "version"),
            format!("unsupported version {} (expected {FORMAT_VERSION})", raw.version),
        ));
    }
    if raw.period != raw.snapshots.len() {
        return Err(parse_error(
            "E006",
            key_line(text, "period"),
            Error::PeriodMismatch {
                period: raw.period,
                snapshots: raw.snapshots.len(),
            }
            .to_string(),
        ));
    }
    if raw.period == 0 {
        return Err(parse_error("E006", key_line(text, "period"), "period must be at least 1"));
    }
    if raw.n == 0 || raw.n > crate::graph::MAX_VERTICES {
        return Err(parse_error(
            "E003",
            key_line(text, "n"),
            format!("n must be in 1..={}", crate::graph::MAX_VERTICES),
        ));
    }
    if let Some(labels) = &raw.labels {
        if labels.len() != raw.n {
            return Err(parse_error(
                "E009",
                key_line(text, "labels"),
                format!("{} labels for {} vertices", labels.len(), raw.n),
            ));
        }
    }
    let mut snapshots = Vec::with_capacity(raw.period);
    for (t, edges) in raw.snapshots.iter().enumerate() {
        let mut g = Graph::empty(raw.n)?;
        for (j, &[u, v]) in edges.iter().enumerate() {
            let line = || edge_line(text, t, j).unwrap_or(0);
            if u == v {
                return Err(parse_error(
                    "E005",
                    line(),
                    format!("self-loop forbidden: [{u},{v}] in snapshot {t}"),
                ));
            }
            if u >= raw.n || v >= raw.n {
                return Err(parse_error(
                    "E003",
                    line(),
                    format!("vertex out of range: [{u},{v}] in snapshot {t} (n = {})", raw.n),
                ));
            }
            if u > v {
                return Err(parse_error(
                    "E008",
                    line(),
                    format!("edge [{u},{v}] in snapshot {t} must be written with u < v"),
                ));
            }
            if !g.add_edge(u, v)? {
                return Err(parse_error(
                    "E004",
                    line(),
                    format!("duplicate edge [{u},{v}] in snapshot {t}"),
                ));
            }
        }
        if let Some(l) = &raw.labels {
            g = g.with_labels(l.clone());
        }
        snapshots.push(g);
    }
    Ok(InstanceFile {
        instance: PeriodicGraph::new(snapshots)?,
        expected: raw.expected.map(|e| ExpectedTriple {
            footprint_copnum: e.footprint_copnum,
            max_snapshot_copnum: e.max_snapshot_copnum,
            copnum: e.copnum,
        }),
    })
}

pub fn read_file(path: &std::path::Path) -> Result<InstanceFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse(&text)
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

/// Canonical text: sorted keys, sorted edges, one snapshot per line.
pub fn to_canonical_string(file: &InstanceFile) -> String {
    let pg = &file.instance;
    let mut out = String::from("{\n");
    if let Some(e) = &file.expected {
        let mut parts = Vec::new();
        if let Some(c) = e.copnum {
            parts.push(format!("\"copnum\": {c}"));
        }
        if let Some(c) = e.footprint_copnum {
            parts.push(format!("\"footprint_copnum\": {c}"));
        }
        if let Some(c) = e.max_snapshot_copnum {
            parts.push(format!("\"max_snapshot_copnum\": {c}"));
        }
        out.push_str(&format!("  \"expected\": {{{}}},\n", parts.join(", ")));
    }
    if let Some(labels) = pg.labels() {
        let l: Vec<String> = labels.iter().map(|s| json_string(s)).collect();
        out.push_str(&format!("  \"labels\": [{}],\n", l.join(", ")));
    }
    out.push_str(&format!("  \"n\": {},\n", pg.n()));
    out.push_str(&format!("  \"period\": {},\n", pg.period()));
    out.push_str("  \"snapshots\": [\n");
    let lines: Vec<String> = pg
        .snapshots()
        .iter()
        .map(|g| {
            let e: Vec<String> = g.edges().iter().map(|(u, v)| format!("[{u},{v}]")).collect();
            format!("    [{}]", e.join(","))
        })
        .collect();
    out.push_str(&lines.join(",\n"));
    out.push_str("\n  ],\n");
    out.push_str(&format!("  \"version\": {FORMAT_VERSION}\n}}\n"));
    out
}

/// Instance as a JSON value (same content as the canonical text).
pub fn to_value(file: &InstanceFile) -> serde_json::Value {
    serde_json::from_str(&to_canonical_string(file)).expect("canonical text is JSON")
}

/// Parses an instance from a JSON value.
pub fn from_value(value: &serde_json::Value) -> Result<InstanceFile> {
    parse(&serde_json::to_string_pretty(value).expect("values serialize"))
}

/// 1-based line of the first top-level `"key"`, or 0.
fn key_line(text: &str, key: &str) -> usize {
    let needle = format!("\"{key}\"");
    text.find(&needle)
        .map(|pos| text[..pos].matches('\n').count() + 1)
        .unwrap_or(0)
}

/// 1-based line where edge `j` of snapshot `t` starts.
fn edge_line(text: &str, t: usize, j: usize) -> Option<usize> {
    let start = text.find("\"snapshots\"")?;
    let mut line = text[..start].matches('\n').count() + 1;
    let mut depth = 0usize;
    let (mut snap, mut edge) = (None::<usize>, None::<usize>);
    let mut in_string = false;
    let mut escaped = false;
    for ch in text[start + "\"snapshots\"".len()..].chars() {
        if ch == '\n' {
            line += 1;
        }
        if in_string {
            match (escaped, ch) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '"') => in_string = false,
                _ => {}
            }
            continue;
        }
        match ch {
            '"' => in_string = true,
            '[' => {
                depth += 1;
                match depth {
                    2 => {
                        snap = Some(snap.map_or(0, |s| s + 1));
                        edge = None;
                    }
                    3 => {
                        edge = Some(edge.map_or(0, |e| e + 1));
                        if snap == Some(t) && edge == Some(j) {
                            return Some(line);
                        }
                    }
                    _ => {}
                }
            }
            ']' => {
                if depth <= 1 {
                    return None;
                }
                depth -= 1;
            }
            _ => {}
        }
    }
    None
}

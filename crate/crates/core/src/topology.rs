//! TMHMM long-format topology parsing and 7TM region extraction.
//!
//! Only the extracellular side is turned into features: the N-terminal
//! region and the three extracellular loops. Intracellular loops and the
//! C-terminal tail are parsed but never exposed.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const GPCR_HELIX_COUNT: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SegmentKind {
    Inside,
    Outside,
    TmHelix,
}

impl SegmentKind {
    pub fn token(self) -> &'static str {
        match self {
            SegmentKind::Inside => "inside",
            SegmentKind::Outside => "outside",
            SegmentKind::TmHelix => "TMhelix",
        }
    }

    fn parse(token: &str) -> Option<Self> {
        match token.to_ascii_lowercase().as_str() {
            "inside" => Some(SegmentKind::Inside),
            "outside" => Some(SegmentKind::Outside),
            "tmhelix" => Some(SegmentKind::TmHelix),
            _ => None,
        }
    }
}

/// 1-based inclusive residue span.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TopologySegment {
    pub kind: SegmentKind,
    pub start: usize,
    pub end: usize,
}

impl TopologySegment {
    pub fn residue_count(&self) -> usize {
        self.end + 1 - self.start
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopologyMap {
    sequence_id: String,
    length: usize,
    segments: Vec<TopologySegment>,
}

impl TopologyMap {
    /// Builds a map, checking that the segments tile `[1, length]` and
    /// that no two neighbours share a kind.
    pub fn new(
        sequence_id: impl Into<String>,
        length: usize,
        segments: Vec<TopologySegment>,
    ) -> std::result::Result<Self, String> {
        if segments.is_empty() {
            return Err("no segments".into());
        }
        let mut expected_start = 1;
        for (i, seg) in segments.iter().enumerate() {
            if seg.start > seg.end {
                return Err(format!("segment {} has start {} > end {}", i + 1, seg.start, seg.end));
            }
            if seg.start != expected_start {
                return Err(format!(
                    "segment {} starts at {} but {} was expected (gap or overlap)",
                    i + 1,
                    seg.start,
                    expected_start
                ));
            }
            if i > 0 && segments[i - 1].kind == seg.kind {
                return Err(format!("segments {} and {} share kind {}", i, i + 1, seg.kind.token()));
            }
            expected_start = seg.end + 1;
        }
        let last_end = expected_start - 1;
        if last_end != length {
            return Err(format!("segments end at {last_end} but sequence length is {length}"));
        }
        Ok(TopologyMap {
            sequence_id: sequence_id.into(),
            length,
            segments,
        })
    }

    pub fn sequence_id(&self) -> &str {
        &self.sequence_id
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn segments(&self) -> &[TopologySegment] {
        &self.segments
    }

    pub fn count(&self, kind: SegmentKind) -> usize {
        self.segments.iter().filter(|s| s.kind == kind).count()
    }
}

/// Why a topology is not a canonical 7TM receptor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TopologyReason {
    WrongHelixCount,
    NtermNotOutside,
    CtermNotInside,
    NonAlternating,
}

impl TopologyReason {
    pub fn code(self) -> &'static str {
        match self {
            TopologyReason::WrongHelixCount => "WRONG_HELIX_COUNT",
            TopologyReason::NtermNotOutside => "NTERM_NOT_OUTSIDE",
            TopologyReason::CtermNotInside => "CTERM_NOT_INSIDE",
            TopologyReason::NonAlternating => "NON_ALTERNATING",
        }
    }
}

impl fmt::Display for TopologyReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// Checks the canonical receptor pattern: seven helices, extracellular
/// N-terminus, cytoplasmic C-terminus, loops alternating sides.
pub fn validate_gpcr_topology(map: &TopologyMap) -> std::result::Result<(), TopologyReason> {
    if map.count(SegmentKind::TmHelix) != GPCR_HELIX_COUNT {
        return Err(TopologyReason::WrongHelixCount);
    }
    let segments = map.segments();
    if segments[0].kind != SegmentKind::Outside {
        return Err(TopologyReason::NtermNotOutside);
    }
    if segments[segments.len() - 1].kind != SegmentKind::Inside {
        return Err(TopologyReason::CtermNotInside);
    }
    let mut expect = SegmentKind::Outside;
    for seg in segments.iter().filter(|s| s.kind != SegmentKind::TmHelix) {
        if seg.kind != expect {
            return Err(TopologyReason::NonAlternating);
        }
        expect = match expect {
            SegmentKind::Outside => SegmentKind::Inside,
            _ => SegmentKind::Outside,
        };
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionLengths {
    pub ntl: usize,
    pub ecl1: usize,
    pub ecl2: usize,
    pub ecl3: usize,
}

impl RegionLengths {
    pub fn as_array(&self) -> [usize; 4] {
        [self.ntl, self.ecl1, self.ecl2, self.ecl3]
    }

    pub fn has_empty(&self) -> bool {
        self.as_array().contains(&0)
    }
}

/// Lengths of the four extracellular regions, in N- to C-terminal order.
pub fn extract_region_lengths(map: &TopologyMap) -> Result<RegionLengths> {
    validate_gpcr_topology(map).map_err(|reason| {
        Error::Contract(format!(
            "topology of '{}' is not a valid 7TM map ({reason})",
            map.sequence_id()
        ))
    })?;
    let outside: Vec<usize> = map
        .segments()
        .iter()
        .filter(|s| s.kind == SegmentKind::Outside)
        .map(TopologySegment::residue_count)
        .collect();
    debug_assert_eq!(outside.len(), 4);
    Ok(RegionLengths {
        ntl: outside[0],
        ecl1: outside[1],
        ecl2: outside[2],
        ecl3: outside[3],
    })
}

struct Pending {
    length: Option<usize>,
    segments: Vec<TopologySegment>,
    last_line: usize,
}

/// Parses TMHMM long-format output, one map per distinct id in order of
/// first appearance.
pub fn parse_topology(text: &str) -> Result<Vec<TopologyMap>> {
    let mut order: Vec<String> = Vec::new();
    let mut pending: HashMap<String, Pending> = HashMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            // "# <id> Length: <n>"
            let fields: Vec<&str> = comment.split_whitespace().collect();
            if fields.len() == 3 && fields[1] == "Length:" {
                let id = fields[0];
                let length = fields[2].parse::<usize>().map_err(|_| Error::Topology {
                    id: id.to_string(),
                    line: line_no,
                    message: format!("non-numeric length '{}'", fields[2]),
                })?;
                entry(&mut order, &mut pending, id, line_no).length = Some(length);
            }
            continue;
        }

        let fields: Vec<&str> = line.split_whitespace().collect();
        let id = fields.first().copied().unwrap_or_default();
        let err = |message: String| Error::Topology {
            id: id.to_string(),
            line: line_no,
            message,
        };
        if fields.len() != 5 {
            return Err(err(format!("expected 5 fields, found {}", fields.len())));
        }
        let kind = SegmentKind::parse(fields[2]).ok_or_else(|| err(format!("unknown segment kind '{}'", fields[2])))?;
        let start = fields[3]
            .parse::<usize>()
            .map_err(|_| err(format!("non-numeric start '{}'", fields[3])))?;
        let end = fields[4]
            .parse::<usize>()
            .map_err(|_| err(format!("non-numeric end '{}'", fields[4])))?;
        entry(&mut order, &mut pending, id, line_no)
            .segments
            .push(TopologySegment { kind, start, end });
    }

    order
        .into_iter()
        .map(|id| {
            let p = pending.remove(&id).expect("id recorded in order");
            let length = p.length.or_else(|| p.segments.last().map(|s| s.end)).unwrap_or(0);
            TopologyMap::new(id.clone(), length, p.segments).map_err(|message| Error::Topology {
                id,
                line: p.last_line,
                message,
            })
        })
        .collect()
}

fn entry<'a>(
    order: &mut Vec<String>,
    pending: &'a mut HashMap<String, Pending>,
    id: &str,
    line_no: usize,
) -> &'a mut Pending {
    if !pending.contains_key(id) {
        order.push(id.to_string());
    }
    let p = pending.entry(id.to_string()).or_insert(Pending {
        length: None,
        segments: Vec::new(),
        last_line: line_no,
    });
    p.last_line = line_no;
    p
}

/// Writes maps back out in TMHMM long format.
pub fn write_topology(maps: &[TopologyMap]) -> String {
    let mut out = String::new();
    for map in maps {
        let id = map.sequence_id();
        out.push_str(&format!("# {id} Length: {}\n", map.length()));
        out.push_str(&format!(
            "# {id} Number of predicted TMHs:  {}\n",
            map.count(SegmentKind::TmHelix)
        ));
        for seg in map.segments() {
            out.push_str(&format!(
                "{id}\tTMHMM2.0\t{:<7}\t{:>6}\t{:>6}\n",
                seg.kind.token(),
                seg.start,
                seg.end
            ));
        }
    }
    out
}

/// Builds a map from a run of kinds and their lengths. Mostly a test and
/// synthetic-data helper.
pub fn map_from_lengths(
    id: impl Into<String>,
    parts: &[(SegmentKind, usize)],
) -> std::result::Result<TopologyMap, String> {
    let mut start = 1;
    let mut segments = Vec::with_capacity(parts.len());
    for &(kind, len) in parts {
        if len == 0 {
            return Err("zero-length segment".into());
        }
        segments.push(TopologySegment {
            kind,
            start,
            end: start + len - 1,
        });
        start += len;
    }
    TopologyMap::new(id, start - 1, segments)
}

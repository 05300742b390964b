//! FASTA ingestion and species labelling.
//!
//! Records carry an optional binary label: `Human` is the positive class,
//! every other species is `Other`. Labels come from the entry-name
//! convention `<NAME>_<SPECIES>` unless an override file says otherwise.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Residues accepted after uppercasing. `X` marks an unknown residue.
pub const RESIDUE_ALPHABET: &str = "ACDEFGHIKLMNPQRSTVWYX";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Human,
    Other,
}

impl Label {
    pub fn is_positive(self) -> bool {
        self == Label::Human
    }

    /// +1 for the positive class, -1 otherwise.
    pub fn sign(self) -> f64 {
        match self {
            Label::Human => 1.0,
            Label::Other => -1.0,
        }
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Human => Label::Other,
            Label::Other => Label::Human,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Human => "human",
            Label::Other => "other",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "human" => Ok(Label::Human),
            "other" => Ok(Label::Other),
            other => Err(format!("unknown label '{other}' (expected human or other)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceRecord {
    pub id: String,
    pub description: String,
    pub residues: String,
    pub label: Option<Label>,
}

impl SequenceRecord {
    /// True when the chain contains at least one unknown residue (`X`).
    pub fn has_unknown(&self) -> bool {
        self.residues.contains('X')
    }
}

/// Parses FASTA text into records in file order.
pub fn parse_fasta(text: &str) -> Result<Vec<SequenceRecord>> {
    let mut records = Vec::new();
    // (record, header line number)
    let mut current: Option<(SequenceRecord, usize)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        if let Some(header) = line.strip_prefix('>') {
            if let Some(done) = current.take() {
                records.push(finish_record(done)?);
            }
            let header = header.trim();
            let (id, description) = match header.split_once(char::is_whitespace) {
                Some((id, rest)) => (id, rest.trim()),
                None => (header, ""),
            };
            if id.is_empty() {
                return Err(Error::Fasta {
                    line: line_no,
                    message: "header without an identifier".into(),
                });
            }
            current = Some((
                SequenceRecord {
                    id: id.to_string(),
                    description: description.to_string(),
                    residues: String::new(),
                    label: None,
                },
                line_no,
            ));
            continue;
        }

        if line.trim().is_empty() {
            continue;
        }
        let Some((record, _)) = current.as_mut() else {
            return Err(Error::Fasta {
                line: line_no,
                message: "sequence data before any '>' header".into(),
            });
        };
        for c in line.chars().filter(|c| !c.is_whitespace()) {
            let upper = c.to_ascii_uppercase();
            if !RESIDUE_ALPHABET.contains(upper) {
                return Err(Error::Fasta {
                    line: line_no,
                    message: format!("residue '{c}' outside the amino acid alphabet"),
                });
            }
            record.residues.push(upper);
        }
    }
    if let Some(done) = current.take() {
        records.push(finish_record(done)?);
    }
    Ok(records)
}

fn finish_record((record, header_line): (SequenceRecord, usize)) -> Result<SequenceRecord> {
    if record.residues.is_empty() {
        return Err(Error::Fasta {
            line: header_line,
            message: format!("record '{}' has an empty sequence", record.id),
        });
    }
    Ok(record)
}

/// Serializes records back to FASTA with 60-residue lines.
pub fn write_fasta(records: &[SequenceRecord]) -> String {
    let mut out = String::new();
    for r in records {
        out.push('>');
        out.push_str(&r.id);
        if !r.description.is_empty() {
            out.push(' ');
            out.push_str(&r.description);
        }
        out.push('\n');
        let bytes = r.residues.as_bytes();
        for chunk in bytes.chunks(60) {
            // residues are ASCII by construction
            out.push_str(std::str::from_utf8(chunk).expect("ASCII residues"));
            out.push('\n');
        }
    }
    out
}

/// Label implied by the entry-name convention: `OPSD_HUMAN` is human.
pub fn label_from_id(id: &str) -> Label {
    match id.rsplit('_').next() {
        Some(species) if id.contains('_') && species == "HUMAN" => Label::Human,
        _ => Label::Other,
    }
}

#[derive(Debug, Clone)]
pub struct LabelOutcome {
    pub records: Vec<SequenceRecord>,
    /// Override entries whose id is absent from the corpus.
    pub unmatched_overrides: usize,
}

/// Labels every record. Overrides take precedence over the id convention.
pub fn assign_labels(records: Vec<SequenceRecord>, overrides: Option<&HashMap<String, Label>>) -> LabelOutcome {
    let mut unmatched_overrides = 0;
    if let Some(map) = overrides {
        unmatched_overrides = map.keys().filter(|id| !records.iter().any(|r| &r.id == *id)).count();
        if unmatched_overrides > 0 {
            log::warn!("{unmatched_overrides} label override(s) reference unknown ids");
        }
    }
    let records = records
        .into_iter()
        .map(|mut r| {
            let label = overrides
                .and_then(|m| m.get(&r.id).copied())
                .unwrap_or_else(|| label_from_id(&r.id));
            r.label = Some(label);
            r
        })
        .collect();
    LabelOutcome {
        records,
        unmatched_overrides,
    }
}

/// Parses an override file: `id<TAB>label` per line, `#` comments.
pub fn parse_label_overrides(text: &str) -> Result<HashMap<String, Label>> {
    let mut map = HashMap::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((id, label)) = line.split_once('\t') else {
            return Err(Error::Labels {
                line: idx + 1,
                message: "expected id<TAB>label".into(),
            });
        };
        let label = label
            .parse::<Label>()
            .map_err(|message| Error::Labels { line: idx + 1, message })?;
        map.insert(id.trim().to_string(), label);
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_multiline_lowercase_record() {
        let recs = parse_fasta(">OPSD_HUMAN rhodopsin\nmkt\nAV\n").unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].id, "OPSD_HUMAN");
        assert_eq!(recs[0].description, "rhodopsin");
        assert_eq!(recs[0].residues, "MKTAV");
    }

    #[test]
    fn empty_input_gives_no_records() {
        assert!(parse_fasta("").unwrap().is_empty());
    }

    #[test]
    fn preserves_file_order() {
        let recs = parse_fasta(">A\nMK\n>B\nRR\n").unwrap();
        let ids: Vec<_> = recs.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["A", "B"]);
    }

    #[test]
    fn errors_name_the_line() {
        match parse_fasta("MKT\n>A\nMK\n") {
            Err(Error::Fasta { line, .. }) => assert_eq!(line, 1),
            other => panic!("unexpected {other:?}"),
        }
        match parse_fasta(">A\nMK\n>B\n>C\nMK\n") {
            Err(Error::Fasta { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        match parse_fasta(">A\nMK\nMZ1\n") {
            Err(Error::Fasta { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_residue_is_flagged() {
        let recs = parse_fasta(">A\nMKXV\n").unwrap();
        assert!(recs[0].has_unknown());
    }

    #[test]
    fn labels_follow_species_suffix() {
        let recs = parse_fasta(">OPSD_HUMAN\nM\n>OPSD_BOVIN\nM\n>HUMAN\nM\n").unwrap();
        let out = assign_labels(recs, None);
        let labels: Vec<_> = out.records.iter().map(|r| r.label.unwrap()).collect();
        assert_eq!(labels, [Label::Human, Label::Other, Label::Other]);
    }

    #[test]
    fn override_wins_and_unknown_ids_are_counted() {
        let recs = parse_fasta(">XYZ1\nM\n>OPSD_HUMAN\nM\n").unwrap();
        let overrides = parse_label_overrides("# comment\nXYZ1\thuman\nOPSD_HUMAN\tother\nGHOST\thuman\n").unwrap();
        let out = assign_labels(recs, Some(&overrides));
        assert_eq!(out.records[0].label, Some(Label::Human));
        assert_eq!(out.records[1].label, Some(Label::Other));
        assert_eq!(out.unmatched_overrides, 1);
    }

    #[test]
    fn bad_override_line() {
        assert!(matches!(
            parse_label_overrides("A human\n"),
            Err(Error::Labels { line: 1, .. })
        ));
        assert!(matches!(
            parse_label_overrides("A\tmouse\n"),
            Err(Error::Labels { line: 1, .. })
        ));
    }
}

//! 24-dimensional feature vectors: 20 amino acid composition fractions
//! followed by the N-terminal and three extracellular loop lengths.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seqio::{Label, SequenceRecord};
use crate::topology::{extract_region_lengths, validate_gpcr_topology, RegionLengths, TopologyMap, TopologyReason};

/// One-letter codes in feature order.
pub const AMINO_ACIDS: [char; 20] = [
    'A', 'C', 'D', 'E', 'F', 'G', 'H', 'I', 'K', 'L', 'M', 'N', 'P', 'Q', 'R', 'S', 'T', 'V', 'W', 'Y',
];

pub const COMPOSITION_DIM: usize = 20;
pub const FEATURE_DIM: usize = COMPOSITION_DIM + 4;

pub const REGION_NAMES: [&str; 4] = ["ntl", "ecl1", "ecl2", "ecl3"];

fn residue_index(c: char) -> Option<usize> {
    AMINO_ACIDS.iter().position(|&a| a == c)
}

/// Fraction of each amino acid type. Unknown residues (`X`) count in
/// neither numerator nor denominator.
pub fn composition(residues: &str) -> Result<[f64; COMPOSITION_DIM]> {
    let mut counts = [0usize; COMPOSITION_DIM];
    let mut total = 0usize;
    for c in residues.chars() {
        if c == 'X' {
            continue;
        }
        let i =
            residue_index(c).ok_or_else(|| Error::Sequence(format!("residue '{c}' is not a standard amino acid")))?;
        counts[i] += 1;
        total += 1;
    }
    if total == 0 {
        return Err(Error::Sequence("composition undefined: no standard residues".into()));
    }
    let n = total as f64;
    Ok(counts.map(|c| c as f64 / n))
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub source_id: String,
    pub values: Vec<f64>,
    pub label: Label,
}

impl FeatureVector {
    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

pub fn build_vector(record: &SequenceRecord, regions: &RegionLengths) -> Result<FeatureVector> {
    let label = record
        .label
        .ok_or_else(|| Error::Contract(format!("record '{}' is unlabeled", record.id)))?;
    let mut values = Vec::with_capacity(FEATURE_DIM);
    values.extend_from_slice(&composition(&record.residues)?);
    values.extend(regions.as_array().iter().map(|&n| n as f64));
    Ok(FeatureVector {
        source_id: record.id.clone(),
        values,
        label,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalizeMode {
    None,
    #[default]
    Minmax,
}

impl FromStr for NormalizeMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "none" => Ok(NormalizeMode::None),
            "minmax" => Ok(NormalizeMode::Minmax),
            other => Err(format!("unknown normalization '{other}'")),
        }
    }
}

/// Per-feature min-max scaling fitted on training data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Normalizer {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
    #[serde(default)]
    pub fitted_on: usize,
}

impl Normalizer {
    pub fn fit<'a, I>(rows: I) -> Result<Normalizer>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut iter = rows.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::Degenerate("cannot fit a normalizer on no data".into()))?;
        let mut min = first.to_vec();
        let mut max = first.to_vec();
        let mut fitted_on = 1;
        for row in iter {
            if row.len() != min.len() {
                return Err(Error::Dimension {
                    expected: min.len(),
                    actual: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                min[j] = min[j].min(x);
                max[j] = max[j].max(x);
            }
            fitted_on += 1;
        }
        Ok(Normalizer { min, max, fitted_on })
    }

    pub fn fit_vectors(vectors: &[FeatureVector]) -> Result<Normalizer> {
        Normalizer::fit(vectors.iter().map(|v| v.values.as_slice()))
    }

    pub fn dim(&self) -> usize {
        self.min.len()
    }

    /// Scales into `[0, 1]`, clamping unseen values. Features that were
    /// constant during fitting map to 0.
    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        Ok(x.iter()
            .zip(self.min.iter().zip(&self.max))
            .map(|(&v, (&lo, &hi))| {
                let span = hi - lo;
                if span > 0.0 {
                    ((v - lo) / span).clamp(0.0, 1.0)
                } else {
                    0.0
                }
            })
            .collect())
    }

    /// Inverse of `apply` for values inside the fitted range.
    pub fn invert(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(self.min.iter().zip(&self.max))
            .map(|(&v, (&lo, &hi))| v * (hi - lo) + lo)
            .collect()
    }

    pub fn apply_vector(&self, v: &FeatureVector) -> Result<FeatureVector> {
        Ok(FeatureVector {
            source_id: v.source_id.clone(),
            values: self.apply(&v.values)?,
            label: v.label,
        })
    }
}

/// Why a record did not make it into a dataset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ExclusionReason {
    NoTopology,
    Topology(TopologyReason),
    EmptyRegion,
    BadSequence,
}

impl ExclusionReason {
    pub fn code(self) -> &'static str {
        match self {
            ExclusionReason::NoTopology => "NO_TOPOLOGY",
            ExclusionReason::Topology(r) => r.code(),
            ExclusionReason::EmptyRegion => "EMPTY_REGION",
            ExclusionReason::BadSequence => "BAD_SEQUENCE",
        }
    }
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Provenance {
    pub ingested: usize,
    pub retained: usize,
    pub excluded: BTreeMap<ExclusionReason, usize>,
}

impl Provenance {
    pub fn excluded_total(&self) -> usize {
        self.excluded.values().sum()
    }

    pub fn count(&self, reason: ExclusionReason) -> usize {
        self.excluded.get(&reason).copied().unwrap_or(0)
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "ingested {}, retained {}, filtered {}\n",
            self.ingested,
            self.retained,
            self.excluded_total()
        );
        for (reason, n) in &self.excluded {
            out.push_str(&format!("  {:<18} {n}\n", reason.code()));
        }
        out
    }
}

/// Labeled vectors of one common dimensionality.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Dataset {
    pub vectors: Vec<FeatureVector>,
    pub normalizer: Option<Normalizer>,
    pub provenance: Provenance,
}

impl Dataset {
    pub fn from_vectors(vectors: Vec<FeatureVector>) -> Result<Dataset> {
        if let Some(first) = vectors.first() {
            let dim = first.dim();
            if let Some(bad) = vectors.iter().find(|v| v.dim() != dim) {
                return Err(Error::Dimension {
                    expected: dim,
                    actual: bad.dim(),
                });
            }
        }
        let n = vectors.len();
        Ok(Dataset {
            vectors,
            normalizer: None,
            provenance: Provenance {
                ingested: n,
                retained: n,
                excluded: BTreeMap::new(),
            },
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.vectors.first().map(FeatureVector::dim)
    }

    pub fn count_label(&self, label: Label) -> usize {
        self.vectors.iter().filter(|v| v.label == label).count()
    }

    pub fn rows(&self) -> Vec<&[f64]> {
        self.vectors.iter().map(|v| v.values.as_slice()).collect()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.vectors.iter().map(|v| v.label).collect()
    }

    pub fn subset(&self, indices: &[usize]) -> Dataset {
        let vectors: Vec<_> = indices.iter().map(|&i| self.vectors[i].clone()).collect();
        let n = vectors.len();
        Dataset {
            vectors,
            normalizer: self.normalizer.clone(),
            provenance: Provenance {
                ingested: n,
                retained: n,
                excluded: BTreeMap::new(),
            },
        }
    }

    /// Fits min-max scaling on this data and returns the scaled copy.
    pub fn normalized(&self) -> Result<Dataset> {
        let normalizer = Normalizer::fit_vectors(&self.vectors)?;
        self.normalized_with(normalizer)
    }

    pub fn normalized_with(&self, normalizer: Normalizer) -> Result<Dataset> {
        let vectors = self
            .vectors
            .iter()
            .map(|v| normalizer.apply_vector(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset {
            vectors,
            normalizer: Some(normalizer),
            provenance: self.provenance.clone(),
        })
    }
}

/// Joins records to topologies by id and keeps the sequences that yield
/// a complete feature vector. Retained vectors are not normalized.
pub fn assemble_dataset(records: &[SequenceRecord], topologies: &[TopologyMap]) -> Result<Dataset> {
    let mut seen = HashSet::new();
    for r in records {
        if !seen.insert(r.id.as_str()) {
            return Err(Error::DuplicateId(r.id.clone()));
        }
        if r.label.is_none() {
            return Err(Error::Contract(format!("record '{}' is unlabeled", r.id)));
        }
    }
    let by_id: HashMap<&str, &TopologyMap> = topologies.iter().map(|t| (t.sequence_id(), t)).collect();

    let mut provenance = Provenance {
        ingested: records.len(),
        ..Provenance::default()
    };
    let mut vectors = Vec::new();
    for record in records {
        match vector_for(record, by_id.get(record.id.as_str()).copied()) {
            Ok(v) => vectors.push(v),
            Err(reason) => *provenance.excluded.entry(reason).or_default() += 1,
        }
    }
    provenance.retained = vectors.len();
    Ok(Dataset {
        vectors,
        normalizer: None,
        provenance,
    })
}

fn vector_for(
    record: &SequenceRecord,
    topology: Option<&TopologyMap>,
) -> std::result::Result<FeatureVector, ExclusionReason> {
    let topology = topology.ok_or(ExclusionReason::NoTopology)?;
    validate_gpcr_topology(topology).map_err(ExclusionReason::Topology)?;
    let regions = extract_region_lengths(topology).map_err(|_| ExclusionReason::EmptyRegion)?;
    if regions.has_empty() {
        return Err(ExclusionReason::EmptyRegion);
    }
    build_vector(record, &regions).map_err(|_| ExclusionReason::BadSequence)
}

pub fn feature_names() -> Vec<String> {
    AMINO_ACIDS
        .iter()
        .map(|c| c.to_string())
        .chain(REGION_NAMES.iter().map(|s| s.to_string()))
        .collect()
}

/// Comma-separated feature table with header
/// `id,A,C,...,Y,ntl,ecl1,ecl2,ecl3,label`. Numbers use the shortest
/// representation that parses back to the same `f64`.
pub fn write_feature_table(vectors: &[FeatureVector]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id".to_string()];
    header.extend(feature_names());
    header.push("label".into());
    w.write_record(&header).map_err(csv_err)?;
    for v in vectors {
        if v.dim() != FEATURE_DIM {
            return Err(Error::Dimension {
                expected: FEATURE_DIM,
                actual: v.dim(),
            });
        }
        let mut row = vec![v.source_id.clone()];
        row.extend(v.values.iter().map(|x| format!("{x}")));
        row.push(v.label.to_string());
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Table {
        line: 0,
        message: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("CSV output is UTF-8"))
}

fn csv_err(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    Error::Table {
        line,
        message: e.to_string(),
    }
}

pub fn read_feature_table(text: &str) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header = rdr.headers().map_err(csv_err)?.clone();
    let expected: Vec<String> = std::iter::once("id".to_string())
        .chain(feature_names())
        .chain(std::iter::once("label".to_string()))
        .collect();
    if header.iter().ne(expected.iter().map(String::as_str)) {
        return Err(Error::Table {
            line: 1,
            message: format!("header must be '{}'", expected.join(",")),
        });
    }
    let mut vectors = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(csv_err)?;
        let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        let values = (1..=FEATURE_DIM)
            .map(|i| {
                rec[i].trim().parse::<f64>().map_err(|_| Error::Table {
                    line,
                    message: format!("column '{}' is not a number: '{}'", expected[i], &rec[i]),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let label = rec[FEATURE_DIM + 1]
            .parse::<Label>()
            .map_err(|message| Error::Table { line, message })?;
        vectors.push(FeatureVector {
            source_id: rec[0].to_string(),
            values,
            label,
        });
    }
    Dataset::from_vectors(vectors)
}

/// Attribute-relation export: 24 numeric attributes plus a nominal class.
pub fn write_arff(vectors: &[FeatureVector], relation: &str) -> String {
    let mut out = format!("@relation {relation}\n\n");
    for name in feature_names() {
        out.push_str(&format!("@attribute {name} numeric\n"));
    }
    out.push_str("@attribute class {human,other}\n\n@data\n");
    for v in vectors {
        for x in &v.values {
            out.push_str(&format!("{x},"));
        }
        out.push_str(v.label.as_str());
        out.push('\n');
    }
    out
}

//! Seeded synthetic receptor corpora: FASTA records with matching
//! canonical 7TM topologies. Each class draws half of the amino acids
//! (alternating in alphabetical order) `ENRICHMENT` times as often as the
//! other half, with the halves swapped between classes, so every
//! composition feature is shifted by several within-class standard
//! deviations.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::features::AMINO_ACIDS;
use crate::seqio::{write_fasta, Label, SequenceRecord};
use crate::topology::{map_from_lengths, write_topology, SegmentKind, TopologyMap, GPCR_HELIX_COUNT};

const ENRICHMENT: f64 = 20.0;
const SPECIES: [&str; 5] = ["MOUSE", "RAT", "BOVIN", "CHICK", "DANRE"];

#[derive(Debug, Clone)]
pub struct SyntheticCorpus {
    pub records: Vec<SequenceRecord>,
    pub topologies: Vec<TopologyMap>,
}

impl SyntheticCorpus {
    pub fn fasta(&self) -> String {
        write_fasta(&self.records)
    }

    pub fn tmhmm(&self) -> String {
        write_topology(&self.topologies)
    }
}

fn residue_weights(label: Label) -> Vec<f64> {
    let parity = usize::from(!label.is_positive());
    (0..AMINO_ACIDS.len())
        .map(|i| if i % 2 == parity { ENRICHMENT } else { 1.0 })
        .collect()
}

/// Random canonical 7TM layout: extracellular N-terminus, 21-residue
/// helices, alternating loops, cytoplasmic C-terminal tail.
fn random_layout(rng: &mut ChaCha8Rng) -> Vec<(SegmentKind, usize)> {
    let mut parts = vec![(SegmentKind::Outside, rng.random_range(80..=200))];
    for h in 0..GPCR_HELIX_COUNT {
        parts.push((SegmentKind::TmHelix, 21));
        if h + 1 < GPCR_HELIX_COUNT {
            let side = if h % 2 == 0 {
                SegmentKind::Inside
            } else {
                SegmentKind::Outside
            };
            parts.push((side, rng.random_range(6..=30)));
        }
    }
    parts.push((SegmentKind::Inside, rng.random_range(80..=200)));
    parts
}

/// Generates `n_human` human and `n_other` non-human receptors,
/// interleaved, deterministic in `seed`.
pub fn generate_corpus(n_human: usize, n_other: usize, seed: u64) -> SyntheticCorpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let human = WeightedIndex::new(residue_weights(Label::Human)).expect("positive weights");
    let other = WeightedIndex::new(residue_weights(Label::Other)).expect("positive weights");

    let total = n_human + n_other;
    let mut records = Vec::with_capacity(total);
    let mut topologies = Vec::with_capacity(total);
    let (mut made_h, mut made_o) = (0, 0);
    for k in 0..total {
        let take_human = made_o >= n_other || (made_h < n_human && k % 2 == 0);
        let (label, dist, id) = if take_human {
            made_h += 1;
            (Label::Human, &human, format!("SYN{:04}_HUMAN", k + 1))
        } else {
            made_o += 1;
            let species = SPECIES[made_o % SPECIES.len()];
            (Label::Other, &other, format!("SYN{:04}_{species}", k + 1))
        };
        let layout = random_layout(&mut rng);
        let length: usize = layout.iter().map(|p| p.1).sum();
        let residues: String = (0..length).map(|_| AMINO_ACIDS[dist.sample(&mut rng)]).collect();
        topologies.push(map_from_lengths(id.clone(), &layout).expect("layout tiles the chain"));
        records.push(SequenceRecord {
            id,
            description: format!("synthetic receptor ({label})"),
            residues,
            label: None,
        });
    }
    SyntheticCorpus { records, topologies }
}

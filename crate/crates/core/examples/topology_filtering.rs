// Parse TMHMM long-format output, check the 7TM layout and measure the
// extracellular regions. Chains that fail the check are dropped from the
// dataset with a reason code.
//
// ```text
// cargo run --example topology_filtering
// ```

use gpcr_svm::features::assemble_dataset;
use gpcr_svm::seqio::{assign_labels, parse_fasta};
use gpcr_svm::topology::{extract_region_lengths, parse_topology, validate_gpcr_topology};

const TMHMM: &str = "\
# GOOD_HUMAN Length: 80
GOOD_HUMAN\tTMHMM2.0\toutside\t1\t10
GOOD_HUMAN\tTMHMM2.0\tTMhelix\t11\t15
GOOD_HUMAN\tTMHMM2.0\tinside\t16\t20
GOOD_HUMAN\tTMHMM2.0\tTMhelix\t21\t25
GOOD_HUMAN\tTMHMM2.0\toutside\t26\t31
GOOD_HUMAN\tTMHMM2.0\tTMhelix\t32\t36
GOOD_HUMAN\tTMHMM2.0\tinside\t37\t41
GOOD_HUMAN\tTMHMM2.0\tTMhelix\t42\t46
GOOD_HUMAN\tTMHMM2.0\toutside\t47\t54
GOOD_HUMAN\tTMHMM2.0\tTMhelix\t55\t59
GOOD_HUMAN\tTMHMM2.0\tinside\t60\t64
GOOD_HUMAN\tTMHMM2.0\tTMhelix\t65\t69
GOOD_HUMAN\tTMHMM2.0\toutside\t70\t72
GOOD_HUMAN\tTMHMM2.0\tTMhelix\t73\t77
GOOD_HUMAN\tTMHMM2.0\tinside\t78\t80
# SHORT_MOUSE Length: 30
SHORT_MOUSE\tTMHMM2.0\toutside\t1\t10
SHORT_MOUSE\tTMHMM2.0\tTMhelix\t11\t25
SHORT_MOUSE\tTMHMM2.0\tinside\t26\t30
";

pub fn run() -> gpcr_svm::Result<String> {
    let mut out = String::new();
    let maps = parse_topology(TMHMM)?;
    for map in &maps {
        match validate_gpcr_topology(map) {
            Ok(()) => {
                let r = extract_region_lengths(map)?;
                out.push_str(&format!(
                    "{}: 7TM ok, ntl {} ecl1 {} ecl2 {} ecl3 {}\n",
                    map.sequence_id(),
                    r.ntl,
                    r.ecl1,
                    r.ecl2,
                    r.ecl3
                ));
            }
            Err(reason) => out.push_str(&format!("{}: rejected ({})\n", map.sequence_id(), reason.code())),
        }
    }

    // A third sequence has no prediction at all.
    let fasta = format!(
        ">GOOD_HUMAN\n{}\n>SHORT_MOUSE\n{}\n>ORPHAN_RAT\nMKTLLV\n",
        "ACDEFGHIKL".repeat(8),
        "LLVVSSTTGN".repeat(3)
    );
    let records = assign_labels(parse_fasta(&fasta)?, None).records;
    let dataset = assemble_dataset(&records, &maps)?;
    out.push('\n');
    out.push_str(&dataset.provenance.summary());
    Ok(out)
}

#[allow(dead_code)]
fn main() -> gpcr_svm::Result<()> {
    print!("{}", run()?);
    Ok(())
}

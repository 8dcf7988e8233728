#![allow(dead_code)]

use sample_align::seqcore::{generate_family, Alignment, AlphabetKind, GenConfig, Sequence};

/// A seeded family with the rates used across the integration tests.
pub fn family(alphabet: AlphabetKind, depth: u32, length: usize, seed: u64) -> (Vec<Sequence>, Alignment) {
    generate_family(&GenConfig {
        alphabet,
        tree_depth: depth,
        root_length: length,
        sub_rate: 0.05,
        ins_rate: 0.01,
        del_rate: 0.01,
        seed,
    })
    .expect("valid generator config")
}

/// Shape and de-gap checks every pipeline output must pass. Returns a
/// description of the first violation.
pub fn integrity(aln: &Alignment, input: &[Sequence]) -> Result<(), String> {
    if aln.len() != input.len() {
        return Err(format!("{} rows for {} inputs", aln.len(), input.len()));
    }
    for (row, seq) in aln.rows().iter().zip(input) {
        if row.residues.len() != aln.width() {
            return Err(format!("row {} has width {}", row.id, row.residues.len()));
        }
        if row.source_index != seq.source_index || row.id != seq.id {
            return Err(format!("row {} out of input order", row.id));
        }
        if row.ungapped() != seq.residues {
            return Err(format!("row {} does not de-gap to its input", row.id));
        }
    }
    Ok(())
}

use sample_align::msa::Step;
use sample_align::seqcore::{SubstitutionMatrix, GAP};

/// Score of placing column `a` (or a gap column when `None`) against column
/// `b` (or gap), summed over every pair of one row from each side and scaled
/// by the product of depths: gap against gap is 0, residue against gap is
/// `-gap_penalty`.
fn cross_column(a: Option<&[u8]>, b: Option<&[u8]>, da: usize, db: usize, m: &SubstitutionMatrix) -> i64 {
    let gaps_a = vec![GAP; da];
    let gaps_b = vec![GAP; db];
    let a = a.unwrap_or(&gaps_a);
    let b = b.unwrap_or(&gaps_b);
    let mut s = 0i64;
    for &x in a {
        for &y in b {
            s += i64::from(match (x == GAP, y == GAP) {
                (true, true) => 0,
                (true, false) | (false, true) => -m.gap_penalty(),
                (false, false) => m.score(x, y).unwrap(),
            });
        }
    }
    s
}

fn columns(rows: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let w = rows.first().map_or(0, Vec::len);
    (0..w).map(|c| rows.iter().map(|r| r[c]).collect()).collect()
}

/// Scaled score of `path` aligning the row groups `a` and `b`.
pub fn path_score(a: &[Vec<u8>], b: &[Vec<u8>], path: &[Step], m: &SubstitutionMatrix) -> i64 {
    let (ca, cb) = (columns(a), columns(b));
    let (mut i, mut j, mut s) = (0, 0, 0);
    for step in path {
        s += match step {
            Step::Match => {
                i += 1;
                j += 1;
                cross_column(Some(&ca[i - 1]), Some(&cb[j - 1]), a.len(), b.len(), m)
            }
            Step::GapInB => {
                i += 1;
                cross_column(Some(&ca[i - 1]), None, a.len(), b.len(), m)
            }
            Step::GapInA => {
                j += 1;
                cross_column(None, Some(&cb[j - 1]), a.len(), b.len(), m)
            }
        };
    }
    assert_eq!((i, j), (ca.len(), cb.len()), "path does not span both profiles");
    s
}

/// Best scaled score over every global alignment path, by enumerating all
/// of them. Also returns the number of paths visited.
pub fn exhaustive_best(a: &[Vec<u8>], b: &[Vec<u8>], m: &SubstitutionMatrix) -> (i64, u64) {
    let (ca, cb) = (columns(a), columns(b));
    let (da, db) = (a.len(), b.len());
    fn walk(
        i: usize,
        j: usize,
        acc: i64,
        ca: &[Vec<u8>],
        cb: &[Vec<u8>],
        d: (usize, usize),
        m: &SubstitutionMatrix,
        best: &mut (i64, u64),
    ) {
        if i == ca.len() && j == cb.len() {
            best.0 = best.0.max(acc);
            best.1 += 1;
            return;
        }
        if i < ca.len() && j < cb.len() {
            let s = cross_column(Some(&ca[i]), Some(&cb[j]), d.0, d.1, m);
            walk(i + 1, j + 1, acc + s, ca, cb, d, m, best);
        }
        if i < ca.len() {
            let s = cross_column(Some(&ca[i]), None, d.0, d.1, m);
            walk(i + 1, j, acc + s, ca, cb, d, m, best);
        }
        if j < cb.len() {
            let s = cross_column(None, Some(&cb[j]), d.0, d.1, m);
            walk(i, j + 1, acc + s, ca, cb, d, m, best);
        }
    }
    let mut best = (i64::MIN, 0);
    walk(0, 0, 0, &ca, &cb, (da, db), m, &mut best);
    best
}

//! Alignment accuracy (Q-score), rank-distribution statistics and the
//! key=value reports built on them.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::seqcore::{Alignment, GAP};

/// Two residues placed in the same column, identified by row and by position
/// within the ungapped sequence. Always `row_a < row_b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResiduePair {
    pub row_a: usize,
    pub pos_a: usize,
    pub row_b: usize,
    pub pos_b: usize,
}

impl ResiduePair {
    fn ordered(r1: usize, p1: usize, r2: usize, p2: usize) -> Self {
        if r1 < r2 {
            ResiduePair { row_a: r1, pos_a: p1, row_b: r2, pos_b: p2 }
        } else {
            ResiduePair { row_a: r2, pos_a: p2, row_b: r1, pos_b: p1 }
        }
    }
}

/// Pairs computed with rows renumbered through `row_map` (alignment row
/// index to canonical index).
fn pairs_mapped(alignment: &Alignment, row_map: &[usize]) -> HashSet<ResiduePair> {
    let rows = alignment.rows();
    let mut pos = vec![0usize; rows.len()];
    let mut out = HashSet::new();
    let mut present: Vec<(usize, usize)> = Vec::with_capacity(rows.len());
    for c in 0..alignment.width() {
        present.clear();
        for (r, row) in rows.iter().enumerate() {
            if row.residues[c] != GAP {
                present.push((row_map[r], pos[r]));
                pos[r] += 1;
            }
        }
        for i in 0..present.len() {
            for j in i + 1..present.len() {
                let (ra, pa) = present[i];
                let (rb, pb) = present[j];
                out.insert(ResiduePair::ordered(ra, pa, rb, pb));
            }
        }
    }
    out
}

/// All aligned residue pairs, using the alignment's own row indices.
pub fn residue_pairs(alignment: &Alignment) -> HashSet<ResiduePair> {
    let identity: Vec<usize> = (0..alignment.len()).collect();
    pairs_mapped(alignment, &identity)
}

/// Fraction of the reference's residue pairs that `test` reproduces. Rows
/// are matched by id.
pub fn q_score(test: &Alignment, reference: &Alignment) -> Result<f64> {
    let ref_index: HashMap<&str, usize> = reference
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| (r.id.as_str(), i))
        .collect();
    if test.len() != reference.len() {
        return Err(Error::IdMismatch(format!(
            "{} rows vs {} rows",
            test.len(),
            reference.len()
        )));
    }
    let mut row_map = Vec::with_capacity(test.len());
    for row in test.rows() {
        let &i = ref_index
            .get(row.id.as_str())
            .ok_or_else(|| Error::IdMismatch(format!("{:?} is not in the reference", row.id)))?;
        if row.ungapped() != reference.rows()[i].ungapped() {
            return Err(Error::SequenceMismatch(row.id.clone()));
        }
        row_map.push(i);
    }
    let reference_pairs = residue_pairs(reference);
    if reference_pairs.is_empty() {
        return Err(Error::EmptyReference);
    }
    let test_pairs = pairs_mapped(test, &row_map);
    let correct = test_pairs.intersection(&reference_pairs).count();
    Ok(correct as f64 / reference_pairs.len() as f64)
}

/// Summary of two paired rank vectors: `a` centralized, `b` globalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankStats {
    pub max_a: f64,
    pub min_a: f64,
    pub mean_a: f64,
    pub max_b: f64,
    pub min_b: f64,
    pub mean_b: f64,
    /// Population variance of `b_i - a_i`.
    pub variance_diff: f64,
    pub stddev_diff: f64,
}

fn extrema_and_mean(v: &[f64]) -> (f64, f64, f64) {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    (max, min, v.iter().sum::<f64>() / v.len() as f64)
}

pub fn rank_stats(a: &[f64], b: &[f64]) -> Result<RankStats> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let (max_a, min_a, mean_a) = extrema_and_mean(a);
    let (max_b, min_b, mean_b) = extrema_and_mean(b);
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| y - x).collect();
    let mean_d = diffs.iter().sum::<f64>() / diffs.len() as f64;
    let variance_diff = diffs.iter().map(|d| (d - mean_d).powi(2)).sum::<f64>() / diffs.len() as f64;
    Ok(RankStats {
        max_a,
        min_a,
        mean_a,
        max_b,
        min_b,
        mean_b,
        variance_diff,
        stddev_diff: variance_diff.sqrt(),
    })
}

/// Field labels of the rank-comparison report, in output order.
pub const RANK_STATS_FIELDS: [&str; 8] = [
    "Maximum Central",
    "Minimum Central",
    "Average Centralized",
    "Maximum Globalized",
    "Minimum Globalized",
    "Average Globalized",
    "Variance w.r.t. Centralized",
    "Standard Dev. w.r.t Centralized",
];

impl RankStats {
    pub fn values(&self) -> [f64; 8] {
        [
            self.max_a,
            self.min_a,
            self.mean_a,
            self.max_b,
            self.min_b,
            self.mean_b,
            self.variance_diff,
            self.stddev_diff,
        ]
    }

    /// One `label=value` line per field, six decimals.
    pub fn report(&self) -> String {
        let mut s = String::new();
        for (k, v) in RANK_STATS_FIELDS.iter().zip(self.values()) {
            let _ = writeln!(s, "{k}={v:.6}");
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunComparison {
    pub q_pipeline: f64,
    pub q_sequential: f64,
    /// `q_pipeline / q_sequential`.
    pub ratio: f64,
}

impl RunComparison {
    pub fn report(&self) -> String {
        format!(
            "q_pipeline={:.6}\nq_sequential={:.6}\nratio={:.6}\n",
            self.q_pipeline, self.q_sequential, self.ratio
        )
    }
}

pub fn compare_runs(pipeline: &Alignment, sequential: &Alignment, reference: &Alignment) -> Result<RunComparison> {
    let q_pipeline = q_score(pipeline, reference)?;
    let q_sequential = q_score(sequential, reference)?;
    Ok(RunComparison {
        q_pipeline,
        q_sequential,
        ratio: q_pipeline / q_sequential,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::AlignedRow;

    fn aln(rows: &[&str]) -> Alignment {
        Alignment::new(
            rows.iter()
                .enumerate()
                .map(|(i, r)| AlignedRow {
                    id: format!("r{i}"),
                    source_index: i,
                    residues: r.as_bytes().to_vec(),
                })
                .collect(),
        )
        .unwrap()
    }

    fn pair(ra: usize, pa: usize, rb: usize, pb: usize) -> ResiduePair {
        ResiduePair { row_a: ra, pos_a: pa, row_b: rb, pos_b: pb }
    }

    #[test]
    fn pairs_examples() {
        let p = residue_pairs(&aln(&["AB", "AB"]));
        assert_eq!(p, HashSet::from([pair(0, 0, 1, 0), pair(0, 1, 1, 1)]));
        assert!(residue_pairs(&aln(&["A-", "-B"])).is_empty());
    }

    #[test]
    fn q_examples() {
        let r = aln(&["AB", "AB"]);
        assert_eq!(q_score(&r, &r).unwrap(), 1.0);
        assert_eq!(q_score(&aln(&["AB-", "-AB"]), &r).unwrap(), 0.0);
        // four reference pairs, test keeps the first two columns only
        let reference = aln(&["ABCD", "ABCD"]);
        let test = aln(&["ABCD--", "AB--CD"]);
        assert_eq!(q_score(&test, &reference).unwrap(), 0.5);
    }

    #[test]
    fn q_matches_rows_by_id() {
        let reference = aln(&["AB", "AB", "A-"]);
        let mut rows = reference.rows().to_vec();
        rows.reverse();
        let shuffled = Alignment::new(rows).unwrap();
        assert_eq!(q_score(&shuffled, &reference).unwrap(), 1.0);
    }

    #[test]
    fn q_errors() {
        let r = aln(&["AB", "AB"]);
        let mut other = r.rows().to_vec();
        other[1].id = "zz".into();
        assert!(matches!(
            q_score(&Alignment::new(other).unwrap(), &r),
            Err(Error::IdMismatch(_))
        ));
        assert_eq!(
            q_score(&aln(&["AB", "AC"]), &r),
            Err(Error::SequenceMismatch("r1".into()))
        );
        let lonely = aln(&["AB"]);
        assert_eq!(q_score(&lonely, &lonely), Err(Error::EmptyReference));
    }

    #[test]
    fn stats_examples() {
        let s = rank_stats(&[0.0, 0.0], &[1.0, 3.0]).unwrap();
        assert_eq!(s.mean_b, 2.0);
        assert_eq!(s.variance_diff, 1.0);
        assert_eq!(s.stddev_diff, 1.0);
        let same = rank_stats(&[0.1, -2.0, 0.05], &[0.1, -2.0, 0.05]).unwrap();
        assert_eq!(same.variance_diff, 0.0);
        assert_eq!(same.stddev_diff, 0.0);
        assert_eq!(rank_stats(&[1.0], &[]), Err(Error::LengthMismatch(1, 0)));
    }

    #[test]
    fn stats_report_fields() {
        let s = rank_stats(&[0.0, 0.5], &[0.25, 0.5]).unwrap();
        let text = s.report();
        for f in RANK_STATS_FIELDS {
            assert!(text.contains(&format!("{f}=")), "{f}");
        }
        assert_eq!(text.lines().count(), 8);
    }

    #[test]
    fn comparison() {
        let reference = aln(&["ABCD", "ABCD"]);
        let c = compare_runs(&reference, &reference, &reference).unwrap();
        assert_eq!(c.ratio, 1.0);
        let half = aln(&["ABCD--", "AB--CD"]);
        let c = compare_runs(&half, &reference, &reference).unwrap();
        assert_eq!(c.ratio, 0.5);
    }
}

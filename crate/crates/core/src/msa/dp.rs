//! Global profile-profile alignment under a linear gap model.
//!
//! A column pair scores `Σ_{s,t} f_a(s) f_b(t) S(s, t)` with the gap treated
//! as a symbol (gap-gap = 0, symbol-gap = -gap_penalty). A column aligned to
//! nothing scores as if aligned to an all-gap column. All arithmetic is done
//! on integer counts, scaled by `depth_a * depth_b`, so results are exact.

use crate::error::{Error, Result};
use crate::seqcore::{AlignedRow, Alignment, SubstitutionMatrix, GAP};

use super::Profile;

/// One step of a global alignment path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    /// Column of A aligned with column of B.
    Match,
    /// B column aligned to a gap inserted into A.
    GapInA,
    /// A column aligned to a gap inserted into B.
    GapInB,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileAlignment {
    pub path: Vec<Step>,
    /// Optimal score multiplied by `scale`.
    pub scaled_score: i64,
    /// `depth_a * depth_b`.
    pub scale: i64,
    /// DP cells evaluated (`width_a * width_b`).
    pub cells: u64,
}

impl ProfileAlignment {
    pub fn score(&self) -> f64 {
        self.scaled_score as f64 / self.scale as f64
    }
}

const FROM_DIAG: u8 = 0;
const FROM_UP: u8 = 1; // consumes an A column: GapInB
const FROM_LEFT: u8 = 2; // consumes a B column: GapInA

fn check_dim(p: &Profile, matrix: &SubstitutionMatrix) -> Result<()> {
    if p.dim() != matrix.dim() {
        return Err(Error::InvalidConfig(format!(
            "profile has {} symbols per column but the matrix has {}",
            p.dim(),
            matrix.dim()
        )));
    }
    Ok(())
}

/// For every column of `p`, `v[s] = Σ_t count(t) * S(s, t)`.
fn weighted_columns(p: &Profile, matrix: &SubstitutionMatrix) -> Vec<i64> {
    let dim = matrix.dim();
    let mut out = vec![0i64; p.width() * dim];
    for c in 0..p.width() {
        let col = p.column(c);
        let v = &mut out[c * dim..(c + 1) * dim];
        for (t, &n) in col.iter().enumerate() {
            if n == 0 {
                continue;
            }
            for (s, vs) in v.iter_mut().enumerate() {
                *vs += i64::from(n) * i64::from(matrix.score_index(s, t));
            }
        }
    }
    out
}

/// Nonzero `(symbol, count)` entries of every column.
fn sparse_columns(p: &Profile) -> Vec<Vec<(usize, i64)>> {
    (0..p.width())
        .map(|c| {
            p.column(c)
                .iter()
                .enumerate()
                .filter(|(_, &n)| n > 0)
                .map(|(s, &n)| (s, i64::from(n)))
                .collect()
        })
        .collect()
}

/// Needleman-Wunsch over profile columns. Among equal-scoring moves the
/// traceback prefers Match, then GapInB, then GapInA.
pub fn align_profiles(a: &Profile, b: &Profile, matrix: &SubstitutionMatrix) -> Result<ProfileAlignment> {
    if a.is_empty() || b.is_empty() || a.depth() == 0 || b.depth() == 0 {
        return Err(Error::EmptyProfile);
    }
    check_dim(a, matrix)?;
    check_dim(b, matrix)?;
    let (la, lb) = (a.width(), b.width());
    let (da, db) = (i64::from(a.depth()), i64::from(b.depth()));
    let gp = i64::from(matrix.gap_penalty());
    let dim = matrix.dim();

    // an A column against an all-gap column of depth db, and vice versa
    let gap_a: Vec<i64> = (0..la)
        .map(|i| -(da - i64::from(a.gap_count(i))) * gp * db)
        .collect();
    let gap_b: Vec<i64> = (0..lb)
        .map(|j| -(db - i64::from(b.gap_count(j))) * gp * da)
        .collect();
    let vb = weighted_columns(b, matrix);
    let sa = sparse_columns(a);

    let cols = lb + 1;
    let mut trace = vec![FROM_DIAG; (la + 1) * cols];
    let mut prev = vec![0i64; cols];
    let mut cur = vec![0i64; cols];
    for j in 1..=lb {
        prev[j] = prev[j - 1] + gap_b[j - 1];
        trace[j] = FROM_LEFT;
    }
    for i in 1..=la {
        cur[0] = prev[0] + gap_a[i - 1];
        trace[i * cols] = FROM_UP;
        let col_a = &sa[i - 1];
        for j in 1..=lb {
            let v = &vb[(j - 1) * dim..j * dim];
            let m: i64 = col_a.iter().map(|&(s, n)| n * v[s]).sum();
            let diag = prev[j - 1] + m;
            let up = prev[j] + gap_a[i - 1];
            let left = cur[j - 1] + gap_b[j - 1];
            let (best, from) = if diag >= up && diag >= left {
                (diag, FROM_DIAG)
            } else if up >= left {
                (up, FROM_UP)
            } else {
                (left, FROM_LEFT)
            };
            cur[j] = best;
            trace[i * cols + j] = from;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let scaled_score = prev[lb];

    let mut path = Vec::with_capacity(la + lb);
    let (mut i, mut j) = (la, lb);
    while i > 0 || j > 0 {
        match trace[i * cols + j] {
            FROM_DIAG => {
                path.push(Step::Match);
                i -= 1;
                j -= 1;
            }
            FROM_UP => {
                path.push(Step::GapInB);
                i -= 1;
            }
            _ => {
                path.push(Step::GapInA);
                j -= 1;
            }
        }
    }
    path.reverse();
    Ok(ProfileAlignment {
        path,
        scaled_score,
        scale: da * db,
        cells: (la as u64) * (lb as u64),
    })
}

/// Applies `path` to the rows of `a` and `b`, producing one alignment with
/// `a`'s rows followed by `b`'s.
pub fn merge_alignments(a: &Alignment, b: &Alignment, path: &[Step]) -> Result<Alignment> {
    let consumed_a = path.iter().filter(|s| **s != Step::GapInA).count();
    let consumed_b = path.iter().filter(|s| **s != Step::GapInB).count();
    if consumed_a != a.width() || consumed_b != b.width() {
        return Err(Error::InvalidConfig("path does not span both alignments".into()));
    }
    let expand = |row: &AlignedRow, skip: Step| {
        let mut out = Vec::with_capacity(path.len());
        let mut it = row.residues.iter();
        for &step in path {
            if step == skip {
                out.push(GAP);
            } else {
                out.push(*it.next().expect("path length checked"));
            }
        }
        AlignedRow {
            id: row.id.clone(),
            source_index: row.source_index,
            residues: out,
        }
    };
    let rows = a
        .rows()
        .iter()
        .map(|r| expand(r, Step::GapInA))
        .chain(b.rows().iter().map(|r| expand(r, Step::GapInB)))
        .collect();
    Alignment::new(rows)
}

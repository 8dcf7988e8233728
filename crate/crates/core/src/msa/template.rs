//! Realignment of local alignments against a shared template profile, and
//! gluing the realigned parts into one alignment.
//!
//! Template coordinates interleave `ga_width + 1` insertion slots with the
//! template columns: `slot 0, T0, slot 1, T1, ..., T(w-1), slot w`.

use crate::error::{Error, Result};
use crate::seqcore::{AlignedRow, Alignment, SubstitutionMatrix, GAP};

use super::{align_profiles, profile_from_alignment, Profile, Step};

/// A local alignment expressed in template coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TweakedAlignment {
    pub worker_id: usize,
    pub ga_width: usize,
    pub rows: Vec<AlignedRow>,
    /// Local-insertion run length in each of the `ga_width + 1` slots.
    pub insert_counts: Vec<usize>,
}

impl TweakedAlignment {
    pub fn row_width(&self) -> usize {
        self.ga_width + self.insert_counts.iter().sum::<usize>()
    }
}

/// Aligns the profile of `local` to the fixed template `ga`.
///
/// Template columns with no local counterpart become all-gap columns in the
/// local rows; local columns with no template counterpart are recorded as
/// insertions in the slot after the template columns consumed so far.
pub fn realign_to_template(
    local: &Alignment,
    ga: &Profile,
    matrix: &SubstitutionMatrix,
) -> Result<TweakedAlignment> {
    realign_to_template_counted(local, ga, matrix).map(|(t, _)| t)
}

/// As [`realign_to_template`], also returning the DP cell count.
pub fn realign_to_template_counted(
    local: &Alignment,
    ga: &Profile,
    matrix: &SubstitutionMatrix,
) -> Result<(TweakedAlignment, u64)> {
    if local.is_empty() || local.width() == 0 || ga.is_empty() {
        return Err(Error::EmptyProfile);
    }
    let lp = profile_from_alignment(local, matrix.alphabet())?;
    let r = align_profiles(&lp, ga, matrix)?;
    let mut insert_counts = vec![0usize; ga.width() + 1];
    let mut consumed = 0;
    for &step in &r.path {
        match step {
            Step::Match | Step::GapInA => consumed += 1,
            Step::GapInB => insert_counts[consumed] += 1,
        }
    }
    let rows = local
        .rows()
        .iter()
        .map(|row| {
            let mut it = row.residues.iter();
            let residues = r
                .path
                .iter()
                .map(|&step| match step {
                    Step::GapInA => GAP,
                    _ => *it.next().expect("path spans the local alignment"),
                })
                .collect();
            AlignedRow {
                id: row.id.clone(),
                source_index: row.source_index,
                residues,
            }
        })
        .collect();
    Ok((
        TweakedAlignment {
            worker_id: 0,
            ga_width: ga.width(),
            rows,
            insert_counts,
        },
        r.cells,
    ))
}

/// Glues tweaked parts over one column space: each slot is widened to the
/// largest insertion run any part has there, insertions are left-aligned and
/// padded with gaps. Rows are returned ordered by `source_index`.
pub fn merge_tweaked(parts: &[TweakedAlignment], ga_width: usize) -> Result<Alignment> {
    let parts: Vec<&TweakedAlignment> = parts.iter().filter(|p| !p.rows.is_empty()).collect();
    for p in &parts {
        if p.ga_width != ga_width || p.insert_counts.len() != ga_width + 1 {
            return Err(Error::TemplateWidthMismatch {
                expected: ga_width,
                found: p.ga_width,
            });
        }
        if let Some(r) = p.rows.iter().find(|r| r.residues.len() != p.row_width()) {
            return Err(Error::RaggedAlignment {
                id: r.id.clone(),
                expected: p.row_width(),
                found: r.residues.len(),
            });
        }
    }
    let mut slot_width = vec![0usize; ga_width + 1];
    for p in &parts {
        for (w, &c) in slot_width.iter_mut().zip(&p.insert_counts) {
            *w = (*w).max(c);
        }
    }
    let total = ga_width + slot_width.iter().sum::<usize>();
    let mut rows = Vec::new();
    for p in &parts {
        for row in &p.rows {
            let mut out = Vec::with_capacity(total);
            let mut pos = 0;
            for s in 0..=ga_width {
                let run = p.insert_counts[s];
                out.extend_from_slice(&row.residues[pos..pos + run]);
                out.extend(std::iter::repeat_n(GAP, slot_width[s] - run));
                pos += run;
                if s < ga_width {
                    out.push(row.residues[pos]);
                    pos += 1;
                }
            }
            rows.push(AlignedRow {
                id: row.id.clone(),
                source_index: row.source_index,
                residues: out,
            });
        }
    }
    rows.sort_by_key(|r| r.source_index);
    Alignment::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqcore::{AlphabetKind, Sequence};

    fn single(s: &str, i: usize) -> Alignment {
        Alignment::single(&Sequence::new(format!("s{i}"), s.as_bytes().to_vec(), i))
    }

    fn prof(s: &str, m: &SubstitutionMatrix) -> Profile {
        profile_from_alignment(&single(s, 0), m.alphabet()).unwrap()
    }

    #[test]
    fn identical_profile_is_unchanged() {
        let m = SubstitutionMatrix::default_for(AlphabetKind::Dna);
        let t = realign_to_template(&single("ACGT", 0), &prof("ACGT", &m), &m).unwrap();
        assert_eq!(t.insert_counts, vec![0; 5]);
        assert_eq!(t.rows[0].residues, b"ACGT");
    }

    #[test]
    fn template_column_missing_locally() {
        let m = SubstitutionMatrix::default_for(AlphabetKind::Dna);
        let t = realign_to_template(&single("AGT", 0), &prof("ACGT", &m), &m).unwrap();
        assert_eq!(t.rows[0].residues, b"A-GT");
        assert_eq!(t.insert_counts, vec![0; 5]);
    }

    #[test]
    fn local_insertion_recorded() {
        let m = SubstitutionMatrix::default_for(AlphabetKind::Protein);
        let t = realign_to_template(&single("ACXGT", 0), &prof("ACGT", &m), &m).unwrap();
        assert_eq!(t.insert_counts, vec![0, 0, 1, 0, 0]);
        assert_eq!(t.rows[0].residues, b"ACXGT");
        assert_eq!(t.row_width(), 5);
    }

    #[test]
    fn merge_pads_slots() {
        let a = TweakedAlignment {
            worker_id: 0,
            ga_width: 2,
            rows: vec![AlignedRow {
                id: "a".into(),
                source_index: 1,
                residues: b"AXC".to_vec(),
            }],
            insert_counts: vec![0, 1, 0],
        };
        let b = TweakedAlignment {
            worker_id: 1,
            ga_width: 2,
            rows: vec![AlignedRow {
                id: "b".into(),
                source_index: 0,
                residues: b"AC".to_vec(),
            }],
            insert_counts: vec![0, 0, 0],
        };
        let m = merge_tweaked(&[a, b], 2).unwrap();
        assert_eq!(m.width(), 3);
        assert_eq!(m.rows()[0].id, "b");
        assert_eq!(m.rows()[0].residues, b"A-C");
        assert_eq!(m.rows()[1].residues, b"AXC");
    }

    #[test]
    fn merge_single_part_without_insertions() {
        let a = TweakedAlignment {
            worker_id: 0,
            ga_width: 3,
            rows: vec![AlignedRow {
                id: "a".into(),
                source_index: 0,
                residues: b"A-G".to_vec(),
            }],
            insert_counts: vec![0; 4],
        };
        let m = merge_tweaked(std::slice::from_ref(&a), 3).unwrap();
        assert_eq!(m.width(), 3);
        assert_eq!(m.rows(), &a.rows[..]);
    }

    #[test]
    fn merge_rejects_width_mismatch() {
        let a = TweakedAlignment {
            worker_id: 0,
            ga_width: 2,
            rows: vec![AlignedRow {
                id: "a".into(),
                source_index: 0,
                residues: b"AC".to_vec(),
            }],
            insert_counts: vec![0; 3],
        };
        assert_eq!(
            merge_tweaked(&[a], 3),
            Err(Error::TemplateWidthMismatch {
                expected: 3,
                found: 2
            })
        );
    }

    #[test]
    fn empty_parts_ignored() {
        let empty = TweakedAlignment {
            worker_id: 2,
            ga_width: 99,
            rows: vec![],
            insert_counts: vec![],
        };
        assert!(merge_tweaked(&[empty], 4).unwrap().is_empty());
    }
}

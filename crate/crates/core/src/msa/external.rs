use std::collections::HashMap;
use std::io::Write;
use std::process::{Command, Stdio};

use crate::error::{Error, Result};
use crate::seqcore::{parse_alignment, write_fasta, Alignment, Sequence, SubstitutionMatrix};

/// Runs an external aligner: FASTA on stdin, aligned FASTA on stdout.
///
/// `command` is split on whitespace into program and arguments. The output
/// must contain exactly the input ids with unchanged residues; rows are
/// returned ordered by `source_index`.
pub fn external_align(command: &str, sequences: &[Sequence], matrix: &SubstitutionMatrix) -> Result<Alignment> {
    if sequences.is_empty() {
        return Ok(Alignment::empty());
    }
    let mut parts = command.split_whitespace();
    let program = parts
        .next()
        .ok_or_else(|| Error::AlignerFailed("empty aligner command".into()))?;
    let mut child = Command::new(program)
        .args(parts)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| Error::AlignerFailed(format!("{program}: {e}")))?;

    let input = write_fasta(sequences, 60);
    let mut stdin = child.stdin.take().expect("stdin is piped");
    let writer = std::thread::spawn(move || stdin.write_all(&input));
    let output = child
        .wait_with_output()
        .map_err(|e| Error::AlignerFailed(e.to_string()))?;
    writer
        .join()
        .map_err(|_| Error::AlignerFailed("stdin writer panicked".into()))?
        .map_err(|e| Error::AlignerFailed(format!("writing input: {e}")))?;
    if !output.status.success() {
        return Err(Error::AlignerFailed(format!(
            "{program} exited with {}: {}",
            output.status,
            String::from_utf8_lossy(&output.stderr).trim()
        )));
    }

    let parsed = parse_alignment(&output.stdout, matrix.alphabet())
        .map_err(|e| Error::AlignerFailed(format!("unreadable output: {e}")))?;
    if parsed.len() != sequences.len() {
        return Err(Error::AlignerFailed(format!(
            "expected {} rows, got {}",
            sequences.len(),
            parsed.len()
        )));
    }
    let by_id: HashMap<&str, &Sequence> = sequences.iter().map(|s| (s.id.as_str(), s)).collect();
    let mut rows = parsed.into_rows();
    for row in &mut rows {
        let original = by_id
            .get(row.id.as_str())
            .ok_or_else(|| Error::AlignerFailed(format!("unexpected id {:?}", row.id)))?;
        if row.ungapped() != original.residues {
            return Err(Error::AlignerFailed(format!("residues of {:?} were altered", row.id)));
        }
        row.source_index = original.source_index;
    }
    rows.sort_by_key(|r| r.source_index);
    Alignment::new(rows)
}

#[cfg(all(test, unix))]
mod tests {
    use super::*;
    use crate::seqcore::AlphabetKind;

    fn seqs(rs: &[&str]) -> Vec<Sequence> {
        rs.iter()
            .enumerate()
            .map(|(i, r)| Sequence::new(format!("s{i}"), r.as_bytes().to_vec(), i + 10))
            .collect()
    }

    #[test]
    fn passthrough_aligner() {
        let m = SubstitutionMatrix::default_for(AlphabetKind::Dna);
        let a = external_align("cat", &seqs(&["ACGT", "AGGT"]), &m).unwrap();
        assert_eq!(a.width(), 4);
        assert_eq!(a.rows()[1].source_index, 11);
    }

    #[test]
    fn ragged_output_fails() {
        let m = SubstitutionMatrix::default_for(AlphabetKind::Dna);
        let e = external_align("cat", &seqs(&["ACGT", "AGT"]), &m).unwrap_err();
        assert!(matches!(e, Error::AlignerFailed(_)));
    }

    #[test]
    fn nonzero_exit_fails() {
        let m = SubstitutionMatrix::default_for(AlphabetKind::Dna);
        let e = external_align("false", &seqs(&["ACGT"]), &m).unwrap_err();
        assert!(matches!(e, Error::AlignerFailed(_)));
        let e = external_align("/nonexistent/aligner", &seqs(&["ACGT"]), &m).unwrap_err();
        assert!(matches!(e, Error::AlignerFailed(_)));
    }
}

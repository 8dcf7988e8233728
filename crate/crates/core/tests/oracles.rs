mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sample_align::kmer::{self, KmerConfig, RankedSequence};
use sample_align::msa::{
    align_profiles, build_distance_matrix, merge_tweaked, profile_from_alignment, realign_to_template, upgma,
    DistanceMatrix, Step, TreeNode,
};
use sample_align::partition::{bucket_of, partition_set, select_pivots, PivotSet};
use sample_align::quality::{q_score, rank_stats, residue_pairs, ResiduePair};
use sample_align::seqcore::{AlignedRow, Alignment, Alphabet, Sequence, SubstitutionMatrix, GAP};

fn random_seq(rng: &mut ChaCha8Rng, symbols: &[u8], len: usize, i: usize) -> Sequence {
    let r: Vec<u8> = (0..len).map(|_| symbols[rng.gen_range(0..symbols.len())]).collect();
    Sequence::new(format!("s{i}"), r, i)
}

fn aln(rows: &[Vec<u8>]) -> Alignment {
    Alignment::new(
        rows.iter()
            .enumerate()
            .map(|(i, r)| AlignedRow { id: format!("r{i}"), source_index: i, residues: r.clone() })
            .collect(),
    )
    .unwrap()
}

fn random_rows(rng: &mut ChaCha8Rng, n: usize, w: usize, symbols: &[u8], gap_p: f64) -> Vec<Vec<u8>> {
    (0..n)
        .map(|_| {
            (0..w)
                .map(|_| if rng.gen_bool(gap_p) { GAP } else { symbols[rng.gen_range(0..symbols.len())] })
                .collect()
        })
        .collect()
}

#[test]
fn distance_matrix_matches_double_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let seqs: Vec<Sequence> = (0..6)
        .map(|i| {
            let len = rng.gen_range(8..30);
            random_seq(&mut rng, b"ACGT", len, i)
        })
        .collect();
    let k = KmerConfig::new(3);
    let d = build_distance_matrix(&seqs, &k).unwrap();
    for i in 0..6 {
        for j in 0..6 {
            let want = if i == j { 0.0 } else { 1.0 - kmer::kmer_similarity(&seqs[i], &seqs[j], &k).unwrap() };
            assert_eq!(d.get(i, j), want, "({i},{j})");
        }
    }
}

#[test]
fn upgma_hand_example() {
    let d = DistanceMatrix::from_rows(3, vec![0.0, 0.2, 0.8, 0.2, 0.0, 0.9, 0.8, 0.9, 0.0]);
    let t = upgma(&d);
    let joins: Vec<(usize, usize, f64)> = t
        .nodes()
        .iter()
        .filter_map(|n| match *n {
            TreeNode::Join { left, right, height } => Some((left, right, height)),
            TreeNode::Leaf(_) => None,
        })
        .collect();
    assert_eq!(joins.len(), 2);
    assert_eq!((joins[0].0, joins[0].1), (0, 1));
    assert!((joins[0].2 - 0.1).abs() < 1e-12);
    // average of 0.8 and 0.9, halved
    assert!((joins[1].2 - 0.425).abs() < 1e-12);
}

#[test]
fn profile_frequencies_match_counting() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let alphabet = Alphabet::dna();
    for _ in 0..20 {
        let rows = random_rows(&mut rng, 4, 9, b"ACGTN", 0.3);
        let p = profile_from_alignment(&aln(&rows), &alphabet).unwrap();
        for c in 0..9 {
            let mut sum = 0.0;
            for (s, &sym) in alphabet.symbols().iter().chain(&[GAP]).enumerate() {
                let n = rows.iter().filter(|r| r[c] == sym).count();
                assert_eq!(p.frequency(c, s), n as f64 / 4.0);
                sum += p.frequency(c, s);
            }
            assert!((sum - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn residue_pairs_match_naive_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..30 {
        let rows = random_rows(&mut rng, 4, 10, b"ACDE", 0.35);
        let got = residue_pairs(&aln(&rows));
        let mut want = HashSet::new();
        let mut in_columns = 0;
        for c in 0..10 {
            let present = rows.iter().filter(|r| r[c] != GAP).count();
            in_columns += present * present.saturating_sub(1) / 2;
            for a in 0..4 {
                for b in a + 1..4 {
                    if rows[a][c] != GAP && rows[b][c] != GAP {
                        let pos = |r: usize| rows[r][..c].iter().filter(|&&x| x != GAP).count();
                        want.insert(ResiduePair { row_a: a, pos_a: pos(a), row_b: b, pos_b: pos(b) });
                    }
                }
            }
        }
        assert_eq!(got, want);
        assert_eq!(got.len(), in_columns);
    }
}

#[test]
fn profile_dp_spec_examples() {
    let m = SubstitutionMatrix::default_for(sample_align::seqcore::AlphabetKind::Dna);
    let a = profile_from_alignment(&aln(&[b"ACGT".to_vec()]), m.alphabet()).unwrap();
    let b = profile_from_alignment(&aln(&[b"AGT".to_vec()]), m.alphabet()).unwrap();
    let r = align_profiles(&a, &a, &m).unwrap();
    assert_eq!(r.score(), 20.0);
    assert_eq!(r.path, vec![Step::Match; 4]);
    let r = align_profiles(&a, &b, &m).unwrap();
    assert_eq!(r.path, vec![Step::Match, Step::GapInB, Step::Match, Step::Match]);
    assert_eq!(r.score(), 9.0);
}

#[test]
fn profile_dp_against_exhaustive_paths() {
    let m = SubstitutionMatrix::blosum62(6);
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..40 {
        let (n, w) = (rng.gen_range(1..=3), rng.gen_range(1..=6));
        let ra = random_rows(&mut rng, n, w, b"ACDWYX", 0.2);
        let (n, w) = (rng.gen_range(1..=3), rng.gen_range(1..=6));
        let rb = random_rows(&mut rng, n, w, b"ACDWYX", 0.2);
        let pa = profile_from_alignment(&aln(&ra), m.alphabet()).unwrap();
        let pb = profile_from_alignment(&aln(&rb), m.alphabet()).unwrap();
        let r = align_profiles(&pa, &pb, &m).unwrap();
        let (best, _) = common::exhaustive_best(&ra, &rb, &m);
        assert_eq!(r.scaled_score, best);
        assert_eq!(common::path_score(&ra, &rb, &r.path, &m), best);
        assert_eq!(r.cells, (ra[0].len() * rb[0].len()) as u64);
    }
}

#[test]
fn template_realignment_invariants() {
    let m = SubstitutionMatrix::blosum62(6);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut parts = Vec::new();
    let ga = profile_from_alignment(&aln(&random_rows(&mut rng, 3, 12, b"ACDEFG", 0.1)), m.alphabet()).unwrap();
    for w in 0..3 {
        let width = rng.gen_range(5..16);
        let rows = random_rows(&mut rng, 3, width, b"ACDEFG", 0.0);
        let local = Alignment::new(
            rows.iter()
                .enumerate()
                .map(|(i, r)| AlignedRow { id: format!("w{w}r{i}"), source_index: 10 * i + w, residues: r.clone() })
                .collect(),
        )
        .unwrap();
        let t = realign_to_template(&local, &ga, &m).unwrap();
        assert_eq!(t.insert_counts.len(), ga.width() + 1);
        for (row, orig) in t.rows.iter().zip(local.rows()) {
            assert_eq!(row.residues.len(), t.row_width());
            assert_eq!(row.ungapped(), orig.ungapped());
        }
        parts.push(t);
    }
    let merged = merge_tweaked(&parts, ga.width()).unwrap();
    let slots: usize = (0..=ga.width())
        .map(|s| parts.iter().map(|p| p.insert_counts[s]).max().unwrap())
        .sum();
    assert_eq!(merged.width(), ga.width() + slots);
    assert_eq!(merged.len(), 9);
    let order: Vec<usize> = merged.rows().iter().map(|r| r.source_index).collect();
    let mut sorted = order.clone();
    sorted.sort_unstable();
    assert_eq!(order, sorted);
    for part in &parts {
        for row in &part.rows {
            assert_eq!(merged.row(&row.id).unwrap().ungapped(), row.ungapped());
        }
    }
}

fn ranked(ranks: &[f64]) -> Vec<RankedSequence> {
    ranks
        .iter()
        .enumerate()
        .map(|(i, &r)| RankedSequence { sequence: Sequence::new(format!("s{i}"), b"A".to_vec(), i), mean_similarity: 0.0, rank: r })
        .collect()
}

proptest! {
    #[test]
    fn profile_dp_self_alignment_is_gap_free(
        rows in prop::collection::vec(prop::collection::vec(prop::sample::select(b"ACDEW-".to_vec()), 1..12), 1..4)
    ) {
        let w = rows[0].len();
        let rows: Vec<Vec<u8>> = rows.into_iter().map(|mut r| { r.resize(w, b'A'); r }).collect();
        let m = SubstitutionMatrix::blosum62(6);
        let p = profile_from_alignment(&aln(&rows), m.alphabet()).unwrap();
        let r = align_profiles(&p, &p, &m).unwrap();
        prop_assert!(r.path.iter().all(|&s| s == Step::Match), "{:?}", r.path);
    }

    #[test]
    fn partition_conserves_and_orders(
        ranks in prop::collection::vec(-2.3f64..0.1, 1..80),
        pivots in prop::collection::vec(-2.3f64..0.1, 0..6),
    ) {
        let mut pivots = pivots;
        pivots.sort_by(f64::total_cmp);
        let pivots = PivotSet::from_sorted(pivots).unwrap();
        let a = partition_set(ranked(&ranks), &pivots);
        let mut seen: Vec<usize> = a.buckets.iter().flatten().map(|r| r.source_index()).collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..ranks.len()).collect::<Vec<_>>());
        let nonempty: Vec<_> = a.buckets.iter().filter(|b| !b.is_empty()).collect();
        for pair in nonempty.windows(2) {
            let hi = pair[0].iter().map(|r| r.rank).fold(f64::MIN, f64::max);
            let lo = pair[1].iter().map(|r| r.rank).fold(f64::MAX, f64::min);
            prop_assert!(hi <= lo);
        }
        for (i, b) in a.buckets.iter().enumerate() {
            for r in b {
                prop_assert_eq!(bucket_of(r.rank, &pivots), i);
            }
        }
    }

    #[test]
    fn pivot_selection_is_order_free(mut ys in prop::collection::vec(-2.3f64..0.1, 12), seed in any::<u64>()) {
        let a = select_pivots(&ys, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..ys.len()).rev() {
            ys.swap(i, rng.gen_range(0..=i));
        }
        prop_assert_eq!(a, select_pivots(&ys, 4).unwrap());
    }

    #[test]
    fn q_score_bounds(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let reference = random_rows(&mut rng, 3, 8, b"AC", 0.0);
        // the same residues with gaps shuffled in
        let test: Vec<Vec<u8>> = reference
            .iter()
            .map(|r| {
                let mut out = Vec::new();
                for &c in r {
                    while rng.gen_bool(0.3) { out.push(GAP); }
                    out.push(c);
                }
                out
            })
            .collect();
        let w = test.iter().map(Vec::len).max().unwrap();
        let test: Vec<Vec<u8>> = test.into_iter().map(|mut r| { r.resize(w, GAP); r }).collect();
        let q = q_score(&aln(&test), &aln(&reference)).unwrap();
        prop_assert!((0.0..=1.0).contains(&q));
        prop_assert_eq!(q_score(&aln(&reference), &aln(&reference)).unwrap(), 1.0);
    }

    #[test]
    fn rank_stats_of_equal_vectors(a in prop::collection::vec(-2.4f64..0.1, 1..50)) {
        let s = rank_stats(&a, &a).unwrap();
        prop_assert_eq!(s.variance_diff, 0.0);
        prop_assert_eq!(s.stddev_diff, 0.0);
        prop_assert_eq!(s.stddev_diff, s.variance_diff.sqrt());
    }
}

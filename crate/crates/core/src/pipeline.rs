//! The distributed aligner end to end.
//!
//! [`run_worker`] is the per-worker program; every worker of a communicator
//! calls it, and only the root supplies the job and receives the result.
//! [`run_sample_align_d`] runs it on in-process workers.

use std::fmt::Write as _;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::kmer::{self, KmerConfig, RankedSequence};
use crate::msa::{self, profile_from_alignment, DpStats, TweakedAlignment};
use crate::partition::{self, PartitionConfig, PivotSet, SampleCount};
use crate::seqcore::{AlignedRow, Alignment, AlphabetKind, Sequence, SubstitutionMatrix};
use crate::transport::{run_local, Communicator, Envelope};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    #[default]
    InProcess,
    Tcp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub kmer: KmerConfig,
    pub partition: PartitionConfig,
    /// Selects the default substitution matrix for the alphabet.
    pub alphabet: AlphabetKind,
    /// Replaces the built-in aligner for the per-bucket alignments.
    pub external_aligner: Option<String>,
    pub backend: Backend,
    /// Recorded with the run; the algorithm itself draws no random numbers.
    pub seed: u64,
}

impl PipelineConfig {
    pub fn new(alphabet: AlphabetKind, worker_count: usize) -> Self {
        PipelineConfig {
            kmer: KmerConfig::default_for(alphabet),
            partition: PartitionConfig::new(worker_count),
            alphabet,
            external_aligner: None,
            backend: Backend::InProcess,
            seed: 0,
        }
    }

    pub fn worker_count(&self) -> usize {
        self.partition.worker_count
    }

    pub fn matrix(&self) -> SubstitutionMatrix {
        SubstitutionMatrix::default_for(self.alphabet)
    }

    pub fn validate(&self) -> Result<()> {
        self.partition.validate()?;
        if self.kmer.kmer_len == 0 {
            return Err(Error::InvalidConfig("kmer_len must be at least 1".into()));
        }
        Ok(())
    }

    fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&(self.kmer.kmer_len as u32).to_le_bytes());
        out.push(self.kmer.exclude_self as u8);
        out.push(match self.alphabet {
            AlphabetKind::Protein => 0,
            AlphabetKind::Dna => 1,
        });
        let (mode, n) = match self.partition.sample_count {
            SampleCount::Auto => (0u8, 0),
            SampleCount::Fixed(n) => (1, n),
            SampleCount::All => (2, 0),
        };
        out.push(mode);
        out.extend_from_slice(&(n as u32).to_le_bytes());
        out.extend_from_slice(&(self.worker_count() as u32).to_le_bytes());
        out.extend_from_slice(&self.seed.to_le_bytes());
        let ext = self.external_aligner.as_deref().unwrap_or("");
        out.push(self.external_aligner.is_some() as u8);
        out.extend_from_slice(&(ext.len() as u32).to_le_bytes());
        out.extend_from_slice(ext.as_bytes());
        out
    }

    fn decode(bytes: &[u8], backend: Backend) -> Result<Self> {
        let bad = || Error::FrameCorrupt("malformed pipeline configuration".into());
        let u32_at = |i: usize| -> Result<usize> {
            Ok(u32::from_le_bytes(bytes.get(i..i + 4).ok_or_else(bad)?.try_into().unwrap()) as usize)
        };
        let byte_at = |i: usize| bytes.get(i).copied().ok_or_else(bad);
        let kmer_len = u32_at(0)?;
        let exclude_self = byte_at(4)? != 0;
        let alphabet = match byte_at(5)? {
            0 => AlphabetKind::Protein,
            1 => AlphabetKind::Dna,
            _ => return Err(bad()),
        };
        let sample_count = match (byte_at(6)?, u32_at(7)?) {
            (0, _) => SampleCount::Auto,
            (1, n) => SampleCount::Fixed(n),
            (2, _) => SampleCount::All,
            _ => return Err(bad()),
        };
        let worker_count = u32_at(11)?;
        let seed = u64::from_le_bytes(bytes.get(15..23).ok_or_else(bad)?.try_into().unwrap());
        let has_ext = byte_at(23)? != 0;
        let n = u32_at(24)?;
        let ext = bytes.get(28..28 + n).ok_or_else(bad)?;
        if bytes.len() != 28 + n {
            return Err(bad());
        }
        let external_aligner = if has_ext {
            Some(String::from_utf8(ext.to_vec()).map_err(|_| bad())?)
        } else {
            None
        };
        Ok(PipelineConfig {
            kmer: KmerConfig { kmer_len, exclude_self },
            partition: PartitionConfig { worker_count, sample_count },
            alphabet,
            external_aligner,
            backend,
            seed,
        })
    }
}

/// Counters for one phase, summed over workers (wall time is the slowest
/// worker's).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseMetrics {
    pub name: String,
    pub wall_ms: u64,
    pub dp_cells: u64,
    pub bytes_sent: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunMetrics {
    pub worker_count: usize,
    /// DP cells over every profile alignment on every worker.
    pub dp_cells: u64,
    pub bytes_sent: u64,
    pub phases: Vec<PhaseMetrics>,
    /// Sequences each worker aligned after redistribution.
    pub bucket_sizes: Vec<usize>,
}

impl RunMetrics {
    pub fn total_wall_ms(&self) -> u64 {
        self.phases.iter().map(|p| p.wall_ms).sum()
    }

    pub fn max_bucket(&self) -> usize {
        self.bucket_sizes.iter().copied().max().unwrap_or(0)
    }

    /// `key=value` lines.
    pub fn report(&self) -> String {
        let mut s = String::new();
        let sizes: Vec<String> = self.bucket_sizes.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "workers={}", self.worker_count);
        let _ = writeln!(s, "dp_cells={}", self.dp_cells);
        let _ = writeln!(s, "bytes_sent={}", self.bytes_sent);
        let _ = writeln!(s, "bucket_sizes={}", sizes.join(","));
        let _ = writeln!(s, "max_bucket={}", self.max_bucket());
        for p in &self.phases {
            let _ = writeln!(s, "wall_ms.{}={}", p.name, p.wall_ms);
        }
        let _ = writeln!(s, "wall_ms.total={}", self.total_wall_ms());
        s
    }

    /// One tab-separated record per phase: name, wall_ms, dp_cells, bytes_sent.
    pub fn phase_table(&self) -> String {
        let mut s = String::from("phase\twall_ms\tdp_cells\tbytes_sent\n");
        for p in &self.phases {
            let _ = writeln!(s, "{}\t{}\t{}\t{}", p.name, p.wall_ms, p.dp_cells, p.bytes_sent);
        }
        s
    }
}

/// Phase names in execution order.
pub const PHASES: [&str; 10] = [
    "shard",
    "local_rank",
    "sample_exchange",
    "global_rank",
    "pivots",
    "redistribute",
    "local_align",
    "ancestors",
    "realign",
    "glue",
];

struct PhaseClock {
    records: Vec<PhaseMetrics>,
    started: Instant,
    cells_at_start: u64,
    bytes_at_start: u64,
}

impl PhaseClock {
    fn new() -> Self {
        PhaseClock {
            records: Vec::new(),
            started: Instant::now(),
            cells_at_start: 0,
            bytes_at_start: 0,
        }
    }

    fn close(&mut self, name: &str, cells: u64, bytes: u64) {
        self.records.push(PhaseMetrics {
            name: name.to_string(),
            wall_ms: self.started.elapsed().as_millis() as u64,
            dp_cells: cells - self.cells_at_start,
            bytes_sent: bytes - self.bytes_at_start,
        });
        self.started = Instant::now();
        self.cells_at_start = cells;
        self.bytes_at_start = bytes;
    }
}

/// Contiguous blocks of `ceil(N/p)` then `floor(N/p)` sequences.
pub fn shard(sequences: &[Sequence], p: usize) -> Vec<Vec<Sequence>> {
    let n = sequences.len();
    let (base, extra) = (n / p, n % p);
    let mut out = Vec::with_capacity(p);
    let mut start = 0;
    for i in 0..p {
        let len = base + usize::from(i < extra);
        out.push(sequences[start..start + len].to_vec());
        start += len;
    }
    out
}

fn check_input(config: &PipelineConfig, sequences: &[Sequence]) -> Result<()> {
    config.validate()?;
    if sequences.is_empty() {
        return Err(Error::EmptyInput);
    }
    let matrix = config.matrix();
    for s in sequences {
        s.validate(matrix.alphabet())?;
    }
    let p = config.worker_count();
    if p > 1 {
        let smallest = sequences.len() / p;
        let need = match config.partition.sample_count {
            SampleCount::Fixed(n) => n.max(2),
            _ => 2,
        };
        if smallest < need {
            return Err(Error::InsufficientSequences(format!(
                "{} sequences over {p} workers leaves {smallest} per worker, {need} needed; use fewer workers",
                sequences.len()
            )));
        }
    }
    Ok(())
}

fn align_block(config: &PipelineConfig, sequences: &[Sequence], stats: &mut DpStats) -> Result<Alignment> {
    let matrix = config.matrix();
    match &config.external_aligner {
        Some(cmd) if sequences.len() > 1 => msa::external_align(cmd, sequences, &matrix),
        _ => msa::progressive_align_with_stats(sequences, &config.kmer, &matrix, stats),
    }
}

fn sample_sequences(partition: &PartitionConfig, sorted_local: &[RankedSequence]) -> Result<Vec<Sequence>> {
    Ok(partition
        .local_samples(sorted_local)?
        .into_iter()
        .map(|r| r.sequence)
        .collect())
}

/// Orders gathered samples by input position, so the rank sums do not
/// depend on how the input was sharded.
fn canonical_sample_order(samples: &mut [Sequence]) {
    samples.sort_by_key(|s| s.source_index);
}

/// The globalized ranks a distributed run computes, simulated in one
/// process: shard, rank each block locally, pick local samples, then rank
/// every sequence against the pooled samples. Output follows input order.
pub fn globalized_ranks(
    sequences: &[Sequence],
    kmer: &KmerConfig,
    partition: &PartitionConfig,
) -> Result<Vec<RankedSequence>> {
    partition.validate()?;
    if sequences.is_empty() {
        return Err(Error::EmptyInput);
    }
    let blocks = shard(sequences, partition.worker_count);
    let mut samples = Vec::new();
    for block in blocks.iter().filter(|b| !b.is_empty()) {
        let mut ranked = kmer::rank_all_centralized(block, kmer)?;
        kmer::sort_by_rank(&mut ranked);
        samples.extend(sample_sequences(partition, &ranked)?);
    }
    canonical_sample_order(&mut samples);
    kmer::rank_all_vs_samples(sequences, &samples, kmer)
}

/// Runs the whole algorithm with `config.worker_count()` in-process workers.
///
/// With one worker this is exactly the sequential aligner.
pub fn run_sample_align_d(config: &PipelineConfig, sequences: &[Sequence]) -> Result<(Alignment, RunMetrics)> {
    if config.backend != Backend::InProcess {
        return Err(Error::InvalidConfig(
            "tcp runs are driven per process through run_worker".into(),
        ));
    }
    check_input(config, sequences)?;
    let p = config.worker_count();
    if p == 1 {
        return run_sequential(config, sequences);
    }
    let mut results = run_local(p, |mut comm| {
        let job = (comm.is_root()).then_some((config, sequences));
        run_worker(&mut comm, job)
    })?;
    Ok(results.swap_remove(0).expect("root returns the result"))
}

fn run_sequential(config: &PipelineConfig, sequences: &[Sequence]) -> Result<(Alignment, RunMetrics)> {
    let started = Instant::now();
    let mut stats = DpStats::default();
    let alignment = align_block(config, sequences, &mut stats)?;
    let metrics = RunMetrics {
        worker_count: 1,
        dp_cells: stats.dp_cells,
        bytes_sent: 0,
        phases: vec![PhaseMetrics {
            name: "local_align".into(),
            wall_ms: started.elapsed().as_millis() as u64,
            dp_cells: stats.dp_cells,
            bytes_sent: 0,
        }],
        bucket_sizes: vec![sequences.len()],
    };
    Ok((alignment, metrics))
}

fn expect_sequences(env: Envelope) -> Result<Vec<Sequence>> {
    match env {
        Envelope::SequenceBatch(v) => Ok(v),
        other => Err(unexpected("SequenceBatch", &other)),
    }
}

fn expect_ranks(env: Envelope) -> Result<Vec<f64>> {
    match env {
        Envelope::RankVector(v) => Ok(v),
        other => Err(unexpected("RankVector", &other)),
    }
}

fn expect_control(env: Envelope) -> Result<Vec<u8>> {
    match env {
        Envelope::Control(v) => Ok(v),
        other => Err(unexpected("Control", &other)),
    }
}

fn unexpected(wanted: &str, got: &Envelope) -> Error {
    Error::FrameCorrupt(format!("expected {wanted}, got {:?}", got.msg_type()))
}

fn encode_u64s(values: &[u64]) -> Vec<u8> {
    values.iter().flat_map(|v| v.to_le_bytes()).collect()
}

fn decode_u64s(bytes: &[u8]) -> Result<Vec<u64>> {
    if bytes.len() % 8 != 0 {
        return Err(Error::FrameCorrupt("counter block length".into()));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

/// One worker's part of the distributed run. The root passes the job and
/// gets `Some` result; every other worker passes `None` and gets `None`.
/// The root's configuration is broadcast, so other workers need none.
pub fn run_worker(
    comm: &mut Communicator,
    job: Option<(&PipelineConfig, &[Sequence])>,
) -> Result<Option<(Alignment, RunMetrics)>> {
    let p = comm.size();
    let root = comm.is_root();
    if root {
        let (config, sequences) =
            job.ok_or_else(|| Error::InvalidConfig("root needs the job".into()))?;
        if config.worker_count() != p {
            return Err(Error::InvalidConfig(format!(
                "configured for {} workers, communicator has {p}",
                config.worker_count()
            )));
        }
        check_input(config, sequences)?;
        if p == 1 {
            return run_sequential(config, sequences).map(Some);
        }
    }
    if p == 1 {
        return Err(Error::InvalidConfig("root needs the job".into()));
    }

    let mut clock = PhaseClock::new();
    let mut stats = DpStats::default();

    // shard
    let config_env = job.map(|(c, _)| Envelope::Control(c.encode()));
    let backend = job.map_or(Backend::Tcp, |(c, _)| c.backend);
    let config = PipelineConfig::decode(&expect_control(comm.broadcast_from_root(config_env)?)?, backend)?;
    let parts = job.map(|(_, s)| shard(s, p).into_iter().map(Envelope::SequenceBatch).collect());
    let local = expect_sequences(comm.scatter_from_root(parts)?)?;
    clock.close(PHASES[0], stats.dp_cells, comm.bytes_sent());
    let matrix = config.matrix();

    // local rank, used only to pick samples
    let mut local_ranked = kmer::rank_all_centralized(&local, &config.kmer)?;
    kmer::sort_by_rank(&mut local_ranked);
    clock.close(PHASES[1], stats.dp_cells, comm.bytes_sent());

    let samples = sample_sequences(&config.partition, &local_ranked)?;
    let mut gathered = Vec::new();
    for env in comm.all_gather(Envelope::SequenceBatch(samples))? {
        gathered.extend(expect_sequences(env)?);
    }
    canonical_sample_order(&mut gathered);
    clock.close(PHASES[2], stats.dp_cells, comm.bytes_sent());

    let mut ranked = kmer::rank_all_vs_samples(&local, &gathered, &config.kmer)?;
    kmer::sort_by_rank(&mut ranked);
    clock.close(PHASES[3], stats.dp_cells, comm.bytes_sent());

    // p - 1 regular samples of the new ranks; duplicates when the block is small
    let rank_samples: Vec<f64> = partition::regular_sample_indices(ranked.len(), p - 1)
        .into_iter()
        .map(|i| ranked[i].rank)
        .collect();
    let at_root = comm.gather_at_root(Envelope::RankVector(rank_samples))?;
    let pivot_env = if root {
        let mut all = Vec::with_capacity(p * (p - 1));
        for env in at_root {
            all.extend(expect_ranks(env)?);
        }
        Some(Envelope::RankVector(partition::select_pivots(&all, p)?.pivots().to_vec()))
    } else {
        None
    };
    let pivots = PivotSet::from_sorted(expect_ranks(comm.broadcast_from_root(pivot_env)?)?)?;
    clock.close(PHASES[4], stats.dp_cells, comm.bytes_sent());

    let buckets = partition::partition_set(ranked, &pivots).buckets;
    let (seq_out, rank_out): (Vec<_>, Vec<_>) = buckets
        .into_iter()
        .map(|b| {
            let ranks = b.iter().map(|r| r.rank).collect();
            let seqs = b.into_iter().map(|r| r.sequence).collect();
            (Envelope::SequenceBatch(seqs), Envelope::RankVector(ranks))
        })
        .unzip();
    let seq_in = comm.all_to_all(seq_out)?;
    let rank_in = comm.all_to_all(rank_out)?;
    let mut bucket: Vec<RankedSequence> = Vec::new();
    for (s, r) in seq_in.into_iter().zip(rank_in) {
        let (s, r) = (expect_sequences(s)?, expect_ranks(r)?);
        if s.len() != r.len() {
            return Err(Error::FrameCorrupt("bucket ranks and sequences differ in length".into()));
        }
        bucket.extend(s.into_iter().zip(r).map(|(sequence, rank)| RankedSequence {
            sequence,
            mean_similarity: f64::NAN,
            rank,
        }));
    }
    kmer::sort_by_rank(&mut bucket);
    let bucket: Vec<Sequence> = bucket.into_iter().map(|r| r.sequence).collect();
    clock.close(PHASES[5], stats.dp_cells, comm.bytes_sent());

    let local_aln = align_block(&config, &bucket, &mut stats)?;
    clock.close(PHASES[6], stats.dp_cells, comm.bytes_sent());

    // an empty bucket, or one whose columns are all majority-gap, has no ancestor
    let ancestor = match msa::consensus(&local_aln) {
        Ok(mut s) if !local_aln.is_empty() => {
            s.id = format!("ancestor{}", comm.rank());
            s.source_index = comm.rank();
            vec![s]
        }
        Ok(_) | Err(Error::EmptyAlignment) | Err(Error::AllGapConsensus) => Vec::new(),
        Err(e) => return Err(e),
    };
    let at_root = comm.gather_at_root(Envelope::SequenceBatch(ancestor))?;
    let ga_env = if root {
        let mut ancestors = Vec::new();
        for env in at_root {
            ancestors.extend(expect_sequences(env)?);
        }
        if ancestors.is_empty() {
            return Err(Error::AllGapConsensus);
        }
        let ga_aln = msa::progressive_align_with_stats(&ancestors, &config.kmer, &matrix, &mut stats)?;
        Some(Envelope::ProfileBlock(profile_from_alignment(&ga_aln, matrix.alphabet())?))
    } else {
        None
    };
    let ga = match comm.broadcast_from_root(ga_env)? {
        Envelope::ProfileBlock(p) => p,
        other => return Err(unexpected("ProfileBlock", &other)),
    };
    clock.close(PHASES[7], stats.dp_cells, comm.bytes_sent());

    let tweaked = if local_aln.is_empty() {
        TweakedAlignment {
            worker_id: comm.rank(),
            ga_width: ga.width(),
            rows: Vec::<AlignedRow>::new(),
            insert_counts: vec![0; ga.width() + 1],
        }
    } else {
        let (mut t, cells) = msa::realign_to_template_counted(&local_aln, &ga, &matrix)?;
        stats.dp_cells += cells;
        t.worker_id = comm.rank();
        t
    };
    clock.close(PHASES[8], stats.dp_cells, comm.bytes_sent());

    let at_root = comm.gather_at_root(Envelope::TweakBlock(tweaked))?;
    let glued = if root {
        let mut parts = Vec::with_capacity(p);
        for env in at_root {
            match env {
                Envelope::TweakBlock(t) => parts.push(t),
                other => return Err(unexpected("TweakBlock", &other)),
            }
        }
        // template columns that no worker matched are all-gap after gluing
        Some(msa::merge_tweaked(&parts, ga.width())?.without_empty_columns())
    } else {
        None
    };
    clock.close(PHASES[9], stats.dp_cells, comm.bytes_sent());

    // counters: bucket size, then (wall_ms, dp_cells, bytes_sent) per phase
    let mut counters = vec![bucket.len() as u64];
    for r in &clock.records {
        counters.extend([r.wall_ms, r.dp_cells, r.bytes_sent]);
    }
    let at_root = comm.gather_at_root(Envelope::Control(encode_u64s(&counters)))?;
    let Some(alignment) = glued else {
        return Ok(None);
    };
    let mut metrics = RunMetrics {
        worker_count: p,
        phases: clock
            .records
            .iter()
            .map(|r| PhaseMetrics { name: r.name.clone(), wall_ms: 0, dp_cells: 0, bytes_sent: 0 })
            .collect(),
        ..RunMetrics::default()
    };
    for env in at_root {
        let c = decode_u64s(&expect_control(env)?)?;
        if c.len() != 1 + 3 * metrics.phases.len() {
            return Err(Error::FrameCorrupt("counter block length".into()));
        }
        metrics.bucket_sizes.push(c[0] as usize);
        for (ph, v) in metrics.phases.iter_mut().zip(c[1..].chunks_exact(3)) {
            ph.wall_ms = ph.wall_ms.max(v[0]);
            ph.dp_cells += v[1];
            ph.bytes_sent += v[2];
        }
    }
    metrics.dp_cells = metrics.phases.iter().map(|p| p.dp_cells).sum();
    metrics.bytes_sent = metrics.phases.iter().map(|p| p.bytes_sent).sum();
    Ok(Some((alignment, metrics)))
}

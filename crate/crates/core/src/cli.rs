//! The `sample-align` command line: `align`, `gen`, `score`, `rank`, `bench`.
//!
//! Exit codes: 0 success, 1 usage, 2 data error, 3 transport error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::kmer::{self, KmerConfig};
use crate::msa::sp_score;
use crate::partition::{PartitionConfig, SampleCount};
use crate::pipeline::{self, Backend, PipelineConfig};
use crate::quality::{self, rank_stats};
use crate::seqcore::{
    generate_family, parse_alignment, parse_sequences, write_fasta, Alphabet, AlphabetKind, GenConfig,
    Sequence, SubstitutionMatrix,
};
use crate::transport::{Communicator, TcpRoot, TcpTransport};

const FASTA_WRAP: usize = 60;

#[derive(Parser, Debug)]
#[command(name = "sample-align", version, about = "Distributed multiple sequence alignment")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Align a FASTA file
    Align(AlignArgs),
    /// Generate a synthetic family with its true alignment
    Gen(GenArgs),
    /// Score an alignment
    Score(ScoreArgs),
    /// Print k-mer ranks
    Rank(RankArgs),
    /// Compare work and wall time across worker counts
    Bench(BenchArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Local,
    Tcp,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Role {
    Root,
    Worker,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum AlphabetArg {
    Protein,
    Dna,
}

impl From<AlphabetArg> for AlphabetKind {
    fn from(a: AlphabetArg) -> Self {
        match a {
            AlphabetArg::Protein => AlphabetKind::Protein,
            AlphabetArg::Dna => AlphabetKind::Dna,
        }
    }
}

fn parse_samples(s: &str) -> Result<SampleCount, String> {
    match s {
        "auto" => Ok(SampleCount::Auto),
        "all" => Ok(SampleCount::All),
        n => match n.parse::<usize>() {
            Ok(0) | Err(_) => Err(format!("expected a positive count, `auto` or `all`, got {n:?}")),
            Ok(n) => Ok(SampleCount::Fixed(n)),
        },
    }
}

#[derive(Args, Debug)]
struct AlignArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    /// Defaults to standard output
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = BackendArg::Local)]
    backend: BackendArg,
    #[arg(long, value_enum)]
    role: Option<Role>,
    /// Root: address to listen on (port 0 picks one). Worker: root address.
    #[arg(long)]
    connect: Option<String>,
    #[arg(long)]
    kmer: Option<usize>,
    #[arg(long, value_enum, default_value_t = AlphabetArg::Protein)]
    alphabet: AlphabetArg,
    /// Per-worker sample count, `auto` or `all`
    #[arg(long, default_value = "auto", value_parser = parse_samples)]
    samples: SampleCount,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    external_aligner: Option<String>,
    /// Per-phase metrics, tab separated
    #[arg(long)]
    metrics: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GenArgs {
    /// The family has 2^D leaves
    #[arg(long)]
    count_exponent: u32,
    #[arg(long)]
    length: usize,
    #[arg(long, default_value_t = 0.05)]
    sub_rate: f64,
    #[arg(long, default_value_t = 0.01)]
    ins_rate: f64,
    #[arg(long, default_value_t = 0.01)]
    del_rate: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = AlphabetArg::Protein)]
    alphabet: AlphabetArg,
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    true_alignment: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Metric {
    Q,
    Sp,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MatrixArg {
    Blosum62,
    Dna,
}

#[derive(Args, Debug)]
struct ScoreArgs {
    #[arg(long)]
    test: PathBuf,
    /// Reference alignment, needed for `q`
    #[arg(long = "ref")]
    reference: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Metric::Q)]
    metric: Metric,
    #[arg(long, value_enum, default_value_t = MatrixArg::Blosum62)]
    matrix: MatrixArg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum RankMode {
    Central,
    Globalized,
}

#[derive(Args, Debug)]
struct RankArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = RankMode::Central)]
    mode: RankMode,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value = "auto", value_parser = parse_samples)]
    samples: SampleCount,
    #[arg(long)]
    kmer: Option<usize>,
    #[arg(long, value_enum, default_value_t = AlphabetArg::Protein)]
    alphabet: AlphabetArg,
    /// Print both modes side by side and their statistics
    #[arg(long)]
    compare: bool,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    workers_list: Vec<usize>,
    #[arg(long, value_enum, default_value_t = BackendArg::Local)]
    backend: BackendArg,
    #[arg(long)]
    kmer: Option<usize>,
    #[arg(long, value_enum, default_value_t = AlphabetArg::Protein)]
    alphabet: AlphabetArg,
    #[arg(long, default_value = "auto", value_parser = parse_samples)]
    samples: SampleCount,
}

/// A failed command, by exit code.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Transport(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Transport(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Data(m) | Failure::Transport(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_transport() {
            Failure::Transport(e.to_string())
        } else if matches!(e, Error::InvalidConfig(_)) {
            Failure::Usage(e.to_string())
        } else {
            Failure::Data(e.to_string())
        }
    }
}

type CmdResult = std::result::Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_file(path: &Path) -> std::result::Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> CmdResult {
    std::fs::write(path, bytes).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn emit(out: &mut dyn Write, bytes: &[u8]) -> CmdResult {
    out.write_all(bytes)
        .and_then(|_| out.flush())
        .map_err(|e| Failure::Data(format!("standard output: {e}")))
}

fn read_sequences(path: &Path, kind: AlphabetKind) -> std::result::Result<Vec<Sequence>, Failure> {
    Ok(parse_sequences(&read_file(path)?, &Alphabet::new(kind))?)
}

fn kmer_config(kmer: Option<usize>, kind: AlphabetKind) -> KmerConfig {
    kmer.map_or_else(|| KmerConfig::default_for(kind), KmerConfig::new)
}

/// Runs the command line with `args` (program name first) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    let result = match cli.command {
        Command::Align(a) => cmd_align(a, out, err),
        Command::Gen(a) => cmd_gen(a),
        Command::Score(a) => cmd_score(a, out),
        Command::Rank(a) => cmd_rank(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    };
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "sample-align: {}", f.message());
            f.code()
        }
    }
}

fn cmd_align(a: AlignArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let kind = AlphabetKind::from(a.alphabet);
    let mut config = PipelineConfig::new(kind, a.workers);
    config.kmer = kmer_config(a.kmer, kind);
    config.partition.sample_count = a.samples;
    config.external_aligner = a.external_aligner.clone();
    config.seed = a.seed;
    config.validate()?;

    let result = match a.backend {
        BackendArg::Local => {
            if a.role.is_some() || a.connect.is_some() {
                return Err(usage("--role and --connect apply to the tcp backend only"));
            }
            let input = a.input.as_deref().ok_or_else(|| usage("--input is required"))?;
            let seqs = read_sequences(input, kind)?;
            pipeline::run_sample_align_d(&config, &seqs)?
        }
        BackendArg::Tcp => {
            config.backend = Backend::Tcp;
            let role = a.role.ok_or_else(|| usage("--role is required with --backend tcp"))?;
            let addr = a.connect.as_deref().ok_or_else(|| usage("--connect is required with --backend tcp"))?;
            match role {
                Role::Worker => {
                    let mut comm = Communicator::new(TcpTransport::connect(addr)?);
                    pipeline::run_worker(&mut comm, None)?;
                    return Ok(());
                }
                Role::Root => {
                    let input = a.input.as_deref().ok_or_else(|| usage("--input is required at the root"))?;
                    if a.output.is_none() {
                        return Err(usage("--output is required at the tcp root"));
                    }
                    let seqs = read_sequences(input, kind)?;
                    let root = TcpRoot::bind(addr, a.workers)?;
                    emit(out, format!("port={}\n", root.local_addr()?.port()).as_bytes())?;
                    let mut comm = Communicator::new(root.accept()?);
                    pipeline::run_worker(&mut comm, Some((&config, &seqs)))?
                        .expect("root receives the alignment")
                }
            }
        }
    };
    let (alignment, metrics) = result;
    let fasta = write_fasta(alignment.rows(), FASTA_WRAP);
    match &a.output {
        Some(path) => write_file(path, &fasta)?,
        None => emit(out, &fasta)?,
    }
    if let Some(path) = &a.metrics {
        write_file(path, metrics.phase_table().as_bytes())?;
    }
    let _ = err.write_all(metrics.report().as_bytes());
    Ok(())
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let config = GenConfig {
        alphabet: a.alphabet.into(),
        tree_depth: a.count_exponent,
        root_length: a.length,
        sub_rate: a.sub_rate,
        ins_rate: a.ins_rate,
        del_rate: a.del_rate,
        seed: a.seed,
    };
    config.validate().map_err(|e| usage(e.to_string()))?;
    let (leaves, truth) = generate_family(&config)?;
    write_file(&a.output, &write_fasta(&leaves, FASTA_WRAP))?;
    if let Some(path) = &a.true_alignment {
        write_file(path, &write_fasta(truth.rows(), FASTA_WRAP))?;
    }
    Ok(())
}

fn cmd_score(a: ScoreArgs, out: &mut dyn Write) -> CmdResult {
    let matrix = match a.matrix {
        MatrixArg::Blosum62 => SubstitutionMatrix::default_for(AlphabetKind::Protein),
        MatrixArg::Dna => SubstitutionMatrix::default_for(AlphabetKind::Dna),
    };
    let test = parse_alignment(&read_file(&a.test)?, matrix.alphabet())?;
    let line = match a.metric {
        Metric::Q => {
            let path = a.reference.as_deref().ok_or_else(|| usage("--ref is required for --metric q"))?;
            let reference = parse_alignment(&read_file(path)?, matrix.alphabet())?;
            format!("q={:.6}\n", quality::q_score(&test, &reference)?)
        }
        Metric::Sp => format!("sp={}\n", sp_score(&test, &matrix)?),
    };
    emit(out, line.as_bytes())
}

fn cmd_rank(a: RankArgs, out: &mut dyn Write) -> CmdResult {
    let kind = AlphabetKind::from(a.alphabet);
    let seqs = read_sequences(&a.input, kind)?;
    let kmer = kmer_config(a.kmer, kind);
    let partition = PartitionConfig {
        worker_count: a.workers,
        sample_count: a.samples,
    };
    partition.validate()?;
    let mut text = String::new();
    if a.compare {
        let central = kmer::rank_all_centralized(&seqs, &kmer)?;
        let global = pipeline::globalized_ranks(&seqs, &kmer, &partition)?;
        let _ = writeln!(text, "id\tcentral\tglobalized");
        for (c, g) in central.iter().zip(&global) {
            let _ = writeln!(text, "{}\t{:.6}\t{:.6}", c.sequence.id, c.rank, g.rank);
        }
        let a: Vec<f64> = central.iter().map(|r| r.rank).collect();
        let b: Vec<f64> = global.iter().map(|r| r.rank).collect();
        text.push('\n');
        text.push_str(&rank_stats(&a, &b)?.report());
    } else {
        let ranked = match a.mode {
            RankMode::Central => kmer::rank_all_centralized(&seqs, &kmer)?,
            RankMode::Globalized => pipeline::globalized_ranks(&seqs, &kmer, &partition)?,
        };
        for r in &ranked {
            let _ = writeln!(text, "{}\t{:.6}", r.sequence.id, r.rank);
        }
    }
    emit(out, text.as_bytes())
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write) -> CmdResult {
    if a.backend != BackendArg::Local {
        return Err(usage("bench runs on the local backend only"));
    }
    if a.workers_list.is_empty() {
        return Err(usage("--workers-list is empty"));
    }
    let kind = AlphabetKind::from(a.alphabet);
    let seqs = read_sequences(&a.input, kind)?;
    let mut text = String::from("workers\twall_ms\tdp_cells\tmax_bucket\tbucket_sum\n");
    for &p in &a.workers_list {
        let mut config = PipelineConfig::new(kind, p);
        config.kmer = kmer_config(a.kmer, kind);
        config.partition.sample_count = a.samples;
        let started = std::time::Instant::now();
        let (_, m) = pipeline::run_sample_align_d(&config, &seqs)?;
        let _ = writeln!(
            text,
            "{p}\t{}\t{}\t{}\t{}",
            started.elapsed().as_millis(),
            m.dp_cells,
            m.max_bucket(),
            m.bucket_sizes.iter().sum::<usize>()
        );
    }
    emit(out, text.as_bytes())
}

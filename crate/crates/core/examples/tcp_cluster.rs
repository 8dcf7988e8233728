//! A four-worker TCP mesh on loopback, each worker in its own thread,
//! running the full distributed aligner.

use std::thread;

use sample_align::pipeline::{run_worker, PipelineConfig};
use sample_align::seqcore::{generate_family, AlphabetKind, GenConfig};
use sample_align::transport::{Communicator, TcpRoot, TcpTransport};

fn main() -> sample_align::error::Result<()> {
    let p = 4;
    let (seqs, _) = generate_family(&GenConfig {
        alphabet: AlphabetKind::Dna,
        tree_depth: 5,
        root_length: 80,
        sub_rate: 0.05,
        ins_rate: 0.01,
        del_rate: 0.01,
        seed: 9,
    })?;
    let root = TcpRoot::bind("127.0.0.1:0", p)?;
    let addr = root.local_addr()?;
    println!("rendezvous at {addr}");

    let workers: Vec<_> = (1..p)
        .map(|_| {
            thread::spawn(move || -> sample_align::error::Result<()> {
                let mut comm = Communicator::new(TcpTransport::connect(addr)?);
                run_worker(&mut comm, None)?;
                Ok(())
            })
        })
        .collect();
    let mut comm = Communicator::new(root.accept()?);
    let config = PipelineConfig::new(AlphabetKind::Dna, p);
    let (aln, metrics) = run_worker(&mut comm, Some((&config, &seqs)))?.expect("root gets the result");
    for w in workers {
        w.join().expect("worker thread")?;
    }
    println!("{} rows, width {}", aln.len(), aln.width());
    print!("{}", metrics.report());
    Ok(())
}

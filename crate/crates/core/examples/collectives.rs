//! The collective operations on a local mesh: every worker sends its rank
//! to every other and the root gathers the results.

use sample_align::transport::{run_local, Envelope};

fn main() -> sample_align::error::Result<()> {
    let out = run_local(4, |mut comm| {
        let me = comm.rank() as f64;
        let outboxes = (0..comm.size()).map(|to| Envelope::RankVector(vec![me, to as f64])).collect();
        let inbox = comm.all_to_all(outboxes)?;
        let total: f64 = inbox
            .iter()
            .map(|e| match e {
                Envelope::RankVector(v) => v[0],
                _ => 0.0,
            })
            .sum();
        let gathered = comm.gather_at_root(Envelope::RankVector(vec![total]))?;
        Ok((comm.rank(), gathered.len(), comm.bytes_sent()))
    })?;
    for (rank, gathered, bytes) in out {
        println!("worker {rank}: gathered {gathered} envelopes, sent {bytes} bytes");
    }
    Ok(())
}

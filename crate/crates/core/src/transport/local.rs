use std::sync::mpsc::{channel, Receiver, Sender};

use super::{Communicator, Transport};
use crate::error::{Error, Result};

/// In-process transport: one unbounded queue per ordered worker pair.
pub struct LocalTransport {
    rank: usize,
    outgoing: Vec<Option<Sender<Vec<u8>>>>,
    incoming: Vec<Option<Receiver<Vec<u8>>>>,
}

impl LocalTransport {
    /// Creates `p` fully connected endpoints, indexed by worker id.
    pub fn mesh(p: usize) -> Vec<LocalTransport> {
        let mut endpoints: Vec<LocalTransport> = (0..p)
            .map(|rank| LocalTransport {
                rank,
                outgoing: (0..p).map(|_| None).collect(),
                incoming: (0..p).map(|_| None).collect(),
            })
            .collect();
        for from in 0..p {
            for to in 0..p {
                if from != to {
                    let (tx, rx) = channel();
                    endpoints[from].outgoing[to] = Some(tx);
                    endpoints[to].incoming[from] = Some(rx);
                }
            }
        }
        endpoints
    }
}

impl Transport for LocalTransport {
    fn rank(&self) -> usize {
        self.rank
    }

    fn size(&self) -> usize {
        self.outgoing.len()
    }

    fn send(&mut self, to: usize, frame: Vec<u8>) -> Result<()> {
        self.outgoing
            .get(to)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::InvalidConfig(format!("no route to worker {to}")))?
            .send(frame)
            .map_err(|_| Error::PeerDisconnected(format!("worker {to} has gone away")))
    }

    fn recv(&mut self, from: usize) -> Result<Vec<u8>> {
        self.incoming
            .get(from)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::InvalidConfig(format!("no route from worker {from}")))?
            .recv()
            .map_err(|_| Error::PeerDisconnected(format!("worker {from} has gone away")))
    }
}

/// Runs `worker` on `p` threads, each with its own communicator, and returns
/// the results in worker order. The first error (by worker index) wins.
pub fn run_local<T, F>(p: usize, worker: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(Communicator) -> Result<T> + Sync,
{
    if p == 0 {
        return Err(Error::InvalidConfig("worker_count must be at least 1".into()));
    }
    let worker = &worker;
    let results: Vec<Result<T>> = std::thread::scope(|scope| {
        let handles: Vec<_> = LocalTransport::mesh(p)
            .into_iter()
            .map(|t| scope.spawn(move || worker(Communicator::new(t))))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                h.join()
                    .unwrap_or_else(|_| Err(Error::PeerDisconnected("worker panicked".into())))
            })
            .collect()
    });
    // a worker that failed first makes its peers see disconnects; report the
    // root cause rather than the knock-on disconnect
    if let Some(e) = results
        .iter()
        .filter_map(|r| r.as_ref().err())
        .find(|e| !matches!(e, Error::PeerDisconnected(_)))
    {
        return Err(e.clone());
    }
    results.into_iter().collect()
}

//! Message passing between `p` workers.
//!
//! A [`Transport`] moves whole frames between two workers. [`Communicator`]
//! builds the collectives on top of it: every collective call carries a
//! sequence number, and a frame whose number does not match the receiver's
//! is rejected as corrupt. Worker 0 is the root.
//!
//! Collectives are naive: gather and broadcast go through the root directly,
//! all-gather and all-to-all exchange directly between every pair. Results
//! are ordered by sender index, never by arrival.

mod local;
mod tcp;
pub mod wire;

pub use local::{run_local, LocalTransport};
pub use tcp::{TcpRoot, TcpTransport};
pub use wire::{Envelope, MsgType};

use crate::error::{Error, Result};

/// Point-to-point frame delivery between the workers of one group.
pub trait Transport: Send {
    fn rank(&self) -> usize;
    fn size(&self) -> usize;
    /// Sends one encoded frame. Must not block on the receiver consuming it.
    fn send(&mut self, to: usize, frame: Vec<u8>) -> Result<()>;
    /// Receives the next frame sent by `from`.
    fn recv(&mut self, from: usize) -> Result<Vec<u8>>;
}

/// Collective operations over a [`Transport`].
pub struct Communicator {
    transport: Box<dyn Transport>,
    seq: u32,
    bytes_sent: u64,
}

impl std::fmt::Debug for Communicator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Communicator")
            .field("rank", &self.rank())
            .field("size", &self.size())
            .field("seq", &self.seq)
            .finish()
    }
}

impl Communicator {
    pub fn new(transport: impl Transport + 'static) -> Self {
        Communicator {
            transport: Box::new(transport),
            seq: 0,
            bytes_sent: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.transport.rank()
    }

    pub fn size(&self) -> usize {
        self.transport.size()
    }

    pub fn is_root(&self) -> bool {
        self.rank() == 0
    }

    /// Total frame bytes this worker has sent.
    pub fn bytes_sent(&self) -> u64 {
        self.bytes_sent
    }

    fn next_seq(&mut self) -> u32 {
        self.seq = self.seq.wrapping_add(1);
        self.seq
    }

    fn send(&mut self, to: usize, seq: u32, env: &Envelope) -> Result<()> {
        let frame = wire::encode_frame(seq, env);
        self.bytes_sent += frame.len() as u64;
        self.transport.send(to, frame)
    }

    fn recv(&mut self, from: usize, seq: u32) -> Result<Envelope> {
        let frame = self.transport.recv(from)?;
        let (got, env) = wire::decode_frame(&frame)?;
        if got != seq {
            return Err(Error::FrameCorrupt(format!(
                "collective {got} from worker {from} while expecting {seq}"
            )));
        }
        Ok(env)
    }

    /// Root receives every worker's payload in worker order; others get an
    /// empty list.
    pub fn gather_at_root(&mut self, local: Envelope) -> Result<Vec<Envelope>> {
        let seq = self.next_seq();
        if !self.is_root() {
            self.send(0, seq, &local)?;
            return Ok(Vec::new());
        }
        let mut out = Vec::with_capacity(self.size());
        out.push(local);
        for from in 1..self.size() {
            out.push(self.recv(from, seq)?);
        }
        Ok(out)
    }

    /// Every worker returns the root's payload. Non-root workers pass `None`.
    pub fn broadcast_from_root(&mut self, payload: Option<Envelope>) -> Result<Envelope> {
        let seq = self.next_seq();
        if self.is_root() {
            let env = payload.ok_or_else(|| {
                Error::InvalidConfig("root must supply the broadcast payload".into())
            })?;
            for to in 1..self.size() {
                self.send(to, seq, &env)?;
            }
            Ok(env)
        } else {
            self.recv(0, seq)
        }
    }

    /// Root hands `parts[i]` to worker `i`. Non-root workers pass `None`.
    pub fn scatter_from_root(&mut self, parts: Option<Vec<Envelope>>) -> Result<Envelope> {
        let seq = self.next_seq();
        if self.is_root() {
            let parts = parts.ok_or_else(|| {
                Error::InvalidConfig("root must supply the scattered parts".into())
            })?;
            if parts.len() != self.size() {
                return Err(Error::InvalidConfig(format!(
                    "scatter needs {} parts, got {}",
                    self.size(),
                    parts.len()
                )));
            }
            let mut it = parts.into_iter();
            let own = it.next().expect("size >= 1");
            for (to, env) in (1..).zip(it) {
                self.send(to, seq, &env)?;
            }
            Ok(own)
        } else {
            self.recv(0, seq)
        }
    }

    /// Every worker receives all `p` payloads in worker order.
    pub fn all_gather(&mut self, local: Envelope) -> Result<Vec<Envelope>> {
        let seq = self.next_seq();
        let me = self.rank();
        for to in (0..self.size()).filter(|&t| t != me) {
            self.send(to, seq, &local)?;
        }
        let mut out = Vec::with_capacity(self.size());
        for from in 0..self.size() {
            if from == me {
                out.push(local.clone());
            } else {
                out.push(self.recv(from, seq)?);
            }
        }
        Ok(out)
    }

    /// Personalized exchange: inbox slot `i` holds what worker `i` put in
    /// its outbox slot for this worker.
    pub fn all_to_all(&mut self, outboxes: Vec<Envelope>) -> Result<Vec<Envelope>> {
        if outboxes.len() != self.size() {
            return Err(Error::InvalidConfig(format!(
                "all_to_all needs {} outboxes, got {}",
                self.size(),
                outboxes.len()
            )));
        }
        let seq = self.next_seq();
        let me = self.rank();
        let mut own = None;
        for (to, env) in outboxes.into_iter().enumerate() {
            if to == me {
                own = Some(env);
            } else {
                self.send(to, seq, &env)?;
            }
        }
        let mut inbox = Vec::with_capacity(self.size());
        for from in 0..self.size() {
            if from == me {
                inbox.push(own.take().expect("own slot present"));
            } else {
                inbox.push(self.recv(from, seq)?);
            }
        }
        Ok(inbox)
    }
}

//! Multi-process backend: full TCP mesh with rendezvous at the root.
//!
//! Rendezvous, all frames with sequence number 0 and a `Control` body whose
//! first byte is a tag:
//!
//! 1. worker -> root `HELLO`: nonce u64, listen address (u32 length + UTF-8).
//! 2. root sorts the `p - 1` hellos by nonce and assigns ids `1..p`.
//!    root -> worker `ASSIGN`: id u32, p u32, then the listen address of
//!    every worker id `1..p` in order.
//! 3. worker `i` dials every worker `j` in `1..i` and sends `PEER`: id u32;
//!    it accepts one connection from each `j > i`.
//!
//! Each connection gets a reader thread that pushes whole frames into a
//! queue, so sends never wait on the receiving worker's progress.

use std::io::{Read, Write};
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::mpsc::{channel, Receiver};
use std::thread;
use std::time::{Duration, Instant};

use super::wire::{self, Envelope, HEADER_LEN};
use super::Transport;
use crate::error::{Error, Result};

const TAG_HELLO: u8 = 1;
const TAG_ASSIGN: u8 = 2;
const TAG_PEER: u8 = 3;

const CONNECT_PATIENCE: Duration = Duration::from_secs(30);

fn read_frame(stream: &mut TcpStream) -> Result<Vec<u8>> {
    let mut header = [0u8; HEADER_LEN];
    stream.read_exact(&mut header)?;
    let (_, len) = wire::parse_header(&header)?;
    let mut frame = Vec::with_capacity(HEADER_LEN + len);
    frame.extend_from_slice(&header);
    frame.resize(HEADER_LEN + len, 0);
    stream.read_exact(&mut frame[HEADER_LEN..])?;
    Ok(frame)
}

fn send_control(stream: &mut TcpStream, body: Vec<u8>) -> Result<()> {
    stream.write_all(&wire::encode_frame(0, &Envelope::Control(body)))?;
    Ok(())
}

/// Reads one rendezvous message and checks its tag.
fn recv_control(stream: &mut TcpStream, tag: u8) -> Result<Vec<u8>> {
    match wire::decode_frame(&read_frame(stream)?)? {
        (0, Envelope::Control(body)) if body.first() == Some(&tag) => Ok(body[1..].to_vec()),
        _ => Err(Error::FrameCorrupt(format!("expected rendezvous message {tag}"))),
    }
}

struct Cursor<'a>(&'a [u8]);

impl Cursor<'_> {
    fn take(&mut self, n: usize) -> Result<&[u8]> {
        if self.0.len() < n {
            return Err(Error::FrameCorrupt("truncated rendezvous message".into()));
        }
        let (head, tail) = self.0.split_at(n);
        self.0 = tail;
        Ok(head)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn addr(&mut self) -> Result<SocketAddr> {
        let n = self.u32()? as usize;
        std::str::from_utf8(self.take(n)?)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::FrameCorrupt("bad address in rendezvous message".into()))
    }
}

fn put_addr(out: &mut Vec<u8>, addr: &SocketAddr) {
    let s = addr.to_string();
    out.extend_from_slice(&(s.len() as u32).to_le_bytes());
    out.extend_from_slice(s.as_bytes());
}

/// The root's listening socket before rendezvous.
pub struct TcpRoot {
    listener: TcpListener,
    size: usize,
}

impl TcpRoot {
    /// Binds the rendezvous address for a group of `size` workers.
    pub fn bind(addr: impl ToSocketAddrs, size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidConfig("worker_count must be at least 1".into()));
        }
        Ok(TcpRoot {
            listener: TcpListener::bind(addr)?,
            size,
        })
    }

    pub fn local_addr(&self) -> Result<SocketAddr> {
        Ok(self.listener.local_addr()?)
    }

    /// Waits for `size - 1` workers and wires up the mesh.
    pub fn accept(self) -> Result<TcpTransport> {
        let p = self.size;
        let mut hellos = Vec::with_capacity(p - 1);
        for _ in 1..p {
            let (mut stream, _) = self.listener.accept()?;
            stream.set_nodelay(true)?;
            let body = recv_control(&mut stream, TAG_HELLO)?;
            let mut c = Cursor(&body);
            let nonce = c.u64()?;
            let addr = c.addr()?;
            hellos.push((nonce, addr, stream));
        }
        hellos.sort_by_key(|h| h.0);
        if hellos.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::FrameCorrupt("two workers sent the same nonce".into()));
        }
        let mut table = Vec::new();
        for (_, addr, _) in &hellos {
            put_addr(&mut table, addr);
        }
        let mut peers: Vec<Option<TcpStream>> = vec![None];
        for (i, (_, _, mut stream)) in hellos.into_iter().enumerate() {
            let mut body = vec![TAG_ASSIGN];
            body.extend_from_slice(&((i + 1) as u32).to_le_bytes());
            body.extend_from_slice(&(p as u32).to_le_bytes());
            body.extend_from_slice(&table);
            send_control(&mut stream, body)?;
            peers.push(Some(stream));
        }
        TcpTransport::from_streams(0, peers)
    }
}

/// One worker's endpoint of a TCP mesh.
pub struct TcpTransport {
    rank: usize,
    writers: Vec<Option<TcpStream>>,
    readers: Vec<Option<Receiver<Result<Vec<u8>>>>>,
}

impl TcpTransport {
    /// Joins the group whose root listens at `root`, with a random nonce.
    pub fn connect(root: impl ToSocketAddrs) -> Result<Self> {
        Self::connect_with_nonce(root, rand::random())
    }

    /// Joins the group; workers are numbered by ascending `nonce`.
    pub fn connect_with_nonce(root: impl ToSocketAddrs, nonce: u64) -> Result<Self> {
        let root: Vec<SocketAddr> = root.to_socket_addrs()?.collect();
        let start = Instant::now();
        // the root may not be listening yet when workers are launched together
        let mut to_root = loop {
            match TcpStream::connect(&root[..]) {
                Ok(s) => break s,
                Err(_) if start.elapsed() < CONNECT_PATIENCE => {
                    thread::sleep(Duration::from_millis(50));
                }
                Err(e) => return Err(e.into()),
            }
        };
        to_root.set_nodelay(true)?;
        let listener = TcpListener::bind((to_root.local_addr()?.ip(), 0))?;
        let mut hello = vec![TAG_HELLO];
        hello.extend_from_slice(&nonce.to_le_bytes());
        put_addr(&mut hello, &listener.local_addr()?);
        send_control(&mut to_root, hello)?;

        let body = recv_control(&mut to_root, TAG_ASSIGN)?;
        let mut c = Cursor(&body);
        let rank = c.u32()? as usize;
        let p = c.u32()? as usize;
        if rank == 0 || rank >= p {
            return Err(Error::FrameCorrupt(format!("assigned id {rank} of {p}")));
        }
        let table: Vec<SocketAddr> = (1..p).map(|_| c.addr()).collect::<Result<_>>()?;

        let mut peers: Vec<Option<TcpStream>> = (0..p).map(|_| None).collect();
        peers[0] = Some(to_root);
        for j in 1..rank {
            let mut s = TcpStream::connect(table[j - 1])?;
            s.set_nodelay(true)?;
            let mut body = vec![TAG_PEER];
            body.extend_from_slice(&(rank as u32).to_le_bytes());
            send_control(&mut s, body)?;
            peers[j] = Some(s);
        }
        for _ in rank + 1..p {
            let (mut s, _) = listener.accept()?;
            s.set_nodelay(true)?;
            let body = recv_control(&mut s, TAG_PEER)?;
            let j = Cursor(&body).u32()? as usize;
            if j <= rank || j >= p || peers[j].is_some() {
                return Err(Error::FrameCorrupt(format!("unexpected peer id {j}")));
            }
            peers[j] = Some(s);
        }
        Self::from_streams(rank, peers)
    }

    fn from_streams(rank: usize, streams: Vec<Option<TcpStream>>) -> Result<Self> {
        let mut writers = Vec::with_capacity(streams.len());
        let mut readers = Vec::with_capacity(streams.len());
        for s in streams {
            match s {
                None => {
                    writers.push(None);
                    readers.push(None);
                }
                Some(s) => {
                    let mut reading = s.try_clone()?;
                    let (tx, rx) = channel();
                    thread::spawn(move || loop {
                        let frame = read_frame(&mut reading);
                        let failed = frame.is_err();
                        if tx.send(frame).is_err() || failed {
                            break;
                        }
                    });
                    writers.push(Some(s));
                    readers.push(Some(rx));
                }
            }
        }
        Ok(TcpTransport { rank, writers, readers })
    }
}

impl Transport for TcpTransport {
    fn rank(&self) -> usize {
        self.rank
    }

    fn size(&self) -> usize {
        self.writers.len()
    }

    fn send(&mut self, to: usize, frame: Vec<u8>) -> Result<()> {
        let s = self
            .writers
            .get_mut(to)
            .and_then(Option::as_mut)
            .ok_or_else(|| Error::InvalidConfig(format!("no route to worker {to}")))?;
        s.write_all(&frame)?;
        Ok(())
    }

    fn recv(&mut self, from: usize) -> Result<Vec<u8>> {
        self.readers
            .get(from)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::InvalidConfig(format!("no route from worker {from}")))?
            .recv()
            .map_err(|_| Error::PeerDisconnected(format!("worker {from} has gone away")))?
    }
}

impl Drop for TcpTransport {
    fn drop(&mut self) {
        for s in self.writers.iter().flatten() {
            let _ = s.shutdown(std::net::Shutdown::Write);
        }
    }
}

//! Frame layout and payload serialization.
//!
//! ```text
//! frame   = "SAD1" | msg_type: u8 | payload_len: u32 LE | payload
//! payload = collective sequence number: u32 LE | body
//! ```
//!
//! Bodies use fixed-width little-endian integers, IEEE-754 doubles and
//! explicit lengths.

use crate::error::{Error, Result};
use crate::msa::{Profile, TweakedAlignment};
use crate::seqcore::{AlignedRow, Sequence};

pub const MAGIC: [u8; 4] = *b"SAD1";
pub const HEADER_LEN: usize = 9;
pub const MAX_PAYLOAD: usize = 1 << 31;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum MsgType {
    RankVector = 1,
    SequenceBatch = 2,
    ProfileBlock = 3,
    AlignmentBatch = 4,
    TweakBlock = 5,
    Control = 6,
}

impl MsgType {
    pub fn from_u8(b: u8) -> Result<Self> {
        Ok(match b {
            1 => MsgType::RankVector,
            2 => MsgType::SequenceBatch,
            3 => MsgType::ProfileBlock,
            4 => MsgType::AlignmentBatch,
            5 => MsgType::TweakBlock,
            6 => MsgType::Control,
            other => return Err(Error::FrameCorrupt(format!("unknown message type {other}"))),
        })
    }
}

/// A typed message body.
#[derive(Debug, Clone, PartialEq)]
pub enum Envelope {
    RankVector(Vec<f64>),
    SequenceBatch(Vec<Sequence>),
    ProfileBlock(Profile),
    AlignmentBatch(Vec<AlignedRow>),
    TweakBlock(TweakedAlignment),
    Control(Vec<u8>),
}

impl Envelope {
    pub fn msg_type(&self) -> MsgType {
        match self {
            Envelope::RankVector(_) => MsgType::RankVector,
            Envelope::SequenceBatch(_) => MsgType::SequenceBatch,
            Envelope::ProfileBlock(_) => MsgType::ProfileBlock,
            Envelope::AlignmentBatch(_) => MsgType::AlignmentBatch,
            Envelope::TweakBlock(_) => MsgType::TweakBlock,
            Envelope::Control(_) => MsgType::Control,
        }
    }

    pub fn encode_body(&self) -> Vec<u8> {
        let mut w = Vec::new();
        match self {
            Envelope::RankVector(v) => {
                put_u32(&mut w, v.len());
                for x in v {
                    w.extend_from_slice(&x.to_le_bytes());
                }
            }
            Envelope::SequenceBatch(seqs) => {
                put_u32(&mut w, seqs.len());
                for s in seqs {
                    put_record(&mut w, &s.id, &s.residues, s.source_index);
                }
            }
            Envelope::ProfileBlock(p) => put_profile(&mut w, p),
            Envelope::AlignmentBatch(rows) => put_rows(&mut w, rows),
            Envelope::TweakBlock(t) => {
                put_u32(&mut w, t.worker_id);
                put_u32(&mut w, t.ga_width);
                put_u32(&mut w, t.insert_counts.len());
                for &c in &t.insert_counts {
                    put_u32(&mut w, c);
                }
                put_rows(&mut w, &t.rows);
            }
            Envelope::Control(bytes) => w.extend_from_slice(bytes),
        }
        w
    }

    pub fn decode_body(msg_type: MsgType, body: &[u8]) -> Result<Self> {
        let mut r = Reader::new(body);
        let env = match msg_type {
            MsgType::RankVector => {
                let n = r.u32()?;
                let v = (0..n).map(|_| r.f64()).collect::<Result<Vec<_>>>()?;
                Envelope::RankVector(v)
            }
            MsgType::SequenceBatch => {
                let n = r.u32()?;
                let mut seqs = Vec::with_capacity(n.min(1 << 16));
                for _ in 0..n {
                    let (id, residues, source_index) = r.record()?;
                    seqs.push(Sequence {
                        id,
                        residues,
                        source_index,
                    });
                }
                Envelope::SequenceBatch(seqs)
            }
            MsgType::ProfileBlock => Envelope::ProfileBlock(r.profile()?),
            MsgType::AlignmentBatch => Envelope::AlignmentBatch(r.rows()?),
            MsgType::TweakBlock => {
                let worker_id = r.u32()?;
                let ga_width = r.u32()?;
                let n = r.u32()?;
                let insert_counts = (0..n).map(|_| r.u32()).collect::<Result<Vec<_>>>()?;
                let rows = r.rows()?;
                Envelope::TweakBlock(TweakedAlignment {
                    worker_id,
                    ga_width,
                    rows,
                    insert_counts,
                })
            }
            MsgType::Control => Envelope::Control(r.rest().to_vec()),
        };
        r.finish()?;
        Ok(env)
    }
}

fn put_u32(w: &mut Vec<u8>, v: usize) {
    let v = u32::try_from(v).expect("wire integers fit in 32 bits");
    w.extend_from_slice(&v.to_le_bytes());
}

fn put_record(w: &mut Vec<u8>, id: &str, residues: &[u8], source_index: usize) {
    put_u32(w, id.len());
    w.extend_from_slice(id.as_bytes());
    put_u32(w, residues.len());
    w.extend_from_slice(residues);
    put_u32(w, source_index);
}

fn put_rows(w: &mut Vec<u8>, rows: &[AlignedRow]) {
    put_u32(w, rows.len());
    for r in rows {
        put_record(w, &r.id, &r.residues, r.source_index);
    }
}

fn put_profile(w: &mut Vec<u8>, p: &Profile) {
    put_u32(w, p.width());
    put_u32(w, p.depth() as usize);
    put_u32(w, p.dim());
    for f in p.frequencies() {
        w.extend_from_slice(&f.to_le_bytes());
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Reader { buf, pos: 0 }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.buf.len())
            .ok_or_else(|| Error::FrameCorrupt("truncated payload".into()))?;
        let s = &self.buf[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<usize> {
        let b = self.take(4)?;
        Ok(u32::from_le_bytes(b.try_into().unwrap()) as usize)
    }

    fn f64(&mut self) -> Result<f64> {
        let b = self.take(8)?;
        Ok(f64::from_le_bytes(b.try_into().unwrap()))
    }

    fn record(&mut self) -> Result<(String, Vec<u8>, usize)> {
        let n = self.u32()?;
        let id = String::from_utf8(self.take(n)?.to_vec())
            .map_err(|_| Error::FrameCorrupt("id is not UTF-8".into()))?;
        let n = self.u32()?;
        let residues = self.take(n)?.to_vec();
        let source_index = self.u32()?;
        Ok((id, residues, source_index))
    }

    fn rows(&mut self) -> Result<Vec<AlignedRow>> {
        let n = self.u32()?;
        let mut rows = Vec::with_capacity(n.min(1 << 16));
        for _ in 0..n {
            let (id, residues, source_index) = self.record()?;
            rows.push(AlignedRow {
                id,
                source_index,
                residues,
            });
        }
        Ok(rows)
    }

    fn profile(&mut self) -> Result<Profile> {
        let width = self.u32()?;
        let depth = self.u32()? as u32;
        let dim = self.u32()?;
        let len = width
            .checked_mul(dim)
            .ok_or_else(|| Error::FrameCorrupt("profile size overflow".into()))?;
        let freqs = (0..len).map(|_| self.f64()).collect::<Result<Vec<_>>>()?;
        Profile::from_frequencies(dim, depth, &freqs)
            .map_err(|e| Error::FrameCorrupt(format!("bad profile: {e}")))
    }

    fn rest(&mut self) -> &'a [u8] {
        let s = &self.buf[self.pos..];
        self.pos = self.buf.len();
        s
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.buf.len() {
            return Err(Error::FrameCorrupt(format!(
                "{} trailing bytes",
                self.buf.len() - self.pos
            )));
        }
        Ok(())
    }
}

/// Encodes a complete frame carrying `seq` and `envelope`.
pub fn encode_frame(seq: u32, envelope: &Envelope) -> Vec<u8> {
    let body = envelope.encode_body();
    let payload_len = body.len() + 4;
    assert!(payload_len <= MAX_PAYLOAD, "payload exceeds frame limit");
    let mut out = Vec::with_capacity(HEADER_LEN + payload_len);
    out.extend_from_slice(&MAGIC);
    out.push(envelope.msg_type() as u8);
    out.extend_from_slice(&(payload_len as u32).to_le_bytes());
    out.extend_from_slice(&seq.to_le_bytes());
    out.extend_from_slice(&body);
    out
}

/// Validates a frame header and returns `(msg_type, payload_len)`.
pub fn parse_header(header: &[u8; HEADER_LEN]) -> Result<(MsgType, usize)> {
    if header[..4] != MAGIC {
        return Err(Error::FrameCorrupt("bad magic".into()));
    }
    let t = MsgType::from_u8(header[4])?;
    let len = u32::from_le_bytes(header[5..9].try_into().unwrap()) as usize;
    if len > MAX_PAYLOAD {
        return Err(Error::FrameCorrupt(format!("payload length {len} exceeds limit")));
    }
    Ok((t, len))
}

/// Decodes a complete frame into `(seq, envelope)`.
pub fn decode_frame(frame: &[u8]) -> Result<(u32, Envelope)> {
    if frame.len() < HEADER_LEN {
        return Err(Error::FrameCorrupt("short frame".into()));
    }
    let (t, len) = parse_header(frame[..HEADER_LEN].try_into().unwrap())?;
    let payload = &frame[HEADER_LEN..];
    if payload.len() != len {
        return Err(Error::FrameCorrupt(format!(
            "payload length {} does not match header {len}",
            payload.len()
        )));
    }
    if len < 4 {
        return Err(Error::FrameCorrupt("missing sequence number".into()));
    }
    let seq = u32::from_le_bytes(payload[..4].try_into().unwrap());
    Ok((seq, Envelope::decode_body(t, &payload[4..])?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_layout() {
        let f = encode_frame(7, &Envelope::Control(b"hi".to_vec()));
        assert_eq!(&f[..4], b"SAD1");
        assert_eq!(f[4], 6);
        assert_eq!(u32::from_le_bytes(f[5..9].try_into().unwrap()), 6);
        assert_eq!(&f[9..13], &7u32.to_le_bytes());
        assert_eq!(&f[13..], b"hi");
    }

    #[test]
    fn rank_vector_bytes() {
        let body = Envelope::RankVector(vec![1.5]).encode_body();
        let mut expected = 1u32.to_le_bytes().to_vec();
        expected.extend_from_slice(&1.5f64.to_le_bytes());
        assert_eq!(body, expected);
    }

    #[test]
    fn corrupt_frames() {
        let mut f = encode_frame(1, &Envelope::RankVector(vec![0.25, 0.5]));
        assert!(decode_frame(&f).is_ok());
        f[0] = b'X';
        assert!(matches!(decode_frame(&f), Err(Error::FrameCorrupt(_))));
        let mut f = encode_frame(1, &Envelope::RankVector(vec![0.25]));
        f[4] = 9;
        assert!(matches!(decode_frame(&f), Err(Error::FrameCorrupt(_))));
        let f = encode_frame(1, &Envelope::RankVector(vec![0.25]));
        assert!(matches!(decode_frame(&f[..f.len() - 1]), Err(Error::FrameCorrupt(_))));
        // claims two ranks but carries one
        let mut body = 2u32.to_le_bytes().to_vec();
        body.extend_from_slice(&1.0f64.to_le_bytes());
        assert!(matches!(
            Envelope::decode_body(MsgType::RankVector, &body),
            Err(Error::FrameCorrupt(_))
        ));
        let mut body = Envelope::RankVector(vec![1.0]).encode_body();
        body.push(0);
        assert!(matches!(
            Envelope::decode_body(MsgType::RankVector, &body),
            Err(Error::FrameCorrupt(_))
        ));
    }
}

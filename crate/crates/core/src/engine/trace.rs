use std::io::Write;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::graph::{EdgeId, NodeId};

use super::model::{AgentId, MoveIntent};
use super::EngineError;

/// Per-round trace entry. Agent-indexed vectors follow the header's ascending `ids`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u64,
    pub present: Vec<EdgeId>,
    pub before: Vec<NodeId>,
    pub intents: Vec<Option<MoveIntent>>,
    pub success: Vec<bool>,
    pub after: Vec<NodeId>,
    pub memory_bits: Vec<u64>,
    pub terminated: Vec<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceHeader {
    pub algorithm: String,
    pub n: usize,
    pub ids: Vec<AgentId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub header: TraceHeader,
    pub records: Vec<RoundRecord>,
    pub timed_out: bool,
}

impl Trace {
    pub fn digest(&self) -> String {
        trace_hash(self)
    }

    /// JSONL: header line, then one record per line.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<(), EngineError> {
        let mut sink = JsonlSink::new(&mut out, &self.header)?;
        for r in &self.records {
            sink.record(r)?;
        }
        Ok(())
    }

    pub fn read_jsonl(text: &str) -> Result<Trace, EngineError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header_line = lines.next().ok_or_else(|| EngineError::Io("empty trace".into()))?;
        let header: TraceHeader = serde_json::from_str(header_line).map_err(|e| EngineError::Io(e.to_string()))?;
        let records = lines
            .map(|l| serde_json::from_str(l).map_err(|e| EngineError::Io(e.to_string())))
            .collect::<Result<Vec<RoundRecord>, _>>()?;
        Ok(Trace {
            header,
            records,
            timed_out: false,
        })
    }
}

pub trait TraceSink {
    fn record(&mut self, rec: &RoundRecord) -> Result<(), EngineError>;
}

/// Discards records.
pub struct NullSink;

impl TraceSink for NullSink {
    fn record(&mut self, _rec: &RoundRecord) -> Result<(), EngineError> {
        Ok(())
    }
}

impl TraceSink for Vec<RoundRecord> {
    fn record(&mut self, rec: &RoundRecord) -> Result<(), EngineError> {
        self.push(rec.clone());
        Ok(())
    }
}

/// Streams records as JSON lines after a header line.
pub struct JsonlSink<W: Write> {
    out: W,
}

impl<W: Write> JsonlSink<W> {
    pub fn new(mut out: W, header: &TraceHeader) -> Result<Self, EngineError> {
        serde_json::to_writer(&mut out, header).map_err(|e| EngineError::Io(e.to_string()))?;
        out.write_all(b"\n").map_err(|e| EngineError::Io(e.to_string()))?;
        Ok(JsonlSink { out })
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> TraceSink for JsonlSink<W> {
    fn record(&mut self, rec: &RoundRecord) -> Result<(), EngineError> {
        serde_json::to_writer(&mut self.out, rec).map_err(|e| EngineError::Io(e.to_string()))?;
        self.out.write_all(b"\n").map_err(|e| EngineError::Io(e.to_string()))
    }
}

/// Incremental SHA-256 over the canonical binary encoding of a trace.
pub struct TraceHasher {
    hasher: Sha256,
    buf: Vec<u8>,
}

impl TraceHasher {
    pub fn new(header: &TraceHeader) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(b"tvgdisp-trace-v1");
        put_bytes(&mut hasher, header.algorithm.as_bytes());
        hasher.update((header.n as u64).to_le_bytes());
        hasher.update((header.ids.len() as u64).to_le_bytes());
        for id in &header.ids {
            hasher.update(id.to_le_bytes());
        }
        TraceHasher {
            hasher,
            buf: Vec::with_capacity(256),
        }
    }

    pub fn update(&mut self, rec: &RoundRecord) {
        let b = &mut self.buf;
        b.clear();
        b.extend_from_slice(&rec.round.to_le_bytes());
        b.extend_from_slice(&(rec.present.len() as u32).to_le_bytes());
        for &e in &rec.present {
            b.extend_from_slice(&(e as u32).to_le_bytes());
        }
        for &v in &rec.before {
            b.extend_from_slice(&(v as u32).to_le_bytes());
        }
        for i in &rec.intents {
            let code: u32 = match i {
                None => u32::MAX,
                Some(MoveIntent::Stay) => u32::MAX - 1,
                Some(MoveIntent::Move(p)) => *p as u32,
            };
            b.extend_from_slice(&code.to_le_bytes());
        }
        b.extend(rec.success.iter().map(|&s| s as u8));
        for &v in &rec.after {
            b.extend_from_slice(&(v as u32).to_le_bytes());
        }
        for &m in &rec.memory_bits {
            b.extend_from_slice(&m.to_le_bytes());
        }
        b.extend(rec.terminated.iter().map(|&t| t as u8));
        match &rec.note {
            None => b.extend_from_slice(&u64::MAX.to_le_bytes()),
            Some(s) => {
                b.extend_from_slice(&(s.len() as u64).to_le_bytes());
                b.extend_from_slice(s.as_bytes());
            }
        }
        self.hasher.update(&self.buf);
    }

    pub fn finish(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

impl TraceSink for TraceHasher {
    fn record(&mut self, rec: &RoundRecord) -> Result<(), EngineError> {
        self.update(rec);
        Ok(())
    }
}

fn put_bytes(h: &mut Sha256, bytes: &[u8]) {
    h.update((bytes.len() as u64).to_le_bytes());
    h.update(bytes);
}

/// Stable content digest of a trace.
pub fn trace_hash(trace: &Trace) -> String {
    let mut h = TraceHasher::new(&trace.header);
    for r in &trace.records {
        h.update(r);
    }
    h.finish()
}

/// Fan a record out to two sinks.
pub struct Tee<'a> {
    pub first: &'a mut dyn TraceSink,
    pub second: &'a mut dyn TraceSink,
}

impl TraceSink for Tee<'_> {
    fn record(&mut self, rec: &RoundRecord) -> Result<(), EngineError> {
        self.first.record(rec)?;
        self.second.record(rec)
    }
}

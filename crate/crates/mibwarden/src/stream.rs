//! Online classification of counter snapshots.
//!
//! Input is one snapshot per line, `t=<secs> <name>=<count> ...`, from a
//! file, a pipe or UDP datagrams (one line each). Every pair of consecutive
//! valid snapshots yields one `t=<secs> class=<Name>` line. Malformed lines
//! are logged and skipped; the previous valid snapshot stays current.

use std::io::{BufRead, Write};
use std::net::UdpSocket;

use log::{debug, warn};
use mibwarden_core::{deltas, DeltaConfig, RuleModel, Snapshot, TrafficClass};

use crate::error::{Error, Result};

/// Parses one snapshot line against `schema`, returning counters in schema
/// order. Names may appear in any order after the timestamp.
pub fn parse_snapshot_line(line: &str, schema: &[String]) -> std::result::Result<Snapshot, String> {
    let mut fields = line.split_whitespace();
    let first = fields.next().ok_or("empty line")?;
    let ts = first.strip_prefix("t=").ok_or_else(|| format!("expected `t=<int>` first, found `{first}`"))?;
    let timestamp: u64 = ts.parse().map_err(|_| format!("bad timestamp `{ts}`"))?;
    let mut counters: Vec<Option<u64>> = vec![None; schema.len()];
    for field in fields {
        let (name, value) = field.split_once('=').ok_or_else(|| format!("malformed field `{field}`"))?;
        let i = schema.iter().position(|s| s == name).ok_or_else(|| format!("unknown attribute `{name}`"))?;
        let v: u64 = value.parse().map_err(|_| format!("bad counter value `{value}` for {name}"))?;
        if counters[i].replace(v).is_some() {
            return Err(format!("duplicate attribute `{name}`"));
        }
    }
    let counters = counters
        .into_iter()
        .zip(schema)
        .map(|(v, name)| v.ok_or_else(|| format!("missing attribute `{name}`")))
        .collect::<std::result::Result<Vec<u64>, String>>()?;
    Ok(Snapshot { timestamp, counters })
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq)]
pub struct StreamStats {
    pub classified: usize,
    pub skipped: usize,
    pub degraded: usize,
}

/// Pairing state over a snapshot sequence.
pub struct StreamClassifier<'m> {
    model: &'m RuleModel,
    config: DeltaConfig,
    prev: Option<Snapshot>,
    pub stats: StreamStats,
}

impl<'m> StreamClassifier<'m> {
    pub fn new(model: &'m RuleModel, config: DeltaConfig) -> Self {
        StreamClassifier { model, config, prev: None, stats: StreamStats::default() }
    }

    /// Feeds one line. Returns the classification it completes, if any.
    /// `line_no` only labels log messages.
    pub fn push_line(&mut self, line_no: usize, line: &str) -> Option<(u64, TrafficClass)> {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            return None;
        }
        let snap = match parse_snapshot_line(line, &self.model.attributes) {
            Ok(s) => s,
            Err(e) => {
                warn!("line {line_no}: skipped: {e}");
                self.stats.skipped += 1;
                return None;
            }
        };
        let Some(prev) = self.prev.take() else {
            self.prev = Some(snap);
            return None;
        };
        match deltas(&prev, &snap, &self.config) {
            Ok(d) => {
                if d.degraded {
                    warn!(
                        "line {line_no}: gap of {}s exceeds {} intervals, counters may have been reset",
                        snap.timestamp - prev.timestamp,
                        self.config.max_gap
                    );
                    self.stats.degraded += 1;
                }
                self.prev = Some(snap);
                let class = self.model.predict(&d.to_record().values).expect("snapshot parsed against model schema");
                self.stats.classified += 1;
                debug!("t={} deltas={:?} -> {class}", d.timestamp, d.deltas);
                Some((d.timestamp, class))
            }
            Err(e) => {
                warn!("line {line_no}: skipped: {e}");
                self.stats.skipped += 1;
                self.prev = Some(prev);
                None
            }
        }
    }
}

fn emit<W: Write>(out: &mut W, t: u64, class: TrafficClass) -> Result<()> {
    writeln!(out, "t={t} class={class}").map_err(|e| Error::io("<output>", e))
}

/// Classifies a line stream, writing one result line per valid pair.
pub fn stream_classify<R: BufRead, W: Write>(
    input: R,
    model: &RuleModel,
    config: DeltaConfig,
    out: &mut W,
) -> Result<StreamStats> {
    let mut c = StreamClassifier::new(model, config);
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::io("<input>", e))?;
        if let Some((t, class)) = c.push_line(i + 1, &line) {
            emit(out, t, class)?;
            out.flush().map_err(|e| Error::io("<output>", e))?;
        }
    }
    Ok(c.stats)
}

/// Same as [`stream_classify`] over datagrams received on `socket`, one
/// line per datagram. Stops after `limit` datagrams when given.
pub fn serve_udp<W: Write>(
    socket: &UdpSocket,
    model: &RuleModel,
    config: DeltaConfig,
    out: &mut W,
    limit: Option<usize>,
) -> Result<StreamStats> {
    let mut c = StreamClassifier::new(model, config);
    let mut buf = [0u8; 65_535];
    let mut received = 0;
    while limit.is_none_or(|l| received < l) {
        let (n, from) = socket.recv_from(&mut buf).map_err(|e| Error::io("<udp>", e))?;
        received += 1;
        let Ok(text) = std::str::from_utf8(&buf[..n]) else {
            warn!("datagram {received} from {from}: not UTF-8, skipped");
            c.stats.skipped += 1;
            continue;
        };
        if let Some((t, class)) = c.push_line(received, text) {
            emit(out, t, class)?;
            out.flush().map_err(|e| Error::io("<output>", e))?;
        }
    }
    Ok(c.stats)
}

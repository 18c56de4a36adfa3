//! Turning consecutive counter snapshots into per-interval delta records.
//!
//! SNMP counters are unsigned and wrap at a fixed modulus (2^32 for the
//! classic ifEntry counters, 2^64 for the high-capacity ones). A counter
//! that went backwards is assumed to have wrapped exactly once.

use alloc::vec::Vec;

use crate::dataset::MibRecord;
use crate::error::{CoreError, CoreResult};

pub const COUNTER32_MODULUS: u128 = 1 << 32;
pub const COUNTER64_MODULUS: u128 = 1 << 64;

/// Raw counter values taken at `timestamp` (seconds), schema order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub timestamp: u64,
    pub counters: Vec<u64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct DeltaConfig {
    /// Expected polling interval in seconds.
    pub expected_interval: u64,
    pub wrap_modulus: u128,
    /// A gap longer than this many expected intervals marks the delta as
    /// degraded.
    pub max_gap: u64,
}

impl DeltaConfig {
    pub fn new(expected_interval: u64) -> DeltaConfig {
        DeltaConfig { expected_interval, wrap_modulus: COUNTER32_MODULUS, max_gap: 3 }
    }

    fn validate(&self) -> CoreResult<()> {
        if self.expected_interval == 0 {
            return Err(CoreError::InvalidParameter("expected interval must be > 0"));
        }
        if self.wrap_modulus < 2 || self.wrap_modulus > COUNTER64_MODULUS {
            return Err(CoreError::InvalidParameter("wrap modulus must lie in [2, 2^64]"));
        }
        if self.max_gap == 0 {
            return Err(CoreError::InvalidParameter("max_gap must be >= 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaRecord {
    /// Timestamp of the later snapshot.
    pub timestamp: u64,
    pub deltas: Vec<u64>,
    /// The snapshots are further apart than the configured gap allows.
    pub degraded: bool,
}

impl DeltaRecord {
    /// Unlabeled record ready for classification.
    pub fn to_record(&self) -> MibRecord {
        MibRecord::new(self.deltas.iter().map(|&d| d as f64).collect(), None)
    }
}

pub fn deltas(prev: &Snapshot, curr: &Snapshot, config: &DeltaConfig) -> CoreResult<DeltaRecord> {
    config.validate()?;
    if curr.timestamp <= prev.timestamp {
        return Err(CoreError::NonIncreasingTimestamp { prev: prev.timestamp, curr: curr.timestamp });
    }
    if prev.counters.len() != curr.counters.len() {
        return Err(CoreError::ArityMismatch { index: 1, expected: prev.counters.len(), found: curr.counters.len() });
    }
    let m = config.wrap_modulus;
    let deltas = prev
        .counters
        .iter()
        .zip(&curr.counters)
        .enumerate()
        .map(|(attribute, (&p, &c))| {
            let (p, c) = (u128::from(p), u128::from(c));
            if p >= m || c >= m {
                return Err(CoreError::CounterOutOfRange { attribute });
            }
            // Fits in u64 because the result is below m <= 2^64.
            Ok(((c + m - p) % m) as u64)
        })
        .collect::<CoreResult<Vec<u64>>>()?;
    let gap = curr.timestamp - prev.timestamp;
    let degraded = u128::from(gap) > u128::from(config.max_gap) * u128::from(config.expected_interval);
    Ok(DeltaRecord { timestamp: curr.timestamp, deltas, degraded })
}

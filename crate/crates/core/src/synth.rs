//! Synthetic labeled corpus generator.
//!
//! Each (class, attribute) cell has a center and a spread. A value is drawn
//! from a triangular distribution on `center ± spread`; with probability
//! `feature_noise` the deviation is widened by [`NOISE_WIDENING`]. Both
//! components are symmetric around the center, so the mixture is symmetric
//! and unimodal. Values are clamped at zero.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::class::TrafficClass;
use crate::dataset::{Dataset, MibRecord, INTERFACE_COUNTERS};
use crate::error::{CoreError, CoreResult};

/// Record counts per traffic type of the reference corpus, canonical order.
pub const REFERENCE_CLASS_COUNTS: [usize; 8] = [600, 960, 773, 632, 573, 780, 480, 200];

/// Deviation multiplier applied to noisy draws.
pub const NOISE_WIDENING: f64 = 1.5;

/// Distance between adjacent activity levels, in spreads.
pub const LEVEL_SPACING: f64 = 4.0;

/// Default fraction of feature values drawn from the widened component.
pub const DEFAULT_FEATURE_NOISE: f64 = 0.03;

// Activity level of each interface counter under each traffic type.
// Columns follow INTERFACE_COUNTERS.
const DEFAULT_LEVELS: [[u8; 11]; 8] = [
    // Normal
    [1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0],
    // TcpSyn: inbound SYN storm, half-open backlog
    [2, 1, 3, 2, 0, 0, 1, 0, 0, 0, 1],
    // UdpFlood: inbound volume, discards and errors, little reply traffic
    [3, 0, 3, 0, 1, 0, 2, 0, 1, 0, 0],
    // IcmpEcho: symmetric echo/reply traffic
    [2, 2, 2, 2, 2, 2, 0, 0, 0, 0, 1],
    // HttpFlood: heavy request and response volume
    [3, 3, 2, 3, 0, 0, 0, 0, 0, 0, 2],
    // Slowloris: modest packets, long output queue
    [1, 1, 2, 1, 0, 0, 0, 0, 0, 0, 3],
    // Slowpost
    [1, 2, 1, 1, 0, 0, 0, 1, 0, 0, 3],
    // BruteForce: many small replies, auth failures surface as errors
    [1, 1, 1, 2, 0, 0, 0, 0, 0, 1, 0],
];

const DEFAULT_SPREADS: [f64; 11] = [2500.0, 2500.0, 25.0, 25.0, 4.0, 4.0, 2.0, 2.0, 1.0, 1.0, 1.0];

#[derive(Clone, Debug, PartialEq)]
pub struct SynthProfile {
    pub attribute_names: Vec<String>,
    /// `centers[class][attribute]`
    pub centers: Vec<Vec<f64>>,
    /// `spreads[class][attribute]`
    pub spreads: Vec<Vec<f64>>,
    pub class_counts: [usize; 8],
    pub feature_noise: f64,
}

impl Default for SynthProfile {
    fn default() -> Self {
        let mut centers = Vec::with_capacity(8);
        let mut spreads = Vec::with_capacity(8);
        for levels in DEFAULT_LEVELS.iter() {
            centers.push(
                levels
                    .iter()
                    .zip(DEFAULT_SPREADS.iter())
                    .map(|(&l, &s)| s * LEVEL_SPACING * (f64::from(l) + 1.0))
                    .collect(),
            );
            spreads.push(DEFAULT_SPREADS.to_vec());
        }
        SynthProfile {
            attribute_names: INTERFACE_COUNTERS.iter().map(|s| s.to_string()).collect(),
            centers,
            spreads,
            class_counts: REFERENCE_CLASS_COUNTS,
            feature_noise: DEFAULT_FEATURE_NOISE,
        }
    }
}

impl SynthProfile {
    /// Default profile with the widened noise component switched off.
    pub fn noiseless() -> Self {
        SynthProfile { feature_noise: 0.0, ..SynthProfile::default() }
    }

    pub fn validate(&self) -> CoreResult<()> {
        let width = self.attribute_names.len();
        if self.centers.len() != TrafficClass::COUNT || self.spreads.len() != TrafficClass::COUNT {
            return Err(CoreError::InvalidParameter("centers/spreads need one row per class"));
        }
        for (c_row, s_row) in self.centers.iter().zip(&self.spreads) {
            if c_row.len() != width || s_row.len() != width {
                return Err(CoreError::InvalidParameter("centers/spreads row width != attribute count"));
            }
            if c_row.iter().any(|c| !c.is_finite()) {
                return Err(CoreError::InvalidParameter("centers must be finite"));
            }
            if s_row.iter().any(|s| !s.is_finite() || *s < 0.0) {
                return Err(CoreError::InvalidParameter("spreads must be finite and >= 0"));
            }
        }
        if !(0.0..=1.0).contains(&self.feature_noise) {
            return Err(CoreError::InvalidParameter("feature_noise must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Smallest, over class pairs, of the largest per-attribute center gap
    /// measured in units of the larger of the two spreads.
    pub fn separation_margin(&self) -> f64 {
        let mut margin = f64::INFINITY;
        for a in 0..TrafficClass::COUNT {
            for b in (a + 1)..TrafficClass::COUNT {
                let mut best: f64 = 0.0;
                for j in 0..self.attribute_names.len() {
                    let gap = libm::fabs(self.centers[a][j] - self.centers[b][j]);
                    let s = self.spreads[a][j].max(self.spreads[b][j]);
                    let units = if s > 0.0 {
                        gap / s
                    } else if gap > 0.0 {
                        f64::INFINITY
                    } else {
                        0.0
                    };
                    best = best.max(units);
                }
                margin = margin.min(best);
            }
        }
        margin
    }
}

/// Draws a labeled dataset from `profile`. Records come out grouped by class
/// in canonical order; the same profile and seed give identical output.
pub fn synthesize(profile: &SynthProfile, seed: u64) -> CoreResult<Dataset> {
    profile.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let total: usize = profile.class_counts.iter().sum();
    let mut records = Vec::with_capacity(total);
    for class in TrafficClass::ALL {
        let centers = &profile.centers[class.index()];
        let spreads = &profile.spreads[class.index()];
        for _ in 0..profile.class_counts[class.index()] {
            let values = centers
                .iter()
                .zip(spreads)
                .map(|(&center, &spread)| {
                    let u: f64 = rng.gen();
                    let v: f64 = rng.gen();
                    let noisy = rng.gen::<f64>() < profile.feature_noise;
                    let mut dev = (u + v - 1.0) * spread;
                    if noisy {
                        dev *= NOISE_WIDENING;
                    }
                    (center + dev).max(0.0)
                })
                .collect();
            records.push(MibRecord::labeled(values, class));
        }
    }
    Dataset::new(profile.attribute_names.clone(), records, format!("synthetic:{seed}"))
}

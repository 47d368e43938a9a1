//! Supervised-learning corpus machinery: flatten knowledge snapshots into
//! fixed-order feature vectors, label them from exact resolutions, and
//! persist datasets as CSV with a JSON provenance sidecar.

mod csvio;
mod encode;
mod generate;
mod sample;
mod schema;
mod weights;

pub use csvio::{read_dataset, write_dataset, CsvError};
pub use encode::{EncodeError, Encoder, EncodingScheme, FeatureStats};
pub use generate::{run_recording_episode, RecordedEpisode, RecordingResolver};
pub use sample::{record_sample, snapshot_features, RecordError};
pub use schema::{label_name, parse_label, Schema};
pub use weights::{class_weights, ClassWeights, WeightsError};

use serde::{Deserialize, Serialize};

/// One training example: the flattened Table-1 features and one label per
/// drone (0 = no field, k = field k-1).
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub features: Vec<f64>,
    pub labels: Vec<u8>,
}

/// Where a dataset came from: enough to regenerate it bit-for-bit.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub base_seed: u64,
    pub episodes: u64,
    pub minutes_per_episode: u64,
}

/// An in-memory dataset with per-output class histograms.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub schema: Schema,
    pub samples: Vec<Sample>,
    pub provenance: Provenance,
}

impl Dataset {
    pub fn new(schema: Schema, samples: Vec<Sample>, provenance: Provenance) -> Self {
        Dataset { schema, samples, provenance }
    }

    /// Class histogram per output, recomputed from the samples.
    pub fn histograms(&self) -> Vec<Vec<u64>> {
        let mut h = vec![vec![0u64; self.schema.classes()]; self.schema.label_count()];
        for s in &self.samples {
            for (o, &label) in s.labels.iter().enumerate() {
                h[o][label as usize] += 1;
            }
        }
        h
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Deterministic train/test split: a seeded shuffle of indices, the
    /// first `holdout_fraction` going to the second returned set.
    pub fn split(&self, holdout_fraction: f64, seed: u64) -> (Dataset, Dataset) {
        let mut order: Vec<usize> = (0..self.samples.len()).collect();
        // splitmix-driven Fisher-Yates, independent of any global RNG
        let mut state = seed.wrapping_add(0x9E3779B97F4A7C15);
        let mut next = || {
            let mut z = state;
            state = state.wrapping_add(0x9E3779B97F4A7C15);
            z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
            z ^ (z >> 31)
        };
        for i in (1..order.len()).rev() {
            let j = (next() % (i as u64 + 1)) as usize;
            order.swap(i, j);
        }
        let holdout = ((self.samples.len() as f64) * holdout_fraction).round() as usize;
        let test_idx = &order[..holdout];
        let train_idx = &order[holdout..];
        let pick = |idx: &[usize]| Dataset {
            schema: self.schema.clone(),
            samples: idx.iter().map(|&i| self.samples[i].clone()).collect(),
            provenance: self.provenance.clone(),
        };
        (pick(train_idx), pick(test_idx))
    }
}

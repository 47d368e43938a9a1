use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::{Sample, Schema};

/// Variance floor for standardization; constant columns encode to 0.
pub const VARIANCE_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum EncodeError {
    #[error("feature vector has {got} entries, schema wants {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("mode value {value} is not a known drone mode")]
    UnknownMode { value: f64 },
    #[error("statistics were fitted for a different layout")]
    StatsMismatch,
}

/// How features are presented to a learner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EncodingScheme {
    /// Features exactly as recorded; drone mode stays ordinal. Suits trees.
    Raw,
    /// Drone mode expanded to four flags, real-valued columns standardized
    /// to zero mean / unit variance with training-set statistics. Suits
    /// neural networks.
    OneHotMode,
}

/// Per-column mean and standard deviation of the real-valued columns,
/// fitted on a training set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureStats {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

/// A fitted feature encoder. Encoding is invertible given the stats: flags
/// pass through, mode one-hots decode by argmax, standardized values by
/// `v * std + mean`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Encoder {
    pub schema: Schema,
    pub scheme: EncodingScheme,
    pub stats: Option<FeatureStats>,
}

impl Encoder {
    pub fn raw(schema: Schema) -> Self {
        Encoder { schema, scheme: EncodingScheme::Raw, stats: None }
    }

    /// Fits standardization statistics on the given samples.
    pub fn fit_one_hot(schema: Schema, samples: &[Sample]) -> Result<Self, EncodeError> {
        let n_features = schema.feature_count();
        let mut mean = vec![0.0; n_features];
        let mut m2 = vec![0.0; n_features];
        let mut count = 0.0;
        for s in samples {
            if s.features.len() != n_features {
                return Err(EncodeError::LengthMismatch {
                    got: s.features.len(),
                    want: n_features,
                });
            }
            count += 1.0;
            for (i, &v) in s.features.iter().enumerate() {
                let delta = v - mean[i];
                mean[i] += delta / count;
                m2[i] += delta * (v - mean[i]);
            }
        }
        let std = m2
            .iter()
            .map(|&m| {
                let var = if count > 0.0 { m / count } else { 0.0 };
                var.max(VARIANCE_FLOOR).sqrt()
            })
            .collect();
        Ok(Encoder {
            schema,
            scheme: EncodingScheme::OneHotMode,
            stats: Some(FeatureStats { mean, std }),
        })
    }

    /// Width of an encoded feature vector.
    pub fn encoded_len(&self) -> usize {
        match self.scheme {
            EncodingScheme::Raw => self.schema.feature_count(),
            // each of the drones' mode columns becomes 4 flags
            EncodingScheme::OneHotMode => self.schema.feature_count() + 3 * self.schema.drones,
        }
    }

    pub fn encode(&self, features: &[f64]) -> Result<Vec<f64>, EncodeError> {
        let want = self.schema.feature_count();
        if features.len() != want {
            return Err(EncodeError::LengthMismatch { got: features.len(), want });
        }
        match self.scheme {
            EncodingScheme::Raw => Ok(features.to_vec()),
            EncodingScheme::OneHotMode => {
                let stats = self.stats.as_ref().ok_or(EncodeError::StatsMismatch)?;
                if stats.mean.len() != want {
                    return Err(EncodeError::StatsMismatch);
                }
                let mut out = Vec::with_capacity(self.encoded_len());
                for (col, &v) in features.iter().enumerate() {
                    if self.schema.is_mode_column(col) {
                        let mode = v as usize;
                        if v.fract() != 0.0 || mode > 3 {
                            return Err(EncodeError::UnknownMode { value: v });
                        }
                        for k in 0..4 {
                            out.push(f64::from(u8::from(k == mode)));
                        }
                    } else if self.schema.is_flag_column(col) {
                        out.push(v);
                    } else {
                        out.push((v - stats.mean[col]) / stats.std[col]);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Inverse of [`Encoder::encode`]; used to verify invertibility.
    pub fn decode(&self, encoded: &[f64]) -> Result<Vec<f64>, EncodeError> {
        match self.scheme {
            EncodingScheme::Raw => Ok(encoded.to_vec()),
            EncodingScheme::OneHotMode => {
                if encoded.len() != self.encoded_len() {
                    return Err(EncodeError::LengthMismatch {
                        got: encoded.len(),
                        want: self.encoded_len(),
                    });
                }
                let stats = self.stats.as_ref().ok_or(EncodeError::StatsMismatch)?;
                let mut out = Vec::with_capacity(self.schema.feature_count());
                let mut i = 0;
                for col in 0..self.schema.feature_count() {
                    if self.schema.is_mode_column(col) {
                        let one_hot = &encoded[i..i + 4];
                        let mode = one_hot
                            .iter()
                            .enumerate()
                            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                            .map(|(k, _)| k)
                            .unwrap();
                        out.push(mode as f64);
                        i += 4;
                    } else if self.schema.is_flag_column(col) {
                        out.push(encoded[i]);
                        i += 1;
                    } else {
                        out.push(encoded[i] * stats.std[col] + stats.mean[col]);
                        i += 1;
                    }
                }
                Ok(out)
            }
        }
    }
}

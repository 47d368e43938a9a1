//! CART-style decision trees over dataset samples: single-output (one tree
//! per drone) and multi-output (one tree predicting all four labels), Gini
//! impurity with inverse-prevalence class weights as sample weights, no
//! pruning and no depth cap.

mod model;
mod split;
mod train;

pub use model::{FlatNode, Tree, TreeModel, TreeVariant};
pub use split::{best_split, gini, SplitCandidate};
pub use train::{train_tree, DtError, TrainOptions};

use dataset::{Dataset, Schema};

/// Row-major training view of a dataset: features `n × f`, labels
/// `n × outputs`.
pub struct TrainingData {
    pub n: usize,
    pub f: usize,
    pub outputs: usize,
    pub classes: usize,
    pub features: Vec<f64>,
    pub labels: Vec<u8>,
    pub schema: Schema,
}

impl TrainingData {
    pub fn from_dataset(d: &Dataset) -> Self {
        let n = d.len();
        let f = d.schema.feature_count();
        let outputs = d.schema.label_count();
        let mut features = Vec::with_capacity(n * f);
        let mut labels = Vec::with_capacity(n * outputs);
        for s in &d.samples {
            features.extend_from_slice(&s.features);
            labels.extend_from_slice(&s.labels);
        }
        TrainingData {
            n,
            f,
            outputs,
            classes: d.schema.classes(),
            features,
            labels,
            schema: d.schema.clone(),
        }
    }

    pub fn feature(&self, row: usize, col: usize) -> f64 {
        self.features[row * self.f + col]
    }

    pub fn label(&self, row: usize, output: usize) -> u8 {
        self.labels[row * self.outputs + output]
    }
}

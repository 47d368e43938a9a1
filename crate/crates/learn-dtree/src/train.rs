use thiserror::Error;

use dataset::{class_weights, ClassWeights, Dataset};

use crate::model::{FlatNode, Tree, TreeModel, TreeVariant};
use crate::split::best_split;
use crate::TrainingData;

#[derive(Debug, Error, PartialEq)]
pub enum DtError {
    #[error("cannot train on an empty dataset")]
    EmptyDataset,
    #[error("feature schema does not match the model")]
    SchemaMismatch,
    #[error("serialization: {0}")]
    Serde(String),
    #[error("io: {0}")]
    Io(String),
}

#[derive(Debug, Clone, Copy)]
pub struct TrainOptions {
    /// Apply inverse-prevalence class weights as sample weights.
    pub class_weighted: bool,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions { class_weighted: true }
    }
}

/// Grows unpruned, depth-uncapped trees: one per output (single-output
/// variant) or a single tree over all outputs. Sample weight of a row is its
/// label's class weight for the tree's output, or the mean over outputs for
/// the multi-output tree.
pub fn train_tree(
    dataset: &Dataset,
    variant: TreeVariant,
    options: TrainOptions,
) -> Result<TreeModel, DtError> {
    if dataset.is_empty() {
        return Err(DtError::EmptyDataset);
    }
    let data = TrainingData::from_dataset(dataset);
    let weights = if options.class_weighted {
        class_weights(dataset).map_err(|_| DtError::EmptyDataset)?
    } else {
        ClassWeights::uniform(data.outputs, data.classes)
    };

    let scopes: Vec<Vec<usize>> = match variant {
        TreeVariant::SingleOutput => (0..data.outputs).map(|o| vec![o]).collect(),
        TreeVariant::MultiOutput => vec![(0..data.outputs).collect()],
    };

    let trees = scopes
        .into_iter()
        .map(|scope| {
            let row_weights = sample_weights(&data, &weights, &scope);
            grow(&data, &row_weights, scope)
        })
        .collect();

    Ok(TreeModel {
        variant,
        outputs: data.outputs,
        schema_hash: dataset.schema.hash(),
        class_weighted: options.class_weighted,
        trained_on: data.n,
        trees,
    })
}

fn sample_weights(data: &TrainingData, weights: &ClassWeights, scope: &[usize]) -> Vec<f64> {
    (0..data.n)
        .map(|row| {
            let sum: f64 =
                scope.iter().map(|&o| weights.weight(o, data.label(row, o))).sum();
            sum / scope.len() as f64
        })
        .collect()
}

fn grow(data: &TrainingData, row_weights: &[f64], scope: Vec<usize>) -> Tree {
    let mut nodes: Vec<FlatNode> = Vec::new();
    // (slot in `nodes`, rows of the pending node)
    let mut work: Vec<(usize, Vec<u32>)> = Vec::new();
    nodes.push(FlatNode::Leaf { masses: vec![], labels: vec![] });
    work.push((0, (0..data.n as u32).collect()));

    while let Some((slot, rows)) = work.pop() {
        match best_split(data, &rows, row_weights, &scope) {
            Some(split) => {
                let (left_rows, right_rows): (Vec<u32>, Vec<u32>) = rows
                    .iter()
                    .partition(|&&r| data.feature(r as usize, split.feature) <= split.threshold);
                let left = nodes.len();
                nodes.push(FlatNode::Leaf { masses: vec![], labels: vec![] });
                let right = nodes.len();
                nodes.push(FlatNode::Leaf { masses: vec![], labels: vec![] });
                nodes[slot] = FlatNode::Split {
                    feature: split.feature,
                    threshold: split.threshold,
                    left,
                    right,
                };
                work.push((left, left_rows));
                work.push((right, right_rows));
            }
            None => {
                nodes[slot] = leaf_from_rows(data, row_weights, &scope, &rows);
            }
        }
    }
    Tree { scope, nodes }
}

fn leaf_from_rows(
    data: &TrainingData,
    row_weights: &[f64],
    scope: &[usize],
    rows: &[u32],
) -> FlatNode {
    let mut masses = vec![vec![0.0f64; data.classes]; scope.len()];
    for &r in rows {
        let w = row_weights[r as usize];
        for (k, &o) in scope.iter().enumerate() {
            masses[k][data.label(r as usize, o) as usize] += w;
        }
    }
    // argmax; ties go to the lowest class index. A node of only zero-weight
    // rows falls back to plain counts so the leaf still has a label.
    let labels = masses
        .iter()
        .enumerate()
        .map(|(k, m)| {
            if m.iter().all(|&x| x == 0.0) {
                let mut counts = vec![0u64; data.classes];
                for &r in rows {
                    counts[data.label(r as usize, scope[k]) as usize] += 1;
                }
                argmax(&counts.iter().map(|&c| c as f64).collect::<Vec<_>>())
            } else {
                argmax(m)
            }
        })
        .collect();
    FlatNode::Leaf { masses, labels }
}

fn argmax(values: &[f64]) -> u8 {
    let mut best = 0usize;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best as u8
}

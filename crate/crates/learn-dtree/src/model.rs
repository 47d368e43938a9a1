use serde::{Deserialize, Serialize};

use crate::train::DtError;

/// One node of a flattened tree. Rows with `feature <= threshold` descend
/// left. Leaves carry the weighted class-mass histogram per in-scope output
/// and the argmax labels derived from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FlatNode {
    Split { feature: usize, threshold: f64, left: usize, right: usize },
    Leaf { masses: Vec<Vec<f64>>, labels: Vec<u8> },
}

/// One trained tree predicting the outputs listed in `scope`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub scope: Vec<usize>,
    pub nodes: Vec<FlatNode>,
}

impl Tree {
    /// Index-walk from the root (node 0) to a leaf.
    pub fn leaf_for(&self, features: &[f64]) -> &FlatNode {
        let mut at = 0usize;
        loop {
            match &self.nodes[at] {
                FlatNode::Split { feature, threshold, left, right } => {
                    at = if features[*feature] <= *threshold { *left } else { *right };
                }
                leaf @ FlatNode::Leaf { .. } => return leaf,
            }
        }
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[FlatNode], at: usize) -> usize {
            match &nodes[at] {
                FlatNode::Leaf { .. } => 1,
                FlatNode::Split { left, right, .. } => {
                    1 + walk(nodes, *left).max(walk(nodes, *right))
                }
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, FlatNode::Leaf { .. })).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeVariant {
    /// One tree per output.
    SingleOutput,
    /// A single tree predicting all outputs at once.
    MultiOutput,
}

/// A serialized-friendly decision-tree model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub variant: TreeVariant,
    pub outputs: usize,
    pub schema_hash: String,
    pub class_weighted: bool,
    pub trained_on: usize,
    pub trees: Vec<Tree>,
}

impl TreeModel {
    /// Predicts all output labels for one raw feature vector.
    pub fn predict(&self, features: &[f64], schema_hash: &str) -> Result<Vec<u8>, DtError> {
        if schema_hash != self.schema_hash {
            return Err(DtError::SchemaMismatch);
        }
        Ok(self.predict_unchecked(features))
    }

    pub fn predict_unchecked(&self, features: &[f64]) -> Vec<u8> {
        let mut out = vec![0u8; self.outputs];
        for tree in &self.trees {
            if let FlatNode::Leaf { labels, .. } = tree.leaf_for(features) {
                for (k, &o) in tree.scope.iter().enumerate() {
                    out[o] = labels[k];
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tree models serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, DtError> {
        serde_json::from_str(s).map_err(|e| DtError::Serde(e.to_string()))
    }

    pub fn save(&self, path: &std::path::Path) -> Result<(), DtError> {
        std::fs::write(path, self.to_json())
            .map_err(|e| DtError::Io(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &std::path::Path) -> Result<Self, DtError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| DtError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

use thiserror::Error;

use crate::Dataset;

#[derive(Debug, Error, PartialEq)]
pub enum WeightsError {
    #[error("cannot compute class weights of an empty dataset")]
    EmptyDataset,
}

/// Inverse-prevalence class weights per output:
/// `weight(c) = N / (K_present * count(c))` over the classes that occur;
/// absent classes get weight 0 and are listed in `absent`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassWeights {
    /// `weights[output][class]`
    pub weights: Vec<Vec<f64>>,
    pub absent: Vec<(usize, usize)>,
}

impl ClassWeights {
    pub fn weight(&self, output: usize, class: u8) -> f64 {
        self.weights[output][class as usize]
    }

    /// Uniform weights, for unweighted training paths.
    pub fn uniform(outputs: usize, classes: usize) -> Self {
        ClassWeights { weights: vec![vec![1.0; classes]; outputs], absent: Vec::new() }
    }
}

pub fn class_weights(dataset: &Dataset) -> Result<ClassWeights, WeightsError> {
    if dataset.is_empty() {
        return Err(WeightsError::EmptyDataset);
    }
    let histograms = dataset.histograms();
    let n = dataset.len() as f64;
    let mut weights = Vec::with_capacity(histograms.len());
    let mut absent = Vec::new();
    for (output, hist) in histograms.iter().enumerate() {
        let present = hist.iter().filter(|&&c| c > 0).count() as f64;
        let mut w = Vec::with_capacity(hist.len());
        for (class, &count) in hist.iter().enumerate() {
            if count == 0 {
                absent.push((output, class));
                w.push(0.0);
            } else {
                w.push(n / (present * count as f64));
            }
        }
        weights.push(w);
    }
    Ok(ClassWeights { weights, absent })
}

use rayon::prelude::*;

use crate::TrainingData;

/// Gini impurity of weighted class masses: `1 - sum(p_c^2)`.
/// Masses must be nonnegative and not all zero.
pub fn gini(masses: &[f64]) -> Result<f64, &'static str> {
    let total: f64 = masses.iter().sum();
    if !(total > 0.0) {
        return Err("gini of all-zero masses");
    }
    let mut sum_sq = 0.0;
    for &m in masses {
        let p = m / total;
        sum_sq += p * p;
    }
    Ok(1.0 - sum_sq)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCandidate {
    pub feature: usize,
    pub threshold: f64,
    /// Mean (over in-scope outputs) per-unit-weight Gini decrease.
    pub gain: f64,
}

/// Minimum gain for a split to count as an improvement; guards against
/// floating-point dust driving unbounded growth.
const MIN_GAIN: f64 = 1e-12;

struct OutputMasses {
    parent: Vec<f64>,
    parent_gini: Vec<f64>,
}

fn parent_masses(
    data: &TrainingData,
    rows: &[u32],
    weights: &[f64],
    scope: &[usize],
) -> Option<OutputMasses> {
    let classes = data.classes;
    let mut parent = vec![0.0; scope.len() * classes];
    for &r in rows {
        let w = weights[r as usize];
        for (k, &o) in scope.iter().enumerate() {
            parent[k * classes + data.label(r as usize, o) as usize] += w;
        }
    }
    let mut parent_gini = Vec::with_capacity(scope.len());
    for k in 0..scope.len() {
        parent_gini.push(gini(&parent[k * classes..(k + 1) * classes]).ok()?);
    }
    Some(OutputMasses { parent, parent_gini })
}

/// Best split of `rows` by mean weighted Gini decrease across the in-scope
/// outputs. Thresholds are midpoints of adjacent distinct observed values.
/// Deterministic tie-break: lowest feature index, then lowest threshold.
/// Returns `None` when no split improves on the parent.
pub fn best_split(
    data: &TrainingData,
    rows: &[u32],
    weights: &[f64],
    scope: &[usize],
) -> Option<SplitCandidate> {
    if rows.len() < 2 {
        return None;
    }
    let parents = parent_masses(data, rows, weights, scope)?;
    if parents.parent_gini.iter().all(|&g| g == 0.0) {
        return None; // already pure on every output
    }

    let per_feature: Vec<Option<SplitCandidate>> = (0..data.f)
        .into_par_iter()
        .map(|feature| best_split_on_feature(data, rows, weights, scope, feature, &parents))
        .collect();

    // sequential reduction keeps the tie-break exact regardless of the
    // parallel evaluation order above
    let mut best: Option<SplitCandidate> = None;
    for candidate in per_feature.into_iter().flatten() {
        let better = match &best {
            None => true,
            Some(b) => candidate.gain > b.gain,
        };
        if better {
            best = Some(candidate);
        }
    }
    best
}

fn best_split_on_feature(
    data: &TrainingData,
    rows: &[u32],
    weights: &[f64],
    scope: &[usize],
    feature: usize,
    parents: &OutputMasses,
) -> Option<SplitCandidate> {
    let classes = data.classes;
    let mut order: Vec<u32> = rows.to_vec();
    order.sort_unstable_by(|&a, &b| {
        data.feature(a as usize, feature)
            .partial_cmp(&data.feature(b as usize, feature))
            .unwrap()
    });

    let total_weight: f64 = order.iter().map(|&r| weights[r as usize]).sum();
    if total_weight <= 0.0 {
        return None;
    }

    let mut left = vec![0.0; scope.len() * classes];
    let mut right = vec![0.0; classes];
    let mut left_weight = 0.0;
    let mut best: Option<SplitCandidate> = None;

    for i in 0..order.len() - 1 {
        let r = order[i] as usize;
        let w = weights[r];
        left_weight += w;
        for (k, &o) in scope.iter().enumerate() {
            left[k * classes + data.label(r, o) as usize] += w;
        }
        let v = data.feature(r, feature);
        let v_next = data.feature(order[i + 1] as usize, feature);
        if v == v_next {
            continue;
        }
        let threshold = v + (v_next - v) / 2.0;
        let right_weight = total_weight - left_weight;
        if left_weight <= 0.0 || right_weight <= 0.0 {
            continue;
        }
        let mut gain_sum = 0.0;
        for k in 0..scope.len() {
            let left_masses = &left[k * classes..(k + 1) * classes];
            let gl = gini_of_selected(left_masses);
            for c in 0..classes {
                right[c] = parents.parent[k * classes + c] - left_masses[c];
            }
            let gr = gini_of_selected(&right);
            gain_sum += parents.parent_gini[k]
                - (left_weight / total_weight) * gl
                - (right_weight / total_weight) * gr;
        }
        let gain = gain_sum / scope.len() as f64;
        if gain > MIN_GAIN {
            let better = match &best {
                None => true,
                Some(b) => gain > b.gain,
            };
            if better {
                best = Some(SplitCandidate { feature, threshold, gain });
            }
        }
    }
    best
}

/// Gini that treats an all-zero side as pure (occurs when one side carries
/// only zero-weight samples).
fn gini_of_selected(masses: &[f64]) -> f64 {
    gini(masses).unwrap_or(0.0)
}

use thiserror::Error;

use crate::assignment::Assignment;
use crate::candidates::{EnsembleCandidates, InstanceId};
use crate::feasibility::{check_feasible, MalformedAssignment, Violation};

#[derive(Debug, Error)]
pub enum UtilityError {
    #[error(transparent)]
    Malformed(#[from] MalformedAssignment),
    #[error("assignment is infeasible: {0:?}")]
    Infeasible(Vec<Violation>),
}

/// Root utility of a feasible assignment, computed bottom-up: an existing
/// instance contributes the summed scores of its selected members plus the
/// weighted utilities of its existing children; absent instances contribute 0.
pub fn assignment_utility(
    candidates: &EnsembleCandidates,
    a: &Assignment,
) -> Result<f64, UtilityError> {
    let feasibility = check_feasible(candidates, a)?;
    if !feasibility.feasible() {
        return Err(UtilityError::Infeasible(feasibility.violations));
    }
    Ok(node_utility(candidates, a, candidates.root()))
}

/// Bottom-up utility of one subtree, without re-checking feasibility.
/// Exposed for solvers that maintain feasibility incrementally.
pub fn node_utility(candidates: &EnsembleCandidates, a: &Assignment, id: InstanceId) -> f64 {
    if !a.exists(id) {
        return 0.0;
    }
    let inst = candidates.instance(id);
    let mut total = 0.0;
    for (r, role) in inst.roles.iter().enumerate() {
        for &c in a.members(id, r) {
            // member validity is part of the feasibility precondition
            total += role.score_of(c).unwrap_or(0.0);
        }
    }
    for &child in &inst.children {
        let child_inst = candidates.instance(child);
        total += child_inst.rel_weight * node_utility(candidates, a, child);
    }
    total
}

//! Exact ensemble resolution.
//!
//! [`encode`] turns an [`EnsembleCandidates`] structure into a Boolean
//! decision problem: one existence variable per potential instance, one
//! membership variable per (candidate component, role) pair. [`solve`] runs
//! a depth-first branch-and-bound over those variables maximizing root
//! utility; [`brute_force_solve`] is the exhaustive oracle used by tests.
//!
//! Both searches share the same variable order and both accept a new
//! incumbent only on a strict utility improvement, so among equal-utility
//! optima the lexicographically smallest assignment (false < true, variable
//! order) wins in either path.

mod brute;
#[cfg(test)]
pub(crate) mod fixtures;
mod problem;
mod solve;

pub use brute::{brute_force_solve, feasible_assignments, BRUTE_FORCE_VAR_LIMIT};
pub use problem::{encode, ResolutionProblem, Var};
pub use solve::{solve, solve_instrumented, ResolutionResult, SolveError, SolveStats};

use ensemble_core::EnsembleCandidates;

/// Convenience: encode and solve in one call.
pub fn resolve(
    candidates: &EnsembleCandidates,
    budget: std::time::Duration,
) -> Result<ResolutionResult, SolveError> {
    let problem = encode(candidates);
    solve(&problem, budget)
}

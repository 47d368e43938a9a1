use std::time::Instant;

use ensemble_core::{check_feasible, node_utility, Assignment, Cardinality, InstanceId};

use crate::problem::{ResolutionProblem, Var};
use crate::solve::{ResolutionResult, SolveError, SolveStats};

/// Hard cap on problem size for exhaustive enumeration.
pub const BRUTE_FORCE_VAR_LIMIT: usize = 30;

/// Exhaustive test oracle: walks every Boolean assignment of the problem's
/// variables in lexicographic order (false < true), filters out the
/// infeasible ones, and keeps the first assignment of maximal utility — the
/// same tie-break as [`crate::solve`]. Branches whose every completion is
/// structurally infeasible are skipped, which only removes assignments the
/// feasibility filter would reject anyway.
///
/// This function deliberately shares no search machinery with the solver:
/// legality during enumeration is derived directly from the candidate
/// structure, and complete assignments are judged by
/// [`ensemble_core::check_feasible`] alone.
pub fn brute_force_solve(p: &ResolutionProblem) -> Result<ResolutionResult, SolveError> {
    if p.var_count() > BRUTE_FORCE_VAR_LIMIT {
        return Err(SolveError::TooLargeForBruteForce {
            vars: p.var_count(),
            limit: BRUTE_FORCE_VAR_LIMIT,
        });
    }
    let start = Instant::now();
    let mut state = Enumerator::new(p);
    state.run(0, &mut |a, u, best: &mut Option<(Assignment, f64)>| {
        let improves = match best {
            Some((_, incumbent)) => u > *incumbent,
            None => true,
        };
        if improves {
            *best = Some((a.clone(), u));
        }
    });
    let wall = start.elapsed();
    match state.best {
        Some((best, utility)) => Ok(ResolutionResult {
            best,
            utility,
            stats: SolveStats { nodes: state.leaves, wall, optimal: true },
        }),
        None => Err(SolveError::Infeasible),
    }
}

/// Every feasible assignment with its utility, in enumeration order.
/// Intended for small-instance tests (bound soundness, tie-break audits).
pub fn feasible_assignments(p: &ResolutionProblem) -> Result<Vec<(Assignment, f64)>, SolveError> {
    if p.var_count() > 24 {
        return Err(SolveError::TooLargeForBruteForce { vars: p.var_count(), limit: 24 });
    }
    let mut out = Vec::new();
    let mut state = Enumerator::new(p);
    state.run(0, &mut |a, u, _| out.push((a.clone(), u)));
    Ok(out)
}

struct Enumerator<'p, 'c> {
    p: &'p ResolutionProblem<'c>,
    exists: Vec<Option<bool>>,
    selected: Vec<usize>,
    assignment: Assignment,
    best: Option<(Assignment, f64)>,
    leaves: u64,
}

impl<'p, 'c> Enumerator<'p, 'c> {
    fn new(p: &'p ResolutionProblem<'c>) -> Self {
        Enumerator {
            p,
            exists: vec![None; p.candidates.len()],
            selected: vec![0; p.roles.len()],
            assignment: Assignment::empty(p.candidates),
            best: None,
            leaves: 0,
        }
    }

    fn run(
        &mut self,
        var: usize,
        on_leaf: &mut (dyn FnMut(&Assignment, f64, &mut Option<(Assignment, f64)>) + '_),
    ) {
        if var == self.p.var_count() {
            self.leaves += 1;
            let feasibility = check_feasible(self.p.candidates, &self.assignment)
                .expect("enumerator only builds well-formed assignments");
            if feasibility.feasible() {
                let u = node_utility(self.p.candidates, &self.assignment, InstanceId(0));
                on_leaf(&self.assignment, u, &mut self.best);
            }
            return;
        }
        match self.p.vars[var] {
            Var::Exists(id) => {
                let meta = &self.p.instances[id.0];
                let parent_exists =
                    meta.parent.map(|parent| self.exists[parent] == Some(true));
                for value in [false, true] {
                    // the root instance is pinned to exist
                    if id.0 == 0 && !value {
                        continue;
                    }
                    if value && parent_exists == Some(false) {
                        continue;
                    }
                    if !value && meta.mandatory && parent_exists == Some(true) {
                        continue;
                    }
                    self.exists[id.0] = Some(value);
                    self.assignment.set_exists(id, value);
                    self.run(var + 1, on_leaf);
                    self.assignment.set_exists(id, false);
                    self.exists[id.0] = None;
                }
            }
            Var::Member { instance, role, cand } => {
                let rid = self.p.role_of_var[var].expect("member var has a role");
                let meta_role = &self.p.roles[rid];
                let instance_exists = self.exists[instance.0] == Some(true);
                let cap = match meta_role.cardinality {
                    Cardinality::OneOf => 1,
                    Cardinality::SubsetWithMax(max) => max,
                };
                let last = cand + 1 == meta_role.member_vars.len();
                // skipping the last candidate of an unfilled one-of role of an
                // existing instance: every completion is infeasible
                let false_ok = !(instance_exists
                    && meta_role.cardinality == Cardinality::OneOf
                    && last
                    && self.selected[rid] == 0);
                let true_ok = instance_exists && self.selected[rid] < cap;
                if false_ok {
                    self.run(var + 1, on_leaf);
                }
                if true_ok {
                    let component =
                        self.p.candidates.instance(instance).roles[role].candidates[cand];
                    self.selected[rid] += 1;
                    self.assignment.add_member(instance, role, component);
                    self.run(var + 1, on_leaf);
                    self.assignment.remove_member(instance, role, component);
                    self.selected[rid] -= 1;
                }
            }
        }
    }
}

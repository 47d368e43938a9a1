use std::collections::VecDeque;
use std::time::{Duration, Instant};

use thiserror::Error;

use ensemble_core::{check_feasible, node_utility, Assignment, Cardinality, InstanceId};

use crate::problem::{ResolutionProblem, Var};

/// Slack subtracted before bound pruning. A subtree is abandoned only when
/// its optimistic bound is at least this far below the incumbent, so
/// floating-point error in the bound can never discard a strictly better
/// completion.
const PRUNE_SLACK: f64 = 1e-9;

/// How many branch decisions pass between deadline checks.
const BUDGET_CHECK_INTERVAL: u64 = 1024;

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("no feasible assignment exists for this problem")]
    Infeasible,
    #[error("time budget must be positive")]
    InvalidBudget,
    #[error("time budget exhausted before any feasible assignment was found")]
    BudgetExhaustedWithoutSolution,
    #[error("problem has {vars} variables, refusing brute force above {limit}")]
    TooLargeForBruteForce { vars: usize, limit: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveStats {
    /// Branch decisions attempted (solver) or leaves visited (oracle).
    pub nodes: u64,
    pub wall: Duration,
    /// True when the search space was exhausted within budget; the result
    /// is then the global optimum under the tie-break.
    pub optimal: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolutionResult {
    pub best: Assignment,
    pub utility: f64,
    pub stats: SolveStats,
}

/// Branch-and-bound search for the utility-maximal feasible assignment.
///
/// Branching follows the encoded variable order (existence before the
/// owning instance's memberships, parents before children), false branch
/// first. Structural constraints are propagated; black-box predicates are
/// checked on complete assignments only. Among equal-utility optima the
/// first one in branch order — the lexicographically smallest assignment —
/// is kept, because an incumbent is only replaced on strict improvement.
pub fn solve(p: &ResolutionProblem, budget: Duration) -> Result<ResolutionResult, SolveError> {
    solve_instrumented(p, budget, &mut |_, _| {})
}

/// [`solve`] with a per-node hook receiving the partial variable assignment
/// and the optimistic bound computed for it. Used by bound-soundness tests.
pub fn solve_instrumented(
    p: &ResolutionProblem,
    budget: Duration,
    hook: &mut dyn FnMut(&[Option<bool>], f64),
) -> Result<ResolutionResult, SolveError> {
    if budget.is_zero() {
        return Err(SolveError::InvalidBudget);
    }
    let start = Instant::now();
    let mut search = Search::new(p, start + budget);

    // the root ensemble instance always exists
    let root_var = search.p.instances[0].exists_var;
    if !search.assign(root_var, true) {
        return Err(SolveError::Infeasible);
    }
    search.dfs(0, hook);

    let wall = start.elapsed();
    let optimal = !search.budget_hit;
    match search.best {
        Some((best, utility)) => Ok(ResolutionResult {
            best,
            utility,
            stats: SolveStats { nodes: search.nodes, wall, optimal },
        }),
        None if optimal => Err(SolveError::Infeasible),
        None => Err(SolveError::BudgetExhaustedWithoutSolution),
    }
}

struct Search<'p, 'c> {
    p: &'p ResolutionProblem<'c>,
    values: Vec<Option<bool>>,
    trail: Vec<usize>,
    /// Per role id: number of membership vars currently true / decided.
    selected: Vec<usize>,
    decided: Vec<usize>,
    assignment: Assignment,
    best: Option<(Assignment, f64)>,
    nodes: u64,
    deadline: Instant,
    budget_hit: bool,
}

impl<'p, 'c> Search<'p, 'c> {
    fn new(p: &'p ResolutionProblem<'c>, deadline: Instant) -> Self {
        Search {
            p,
            values: vec![None; p.var_count()],
            trail: Vec::with_capacity(p.var_count()),
            selected: vec![0; p.roles.len()],
            decided: vec![0; p.roles.len()],
            assignment: Assignment::empty(p.candidates),
            best: None,
            nodes: 0,
            deadline,
            budget_hit: false,
        }
    }

    /// Assigns a variable and propagates every structural consequence.
    /// Returns false on conflict; the trail records all bindings made so the
    /// caller can undo to its mark either way.
    fn assign(&mut self, var: usize, value: bool) -> bool {
        let mut queue = VecDeque::new();
        queue.push_back((var, value));
        while let Some((v, val)) = queue.pop_front() {
            match self.values[v] {
                Some(existing) => {
                    if existing != val {
                        return false;
                    }
                    continue;
                }
                None => {}
            }
            self.values[v] = Some(val);
            self.trail.push(v);
            if !self.apply(v, val, &mut queue) {
                return false;
            }
        }
        true
    }

    fn apply(&mut self, var: usize, value: bool, queue: &mut VecDeque<(usize, bool)>) -> bool {
        match self.p.vars[var] {
            Var::Exists(id) => {
                let meta = &self.p.instances[id.0];
                if value {
                    self.assignment.set_exists(id, true);
                    if let Some(parent) = meta.parent {
                        queue.push_back((self.p.instances[parent].exists_var, true));
                    }
                    for &child in &meta.children {
                        if self.p.instances[child].mandatory {
                            queue.push_back((self.p.instances[child].exists_var, true));
                        }
                    }
                    for &rid in &meta.roles {
                        let role = &self.p.roles[rid];
                        if role.cardinality == Cardinality::OneOf
                            && (role.member_vars.is_empty()
                                || (self.decided[rid] == role.member_vars.len()
                                    && self.selected[rid] == 0))
                        {
                            return false;
                        }
                    }
                } else {
                    for &child in &meta.children {
                        queue.push_back((self.p.instances[child].exists_var, false));
                    }
                    for &rid in &meta.roles {
                        for &mv in &self.p.roles[rid].member_vars {
                            queue.push_back((mv, false));
                        }
                    }
                    if meta.mandatory {
                        if let Some(parent) = meta.parent {
                            queue.push_back((self.p.instances[parent].exists_var, false));
                        }
                    }
                }
            }
            Var::Member { instance, role, cand } => {
                let rid = self.p.role_of_var[var].expect("member var has a role");
                let meta_role = &self.p.roles[rid];
                self.decided[rid] += 1;
                if value {
                    self.selected[rid] += 1;
                    let component = self.p.candidates.instance(instance).roles[role].candidates[cand];
                    self.assignment.add_member(instance, role, component);
                    queue.push_back((self.p.instances[instance.0].exists_var, true));
                    match meta_role.cardinality {
                        Cardinality::OneOf => {
                            if self.selected[rid] > 1 {
                                return false;
                            }
                            for &mv in &meta_role.member_vars {
                                if mv != var {
                                    queue.push_back((mv, false));
                                }
                            }
                        }
                        Cardinality::SubsetWithMax(max) => {
                            if self.selected[rid] > max {
                                return false;
                            }
                            if self.selected[rid] == max {
                                for &mv in &meta_role.member_vars {
                                    if self.values[mv].is_none() {
                                        queue.push_back((mv, false));
                                    }
                                }
                            }
                        }
                    }
                    for &other in &self.p.conflicts[var] {
                        queue.push_back((other, false));
                    }
                } else if meta_role.cardinality == Cardinality::OneOf
                    && self.decided[rid] == meta_role.member_vars.len()
                    && self.selected[rid] == 0
                {
                    // no candidate left for a one-of role
                    match self.values[self.p.instances[instance.0].exists_var] {
                        Some(true) => return false,
                        Some(false) => {}
                        None => queue.push_back((self.p.instances[instance.0].exists_var, false)),
                    }
                }
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let var = self.trail.pop().unwrap();
            let value = self.values[var].take().expect("trailed var is set");
            match self.p.vars[var] {
                Var::Exists(id) => {
                    if value {
                        self.assignment.set_exists(id, false);
                    }
                }
                Var::Member { instance, role, cand } => {
                    let rid = self.p.role_of_var[var].unwrap();
                    self.decided[rid] -= 1;
                    if value {
                        self.selected[rid] -= 1;
                        let component =
                            self.p.candidates.instance(instance).roles[role].candidates[cand];
                        self.assignment.remove_member(instance, role, component);
                    }
                }
            }
        }
    }

    fn dfs(&mut self, from_var: usize, hook: &mut dyn FnMut(&[Option<bool>], f64)) {
        if self.budget_hit {
            return;
        }
        let mut var = from_var;
        let n = self.p.var_count();
        while var < n && self.values[var].is_some() {
            var += 1;
        }
        if var == n {
            self.leaf();
            return;
        }
        for value in [false, true] {
            let mark = self.trail.len();
            self.nodes += 1;
            if self.nodes % BUDGET_CHECK_INTERVAL == 0 && Instant::now() >= self.deadline {
                self.budget_hit = true;
            }
            if self.assign(var, value) {
                let bound = self.upper_bound();
                hook(&self.values, bound);
                let prune = match &self.best {
                    Some((_, incumbent)) => bound + PRUNE_SLACK <= *incumbent,
                    None => false,
                };
                if !prune {
                    self.dfs(var + 1, hook);
                }
            }
            self.undo(mark);
            if self.budget_hit {
                return;
            }
        }
    }

    fn leaf(&mut self) {
        let feasibility = check_feasible(self.p.candidates, &self.assignment)
            .expect("search only builds well-formed assignments");
        if !feasibility.feasible() {
            return;
        }
        let utility = node_utility(self.p.candidates, &self.assignment, InstanceId(0));
        let improves = match &self.best {
            Some((_, incumbent)) => utility > *incumbent,
            None => true,
        };
        if improves {
            self.best = Some((self.assignment.clone(), utility));
        }
    }

    /// Optimistic completion bound: every instance not yet excluded picks its
    /// best members independently, ignoring cross-instance disjointness and
    /// black-box predicates. Admissible for the additive utilities the
    /// candidate model expresses.
    fn upper_bound(&self) -> f64 {
        let mut total = 0.0;
        for meta in &self.p.instances {
            let ev = self.values[meta.exists_var];
            if ev == Some(false) {
                continue;
            }
            let mut opt = 0.0;
            let mut impossible = false;
            for &rid in &meta.roles {
                let role = &self.p.roles[rid];
                match role.cardinality {
                    Cardinality::OneOf => {
                        if self.selected[rid] == 1 {
                            for (k, &mv) in role.member_vars.iter().enumerate() {
                                if self.values[mv] == Some(true) {
                                    opt += role.scores[k];
                                    break;
                                }
                            }
                        } else {
                            let mut m = f64::NEG_INFINITY;
                            for (k, &mv) in role.member_vars.iter().enumerate() {
                                if self.values[mv].is_none() {
                                    m = m.max(role.scores[k]);
                                }
                            }
                            if m == f64::NEG_INFINITY {
                                impossible = true;
                                break;
                            }
                            opt += m;
                        }
                    }
                    Cardinality::SubsetWithMax(max) => {
                        let mut undecided: Vec<f64> = Vec::new();
                        for (k, &mv) in role.member_vars.iter().enumerate() {
                            match self.values[mv] {
                                Some(true) => opt += role.scores[k],
                                None => undecided.push(role.scores[k]),
                                Some(false) => {}
                            }
                        }
                        let room = max.saturating_sub(self.selected[rid]);
                        if room > 0 && !undecided.is_empty() {
                            undecided.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
                            opt += undecided.iter().take(room).filter(|&&s| s > 0.0).sum::<f64>();
                        }
                    }
                }
            }
            match ev {
                Some(true) => {
                    if impossible {
                        // dead branch; propagation will fault it shortly
                        return f64::NEG_INFINITY;
                    }
                    total += meta.abs_weight * opt;
                }
                None => {
                    if !impossible {
                        total += (meta.abs_weight * opt).max(0.0);
                    }
                }
                Some(false) => unreachable!(),
            }
        }
        total
    }
}

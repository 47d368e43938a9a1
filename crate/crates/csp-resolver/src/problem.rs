use ensemble_core::{Cardinality, ComponentId, EnsembleCandidates, InstanceId};

/// One Boolean decision variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Exists(InstanceId),
    Member { instance: InstanceId, role: usize, cand: usize },
}

/// Per-role solver metadata.
#[derive(Debug, Clone)]
pub(crate) struct RoleMeta {
    pub cardinality: Cardinality,
    /// Variable indices of this role's membership vars, candidate order.
    pub member_vars: Vec<usize>,
    pub scores: Vec<f64>,
}

/// Per-instance solver metadata.
#[derive(Debug, Clone)]
pub(crate) struct InstanceMeta {
    pub exists_var: usize,
    pub parent: Option<usize>,
    pub mandatory: bool,
    pub children: Vec<usize>,
    /// Indices into `ResolutionProblem::roles`.
    pub roles: Vec<usize>,
    pub abs_weight: f64,
}

/// An encoded resolution problem: deterministic variable enumeration plus
/// the structural facts (parent/child, mandatory, cardinality, disjointness)
/// a solver may propagate. Black-box constraint predicates stay behind
/// [`ensemble_core::check_feasible`] and are only tested on full leaves.
pub struct ResolutionProblem<'c> {
    pub candidates: &'c EnsembleCandidates,
    pub vars: Vec<Var>,
    pub(crate) instances: Vec<InstanceMeta>,
    pub(crate) roles: Vec<RoleMeta>,
    /// For each variable: membership vars that must be false when it is true
    /// (same component selected in another role of a shared disjoint group).
    pub(crate) conflicts: Vec<Vec<usize>>,
    pub(crate) role_of_var: Vec<Option<usize>>,
}

impl<'c> ResolutionProblem<'c> {
    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn existence_var_count(&self) -> usize {
        self.instances.len()
    }

    pub fn membership_var_count(&self) -> usize {
        self.vars.len() - self.instances.len()
    }
}

/// Enumerates decision variables in deterministic order: instances in arena
/// order (parents always precede their children), and for each instance its
/// existence variable followed by its membership variables in role and
/// candidate-list order.
pub fn encode(candidates: &EnsembleCandidates) -> ResolutionProblem<'_> {
    let n = candidates.len();
    let mut vars = Vec::new();
    let mut instances = Vec::with_capacity(n);
    let mut roles = Vec::new();
    let mut member_var_of: Vec<Vec<Vec<usize>>> = Vec::with_capacity(n);

    for (i, inst) in candidates.instances.iter().enumerate() {
        let exists_var = vars.len();
        vars.push(Var::Exists(InstanceId(i)));
        let mut role_ids = Vec::with_capacity(inst.roles.len());
        let mut per_role_vars = Vec::with_capacity(inst.roles.len());
        for (r, role) in inst.roles.iter().enumerate() {
            let mut member_vars = Vec::with_capacity(role.candidates.len());
            for k in 0..role.candidates.len() {
                member_vars.push(vars.len());
                vars.push(Var::Member { instance: InstanceId(i), role: r, cand: k });
            }
            per_role_vars.push(member_vars.clone());
            role_ids.push(roles.len());
            roles.push(RoleMeta {
                cardinality: role.cardinality,
                member_vars,
                scores: role.scores.clone(),
            });
        }
        member_var_of.push(per_role_vars);
        instances.push(InstanceMeta {
            exists_var,
            parent: inst.parent.map(|p| p.0),
            mandatory: inst.kind == ensemble_core::ChildKind::Mandatory,
            children: inst.children.iter().map(|c| c.0).collect(),
            roles: role_ids,
            abs_weight: inst.abs_weight,
        });
    }

    let mut conflicts: Vec<Vec<usize>> = vec![Vec::new(); vars.len()];
    for group in &candidates.groups {
        // all (component, var) pairs covered by the group
        let mut occurrences: Vec<(ComponentId, usize)> = Vec::new();
        for role_ref in &group.roles {
            let inst = candidates.instance(role_ref.instance);
            let role = &inst.roles[role_ref.role];
            for (k, &c) in role.candidates.iter().enumerate() {
                occurrences.push((c, member_var_of[role_ref.instance.0][role_ref.role][k]));
            }
        }
        occurrences.sort_unstable();
        let mut i = 0;
        while i < occurrences.len() {
            let mut j = i;
            while j < occurrences.len() && occurrences[j].0 == occurrences[i].0 {
                j += 1;
            }
            for a in i..j {
                for b in i..j {
                    if a != b {
                        conflicts[occurrences[a].1].push(occurrences[b].1);
                    }
                }
            }
            i = j;
        }
    }
    for list in conflicts.iter_mut() {
        list.sort_unstable();
        list.dedup();
    }

    let mut role_of_var = vec![None; vars.len()];
    for (rid, role) in roles.iter().enumerate() {
        for &v in &role.member_vars {
            role_of_var[v] = Some(rid);
        }
    }

    ResolutionProblem { candidates, vars, instances, roles, conflicts, role_of_var }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{child_under_root, one_of_role, root_only, subset_role};
    use ensemble_core::testkit::random_candidates;
    use ensemble_core::{ChildKind, DisjointGroup, RoleRef};

    #[test]
    fn root_only_has_one_variable() {
        let c = root_only();
        let p = encode(&c);
        assert_eq!(p.var_count(), 1);
        assert_eq!(p.vars[0], Var::Exists(InstanceId(0)));
    }

    #[test]
    fn approach_like_encoding_counts() {
        let mut c = root_only();
        child_under_root(
            &mut c,
            "Approach",
            ChildKind::Optional,
            vec![subset_role(2, &[(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0)])],
        );
        let p = encode(&c);
        assert_eq!(p.existence_var_count(), 2);
        assert_eq!(p.membership_var_count(), 4);
    }

    #[test]
    fn charger_like_encoding_counts() {
        let mut c = root_only();
        for _ in 0..3 {
            child_under_root(
                &mut c,
                "Charger",
                ChildKind::Optional,
                vec![one_of_role(&[(0, 1.0), (1, 1.0)])],
            );
        }
        let p = encode(&c);
        assert_eq!(p.existence_var_count(), 4);
        assert_eq!(p.membership_var_count(), 6);
    }

    #[test]
    fn variable_count_matches_candidates() {
        for seed in 0..200u64 {
            let c = random_candidates(seed);
            let p = encode(&c);
            assert_eq!(p.var_count(), c.variable_count());
        }
    }

    #[test]
    fn conflict_lists_are_symmetric() {
        let mut c = root_only();
        let a = child_under_root(&mut c, "A", ChildKind::Optional, vec![one_of_role(&[(0, 1.0)])]);
        let b = child_under_root(&mut c, "B", ChildKind::Optional, vec![one_of_role(&[(0, 2.0)])]);
        c.groups.push(DisjointGroup {
            label: "Root.allDisjoint".into(),
            owner: InstanceId(0),
            roles: vec![
                RoleRef { instance: InstanceId(a), role: 0 },
                RoleRef { instance: InstanceId(b), role: 0 },
            ],
        });
        let p = encode(&c);
        let va = p.instances[a].exists_var + 1;
        let vb = p.instances[b].exists_var + 1;
        assert_eq!(p.conflicts[va], vec![vb]);
        assert_eq!(p.conflicts[vb], vec![va]);
    }
}

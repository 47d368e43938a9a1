use std::fmt;
use std::sync::Arc;

use crate::assignment::Assignment;

/// Identifier of a component instance (a potential ensemble member).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ComponentId(pub u32);

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// Index of a potential ensemble instance inside [`EnsembleCandidates`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct InstanceId(pub usize);

impl fmt::Display for InstanceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i{}", self.0)
    }
}

/// Member cardinality of a role.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cardinality {
    /// Exactly one member must be selected when the owning instance exists.
    OneOf,
    /// Any subset of the candidates up to `max` members.
    SubsetWithMax(usize),
}

/// Whether a child instance must exist together with its parent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChildKind {
    Optional,
    Mandatory,
}

/// A member role of a concrete potential instance, with its candidate list
/// resolved against a snapshot. `scores[k]` is the utility contributed by
/// selecting `candidates[k]` into this role.
#[derive(Clone)]
pub struct RoleCandidates {
    pub name: String,
    pub cardinality: Cardinality,
    pub candidates: Vec<ComponentId>,
    pub scores: Vec<f64>,
}

impl RoleCandidates {
    pub fn candidate_index(&self, c: ComponentId) -> Option<usize> {
        self.candidates.iter().position(|&x| x == c)
    }

    pub fn score_of(&self, c: ComponentId) -> Option<f64> {
        self.candidate_index(c).map(|i| self.scores[i])
    }
}

impl fmt::Debug for RoleCandidates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RoleCandidates")
            .field("name", &self.name)
            .field("cardinality", &self.cardinality)
            .field("candidates", &self.candidates)
            .finish()
    }
}

/// One potential ensemble instance: a spec node bound to a concrete context
/// (e.g. `ApproachFieldUnderThreat` bound to field 2).
#[derive(Debug, Clone)]
pub struct Instance {
    pub spec_name: String,
    /// Binding value of this node (e.g. field index), if the spec node is
    /// instantiated per binding.
    pub binding: Option<u32>,
    /// Human-readable label, unique across the candidate tree.
    pub label: String,
    pub parent: Option<InstanceId>,
    pub kind: ChildKind,
    /// Multiplier applied to this instance's utility in its parent's sum.
    pub rel_weight: f64,
    /// Product of `rel_weight` along the path from the root.
    pub abs_weight: f64,
    pub roles: Vec<RoleCandidates>,
    pub children: Vec<InstanceId>,
}

impl Instance {
    pub fn role_index(&self, name: &str) -> Option<usize> {
        self.roles.iter().position(|r| r.name == name)
    }
}

/// Reference to one role of one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RoleRef {
    pub instance: InstanceId,
    pub role: usize,
}

/// A structural all-disjoint constraint: the member sets of the referenced
/// roles must be pairwise disjoint.
#[derive(Debug, Clone)]
pub struct DisjointGroup {
    pub label: String,
    /// Instance that declared the group (the constraint's scope).
    pub owner: InstanceId,
    pub roles: Vec<RoleRef>,
}

/// A black-box constraint predicate attached to an instance. Solvers only
/// evaluate these on complete assignments.
#[derive(Clone)]
pub struct PredicateCheck {
    pub label: String,
    pub owner: InstanceId,
    pub check: Arc<dyn Fn(&EnsembleCandidates, InstanceId, &Assignment) -> bool + Send + Sync>,
}

impl fmt::Debug for PredicateCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PredicateCheck")
            .field("label", &self.label)
            .field("owner", &self.owner)
            .finish()
    }
}

/// All potential ensemble instances derived from one snapshot, stored in
/// preorder (every parent precedes its children; index 0 is the root).
#[derive(Debug, Clone, Default)]
pub struct EnsembleCandidates {
    pub instances: Vec<Instance>,
    pub groups: Vec<DisjointGroup>,
    pub predicates: Vec<PredicateCheck>,
}

impl EnsembleCandidates {
    pub fn root(&self) -> InstanceId {
        InstanceId(0)
    }

    pub fn instance(&self, id: InstanceId) -> &Instance {
        &self.instances[id.0]
    }

    pub fn len(&self) -> usize {
        self.instances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instances.is_empty()
    }

    /// Instance ids of the subtree rooted at `id`, in preorder.
    pub fn subtree(&self, id: InstanceId) -> Vec<InstanceId> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(i) = stack.pop() {
            out.push(i);
            // push in reverse so children come out in declaration order
            for &c in self.instances[i.0].children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// Total number of decision variables (existence + memberships) the
    /// candidate structure induces.
    pub fn variable_count(&self) -> usize {
        self.instances.len()
            + self
                .instances
                .iter()
                .map(|i| i.roles.iter().map(|r| r.candidates.len()).sum::<usize>())
                .sum::<usize>()
    }
}

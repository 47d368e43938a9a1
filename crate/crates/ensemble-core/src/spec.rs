use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::assignment::Assignment;
use crate::candidates::{
    Cardinality, ChildKind, ComponentId, DisjointGroup, EnsembleCandidates, Instance, InstanceId,
    PredicateCheck, RoleCandidates, RoleRef,
};

/// Ancestor binding values available to a bind function, root first.
#[derive(Debug, Clone, Default)]
pub struct BindCtx {
    pub path: Vec<u32>,
}

impl BindCtx {
    /// Binding of the immediate parent instance, when it has one.
    pub fn parent_binding(&self) -> Option<u32> {
        self.path.last().copied()
    }
}

/// One member role produced by a bind function: candidates in the order they
/// should be branched on, each with the utility its selection contributes.
#[derive(Debug, Clone)]
pub struct RoleSeed {
    pub name: String,
    pub cardinality: Cardinality,
    pub members: Vec<(ComponentId, f64)>,
}

impl RoleSeed {
    pub fn one_of(name: &str, members: Vec<(ComponentId, f64)>) -> Self {
        RoleSeed { name: name.to_string(), cardinality: Cardinality::OneOf, members }
    }

    pub fn subset_max(name: &str, max: usize, members: Vec<(ComponentId, f64)>) -> Self {
        RoleSeed {
            name: name.to_string(),
            cardinality: Cardinality::SubsetWithMax(max),
            members,
        }
    }
}

/// One concrete instance a spec node produces for a snapshot.
#[derive(Debug, Clone)]
pub struct InstanceSeed {
    pub binding: Option<u32>,
    pub roles: Vec<RoleSeed>,
    /// Utility weight of this instance in its parent's sum; defaults to the
    /// child declaration's weight. Lets a binding scale its own contribution
    /// (e.g. averaging over a per-binding member count).
    pub weight: Option<f64>,
}

impl InstanceSeed {
    pub fn new(binding: Option<u32>, roles: Vec<RoleSeed>) -> Self {
        InstanceSeed { binding, roles, weight: None }
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = Some(weight);
        self
    }
}

/// A structural all-disjoint constraint declaration: all roles in the
/// declaring node's subtree whose (spec name, role name) matches a selector
/// must have pairwise disjoint member sets.
#[derive(Debug, Clone)]
pub struct DisjointDecl {
    pub label: String,
    pub selectors: Vec<(String, String)>,
}

type BindFn<S> = Arc<dyn Fn(&S, &BindCtx) -> Vec<InstanceSeed> + Send + Sync>;
type PredicateFn =
    Arc<dyn Fn(&EnsembleCandidates, InstanceId, &Assignment) -> bool + Send + Sync>;
type UniverseFn<S> = Arc<dyn Fn(&S) -> BTreeSet<ComponentId> + Send + Sync>;

/// Declaration of a child spec under a parent node.
pub struct ChildDecl<S> {
    pub kind: ChildKind,
    /// Multiplier applied to each child instance's utility in the parent sum.
    pub weight: f64,
    pub node: SpecNode<S>,
}

/// One node type of an ensemble specification tree, generic over the
/// snapshot type it is evaluated against.
pub struct SpecNode<S> {
    name: String,
    bind: BindFn<S>,
    children: Vec<ChildDecl<S>>,
    disjoint: Vec<DisjointDecl>,
    predicate: Option<(String, PredicateFn)>,
}

impl<S> SpecNode<S> {
    pub fn new<F>(name: &str, bind: F) -> Self
    where
        F: Fn(&S, &BindCtx) -> Vec<InstanceSeed> + Send + Sync + 'static,
    {
        SpecNode {
            name: name.to_string(),
            bind: Arc::new(bind),
            children: Vec::new(),
            disjoint: Vec::new(),
            predicate: None,
        }
    }

    /// A node with exactly one instance and no member roles, e.g. a root
    /// that only aggregates children.
    pub fn singleton(name: &str) -> Self {
        Self::new(name, |_, _| vec![InstanceSeed::new(None, Vec::new())])
    }

    pub fn child(mut self, kind: ChildKind, weight: f64, node: SpecNode<S>) -> Self {
        self.children.push(ChildDecl { kind, weight, node });
        self
    }

    pub fn all_disjoint(mut self, label: &str, selectors: &[(&str, &str)]) -> Self {
        self.disjoint.push(DisjointDecl {
            label: label.to_string(),
            selectors: selectors
                .iter()
                .map(|(s, r)| (s.to_string(), r.to_string()))
                .collect(),
        });
        self
    }

    pub fn constraint<F>(mut self, label: &str, check: F) -> Self
    where
        F: Fn(&EnsembleCandidates, InstanceId, &Assignment) -> bool + Send + Sync + 'static,
    {
        self.predicate = Some((label.to_string(), Arc::new(check)));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    fn spec_names(&self, out: &mut BTreeSet<String>) {
        out.insert(self.name.clone());
        for c in &self.children {
            c.node.spec_names(out);
        }
    }
}

/// A complete specification: a root node plus the component universe used to
/// validate candidate references.
pub struct EnsembleSpec<S> {
    root: SpecNode<S>,
    universe: UniverseFn<S>,
}

#[derive(Debug, Error, PartialEq)]
pub enum SpecError {
    #[error("root node {name} produced {got} bindings, expected exactly 1")]
    RootBindingCount { name: String, got: usize },
    #[error("{path}: duplicate child spec name {name}")]
    DuplicateChildName { path: String, name: String },
    #[error("{path}: duplicate binding {binding:?}")]
    DuplicateBinding { path: String, binding: Option<u32> },
    #[error("{path}/{role}: duplicate candidate {component}")]
    DuplicateCandidate { path: String, role: String, component: ComponentId },
    #[error("{path}/{role}: component {component} not present in the snapshot")]
    UnknownComponent { path: String, role: String, component: ComponentId },
    #[error("{path}: disjoint group {label} references unknown spec {spec}")]
    UnknownDisjointSpec { path: String, label: String, spec: String },
    #[error("{path}: instance of {spec} has no role named {role} (group {label})")]
    UnknownDisjointRole { path: String, label: String, spec: String, role: String },
    #[error("{path}: negative child weight {weight}")]
    NegativeWeight { path: String, weight: f64 },
}

impl<S> EnsembleSpec<S> {
    pub fn new<F>(root: SpecNode<S>, universe: F) -> Self
    where
        F: Fn(&S) -> BTreeSet<ComponentId> + Send + Sync + 'static,
    {
        EnsembleSpec { root, universe: Arc::new(universe) }
    }

    pub fn root(&self) -> &SpecNode<S> {
        &self.root
    }
}

/// Evaluates a specification against one snapshot, producing every potential
/// ensemble instance with fully resolved candidate member lists. The result
/// is a pure function of the inputs: bindings appear in the order the bind
/// functions emit them and instances are stored in preorder.
pub fn evaluate_candidates<S>(
    spec: &EnsembleSpec<S>,
    snapshot: &S,
) -> Result<EnsembleCandidates, SpecError> {
    let universe = (spec.universe)(snapshot);

    let mut known_specs = BTreeSet::new();
    spec.root.spec_names(&mut known_specs);

    let mut candidates = EnsembleCandidates::default();
    // (instance, node) pairs whose disjoint groups and predicates are
    // attached once the whole subtree exists
    let mut pending: Vec<(InstanceId, &SpecNode<S>)> = Vec::new();

    let root_seeds = (spec.root.bind)(snapshot, &BindCtx::default());
    if root_seeds.len() != 1 {
        return Err(SpecError::RootBindingCount {
            name: spec.root.name.clone(),
            got: root_seeds.len(),
        });
    }
    instantiate(
        &spec.root,
        root_seeds.into_iter().next().unwrap(),
        None,
        ChildKind::Mandatory,
        1.0,
        snapshot,
        &BindCtx::default(),
        &universe,
        &mut candidates,
        &mut pending,
    )?;

    for (owner, node) in pending {
        attach_constraints(node, owner, &known_specs, &mut candidates)?;
    }

    Ok(candidates)
}

#[allow(clippy::too_many_arguments)]
fn instantiate<'a, S>(
    node: &'a SpecNode<S>,
    seed: InstanceSeed,
    parent: Option<InstanceId>,
    kind: ChildKind,
    rel_weight: f64,
    snapshot: &S,
    ctx: &BindCtx,
    universe: &BTreeSet<ComponentId>,
    candidates: &mut EnsembleCandidates,
    pending: &mut Vec<(InstanceId, &'a SpecNode<S>)>,
) -> Result<InstanceId, SpecError> {
    let label = match seed.binding {
        Some(b) => format!("{}[{}]", node.name, b),
        None => node.name.clone(),
    };

    let mut roles = Vec::with_capacity(seed.roles.len());
    for role in &seed.roles {
        let mut seen = BTreeSet::new();
        for &(c, _) in &role.members {
            if !seen.insert(c) {
                return Err(SpecError::DuplicateCandidate {
                    path: label.clone(),
                    role: role.name.clone(),
                    component: c,
                });
            }
            if !universe.contains(&c) {
                return Err(SpecError::UnknownComponent {
                    path: label.clone(),
                    role: role.name.clone(),
                    component: c,
                });
            }
        }
        roles.push(RoleCandidates {
            name: role.name.clone(),
            cardinality: role.cardinality,
            candidates: role.members.iter().map(|&(c, _)| c).collect(),
            scores: role.members.iter().map(|&(_, s)| s).collect(),
        });
    }

    let abs_weight =
        parent.map_or(1.0, |p| candidates.instance(p).abs_weight) * rel_weight;
    let id = InstanceId(candidates.instances.len());
    candidates.instances.push(Instance {
        spec_name: node.name.clone(),
        binding: seed.binding,
        label,
        parent,
        kind,
        rel_weight,
        abs_weight,
        roles,
        children: Vec::new(),
    });
    if let Some(p) = parent {
        candidates.instances[p.0].children.push(id);
    }
    if !node.disjoint.is_empty() || node.predicate.is_some() {
        pending.push((id, node));
    }

    let mut child_ctx = ctx.clone();
    if let Some(b) = seed.binding {
        child_ctx.path.push(b);
    }

    let mut child_names = BTreeSet::new();
    for decl in &node.children {
        if !child_names.insert(decl.node.name.clone()) {
            return Err(SpecError::DuplicateChildName {
                path: candidates.instance(id).label.clone(),
                name: decl.node.name.clone(),
            });
        }
        if decl.weight < 0.0 {
            return Err(SpecError::NegativeWeight {
                path: candidates.instance(id).label.clone(),
                weight: decl.weight,
            });
        }
        let seeds = (decl.node.bind)(snapshot, &child_ctx);
        let mut bindings = BTreeSet::new();
        for child_seed in seeds {
            if !bindings.insert(child_seed.binding) {
                return Err(SpecError::DuplicateBinding {
                    path: format!(
                        "{}/{}",
                        candidates.instance(id).label,
                        decl.node.name
                    ),
                    binding: child_seed.binding,
                });
            }
            let weight = child_seed.weight.unwrap_or(decl.weight);
            if weight < 0.0 {
                return Err(SpecError::NegativeWeight {
                    path: candidates.instance(id).label.clone(),
                    weight,
                });
            }
            instantiate(
                &decl.node,
                child_seed,
                Some(id),
                decl.kind,
                weight,
                snapshot,
                &child_ctx,
                universe,
                candidates,
                pending,
            )?;
        }
    }

    Ok(id)
}

fn attach_constraints<S>(
    node: &SpecNode<S>,
    owner: InstanceId,
    known_specs: &BTreeSet<String>,
    candidates: &mut EnsembleCandidates,
) -> Result<(), SpecError> {
    let subtree = candidates.subtree(owner);
    for decl in &node.disjoint {
        for (spec, _) in &decl.selectors {
            if !known_specs.contains(spec) {
                return Err(SpecError::UnknownDisjointSpec {
                    path: candidates.instance(owner).label.clone(),
                    label: decl.label.clone(),
                    spec: spec.clone(),
                });
            }
        }
        let mut roles = Vec::new();
        for &inst_id in &subtree {
            let inst = candidates.instance(inst_id);
            for (spec, role_name) in &decl.selectors {
                if inst.spec_name == *spec {
                    match inst.role_index(role_name) {
                        Some(r) => roles.push(RoleRef { instance: inst_id, role: r }),
                        None => {
                            return Err(SpecError::UnknownDisjointRole {
                                path: inst.label.clone(),
                                label: decl.label.clone(),
                                spec: spec.clone(),
                                role: role_name.clone(),
                            })
                        }
                    }
                }
            }
        }
        candidates.groups.push(DisjointGroup {
            label: format!("{}.{}", candidates.instance(owner).label, decl.label),
            owner,
            roles,
        });
    }
    if let Some((label, check)) = &node.predicate {
        candidates.predicates.push(PredicateCheck {
            label: format!("{}.{}", candidates.instance(owner).label, label),
            owner,
            check: Arc::clone(check),
        });
    }
    Ok(())
}

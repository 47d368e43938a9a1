//! Hand-built candidate structures shared by the solver unit tests.

use ensemble_core::{
    Cardinality, ChildKind, ComponentId, EnsembleCandidates, Instance, InstanceId, RoleCandidates,
};

pub(crate) fn root_only() -> EnsembleCandidates {
    let mut c = EnsembleCandidates::default();
    c.instances.push(Instance {
        spec_name: "Root".into(),
        binding: None,
        label: "Root".into(),
        parent: None,
        kind: ChildKind::Mandatory,
        rel_weight: 1.0,
        abs_weight: 1.0,
        roles: vec![],
        children: vec![],
    });
    c
}

pub(crate) fn child_under_root(
    c: &mut EnsembleCandidates,
    name: &str,
    kind: ChildKind,
    roles: Vec<RoleCandidates>,
) -> usize {
    let id = c.instances.len();
    c.instances.push(Instance {
        spec_name: name.into(),
        binding: Some(id as u32),
        label: format!("{name}[{id}]"),
        parent: Some(InstanceId(0)),
        kind,
        rel_weight: 1.0,
        abs_weight: 1.0,
        roles,
        children: vec![],
    });
    c.instances[0].children.push(InstanceId(id));
    id
}

pub(crate) fn subset_role(max: usize, scored: &[(u32, f64)]) -> RoleCandidates {
    RoleCandidates {
        name: "members".into(),
        cardinality: Cardinality::SubsetWithMax(max),
        candidates: scored.iter().map(|&(c, _)| ComponentId(c)).collect(),
        scores: scored.iter().map(|&(_, s)| s).collect(),
    }
}

pub(crate) fn one_of_role(scored: &[(u32, f64)]) -> RoleCandidates {
    RoleCandidates {
        name: "member".into(),
        cardinality: Cardinality::OneOf,
        candidates: scored.iter().map(|&(c, _)| ComponentId(c)).collect(),
        scores: scored.iter().map(|&(_, s)| s).collect(),
    }
}

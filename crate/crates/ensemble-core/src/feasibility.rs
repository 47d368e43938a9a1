use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::assignment::Assignment;
use crate::candidates::{Cardinality, ChildKind, ComponentId, EnsembleCandidates, InstanceId};

/// The assignment references instances, roles or components outside the
/// candidate structure. This is a caller contract breach, reported apart
/// from ordinary feasibility violations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum MalformedAssignment {
    #[error("assignment shape does not match candidates: {0}")]
    ShapeMismatch(String),
    #[error("member {component} of {instance}/{role} is not in the candidate list")]
    UnknownMember {
        instance: InstanceId,
        role: String,
        component: ComponentId,
    },
    #[error("member list of {instance}/{role} contains duplicates")]
    DuplicateMember { instance: InstanceId, role: String },
}

/// One failed feasibility rule.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    MembersWithoutExistence {
        instance: String,
        role: String,
    },
    ChildWithoutParent {
        child: String,
        parent: String,
    },
    MandatoryChildAbsent {
        parent: String,
        child: String,
    },
    CardinalityViolated {
        instance: String,
        role: String,
        cardinality: Cardinality,
        selected: usize,
    },
    DisjointnessViolated {
        group: String,
        component: ComponentId,
    },
    PredicateFailed {
        label: String,
        instance: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MembersWithoutExistence { instance, role } => {
                write!(f, "{instance}/{role} has members but the instance does not exist")
            }
            Violation::ChildWithoutParent { child, parent } => {
                write!(f, "{child} exists but its parent {parent} does not")
            }
            Violation::MandatoryChildAbsent { parent, child } => {
                write!(f, "mandatory child {child} absent while {parent} exists")
            }
            Violation::CardinalityViolated { instance, role, cardinality, selected } => {
                match cardinality {
                    Cardinality::OneOf => write!(
                        f,
                        "{instance}/{role} requires exactly one member, got {selected}"
                    ),
                    Cardinality::SubsetWithMax(max) => write!(
                        f,
                        "{instance}/{role} allows at most {max} members, got {selected}"
                    ),
                }
            }
            Violation::DisjointnessViolated { group, component } => {
                write!(f, "{group}: component {component} selected in more than one role")
            }
            Violation::PredicateFailed { label, instance } => {
                write!(f, "constraint {label} failed at {instance}")
            }
        }
    }
}

/// Outcome of a feasibility check.
#[derive(Debug, Clone, PartialEq)]
pub struct Feasibility {
    pub violations: Vec<Violation>,
}

impl Feasibility {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every structural rule and constraint predicate of `candidates`
/// against `a`: existence implies parent existence, mandatory children exist
/// with their parents, cardinalities, members only on existing instances,
/// all-disjoint groups, and black-box predicates of existing owners.
pub fn check_feasible(
    candidates: &EnsembleCandidates,
    a: &Assignment,
) -> Result<Feasibility, MalformedAssignment> {
    validate_references(candidates, a)?;

    let mut violations = Vec::new();

    for (idx, inst) in candidates.instances.iter().enumerate() {
        let id = InstanceId(idx);
        let exists = a.exists(id);

        if let Some(parent) = inst.parent {
            if exists && !a.exists(parent) {
                violations.push(Violation::ChildWithoutParent {
                    child: inst.label.clone(),
                    parent: candidates.instance(parent).label.clone(),
                });
            }
            if inst.kind == ChildKind::Mandatory && a.exists(parent) && !exists {
                violations.push(Violation::MandatoryChildAbsent {
                    parent: candidates.instance(parent).label.clone(),
                    child: inst.label.clone(),
                });
            }
        }

        for (r, role) in inst.roles.iter().enumerate() {
            let selected = a.members(id, r).len();
            if !exists {
                if selected > 0 {
                    violations.push(Violation::MembersWithoutExistence {
                        instance: inst.label.clone(),
                        role: role.name.clone(),
                    });
                }
                continue;
            }
            let ok = match role.cardinality {
                Cardinality::OneOf => selected == 1,
                Cardinality::SubsetWithMax(max) => selected <= max,
            };
            if !ok {
                violations.push(Violation::CardinalityViolated {
                    instance: inst.label.clone(),
                    role: role.name.clone(),
                    cardinality: role.cardinality,
                    selected,
                });
            }
        }
    }

    for group in &candidates.groups {
        let mut seen: HashMap<ComponentId, usize> = HashMap::new();
        for role_ref in &group.roles {
            for &c in a.members(role_ref.instance, role_ref.role) {
                *seen.entry(c).or_insert(0) += 1;
            }
        }
        let mut dupes: Vec<ComponentId> =
            seen.into_iter().filter(|&(_, n)| n > 1).map(|(c, _)| c).collect();
        dupes.sort_unstable();
        for component in dupes {
            violations.push(Violation::DisjointnessViolated {
                group: group.label.clone(),
                component,
            });
        }
    }

    for pred in &candidates.predicates {
        if a.exists(pred.owner) && !(pred.check)(candidates, pred.owner, a) {
            violations.push(Violation::PredicateFailed {
                label: pred.label.clone(),
                instance: candidates.instance(pred.owner).label.clone(),
            });
        }
    }

    Ok(Feasibility { violations })
}

fn validate_references(
    candidates: &EnsembleCandidates,
    a: &Assignment,
) -> Result<(), MalformedAssignment> {
    if a.instance_count() != candidates.instances.len() {
        return Err(MalformedAssignment::ShapeMismatch(format!(
            "{} instances in assignment, {} in candidates",
            a.instance_count(),
            candidates.instances.len()
        )));
    }
    for (idx, inst) in candidates.instances.iter().enumerate() {
        let id = InstanceId(idx);
        if a.role_count(id) != inst.roles.len() {
            return Err(MalformedAssignment::ShapeMismatch(format!(
                "{} roles for {} in assignment, {} in candidates",
                a.role_count(id),
                inst.label,
                inst.roles.len()
            )));
        }
        for (r, role) in inst.roles.iter().enumerate() {
            let members = a.members(id, r);
            for w in members.windows(2) {
                if w[0] == w[1] {
                    return Err(MalformedAssignment::DuplicateMember {
                        instance: id,
                        role: role.name.clone(),
                    });
                }
            }
            for &c in members {
                if role.candidate_index(c).is_none() {
                    return Err(MalformedAssignment::UnknownMember {
                        instance: id,
                        role: role.name.clone(),
                        component: c,
                    });
                }
            }
        }
    }
    Ok(())
}

//! Runtime model of ensemble specifications and their resolution inputs.
//!
//! An ensemble specification is a tree of node types. Evaluating the tree
//! against a knowledge snapshot yields an [`EnsembleCandidates`] structure:
//! every potential ensemble instance (one per binding, e.g. per field under
//! threat) together with its resolved candidate member lists. An
//! [`Assignment`] picks which instances exist and which components fill
//! their member roles; feasibility and utility of assignments are defined
//! here and consumed by the solver crate.

mod assignment;
mod candidates;
mod feasibility;
mod spec;
pub mod testkit;
mod utility;

pub use assignment::Assignment;
pub use candidates::{
    Cardinality, ChildKind, ComponentId, DisjointGroup, EnsembleCandidates, Instance, InstanceId,
    PredicateCheck, RoleCandidates, RoleRef,
};
pub use feasibility::{check_feasible, Feasibility, MalformedAssignment, Violation};
pub use spec::{
    evaluate_candidates, BindCtx, ChildDecl, DisjointDecl, EnsembleSpec, InstanceSeed, RoleSeed,
    SpecError, SpecNode,
};
pub use utility::{assignment_utility, node_utility, UtilityError};

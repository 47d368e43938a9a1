//! The drone protection scenario: a root ensemble with four nested ensemble
//! types over the farm world.
//!
//! - `ApproachFieldUnderThreat` — up to the field's required drone count fly
//!   towards a threatened field that is not yet sufficiently covered.
//! - `ScareFormation` — once enough operational drones are inside the field
//!   it replaces the approach ensemble; one mandatory `SegmentAssignment`
//!   per protection segment spreads the drones over the field.
//! - `PatrolUnknown` — one drone is sent to a field whose bird status has
//!   gone stale.
//! - `ChargerAssignment` — one charger-place ensemble per free charger,
//!   assigning a drone in need of charging.
//!
//! Member candidates are always the operational drones (alive, not charging,
//! energy above the threshold); charger ensembles draw from the drones in
//! need of charging instead. Drones may serve at most one protection role
//! and at most one charger at a time (all-disjoint constraints at the root).

mod geometry;
mod resolver;
mod sampling;
mod scenario;
mod tasks;

pub use geometry::{FieldModel, ScenarioGeometry};
pub use resolver::{ExactResolver, LastResolution};
pub use sampling::random_snapshot;
pub use scenario::{
    build_scenario_candidates, dist2_utility, drone_protection_spec, needs_charging_drones,
    operational_drones, ScenarioInput, APPROACH, CHARGER, PATROL, ROOT, SCARE, SEGMENT,
};
pub use tasks::{derive_tasks, TaskDerivationError};

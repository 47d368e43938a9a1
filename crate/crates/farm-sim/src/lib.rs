//! Deterministic, seedable agent simulation of the farm world: drone
//! kinematics and energy, flock behavior, chargers, field geometry and the
//! closed-loop score (undisturbed bird time, lower is better).

mod config;
mod episode;
mod geom;
mod world;

pub use config::{ConfigError, FieldRect, WorldConfig};
pub use episode::{
    run_episode, EpisodeResult, NeverResolver, Resolver, ResolverError, Task, TaskList, TraceRow,
};
pub use geom::{Rect, Vec2};
pub use world::{
    DroneMode, DroneObs, DroneState, FieldsStatus, FlockObs, FlockState, KnowledgeSnapshot,
    SimState,
};

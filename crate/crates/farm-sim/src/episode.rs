use std::fmt::Write as _;
use std::time::Instant;

use thiserror::Error;

use crate::config::WorldConfig;
use crate::geom::Vec2;
use crate::world::SimState;

/// A responsibility handed to one drone for the coming resolution period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Task {
    Move { drone: usize, target: Vec2 },
    Charge { drone: usize, charger: usize },
}

impl Task {
    pub fn drone(&self) -> usize {
        match *self {
            Task::Move { drone, .. } | Task::Charge { drone, .. } => drone,
        }
    }
}

/// At most one task per drone per resolution.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TaskList(Vec<Task>);

impl TaskList {
    pub fn new(tasks: Vec<Task>) -> Self {
        TaskList(tasks)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Task> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<Task> {
        self.0
    }

    /// True when no drone holds more than one task.
    pub fn one_task_per_drone(&self) -> bool {
        let mut drones: Vec<usize> = self.0.iter().map(Task::drone).collect();
        drones.sort_unstable();
        drones.windows(2).all(|w| w[0] != w[1])
    }
}

#[derive(Debug, Error)]
pub enum ResolverError {
    #[error("resolution failed: {0}")]
    Failed(String),
}

/// Produces the task list for one resolution instant. Implementations carry
/// their own state (solver budgets, learned models, sample recorders).
pub trait Resolver {
    fn resolve(
        &mut self,
        snapshot: &crate::world::KnowledgeSnapshot,
        status: &crate::world::FieldsStatus,
    ) -> Result<TaskList, ResolverError>;

    fn name(&self) -> &str;

    /// Nanoseconds spent in a learned predictor during recent resolve calls,
    /// drained by the episode runner. Non-hybrid resolvers report none.
    fn drain_predictor_nanos(&mut self) -> Vec<u64> {
        Vec::new()
    }
}

/// Baseline: drones never participate in ensembles; only the autonomous
/// charging rule acts.
pub struct NeverResolver;

impl Resolver for NeverResolver {
    fn resolve(
        &mut self,
        _snapshot: &crate::world::KnowledgeSnapshot,
        _status: &crate::world::FieldsStatus,
    ) -> Result<TaskList, ResolverError> {
        Ok(TaskList::default())
    }

    fn name(&self) -> &str {
        "never"
    }
}

/// One trace line per tick: every entity's pose and the running score.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub tick: u64,
    pub drones: Vec<(f64, f64, f64, u8)>,
    pub flocks: Vec<(f64, f64)>,
    pub chargers_occupied: Vec<bool>,
    pub undisturbed_ticks: u64,
}

impl TraceRow {
    fn from_state(s: &SimState) -> Self {
        TraceRow {
            tick: s.tick,
            drones: s.drones.iter().map(|d| (d.pos.x, d.pos.y, d.energy, d.mode.ordinal())).collect(),
            flocks: s.flocks.iter().map(|f| (f.pos.x, f.pos.y)).collect(),
            chargers_occupied: s.charger_occupant.iter().map(Option::is_some).collect(),
            undisturbed_ticks: s.undisturbed_ticks,
        }
    }

    pub fn csv_header(cfg: &WorldConfig) -> String {
        let mut h = String::from("tick");
        for d in 0..cfg.drone_count {
            let _ = write!(h, ",drone{d}_x,drone{d}_y,drone{d}_energy,drone{d}_mode");
        }
        for f in 0..cfg.flock_count {
            let _ = write!(h, ",flock{f}_x,flock{f}_y");
        }
        for c in 0..cfg.chargers.len() {
            let _ = write!(h, ",charger{c}_occupied");
        }
        h.push_str(",undisturbed_ticks");
        h
    }

    pub fn to_csv(&self) -> String {
        let mut row = format!("{}", self.tick);
        for &(x, y, e, m) in &self.drones {
            let _ = write!(row, ",{x},{y},{e},{m}");
        }
        for &(x, y) in &self.flocks {
            let _ = write!(row, ",{x},{y}");
        }
        for &o in &self.chargers_occupied {
            let _ = write!(row, ",{}", u8::from(o));
        }
        let _ = write!(row, ",{}", self.undisturbed_ticks);
        row
    }
}

/// Outcome of one simulated episode.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult {
    pub seed: u64,
    pub undisturbed_minutes: f64,
    pub resolutions: u64,
    pub failures: u64,
    pub dead_task_warnings: u64,
    /// Wall time of each resolver invocation.
    pub latency_nanos: Vec<u64>,
    /// Wall time of each learned-predictor invocation (hybrid resolvers).
    pub predictor_nanos: Vec<u64>,
    pub trace: Option<Vec<TraceRow>>,
}

/// Steps the world for `minutes` of simulated time, invoking the resolver at
/// the start of every simulated minute and keeping its tasks standing until
/// the next resolution. A failed resolution keeps the previous task list.
pub fn run_episode(
    cfg: &WorldConfig,
    resolver: &mut dyn Resolver,
    seed: u64,
    minutes: u64,
    record_trace: bool,
) -> Result<EpisodeResult, crate::ConfigError> {
    let mut state = SimState::init(cfg, seed)?;
    let period = cfg.resolution_period_ticks();
    let total_ticks = minutes * cfg.ticks_per_minute();
    let mut tasks = TaskList::default();
    let mut result = EpisodeResult {
        seed,
        undisturbed_minutes: 0.0,
        resolutions: 0,
        failures: 0,
        dead_task_warnings: 0,
        latency_nanos: Vec::new(),
        predictor_nanos: Vec::new(),
        trace: record_trace.then(Vec::new),
    };

    for tick in 0..total_ticks {
        if tick % period == 0 {
            let snapshot = state.observe();
            let status = state.fields_status();
            let t0 = Instant::now();
            let outcome = resolver.resolve(&snapshot, &status);
            result.latency_nanos.push(t0.elapsed().as_nanos() as u64);
            result.predictor_nanos.extend(resolver.drain_predictor_nanos());
            result.resolutions += 1;
            match outcome {
                Ok(list) => tasks = state.sanitize_tasks(list),
                Err(_) => result.failures += 1,
            }
        }
        state.step(&tasks);
        if let Some(trace) = result.trace.as_mut() {
            trace.push(TraceRow::from_state(&state));
        }
    }

    result.undisturbed_minutes = state.undisturbed_minutes();
    result.dead_task_warnings = state.dead_task_warnings;
    Ok(result)
}

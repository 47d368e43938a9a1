use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::WorldConfig;
use crate::episode::{Task, TaskList};
use crate::geom::Vec2;

/// Drone operating mode. `Dead` is absorbing; `Charging` preempts tasks
/// until the battery is full.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DroneMode {
    Idle,
    Moving,
    Charging,
    Dead,
}

impl DroneMode {
    pub fn ordinal(self) -> u8 {
        match self {
            DroneMode::Idle => 0,
            DroneMode::Moving => 1,
            DroneMode::Charging => 2,
            DroneMode::Dead => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DroneMode::Idle => "IDLE",
            DroneMode::Moving => "MOVING",
            DroneMode::Charging => "CHARGING",
            DroneMode::Dead => "DEAD",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "IDLE" => Some(DroneMode::Idle),
            "MOVING" => Some(DroneMode::Moving),
            "CHARGING" => Some(DroneMode::Charging),
            "DEAD" => Some(DroneMode::Dead),
            _ => None,
        }
    }

    pub fn from_ordinal(v: u8) -> Option<Self> {
        match v {
            0 => Some(DroneMode::Idle),
            1 => Some(DroneMode::Moving),
            2 => Some(DroneMode::Charging),
            3 => Some(DroneMode::Dead),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DroneState {
    pub id: usize,
    pub pos: Vec2,
    pub energy: f64,
    pub mode: DroneMode,
    pub charging_in: Option<usize>,
    pub target: Option<Vec2>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlockState {
    pub id: usize,
    pub pos: Vec2,
    pub target_field: Option<usize>,
    /// While scared: remaining flee ticks.
    pub flee_left: u64,
}

/// Per-component knowledge at one resolution instant — exactly the fields a
/// resolver (or classifier) may read: charger occupancy, drone energy,
/// position and mode, flock positions.
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeSnapshot {
    pub time_ticks: u64,
    pub chargers_occupied: Vec<bool>,
    pub drones: Vec<DroneObs>,
    pub flocks: Vec<FlockObs>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroneObs {
    pub energy: f64,
    pub x: f64,
    pub y: f64,
    pub mode: DroneMode,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlockObs {
    pub x: f64,
    pub y: f64,
}

impl KnowledgeSnapshot {
    /// Length of the flattened feature vector this snapshot induces:
    /// one flag per charger, four values per drone, two per flock.
    pub fn flat_len(&self) -> usize {
        self.chargers_occupied.len() + 4 * self.drones.len() + 2 * self.flocks.len()
    }
}

/// Field predicates a resolver needs beyond the snapshot: threat is derived
/// from flock positions, unknown-ness from per-field observation timers.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldsStatus {
    pub under_threat: Vec<bool>,
    pub unknown: Vec<bool>,
}

/// Full simulation state. All randomness flows through the embedded seeded
/// generator, so equal `(config, seed)` pairs evolve identically.
#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub cfg: WorldConfig,
    pub tick: u64,
    pub drones: Vec<DroneState>,
    pub flocks: Vec<FlockState>,
    /// Occupant drone id per charger.
    pub charger_occupant: Vec<Option<usize>>,
    pub field_last_observed: Vec<u64>,
    pub undisturbed_ticks: u64,
    pub dead_task_warnings: u64,
    rng: ChaCha8Rng,
}

impl SimState {
    /// Places drones at random non-field positions with full energy and
    /// flocks at random positions with a random crop-field target.
    pub fn init(cfg: &WorldConfig, seed: u64) -> Result<Self, crate::ConfigError> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut drones = Vec::with_capacity(cfg.drone_count);
        for id in 0..cfg.drone_count {
            let pos = loop {
                let p = Vec2::new(rng.gen::<f64>() * cfg.width, rng.gen::<f64>() * cfg.height);
                if !cfg.fields.iter().any(|f| f.rect.contains(p)) {
                    break p;
                }
            };
            drones.push(DroneState {
                id,
                pos,
                energy: 1.0,
                mode: DroneMode::Idle,
                charging_in: None,
                target: None,
            });
        }
        let crop_fields: Vec<usize> =
            cfg.fields.iter().enumerate().filter(|(_, f)| f.crop).map(|(i, _)| i).collect();
        let mut flocks = Vec::with_capacity(cfg.flock_count);
        for id in 0..cfg.flock_count {
            let pos = Vec2::new(rng.gen::<f64>() * cfg.width, rng.gen::<f64>() * cfg.height);
            let target_field = if crop_fields.is_empty() {
                None
            } else {
                Some(crop_fields[rng.gen_range(0..crop_fields.len())])
            };
            flocks.push(FlockState { id, pos, target_field, flee_left: 0 });
        }
        Ok(SimState {
            tick: 0,
            drones,
            flocks,
            charger_occupant: vec![None; cfg.chargers.len()],
            field_last_observed: vec![0; cfg.fields.len()],
            undisturbed_ticks: 0,
            dead_task_warnings: 0,
            rng,
            cfg: cfg.clone(),
        })
    }

    /// Lossless projection of the state onto the knowledge schema.
    pub fn observe(&self) -> KnowledgeSnapshot {
        KnowledgeSnapshot {
            time_ticks: self.tick,
            chargers_occupied: self.charger_occupant.iter().map(|o| o.is_some()).collect(),
            drones: self
                .drones
                .iter()
                .map(|d| DroneObs { energy: d.energy, x: d.pos.x, y: d.pos.y, mode: d.mode })
                .collect(),
            flocks: self.flocks.iter().map(|f| FlockObs { x: f.pos.x, y: f.pos.y }).collect(),
        }
    }

    pub fn fields_status(&self) -> FieldsStatus {
        let unknown_ticks = self.cfg.unknown_after_minutes * self.cfg.ticks_per_minute();
        FieldsStatus {
            under_threat: self
                .cfg
                .fields
                .iter()
                .map(|f| self.flocks.iter().any(|fl| f.rect.contains(fl.pos)))
                .collect(),
            unknown: self
                .field_last_observed
                .iter()
                .map(|&last| self.tick.saturating_sub(last) >= unknown_ticks)
                .collect(),
        }
    }

    /// Validates a task list against the current state, counting (and
    /// dropping) tasks that address dead drones.
    pub fn sanitize_tasks(&mut self, tasks: TaskList) -> TaskList {
        let mut kept = Vec::new();
        for task in tasks.into_vec() {
            let drone = match task {
                Task::Move { drone, .. } | Task::Charge { drone, .. } => drone,
            };
            if self.drones.get(drone).map(|d| d.mode) == Some(DroneMode::Dead) {
                self.dead_task_warnings += 1;
            } else {
                kept.push(task);
            }
        }
        TaskList::new(kept)
    }

    /// Advances the world by one tick under the given standing task list.
    ///
    /// Update order is fixed: drones (index order: intent, movement, charger
    /// claim, energy), then flocks (scare check, movement), then scoring and
    /// observation timers.
    pub fn step(&mut self, tasks: &TaskList) {
        let dt = self.cfg.tick_seconds;
        let task_of: Vec<Option<Task>> = {
            let mut by_drone = vec![None; self.drones.len()];
            for &task in tasks.iter() {
                let id = match task {
                    Task::Move { drone, .. } | Task::Charge { drone, .. } => drone,
                };
                if id < by_drone.len() {
                    by_drone[id] = Some(task);
                }
            }
            by_drone
        };

        for i in 0..self.drones.len() {
            if self.drones[i].mode == DroneMode::Dead {
                continue;
            }

            if self.drones[i].mode == DroneMode::Charging {
                let charger = self.drones[i].charging_in.expect("charging drone has a charger");
                self.drones[i].energy = (self.drones[i].energy + self.cfg.charge_rate).min(1.0);
                if self.drones[i].energy >= 1.0 {
                    self.drones[i].energy = 1.0;
                    self.drones[i].mode = DroneMode::Idle;
                    self.drones[i].charging_in = None;
                    self.drones[i].target = None;
                    self.charger_occupant[charger] = None;
                }
                continue;
            }

            // intent: autonomous safety overrides ensemble tasks
            let mut charge_at: Option<usize> = None;
            if self.drones[i].energy < self.cfg.charging_threshold {
                let target_charger = self.nearest_charger(self.drones[i].pos, true);
                self.drones[i].target = Some(self.cfg.chargers[target_charger]);
                charge_at = Some(target_charger);
            } else {
                match task_of[i] {
                    Some(Task::Move { target, .. }) => self.drones[i].target = Some(target),
                    Some(Task::Charge { charger, .. }) => {
                        self.drones[i].target = Some(self.cfg.chargers[charger]);
                        charge_at = Some(charger);
                    }
                    None => {}
                }
            }

            // movement
            let step = self.cfg.drone_speed * dt;
            let mut moved = false;
            if let Some(target) = self.drones[i].target {
                if self.drones[i].pos != target {
                    self.drones[i].pos = self.drones[i].pos.step_towards(target, step);
                    moved = true;
                }
            }
            self.drones[i].mode = if moved { DroneMode::Moving } else { DroneMode::Idle };

            // charger claim on arrival
            if let Some(charger) = charge_at {
                let at = self.drones[i].pos.dist(self.cfg.chargers[charger]) < 1e-9;
                if at && self.charger_occupant[charger].is_none() {
                    self.charger_occupant[charger] = Some(i);
                    self.drones[i].mode = DroneMode::Charging;
                    self.drones[i].charging_in = Some(charger);
                }
            }

            // energy drain (charging handled above)
            if self.drones[i].mode != DroneMode::Charging {
                let drain = if self.drones[i].mode == DroneMode::Moving {
                    self.cfg.fly_drain
                } else {
                    self.cfg.idle_drain
                };
                self.drones[i].energy -= drain;
                if self.drones[i].energy <= 0.0 {
                    self.drones[i].energy = 0.0;
                    self.drones[i].mode = DroneMode::Dead;
                    self.drones[i].target = None;
                }
            }
        }

        // flocks: scare check against the updated drone positions
        let crop_fields: Vec<usize> = self
            .cfg
            .fields
            .iter()
            .enumerate()
            .filter(|(_, f)| f.crop)
            .map(|(i, _)| i)
            .collect();
        for i in 0..self.flocks.len() {
            let pos = self.flocks[i].pos;
            let nearest = self
                .drones
                .iter()
                .filter(|d| d.mode != DroneMode::Dead)
                .min_by(|a, b| a.pos.dist(pos).partial_cmp(&b.pos.dist(pos)).unwrap());
            if let Some(drone) = nearest {
                if drone.pos.dist(pos) <= self.cfg.scare_radius {
                    self.flocks[i].flee_left = self.cfg.flee_ticks;
                    self.flocks[i].target_field = None;
                }
            }
            if self.flocks[i].flee_left > 0 {
                let dir = match nearest {
                    Some(d) => pos.away_from(d.pos),
                    None => Vec2::new(1.0, 0.0),
                };
                let speed = self.cfg.flock_speed * dt;
                self.flocks[i].pos = Vec2::new(pos.x + dir.x * speed, pos.y + dir.y * speed)
                    .clamp_to(self.cfg.width, self.cfg.height);
                self.flocks[i].flee_left -= 1;
                if self.flocks[i].flee_left == 0 && !crop_fields.is_empty() {
                    let pick = self.rng.gen_range(0..crop_fields.len());
                    self.flocks[i].target_field = Some(crop_fields[pick]);
                }
            } else {
                match self.flocks[i].target_field {
                    Some(field) => {
                        let rect = self.cfg.fields[field].rect;
                        if !rect.contains(pos) {
                            self.flocks[i].pos =
                                pos.step_towards(rect.center(), self.cfg.flock_speed * dt);
                        }
                        // inside the target field the flock loiters in place
                    }
                    None => {
                        if !crop_fields.is_empty() {
                            let pick = self.rng.gen_range(0..crop_fields.len());
                            self.flocks[i].target_field = Some(crop_fields[pick]);
                        }
                    }
                }
            }
        }

        // scoring: each flock sitting in a crop field with no live drone in
        // scare range accrues undisturbed time
        for flock in &self.flocks {
            let in_crop = self.cfg.fields.iter().any(|f| f.crop && f.rect.contains(flock.pos));
            if in_crop {
                let disturbed = self
                    .drones
                    .iter()
                    .any(|d| d.mode != DroneMode::Dead && d.pos.dist(flock.pos) <= self.cfg.scare_radius);
                if !disturbed {
                    self.undisturbed_ticks += 1;
                }
            }
        }

        // observation timers
        for (fi, field) in self.cfg.fields.iter().enumerate() {
            let observed = self
                .drones
                .iter()
                .any(|d| d.mode != DroneMode::Dead && field.rect.contains(d.pos));
            if observed {
                self.field_last_observed[fi] = self.tick;
            }
        }

        self.tick += 1;
    }

    pub fn undisturbed_minutes(&self) -> f64 {
        self.undisturbed_ticks as f64 * self.cfg.tick_seconds / 60.0
    }

    /// Nearest charger to `pos`; prefers free ones when `prefer_free`.
    fn nearest_charger(&self, pos: Vec2, prefer_free: bool) -> usize {
        let pick = |ids: &mut dyn Iterator<Item = usize>| -> Option<usize> {
            ids.min_by(|&a, &b| {
                self.cfg.chargers[a]
                    .dist(pos)
                    .partial_cmp(&self.cfg.chargers[b].dist(pos))
                    .unwrap()
            })
        };
        if prefer_free {
            let mut free = (0..self.cfg.chargers.len())
                .filter(|&c| self.charger_occupant[c].is_none());
            if let Some(c) = pick(&mut free) {
                return c;
            }
        }
        pick(&mut (0..self.cfg.chargers.len())).expect("validated config has chargers")
    }
}

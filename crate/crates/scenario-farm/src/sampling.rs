use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use farm_sim::{DroneMode, DroneObs, FieldsStatus, FlockObs, KnowledgeSnapshot};

use crate::geometry::ScenarioGeometry;

/// A random but internally consistent resolution instant: charging drones
/// sit on distinct occupied chargers, dead drones have zero energy, threat
/// flags follow the sampled flock positions. Drone, charger and flock counts
/// come from the geometry and the passed counts.
///
/// Used by solver-oracle equivalence tests and latency measurements.
pub fn random_snapshot(
    geom: &ScenarioGeometry,
    drones: usize,
    flocks: usize,
    world: (f64, f64),
    seed: u64,
) -> (KnowledgeSnapshot, FieldsStatus) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (width, height) = world;

    let mut chargers_occupied = vec![false; geom.chargers.len()];
    let mut drone_obs = Vec::with_capacity(drones);
    for _ in 0..drones {
        let roll = rng.gen_range(0..100);
        let mode = if roll < 50 {
            DroneMode::Idle
        } else if roll < 75 {
            DroneMode::Moving
        } else if roll < 88 {
            DroneMode::Charging
        } else {
            DroneMode::Dead
        };
        match mode {
            DroneMode::Charging => {
                let free: Vec<usize> =
                    (0..geom.chargers.len()).filter(|&c| !chargers_occupied[c]).collect();
                if let Some(&c) = free.first() {
                    chargers_occupied[c] = true;
                    drone_obs.push(DroneObs {
                        energy: rng.gen_range(0.05..0.95),
                        x: geom.chargers[c].x,
                        y: geom.chargers[c].y,
                        mode,
                    });
                } else {
                    drone_obs.push(DroneObs {
                        energy: rng.gen_range(0.05..1.0),
                        x: rng.gen::<f64>() * width,
                        y: rng.gen::<f64>() * height,
                        mode: DroneMode::Idle,
                    });
                }
            }
            DroneMode::Dead => {
                drone_obs.push(DroneObs {
                    energy: 0.0,
                    x: rng.gen::<f64>() * width,
                    y: rng.gen::<f64>() * height,
                    mode,
                });
            }
            _ => {
                drone_obs.push(DroneObs {
                    energy: rng.gen::<f64>(),
                    x: rng.gen::<f64>() * width,
                    y: rng.gen::<f64>() * height,
                    mode,
                });
            }
        }
    }

    let mut flock_obs = Vec::with_capacity(flocks);
    for _ in 0..flocks {
        if rng.gen_bool(0.5) && !geom.fields.is_empty() {
            let f = &geom.fields[rng.gen_range(0..geom.fields.len())].area;
            flock_obs.push(FlockObs {
                x: f.x + rng.gen::<f64>() * f.w,
                y: f.y + rng.gen::<f64>() * f.h,
            });
        } else {
            flock_obs.push(FlockObs {
                x: rng.gen::<f64>() * width,
                y: rng.gen::<f64>() * height,
            });
        }
    }

    let under_threat = geom
        .fields
        .iter()
        .map(|f| flock_obs.iter().any(|fl| f.area.contains(farm_sim::Vec2::new(fl.x, fl.y))))
        .collect();
    let unknown = geom.fields.iter().map(|_| rng.gen_bool(0.15)).collect();

    (
        KnowledgeSnapshot {
            time_ticks: rng.gen_range(0..36_000),
            chargers_occupied,
            drones: drone_obs,
            flocks: flock_obs,
        },
        FieldsStatus { under_threat, unknown },
    )
}

use csp_resolver::ResolutionResult;
use ensemble_core::EnsembleCandidates;
use farm_sim::KnowledgeSnapshot;
use scenario_farm::APPROACH;
use thiserror::Error;

use crate::{Sample, Schema};

#[derive(Debug, Error, PartialEq)]
pub enum RecordError {
    #[error("snapshot shape does not match the schema")]
    SchemaMismatch,
    #[error("resolution was not proven optimal; refusing to label from it")]
    NotOptimal,
    #[error("approach membership {drone} outside the schema's drone range")]
    DroneOutOfRange { drone: u32 },
    #[error("approach binding {field} outside the schema's field range")]
    FieldOutOfRange { field: u32 },
}

/// Flattens a snapshot into the schema's fixed feature order: charger
/// occupancy flags, per-drone (energy, x, y, mode ordinal), per-flock (x, y).
pub fn snapshot_features(schema: &Schema, snap: &KnowledgeSnapshot) -> Result<Vec<f64>, RecordError> {
    if snap.chargers_occupied.len() != schema.chargers
        || snap.drones.len() != schema.drones
        || snap.flocks.len() != schema.flocks
    {
        return Err(RecordError::SchemaMismatch);
    }
    let mut v = Vec::with_capacity(schema.feature_count());
    for &occ in &snap.chargers_occupied {
        v.push(f64::from(u8::from(occ)));
    }
    for d in &snap.drones {
        v.push(d.energy);
        v.push(d.x);
        v.push(d.y);
        v.push(f64::from(d.mode.ordinal()));
    }
    for f in &snap.flocks {
        v.push(f.x);
        v.push(f.y);
    }
    Ok(v)
}

/// Builds one labeled sample from an optimal resolution: label k is the
/// field of the approach ensemble containing drone k, or NONE. Non-optimal
/// results are rejected to keep label noise out of the corpus.
pub fn record_sample(
    schema: &Schema,
    snap: &KnowledgeSnapshot,
    candidates: &EnsembleCandidates,
    result: &ResolutionResult,
) -> Result<Sample, RecordError> {
    if !result.stats.optimal {
        return Err(RecordError::NotOptimal);
    }
    let features = snapshot_features(schema, snap)?;
    let mut labels = vec![0u8; schema.label_count()];
    for (idx, inst) in candidates.instances.iter().enumerate() {
        if inst.spec_name != APPROACH {
            continue;
        }
        let id = ensemble_core::InstanceId(idx);
        if !result.best.exists(id) {
            continue;
        }
        let field = inst.binding.expect("approach instances are bound per field");
        if field as usize >= schema.fields {
            return Err(RecordError::FieldOutOfRange { field });
        }
        let role = inst.role_index("drones").expect("approach has a drones role");
        for &member in result.best.members(id, role) {
            let drone = member.0;
            if drone as usize >= schema.drones {
                return Err(RecordError::DroneOutOfRange { drone });
            }
            labels[drone as usize] = field as u8 + 1;
        }
    }
    Ok(Sample { features, labels })
}

#[cfg(test)]
mod tests {
    use super::*;
    use csp_resolver::{encode, solve, SolveStats};
    use ensemble_core::Assignment;
    use farm_sim::{FieldsStatus, FlockObs, WorldConfig};
    use scenario_farm::{
        build_scenario_candidates, drone_protection_spec, random_snapshot, ScenarioGeometry,
        ScenarioInput,
    };
    use std::sync::Arc;
    use std::time::Duration;

    fn solved_fixture(seed: u64) -> (Schema, ScenarioInput, EnsembleCandidates, ResolutionResult) {
        let geom = Arc::new(ScenarioGeometry::from_config(&WorldConfig::default()));
        let spec = drone_protection_spec(Arc::clone(&geom));
        let (snapshot, status) = random_snapshot(&geom, 4, 5, (400.0, 300.0), seed);
        let input = ScenarioInput { snapshot, status };
        let c = build_scenario_candidates(&spec, &input).unwrap();
        let p = encode(&c);
        let r = solve(&p, Duration::from_secs(30)).unwrap();
        (Schema::default_farm(), input, c, r)
    }

    #[test]
    fn no_approach_instances_label_all_none() {
        let geom = Arc::new(ScenarioGeometry::from_config(&WorldConfig::default()));
        let spec = drone_protection_spec(Arc::clone(&geom));
        let (mut snapshot, mut status) = random_snapshot(&geom, 4, 5, (400.0, 300.0), 3);
        // no threats anywhere
        snapshot.flocks = vec![FlockObs { x: 1.0, y: 1.0 }; 5];
        status = FieldsStatus {
            under_threat: vec![false; status.under_threat.len()],
            unknown: status.unknown,
        };
        let input = ScenarioInput { snapshot, status };
        let c = build_scenario_candidates(&spec, &input).unwrap();
        let p = encode(&c);
        let r = solve(&p, Duration::from_secs(30)).unwrap();
        let s = record_sample(&Schema::default_farm(), &input.snapshot, &c, &r).unwrap();
        assert_eq!(s.labels, vec![0, 0, 0, 0]);
    }

    #[test]
    fn approach_membership_sets_field_label() {
        // hand-build the assignment so the expectation is independent of the
        // solver: drone 2 into the approach for field 3
        let geom = Arc::new(ScenarioGeometry::from_config(&WorldConfig::default()));
        let spec = drone_protection_spec(Arc::clone(&geom));
        let (mut snapshot, mut status) = random_snapshot(&geom, 4, 5, (400.0, 300.0), 5);
        for d in snapshot.drones.iter_mut() {
            d.mode = farm_sim::DroneMode::Idle;
            d.energy = 0.9;
            d.x = 5.0;
            d.y = 5.0;
        }
        let f3 = geom.fields[3].area;
        snapshot.flocks = vec![FlockObs { x: f3.x + 1.0, y: f3.y + 1.0 }; 5];
        status.under_threat = geom
            .fields
            .iter()
            .map(|f| snapshot.flocks.iter().any(|fl| f.area.contains(farm_sim::Vec2::new(fl.x, fl.y))))
            .collect();
        status.unknown = vec![false; 5];
        let input = ScenarioInput { snapshot, status };
        let c = build_scenario_candidates(&spec, &input).unwrap();
        let approach = c
            .instances
            .iter()
            .position(|i| i.spec_name == APPROACH && i.binding == Some(3))
            .expect("field 3 must have an approach candidate");
        let mut a = Assignment::empty(&c);
        a.set_exists(c.root(), true);
        a.set_exists(ensemble_core::InstanceId(approach), true);
        a.add_member(ensemble_core::InstanceId(approach), 0, ensemble_core::ComponentId(2));
        let result = ResolutionResult {
            best: a,
            utility: 0.0,
            stats: SolveStats { nodes: 0, wall: Duration::ZERO, optimal: true },
        };
        let s = record_sample(&Schema::default_farm(), &input.snapshot, &c, &result).unwrap();
        assert_eq!(s.labels, vec![0, 0, 4, 0]); // field 3 -> class F4
    }

    #[test]
    fn two_drones_same_field_share_the_label() {
        let geom = Arc::new(ScenarioGeometry::from_config(&WorldConfig::default()));
        let spec = drone_protection_spec(Arc::clone(&geom));
        let (mut snapshot, mut status) = random_snapshot(&geom, 4, 5, (400.0, 300.0), 7);
        for d in snapshot.drones.iter_mut() {
            d.mode = farm_sim::DroneMode::Idle;
            d.energy = 0.9;
            d.x = 250.0;
            d.y = 150.0;
        }
        let f2 = geom.fields[2].area; // requires two drones
        snapshot.flocks = vec![FlockObs { x: f2.x + 1.0, y: f2.y + 1.0 }; 5];
        status.under_threat =
            geom.fields.iter().enumerate().map(|(i, _)| i == 2).collect();
        status.unknown = vec![false; 5];
        let input = ScenarioInput { snapshot, status };
        let c = build_scenario_candidates(&spec, &input).unwrap();
        let approach = c
            .instances
            .iter()
            .position(|i| i.spec_name == APPROACH && i.binding == Some(2))
            .unwrap();
        let id = ensemble_core::InstanceId(approach);
        let mut a = Assignment::empty(&c);
        a.set_exists(c.root(), true);
        a.set_exists(id, true);
        a.add_member(id, 0, ensemble_core::ComponentId(0));
        a.add_member(id, 0, ensemble_core::ComponentId(1));
        let result = ResolutionResult {
            best: a,
            utility: 0.0,
            stats: SolveStats { nodes: 0, wall: Duration::ZERO, optimal: true },
        };
        let s = record_sample(&Schema::default_farm(), &input.snapshot, &c, &result).unwrap();
        assert_eq!(s.labels, vec![3, 3, 0, 0]);
    }

    #[test]
    fn non_optimal_results_are_rejected() {
        let (schema, input, c, mut r) = solved_fixture(11);
        r.stats.optimal = false;
        assert_eq!(
            record_sample(&schema, &input.snapshot, &c, &r),
            Err(RecordError::NotOptimal)
        );
    }

    #[test]
    fn features_follow_the_pinned_order() {
        let (schema, input, _, _) = solved_fixture(13);
        let v = snapshot_features(&schema, &input.snapshot).unwrap();
        assert_eq!(v.len(), 29);
        assert_eq!(v[0], f64::from(u8::from(input.snapshot.chargers_occupied[0])));
        assert_eq!(v[3], input.snapshot.drones[0].energy);
        assert_eq!(v[4], input.snapshot.drones[0].x);
        assert_eq!(v[5], input.snapshot.drones[0].y);
        assert_eq!(v[6], f64::from(input.snapshot.drones[0].mode.ordinal()));
        assert_eq!(v[19], input.snapshot.flocks[0].x);
    }
}

use std::collections::BTreeSet;
use std::sync::Arc;

use ensemble_core::{
    evaluate_candidates, BindCtx, ChildKind, ComponentId, EnsembleCandidates, EnsembleSpec,
    InstanceSeed, RoleSeed, SpecError, SpecNode,
};
use farm_sim::{DroneMode, FieldsStatus, KnowledgeSnapshot, Vec2};

use crate::geometry::ScenarioGeometry;

pub const ROOT: &str = "DroneProtectionSystem";
pub const APPROACH: &str = "ApproachFieldUnderThreat";
pub const SCARE: &str = "ScareFormation";
pub const SEGMENT: &str = "SegmentAssignment";
pub const PATROL: &str = "PatrolUnknown";
pub const CHARGER: &str = "ChargerAssignment";

/// Everything a resolution instant sees: the component knowledge plus the
/// per-field status flags maintained by the simulation.
#[derive(Debug, Clone)]
pub struct ScenarioInput {
    pub snapshot: KnowledgeSnapshot,
    pub status: FieldsStatus,
}

/// Distance-based utility: 10 at zero distance, falling linearly to 0 at the
/// world diagonal.
pub fn dist2_utility(p: Vec2, c: Vec2, diagonal: f64) -> f64 {
    10.0 * (1.0 - p.dist(c) / diagonal).max(0.0)
}

/// Drones that may take ensemble duties: alive, not charging, energy above
/// the charging threshold.
pub fn operational_drones(snapshot: &KnowledgeSnapshot, threshold: f64) -> Vec<usize> {
    snapshot
        .drones
        .iter()
        .enumerate()
        .filter(|(_, d)| {
            d.mode != DroneMode::Dead && d.mode != DroneMode::Charging && d.energy > threshold
        })
        .map(|(i, _)| i)
        .collect()
}

/// Drones that should be sent to a charger: alive, not already charging,
/// energy below the threshold.
pub fn needs_charging_drones(snapshot: &KnowledgeSnapshot, threshold: f64) -> Vec<usize> {
    snapshot
        .drones
        .iter()
        .enumerate()
        .filter(|(_, d)| {
            d.mode != DroneMode::Dead && d.mode != DroneMode::Charging && d.energy < threshold
        })
        .map(|(i, _)| i)
        .collect()
}

fn drone_pos(snapshot: &KnowledgeSnapshot, d: usize) -> Vec2 {
    Vec2::new(snapshot.drones[d].x, snapshot.drones[d].y)
}

/// Operational drones currently inside a field's area.
fn in_area_operational(input: &ScenarioInput, geom: &ScenarioGeometry, field: usize) -> usize {
    operational_drones(&input.snapshot, geom.charging_threshold)
        .into_iter()
        .filter(|&d| geom.fields[field].area.contains(drone_pos(&input.snapshot, d)))
        .count()
}

/// Builds the drone protection specification over the given geometry. The
/// specification is reusable across snapshots; evaluation binds it to one
/// resolution instant.
pub fn drone_protection_spec(geom: Arc<ScenarioGeometry>) -> EnsembleSpec<ScenarioInput> {
    let g = Arc::clone(&geom);
    let patrol = SpecNode::new(PATROL, move |input: &ScenarioInput, _: &BindCtx| {
        let mut seeds = Vec::new();
        for field in &g.fields {
            if !input.status.unknown[field.index] {
                continue;
            }
            let members = operational_drones(&input.snapshot, g.charging_threshold)
                .into_iter()
                .map(|d| {
                    let score =
                        dist2_utility(drone_pos(&input.snapshot, d), field.center, g.world_diagonal);
                    (ComponentId(d as u32), score)
                })
                .collect();
            seeds.push(InstanceSeed::new(
                Some(field.index as u32),
                vec![RoleSeed::one_of("drone", members)],
            ));
        }
        seeds
    });

    let g = Arc::clone(&geom);
    let charger = SpecNode::new(CHARGER, move |input: &ScenarioInput, _: &BindCtx| {
        let mut seeds = Vec::new();
        for (c, &pos) in g.chargers.iter().enumerate() {
            if input.snapshot.chargers_occupied[c] {
                continue;
            }
            let members = needs_charging_drones(&input.snapshot, g.charging_threshold)
                .into_iter()
                .map(|d| {
                    let need = 1.0 - input.snapshot.drones[d].energy;
                    let score = need * 10.0
                        + 0.1 * dist2_utility(drone_pos(&input.snapshot, d), pos, g.world_diagonal);
                    (ComponentId(d as u32), score)
                })
                .collect();
            seeds.push(InstanceSeed::new(Some(c as u32), vec![RoleSeed::one_of("drone", members)]));
        }
        seeds
    });

    let g = Arc::clone(&geom);
    let approach = SpecNode::new(APPROACH, move |input: &ScenarioInput, _: &BindCtx| {
        let mut seeds = Vec::new();
        for field in &g.fields {
            let threatened = input.status.under_threat[field.index];
            if !threatened || in_area_operational(input, &g, field.index) >= field.required_drones
            {
                continue;
            }
            let members = operational_drones(&input.snapshot, g.charging_threshold)
                .into_iter()
                .map(|d| {
                    let pos = drone_pos(&input.snapshot, d);
                    let score = if field.area.contains(pos) {
                        10.0
                    } else {
                        dist2_utility(pos, field.center, g.world_diagonal)
                    };
                    (ComponentId(d as u32), score)
                })
                .collect();
            seeds.push(InstanceSeed::new(
                Some(field.index as u32),
                vec![RoleSeed::subset_max("drones", field.required_drones, members)],
            ));
        }
        seeds
    });

    let g = Arc::clone(&geom);
    let segment = SpecNode::new(SEGMENT, move |input: &ScenarioInput, ctx: &BindCtx| {
        let field_idx = ctx.parent_binding().expect("segment under a scare formation") as usize;
        let field = &g.fields[field_idx];
        let weight = 1.0 / field.required_drones as f64;
        field
            .segment_centers
            .iter()
            .enumerate()
            .map(|(k, &center)| {
                let members = operational_drones(&input.snapshot, g.charging_threshold)
                    .into_iter()
                    .map(|d| {
                        let score =
                            dist2_utility(drone_pos(&input.snapshot, d), center, g.world_diagonal);
                        (ComponentId(d as u32), score)
                    })
                    .collect();
                InstanceSeed::new(Some(k as u32), vec![RoleSeed::one_of("drone", members)])
                    .with_weight(weight)
            })
            .collect()
    });

    let g = Arc::clone(&geom);
    let scare = SpecNode::new(SCARE, move |input: &ScenarioInput, _: &BindCtx| {
        let mut seeds = Vec::new();
        for field in &g.fields {
            let threatened = input.status.under_threat[field.index];
            if threatened && in_area_operational(input, &g, field.index) >= field.required_drones
            {
                seeds.push(InstanceSeed::new(Some(field.index as u32), vec![]));
            }
        }
        seeds
    })
    .child(ChildKind::Mandatory, 1.0, segment)
    .all_disjoint("allDisjoint", &[(SEGMENT, "drone")]);

    let root = SpecNode::singleton(ROOT)
        .child(ChildKind::Optional, 0.25, patrol)
        .child(ChildKind::Optional, 1.0, charger)
        .child(ChildKind::Optional, 1.0, approach)
        .child(ChildKind::Optional, 1.0, scare)
        .all_disjoint(
            "allDisjoint",
            &[(PATROL, "drone"), (APPROACH, "drones"), (SEGMENT, "drone")],
        )
        .all_disjoint("chargersAllDisjoint", &[(CHARGER, "drone")]);

    EnsembleSpec::new(root, |input: &ScenarioInput| {
        (0..input.snapshot.drones.len() as u32).map(ComponentId).collect::<BTreeSet<_>>()
    })
}

/// Evaluates the scenario specification for one resolution instant.
pub fn build_scenario_candidates(
    spec: &EnsembleSpec<ScenarioInput>,
    input: &ScenarioInput,
) -> Result<EnsembleCandidates, SpecError> {
    evaluate_candidates(spec, input)
}

use ensemble_core::{Assignment, EnsembleCandidates, InstanceId};
use farm_sim::{KnowledgeSnapshot, Task, TaskList, Vec2};
use thiserror::Error;

use crate::geometry::ScenarioGeometry;
use crate::scenario::{APPROACH, CHARGER, PATROL, SEGMENT};

#[derive(Debug, Error)]
pub enum TaskDerivationError {
    #[error("drone {drone} received more than one task")]
    DuplicateTask { drone: usize },
    #[error("instance {label} misses its binding")]
    MissingBinding { label: String },
}

/// Turns a feasible assignment into drone tasks.
///
/// Approach members move towards the centroid of the flocks inside the field
/// (or the field center when the field is clear), segment members to their
/// segment center, patrol members to the unknown field's center, charger
/// members get a charge task.
pub fn derive_tasks(
    candidates: &EnsembleCandidates,
    assignment: &Assignment,
    snapshot: &KnowledgeSnapshot,
    geom: &ScenarioGeometry,
) -> Result<TaskList, TaskDerivationError> {
    let mut tasks: Vec<Task> = Vec::new();

    for (idx, inst) in candidates.instances.iter().enumerate() {
        let id = InstanceId(idx);
        if !assignment.exists(id) {
            continue;
        }
        let binding = || {
            inst.binding.map(|b| b as usize).ok_or(TaskDerivationError::MissingBinding {
                label: inst.label.clone(),
            })
        };
        match inst.spec_name.as_str() {
            APPROACH => {
                let field = &geom.fields[binding()?];
                let in_field: Vec<Vec2> = snapshot
                    .flocks
                    .iter()
                    .map(|f| Vec2::new(f.x, f.y))
                    .filter(|&p| field.area.contains(p))
                    .collect();
                let target = if in_field.is_empty() {
                    field.center
                } else {
                    let n = in_field.len() as f64;
                    Vec2::new(
                        in_field.iter().map(|p| p.x).sum::<f64>() / n,
                        in_field.iter().map(|p| p.y).sum::<f64>() / n,
                    )
                };
                let role = inst.role_index("drones").expect("approach has a drones role");
                for &c in assignment.members(id, role) {
                    tasks.push(Task::Move { drone: c.0 as usize, target });
                }
            }
            SEGMENT => {
                let parent = inst.parent.expect("segment has a scare parent");
                let field_idx = candidates
                    .instance(parent)
                    .binding
                    .ok_or(TaskDerivationError::MissingBinding {
                        label: candidates.instance(parent).label.clone(),
                    })? as usize;
                let segment = binding()?;
                let target = geom.fields[field_idx].segment_centers[segment];
                let role = inst.role_index("drone").expect("segment has a drone role");
                for &c in assignment.members(id, role) {
                    tasks.push(Task::Move { drone: c.0 as usize, target });
                }
            }
            PATROL => {
                let field = &geom.fields[binding()?];
                let role = inst.role_index("drone").expect("patrol has a drone role");
                for &c in assignment.members(id, role) {
                    tasks.push(Task::Move { drone: c.0 as usize, target: field.center });
                }
            }
            CHARGER => {
                let charger = binding()?;
                let role = inst.role_index("drone").expect("charger has a drone role");
                for &c in assignment.members(id, role) {
                    tasks.push(Task::Charge { drone: c.0 as usize, charger });
                }
            }
            _ => {}
        }
    }

    let list = TaskList::new(tasks);
    if !list.one_task_per_drone() {
        let mut drones: Vec<usize> = list.iter().map(Task::drone).collect();
        drones.sort_unstable();
        let dup = drones.windows(2).find(|w| w[0] == w[1]).map(|w| w[0]).unwrap_or(0);
        return Err(TaskDerivationError::DuplicateTask { drone: dup });
    }
    Ok(list)
}

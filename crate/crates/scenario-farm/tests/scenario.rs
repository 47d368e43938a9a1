use std::sync::Arc;
use std::time::Duration;

use csp_resolver::{brute_force_solve, encode, solve};
use ensemble_core::{
    check_feasible, evaluate_candidates, node_utility, Assignment, ComponentId, InstanceId,
};
use farm_sim::{
    run_episode, DroneMode, DroneObs, FieldsStatus, FlockObs, KnowledgeSnapshot, Resolver, Task,
    Vec2, WorldConfig,
};
use scenario_farm::{
    build_scenario_candidates, derive_tasks, dist2_utility, drone_protection_spec,
    random_snapshot, ExactResolver, ScenarioGeometry, ScenarioInput, APPROACH, CHARGER, PATROL,
    SCARE, SEGMENT,
};

fn geometry() -> Arc<ScenarioGeometry> {
    Arc::new(ScenarioGeometry::from_config(&WorldConfig::default()))
}

fn idle_drone(x: f64, y: f64) -> DroneObs {
    DroneObs { energy: 0.9, x, y, mode: DroneMode::Idle }
}

fn quiet_input(geom: &ScenarioGeometry) -> ScenarioInput {
    ScenarioInput {
        snapshot: KnowledgeSnapshot {
            time_ticks: 0,
            chargers_occupied: vec![false; geom.chargers.len()],
            drones: vec![
                idle_drone(10.0, 10.0),
                idle_drone(390.0, 10.0),
                idle_drone(10.0, 290.0),
                idle_drone(390.0, 290.0),
            ],
            flocks: vec![],
        },
        status: FieldsStatus {
            under_threat: vec![false; geom.fields.len()],
            unknown: vec![false; geom.fields.len()],
        },
    }
}

#[test]
fn dist2_utility_matches_the_decided_formula() {
    let diag = 500.0;
    let c = Vec2::new(100.0, 100.0);
    assert_eq!(dist2_utility(c, c, diag), 10.0);
    assert_eq!(dist2_utility(Vec2::new(100.0 + diag, 100.0), c, diag), 0.0);
    assert_eq!(dist2_utility(Vec2::new(100.0 + diag / 2.0, 100.0), c, diag), 5.0);
}

#[test]
fn quiet_world_yields_root_only() {
    // no threats, no unknown fields, no free chargers
    let geom = geometry();
    let spec = drone_protection_spec(Arc::clone(&geom));
    let mut input = quiet_input(&geom);
    input.snapshot.chargers_occupied = vec![true; geom.chargers.len()];
    let c = build_scenario_candidates(&spec, &input).unwrap();
    assert_eq!(c.len(), 1);
}

#[test]
fn free_chargers_bind_even_without_needy_drones() {
    let geom = geometry();
    let spec = drone_protection_spec(Arc::clone(&geom));
    let c = build_scenario_candidates(&spec, &quiet_input(&geom)).unwrap();
    // one candidate instance per free charger, each with an empty list the
    // solver can never instantiate
    assert_eq!(c.instances.iter().filter(|i| i.spec_name == CHARGER).count(), 3);
}

#[test]
fn charging_and_dead_drones_are_not_candidates() {
    let geom = geometry();
    let spec = drone_protection_spec(Arc::clone(&geom));
    let mut input = quiet_input(&geom);
    // two drones charging on chargers 0 and 1, two dead
    input.snapshot.chargers_occupied = vec![true, true, false];
    input.snapshot.drones = vec![
        DroneObs { energy: 0.3, x: geom.chargers[0].x, y: geom.chargers[0].y, mode: DroneMode::Charging },
        DroneObs { energy: 0.2, x: geom.chargers[1].x, y: geom.chargers[1].y, mode: DroneMode::Charging },
        DroneObs { energy: 0.0, x: 5.0, y: 5.0, mode: DroneMode::Dead },
        DroneObs { energy: 0.0, x: 6.0, y: 6.0, mode: DroneMode::Dead },
    ];
    // a threatened field and an unknown field to force bindings
    input.status.under_threat[0] = true;
    input.snapshot.flocks = vec![FlockObs { x: 40.0, y: 50.0 }];
    input.status.unknown[1] = true;
    let c = build_scenario_candidates(&spec, &input).unwrap();
    // bindings exist (approach for field 0, patrol for field 1, one free
    // charger) but every candidate list is empty
    assert!(c.len() > 1);
    for inst in &c.instances {
        for role in &inst.roles {
            assert!(role.candidates.is_empty(), "{}/{} not empty", inst.label, role.name);
        }
    }
}

#[test]
fn threatened_uncovered_field_gets_approach_not_scare() {
    let geom = geometry();
    let spec = drone_protection_spec(Arc::clone(&geom));
    let mut input = quiet_input(&geom);
    // field 2 requires two drones; a flock is inside, no drone is
    input.status.under_threat[2] = true;
    let f2 = geom.fields[2].area;
    input.snapshot.flocks = vec![FlockObs { x: f2.x + 10.0, y: f2.y + 10.0 }];
    let c = build_scenario_candidates(&spec, &input).unwrap();
    let approaches: Vec<_> =
        c.instances.iter().filter(|i| i.spec_name == APPROACH).collect();
    assert_eq!(approaches.len(), 1);
    assert_eq!(approaches[0].binding, Some(2));
    assert_eq!(approaches[0].roles[0].candidates.len(), 4);
    assert!(c.instances.iter().all(|i| i.spec_name != SCARE));
}

#[test]
fn covered_threatened_field_gets_scare_with_mandatory_segments() {
    let geom = geometry();
    let spec = drone_protection_spec(Arc::clone(&geom));
    let mut input = quiet_input(&geom);
    let f2 = geom.fields[2].area;
    input.status.under_threat[2] = true;
    input.snapshot.flocks = vec![FlockObs { x: f2.x + 10.0, y: f2.y + 10.0 }];
    // two operational drones inside field 2 (required count is 2)
    input.snapshot.drones[0] = idle_drone(f2.x + 5.0, f2.y + 5.0);
    input.snapshot.drones[1] = idle_drone(f2.x + 50.0, f2.y + 40.0);
    let c = build_scenario_candidates(&spec, &input).unwrap();
    let scares: Vec<_> = c.instances.iter().filter(|i| i.spec_name == SCARE).collect();
    assert_eq!(scares.len(), 1);
    assert_eq!(scares[0].children.len(), 2);
    for &child in &scares[0].children {
        let seg = c.instance(child);
        assert_eq!(seg.spec_name, SEGMENT);
        assert_eq!(seg.kind, ensemble_core::ChildKind::Mandatory);
        assert_eq!(seg.rel_weight, 0.5);
    }
    assert!(c.instances.iter().all(|i| i.spec_name != APPROACH));
}

#[test]
fn free_chargers_bind_per_charger() {
    let geom = geometry();
    let spec = drone_protection_spec(Arc::clone(&geom));
    let mut input = quiet_input(&geom);
    input.snapshot.drones[0].energy = 0.2; // needs charging
    input.snapshot.drones[1].energy = 0.1;
    let c = build_scenario_candidates(&spec, &input).unwrap();
    let chargers: Vec<_> = c.instances.iter().filter(|i| i.spec_name == CHARGER).collect();
    assert_eq!(chargers.len(), 3);
    for inst in &chargers {
        assert_eq!(inst.roles[0].candidates.len(), 2);
    }
}

#[test]
fn empty_assignment_derives_no_tasks() {
    let geom = geometry();
    let spec = drone_protection_spec(Arc::clone(&geom));
    let input = quiet_input(&geom);
    let c = build_scenario_candidates(&spec, &input).unwrap();
    let mut a = Assignment::empty(&c);
    a.set_exists(c.root(), true);
    let tasks = derive_tasks(&c, &a, &input.snapshot, &geom).unwrap();
    assert!(tasks.is_empty());
}

#[test]
fn charger_membership_becomes_charge_task() {
    let geom = geometry();
    let spec = drone_protection_spec(Arc::clone(&geom));
    let mut input = quiet_input(&geom);
    input.snapshot.drones[2].energy = 0.15;
    let c = build_scenario_candidates(&spec, &input).unwrap();
    let charger1 = c
        .instances
        .iter()
        .position(|i| i.spec_name == CHARGER && i.binding == Some(1))
        .unwrap();
    let mut a = Assignment::empty(&c);
    a.set_exists(c.root(), true);
    a.set_exists(InstanceId(charger1), true);
    a.add_member(InstanceId(charger1), 0, ComponentId(2));
    let tasks = derive_tasks(&c, &a, &input.snapshot, &geom).unwrap();
    assert_eq!(tasks.iter().collect::<Vec<_>>(), vec![&Task::Charge { drone: 2, charger: 1 }]);
}

#[test]
fn segment_membership_moves_to_segment_center() {
    let geom = geometry();
    let spec = drone_protection_spec(Arc::clone(&geom));
    let mut input = quiet_input(&geom);
    let f2 = geom.fields[2].area;
    input.status.under_threat[2] = true;
    input.snapshot.flocks = vec![FlockObs { x: f2.x + 10.0, y: f2.y + 10.0 }];
    input.snapshot.drones[0] = idle_drone(f2.x + 5.0, f2.y + 5.0);
    input.snapshot.drones[1] = idle_drone(f2.x + 50.0, f2.y + 40.0);
    let c = build_scenario_candidates(&spec, &input).unwrap();
    let scare = c.instances.iter().position(|i| i.spec_name == SCARE).unwrap();
    let segments = c.instance(InstanceId(scare)).children.clone();
    let mut a = Assignment::empty(&c);
    a.set_exists(c.root(), true);
    a.set_exists(InstanceId(scare), true);
    a.set_exists(segments[0], true);
    a.set_exists(segments[1], true);
    a.add_member(segments[0], 0, ComponentId(0));
    a.add_member(segments[1], 0, ComponentId(1));
    let tasks = derive_tasks(&c, &a, &input.snapshot, &geom).unwrap();
    let targets: Vec<Vec2> = tasks
        .iter()
        .map(|t| match t {
            Task::Move { target, .. } => *target,
            other => panic!("unexpected task {other:?}"),
        })
        .collect();
    assert!(targets.contains(&geom.fields[2].segment_centers[0]));
    assert!(targets.contains(&geom.fields[2].segment_centers[1]));
}

#[test]
fn approach_members_move_towards_flock_centroid() {
    let geom = geometry();
    let spec = drone_protection_spec(Arc::clone(&geom));
    let mut input = quiet_input(&geom);
    let f0 = geom.fields[0].area;
    input.status.under_threat[0] = true;
    input.snapshot.flocks = vec![
        FlockObs { x: f0.x + 10.0, y: f0.y + 10.0 },
        FlockObs { x: f0.x + 30.0, y: f0.y + 20.0 },
    ];
    let c = build_scenario_candidates(&spec, &input).unwrap();
    let approach = c.instances.iter().position(|i| i.spec_name == APPROACH).unwrap();
    let mut a = Assignment::empty(&c);
    a.set_exists(c.root(), true);
    a.set_exists(InstanceId(approach), true);
    a.add_member(InstanceId(approach), 0, ComponentId(0));
    let tasks = derive_tasks(&c, &a, &input.snapshot, &geom).unwrap();
    match tasks.iter().next().unwrap() {
        Task::Move { drone: 0, target } => {
            assert_eq!(*target, Vec2::new(f0.x + 20.0, f0.y + 15.0));
        }
        other => panic!("unexpected task {other:?}"),
    }
}

#[test]
fn scare_utility_is_mean_of_segment_utilities() {
    let geom = geometry();
    let spec = drone_protection_spec(Arc::clone(&geom));
    let mut input = quiet_input(&geom);
    // field 3 requires three drones; put three operational drones inside
    let f3 = geom.fields[3].area;
    input.status.under_threat[3] = true;
    input.snapshot.flocks = vec![FlockObs { x: f3.x + 40.0, y: f3.y + 30.0 }];
    input.snapshot.drones[0] = idle_drone(f3.x + 10.0, f3.y + 10.0);
    input.snapshot.drones[1] = idle_drone(f3.x + 40.0, f3.y + 30.0);
    input.snapshot.drones[2] = idle_drone(f3.x + 70.0, f3.y + 50.0);
    let c = build_scenario_candidates(&spec, &input).unwrap();
    let scare = c.instances.iter().position(|i| i.spec_name == SCARE).unwrap();
    let segments = c.instance(InstanceId(scare)).children.clone();
    assert_eq!(segments.len(), 3);

    let mut a = Assignment::empty(&c);
    a.set_exists(c.root(), true);
    a.set_exists(InstanceId(scare), true);
    let mut expected = Vec::new();
    for (k, &seg) in segments.iter().enumerate() {
        a.set_exists(seg, true);
        a.add_member(seg, 0, ComponentId(k as u32));
        let pos = Vec2::new(input.snapshot.drones[k].x, input.snapshot.drones[k].y);
        expected.push(dist2_utility(pos, geom.fields[3].segment_centers[k], geom.world_diagonal));
    }
    assert!(check_feasible(&c, &a).unwrap().feasible());
    let scare_utility = node_utility(&c, &a, InstanceId(scare));
    let mean = expected.iter().sum::<f64>() / 3.0;
    assert!((scare_utility - mean).abs() < 1e-12, "{scare_utility} vs {mean}");
}

#[test]
fn a_field_never_has_both_approach_and_scare() {
    let geom = geometry();
    let spec = drone_protection_spec(Arc::clone(&geom));
    for seed in 0..300 {
        let (snapshot, status) = random_snapshot(&geom, 4, 5, (400.0, 300.0), seed);
        let input = ScenarioInput { snapshot, status };
        let c = build_scenario_candidates(&spec, &input).unwrap();
        for f in 0..geom.fields.len() {
            let has_approach = c
                .instances
                .iter()
                .any(|i| i.spec_name == APPROACH && i.binding == Some(f as u32));
            let has_scare =
                c.instances.iter().any(|i| i.spec_name == SCARE && i.binding == Some(f as u32));
            assert!(!(has_approach && has_scare), "field {f} doubly covered at seed {seed}");
        }
    }
}

#[test]
fn exact_resolution_matches_oracle_on_random_snapshots() {
    let geom = geometry();
    let spec = drone_protection_spec(Arc::clone(&geom));
    let mut checked = 0;
    let mut seed = 0u64;
    while checked < 40 {
        let (snapshot, status) = random_snapshot(&geom, 4, 5, (400.0, 300.0), seed);
        seed += 1;
        let input = ScenarioInput { snapshot, status };
        let c = build_scenario_candidates(&spec, &input).unwrap();
        let p = encode(&c);
        if p.var_count() > 30 {
            continue;
        }
        checked += 1;
        let fast = solve(&p, Duration::from_secs(60)).unwrap();
        let slow = brute_force_solve(&p).unwrap();
        assert_eq!(fast.utility, slow.utility, "seed {seed}");
        assert_eq!(fast.best, slow.best, "seed {seed}");
    }
}

#[test]
fn resolver_tasks_never_double_book_a_drone() {
    let geom = geometry();
    let cfg = WorldConfig::default();
    let mut resolver = ExactResolver::new(&cfg);
    for seed in 0..200 {
        let (snapshot, status) = random_snapshot(&geom, 4, 5, (400.0, 300.0), seed);
        let tasks = resolver.resolve(&snapshot, &status).unwrap();
        assert!(tasks.one_task_per_drone());
    }
}

#[test]
fn exact_episode_runs_clean() {
    let cfg = WorldConfig::default();
    let mut resolver = ExactResolver::new(&cfg);
    let r = run_episode(&cfg, &mut resolver, 97, 30, false).unwrap();
    assert_eq!(r.resolutions, 30);
    assert_eq!(r.failures, 0);
}

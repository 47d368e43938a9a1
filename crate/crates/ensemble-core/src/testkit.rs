//! Deterministic random candidate structures for tests and benchmarks.
//!
//! Kept dependency-free: a SplitMix64 stream drives every choice, so a seed
//! fully determines the generated tree. Scores are drawn from a coarse grid
//! on purpose — equal-utility optima are common, which exercises solver
//! tie-breaking.

use crate::{
    Assignment, Cardinality, ChildKind, ComponentId, DisjointGroup, EnsembleCandidates, Instance,
    InstanceId, PredicateCheck, RoleCandidates, RoleRef,
};
use std::sync::Arc;

/// Minimal deterministic RNG (SplitMix64).
#[derive(Debug, Clone)]
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in `0..n` (n > 0).
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn chance(&mut self, num: u32, den: u32) -> bool {
        (self.next_u64() % den as u64) < num as u64
    }
}

/// Generates a small random candidate tree over a 6-component universe.
/// Instance count, roles, cardinalities, scores, disjoint groups and an
/// optional black-box predicate all derive from `seed`.
pub fn random_candidates(seed: u64) -> EnsembleCandidates {
    let mut rng = SplitMix64(seed);
    let universe: Vec<ComponentId> = (0..6).map(ComponentId).collect();
    let score_grid = [0.0, 2.5, 5.0, 7.5, 10.0];
    let weight_grid = [0.25, 0.5, 1.0];

    let mut c = EnsembleCandidates::default();
    c.instances.push(Instance {
        spec_name: "Root".to_string(),
        binding: None,
        label: "Root".to_string(),
        parent: None,
        kind: ChildKind::Mandatory,
        rel_weight: 1.0,
        abs_weight: 1.0,
        roles: Vec::new(),
        children: Vec::new(),
    });

    let extra = rng.below(7); // up to 7 non-root instances
    for n in 0..extra {
        let id = InstanceId(c.instances.len());
        // attach somewhere already present; bias towards the root
        let parent = if rng.chance(2, 3) { InstanceId(0) } else { InstanceId(rng.below(id.0)) };
        let kind = if rng.chance(1, 4) { ChildKind::Mandatory } else { ChildKind::Optional };
        let rel_weight = weight_grid[rng.below(weight_grid.len())];
        let abs_weight = c.instance(parent).abs_weight * rel_weight;

        let mut roles = Vec::new();
        for r in 0..rng.below(3) {
            let mut pool = universe.clone();
            let count = rng.below(pool.len() + 1);
            let mut members = Vec::new();
            for _ in 0..count {
                let pick = rng.below(pool.len());
                members.push(pool.swap_remove(pick));
            }
            members.sort_unstable();
            let cardinality = if rng.chance(1, 2) {
                Cardinality::OneOf
            } else {
                Cardinality::SubsetWithMax(rng.below(members.len() + 2))
            };
            let scores = members.iter().map(|_| score_grid[rng.below(score_grid.len())]).collect();
            roles.push(RoleCandidates {
                name: format!("role{r}"),
                cardinality,
                candidates: members,
                scores,
            });
        }

        c.instances.push(Instance {
            spec_name: format!("Node{n}"),
            binding: Some(n as u32),
            label: format!("Node{n}[{n}]"),
            parent: Some(parent),
            kind,
            rel_weight,
            abs_weight,
            roles,
            children: Vec::new(),
        });
        c.instances[parent.0].children.push(id);
    }

    // random disjoint groups over existing roles
    let all_roles: Vec<RoleRef> = c
        .instances
        .iter()
        .enumerate()
        .flat_map(|(i, inst)| {
            (0..inst.roles.len()).map(move |r| RoleRef { instance: InstanceId(i), role: r })
        })
        .collect();
    if all_roles.len() >= 2 {
        for g in 0..rng.below(3) {
            let mut picks = Vec::new();
            for &role_ref in &all_roles {
                if rng.chance(1, 2) {
                    picks.push(role_ref);
                }
            }
            if picks.len() >= 2 {
                c.groups.push(DisjointGroup {
                    label: format!("Root.allDisjoint{g}"),
                    owner: InstanceId(0),
                    roles: picks,
                });
            }
        }
    }

    // occasionally a black-box predicate: caps how many instances may exist
    if rng.chance(1, 3) && c.instances.len() > 1 {
        let cap = 1 + rng.below(c.instances.len());
        c.predicates.push(PredicateCheck {
            label: format!("Root.atMost{cap}Existing"),
            owner: InstanceId(0),
            check: Arc::new(move |cand, _, a| {
                (0..cand.len()).filter(|&i| a.exists(InstanceId(i))).count() <= cap
            }),
        });
    }

    c
}

/// A canonical text rendering of a candidate structure, for equality checks
/// in determinism tests.
pub fn canonical_string(c: &EnsembleCandidates) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    for (i, inst) in c.instances.iter().enumerate() {
        let _ = write!(
            s,
            "#{i} {} parent={:?} kind={:?} w={}/{} roles=[",
            inst.label, inst.parent, inst.kind, inst.rel_weight, inst.abs_weight
        );
        for r in &inst.roles {
            let _ = write!(s, "{}:{:?}{:?}{:?};", r.name, r.cardinality, r.candidates, r.scores);
        }
        let _ = writeln!(s, "] children={:?}", inst.children);
    }
    for g in &c.groups {
        let _ = writeln!(s, "group {} owner={} roles={:?}", g.label, g.owner, g.roles);
    }
    for p in &c.predicates {
        let _ = writeln!(s, "predicate {} owner={}", p.label, p.owner);
    }
    s
}

/// A random structurally-plausible assignment (not necessarily feasible):
/// useful for property tests of the feasibility checker itself.
pub fn random_assignment(c: &EnsembleCandidates, seed: u64) -> Assignment {
    let mut rng = SplitMix64(seed ^ 0xA5A5_5A5A_DEAD_BEEF);
    let mut a = Assignment::empty(c);
    for i in 0..c.len() {
        let id = InstanceId(i);
        if rng.chance(1, 2) {
            a.set_exists(id, true);
            for (r, role) in c.instance(id).roles.iter().enumerate() {
                for &cand in &role.candidates {
                    if rng.chance(1, 3) {
                        a.add_member(id, r, cand);
                    }
                }
            }
        }
    }
    a
}

use crate::candidates::{ComponentId, EnsembleCandidates, InstanceId};

/// A resolution outcome: which potential instances exist and which components
/// are members of each role. Member lists are kept sorted by component id so
/// equal assignments compare equal structurally.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    exists: Vec<bool>,
    members: Vec<Vec<Vec<ComponentId>>>,
}

impl Assignment {
    /// The empty assignment: nothing exists, no members selected.
    pub fn empty(c: &EnsembleCandidates) -> Self {
        Assignment {
            exists: vec![false; c.instances.len()],
            members: c
                .instances
                .iter()
                .map(|i| vec![Vec::new(); i.roles.len()])
                .collect(),
        }
    }

    pub fn instance_count(&self) -> usize {
        self.exists.len()
    }

    pub fn exists(&self, id: InstanceId) -> bool {
        self.exists[id.0]
    }

    pub fn set_exists(&mut self, id: InstanceId, value: bool) {
        self.exists[id.0] = value;
    }

    pub fn members(&self, id: InstanceId, role: usize) -> &[ComponentId] {
        &self.members[id.0][role]
    }

    pub fn role_count(&self, id: InstanceId) -> usize {
        self.members[id.0].len()
    }

    /// Replaces the member set of a role; the list is sorted and must not
    /// contain duplicates (debug-asserted; feasibility checking reports
    /// duplicates as malformed input).
    pub fn set_members(&mut self, id: InstanceId, role: usize, mut members: Vec<ComponentId>) {
        members.sort_unstable();
        debug_assert!(members.windows(2).all(|w| w[0] != w[1]));
        self.members[id.0][role] = members;
    }

    pub fn add_member(&mut self, id: InstanceId, role: usize, c: ComponentId) {
        let set = &mut self.members[id.0][role];
        match set.binary_search(&c) {
            Ok(_) => {}
            Err(pos) => set.insert(pos, c),
        }
    }

    pub fn remove_member(&mut self, id: InstanceId, role: usize, c: ComponentId) {
        let set = &mut self.members[id.0][role];
        if let Ok(pos) = set.binary_search(&c) {
            set.remove(pos);
        }
    }

    pub fn is_member(&self, id: InstanceId, role: usize, c: ComponentId) -> bool {
        self.members[id.0][role].binary_search(&c).is_ok()
    }

    /// Removes an instance subtree: marks every instance in it absent and
    /// clears its member sets. Used by the sub-assignment feasibility
    /// property and by callers that strip optional subtrees.
    pub fn remove_subtree(&mut self, c: &EnsembleCandidates, id: InstanceId) {
        for i in c.subtree(id) {
            self.exists[i.0] = false;
            for role in self.members[i.0].iter_mut() {
                role.clear();
            }
        }
    }

    /// Iterator over (instance, role, component) membership triples.
    pub fn iter_memberships(
        &self,
    ) -> impl Iterator<Item = (InstanceId, usize, ComponentId)> + '_ {
        self.members.iter().enumerate().flat_map(|(i, roles)| {
            roles.iter().enumerate().flat_map(move |(r, set)| {
                set.iter().map(move |&c| (InstanceId(i), r, c))
            })
        })
    }
}

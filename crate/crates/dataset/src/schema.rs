use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Fixed feature/label layout of a dataset, derived from the component
/// counts: one occupancy flag per charger, then (energy, x, y, mode) per
/// drone, then (x, y) per flock; one 6-way label per drone when five fields
/// are configured.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schema {
    pub chargers: usize,
    pub drones: usize,
    pub flocks: usize,
    pub fields: usize,
}

impl Schema {
    /// The experimental-setup default: 3 chargers, 4 drones, 5 flocks,
    /// 5 fields — 29 features and four 6-class labels.
    pub fn default_farm() -> Self {
        Schema { chargers: 3, drones: 4, flocks: 5, fields: 5 }
    }

    pub fn feature_count(&self) -> usize {
        self.chargers + 4 * self.drones + 2 * self.flocks
    }

    pub fn label_count(&self) -> usize {
        self.drones
    }

    /// Label domain size: "no field" plus one class per field.
    pub fn classes(&self) -> usize {
        self.fields + 1
    }

    pub fn column_count(&self) -> usize {
        self.feature_count() + self.label_count()
    }

    pub fn feature_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.feature_count());
        for c in 0..self.chargers {
            names.push(format!("charger{c}_occupied"));
        }
        for d in 0..self.drones {
            names.push(format!("drone{d}_energy"));
            names.push(format!("drone{d}_x"));
            names.push(format!("drone{d}_y"));
            names.push(format!("drone{d}_mode"));
        }
        for f in 0..self.flocks {
            names.push(format!("flock{f}_x"));
            names.push(format!("flock{f}_y"));
        }
        names
    }

    pub fn label_names(&self) -> Vec<String> {
        (0..self.drones).map(|d| format!("label_drone{d}")).collect()
    }

    pub fn column_names(&self) -> Vec<String> {
        let mut names = self.feature_names();
        names.extend(self.label_names());
        names
    }

    /// Index of the mode column of one drone within the feature vector.
    pub fn mode_column(&self, drone: usize) -> usize {
        self.chargers + 4 * drone + 3
    }

    /// Indices of flag columns (charger occupancy); everything else except
    /// mode columns is a real-valued measurement.
    pub fn is_flag_column(&self, col: usize) -> bool {
        col < self.chargers
    }

    pub fn is_mode_column(&self, col: usize) -> bool {
        col >= self.chargers
            && col < self.chargers + 4 * self.drones
            && (col - self.chargers) % 4 == 3
    }

    /// Hash pinning the layout; models embed it and refuse mismatching data.
    pub fn hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.column_names().join(","));
        hasher.update(format!("|classes={}", self.classes()));
        hex_string(&hasher.finalize())
    }
}

pub(crate) fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Display name of a label class: NONE or F1..Fn (1-based field number).
pub fn label_name(class: u8) -> String {
    if class == 0 {
        "NONE".to_string()
    } else {
        format!("F{class}")
    }
}

pub fn parse_label(s: &str, classes: usize) -> Option<u8> {
    if s == "NONE" {
        return Some(0);
    }
    let k: u8 = s.strip_prefix('F')?.parse().ok()?;
    (1..classes as u8).contains(&k).then_some(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_schema_counts() {
        let s = Schema::default_farm();
        assert_eq!(s.feature_count(), 29);
        assert_eq!(s.label_count(), 4);
        assert_eq!(s.classes(), 6);
        assert_eq!(s.column_count(), 33);
    }

    #[test]
    fn column_classification() {
        let s = Schema::default_farm();
        assert!(s.is_flag_column(0) && s.is_flag_column(2));
        assert!(!s.is_flag_column(3));
        assert!(s.is_mode_column(s.mode_column(0)));
        assert!(s.is_mode_column(s.mode_column(3)));
        assert!(!s.is_mode_column(3)); // drone0_energy
        let names = s.column_names();
        assert_eq!(names[0], "charger0_occupied");
        assert_eq!(names[3], "drone0_energy");
        assert_eq!(names[6], "drone0_mode");
        assert_eq!(names[19], "flock0_x");
        assert_eq!(names[29], "label_drone0");
    }

    #[test]
    fn labels_round_trip() {
        assert_eq!(label_name(0), "NONE");
        assert_eq!(label_name(3), "F3");
        assert_eq!(parse_label("NONE", 6), Some(0));
        assert_eq!(parse_label("F5", 6), Some(5));
        assert_eq!(parse_label("F6", 6), None);
        assert_eq!(parse_label("bogus", 6), None);
    }

    #[test]
    fn hash_changes_with_layout() {
        let a = Schema::default_farm();
        let mut b = a.clone();
        b.drones = 5;
        assert_ne!(a.hash(), b.hash());
    }
}

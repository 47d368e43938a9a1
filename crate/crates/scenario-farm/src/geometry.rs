use farm_sim::{Rect, Vec2, WorldConfig};

/// Static per-field knowledge derived from the world configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldModel {
    pub index: usize,
    pub area: Rect,
    pub center: Vec2,
    pub crop: bool,
    /// Drones needed to protect this field, 1..=3 by area quartile.
    pub required_drones: usize,
    /// One protection segment center per required drone: equal vertical
    /// strips of the field.
    pub segment_centers: Vec<Vec2>,
}

/// Field models plus charger positions and world dimensions — everything the
/// scenario needs besides a knowledge snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioGeometry {
    pub fields: Vec<FieldModel>,
    pub chargers: Vec<Vec2>,
    pub world_diagonal: f64,
    pub charging_threshold: f64,
}

impl ScenarioGeometry {
    pub fn from_config(cfg: &WorldConfig) -> Self {
        // area rank (ties broken by field index) -> quartile -> 1..=3 drones
        let mut order: Vec<usize> = (0..cfg.fields.len()).collect();
        order.sort_by(|&a, &b| {
            cfg.fields[a]
                .rect
                .area()
                .partial_cmp(&cfg.fields[b].rect.area())
                .unwrap()
                .then(a.cmp(&b))
        });
        let mut rank_of = vec![0usize; cfg.fields.len()];
        for (rank, &f) in order.iter().enumerate() {
            rank_of[f] = rank;
        }
        let n = cfg.fields.len().max(1);

        let fields = cfg
            .fields
            .iter()
            .enumerate()
            .map(|(index, f)| {
                let quartile = 4 * rank_of[index] / n;
                let required_drones = (1 + quartile).min(3);
                let segment_centers = (0..required_drones)
                    .map(|k| {
                        Vec2::new(
                            f.rect.x + f.rect.w * (2 * k + 1) as f64
                                / (2 * required_drones) as f64,
                            f.rect.y + f.rect.h / 2.0,
                        )
                    })
                    .collect();
                FieldModel {
                    index,
                    area: f.rect,
                    center: f.rect.center(),
                    crop: f.crop,
                    required_drones,
                    segment_centers,
                }
            })
            .collect();

        ScenarioGeometry {
            fields,
            chargers: cfg.chargers.clone(),
            world_diagonal: cfg.world_diagonal(),
            charging_threshold: cfg.charging_threshold,
        }
    }
}

/// 2D position or direction in world distance units.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dist(self, other: Vec2) -> f64 {
        ((self.x - other.x).powi(2) + (self.y - other.y).powi(2)).sqrt()
    }

    /// Moves from `self` towards `target` by at most `step`, stopping exactly
    /// on the target when it is within reach.
    pub fn step_towards(self, target: Vec2, step: f64) -> Vec2 {
        let d = self.dist(target);
        if d <= step || d == 0.0 {
            return target;
        }
        let f = step / d;
        Vec2 { x: self.x + (target.x - self.x) * f, y: self.y + (target.y - self.y) * f }
    }

    /// Unit vector pointing from `from` to `self`; falls back to +x when the
    /// points coincide.
    pub fn away_from(self, from: Vec2) -> Vec2 {
        let d = self.dist(from);
        if d == 0.0 {
            return Vec2::new(1.0, 0.0);
        }
        Vec2 { x: (self.x - from.x) / d, y: (self.y - from.y) / d }
    }

    pub fn clamp_to(self, width: f64, height: f64) -> Vec2 {
        Vec2 { x: self.x.clamp(0.0, width), y: self.y.clamp(0.0, height) }
    }
}

/// Axis-aligned rectangle, half-open on the far edges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl Rect {
    pub fn contains(&self, p: Vec2) -> bool {
        p.x >= self.x && p.x < self.x + self.w && p.y >= self.y && p.y < self.y + self.h
    }

    pub fn center(&self) -> Vec2 {
        Vec2::new(self.x + self.w / 2.0, self.y + self.h / 2.0)
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }
}

use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::geom::{Rect, Vec2};

/// A field rectangle plus whether it carries crop (and therefore scores
/// undisturbed bird time and attracts flocks).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldRect {
    pub rect: Rect,
    pub crop: bool,
}

/// Full parameterization of the simulated world. Every field can be
/// overridden from a `key = value` scenario file; the defaults reproduce the
/// built-in five-field farm.
#[derive(Debug, Clone, PartialEq)]
pub struct WorldConfig {
    pub width: f64,
    pub height: f64,
    pub fields: Vec<FieldRect>,
    pub chargers: Vec<Vec2>,
    pub drone_count: usize,
    pub flock_count: usize,
    /// Drone speed in units per second.
    pub drone_speed: f64,
    /// Energy drained per tick while flying.
    pub fly_drain: f64,
    /// Energy drained per tick while idle.
    pub idle_drain: f64,
    /// Energy gained per tick while charging.
    pub charge_rate: f64,
    /// Below this energy fraction a drone autonomously seeks a charger.
    pub charging_threshold: f64,
    /// Distance within which a drone scares a flock.
    pub scare_radius: f64,
    /// Flock speed in units per second.
    pub flock_speed: f64,
    /// Simulated seconds per tick.
    pub tick_seconds: f64,
    /// Ticks a scared flock spends fleeing before re-targeting.
    pub flee_ticks: u64,
    /// Simulated minutes without observation after which a field counts as
    /// unknown.
    pub unknown_after_minutes: u64,
}

impl Default for WorldConfig {
    fn default() -> Self {
        let f = |x, y| FieldRect { rect: Rect { x, y, w: 80.0, h: 60.0 }, crop: true };
        WorldConfig {
            width: 400.0,
            height: 300.0,
            fields: vec![
                f(30.0, 40.0),
                f(160.0, 40.0),
                f(290.0, 40.0),
                f(95.0, 190.0),
                f(225.0, 190.0),
            ],
            chargers: vec![
                Vec2::new(185.0, 140.0),
                Vec2::new(200.0, 155.0),
                Vec2::new(215.0, 140.0),
            ],
            drone_count: 4,
            flock_count: 5,
            drone_speed: 8.0,
            fly_drain: 1.0 / 3600.0,
            idle_drain: 1.0 / 14400.0,
            charge_rate: 3.0 / 3600.0,
            charging_threshold: 0.4,
            scare_radius: 25.0,
            flock_speed: 2.0,
            tick_seconds: 1.0,
            flee_ticks: 60,
            unknown_after_minutes: 10,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl WorldConfig {
    /// Ticks between two ensemble resolutions (one simulated minute).
    pub fn resolution_period_ticks(&self) -> u64 {
        (60.0 / self.tick_seconds).round() as u64
    }

    pub fn ticks_per_minute(&self) -> u64 {
        self.resolution_period_ticks()
    }

    pub fn world_diagonal(&self) -> f64 {
        (self.width * self.width + self.height * self.height).sqrt()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let err = |msg: String| Err(ConfigError::Invalid(msg));
        if self.drone_count == 0 {
            return err("drone_count must be positive".into());
        }
        if self.fields.is_empty() || self.chargers.is_empty() {
            return err("need at least one field and one charger".into());
        }
        if !(self.charging_threshold > 0.0 && self.charging_threshold < 1.0) {
            return err(format!("charging_threshold {} outside (0, 1)", self.charging_threshold));
        }
        for (i, f) in self.fields.iter().enumerate() {
            let r = f.rect;
            if r.x < 0.0 || r.y < 0.0 || r.x + r.w > self.width || r.y + r.h > self.height {
                return err(format!("field {i} extends outside the world"));
            }
        }
        for (i, c) in self.chargers.iter().enumerate() {
            if c.x < 0.0 || c.x > self.width || c.y < 0.0 || c.y > self.height {
                return err(format!("charger {i} outside the world"));
            }
        }
        if self.tick_seconds <= 0.0 || 60.0 % self.tick_seconds != 0.0 {
            return err(format!(
                "tick_seconds {} must divide one minute exactly",
                self.tick_seconds
            ));
        }
        if self.drone_speed <= 0.0 || self.flock_speed <= 0.0 {
            return err("speeds must be positive".into());
        }
        if self.fly_drain <= 0.0 || self.charge_rate <= 0.0 || self.idle_drain < 0.0 {
            return err("energy rates must be positive".into());
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Parses `key = value` lines; `#` starts a comment. `field` and
    /// `charger` keys may repeat, and the first occurrence of either clears
    /// the built-in list.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = WorldConfig::default();
        let mut fields_reset = false;
        let mut chargers_reset = false;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
                line: line_no,
                msg: format!("expected key = value, got {line:?}"),
            })?;
            let key = key.trim();
            let value = value.trim();
            let parse_f64 = |v: &str| {
                v.parse::<f64>().map_err(|_| ConfigError::Parse {
                    line: line_no,
                    msg: format!("{key}: not a number: {v:?}"),
                })
            };
            let parse_usize = |v: &str| {
                v.parse::<usize>().map_err(|_| ConfigError::Parse {
                    line: line_no,
                    msg: format!("{key}: not a count: {v:?}"),
                })
            };
            match key {
                "width" => cfg.width = parse_f64(value)?,
                "height" => cfg.height = parse_f64(value)?,
                "drone_count" => cfg.drone_count = parse_usize(value)?,
                "flock_count" => cfg.flock_count = parse_usize(value)?,
                "drone_speed" => cfg.drone_speed = parse_f64(value)?,
                "fly_drain" => cfg.fly_drain = parse_f64(value)?,
                "idle_drain" => cfg.idle_drain = parse_f64(value)?,
                "charge_rate" => cfg.charge_rate = parse_f64(value)?,
                "charging_threshold" => cfg.charging_threshold = parse_f64(value)?,
                "scare_radius" => cfg.scare_radius = parse_f64(value)?,
                "flock_speed" => cfg.flock_speed = parse_f64(value)?,
                "tick_seconds" => cfg.tick_seconds = parse_f64(value)?,
                "flee_ticks" => cfg.flee_ticks = parse_usize(value)? as u64,
                "unknown_after_minutes" => {
                    cfg.unknown_after_minutes = parse_usize(value)? as u64
                }
                "field" => {
                    if !fields_reset {
                        cfg.fields.clear();
                        fields_reset = true;
                    }
                    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                    if parts.len() != 5 {
                        return Err(ConfigError::Parse {
                            line: line_no,
                            msg: format!("field wants x,y,w,h,crop — got {value:?}"),
                        });
                    }
                    cfg.fields.push(FieldRect {
                        rect: Rect {
                            x: parse_f64(parts[0])?,
                            y: parse_f64(parts[1])?,
                            w: parse_f64(parts[2])?,
                            h: parse_f64(parts[3])?,
                        },
                        crop: parts[4] == "1" || parts[4] == "true",
                    });
                }
                "charger" => {
                    if !chargers_reset {
                        cfg.chargers.clear();
                        chargers_reset = true;
                    }
                    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                    if parts.len() != 2 {
                        return Err(ConfigError::Parse {
                            line: line_no,
                            msg: format!("charger wants x,y — got {value:?}"),
                        });
                    }
                    cfg.chargers.push(Vec2::new(parse_f64(parts[0])?, parse_f64(parts[1])?));
                }
                other => {
                    return Err(ConfigError::Parse {
                        line: line_no,
                        msg: format!("unknown key {other:?}"),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Canonical `key = value` rendering; `parse(render())` reproduces the
    /// config exactly. Also the basis of the provenance hash.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "width = {}", self.width);
        let _ = writeln!(s, "height = {}", self.height);
        for f in &self.fields {
            let _ = writeln!(
                s,
                "field = {},{},{},{},{}",
                f.rect.x,
                f.rect.y,
                f.rect.w,
                f.rect.h,
                if f.crop { 1 } else { 0 }
            );
        }
        for c in &self.chargers {
            let _ = writeln!(s, "charger = {},{}", c.x, c.y);
        }
        let _ = writeln!(s, "drone_count = {}", self.drone_count);
        let _ = writeln!(s, "flock_count = {}", self.flock_count);
        let _ = writeln!(s, "drone_speed = {}", self.drone_speed);
        let _ = writeln!(s, "fly_drain = {}", self.fly_drain);
        let _ = writeln!(s, "idle_drain = {}", self.idle_drain);
        let _ = writeln!(s, "charge_rate = {}", self.charge_rate);
        let _ = writeln!(s, "charging_threshold = {}", self.charging_threshold);
        let _ = writeln!(s, "scare_radius = {}", self.scare_radius);
        let _ = writeln!(s, "flock_speed = {}", self.flock_speed);
        let _ = writeln!(s, "tick_seconds = {}", self.tick_seconds);
        let _ = writeln!(s, "flee_ticks = {}", self.flee_ticks);
        let _ = writeln!(s, "unknown_after_minutes = {}", self.unknown_after_minutes);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_config_is_valid() {
        WorldConfig::default().validate().unwrap();
    }

    #[test]
    fn render_parse_round_trip() {
        let cfg = WorldConfig::default();
        let parsed = WorldConfig::parse(&cfg.render()).unwrap();
        assert_eq!(cfg, parsed);
    }

    #[test]
    fn parse_error_names_line() {
        let text = "width = 400\nbogus_key = 3\n";
        match WorldConfig::parse(text) {
            Err(ConfigError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn field_lines_replace_defaults() {
        let text = "field = 0,0,50,50,1\ncharger = 200,150\nflock_count = 1\n";
        let cfg = WorldConfig::parse(text).unwrap();
        assert_eq!(cfg.fields.len(), 1);
        assert_eq!(cfg.chargers.len(), 1);
    }

    #[test]
    fn threshold_must_be_a_fraction() {
        let mut cfg = WorldConfig::default();
        cfg.charging_threshold = 1.5;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn resolution_period_is_one_minute_of_ticks() {
        let cfg = WorldConfig::default();
        assert_eq!(cfg.resolution_period_ticks(), 60);
        let mut half = cfg.clone();
        half.tick_seconds = 0.5;
        assert_eq!(half.resolution_period_ticks(), 120);
    }
}

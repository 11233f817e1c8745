//! Constellation configuration: shells, observers, JSON parsing and the
//! built-in parameter sets.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{EarthGeometry, ShellGeometry, DEFAULT_EARTH_RADIUS_KM};

/// Upper bound on satellites per shell; larger counts are almost always a
/// kilometer/count mix-up in the input.
pub const MAX_SATELLITES_PER_SHELL: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShellSpec {
    pub altitude_km: f64,
    pub num_satellites: u64,
}

impl ShellSpec {
    pub fn new(altitude_km: f64, num_satellites: u64) -> Self {
        Self { altitude_km, num_satellites }
    }
}

fn default_earth_radius() -> f64 {
    DEFAULT_EARTH_RADIUS_KM
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstellationSpec {
    #[serde(default)]
    pub name: String,
    #[serde(default = "default_earth_radius")]
    pub earth_radius_km: f64,
    pub shells: Vec<ShellSpec>,
}

impl ConstellationSpec {
    /// Builds and validates a spec with the default Earth radius.
    pub fn new(name: impl Into<String>, shells: Vec<ShellSpec>) -> Result<Self> {
        let spec = Self {
            name: name.into(),
            earth_radius_km: DEFAULT_EARTH_RADIUS_KM,
            shells,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Builds a spec from parallel altitude / count lists.
    pub fn from_lists(name: &str, altitudes: &[f64], counts: &[u64]) -> Result<Self> {
        if altitudes.len() != counts.len() {
            return Err(Error::Config(format!(
                "{} altitudes but {} counts",
                altitudes.len(),
                counts.len()
            )));
        }
        let shells = altitudes
            .iter()
            .zip(counts)
            .map(|(&a, &n)| ShellSpec::new(a, n))
            .collect();
        Self::new(name, shells)
    }

    pub fn with_earth_radius(mut self, radius_km: f64) -> Result<Self> {
        self.earth_radius_km = radius_km;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        EarthGeometry::new(self.earth_radius_km)?;
        if self.shells.is_empty() {
            return Err(Error::NoShells);
        }
        for (i, shell) in self.shells.iter().enumerate() {
            if !(shell.altitude_km.is_finite() && shell.altitude_km > 0.0) {
                return Err(Error::InvalidAltitude(shell.altitude_km));
            }
            if shell.num_satellites > MAX_SATELLITES_PER_SHELL {
                return Err(Error::TooManySatellites {
                    index: i + 1,
                    count: shell.num_satellites,
                    limit: MAX_SATELLITES_PER_SHELL,
                });
            }
        }
        Ok(())
    }

    pub fn earth(&self) -> EarthGeometry {
        // validated at construction
        EarthGeometry::new(self.earth_radius_km).unwrap_or_default()
    }

    pub fn num_shells(&self) -> usize {
        self.shells.len()
    }

    /// Geometry of shell `index` (1-based).
    pub fn shell_geometry(&self, index: usize) -> Result<ShellGeometry> {
        let shell = self.shell(index)?;
        ShellGeometry::new(shell.altitude_km, &self.earth())
    }

    /// Shell `index` (1-based).
    pub fn shell(&self, index: usize) -> Result<&ShellSpec> {
        index
            .checked_sub(1)
            .and_then(|i| self.shells.get(i))
            .ok_or(Error::ShellIndexOutOfRange { index, count: self.shells.len() })
    }

    pub fn total_satellites(&self) -> u64 {
        self.shells.iter().map(|s| s.num_satellites).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

/// Parses a JSON constellation description and validates it.
pub fn parse_config(text: &[u8]) -> Result<ConstellationSpec> {
    let spec: ConstellationSpec =
        serde_json::from_slice(text).map_err(|e| Error::Config(e.to_string()))?;
    spec.validate()?;
    Ok(spec)
}

/// Where distances are measured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObservationPoint {
    /// A ground observer that is not part of the point process.
    EarthSurface,
    /// One of the points of shell `i` (1-based).
    OnShell(usize),
}

impl ObservationPoint {
    pub fn validate(&self, spec: &ConstellationSpec) -> Result<()> {
        if let ObservationPoint::OnShell(i) = *self {
            if spec.shell(i)?.num_satellites == 0 {
                return Err(Error::EmptyObserverShell(i));
            }
        }
        Ok(())
    }
}

impl fmt::Display for ObservationPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObservationPoint::EarthSurface => f.write_str("earth"),
            ObservationPoint::OnShell(i) => write!(f, "shell:{i}"),
        }
    }
}

impl FromStr for ObservationPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("earth") {
            return Ok(ObservationPoint::EarthSurface);
        }
        s.strip_prefix("shell:")
            .and_then(|i| i.parse::<usize>().ok())
            .filter(|&i| i >= 1)
            .map(ObservationPoint::OnShell)
            .ok_or_else(|| Error::InvalidObserver(s.to_string()))
    }
}

struct PresetDef {
    name: &'static str,
    altitudes: &'static [f64],
    counts: &'static [u64],
}

const PRESETS: &[PresetDef] = &[
    PresetDef {
        name: "fig3-circle",
        altitudes: &[1110.0, 1150.0, 1275.0, 1325.0],
        counts: &[50, 40, 25, 15],
    },
    PresetDef {
        name: "fig3-square",
        altitudes: &[1110.0, 1150.0, 1275.0, 1325.0, 1500.0, 1700.0],
        counts: &[75, 65, 55, 45, 25, 15],
    },
    PresetDef {
        name: "fig3-diamond",
        altitudes: &[1110.0, 1150.0, 1275.0, 1325.0],
        counts: &[105, 85, 60, 35],
    },
    PresetDef {
        name: "fig4",
        altitudes: &[1000.0, 1325.0, 1625.0, 2000.0],
        counts: &[500, 400, 325, 280],
    },
    PresetDef { name: "leosat", altitudes: &[1400.0], counts: &[100] },
    PresetDef { name: "oneweb", altitudes: &[1200.0], counts: &[74] },
    PresetDef {
        name: "amazon",
        altitudes: &[590.0, 610.0, 630.0],
        counts: &[784, 1296, 1156],
    },
    PresetDef {
        name: "spacex",
        altitudes: &[550.0, 1110.0, 1130.0, 1275.0, 1325.0],
        counts: &[1584, 1600, 400, 374, 450],
    },
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

pub fn preset(name: &str) -> Result<ConstellationSpec> {
    let def = PRESETS
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownPreset {
            name: name.to_string(),
            available: preset_names().join(", "),
        })?;
    ConstellationSpec::from_lists(def.name, def.altitudes, def.counts)
}

pub fn presets() -> Vec<ConstellationSpec> {
    PRESETS
        .iter()
        .map(|p| preset(p.name).expect("built-in presets are valid"))
        .collect()
}

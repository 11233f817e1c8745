//! Spherical-cap and line-of-sight geometry for concentric shells.
//!
//! All lengths are kilometers. An observer sits either on the Earth's surface
//! or on one of the shells; target points live on a shell of radius
//! `r = r_e + a`. For an observer at radius `r_o` and a target at colatitude
//! `phi` (measured from the observer's radial axis) on a shell of radius
//! `r_t`, the chord length is `d² = r_o² + r_t² − 2 r_o r_t cos(phi)`. The set
//! of target points closer than `d` is a polar cap of height
//! `h = (d² − (r_t − r_o)²) / (2 r_o)` whose base plane sits at `z = r_t − h`.

use crate::error::{Error, Result};

/// Cartesian position in kilometers.
pub type Vec3 = [f64; 3];

/// Mean Earth radius used when a configuration does not override it.
pub const DEFAULT_EARTH_RADIUS_KM: f64 = 6371.0;

/// Relative slack allowed when deciding that a segment grazes the Earth.
const GRAZING_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EarthGeometry {
    radius: f64,
}

impl EarthGeometry {
    pub fn new(radius_km: f64) -> Result<Self> {
        if radius_km.is_finite() && radius_km > 0.0 {
            Ok(Self { radius: radius_km })
        } else {
            Err(Error::InvalidEarthRadius(radius_km))
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl Default for EarthGeometry {
    fn default() -> Self {
        Self { radius: DEFAULT_EARTH_RADIUS_KM }
    }
}

/// A sphere concentric with the Earth, stored by altitude; the radius is
/// derived once as `r_e + a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellGeometry {
    altitude: f64,
    radius: f64,
}

impl ShellGeometry {
    pub fn new(altitude_km: f64, earth: &EarthGeometry) -> Result<Self> {
        if !(altitude_km.is_finite() && altitude_km > 0.0) {
            return Err(Error::InvalidAltitude(altitude_km));
        }
        Ok(Self {
            altitude: altitude_km,
            radius: earth.radius() + altitude_km,
        })
    }

    pub fn altitude(&self) -> f64 {
        self.altitude
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// Radial position of an observer: the ground (altitude 0) or a shell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObserverGeometry {
    altitude: f64,
    radius: f64,
}

impl ObserverGeometry {
    pub fn ground(earth: &EarthGeometry) -> Self {
        Self { altitude: 0.0, radius: earth.radius() }
    }

    pub fn on_shell(shell: &ShellGeometry) -> Self {
        Self { altitude: shell.altitude(), radius: shell.radius() }
    }

    pub fn altitude(&self) -> f64 {
        self.altitude
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

impl From<ShellGeometry> for ObserverGeometry {
    fn from(shell: ShellGeometry) -> Self {
        Self::on_shell(&shell)
    }
}

/// Polar cap of a sphere: apex height `h` and base-plane offset `z = r − h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapSpec {
    height: f64,
    offset: f64,
    radius: f64,
}

impl CapSpec {
    pub fn new(height: f64, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::Internal(format!("cap radius {radius} is not positive")));
        }
        if !(0.0..=2.0 * radius).contains(&height) {
            return Err(Error::Internal(format!(
                "cap height {height} outside [0, {}]",
                2.0 * radius
            )));
        }
        Ok(Self { height, offset: radius - height, radius })
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    /// Base-plane offset `z` from the sphere center.
    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

fn check_distance(d: f64) -> Result<f64> {
    if d.is_finite() && d >= 0.0 {
        Ok(d)
    } else {
        Err(Error::InvalidDistance(d))
    }
}

/// Cap height on `shell` seen from a ground observer at chord distance `d`:
/// `(d² − a²) / (2 r_e)`.
pub fn cap_height_earth_obs(d: f64, shell: &ShellGeometry, earth: &EarthGeometry) -> Result<f64> {
    let d = check_distance(d)?;
    let a = shell.altitude();
    if d < a {
        return Err(Error::BelowOnset { distance: d, onset: a });
    }
    Ok((d * d - a * a) / (2.0 * earth.radius()))
}

/// Cap height on `target` seen from an observer on `obs` at chord distance
/// `d`: `(d² − (a_i − a_k)²) / (2 r_i)`.
pub fn cap_height_cross(d: f64, obs: &ShellGeometry, target: &ShellGeometry) -> Result<f64> {
    let d = check_distance(d)?;
    let gap = obs.altitude() - target.altitude();
    if d < gap.abs() {
        return Err(Error::BelowOnset { distance: d, onset: gap.abs() });
    }
    Ok((d * d - gap * gap) / (2.0 * obs.radius()))
}

/// Cap height on the observer's own shell at chord distance `d`: `d² / (2 r_i)`.
pub fn cap_height_same(d: f64, shell: &ShellGeometry) -> Result<f64> {
    let d = check_distance(d)?;
    Ok(d * d / (2.0 * shell.radius()))
}

/// Length of the Earth-tangent segment from altitude `a`: `√(2 r_e a + a²)`.
pub fn tangent_length(altitude: f64, earth: &EarthGeometry) -> f64 {
    (altitude * (2.0 * earth.radius() + altitude)).sqrt()
}

/// Maximum line-of-sight distance from `obs` to a point on `target`.
///
/// The limiting segment grazes the Earth, so the distance is the sum of the two
/// tangent lengths. This single expression covers all three observer cases:
/// a ground observer contributes a zero tangent (`√(2 r_e a_k + a_k²)`), two
/// distinct shells give `√(r_k² − r_e²) + √(r_i² − r_e²)`, and the observer's
/// own shell gives `2√(r_i² − r_e²)`.
pub fn d_max(obs: &ObserverGeometry, target: &ShellGeometry, earth: &EarthGeometry) -> f64 {
    tangent_length(obs.altitude(), earth) + tangent_length(target.altitude(), earth)
}

pub fn d_max_contact(target: &ShellGeometry, earth: &EarthGeometry) -> f64 {
    d_max(&ObserverGeometry::ground(earth), target, earth)
}

pub fn d_max_cross(obs: &ShellGeometry, target: &ShellGeometry, earth: &EarthGeometry) -> f64 {
    d_max(&ObserverGeometry::on_shell(obs), target, earth)
}

pub fn d_max_same(shell: &ShellGeometry, earth: &EarthGeometry) -> f64 {
    2.0 * tangent_length(shell.altitude(), earth)
}

/// Law of cosines: chord between a point at radius `obs_radius` on the polar
/// axis and a point at colatitude `phi` on radius `target_radius`.
pub fn chord_from_colatitude(phi: f64, obs_radius: f64, target_radius: f64) -> f64 {
    let sq = obs_radius * obs_radius + target_radius * target_radius
        - 2.0 * obs_radius * target_radius * phi.cos();
    sq.max(0.0).sqrt()
}

/// Inverse of [`chord_from_colatitude`]; chords outside the attainable range
/// are clamped to `0` or `π`.
pub fn colatitude_from_chord(d: f64, obs_radius: f64, target_radius: f64) -> f64 {
    let c = (obs_radius * obs_radius + target_radius * target_radius - d * d)
        / (2.0 * obs_radius * target_radius);
    c.clamp(-1.0, 1.0).acos()
}

pub fn dot(u: &Vec3, v: &Vec3) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

pub fn norm(u: &Vec3) -> f64 {
    dot(u, u).sqrt()
}

pub fn distance(p: &Vec3, q: &Vec3) -> f64 {
    let diff = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
    norm(&diff)
}

/// Smallest norm attained on the closed segment `pq`.
pub fn segment_min_norm(p: &Vec3, q: &Vec3) -> f64 {
    let v = [q[0] - p[0], q[1] - p[1], q[2] - p[2]];
    let vv = dot(&v, &v);
    if vv == 0.0 {
        return norm(p);
    }
    let t = (-dot(p, &v) / vv).clamp(0.0, 1.0);
    norm(&[p[0] + t * v[0], p[1] + t * v[1], p[2] + t * v[2]])
}

/// True when the segment `pq` never enters the Earth's interior. A grazing
/// (tangent) segment is visible.
pub fn segment_clears_earth(p: &Vec3, q: &Vec3, earth: &EarthGeometry) -> bool {
    segment_min_norm(p, q) >= earth.radius() * (1.0 - GRAZING_REL_TOL)
}

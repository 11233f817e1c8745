//! Closed-form contact and nearest-neighbor distance distributions.
//!
//! Each shell contributes a factor `P(D_k ≥ d)` with three regimes:
//!
//! * `d < onset`: no point of the shell can be that close, the factor is 1;
//! * `onset ≤ d ≤ d_max`: every one of the `N` points must avoid the polar cap
//!   of chord radius `d`, giving `[1 − arccos(1 − (d² − Δa²)/(2 r_o r_t))/π]^N`;
//! * `d > d_max`: only the line-of-sight cap matters, so the factor stays at
//!   its value at `d_max` (the plateau).
//!
//! The single-point miss probability `1 − arccos(z/r)/π` is the probability
//! that a point whose colatitude is uniform on `[0, π]` about the observer axis
//! falls below the plane `z`.
//!
//! For a ground observer the plateau is `[1 − arccos(r_e/r_k)/π]^N`, which is
//! exactly the middle regime evaluated at the horizon. For shell observers the
//! plateau is taken as the middle regime at `d_max` as well. Substituting the
//! far-side cap heights `2r_e²/r_i` (same shell) or
//! `((r_i + r_k)² − d_max²)/(2 r_i)` (other shells) instead would select the
//! complementary cap, whose base-plane argument has the opposite sign, and
//! would make the CDF jump at `d_max`; those forms are not used.
//!
//! The observer of a nearest-neighbor distribution is itself one of the `N_i`
//! points of its shell, so the same-shell factor uses exponent `N_i − 1`.

use std::f64::consts::PI;

use crate::constellation::{ConstellationSpec, ObservationPoint};
use crate::error::{Error, Result};
use crate::geometry::{self, EarthGeometry, ObserverGeometry, ShellGeometry};
use crate::quadrature;

/// Slack tolerated on `arccos` arguments before they are treated as a bug.
const ACOS_CLAMP_TOL: f64 = 1e-12;
const QUANTILE_TOL_KM: f64 = 1e-6;
const MEAN_REL_TOL: f64 = 1e-8;
const ONSET_REFINE_DECADES: i32 = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShellCcdfKind {
    ContactFromEarth,
    NnSameShell,
    NnCrossShell,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Contact,
    /// Observer is a point of shell `i` (1-based).
    NearestNeighbor(usize),
}

fn clamped_acos(x: f64) -> Result<f64> {
    if x.is_nan() || !(-1.0 - ACOS_CLAMP_TOL..=1.0 + ACOS_CLAMP_TOL).contains(&x) {
        return Err(Error::Internal(format!("arccos argument {x} outside [-1, 1]")));
    }
    Ok(x.clamp(-1.0, 1.0).acos())
}

/// `ln(base^n)` for a probability `base = 1 − x`, with `0^0 = 1`.
fn log_power(x: f64, n: u64) -> f64 {
    if n == 0 {
        0.0
    } else {
        n as f64 * (-x).ln_1p()
    }
}

/// Probability that a colatitude-uniform point on a sphere of radius `r` lies
/// strictly below the plane at offset `z`: `1 − arccos(z/r)/π`.
pub fn cap_miss_probability(z: f64, r: f64) -> Result<f64> {
    Ok(1.0 - clamped_acos(z / r)? / PI)
}

/// Piecewise CCDF `P(D_k ≥ d)` of the distance to the nearest point of one shell.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellCcdf {
    kind: ShellCcdfKind,
    onset: f64,
    d_max: f64,
    plateau: f64,
    log_plateau: f64,
    exponent: u64,
    obs_radius: f64,
    target_radius: f64,
    altitude_gap: f64,
}

impl ShellCcdf {
    /// Ground observer, `n_sat` points on `shell`.
    pub fn contact(shell: &ShellGeometry, n_sat: u64, earth: &EarthGeometry) -> Result<Self> {
        let d_max = geometry::d_max_contact(shell, earth);
        let x = clamped_acos(earth.radius() / shell.radius())? / PI;
        let log_plateau = log_power(x, n_sat);
        Ok(Self {
            kind: ShellCcdfKind::ContactFromEarth,
            onset: shell.altitude(),
            d_max,
            plateau: log_plateau.exp(),
            log_plateau,
            exponent: n_sat,
            obs_radius: earth.radius(),
            target_radius: shell.radius(),
            altitude_gap: shell.altitude(),
        })
    }

    /// Observer is one of the `n_sat` points on `shell`; the other `n_sat − 1`
    /// points compete.
    pub fn nn_same_shell(shell: &ShellGeometry, n_sat: u64, earth: &EarthGeometry) -> Result<Self> {
        if n_sat == 0 {
            return Err(Error::MissingObserverPoint);
        }
        Self::with_continuous_plateau(
            ShellCcdfKind::NnSameShell,
            0.0,
            geometry::d_max_same(shell, earth),
            n_sat - 1,
            shell.radius(),
            shell.radius(),
            0.0,
        )
    }

    /// Observer on `obs`, `n_sat` points on a different shell `target`.
    pub fn nn_cross_shell(
        obs: &ShellGeometry,
        target: &ShellGeometry,
        n_sat: u64,
        earth: &EarthGeometry,
    ) -> Result<Self> {
        let gap = obs.altitude() - target.altitude();
        Self::with_continuous_plateau(
            ShellCcdfKind::NnCrossShell,
            gap.abs(),
            geometry::d_max_cross(obs, target, earth),
            n_sat,
            obs.radius(),
            target.radius(),
            gap,
        )
    }

    fn with_continuous_plateau(
        kind: ShellCcdfKind,
        onset: f64,
        d_max: f64,
        exponent: u64,
        obs_radius: f64,
        target_radius: f64,
        altitude_gap: f64,
    ) -> Result<Self> {
        let mut ccdf = Self {
            kind,
            onset,
            d_max,
            plateau: 1.0,
            log_plateau: 0.0,
            exponent,
            obs_radius,
            target_radius,
            altitude_gap,
        };
        ccdf.log_plateau = ccdf.log_middle(d_max)?;
        ccdf.plateau = ccdf.log_plateau.exp();
        Ok(ccdf)
    }

    /// Cap probability mass `arccos(z/r)/π` swept by chord distance `d`.
    fn cap_mass(&self, d: f64) -> Result<f64> {
        let gap2 = self.altitude_gap * self.altitude_gap;
        let arg = 1.0 - (d * d - gap2) / (2.0 * self.obs_radius * self.target_radius);
        Ok(clamped_acos(arg)? / PI)
    }

    fn log_middle(&self, d: f64) -> Result<f64> {
        Ok(log_power(self.cap_mass(d)?, self.exponent))
    }

    /// Middle-regime expression evaluated at `d`, ignoring the regime bounds.
    pub fn middle_branch(&self, d: f64) -> Result<f64> {
        Ok(self.log_middle(d)?.exp())
    }

    /// `ln P(D_k ≥ d)`.
    pub fn log_ccdf(&self, d: f64) -> Result<f64> {
        if !(d >= 0.0) {
            return Err(Error::InvalidDistance(d));
        }
        if d < self.onset || self.exponent == 0 {
            Ok(0.0)
        } else if d <= self.d_max {
            self.log_middle(d)
        } else {
            Ok(self.log_plateau)
        }
    }

    /// `P(D_k ≥ d)`.
    pub fn ccdf(&self, d: f64) -> Result<f64> {
        Ok(self.log_ccdf(d)?.exp())
    }

    pub fn kind(&self) -> ShellCcdfKind {
        self.kind
    }

    pub fn onset(&self) -> f64 {
        self.onset
    }

    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    /// Probability that no point of the shell is in line of sight.
    pub fn plateau(&self) -> f64 {
        self.plateau
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }
}

/// Combined distance distribution `F(d) = 1 − ∏_k P(D_k ≥ d)`.
///
/// The distribution is defective: `F(∞) = 1 − ∏_k plateau_k` is the
/// probability that at least one point is visible.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceDistribution {
    scenario: Scenario,
    shells: Vec<ShellCcdf>,
}

impl DistanceDistribution {
    pub fn new(spec: &ConstellationSpec, obs: ObservationPoint) -> Result<Self> {
        spec.validate()?;
        obs.validate(spec)?;
        let earth = spec.earth();
        let geoms = (1..=spec.num_shells())
            .map(|k| spec.shell_geometry(k))
            .collect::<Result<Vec<_>>>()?;
        let counts = spec.shells.iter().map(|s| s.num_satellites);

        let (scenario, shells) = match obs {
            ObservationPoint::EarthSurface => (
                Scenario::Contact,
                geoms
                    .iter()
                    .zip(counts)
                    .map(|(g, n)| ShellCcdf::contact(g, n, &earth))
                    .collect::<Result<Vec<_>>>()?,
            ),
            ObservationPoint::OnShell(i) => {
                let own = geoms[i - 1];
                (
                    Scenario::NearestNeighbor(i),
                    geoms
                        .iter()
                        .zip(counts)
                        .enumerate()
                        .map(|(k, (g, n))| {
                            if k + 1 == i {
                                ShellCcdf::nn_same_shell(g, n, &earth)
                            } else {
                                ShellCcdf::nn_cross_shell(&own, g, n, &earth)
                            }
                        })
                        .collect::<Result<Vec<_>>>()?,
                )
            }
        };
        Ok(Self { scenario, shells })
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn shells(&self) -> &[ShellCcdf] {
        &self.shells
    }

    /// `ln P(D ≥ d)`.
    pub fn log_ccdf(&self, d: f64) -> Result<f64> {
        self.shells.iter().map(|s| s.log_ccdf(d)).sum()
    }

    pub fn cdf(&self, d: f64) -> Result<f64> {
        Ok(0.0 - self.log_ccdf(d)?.exp_m1())
    }

    /// Per-shell `P(D_k ≥ d)` in shell order.
    pub fn shell_ccdfs(&self, d: f64) -> Result<Vec<f64>> {
        self.shells.iter().map(|s| s.ccdf(d)).collect()
    }

    /// `F(∞)`: probability that at least one point is in line of sight.
    pub fn visibility_probability(&self) -> f64 {
        let log_blind: f64 = self.shells.iter().map(|s| s.log_plateau).sum();
        0.0 - log_blind.exp_m1()
    }

    /// Smallest distance at which `F` can leave zero.
    pub fn min_onset(&self) -> f64 {
        self.shells
            .iter()
            .filter(|s| s.exponent > 0)
            .map(|s| s.onset)
            .fold(f64::INFINITY, f64::min)
            .min(self.support_top())
    }

    /// Largest line-of-sight distance over all shells; `F` is constant beyond it.
    pub fn support_top(&self) -> f64 {
        self.shells.iter().map(|s| s.d_max).fold(0.0, f64::max)
    }

    /// Distances where some shell changes regime, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut pts: Vec<f64> = self.shells.iter().flat_map(|s| [s.onset, s.d_max]).collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        pts
    }

    /// Smallest `d` with `F(d) ≥ q`, to within 1e-6 km.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&q) {
            return Err(Error::InvalidProbability(q));
        }
        let visibility = self.visibility_probability();
        if q >= visibility {
            return Err(Error::BeyondVisibility { q, visibility });
        }
        let mut lo = self.min_onset();
        if q == 0.0 {
            return Ok(lo);
        }
        let mut hi = self.support_top();
        while hi - lo > QUANTILE_TOL_KM {
            let mid = 0.5 * (lo + hi);
            if self.cdf(mid)? >= q {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(hi)
    }

    /// `E[D | D < ∞] = (1/F(∞)) ∫₀^top (F(∞) − F(t)) dt`.
    pub fn conditional_mean(&self) -> Result<f64> {
        let visibility = self.visibility_probability();
        if visibility <= 0.0 {
            return Err(Error::ZeroVisibility);
        }
        let start = self.min_onset();
        let top = self.support_top();
        let mut breaks: Vec<f64> = self
            .breakpoints()
            .into_iter()
            .filter(|&b| b > start && b < top)
            .collect();
        breaks.insert(0, start);
        breaks.push(top);
        // A dense shell rises from its onset within a tiny fraction of the
        // span, so give the integrator nodes at geometrically shrinking offsets.
        let span = top - start;
        for s in self.shells.iter().filter(|s| s.exponent > 0 && s.onset < top) {
            breaks.extend((1..=ONSET_REFINE_DECADES).map(|k| s.onset + span * 10f64.powi(-k)));
        }
        breaks.retain(|&b| b >= start && b <= top);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let tail = quadrature::integrate(
            |t| Ok(visibility - self.cdf(t)?),
            &breaks,
            MEAN_REL_TOL,
            0.0,
        )?;
        Ok(start + tail / visibility)
    }
}

/// Contact distance CCDF from a ground observer to one shell.
pub fn ccdf_contact_shell(
    d: f64,
    shell: &ShellGeometry,
    n_sat: u64,
    earth: &EarthGeometry,
) -> Result<f64> {
    ShellCcdf::contact(shell, n_sat, earth)?.ccdf(d)
}

/// Nearest-neighbor CCDF over the observer's own shell (exponent `n_sat − 1`).
pub fn ccdf_nn_same_shell(
    d: f64,
    shell: &ShellGeometry,
    n_sat: u64,
    earth: &EarthGeometry,
) -> Result<f64> {
    ShellCcdf::nn_same_shell(shell, n_sat, earth)?.ccdf(d)
}

/// Nearest-neighbor CCDF from an observer on `obs` to the points of `target`.
pub fn ccdf_nn_cross_shell(
    d: f64,
    obs: &ShellGeometry,
    target: &ShellGeometry,
    n_sat: u64,
    earth: &EarthGeometry,
) -> Result<f64> {
    ShellCcdf::nn_cross_shell(obs, target, n_sat, earth)?.ccdf(d)
}

pub fn cdf_combined(d: f64, spec: &ConstellationSpec, obs: ObservationPoint) -> Result<f64> {
    DistanceDistribution::new(spec, obs)?.cdf(d)
}

pub fn visibility_probability(spec: &ConstellationSpec, obs: ObservationPoint) -> Result<f64> {
    Ok(DistanceDistribution::new(spec, obs)?.visibility_probability())
}

pub fn quantile(q: f64, spec: &ConstellationSpec, obs: ObservationPoint) -> Result<f64> {
    DistanceDistribution::new(spec, obs)?.quantile(q)
}

pub fn conditional_mean_distance(spec: &ConstellationSpec, obs: ObservationPoint) -> Result<f64> {
    DistanceDistribution::new(spec, obs)?.conditional_mean()
}

/// Maximum line-of-sight distance from `obs` to every shell, in shell order.
pub fn d_max_per_shell(spec: &ConstellationSpec, obs: ObservationPoint) -> Result<Vec<f64>> {
    let earth = spec.earth();
    let observer = match obs {
        ObservationPoint::EarthSurface => ObserverGeometry::ground(&earth),
        ObservationPoint::OnShell(i) => ObserverGeometry::on_shell(&spec.shell_geometry(i)?),
    };
    (1..=spec.num_shells())
        .map(|k| Ok(geometry::d_max(&observer, &spec.shell_geometry(k)?, &earth)))
        .collect()
}

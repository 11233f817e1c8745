//! Monte-Carlo simulation of binomial point processes on concentric shells.
//!
//! Every trial places the observer on the polar axis, at `(0, 0, r_e)` for a
//! ground observer or `(0, 0, r_i)` for a point of shell `i`, and draws the
//! points of each shell with colatitudes measured from that axis. The
//! colatitude-uniform sampler is not rotation invariant, so the axis choice is
//! part of the model: it is the law under which the closed forms in
//! [`crate::analytic`] are exact. The area-uniform sampler is the usual
//! uniform-on-the-sphere law and is kept as a diagnostic.
//!
//! Each trial draws from its own ChaCha8 stream keyed by `(seed, trial)`, so a
//! run is reproducible no matter how trials are spread across workers.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::Scenario;
use crate::constellation::{ConstellationSpec, ObservationPoint};
use crate::error::{Error, Result};
use crate::geometry::{self, EarthGeometry, ShellGeometry, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SamplerKind {
    /// Colatitude uniform on `[0, π]`, azimuth uniform on `[0, 2π)`.
    #[default]
    ColatitudeUniform,
    /// `cos(colatitude)` uniform on `[−1, 1]`, azimuth uniform on `[0, 2π)`.
    AreaUniform,
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SamplerKind::ColatitudeUniform => "colatitude",
            SamplerKind::AreaUniform => "area",
        })
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "colatitude" => Ok(SamplerKind::ColatitudeUniform),
            "area" => Ok(SamplerKind::AreaUniform),
            other => Err(Error::Config(format!(
                "unknown sampler {other:?}, expected `colatitude` or `area`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationConfig {
    trials: u64,
    seed: u64,
    sampler: SamplerKind,
    workers: Option<usize>,
}

impl SimulationConfig {
    pub fn new(trials: u64, seed: u64, sampler: SamplerKind) -> Result<Self> {
        if trials == 0 {
            return Err(Error::NoTrials);
        }
        Ok(Self { trials, seed, sampler, workers: None })
    }

    /// Runs on a dedicated pool of `workers` threads instead of the global one.
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers.max(1));
        self
    }

    pub fn trials(&self) -> u64 {
        self.trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn sampler(&self) -> SamplerKind {
        self.sampler
    }

    pub fn workers(&self) -> Option<usize> {
        self.workers
    }
}

/// Orthonormal frame whose third axis is the colatitude reference.
#[derive(Debug, Clone, Copy)]
struct Frame {
    u: Vec3,
    v: Vec3,
    w: Vec3,
}

const POLAR_FRAME: Frame = Frame {
    u: [1.0, 0.0, 0.0],
    v: [0.0, 1.0, 0.0],
    w: [0.0, 0.0, 1.0],
};

impl Frame {
    fn about(axis: Vec3) -> Self {
        let n = geometry::norm(&axis);
        let w = [axis[0] / n, axis[1] / n, axis[2] / n];
        // pick the coordinate axis least aligned with w as a helper
        let helper = if w[0].abs() <= w[1].abs() && w[0].abs() <= w[2].abs() {
            [1.0, 0.0, 0.0]
        } else if w[1].abs() <= w[2].abs() {
            [0.0, 1.0, 0.0]
        } else {
            [0.0, 0.0, 1.0]
        };
        let u = cross(&helper, &w);
        let un = geometry::norm(&u);
        let u = [u[0] / un, u[1] / un, u[2] / un];
        let v = cross(&w, &u);
        Self { u, v, w }
    }
}

fn cross(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Cosine of a colatitude drawn under `sampler`.
#[inline]
fn draw_cos_colatitude<R: Rng + ?Sized>(sampler: SamplerKind, rng: &mut R) -> f64 {
    match sampler {
        SamplerKind::ColatitudeUniform => (PI * rng.random::<f64>()).cos(),
        SamplerKind::AreaUniform => 2.0 * rng.random::<f64>() - 1.0,
    }
}

/// Point at colatitude `acos(cos_phi)` and azimuth `2π·u_theta` in `frame`.
#[inline]
fn place(radius: f64, cos_phi: f64, u_theta: f64, frame: &Frame) -> Vec3 {
    let sin_phi = (1.0 - cos_phi * cos_phi).max(0.0).sqrt();
    let (sin_theta, cos_theta) = (2.0 * PI * u_theta).sin_cos();
    let a = radius * sin_phi * cos_theta;
    let b = radius * sin_phi * sin_theta;
    let c = radius * cos_phi;
    let Frame { u, v, w } = frame;
    [
        a * u[0] + b * v[0] + c * w[0],
        a * u[1] + b * v[1] + c * w[1],
        a * u[2] + b * v[2] + c * w[2],
    ]
}

#[inline]
fn sample_point<R: Rng + ?Sized>(radius: f64, sampler: SamplerKind, frame: &Frame, rng: &mut R) -> Vec3 {
    let cos_phi = draw_cos_colatitude(sampler, rng);
    let u_theta = rng.random::<f64>();
    place(radius, cos_phi, u_theta, frame)
}

/// Draws `n` independent points on `shell` with colatitudes measured from `axis`.
pub fn sample_shell<R: Rng + ?Sized>(
    shell: &ShellGeometry,
    n: usize,
    sampler: SamplerKind,
    axis: Vec3,
    rng: &mut R,
) -> Vec<Vec3> {
    let frame = Frame::about(axis);
    (0..n).map(|_| sample_point(shell.radius(), sampler, &frame, rng)).collect()
}

/// One draw of every shell together with the observer position.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    /// Points per shell, in shell order. For a nearest-neighbor observer its
    /// own shell holds only the other `N_i − 1` points.
    pub shells: Vec<Vec<Vec3>>,
    pub observer: Vec3,
    pub scenario: Scenario,
}

/// Per-shell radius and number of points to draw for one trial.
fn draw_plan(spec: &ConstellationSpec, obs: ObservationPoint) -> Result<(f64, Vec<(f64, u64)>)> {
    spec.validate()?;
    obs.validate(spec)?;
    let observer_radius = match obs {
        ObservationPoint::EarthSurface => spec.earth_radius_km,
        ObservationPoint::OnShell(i) => spec.shell_geometry(i)?.radius(),
    };
    let plan = (1..=spec.num_shells())
        .map(|k| {
            let radius = spec.shell_geometry(k)?.radius();
            let n = spec.shell(k)?.num_satellites;
            let n = if obs == ObservationPoint::OnShell(k) { n - 1 } else { n };
            Ok((radius, n))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((observer_radius, plan))
}

fn scenario_of(obs: ObservationPoint) -> Scenario {
    match obs {
        ObservationPoint::EarthSurface => Scenario::Contact,
        ObservationPoint::OnShell(i) => Scenario::NearestNeighbor(i),
    }
}

pub fn sample_realization<R: Rng + ?Sized>(
    spec: &ConstellationSpec,
    obs: ObservationPoint,
    sampler: SamplerKind,
    rng: &mut R,
) -> Result<Realization> {
    let (observer_radius, plan) = draw_plan(spec, obs)?;
    let shells = plan
        .iter()
        .map(|&(radius, n)| {
            (0..n).map(|_| sample_point(radius, sampler, &POLAR_FRAME, rng)).collect()
        })
        .collect();
    Ok(Realization {
        shells,
        observer: [0.0, 0.0, observer_radius],
        scenario: scenario_of(obs),
    })
}

/// Distance from the observer to the closest point with line of sight, or
/// `None` when every point is hidden by the Earth.
pub fn nearest_visible_distance(real: &Realization, earth: &EarthGeometry) -> Option<f64> {
    let mut best = f64::INFINITY;
    for p in real.shells.iter().flatten() {
        let d = geometry::distance(&real.observer, p);
        if d < best && geometry::segment_clears_earth(&real.observer, p, earth) {
            best = d;
        }
    }
    best.is_finite().then_some(best)
}

/// RNG stream for one trial, keyed by `(seed, trial)` only.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let key = splitmix64(splitmix64(seed) ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    ChaCha8Rng::seed_from_u64(key)
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Same draws as [`sample_realization`] followed by
/// [`nearest_visible_distance`], without materializing the points: the
/// chord length follows from the colatitude alone, and a point is placed in
/// space only when it would improve on the current nearest one.
fn simulate_trial(
    observer_radius: f64,
    plan: &[(f64, u64)],
    sampler: SamplerKind,
    earth: &EarthGeometry,
    rng: &mut ChaCha8Rng,
) -> Option<f64> {
    let observer = [0.0, 0.0, observer_radius];
    let mut best = f64::INFINITY;
    let mut best_sq = f64::INFINITY;
    for &(radius, n) in plan {
        let sum_sq = observer_radius * observer_radius + radius * radius;
        let cross = 2.0 * observer_radius * radius;
        for _ in 0..n {
            let cos_phi = draw_cos_colatitude(sampler, rng);
            let u_theta = rng.random::<f64>();
            let d_sq = sum_sq - cross * cos_phi;
            if d_sq < best_sq {
                let p = place(radius, cos_phi, u_theta, &POLAR_FRAME);
                if geometry::segment_clears_earth(&observer, &p, earth) {
                    best_sq = d_sq;
                    best = geometry::distance(&observer, &p);
                }
            }
        }
    }
    best.is_finite().then_some(best)
}

pub fn run_experiment(
    spec: &ConstellationSpec,
    obs: ObservationPoint,
    sim: &SimulationConfig,
) -> Result<EmpiricalCdf> {
    let (observer_radius, plan) = draw_plan(spec, obs)?;
    let earth = spec.earth();
    let run = || {
        (0..sim.trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = trial_rng(sim.seed, t);
                simulate_trial(observer_radius, &plan, sim.sampler, &earth, &mut rng)
            })
            .collect::<Vec<_>>()
    };
    let outcomes = match sim.workers {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(run),
        None => run(),
    };
    Ok(EmpiricalCdf::from_outcomes(outcomes))
}

/// Empirical distribution of simulated distances. Trials with no visible
/// point are counted separately rather than stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EmpiricalCdf {
    distances: Vec<f64>,
    n_infinite: u64,
    n_total: u64,
}

impl EmpiricalCdf {
    pub fn from_outcomes<I: IntoIterator<Item = Option<f64>>>(outcomes: I) -> Self {
        let mut distances = Vec::new();
        let mut n_infinite = 0;
        let mut n_total = 0;
        for o in outcomes {
            n_total += 1;
            match o {
                Some(d) => distances.push(d),
                None => n_infinite += 1,
            }
        }
        distances.sort_by(f64::total_cmp);
        Self { distances, n_infinite, n_total }
    }

    /// Combines two independent runs; order of merging does not matter.
    pub fn merge(mut self, other: EmpiricalCdf) -> Self {
        self.distances.extend(other.distances);
        self.distances.sort_by(f64::total_cmp);
        self.n_infinite += other.n_infinite;
        self.n_total += other.n_total;
        self
    }

    /// `#{samples ≤ d} / n_total`.
    pub fn eval(&self, d: f64) -> f64 {
        if self.n_total == 0 {
            return 0.0;
        }
        self.distances.partition_point(|&x| x <= d) as f64 / self.n_total as f64
    }

    /// Sorted finite distances.
    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn n_infinite(&self) -> u64 {
        self.n_infinite
    }

    pub fn n_total(&self) -> u64 {
        self.n_total
    }

    pub fn is_empty(&self) -> bool {
        self.n_total == 0
    }

    /// Fraction of trials with no visible point.
    pub fn infinite_fraction(&self) -> f64 {
        if self.n_total == 0 {
            0.0
        } else {
            self.n_infinite as f64 / self.n_total as f64
        }
    }

    pub fn mean_finite(&self) -> Option<f64> {
        if self.distances.is_empty() {
            return None;
        }
        Some(self.distances.iter().sum::<f64>() / self.distances.len() as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::preset;
    use std::f64::consts::FRAC_PI_4;

    fn earth() -> EarthGeometry {
        EarthGeometry::default()
    }

    #[test]
    fn empty_shell_sample() {
        let s = ShellGeometry::new(550.0, &earth()).unwrap();
        let mut rng = trial_rng(1, 2);
        assert!(sample_shell(&s, 0, SamplerKind::AreaUniform, [0.0, 0.0, 1.0], &mut rng).is_empty());
    }

    #[test]
    fn points_lie_on_their_sphere() {
        let s = ShellGeometry::new(1234.5, &earth()).unwrap();
        let mut rng = trial_rng(7, 0);
        for sampler in [SamplerKind::ColatitudeUniform, SamplerKind::AreaUniform] {
            for p in sample_shell(&s, 2000, sampler, [0.3, -2.0, 0.7], &mut rng) {
                assert!((geometry::norm(&p) - s.radius()).abs() <= 1e-9 * s.radius());
            }
        }
    }

    #[test]
    fn sampler_laws_about_arbitrary_axis() {
        let s = ShellGeometry::new(1000.0, &earth()).unwrap();
        let axis = [1.0, 2.0, -2.0];
        let unit = [1.0 / 3.0, 2.0 / 3.0, -2.0 / 3.0];
        let n = 1_000_000;
        for (sampler, expected) in [
            (SamplerKind::ColatitudeUniform, 0.25),
            (SamplerKind::AreaUniform, (1.0 - FRAC_PI_4.cos()) / 2.0),
        ] {
            let mut rng = trial_rng(42, sampler as u64);
            let pts = sample_shell(&s, n, sampler, axis, &mut rng);
            let r = s.radius();
            let cos_limit = FRAC_PI_4.cos();
            let zs: Vec<f64> = pts.iter().map(|p| geometry::dot(p, &unit) / r).collect();
            let frac = zs.iter().filter(|&&z| z > cos_limit).count() as f64 / n as f64;
            let sigma = (expected * (1.0 - expected) / n as f64).sqrt();
            assert!((frac - expected).abs() < 3.0 * sigma, "{sampler}: {frac} vs {expected}");

            let mean = zs.iter().sum::<f64>() / n as f64;
            let var = zs.iter().map(|z| (z - mean).powi(2)).sum::<f64>() / n as f64;
            assert!(mean.abs() < 4.0 * (var / n as f64).sqrt(), "{sampler}: mean {mean}");
        }
    }

    #[test]
    fn nearest_visible_cases() {
        let e = earth();
        let re = e.radius();
        let overhead = Realization {
            shells: vec![vec![[0.0, 0.0, re + 700.0]]],
            observer: [0.0, 0.0, re],
            scenario: Scenario::Contact,
        };
        let d = nearest_visible_distance(&overhead, &e).unwrap();
        assert!((d - 700.0).abs() < 1e-9);

        let rk = re + 550.0;
        let sideways = Realization {
            shells: vec![vec![[rk, 0.0, 0.0]]],
            observer: [0.0, 0.0, re],
            scenario: Scenario::Contact,
        };
        assert_eq!(nearest_visible_distance(&sideways, &e), None);

        let empty = Realization {
            shells: vec![vec![], vec![]],
            observer: [0.0, 0.0, re],
            scenario: Scenario::Contact,
        };
        assert_eq!(nearest_visible_distance(&empty, &e), None);

        // a hidden point closer than a visible one is skipped
        let obs_shell = ShellGeometry::new(900.0, &e).unwrap();
        let low = ShellGeometry::new(500.0, &e).unwrap();
        let horizon = geometry::d_max_cross(&obs_shell, &low, &e);
        let phi = geometry::colatitude_from_chord(horizon + 100.0, obs_shell.radius(), low.radius());
        let hidden = [low.radius() * phi.sin(), 0.0, low.radius() * phi.cos()];
        let observer = [0.0, 0.0, obs_shell.radius()];
        let far_visible = [0.0, 0.0, obs_shell.radius() + horizon + 400.0];
        assert!(!geometry::segment_clears_earth(&observer, &hidden, &e));
        let real = Realization {
            shells: vec![vec![hidden], vec![far_visible]],
            observer,
            scenario: Scenario::NearestNeighbor(1),
        };
        let d = nearest_visible_distance(&real, &e).unwrap();
        assert!((d - (horizon + 400.0)).abs() < 1e-9);
    }

    #[test]
    fn streaming_trial_matches_materialized_realization() {
        let spec = preset("fig4").unwrap();
        let e = spec.earth();
        for obs in [ObservationPoint::EarthSurface, ObservationPoint::OnShell(2)] {
            let (r_obs, plan) = draw_plan(&spec, obs).unwrap();
            for t in 0..20 {
                let real =
                    sample_realization(&spec, obs, SamplerKind::ColatitudeUniform, &mut trial_rng(5, t))
                        .unwrap();
                let expected = nearest_visible_distance(&real, &e);
                let got = simulate_trial(
                    r_obs,
                    &plan,
                    SamplerKind::ColatitudeUniform,
                    &e,
                    &mut trial_rng(5, t),
                );
                match (got, expected) {
                    (Some(a), Some(b)) => assert!((a - b).abs() < 1e-9, "{a} vs {b}"),
                    (a, b) => assert_eq!(a, b),
                }
            }
        }
        let real = sample_realization(
            &spec,
            ObservationPoint::OnShell(2),
            SamplerKind::AreaUniform,
            &mut trial_rng(0, 0),
        )
        .unwrap();
        let sizes: Vec<usize> = real.shells.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![500, 399, 325, 280]);
        assert_eq!(real.observer, [0.0, 0.0, 6371.0 + 1325.0]);
    }

    #[test]
    fn empty_constellation_gives_infinite_outcome() {
        let spec = ConstellationSpec::from_lists("none", &[700.0, 900.0], &[0, 0]).unwrap();
        let sim = SimulationConfig::new(1, 0, SamplerKind::ColatitudeUniform).unwrap();
        let emp = run_experiment(&spec, ObservationPoint::EarthSurface, &sim).unwrap();
        assert_eq!((emp.n_total(), emp.n_infinite()), (1, 1));
        assert!(emp.distances().is_empty());
        assert_eq!(SimulationConfig::new(0, 0, SamplerKind::AreaUniform), Err(Error::NoTrials));
    }

    #[test]
    fn runs_are_reproducible_across_worker_counts() {
        let spec = preset("fig3-circle").unwrap();
        let sim = SimulationConfig::new(3000, 99, SamplerKind::ColatitudeUniform).unwrap();
        let a = run_experiment(&spec, ObservationPoint::EarthSurface, &sim).unwrap();
        let b = run_experiment(&spec, ObservationPoint::EarthSurface, &sim.with_workers(3)).unwrap();
        assert_eq!(a, b);
        let other = SimulationConfig::new(3000, 100, SamplerKind::ColatitudeUniform).unwrap();
        let c = run_experiment(&spec, ObservationPoint::EarthSurface, &other).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn finite_outcomes_stay_inside_support() {
        let spec = preset("fig4").unwrap();
        let sim = SimulationConfig::new(500, 3, SamplerKind::ColatitudeUniform).unwrap();
        for obs in [ObservationPoint::EarthSurface, ObservationPoint::OnShell(4)] {
            let dist = crate::analytic::DistanceDistribution::new(&spec, obs).unwrap();
            let emp = run_experiment(&spec, obs, &sim).unwrap();
            for &d in emp.distances() {
                assert!(d >= dist.min_onset() - 1e-9 && d <= dist.support_top() + 1e-9);
            }
        }
    }

    #[test]
    fn empirical_cdf_eval_and_merge() {
        let a = EmpiricalCdf::from_outcomes([Some(3.0), None, Some(1.0), Some(2.0)]);
        assert_eq!(a.distances(), &[1.0, 2.0, 3.0]);
        assert_eq!(a.eval(0.5), 0.0);
        assert_eq!(a.eval(2.0), 0.5);
        assert_eq!(a.eval(f64::MAX), 0.75);
        assert_eq!(a.infinite_fraction(), 0.25);
        let b = EmpiricalCdf::from_outcomes([None, Some(1.5)]);
        let ab = a.clone().merge(b.clone());
        assert_eq!(ab, b.merge(a));
        assert_eq!(ab.n_total(), 6);
        assert_eq!(ab.n_infinite(), 2);
        assert_eq!(EmpiricalCdf::default().eval(1.0), 0.0);
    }

    #[test]
    fn sampler_names() {
        assert_eq!("area".parse::<SamplerKind>().unwrap(), SamplerKind::AreaUniform);
        assert_eq!(SamplerKind::ColatitudeUniform.to_string(), "colatitude");
        assert!("gauss".parse::<SamplerKind>().is_err());
    }
}

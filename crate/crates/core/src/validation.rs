//! Kolmogorov–Smirnov comparison of simulated and closed-form distributions,
//! plus tabulation of the analytic curves.

use std::io::{self, Write};

use crate::analytic::DistanceDistribution;
use crate::constellation::{ConstellationSpec, ObservationPoint};
use crate::error::{Error, Result};
use crate::montecarlo::{self, EmpiricalCdf, SamplerKind, SimulationConfig};

/// KS threshold for a run of [`REFERENCE_TRIALS`] trials.
pub const DEFAULT_KS_THRESHOLD: f64 = 0.01;
pub const REFERENCE_TRIALS: u64 = 100_000;
/// Allowed deviation of the no-visibility fraction, in binomial standard errors.
pub const VISIBILITY_SIGMAS: f64 = 4.0;
/// Spacing of the fixed comparison grid.
pub const GRID_STEP_KM: f64 = 1.0;

/// Default KS threshold for `trials` trials, scaled as `1/√trials`.
pub fn scaled_threshold(trials: u64) -> f64 {
    DEFAULT_KS_THRESHOLD * (REFERENCE_TRIALS as f64 / trials.max(1) as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct KsReport {
    /// Largest `|F_emp − F|` over the grid and both sides of every jump.
    pub statistic: f64,
    /// Distance where the statistic is attained.
    pub location: f64,
    pub threshold: f64,
    pub trials: u64,
    pub grid: Vec<f64>,
    pub pass: bool,
}

pub fn ks_compare(
    emp: &EmpiricalCdf,
    spec: &ConstellationSpec,
    obs: ObservationPoint,
    threshold: f64,
) -> Result<KsReport> {
    ks_against(emp, &DistanceDistribution::new(spec, obs)?, threshold)
}

pub fn ks_against(
    emp: &EmpiricalCdf,
    dist: &DistanceDistribution,
    threshold: f64,
) -> Result<KsReport> {
    if emp.is_empty() {
        return Err(Error::EmptyEmpirical);
    }
    let n = emp.n_total() as f64;
    let xs = emp.distances();
    let mut statistic = 0.0f64;
    let mut location = 0.0;
    let mut consider = |gap: f64, at: f64| {
        if gap > statistic {
            statistic = gap;
            location = at;
        }
    };

    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        let f = dist.cdf(x)?;
        consider((i as f64 / n - f).abs(), x);
        consider((j as f64 / n - f).abs(), x);
        i = j;
    }

    let top = dist.support_top();
    let steps = (top / GRID_STEP_KM).ceil() as usize;
    let grid: Vec<f64> = (0..=steps).map(|k| (k as f64 * GRID_STEP_KM).min(top)).collect();
    for &d in &grid {
        consider((emp.eval(d) - dist.cdf(d)?).abs(), d);
    }

    Ok(KsReport {
        statistic,
        location,
        threshold,
        trials: emp.n_total(),
        grid,
        pass: statistic <= threshold,
    })
}

/// Observed vs predicted fraction of trials in which nothing is visible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityCheck {
    pub expected_blind: f64,
    pub observed_blind: f64,
    pub sigma: f64,
    pub pass: bool,
}

pub fn visibility_check(emp: &EmpiricalCdf, dist: &DistanceDistribution) -> VisibilityCheck {
    let p = 1.0 - dist.visibility_probability();
    let observed = emp.infinite_fraction();
    let sigma = (p * (1.0 - p) / emp.n_total().max(1) as f64).sqrt();
    VisibilityCheck {
        expected_blind: p,
        observed_blind: observed,
        sigma,
        pass: (observed - p).abs() <= VISIBILITY_SIGMAS * sigma,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub ks: KsReport,
    pub visibility: VisibilityCheck,
    pub sampler: SamplerKind,
    pub pass: bool,
}

/// Simulates `sim.trials()` trials and checks them against the closed form.
pub fn validate(
    spec: &ConstellationSpec,
    obs: ObservationPoint,
    sim: &SimulationConfig,
    threshold: f64,
) -> Result<ValidationReport> {
    let dist = DistanceDistribution::new(spec, obs)?;
    let emp = montecarlo::run_experiment(spec, obs, sim)?;
    let ks = ks_against(&emp, &dist, threshold)?;
    let visibility = visibility_check(&emp, &dist);
    let pass = ks.pass && visibility.pass;
    Ok(ValidationReport { ks, visibility, sampler: sim.sampler(), pass })
}

/// `steps + 1` evenly spaced distances from `dmin` to `dmax`.
pub fn linear_grid(dmin: f64, dmax: f64, steps: usize) -> Vec<f64> {
    if steps == 0 {
        return vec![dmin];
    }
    (0..=steps)
        .map(|k| {
            if k == steps {
                dmax
            } else {
                dmin + (dmax - dmin) * k as f64 / steps as f64
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub d: f64,
    pub cdf: f64,
    pub shell_ccdf: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
    pub num_shells: usize,
}

impl SweepTable {
    /// Writes `d_km,cdf` rows, with one `ccdf_shell_k` column per shell when
    /// `per_shell` is set.
    pub fn write_csv<W: Write + ?Sized>(&self, out: &mut W, per_shell: bool) -> io::Result<()> {
        write!(out, "d_km,cdf")?;
        if per_shell {
            for k in 1..=self.num_shells {
                write!(out, ",ccdf_shell_{k}")?;
            }
        }
        writeln!(out)?;
        for row in &self.rows {
            write!(out, "{},{}", row.d, row.cdf)?;
            if per_shell {
                for v in &row.shell_ccdf {
                    write!(out, ",{v}")?;
                }
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

pub fn sweep_report(
    spec: &ConstellationSpec,
    obs: ObservationPoint,
    d_grid: &[f64],
) -> Result<SweepTable> {
    if d_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(Error::UnsortedGrid);
    }
    let dist = DistanceDistribution::new(spec, obs)?;
    let rows = d_grid
        .iter()
        .map(|&d| {
            Ok(SweepRow {
                d,
                cdf: dist.cdf(d)?,
                shell_ccdf: dist.shell_ccdfs(d)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { rows, num_shells: spec.num_shells() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constellation::preset;

    #[test]
    fn threshold_scaling() {
        assert_eq!(scaled_threshold(REFERENCE_TRIALS), DEFAULT_KS_THRESHOLD);
        assert!((scaled_threshold(25_000) - 0.02).abs() < 1e-15);
    }

    #[test]
    fn ks_of_exact_quantiles_is_tiny() {
        // a deterministic "sample" at the (k − ½)/n quantiles differs from F by ½n
        let spec = preset("fig3-circle").unwrap();
        let dist = DistanceDistribution::new(&spec, ObservationPoint::EarthSurface).unwrap();
        let n = 2000u64;
        let v = dist.visibility_probability();
        let finite = (v * n as f64).floor() as u64;
        let outcomes = (0..n).map(|k| {
            (k < finite).then(|| dist.quantile((k as f64 + 0.5) / n as f64).unwrap())
        });
        let emp = EmpiricalCdf::from_outcomes(outcomes);
        let report = ks_against(&emp, &dist, 0.01).unwrap();
        assert!(report.statistic <= 1.0 / n as f64 + 1e-6, "{}", report.statistic);
        assert!(report.pass);
        assert_eq!(report.trials, n);
        assert_eq!(*report.grid.last().unwrap(), dist.support_top());
    }

    #[test]
    fn ks_rejects_empty_and_detects_shift() {
        let spec = preset("oneweb").unwrap();
        let obs = ObservationPoint::EarthSurface;
        assert_eq!(
            ks_compare(&EmpiricalCdf::default(), &spec, obs, 0.01),
            Err(Error::EmptyEmpirical)
        );
        let dist = DistanceDistribution::new(&spec, obs).unwrap();
        let shifted = EmpiricalCdf::from_outcomes(
            (0..1000).map(|k| Some(dist.quantile(k as f64 / 1000.0 * 0.9).unwrap() + 200.0)),
        );
        let r = ks_compare(&shifted, &spec, obs, 0.01).unwrap();
        assert!(!r.pass && r.statistic > 0.1);
    }

    #[test]
    fn visibility_check_bounds() {
        let spec = preset("oneweb").unwrap();
        let dist = DistanceDistribution::new(&spec, ObservationPoint::EarthSurface).unwrap();
        let p = 1.0 - dist.visibility_probability();
        let n = 10_000u64;
        let blind = (p * n as f64).round() as u64;
        let emp = EmpiricalCdf::from_outcomes((0..n).map(|k| (k >= blind).then_some(1500.0)));
        assert!(visibility_check(&emp, &dist).pass);
        let all_blind = EmpiricalCdf::from_outcomes((0..n).map(|_| None));
        assert!(!visibility_check(&all_blind, &dist).pass);
    }

    #[test]
    fn sweep_rows() {
        let spec = preset("oneweb").unwrap();
        let obs = ObservationPoint::EarthSurface;
        let t = sweep_report(&spec, obs, &[0.0]).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].cdf, 0.0);
        assert_eq!(sweep_report(&spec, obs, &[5.0, 1.0]), Err(Error::UnsortedGrid));

        let t = sweep_report(&spec, obs, &[1199.0, 1200.0, 1201.0, 1400.0]).unwrap();
        let col: Vec<f64> = t.rows.iter().map(|r| r.shell_ccdf[0]).collect();
        assert_eq!(&col[..2], &[1.0, 1.0]);
        assert!(col[2] < 1.0);
        assert!((t.rows[3].cdf - 0.916_937_782_674_351).abs() < 1e-12);

        let mut buf = Vec::new();
        t.write_csv(&mut buf, true).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("d_km,cdf,ccdf_shell_1\n1199,0,1\n"));
        assert_eq!(text.lines().count(), 5);
    }

    #[test]
    fn grid_construction() {
        let g = linear_grid(1200.0, 3500.0, 100);
        assert_eq!(g.len(), 101);
        assert_eq!(g[0], 1200.0);
        assert_eq!(g[100], 3500.0);
        assert_eq!(linear_grid(3.0, 9.0, 0), vec![3.0]);
    }
}

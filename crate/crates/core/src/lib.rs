//! Exact contact and nearest-neighbor distance distributions for binomial
//! point processes on concentric spheres, with a Monte-Carlo simulator that
//! accounts for Earth blockage of the line of sight.
//!
//! Typical use:
//!
//! ```
//! use sphere_bpp::{constellation, DistanceDistribution, ObservationPoint};
//!
//! let spec = constellation::preset("oneweb").unwrap();
//! let dist = DistanceDistribution::new(&spec, ObservationPoint::EarthSurface).unwrap();
//! let f = dist.cdf(1400.0).unwrap();
//! assert!(f > 0.9 && f < 0.95);
//! ```

pub mod analytic;
pub mod cli;
pub mod constellation;
pub mod error;
pub mod geometry;
pub mod montecarlo;
mod quadrature;
pub mod validation;

pub use analytic::{DistanceDistribution, Scenario, ShellCcdf, ShellCcdfKind};
pub use constellation::{parse_config, preset, ConstellationSpec, ObservationPoint, ShellSpec};
pub use error::{Error, Result};
pub use geometry::{EarthGeometry, ShellGeometry};
pub use montecarlo::{run_experiment, EmpiricalCdf, SamplerKind, SimulationConfig};
pub use validation::{ks_compare, KsReport};

//! Double-slit interference including inter-slit (non-classical) paths.
//!
//! The crate evaluates the classical single-slit propagators and the
//! two-transit inter-slit propagator by composite quadrature, assembles the
//! five which-way detector intensity profiles, the Born-rule test parameter
//! `I_AB`, the triple-slit Sorkin parameter, and the finite-efficiency
//! detector model together with its inversion.
//!
//! ```
//! use whichway::{
//!     compute_wave_components, perfect_distributions, born_parameter, PathSet,
//!     QuadratureSpec, ScreenGrid, SlitGeometry,
//! };
//!
//! let geom = SlitGeometry::new(1e-3, 1e-3, 2000e-9, 500e-9, 810e-9).unwrap();
//! let grid = ScreenGrid::new(-1e-3, 1e-3, 21, true).unwrap();
//! let wc = compute_wave_components(&geom, &grid, &QuadratureSpec::default(), PathSet::All).unwrap();
//! let sd = perfect_distributions(&wc).unwrap();
//! let i_ab = born_parameter(&sd);
//! assert!(i_ab.iter().all(|v| v.abs() < 1e-12 * sd.norm));
//! ```

pub mod bessel;
pub mod cli;
pub mod config;
pub mod detection;
mod error;
pub mod geometry;
pub mod imperfect;
pub mod propagators;
pub mod quadrature;

pub use detection::{
    born_parameter, delta1, delta2, perfect_distributions, sorkin_parameter, triple_slit_probabilities,
    SetupDistributions, TripleSlitProbabilities, WaveComponents,
};
pub use error::{Error, Result};
pub use geometry::{
    Aperture, Mode, QuadratureSpec, Scheme, ScreenGrid, Slit, SlitGeometry, TripleSlitGeometry,
};
pub use imperfect::{
    delta_av, imperfect_from_perfect, imperfect_general, invert_imperfect, DetectorOverlapModel,
    DetectorOverlaps, DetectorSetup, ImperfectDistributions,
};
pub use propagators::{
    classical_propagator_exact, classical_propagator_fraunhofer, compute_wave_components,
    free_propagator, nonclassical_propagator_exact, nonclassical_propagator_stationary, ComplexAmplitude,
    PathSet, Point,
};

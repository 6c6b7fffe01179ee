//! Experimental geometry, screen sampling and quadrature settings.
//!
//! Lengths are meters throughout. The source sits at `(-S, 0)`, the slit
//! plane is `x = 0` and the screen is the line `x = D`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slit label for the two-slit layout. `A` is the upper slit (`y > 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slit {
    A,
    B,
}

impl Slit {
    pub fn other(self) -> Slit {
        match self {
            Slit::A => Slit::B,
            Slit::B => Slit::A,
        }
    }
}

/// Closed interval `[lo, hi]` of an opening in the slit plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aperture {
    pub lo: f64,
    pub hi: f64,
}

impl Aperture {
    pub fn centered(center: f64, width: f64) -> Self {
        Aperture { lo: center - 0.5 * width, hi: center + 0.5 * width }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn mirrored(&self) -> Self {
        Aperture { lo: -self.hi, hi: -self.lo }
    }

    /// Smallest distance between points of two apertures, zero if they touch or overlap.
    pub fn gap(&self, other: &Aperture) -> f64 {
        (other.lo - self.hi).max(self.lo - other.hi).max(0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlitGeometry {
    source_distance: f64,
    screen_distance: f64,
    slit_separation: f64,
    slit_width: f64,
    wavelength: f64,
    wavenumber: f64,
}

fn require_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidGeometry(format!("{name} must be positive and finite, got {value}")))
    }
}

impl SlitGeometry {
    /// Validates and builds a two-slit geometry.
    ///
    /// The slit separation is center-to-center and must exceed the slit
    /// width so the two openings are disjoint.
    pub fn new(
        source_distance: f64,
        screen_distance: f64,
        slit_separation: f64,
        slit_width: f64,
        wavelength: f64,
    ) -> Result<Self> {
        require_positive("source_distance", source_distance)?;
        require_positive("screen_distance", screen_distance)?;
        require_positive("slit_separation", slit_separation)?;
        require_positive("slit_width", slit_width)?;
        require_positive("wavelength", wavelength)?;
        if slit_separation <= slit_width {
            return Err(Error::InvalidGeometry(format!(
                "overlapping slits: separation {slit_separation} must exceed width {slit_width}"
            )));
        }
        Ok(SlitGeometry {
            source_distance,
            screen_distance,
            slit_separation,
            slit_width,
            wavelength,
            wavenumber: 2.0 * PI / wavelength,
        })
    }

    pub fn source_distance(&self) -> f64 {
        self.source_distance
    }

    pub fn screen_distance(&self) -> f64 {
        self.screen_distance
    }

    pub fn slit_separation(&self) -> f64 {
        self.slit_separation
    }

    pub fn slit_width(&self) -> f64 {
        self.slit_width
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn wavenumber(&self) -> f64 {
        self.wavenumber
    }

    pub fn aperture(&self, slit: Slit) -> Aperture {
        let c = 0.5 * self.slit_separation;
        match slit {
            Slit::A => Aperture::centered(c, self.slit_width),
            Slit::B => Aperture::centered(-c, self.slit_width),
        }
    }
}

/// Three equal-width slits sharing the source/screen distances of a base geometry.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleSlitGeometry {
    base: SlitGeometry,
    apertures: [Aperture; 3],
}

impl TripleSlitGeometry {
    /// Slits `A`, `B`, `C` centered at `+d`, `0`, `-d`.
    pub fn symmetric(
        source_distance: f64,
        screen_distance: f64,
        slit_separation: f64,
        slit_width: f64,
        wavelength: f64,
    ) -> Result<Self> {
        Self::with_centers(
            source_distance,
            screen_distance,
            slit_width,
            wavelength,
            [slit_separation, 0.0, -slit_separation],
        )
    }

    pub fn with_centers(
        source_distance: f64,
        screen_distance: f64,
        slit_width: f64,
        wavelength: f64,
        centers: [f64; 3],
    ) -> Result<Self> {
        if centers.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidGeometry("slit centers must be finite".into()));
        }
        let apertures = centers.map(|c| Aperture::centered(c, slit_width));
        let mut min_spacing = f64::INFINITY;
        for i in 0..3 {
            for j in (i + 1)..3 {
                if apertures[i].gap(&apertures[j]) <= 0.0 {
                    return Err(Error::InvalidGeometry(format!(
                        "overlapping slits: centers {} and {} closer than width {slit_width}",
                        centers[i], centers[j]
                    )));
                }
                min_spacing = min_spacing.min((centers[i] - centers[j]).abs());
            }
        }
        let base = SlitGeometry::new(source_distance, screen_distance, min_spacing, slit_width, wavelength)?;
        Ok(TripleSlitGeometry { base, apertures })
    }

    pub fn base(&self) -> &SlitGeometry {
        &self.base
    }

    pub fn apertures(&self) -> &[Aperture; 3] {
        &self.apertures
    }

    /// True when the layout maps onto itself under `y -> -y`.
    pub fn is_mirror_symmetric(&self) -> bool {
        self.apertures.iter().all(|a| {
            let m = a.mirrored();
            self.apertures
                .iter()
                .any(|b| (b.lo - m.lo).abs() <= 1e-15 * b.width() && (b.hi - m.hi).abs() <= 1e-15 * b.width())
        })
    }
}

/// Ordered screen sample positions `y_D`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScreenGrid {
    y: Vec<f64>,
    symmetric: bool,
}

impl ScreenGrid {
    /// Uniform grid of `n_points` samples on `[y_min, y_max]`.
    ///
    /// A symmetric grid is built so that sample `i` is the exact negation of
    /// sample `n - 1 - i`; it requires `y_min == -y_max`.
    pub fn new(y_min: f64, y_max: f64, n_points: usize, symmetric: bool) -> Result<Self> {
        if !(y_min.is_finite() && y_max.is_finite()) || y_min >= y_max {
            return Err(Error::InvalidGrid(format!("need finite y_min < y_max, got [{y_min}, {y_max}]")));
        }
        if n_points < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {n_points}")));
        }
        let last = (n_points - 1) as f64;
        let y = if symmetric {
            if (y_min + y_max).abs() > 1e-12 * y_max.abs() {
                return Err(Error::InvalidGrid(format!(
                    "symmetric grid requires y_min = -y_max, got [{y_min}, {y_max}]"
                )));
            }
            let n1 = (n_points - 1) as i64;
            (0..n_points as i64).map(|i| y_max * ((2 * i - n1) as f64 / last)).collect()
        } else {
            let span = y_max - y_min;
            let mut y: Vec<f64> = (0..n_points).map(|i| y_min + span * (i as f64 / last)).collect();
            y[n_points - 1] = y_max;
            y
        };
        Self::from_values(y, symmetric)
    }

    /// Wraps explicit samples. Fails if they are not strictly increasing or
    /// if `symmetric` is claimed but some `-y` is missing.
    pub fn from_values(y: Vec<f64>, symmetric: bool) -> Result<Self> {
        if y.len() < 2 {
            return Err(Error::InvalidGrid("need at least 2 points".into()));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("non-finite sample".into()));
        }
        if y.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("samples must be strictly increasing".into()));
        }
        if symmetric {
            let n = y.len();
            for i in 0..n {
                if y[i] != -y[n - 1 - i] {
                    return Err(Error::InvalidGrid(format!("sample {} has no mirror image", y[i])));
                }
            }
        }
        Ok(ScreenGrid { y, symmetric })
    }

    pub fn values(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Index of the sample nearest `y = 0` (first one on ties).
    pub fn center_index(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.y.iter().enumerate() {
            if v.abs() < self.y[best].abs() {
                best = i;
            }
        }
        best
    }

    /// Index of the mirror sample `-y_i`. Only meaningful on symmetric grids.
    pub fn mirror_index(&self, i: usize) -> usize {
        self.y.len() - 1 - i
    }

    pub fn first(&self) -> f64 {
        self.y[0]
    }

    pub fn last(&self) -> f64 {
        self.y[self.y.len() - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    GaussLegendre,
    Simpson,
}

/// Which family of propagator forms to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Quadratic path-length expansion for the classical paths and the
    /// stationary-phase inter-slit kernel.
    #[default]
    Fraunhofer,
    Exact,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Fraunhofer => "fraunhofer",
            Mode::Exact => "exact",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fraunhofer" | "stationary" => Ok(Mode::Fraunhofer),
            "exact" => Ok(Mode::Exact),
            other => Err(format!("unknown mode `{other}` (expected fraunhofer or exact)")),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::GaussLegendre => "gauss-legendre",
            Scheme::Simpson => "simpson",
        })
    }
}

impl FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gauss-legendre" | "gauss_legendre" | "gl" => Ok(Scheme::GaussLegendre),
            "simpson" => Ok(Scheme::Simpson),
            other => Err(format!("unknown scheme `{other}` (expected gauss-legendre or simpson)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Quadrature nodes per wavelength of path-length variation across an aperture.
    pub nodes_per_wavelength: usize,
    pub scheme: Scheme,
    pub mode: Mode,
    /// When set, every propagator is re-evaluated at twice the node density
    /// and rejected if the relative change exceeds this tolerance.
    pub convergence_tol: Option<f64>,
}

pub const MIN_NODES_PER_WAVELENGTH: usize = 4;
pub const DEFAULT_NODES_PER_WAVELENGTH: usize = 16;

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes_per_wavelength: DEFAULT_NODES_PER_WAVELENGTH,
            scheme: Scheme::GaussLegendre,
            mode: Mode::Fraunhofer,
            convergence_tol: None,
        }
    }
}

impl QuadratureSpec {
    pub fn new(nodes_per_wavelength: usize, scheme: Scheme, mode: Mode) -> Result<Self> {
        let spec = QuadratureSpec { nodes_per_wavelength, scheme, mode, convergence_tol: None };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_nodes_per_wavelength(mut self, nodes_per_wavelength: usize) -> Self {
        self.nodes_per_wavelength = nodes_per_wavelength;
        self
    }

    pub fn with_convergence_tol(mut self, tol: Option<f64>) -> Self {
        self.convergence_tol = tol;
        self
    }

    /// Same settings at twice the node density, with the convergence check disabled.
    pub fn doubled(&self) -> Self {
        QuadratureSpec {
            nodes_per_wavelength: 2 * self.nodes_per_wavelength,
            convergence_tol: None,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_wavelength < MIN_NODES_PER_WAVELENGTH {
            return Err(Error::InvalidQuadrature(format!(
                "nodes_per_wavelength must be at least {MIN_NODES_PER_WAVELENGTH}, got {}",
                self.nodes_per_wavelength
            )));
        }
        if let Some(tol) = self.convergence_tol {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(Error::InvalidQuadrature(format!("convergence tolerance must be positive, got {tol}")));
            }
        }
        Ok(())
    }
}

//! Run configuration: a flat TOML table with unit-suffixed lengths.
//!
//! ```toml
//! source_distance = "1mm"
//! screen_distance = "1mm"
//! slit_separation = "2000nm"
//! slit_width = "500nm"
//! lambda = "810nm"
//! efficiencies = [0.25, 0.5, 0.75, 1.0]
//! ```
//!
//! Missing keys fall back to the defaults of [`RunConfig::default`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::geometry::{
    Mode, QuadratureSpec, Scheme, ScreenGrid, SlitGeometry, TripleSlitGeometry, DEFAULT_NODES_PER_WAVELENGTH,
};

/// A length in meters, written in config files as `"810nm"`, `"1.75mm"`, `"2um"` or a bare number of meters.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Length(pub f64);

const UNITS: &[(&str, f64)] = &[
    ("nm", 1e9),
    ("um", 1e6),
    ("µm", 1e6),
    ("μm", 1e6),
    ("mm", 1e3),
    ("cm", 1e2),
    ("m", 1.0),
];

impl FromStr for Length {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        let (number, per_meter) = UNITS
            .iter()
            .find_map(|(suffix, per)| s.strip_suffix(suffix).map(|n| (n.trim(), *per)))
            .unwrap_or((s, 1.0));
        let value: f64 = number.parse().map_err(|_| format!("cannot parse length `{s}`"))?;
        if !value.is_finite() {
            return Err(format!("length `{s}` is not finite"));
        }
        // Dividing by an exact power of ten rounds once, so "810nm" == 8.1e-7.
        Ok(Length(value / per_meter))
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}m", self.0)
    }
}

impl Serialize for Length {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Length {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Number(f64),
            Integer(i64),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Raw::Number(v) => Ok(Length(v)),
            Raw::Integer(v) => Ok(Length(v as f64)),
        }
    }
}

/// Everything a subcommand needs to run. Defaults reproduce the
/// 810 nm / 500 nm / 2000 nm / 1 mm case over a +-1.75 mm screen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub source_distance: Length,
    pub screen_distance: Length,
    pub slit_separation: Length,
    pub slit_width: Length,
    #[serde(rename = "lambda", alias = "wavelength")]
    pub wavelength: Length,
    pub y_min: Length,
    pub y_max: Length,
    pub n_points: usize,
    pub symmetric: bool,
    pub nodes_per_wavelength: usize,
    pub scheme: Scheme,
    pub mode: Mode,
    pub classical_only: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence_tol: Option<f64>,
    pub efficiencies: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<[Length; 2]>,
    /// Three slit centers for the Sorkin run; defaults to `+d, 0, -d`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slit_centers: Option<[Length; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            source_distance: Length(1e-3),
            screen_distance: Length(1e-3),
            slit_separation: Length(2000.0 / 1e9),
            slit_width: Length(500.0 / 1e9),
            wavelength: Length(810.0 / 1e9),
            y_min: Length(-1.75 / 1e3),
            y_max: Length(1.75 / 1e3),
            n_points: 7001,
            symmetric: true,
            nodes_per_wavelength: DEFAULT_NODES_PER_WAVELENGTH,
            scheme: Scheme::GaussLegendre,
            mode: Mode::Fraunhofer,
            classical_only: false,
            convergence_tol: None,
            efficiencies: vec![0.25, 0.5, 0.75, 1.0],
            window: None,
            slit_centers: None,
            output: None,
        }
    }
}

const ECHO_PREFIX: &str = "# config: ";

impl RunConfig {
    pub fn from_toml(text: &str) -> std::result::Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config is always representable as TOML")
    }

    /// The config as `#`-prefixed comment lines for a CSV header.
    pub fn echo(&self) -> String {
        self.to_toml().lines().map(|l| format!("{ECHO_PREFIX}{l}\n")).collect()
    }

    /// Recovers a config from the comment header written by [`RunConfig::echo`].
    pub fn from_echo(text: &str) -> std::result::Result<Self, String> {
        let body: String = text
            .lines()
            .filter_map(|l| l.strip_prefix(ECHO_PREFIX))
            .map(|l| format!("{l}\n"))
            .collect();
        Self::from_toml(&body)
    }

    pub fn sha256(&self) -> String {
        format!("{:x}", Sha256::digest(self.to_toml().as_bytes()))
    }

    pub fn geometry(&self) -> Result<SlitGeometry> {
        SlitGeometry::new(
            self.source_distance.0,
            self.screen_distance.0,
            self.slit_separation.0,
            self.slit_width.0,
            self.wavelength.0,
        )
    }

    pub fn triple_geometry(&self) -> Result<TripleSlitGeometry> {
        match self.slit_centers {
            Some(c) => TripleSlitGeometry::with_centers(
                self.source_distance.0,
                self.screen_distance.0,
                self.slit_width.0,
                self.wavelength.0,
                c.map(|l| l.0),
            ),
            None => TripleSlitGeometry::symmetric(
                self.source_distance.0,
                self.screen_distance.0,
                self.slit_separation.0,
                self.slit_width.0,
                self.wavelength.0,
            ),
        }
    }

    pub fn grid(&self) -> Result<ScreenGrid> {
        ScreenGrid::new(self.y_min.0, self.y_max.0, self.n_points, self.symmetric)
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec> {
        let spec = QuadratureSpec::new(self.nodes_per_wavelength, self.scheme, self.mode)?
            .with_convergence_tol(self.convergence_tol);
        spec.validate()?;
        Ok(spec)
    }

    /// Averaging window, the full screen unless configured.
    pub fn window(&self) -> (f64, f64) {
        match self.window {
            Some([a, b]) => (a.0, b.0),
            None => (self.y_min.0, self.y_max.0),
        }
    }

    pub fn validate_efficiencies(&self) -> std::result::Result<(), String> {
        if self.efficiencies.is_empty() {
            return Err("efficiencies: list is empty".into());
        }
        for (i, n) in self.efficiencies.iter().enumerate() {
            if !(0.0..=1.0).contains(n) {
                return Err(format!("efficiencies[{i}] = {n} outside [0, 1]"));
            }
        }
        Ok(())
    }
}

/// Parses `"y1,y2"` with optional unit suffixes.
pub fn parse_window(s: &str) -> std::result::Result<[Length; 2], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("window `{s}` must be two comma-separated lengths"));
    }
    Ok([parts[0].parse()?, parts[1].parse()?])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn unit_suffixes() {
        assert_eq!("810nm".parse::<Length>().unwrap(), Length(8.1e-7));
        assert_eq!("1.75mm".parse::<Length>().unwrap(), Length(1.75e-3));
        assert_eq!("-1.75 mm".parse::<Length>().unwrap(), Length(-1.75e-3));
        assert_eq!("2µm".parse::<Length>().unwrap(), Length(2e-6));
        assert_eq!("2um".parse::<Length>().unwrap(), Length(2e-6));
        assert_eq!("0.001".parse::<Length>().unwrap(), Length(1e-3));
        assert_eq!("8.1e-7m".parse::<Length>().unwrap(), Length(8.1e-7));
        assert!("12 parsecs".parse::<Length>().is_err());
    }

    #[test]
    fn file_values_and_defaults() {
        let cfg = RunConfig::from_toml("lambda = \"633nm\"\nslit_width = \"300nm\"\nn_points = 101\n").unwrap();
        assert_eq!(cfg.wavelength, Length(6.33e-7));
        assert_eq!(cfg.slit_width, Length(3e-7));
        assert_eq!(cfg.n_points, 101);
        assert_eq!(cfg.screen_distance, Length(1e-3));
        let cfg = RunConfig::from_toml("wavelength = 8.1e-7\nscheme = \"simpson\"\nmode = \"exact\"").unwrap();
        assert_eq!(cfg.wavelength, Length(8.1e-7));
        assert_eq!(cfg.scheme, Scheme::Simpson);
        assert_eq!(cfg.mode, Mode::Exact);
    }

    #[test]
    fn errors_name_the_field() {
        let err = RunConfig::from_toml("slit_width = \"five\"").unwrap_err();
        assert!(err.contains("slit_width"), "{err}");
        let err = RunConfig::from_toml("wavelenght = \"810nm\"").unwrap_err();
        assert!(err.contains("wavelenght"), "{err}");
        let cfg = RunConfig { wavelength: Length(-8.1e-7), ..RunConfig::default() };
        assert!(cfg.geometry().unwrap_err().to_string().contains("wavelength"));
        let cfg = RunConfig { efficiencies: vec![0.5, 1.5], ..RunConfig::default() };
        assert!(cfg.validate_efficiencies().unwrap_err().contains("efficiencies[1]"));
    }

    #[test]
    fn default_is_valid() {
        let cfg = RunConfig::default();
        cfg.geometry().unwrap();
        cfg.triple_geometry().unwrap();
        assert_eq!(cfg.grid().unwrap().len(), 7001);
        assert_eq!(cfg.quadrature().unwrap(), QuadratureSpec::default());
        assert_eq!(cfg.window(), (-1.75e-3, 1.75e-3));
    }

    #[test]
    fn window_parsing() {
        assert_eq!(parse_window("-1mm,1mm").unwrap(), [Length(-1e-3), Length(1e-3)]);
        assert!(parse_window("1mm").is_err());
    }

    proptest! {
        #[test]
        fn echo_roundtrips(
            lambda in 1e-7f64..2e-6, w in 1e-8f64..1e-6, n in 2usize..10_000,
            exact in any::<bool>(), effs in proptest::collection::vec(0.0f64..=1.0, 1..6),
            window in proptest::option::of((-2e-3f64..0.0, 0.0f64..2e-3)),
        ) {
            let cfg = RunConfig {
                wavelength: Length(lambda),
                slit_width: Length(w),
                n_points: n,
                mode: if exact { Mode::Exact } else { Mode::Fraunhofer },
                efficiencies: effs,
                window: window.map(|(a, b)| [Length(a), Length(b)]),
                convergence_tol: Some(1e-9),
                output: Some("out.csv".into()),
                ..RunConfig::default()
            };
            let header = format!("# whichway simulate\n{}y_m,P_AB\n", cfg.echo());
            prop_assert_eq!(RunConfig::from_echo(&header).unwrap(), cfg);
        }
    }
}

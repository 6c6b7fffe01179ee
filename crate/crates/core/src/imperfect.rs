//! Finite-efficiency which-way detectors.
//!
//! The particle becomes entangled with the detector states; tracing them out
//! leaves cross terms weighted by the overlaps between detector states. With
//! equal efficiency `n` the overlaps are generated as `<0|D_A> = <D_AD_B|D_A>
//! = <D_AD_B|D_B> = <D_2|D_1> = 1 - n` and `<D_B|D_A> = (1 - n)^2`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::detection::{SetupDistributions, WaveComponents};
use crate::error::{Error, Result};
use crate::geometry::ScreenGrid;

/// Below this efficiency the inversion amplifies input noise by more than 1e6.
pub const LOW_EFFICIENCY_WARNING: f64 = 1e-3;

/// Real inner products between detector states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorOverlaps {
    /// `<0|D_A>`, untriggered vs triggered single detector. Also used for a lone detector at B.
    pub zero_da: f64,
    /// `<D_B|D_A>`
    pub db_da: f64,
    /// `<D_A D_B|D_A>`
    pub dadb_da: f64,
    /// `<D_A D_B|D_B>`
    pub dadb_db: f64,
    /// `<D_2|D_1>`, two-ball vs one-ball state of the type II detector.
    pub d2_d1: f64,
}

impl DetectorOverlaps {
    pub fn uniform(value: f64) -> Self {
        DetectorOverlaps { zero_da: value, db_da: value, dadb_da: value, dadb_db: value, d2_d1: value }
    }

    fn validate(&self) -> Result<()> {
        let named = [
            ("<0|D_A>", self.zero_da),
            ("<D_B|D_A>", self.db_da),
            ("<D_AD_B|D_A>", self.dadb_da),
            ("<D_AD_B|D_B>", self.dadb_db),
            ("<D_2|D_1>", self.d2_d1),
        ];
        for (name, value) in named {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidOverlap { name, value });
            }
        }
        Ok(())
    }
}

fn check_efficiency(n: f64) -> Result<()> {
    if (0.0..=1.0).contains(&n) {
        Ok(())
    } else {
        Err(Error::InvalidEfficiency(n))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorOverlapModel {
    /// Present when the overlaps were generated from a single efficiency.
    pub efficiency: Option<f64>,
    pub overlaps: DetectorOverlaps,
}

impl DetectorOverlapModel {
    pub fn from_efficiency(n: f64) -> Result<Self> {
        check_efficiency(n)?;
        let m = 1.0 - n;
        Ok(DetectorOverlapModel {
            efficiency: Some(n),
            overlaps: DetectorOverlaps { zero_da: m, db_da: m * m, dadb_da: m, dadb_db: m, d2_d1: m },
        })
    }

    pub fn explicit(overlaps: DetectorOverlaps) -> Result<Self> {
        overlaps.validate()?;
        Ok(DetectorOverlapModel { efficiency: None, overlaps })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorSetup {
    /// Type I detector at slit A.
    DA,
    /// Type I detector at slit B.
    DB,
    /// Type I detectors at both slits.
    DADB,
    /// Type II detector.
    DAB,
}

impl FromStr for DetectorSetup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "DA" => Ok(DetectorSetup::DA),
            "DB" => Ok(DetectorSetup::DB),
            "DADB" => Ok(DetectorSetup::DADB),
            "DAB" => Ok(DetectorSetup::DAB),
            _ => Err(Error::UnknownSetup(s.to_string())),
        }
    }
}

impl fmt::Display for DetectorSetup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DetectorSetup::DA => "DA",
            DetectorSetup::DB => "DB",
            DetectorSetup::DADB => "DADB",
            DetectorSetup::DAB => "DAB",
        })
    }
}

/// `2 Re(conj(x) y)`
fn cross(x: Complex64, y: Complex64) -> f64 {
    2.0 * (x.conj() * y).re
}

/// Intensity profile for one detector setup with arbitrary state overlaps.
pub fn imperfect_general(wc: &WaveComponents, model: &DetectorOverlapModel, setup: DetectorSetup) -> Vec<f64> {
    let ov = &model.overlaps;
    let (psi_a, psi_b, psi_ab) = (wc.psi_a(), wc.psi_b(), wc.psi_ab());
    (0..wc.grid().len())
        .map(|i| {
            let (a, b, ab) = (psi_a[i], psi_b[i], psi_ab[i]);
            match setup {
                DetectorSetup::DA => (a + ab).norm_sqr() + b.norm_sqr() + cross(a + ab, b) * ov.zero_da,
                DetectorSetup::DB => (b + ab).norm_sqr() + a.norm_sqr() + cross(b + ab, a) * ov.zero_da,
                DetectorSetup::DADB => {
                    a.norm_sqr()
                        + b.norm_sqr()
                        + ab.norm_sqr()
                        + cross(a, b) * ov.db_da
                        + cross(a, ab) * ov.dadb_da
                        + cross(b, ab) * ov.dadb_db
                }
                DetectorSetup::DAB => {
                    a.norm_sqr() + b.norm_sqr() + ab.norm_sqr() + cross(a, b) + (cross(a, ab) + cross(b, ab)) * ov.d2_d1
                }
            }
        })
        .collect()
}

/// Detector-setup profiles for finite efficiency (primed distributions).
#[derive(Debug, Clone, PartialEq)]
pub struct ImperfectDistributions {
    pub grid: ScreenGrid,
    pub p_da: Vec<f64>,
    pub p_db: Vec<f64>,
    pub p_dadb: Vec<f64>,
    pub p_dab: Vec<f64>,
    pub model: DetectorOverlapModel,
}

/// Mixes the perfect profiles with the no-detector profile according to efficiency `n`:
///
/// ```text
/// P'_DA   = n P_DA + (1-n) P_AB
/// P'_DB   = n P_DB + (1-n) P_AB
/// P'_DADB = n^2 P_DADB + n(1-n)(P_DA + P_DB) + (1-n)^2 P_AB
/// P'_DAB  = n P_DAB + (1-n) P_AB
/// ```
pub fn imperfect_from_perfect(sd: &SetupDistributions, n: f64) -> Result<ImperfectDistributions> {
    let model = DetectorOverlapModel::from_efficiency(n)?;
    let m = 1.0 - n;
    let len = sd.grid.len();
    let mix = |p: &[f64]| (0..len).map(|i| n * p[i] + m * sd.p_ab[i]).collect::<Vec<_>>();
    let p_dadb = (0..len)
        .map(|i| n * n * sd.p_dadb[i] + n * m * (sd.p_da[i] + sd.p_db[i]) + m * m * sd.p_ab[i])
        .collect();
    Ok(ImperfectDistributions {
        grid: sd.grid.clone(),
        p_da: mix(&sd.p_da),
        p_db: mix(&sd.p_db),
        p_dadb,
        p_dab: mix(&sd.p_dab),
        model,
    })
}

/// Recovers the perfect-detector profiles from measured finite-efficiency
/// profiles and the no-detector profile `p_ab`.
pub fn invert_imperfect(imp: &ImperfectDistributions, p_ab: &[f64], n: f64) -> Result<SetupDistributions> {
    if n == 0.0 {
        return Err(Error::SingularInversion);
    }
    check_efficiency(n)?;
    let len = imp.grid.len();
    if p_ab.len() != len {
        return Err(Error::LengthMismatch { expected: len, found: p_ab.len() });
    }
    if n < LOW_EFFICIENCY_WARNING {
        log::warn!("inverting at efficiency {n}: the 1/n^2 term amplifies noise by {:.1e}", 1.0 / (n * n));
    }
    let m = 1.0 - n;
    let unmix = |p: &[f64]| (0..len).map(|i| (p[i] - m * p_ab[i]) / n).collect::<Vec<_>>();
    let p_dadb = (0..len)
        .map(|i| (imp.p_dadb[i] + m * m * p_ab[i] - m * (imp.p_da[i] + imp.p_db[i])) / (n * n))
        .collect();
    SetupDistributions::new(imp.grid.clone(), p_ab.to_vec(), unmix(&imp.p_da), unmix(&imp.p_db), p_dadb, unmix(&imp.p_dab))
}

/// Window average of `|p - q|` over `[y1, y2]`, trapezoidal on the grid.
/// Window endpoints that fall between samples are linearly interpolated.
pub fn delta_av(grid: &ScreenGrid, p: &[f64], q: &[f64], y1: f64, y2: f64) -> Result<f64> {
    let y = grid.values();
    for prof in [p, q] {
        if prof.len() != y.len() {
            return Err(Error::LengthMismatch { expected: y.len(), found: prof.len() });
        }
    }
    let slop = 1e-12 * (grid.last() - grid.first());
    if !(y1 < y2) || y1 < grid.first() - slop || y2 > grid.last() + slop {
        return Err(Error::InvalidWindow { y1, y2 });
    }
    let (lo, hi) = (y1.max(grid.first()), y2.min(grid.last()));
    let diff_at = |i: usize, t: f64| {
        let pv = p[i] + t * (p[i + 1] - p[i]);
        let qv = q[i] + t * (q[i + 1] - q[i]);
        (pv - qv).abs()
    };
    let mut integral = 0.0;
    for i in 0..y.len() - 1 {
        let (a, b) = (y[i].max(lo), y[i + 1].min(hi));
        if b <= a {
            continue;
        }
        let h = y[i + 1] - y[i];
        let fa = if a == y[i] { (p[i] - q[i]).abs() } else { diff_at(i, (a - y[i]) / h) };
        let fb = if b == y[i + 1] { (p[i + 1] - q[i + 1]).abs() } else { diff_at(i, (b - y[i]) / h) };
        integral += 0.5 * (b - a) * (fa + fb);
    }
    Ok(integral / (y2 - y1))
}

//! Source-to-screen propagators for classical and inter-slit paths.
//!
//! Classical paths run source -> slit -> screen; inter-slit paths run
//! source -> slit `P` -> slit `Q` -> screen with straight segments. Both
//! families come in an exact form (full path lengths) and in the
//! Fraunhofer form (quadratic path-length expansion), the latter using the
//! stationary-phase kernel `|y_Q - y_P|^(-1/2)` for the inter-slit segment.
//!
//! The common phase `exp(ik(S + D))` is factored out of every integrand
//! and the path-length excesses are evaluated in cancellation-free form, so
//! millimetre-scale distances do not swamp nanometre-scale differences.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bessel::hankel1_0;
use crate::detection::WaveComponents;
use crate::error::{Error, Result};
use crate::geometry::{Aperture, Mode, QuadratureSpec, ScreenGrid, Slit, SlitGeometry};
use crate::quadrature::{integrate_2d, Rule};

pub type ComplexAmplitude = Complex64;

/// A point `(x, y)` in the plane of propagation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Which path families contribute to the screen field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathSet {
    #[default]
    All,
    /// Inter-slit contribution forced to zero.
    ClassicalOnly,
}

/// `k / (2 pi i)`
fn kernel_prefactor(k: f64) -> Complex64 {
    Complex64::new(0.0, -k / (2.0 * PI))
}

/// `sqrt(a^2 + b^2) - b` without cancellation, for `b > 0`.
fn excess(a: f64, b: f64) -> f64 {
    a * a / (a.hypot(b) + b)
}

/// Straight-path kernel `(k / 2 pi i) exp(ik|r1 - r2|) / |r1 - r2|`.
pub fn free_propagator(r1: Point, r2: Point, k: f64) -> Result<ComplexAmplitude> {
    let r = r1.distance(&r2);
    if r == 0.0 {
        return Err(Error::CoincidentPoints);
    }
    let v = kernel_prefactor(k) * Complex64::from_polar(1.0 / r, k * r);
    finite(v, "free propagator")
}

fn finite(v: Complex64, what: &'static str) -> Result<Complex64> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(what))
    }
}

fn cycles(max_slope: f64, width: f64, wavelength: f64) -> f64 {
    max_slope * width / wavelength
}

/// Evaluates `f` at the requested density and, if a tolerance is set, again
/// at twice the density, failing when the two disagree.
fn with_convergence_check<F>(quad: &QuadratureSpec, what: &'static str, f: F) -> Result<Complex64>
where
    F: Fn(&QuadratureSpec) -> Complex64,
{
    let v = finite(f(quad), what)?;
    if let Some(tol) = quad.convergence_tol {
        let fine = finite(f(&quad.doubled()), what)?;
        let scale = fine.norm().max(v.norm());
        if scale > 0.0 {
            let change = (v - fine).norm() / scale;
            if change > tol {
                return Err(Error::NotConverged { change, tol });
            }
        }
    }
    Ok(v)
}

/// Classical-path propagator over an arbitrary aperture, exact path lengths:
/// `-(k/2 pi i)^2 int dy exp(ik(l1 + l2)) / (l1 l2)`.
pub fn classical_exact_aperture(
    geom: &SlitGeometry,
    aperture: Aperture,
    y_d: f64,
    quad: &QuadratureSpec,
) -> Result<ComplexAmplitude> {
    let (s, d, k) = (geom.source_distance(), geom.screen_distance(), geom.wavenumber());
    let slope = |y: f64| (y / y.hypot(s) - (y_d - y) / (y_d - y).hypot(d)).abs();
    let n_cycles = cycles(slope(aperture.lo).max(slope(aperture.hi)), aperture.width(), geom.wavelength());
    let c = kernel_prefactor(k);
    let prefactor = -c * c * Complex64::from_polar(1.0, k * (s + d));
    with_convergence_check(quad, "classical propagator (exact)", |q| {
        let rule = Rule::composite(q, aperture.lo, aperture.hi, n_cycles);
        let integral = rule.integrate(|y| {
            let l1 = y.hypot(s);
            let l2 = (y_d - y).hypot(d);
            let phase = k * (excess(y, s) + excess(y_d - y, d));
            Complex64::from_polar(1.0 / (l1 * l2), phase)
        });
        prefactor * integral
    })
}

/// Classical-path propagator in the Fraunhofer limit:
/// `-gamma (k/2 pi i)^2 int dy exp(ik(y^2/2S + (y_D - y)^2/2D))`,
/// `gamma = exp(ik(S + D)) / (S D)`.
pub fn classical_fraunhofer_aperture(
    geom: &SlitGeometry,
    aperture: Aperture,
    y_d: f64,
    quad: &QuadratureSpec,
) -> Result<ComplexAmplitude> {
    let (s, d, k) = (geom.source_distance(), geom.screen_distance(), geom.wavenumber());
    let slope = |y: f64| (y / s - (y_d - y) / d).abs();
    let n_cycles = cycles(slope(aperture.lo).max(slope(aperture.hi)), aperture.width(), geom.wavelength());
    let gamma = Complex64::from_polar(1.0 / (s * d), k * (s + d));
    let c = kernel_prefactor(k);
    let prefactor = -gamma * c * c;
    with_convergence_check(quad, "classical propagator (fraunhofer)", |q| {
        let rule = Rule::composite(q, aperture.lo, aperture.hi, n_cycles);
        let integral = rule.integrate(|y| {
            let u = y_d - y;
            Complex64::from_polar(1.0, k * (y * y / (2.0 * s) + u * u / (2.0 * d)))
        });
        prefactor * integral
    })
}

fn check_pair(p: &Aperture, q: &Aperture) -> Result<()> {
    if p.gap(q) > 0.0 {
        Ok(())
    } else {
        Err(Error::SameSlit)
    }
}

/// Inter-slit propagator with exact path lengths.
///
/// The source and screen legs use the straight-path kernel
/// `exp(ikl)/l`. The inter-slit leg lies in the slit plane; its kernel is
/// integrated along the out-of-plane direction, which turns `exp(ikl)/l`
/// into `i pi H0(k l)`:
/// `(k/2 pi i)^3 int dy_P dy_Q exp(ik(l1 + l3)) i pi H0(k l2) / (l1 l3)`,
/// with `l2 = |y_Q - y_P|`. Its large-`k l2` limit is the stationary-phase
/// form evaluated by [`nonclassical_stationary_aperture`].
pub fn nonclassical_exact_aperture(
    geom: &SlitGeometry,
    p: Aperture,
    q: Aperture,
    y_d: f64,
    quad: &QuadratureSpec,
) -> Result<ComplexAmplitude> {
    check_pair(&p, &q)?;
    let (s, d, k) = (geom.source_distance(), geom.screen_distance(), geom.wavenumber());
    let lambda = geom.wavelength();
    let slope_p = |y: f64| (y / y.hypot(s)).abs() + 1.0;
    let slope_q = |y: f64| ((y_d - y) / (y_d - y).hypot(d)).abs() + 1.0;
    let cycles_p = cycles(slope_p(p.lo).max(slope_p(p.hi)), p.width(), lambda);
    let cycles_q = cycles(slope_q(q.lo).max(slope_q(q.hi)), q.width(), lambda);
    let c = kernel_prefactor(k);
    let prefactor = c * c * c * Complex64::new(0.0, PI) * Complex64::from_polar(1.0, k * (s + d));
    with_convergence_check(quad, "inter-slit propagator (exact)", |spec| {
        let rule_p = Rule::composite(spec, p.lo, p.hi, cycles_p);
        let rule_q = Rule::composite(spec, q.lo, q.hi, cycles_q);
        let integral = integrate_2d(&rule_p, &rule_q, |yp, yq| {
            let l1 = yp.hypot(s);
            let l3 = (y_d - yq).hypot(d);
            let l2 = (yq - yp).abs();
            let outer = Complex64::from_polar(1.0 / (l1 * l3), k * (excess(yp, s) + excess(y_d - yq, d)));
            outer * hankel1_0(k * l2)
        });
        prefactor * integral
    })
}

/// Inter-slit propagator in the Fraunhofer limit under the stationary-phase
/// approximation:
/// `gamma i^(3/2) (k/2 pi)^(5/2) int dy_P dy_Q |y_Q - y_P|^(-1/2)
///  exp(ik(y_P^2/2S + |y_Q - y_P| + (y_D - y_Q)^2/2D))`.
pub fn nonclassical_stationary_aperture(
    geom: &SlitGeometry,
    p: Aperture,
    q: Aperture,
    y_d: f64,
    quad: &QuadratureSpec,
) -> Result<ComplexAmplitude> {
    check_pair(&p, &q)?;
    let (s, d, k) = (geom.source_distance(), geom.screen_distance(), geom.wavenumber());
    let lambda = geom.wavelength();
    let slope_p = |y: f64| (y / s).abs() + 1.0;
    let slope_q = |y: f64| ((y_d - y) / d).abs() + 1.0;
    let cycles_p = cycles(slope_p(p.lo).max(slope_p(p.hi)), p.width(), lambda);
    let cycles_q = cycles(slope_q(q.lo).max(slope_q(q.hi)), q.width(), lambda);
    let gamma = Complex64::from_polar(1.0 / (s * d), k * (s + d));
    let i_three_halves = Complex64::from_polar(1.0, 3.0 * FRAC_PI_4);
    let prefactor = gamma * i_three_halves * (k / (2.0 * PI)).powf(2.5);
    with_convergence_check(quad, "inter-slit propagator (stationary phase)", |spec| {
        let rule_p = Rule::composite(spec, p.lo, p.hi, cycles_p);
        let rule_q = Rule::composite(spec, q.lo, q.hi, cycles_q);
        let integral = integrate_2d(&rule_p, &rule_q, |yp, yq| {
            let l2 = (yq - yp).abs();
            let u = y_d - yq;
            let phase = k * (yp * yp / (2.0 * s) + l2 + u * u / (2.0 * d));
            Complex64::from_polar(1.0 / l2.sqrt(), phase)
        });
        prefactor * integral
    })
}

pub fn classical_propagator_exact(
    slit: Slit,
    geom: &SlitGeometry,
    y_d: f64,
    quad: &QuadratureSpec,
) -> Result<ComplexAmplitude> {
    classical_exact_aperture(geom, geom.aperture(slit), y_d, quad)
}

pub fn classical_propagator_fraunhofer(
    slit: Slit,
    geom: &SlitGeometry,
    y_d: f64,
    quad: &QuadratureSpec,
) -> Result<ComplexAmplitude> {
    classical_fraunhofer_aperture(geom, geom.aperture(slit), y_d, quad)
}

pub fn nonclassical_propagator_exact(
    p: Slit,
    q: Slit,
    geom: &SlitGeometry,
    y_d: f64,
    quad: &QuadratureSpec,
) -> Result<ComplexAmplitude> {
    if p == q {
        return Err(Error::SameSlit);
    }
    nonclassical_exact_aperture(geom, geom.aperture(p), geom.aperture(q), y_d, quad)
}

pub fn nonclassical_propagator_stationary(
    p: Slit,
    q: Slit,
    geom: &SlitGeometry,
    y_d: f64,
    quad: &QuadratureSpec,
) -> Result<ComplexAmplitude> {
    if p == q {
        return Err(Error::SameSlit);
    }
    nonclassical_stationary_aperture(geom, geom.aperture(p), geom.aperture(q), y_d, quad)
}

/// Classical propagator in the form selected by `quad.mode`.
pub fn classical_propagator(
    geom: &SlitGeometry,
    aperture: Aperture,
    y_d: f64,
    quad: &QuadratureSpec,
) -> Result<ComplexAmplitude> {
    match quad.mode {
        Mode::Fraunhofer => classical_fraunhofer_aperture(geom, aperture, y_d, quad),
        Mode::Exact => classical_exact_aperture(geom, aperture, y_d, quad),
    }
}

/// Inter-slit propagator `P -> Q` in the form selected by `quad.mode`.
pub fn nonclassical_propagator(
    geom: &SlitGeometry,
    p: Aperture,
    q: Aperture,
    y_d: f64,
    quad: &QuadratureSpec,
) -> Result<ComplexAmplitude> {
    match quad.mode {
        Mode::Fraunhofer => nonclassical_stationary_aperture(geom, p, q, y_d, quad),
        Mode::Exact => nonclassical_exact_aperture(geom, p, q, y_d, quad),
    }
}

/// Classical single-aperture field on every grid point.
pub fn classical_field(
    geom: &SlitGeometry,
    aperture: Aperture,
    grid: &ScreenGrid,
    quad: &QuadratureSpec,
) -> Result<Vec<ComplexAmplitude>> {
    grid.values().par_iter().map(|&y| classical_propagator(geom, aperture, y, quad)).collect()
}

/// Inter-slit field between two apertures, both transit orders summed.
pub fn pair_field(
    geom: &SlitGeometry,
    p: Aperture,
    q: Aperture,
    grid: &ScreenGrid,
    quad: &QuadratureSpec,
) -> Result<Vec<ComplexAmplitude>> {
    grid.values()
        .par_iter()
        .map(|&y| Ok(nonclassical_propagator(geom, p, q, y, quad)? + nonclassical_propagator(geom, q, p, y, quad)?))
        .collect()
}

/// `psi_A = K_A`, `psi_B = K_B`, `psi_AB = K_AB + K_BA` on every grid point.
pub fn compute_wave_components(
    geom: &SlitGeometry,
    grid: &ScreenGrid,
    quad: &QuadratureSpec,
    paths: PathSet,
) -> Result<WaveComponents> {
    quad.validate()?;
    let a = geom.aperture(Slit::A);
    let b = geom.aperture(Slit::B);
    let psi_a = classical_field(geom, a, grid, quad)?;
    let psi_b = classical_field(geom, b, grid, quad)?;
    let psi_ab = match paths {
        PathSet::All => pair_field(geom, a, b, grid, quad)?,
        PathSet::ClassicalOnly => vec![Complex64::new(0.0, 0.0); grid.len()],
    };
    WaveComponents::new(grid.clone(), psi_a, psi_b, psi_ab)
}

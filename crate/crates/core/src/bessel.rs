//! Order-zero Hankel function of the first kind, `H0(x) = J0(x) + i Y0(x)`.
//!
//! Used for the out-of-plane reduction of the inter-slit segment: the 3D
//! kernel `exp(ikr)/r` integrated along the direction parallel to the slits
//! equals `i pi H0(k l)`.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const ASYMPTOTIC_THRESHOLD: f64 = 25.0;

/// `J0(x) + i Y0(x)` for `x > 0`; NaN otherwise.
pub fn hankel1_0(x: f64) -> Complex64 {
    if !(x > 0.0) || !x.is_finite() {
        return Complex64::new(f64::NAN, f64::NAN);
    }
    if x >= ASYMPTOTIC_THRESHOLD {
        asymptotic(x)
    } else {
        let (j0, y0) = miller(x);
        Complex64::new(j0, y0)
    }
}

pub fn j0(x: f64) -> f64 {
    hankel1_0(x.abs().max(f64::MIN_POSITIVE)).re
}

pub fn y0(x: f64) -> f64 {
    hankel1_0(x).im
}

/// Backward recurrence for the even-order `J_n`, normalized by
/// `J0 + 2 sum J_2k = 1`; `Y0` from the Neumann series
/// `Y0 = (2/pi)(ln(x/2) + gamma) J0 - (4/pi) sum (-1)^k J_2k / k`.
fn miller(x: f64) -> (f64, f64) {
    let start = 2 * ((x + 30.0 + 12.0 * x.sqrt()) / 2.0).ceil() as usize;
    let mut j_next = 0.0; // J_{n+1}
    let mut j_cur = 1e-280; // J_n
    let mut norm = 0.0;
    let mut neumann = 0.0;
    let two_over_x = 2.0 / x;
    for n in (1..=start).rev() {
        let j_prev = n as f64 * two_over_x * j_cur - j_next; // J_{n-1}
        j_next = j_cur;
        j_cur = j_prev;
        let m = n - 1;
        if m > 0 && m % 2 == 0 {
            norm += 2.0 * j_cur;
            let k = (m / 2) as f64;
            let sign = if (m / 2) % 2 == 0 { 1.0 } else { -1.0 };
            neumann += sign * j_cur / k;
        }
        if j_cur.abs() > 1e250 {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            norm *= 1e-250;
            neumann *= 1e-250;
        }
    }
    norm += j_cur;
    let j0 = j_cur / norm;
    let y0 = 2.0 / PI * ((0.5 * x).ln() + EULER_GAMMA) * j0 - 4.0 / PI * neumann / norm;
    (j0, y0)
}

fn asymptotic(x: f64) -> Complex64 {
    // sum_k i^k a_k / x^k with a_k = (-1)^k prod_{j<=k} (2j-1)^2 / (k! 8^k)
    let mut sum = Complex64::new(1.0, 0.0);
    let mut a = 1.0;
    let mut ik = Complex64::new(1.0, 0.0);
    let mut prev = f64::INFINITY;
    for k in 1..(2.0 * x) as usize {
        let odd = (2 * k - 1) as f64;
        a *= -odd * odd / (k as f64 * 8.0 * x);
        ik *= Complex64::i();
        let term = ik * a;
        if term.norm() >= prev {
            break;
        }
        sum += term;
        prev = term.norm();
        if prev < 1e-18 {
            break;
        }
    }
    let amp = (2.0 / (PI * x)).sqrt();
    Complex64::from_polar(amp, x - FRAC_PI_4) * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    // Reference values from scipy.special.j0 / y0.
    const TABLE: &[(f64, f64, f64)] = &[
        (1.0, 0.7651976865579665, 0.08825696421567697),
        (5.0, -0.1775967713143383, -0.30851762524903303),
        (8.0, 0.1716508071375539, 0.22352148938756622),
        (10.0, -0.24593576445134832, 0.05567116728359961),
        (11.6, -0.044615674094438215, -0.22986972598566127),
        (12.0, 0.04768931079683335, -0.2252373126343615),
        (20.0, 0.16702466434058322, 0.06264059680938369),
        (30.0, -0.08636798358104031, -0.11729573168666398),
    ];

    #[test]
    fn matches_reference_table() {
        for &(x, j, y) in TABLE {
            let h = hankel1_0(x);
            assert!((h.re - j).abs() < 1e-13, "J0({x}) = {} vs {j}", h.re);
            assert!((h.im - y).abs() < 1e-13, "Y0({x}) = {} vs {y}", h.im);
        }
    }

    #[test]
    fn branches_agree_at_threshold() {
        for x in [24.0, 25.0, 26.0, 40.0] {
            let (j, y) = miller(x);
            let a = asymptotic(x);
            assert!((a.re - j).abs() < 1e-13 && (a.im - y).abs() < 1e-13, "x = {x}");
        }
    }

    #[test]
    fn wronskian() {
        // J1 Y0 - J0 Y1 = 2/(pi x); with J1 = -J0', Y1 = -Y0'.
        for x in [0.3, 2.0, 7.5, 15.0, 33.0] {
            let h = 1e-5;
            let d = (hankel1_0(x + h) - hankel1_0(x - h)) / (2.0 * h);
            let v = hankel1_0(x);
            let w = -d.re * v.im + v.re * d.im;
            assert!((w - 2.0 / (PI * x)).abs() < 1e-8, "x = {x}: {w}");
        }
    }

    #[test]
    fn small_and_invalid_arguments() {
        assert!((j0(1e-6) - 1.0).abs() < 1e-12);
        assert!(hankel1_0(0.0).re.is_nan());
        assert!(hankel1_0(-1.0).re.is_nan());
    }
}

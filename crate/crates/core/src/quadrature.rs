//! Composite quadrature rules sized to the oscillation of the integrand.
//!
//! Panel counts are chosen from the number of wavelengths of path-length
//! variation across the integration interval, so that the node density is
//! at least `nodes_per_wavelength` nodes per period of the phase.
//! Every rule is built from its interval midpoint and half-width with
//! integer-symmetric offsets, so the rule on `[-b, -a]` is the exact
//! mirror image of the rule on `[a, b]`.

use num_complex::Complex64;

use crate::geometry::{QuadratureSpec, Scheme};

/// Gauss-Legendre order of each composite panel.
pub const PANEL_ORDER: usize = 8;

/// Nodes and weights of a 1D rule on a fixed interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// Composite rule on `[a, b]` for an integrand whose phase advances by
    /// `cycles` wavelengths across the interval.
    pub fn composite(spec: &QuadratureSpec, a: f64, b: f64, cycles: f64) -> Rule {
        let npw = spec.nodes_per_wavelength as f64;
        match spec.scheme {
            Scheme::GaussLegendre => {
                let wanted = npw * cycles.max(0.5) / PANEL_ORDER as f64;
                let panels = (wanted.ceil() as usize).max(1);
                gauss_legendre_composite(a, b, panels, PANEL_ORDER)
            }
            Scheme::Simpson => {
                let wanted = (npw * cycles.max(1.0) / 2.0).ceil() as usize;
                simpson(a, b, 2 * wanted.max(1))
            }
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate<F>(&self, mut f: F) -> Complex64
    where
        F: FnMut(f64) -> Complex64,
    {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += f(x) * w;
        }
        acc
    }

    pub fn integrate_real<F>(&self, mut f: F) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Tensor-product integral over `outer x inner`, summed outer-major.
pub fn integrate_2d<F>(outer: &Rule, inner: &Rule, mut f: F) -> Complex64
where
    F: FnMut(f64, f64) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for (&x, &wx) in outer.nodes.iter().zip(&outer.weights) {
        let mut row = Complex64::new(0.0, 0.0);
        for (&y, &wy) in inner.nodes.iter().zip(&inner.weights) {
            row += f(x, y) * wy;
        }
        acc += row * wx;
    }
    acc
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, in increasing order.
///
/// Nodes are found by Newton iteration on the three-term recurrence and
/// mirrored so that `t[i] == -t[n - 1 - i]` holds exactly.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "Gauss-Legendre order must be positive");
    let mut t = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess for the i-th largest root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d.is_finite() { d } else { dp };
        let weight = 2.0 / ((1.0 - x * x) * dp * dp);
        t[n - 1 - i] = x;
        t[i] = -x;
        w[n - 1 - i] = weight;
        w[i] = weight;
    }
    if n % 2 == 1 {
        t[n / 2] = 0.0;
    }
    (t, w)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

pub fn gauss_legendre_composite(a: f64, b: f64, panels: usize, order: usize) -> Rule {
    let (t, w) = gauss_legendre(order);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let m = panels as i64;
    let panel_half = half / panels as f64;
    let mut nodes = Vec::with_capacity(panels * order);
    let mut weights = Vec::with_capacity(panels * order);
    for j in 0..m {
        let center = mid + half * ((2 * j + 1 - m) as f64 / m as f64);
        for (&ti, &wi) in t.iter().zip(&w) {
            nodes.push(center + panel_half * ti);
            weights.push(panel_half * wi);
        }
    }
    Rule { nodes, weights }
}

/// Composite Simpson rule with an even number of intervals.
pub fn simpson(a: f64, b: f64, intervals: usize) -> Rule {
    assert!(intervals >= 2 && intervals.is_multiple_of(2), "Simpson needs an even interval count");
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let n = intervals as i64;
    let h = 2.0 * half / intervals as f64;
    let nodes = (0..=n).map(|i| mid + half * ((2 * i - n) as f64 / n as f64)).collect();
    let weights = (0..=n)
        .map(|i| {
            let c = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * h / 3.0
        })
        .collect();
    Rule { nodes, weights }
}

//! Perfect which-way detector intensity profiles and Born-rule test parameters.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{QuadratureSpec, ScreenGrid, TripleSlitGeometry};
use crate::propagators::{classical_field, pair_field, PathSet};

/// Screen fields of the two single-slit path families and of the inter-slit paths.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveComponents {
    grid: ScreenGrid,
    psi_a: Vec<Complex64>,
    psi_b: Vec<Complex64>,
    psi_ab: Vec<Complex64>,
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}

impl WaveComponents {
    pub fn new(grid: ScreenGrid, psi_a: Vec<Complex64>, psi_b: Vec<Complex64>, psi_ab: Vec<Complex64>) -> Result<Self> {
        for field in [&psi_a, &psi_b, &psi_ab] {
            check_len(grid.len(), field.len())?;
            if field.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(Error::NonFinite("wave components"));
            }
        }
        Ok(WaveComponents { grid, psi_a, psi_b, psi_ab })
    }

    pub fn grid(&self) -> &ScreenGrid {
        &self.grid
    }

    pub fn psi_a(&self) -> &[Complex64] {
        &self.psi_a
    }

    pub fn psi_b(&self) -> &[Complex64] {
        &self.psi_b
    }

    pub fn psi_ab(&self) -> &[Complex64] {
        &self.psi_ab
    }

    /// Same classical fields with the inter-slit field removed.
    pub fn classical_only(&self) -> WaveComponents {
        WaveComponents {
            grid: self.grid.clone(),
            psi_a: self.psi_a.clone(),
            psi_b: self.psi_b.clone(),
            psi_ab: vec![Complex64::new(0.0, 0.0); self.grid.len()],
        }
    }
}

/// The five detector-configuration intensity profiles on a common grid.
///
/// | field    | configuration                                  |
/// |----------|------------------------------------------------|
/// | `p_ab`   | no which-way detector                          |
/// | `p_da`   | type I detector at slit A                      |
/// | `p_db`   | type I detector at slit B                      |
/// | `p_dadb` | type I detectors at both slits                 |
/// | `p_dab`  | type II (one-or-both slits) detector           |
///
/// `norm` is `p_ab` at the grid point nearest `y = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SetupDistributions {
    pub grid: ScreenGrid,
    pub p_ab: Vec<f64>,
    pub p_da: Vec<f64>,
    pub p_db: Vec<f64>,
    pub p_dadb: Vec<f64>,
    pub p_dab: Vec<f64>,
    pub norm: f64,
}

impl SetupDistributions {
    pub fn new(
        grid: ScreenGrid,
        p_ab: Vec<f64>,
        p_da: Vec<f64>,
        p_db: Vec<f64>,
        p_dadb: Vec<f64>,
        p_dab: Vec<f64>,
    ) -> Result<Self> {
        for p in [&p_ab, &p_da, &p_db, &p_dadb, &p_dab] {
            check_len(grid.len(), p.len())?;
            if p.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("setup distributions"));
            }
        }
        let norm = p_ab[grid.center_index()];
        if !(norm > 0.0) {
            return Err(Error::DegenerateNorm(norm));
        }
        Ok(SetupDistributions { grid, p_ab, p_da, p_db, p_dadb, p_dab, norm })
    }

    pub fn is_nonnegative(&self) -> bool {
        [&self.p_ab, &self.p_da, &self.p_db, &self.p_dadb, &self.p_dab]
            .iter()
            .all(|p| p.iter().all(|&v| v >= 0.0))
    }

    /// Every profile divided by `norm`; the returned `norm` is 1.
    pub fn normalized(&self) -> SetupDistributions {
        let scale = |p: &[f64]| p.iter().map(|v| v / self.norm).collect::<Vec<_>>();
        SetupDistributions {
            grid: self.grid.clone(),
            p_ab: scale(&self.p_ab),
            p_da: scale(&self.p_da),
            p_db: scale(&self.p_db),
            p_dadb: scale(&self.p_dadb),
            p_dab: scale(&self.p_dab),
            norm: 1.0,
        }
    }
}

/// Intensities for each detector configuration from the three screen fields.
pub fn perfect_distributions(wc: &WaveComponents) -> Result<SetupDistributions> {
    let n = wc.grid.len();
    let mut p_ab = Vec::with_capacity(n);
    let mut p_da = Vec::with_capacity(n);
    let mut p_db = Vec::with_capacity(n);
    let mut p_dadb = Vec::with_capacity(n);
    let mut p_dab = Vec::with_capacity(n);
    for i in 0..n {
        let (a, b, ab) = (wc.psi_a[i], wc.psi_b[i], wc.psi_ab[i]);
        p_ab.push((a + b + ab).norm_sqr());
        p_da.push((a + ab).norm_sqr() + b.norm_sqr());
        p_db.push((b + ab).norm_sqr() + a.norm_sqr());
        p_dadb.push(a.norm_sqr() + b.norm_sqr() + ab.norm_sqr());
        p_dab.push((a + b).norm_sqr() + ab.norm_sqr());
    }
    SetupDistributions::new(wc.grid.clone(), p_ab, p_da, p_db, p_dadb, p_dab)
}

/// Single versus double type I detector difference, `P_DA - P_DADB`.
pub fn delta1(sd: &SetupDistributions) -> Vec<f64> {
    sd.p_da.iter().zip(&sd.p_dadb).map(|(a, b)| a - b).collect()
}

/// No-detector versus type II detector difference, `P_AB - P_DAB`.
pub fn delta2(sd: &SetupDistributions) -> Vec<f64> {
    sd.p_ab.iter().zip(&sd.p_dab).map(|(a, b)| a - b).collect()
}

/// `I_AB = P_AB - P_DA - P_DB - P_DAB + 2 P_DADB`, identically zero whenever
/// every profile is the squared modulus of its superposed amplitudes.
pub fn born_parameter(sd: &SetupDistributions) -> Vec<f64> {
    (0..sd.grid.len())
        .map(|i| sd.p_ab[i] - sd.p_da[i] - sd.p_db[i] - sd.p_dab[i] + 2.0 * sd.p_dadb[i])
        .collect()
}

/// Detection probabilities of a three-slit experiment with every subset of slits open.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleSlitProbabilities {
    pub grid: ScreenGrid,
    pub p_abc: Vec<f64>,
    pub p_ab: Vec<f64>,
    pub p_ac: Vec<f64>,
    pub p_bc: Vec<f64>,
    pub p_a: Vec<f64>,
    pub p_b: Vec<f64>,
    pub p_c: Vec<f64>,
}

impl TripleSlitProbabilities {
    /// Profiles in the order `[P_ABC, P_AB, P_AC, P_BC, P_A, P_B, P_C]`.
    pub fn new(grid: ScreenGrid, profiles: [Vec<f64>; 7]) -> Result<Self> {
        for p in &profiles {
            check_len(grid.len(), p.len())?;
        }
        let [p_abc, p_ab, p_ac, p_bc, p_a, p_b, p_c] = profiles;
        Ok(TripleSlitProbabilities { grid, p_abc, p_ab, p_ac, p_bc, p_a, p_b, p_c })
    }

    /// Like [`TripleSlitProbabilities::new`] but each profile carries its own
    /// grid, and all grids must be identical.
    pub fn from_sampled(profiles: [(ScreenGrid, Vec<f64>); 7]) -> Result<Self> {
        let grid = profiles[0].0.clone();
        if profiles.iter().any(|(g, _)| g.values() != grid.values()) {
            return Err(Error::GridMismatch);
        }
        Self::new(grid, profiles.map(|(_, p)| p))
    }

    /// `P_ABC` at the grid point nearest `y = 0`.
    pub fn norm(&self) -> f64 {
        self.p_abc[self.grid.center_index()]
    }
}

/// `I_ABC = P_ABC - P_AB - P_AC - P_BC + P_A + P_B + P_C`
pub fn sorkin_parameter(tp: &TripleSlitProbabilities) -> Vec<f64> {
    (0..tp.grid.len())
        .map(|i| tp.p_abc[i] - tp.p_ab[i] - tp.p_ac[i] - tp.p_bc[i] + tp.p_a[i] + tp.p_b[i] + tp.p_c[i])
        .collect()
}

/// Builds the seven triple-slit profiles from classical single-slit fields
/// plus, unless `paths` is classical-only, the pairwise inter-slit fields
/// `psi_XY = K_XY + K_YX`. The genuinely three-slit term `psi_ABC` is not
/// modeled and contributes zero; with all slits open the field is
/// `psi_A + psi_B + psi_C + psi_AB + psi_AC + psi_BC`.
pub fn triple_slit_probabilities(
    geom: &TripleSlitGeometry,
    grid: &ScreenGrid,
    quad: &QuadratureSpec,
    paths: PathSet,
) -> Result<TripleSlitProbabilities> {
    quad.validate()?;
    let base = geom.base();
    let [ap_a, ap_b, ap_c] = *geom.apertures();
    let a = classical_field(base, ap_a, grid, quad)?;
    let b = classical_field(base, ap_b, grid, quad)?;
    let c = classical_field(base, ap_c, grid, quad)?;
    let zeros = || vec![Complex64::new(0.0, 0.0); grid.len()];
    let (ab, ac, bc) = match paths {
        PathSet::All => (
            pair_field(base, ap_a, ap_b, grid, quad)?,
            pair_field(base, ap_a, ap_c, grid, quad)?,
            pair_field(base, ap_b, ap_c, grid, quad)?,
        ),
        PathSet::ClassicalOnly => (zeros(), zeros(), zeros()),
    };
    let n = grid.len();
    let mut profiles: [Vec<f64>; 7] = Default::default();
    for p in profiles.iter_mut() {
        p.reserve(n);
    }
    for i in 0..n {
        let values = [
            (a[i] + b[i] + c[i] + ab[i] + ac[i] + bc[i]).norm_sqr(),
            (a[i] + b[i] + ab[i]).norm_sqr(),
            (a[i] + c[i] + ac[i]).norm_sqr(),
            (b[i] + c[i] + bc[i]).norm_sqr(),
            a[i].norm_sqr(),
            b[i].norm_sqr(),
            c[i].norm_sqr(),
        ];
        for (p, v) in profiles.iter_mut().zip(values) {
            p.push(v);
        }
    }
    TripleSlitProbabilities::new(grid.clone(), profiles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn single_point(a: Complex64, b: Complex64, ab: Complex64) -> WaveComponents {
        // Three-point symmetric grid; the probe sits at the center.
        let grid = ScreenGrid::new(-1.0, 1.0, 3, true).unwrap();
        WaveComponents::new(grid, vec![a; 3], vec![b; 3], vec![ab; 3]).unwrap()
    }

    #[test]
    fn hand_computed_point() {
        let wc = single_point(c(1.0, 0.0), c(0.0, 1.0), c(0.1, 0.0));
        let sd = perfect_distributions(&wc).unwrap();
        // |1.1 + i|^2 = 1.21 + 1
        assert!((sd.p_ab[1] - 2.21).abs() < 1e-15);
        assert!((sd.p_da[1] - 2.21).abs() < 1e-15);
        assert!((sd.p_dadb[1] - 2.01).abs() < 1e-15);
        assert!((delta1(&sd)[1] - 0.2).abs() < 1e-15);
        // 2 Re[(1 - i) * 0.1]
        assert!((delta2(&sd)[1] - 0.2).abs() < 1e-15);
        assert!(born_parameter(&sd)[1].abs() < 1e-15);
        assert_eq!(sd.norm, sd.p_ab[1]);
    }

    #[test]
    fn classical_only_degeneracy() {
        let wc = single_point(c(0.3, -0.7), c(-0.2, 0.5), c(0.0, 0.0));
        let sd = perfect_distributions(&wc).unwrap();
        assert_eq!(sd.p_da, sd.p_dadb);
        assert_eq!(sd.p_db, sd.p_dadb);
        assert!(delta1(&sd).iter().all(|v| *v == 0.0));
        assert!(delta2(&sd).iter().all(|v| *v == 0.0));
    }

    #[test]
    fn zero_center_is_degenerate() {
        let wc = single_point(c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0));
        assert!(matches!(perfect_distributions(&wc), Err(Error::DegenerateNorm(_))));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let grid = ScreenGrid::new(-1.0, 1.0, 3, true).unwrap();
        let err = WaveComponents::new(grid, vec![c(1.0, 0.0); 3], vec![c(1.0, 0.0); 2], vec![c(0.0, 0.0); 3]);
        assert_eq!(err.unwrap_err(), Error::LengthMismatch { expected: 3, found: 2 });
    }

    #[test]
    fn synthetic_born_violation_is_detected() {
        let wc = single_point(c(0.8, 0.1), c(0.2, 0.9), c(0.05, -0.02));
        let mut sd = perfect_distributions(&wc).unwrap();
        let (a, b, ab) = (wc.psi_a[1], wc.psi_b[1], wc.psi_ab[1]);
        sd.p_ab[1] = (a + b + ab).norm().powf(2.1);
        let i_ab = born_parameter(&sd)[1];
        // |psi|^2.1 - |psi|^2 with |psi|^2 = 2.2241
        let psi2 = (a + b + ab).norm_sqr();
        let expected = psi2.powf(1.05) - psi2;
        assert!((i_ab - expected).abs() < 1e-14, "{i_ab} vs {expected}");
        assert!(i_ab.abs() > 1e-2);
    }

    #[test]
    fn sorkin_cases() {
        let grid = ScreenGrid::new(-1.0, 1.0, 3, true).unwrap();
        let zeros: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; 3]);
        let tp = TripleSlitProbabilities::new(grid.clone(), zeros).unwrap();
        assert!(sorkin_parameter(&tp).iter().all(|v| *v == 0.0));

        let (a, b, cc) = (c(0.4, 0.2), c(-0.1, 0.6), c(0.3, -0.3));
        let (ab, ac, bc) = (c(0.02, 0.01), c(-0.01, 0.015), c(0.005, -0.02));
        let build = |ab: Complex64, ac: Complex64, bc: Complex64| {
            let p = [
                (a + b + cc + ab + ac + bc).norm_sqr(),
                (a + b + ab).norm_sqr(),
                (a + cc + ac).norm_sqr(),
                (b + cc + bc).norm_sqr(),
                a.norm_sqr(),
                b.norm_sqr(),
                cc.norm_sqr(),
            ];
            TripleSlitProbabilities::new(grid.clone(), p.map(|v| vec![v; 3])).unwrap()
        };
        let zero = c(0.0, 0.0);
        assert!(sorkin_parameter(&build(zero, zero, zero))[0].abs() < 1e-15);
        assert!(sorkin_parameter(&build(ab, ac, bc))[0].abs() > 1e-3);
    }

    #[test]
    fn sorkin_grid_mismatch() {
        let g1 = ScreenGrid::new(-1.0, 1.0, 3, true).unwrap();
        let g2 = ScreenGrid::new(-2.0, 2.0, 3, true).unwrap();
        let mut profiles: [(ScreenGrid, Vec<f64>); 7] = std::array::from_fn(|_| (g1.clone(), vec![0.0; 3]));
        assert!(TripleSlitProbabilities::from_sampled(profiles.clone()).is_ok());
        profiles[4].0 = g2;
        assert_eq!(TripleSlitProbabilities::from_sampled(profiles).unwrap_err(), Error::GridMismatch);
    }

    fn amp() -> impl Strategy<Value = Complex64> {
        (-1e3f64..1e3, -1e3f64..1e3).prop_map(|(re, im)| c(re, im))
    }

    proptest! {
        #[test]
        fn distributions_nonnegative_and_identities(
            fields in proptest::collection::vec((amp(), amp(), amp()), 5)
        ) {
            let grid = ScreenGrid::new(-2.0, 2.0, 5, true).unwrap();
            let a: Vec<_> = fields.iter().map(|f| f.0).collect();
            let b: Vec<_> = fields.iter().map(|f| f.1).collect();
            let ab: Vec<_> = fields.iter().map(|f| f.2).collect();
            let wc = WaveComponents::new(grid, a.clone(), b.clone(), ab.clone()).unwrap();
            let Ok(sd) = perfect_distributions(&wc) else { return Ok(()) };
            prop_assert!(sd.is_nonnegative());
            let scale = sd.p_ab.iter().chain(&sd.p_dadb).fold(sd.norm, |m, v| m.max(*v));
            let d1 = delta1(&sd);
            let d2 = delta2(&sd);
            for i in 0..5 {
                let d1_fields = 2.0 * (a[i] * ab[i].conj()).re;
                let d2_fields = 2.0 * ((a[i] + b[i]) * ab[i].conj()).re;
                prop_assert!((d1[i] - d1_fields).abs() <= 1e-12 * scale);
                prop_assert!((d2[i] - d2_fields).abs() <= 1e-12 * scale);
            }
        }
    }
}

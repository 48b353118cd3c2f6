//! Thermal-noise injection: degrade an SLC stack to a constant target NESZ.
//!
//! The added complex noise has total power L_target - L_original (linear),
//! i.e. per-component amplitude std sqrt((L_target - L_original)/2), so the
//! measured NESZ of a degraded zero-signal stack equals the target. A
//! literal mode that puts sqrt(L_target - L_original) on each component
//! (total power twice the difference, +3 dB) is available for comparison.

use crate::error::{Error, Result};
use crate::raster::ComplexGrid;
use crate::rng::{pixel_rng, standard_normal_pair, stream};
use crate::slc::SlcStack;
use crate::units::{db_to_linear_allow_neg_inf, linear_to_db};
use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// How Eq-style noise std maps onto the real/imaginary components.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum NoisePowerMode {
    /// Per-component std sqrt(dL/2): total added power equals the NESZ gap.
    #[default]
    TotalPower,
    /// Per-component std sqrt(dL): literal reading, total power 2x the gap.
    PerComponent,
}

/// NESZ as a function of incidence angle: either a constant (possibly -inf
/// for noise-free synthetic data) or a piecewise-linear knot table with
/// clamped extrapolation.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NeszCurve {
    Constant { nesz_db: f64 },
    Table { knots: Vec<(f64, f64)> },
}

impl NeszCurve {
    fn validate(&self) -> Result<()> {
        match self {
            NeszCurve::Constant { nesz_db } => {
                if nesz_db.is_nan() || *nesz_db == f64::INFINITY {
                    return Err(Error::invalid("constant NESZ must be a value or -inf"));
                }
            }
            NeszCurve::Table { knots } => {
                if knots.is_empty() {
                    return Err(Error::EmptyNeszModel);
                }
                if !knots.windows(2).all(|w| w[0].0 < w[1].0) {
                    return Err(Error::invalid("NESZ knots must be sorted by incidence"));
                }
                if !knots.iter().all(|&(inc, db)| {
                    inc > 0.0 && inc < 90.0 && db.is_finite()
                }) {
                    return Err(Error::invalid(
                        "NESZ knots need incidence in (0, 90) and finite dB",
                    ));
                }
            }
        }
        Ok(())
    }

    fn at(&self, incidence_deg: f64) -> f64 {
        match self {
            NeszCurve::Constant { nesz_db } => *nesz_db,
            NeszCurve::Table { knots } => {
                // clamped piecewise-linear interpolation
                if incidence_deg <= knots[0].0 {
                    return knots[0].1;
                }
                if incidence_deg >= knots[knots.len() - 1].0 {
                    return knots[knots.len() - 1].1;
                }
                for w in knots.windows(2) {
                    let ((x0, y0), (x1, y1)) = (w[0], w[1]);
                    if incidence_deg <= x1 {
                        let t = (incidence_deg - x0) / (x1 - x0);
                        return y0 + t * (y1 - y0);
                    }
                }
                unreachable!("sorted knots cover the query")
            }
        }
    }
}

/// System NESZ model: a default curve plus optional per-date overrides
/// (hardware and calibration drift between flights).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NeszModel {
    pub default: NeszCurve,
    #[serde(default)]
    pub per_date: std::collections::BTreeMap<i64, NeszCurve>,
}

impl NeszModel {
    pub fn new(default: NeszCurve) -> Result<Self> {
        default.validate()?;
        Ok(NeszModel {
            default,
            per_date: Default::default(),
        })
    }

    pub fn constant(nesz_db: f64) -> Self {
        NeszModel {
            default: NeszCurve::Constant { nesz_db },
            per_date: Default::default(),
        }
    }

    /// A system with no thermal noise at all (synthetic truth stacks).
    pub fn noise_free() -> Self {
        Self::constant(f64::NEG_INFINITY)
    }

    pub fn with_date_override(mut self, date: i64, curve: NeszCurve) -> Result<Self> {
        curve.validate()?;
        self.per_date.insert(date, curve);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.default.validate()?;
        for c in self.per_date.values() {
            c.validate()?;
        }
        Ok(())
    }

    fn curve_for(&self, date: i64) -> &NeszCurve {
        self.per_date.get(&date).unwrap_or(&self.default)
    }

    /// NESZ in dB at an incidence angle for a given acquisition date.
    pub fn nesz_at(&self, date: i64, incidence_deg: f64) -> Result<f64> {
        if !(incidence_deg > 0.0 && incidence_deg < 90.0) {
            return Err(Error::invalid(format!(
                "incidence {incidence_deg} deg outside (0, 90)"
            )));
        }
        Ok(self.curve_for(date).at(incidence_deg))
    }
}

/// Per-component amplitude std of the noise that raises NESZ from
/// `nesz_orig_db` (may be -inf) to `nesz_target_db`.
pub fn required_noise_std(
    nesz_orig_db: f64,
    nesz_target_db: f64,
    mode: NoisePowerMode,
) -> Result<f64> {
    let l_orig = db_to_linear_allow_neg_inf(nesz_orig_db)?;
    let l_target = db_to_linear_allow_neg_inf(nesz_target_db)?;
    if l_target < l_orig {
        return Err(Error::TargetBelowOriginal {
            target_db: nesz_target_db,
            orig_db: nesz_orig_db,
            incidence_deg: f64::NAN,
        });
    }
    let dl = l_target - l_orig;
    Ok(match mode {
        NoisePowerMode::TotalPower => (dl / 2.0).sqrt(),
        NoisePowerMode::PerComponent => dl.sqrt(),
    })
}

/// Add zero-mean Gaussian noise, independent between components, pixels and
/// SLCs, bringing the stack NESZ up to `target_nesz_db`. Output is a pure
/// function of (stack, target, model, mode, seed).
pub fn degrade_stack(
    stack: &SlcStack,
    target_nesz_db: f64,
    model: &NeszModel,
    mode: NoisePowerMode,
    seed: u64,
) -> Result<SlcStack> {
    model.validate()?;
    if !target_nesz_db.is_finite() {
        return Err(Error::invalid("target NESZ must be finite"));
    }
    let cols = stack.cols();
    // Pre-resolve per-column noise std for each SLC; fail fast on the first
    // pixel whose original NESZ exceeds the target.
    let mut stds: Vec<Vec<f64>> = Vec::with_capacity(stack.len());
    for slc in stack.slcs() {
        let mut row = Vec::with_capacity(cols);
        for j in 0..cols {
            let inc = slc.incidence_deg[j];
            let orig = model.nesz_at(slc.date, inc)?;
            let std = required_noise_std(orig, target_nesz_db, mode).map_err(|e| match e {
                Error::TargetBelowOriginal {
                    target_db, orig_db, ..
                } => Error::TargetBelowOriginal {
                    target_db,
                    orig_db,
                    incidence_deg: inc,
                },
                other => other,
            })?;
            row.push(std);
        }
        stds.push(row);
    }

    let data: Vec<ComplexGrid> = stack
        .slcs()
        .iter()
        .enumerate()
        .map(|(k, slc)| {
            let (rows, _) = slc.data.dim();
            let col_stds = &stds[k];
            let rows_out: Vec<Vec<Complex64>> = (0..rows)
                .into_par_iter()
                .map(|i| {
                    (0..cols)
                        .map(|j| {
                            let std = col_stds[j];
                            if std == 0.0 {
                                slc.data[[i, j]]
                            } else {
                                let (a, b) = standard_normal_pair(&mut pixel_rng(
                                    seed,
                                    stream::noise(k),
                                    i,
                                    j,
                                ));
                                slc.data[[i, j]] + Complex64::new(a * std, b * std)
                            }
                        })
                        .collect()
                })
                .collect();
            let mut g = Array2::zeros(slc.data.dim());
            for (i, row) in rows_out.into_iter().enumerate() {
                for (j, z) in row.into_iter().enumerate() {
                    g[[i, j]] = z;
                }
            }
            g
        })
        .collect();
    stack.with_data(data)
}

/// Mean pixel power over a signal-free mask, in dB. A zero-power selection
/// reports -inf.
pub fn measure_nesz(stack: &SlcStack, signal_free_mask: &Array2<bool>) -> Result<f64> {
    if signal_free_mask.dim() != (stack.rows(), stack.cols()) {
        return Err(Error::dims("mask dims mismatch".to_string()));
    }
    let n_masked = signal_free_mask.iter().filter(|&&m| m).count();
    if n_masked < 1_000 {
        return Err(Error::invalid(format!(
            "signal-free mask selects {n_masked} pixels; need >= 1000"
        )));
    }
    let mut acc = 0.0f64;
    let mut n = 0usize;
    for slc in stack.slcs() {
        for (z, &m) in slc.data.iter().zip(signal_free_mask.iter()) {
            if m {
                acc += z.norm_sqr();
                n += 1;
            }
        }
    }
    let mean = acc / n as f64;
    if mean == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    linear_to_db(mean)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::{
        make_sigma0_field, make_velocity_field, synthesize_slc_stack, CoherenceModel,
        SceneGeometry, Sigma0Kind, VelocityKind,
    };
    use crate::slc::{constant_incidence, SlcRaster};

    #[test]
    fn nesz_interpolation() {
        let m = NeszModel::new(NeszCurve::Table {
            knots: vec![(40.0, -50.0)],
        })
        .unwrap();
        assert_eq!(m.nesz_at(0, 40.0).unwrap(), -50.0);

        let m = NeszModel::new(NeszCurve::Table {
            knots: vec![(30.0, -52.0), (50.0, -48.0)],
        })
        .unwrap();
        assert_eq!(m.nesz_at(0, 40.0).unwrap(), -50.0);
        // clamped extrapolation on both ends
        assert_eq!(m.nesz_at(0, 60.0).unwrap(), -48.0);
        assert_eq!(m.nesz_at(0, 10.0).unwrap(), -52.0);
        assert!(m.nesz_at(0, 95.0).is_err());
    }

    #[test]
    fn nesz_model_validation_and_overrides() {
        assert!(matches!(
            NeszModel::new(NeszCurve::Table { knots: vec![] }),
            Err(Error::EmptyNeszModel)
        ));
        assert!(NeszModel::new(NeszCurve::Table {
            knots: vec![(50.0, -48.0), (30.0, -52.0)],
        })
        .is_err());

        let m = NeszModel::constant(-50.0)
            .with_date_override(100, NeszCurve::Constant { nesz_db: -45.0 })
            .unwrap();
        assert_eq!(m.nesz_at(0, 40.0).unwrap(), -50.0);
        assert_eq!(m.nesz_at(100, 40.0).unwrap(), -45.0);
    }

    #[test]
    fn required_noise_std_values() {
        let z = required_noise_std(-15.0, -15.0, NoisePowerMode::TotalPower).unwrap();
        assert_eq!(z, 0.0);
        let s = required_noise_std(-50.0, -15.0, NoisePowerMode::TotalPower).unwrap();
        assert!((s - 0.12572).abs() < 1e-5, "s={s}");
        let s = required_noise_std(f64::NEG_INFINITY, -15.0, NoisePowerMode::TotalPower).unwrap();
        assert!((s - 0.12575).abs() < 1e-5, "s={s}");
        // literal mode doubles the power
        let lit = required_noise_std(-50.0, -15.0, NoisePowerMode::PerComponent).unwrap();
        assert!((lit / required_noise_std(-50.0, -15.0, NoisePowerMode::TotalPower).unwrap()
            - std::f64::consts::SQRT_2)
            .abs()
            < 1e-12);
        assert!(matches!(
            required_noise_std(-15.0, -20.0, NoisePowerMode::TotalPower),
            Err(Error::TargetBelowOriginal { .. })
        ));
    }

    fn zero_stack(rows: usize, cols: usize) -> SlcStack {
        let mk = |date| {
            SlcRaster::new(
                ComplexGrid::zeros((rows, cols)),
                (7.0, 7.0),
                0.24,
                constant_incidence(cols, 40.0),
                date,
            )
            .unwrap()
        };
        SlcStack::new(vec![mk(0), mk(10)]).unwrap()
    }

    #[test]
    fn degrade_noop_when_target_equals_original() {
        let st = zero_stack(8, 8);
        let model = NeszModel::constant(-15.0);
        let out = degrade_stack(&st, -15.0, &model, NoisePowerMode::TotalPower, 1).unwrap();
        for (a, b) in st.slcs().iter().zip(out.slcs()) {
            assert_eq!(a.data, b.data);
        }
    }

    #[test]
    fn degrade_zero_stack_hits_target_power() {
        let st = zero_stack(800, 700);
        let out = degrade_stack(
            &st,
            -15.0,
            &NeszModel::noise_free(),
            NoisePowerMode::TotalPower,
            7,
        )
        .unwrap();
        let mask = Array2::from_elem((800, 700), true);
        let nesz = measure_nesz(&out, &mask).unwrap();
        assert!((nesz - (-15.0)).abs() < 0.05, "nesz={nesz}");

        // literal mode lands ~3 dB hot
        let lit = degrade_stack(
            &st,
            -15.0,
            &NeszModel::noise_free(),
            NoisePowerMode::PerComponent,
            7,
        )
        .unwrap();
        let nesz_lit = measure_nesz(&lit, &mask).unwrap();
        assert!((nesz_lit - (-15.0 + 3.0103)).abs() < 0.05, "nesz={nesz_lit}");
    }

    #[test]
    fn degrade_is_deterministic_and_decorrelated_between_slcs() {
        let st = zero_stack(120, 120);
        let model = NeszModel::noise_free();
        let a = degrade_stack(&st, -15.0, &model, NoisePowerMode::TotalPower, 3).unwrap();
        let b = degrade_stack(&st, -15.0, &model, NoisePowerMode::TotalPower, 3).unwrap();
        assert_eq!(a.get(0).data, b.get(0).data);
        assert_eq!(a.get(1).data, b.get(1).data);

        // cross-coherence of noise between the two SLCs over 14400 pixels
        let (mut num, mut p0, mut p1) = (Complex64::new(0.0, 0.0), 0.0, 0.0);
        for (x, y) in a.get(0).data.iter().zip(a.get(1).data.iter()) {
            num += x * y.conj();
            p0 += x.norm_sqr();
            p1 += y.norm_sqr();
        }
        let coh = num.norm() / (p0 * p1).sqrt();
        assert!(coh < 0.05, "cross coherence {coh}");
    }

    #[test]
    fn power_additivity_on_speckle() {
        let vf = make_velocity_field(&VelocityKind::Uniform { v_m_per_yr: 0.0 }, 700, 720).unwrap();
        let s0 = make_sigma0_field(&Sigma0Kind::Uniform { sigma0_db: 0.0 }, 700, 720).unwrap();
        let geom = SceneGeometry::constant(720, 0.24, 7.0, 40.0);
        let model = CoherenceModel::new(0.0, 0.9, 100.0).unwrap();
        let st = synthesize_slc_stack(&vf, &s0, &[0, 40], &model, &geom, 21).unwrap();
        let out = degrade_stack(
            &st,
            -3.0,
            &NeszModel::noise_free(),
            NoisePowerMode::TotalPower,
            22,
        )
        .unwrap();
        let mean_power = |s: &SlcStack| -> f64 {
            let mut acc = 0.0;
            let mut n = 0usize;
            for slc in s.slcs() {
                acc += slc.data.iter().map(|z| z.norm_sqr()).sum::<f64>();
                n += slc.data.len();
            }
            acc / n as f64
        };
        let p_in = mean_power(&st);
        let p_out = mean_power(&out);
        let expected = p_in + crate::units::db_to_linear(-3.0).unwrap();
        assert!(
            ((p_out - expected) / expected).abs() < 0.01,
            "p_out={p_out} expected={expected}"
        );
    }

    #[test]
    fn measured_nesz_of_unit_speckle_is_zero_db() {
        let vf = make_velocity_field(&VelocityKind::Uniform { v_m_per_yr: 0.0 }, 710, 710).unwrap();
        let s0 = make_sigma0_field(&Sigma0Kind::Uniform { sigma0_db: 0.0 }, 710, 710).unwrap();
        let geom = SceneGeometry::constant(710, 0.24, 7.0, 40.0);
        let model = CoherenceModel::new(0.0, 0.9, 100.0).unwrap();
        let st = synthesize_slc_stack(&vf, &s0, &[0, 40], &model, &geom, 2).unwrap();
        let mask = Array2::from_elem((710, 710), true);
        let db = measure_nesz(&st, &mask).unwrap();
        assert!(db.abs() < 0.05, "db={db}");
    }

    #[test]
    fn measure_nesz_edge_cases() {
        let st = zero_stack(40, 40);
        let mask = Array2::from_elem((40, 40), true);
        assert_eq!(measure_nesz(&st, &mask).unwrap(), f64::NEG_INFINITY);
        let small = Array2::from_shape_fn((40, 40), |(i, j)| i == 0 && j < 5);
        assert!(measure_nesz(&st, &small).is_err());
    }

    #[test]
    fn degrade_rejects_target_below_original() {
        let st = zero_stack(8, 8);
        let model = NeszModel::constant(-10.0);
        let err = degrade_stack(&st, -15.0, &model, NoisePowerMode::TotalPower, 1).unwrap_err();
        match err {
            Error::TargetBelowOriginal { incidence_deg, .. } => {
                assert!((incidence_deg - 40.0).abs() < 1e-12)
            }
            other => panic!("unexpected error {other:?}"),
        }
    }
}

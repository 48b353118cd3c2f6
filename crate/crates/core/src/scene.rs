//! Synthetic ground-truth scenes and speckle-correlated SLC stacks.
//!
//! Every downstream error measurement is made against these exact truths.
//! Speckle is zero-mean circular complex Gaussian; pairwise coherence between
//! acquisitions follows the exponential-plus-floor temporal model
//! rho(dt) = rho_inf + (rho0 - rho_inf) * exp(-dt/tau).
//!
//! Stack construction decomposes each pixel's speckle into three parts:
//! a common component (weight sqrt(rho_inf)), a Markov chain whose step
//! correlation is exp(-dt/tau) (weight sqrt(rho0 - rho_inf)) and an
//! independent innovation (weight sqrt(1 - rho0)). The population coherence
//! of every pair then equals the temporal model exactly, because exponential
//! decay is multiplicative across chain steps.
//!
//! Sign convention: motion toward the sensor (positive LOS) shortens the
//! two-way path, so the deterministic phase of acquisition i is
//! -(4*pi/lambda) * v * (t_i - t_0); interferograms formed as
//! s_a * conj(s_b) with a the earlier date then carry positive phase for
//! positive LOS motion between a and b.

use crate::error::{Error, Result};
use crate::raster::RealGrid;
use crate::rng::{pixel_rng, stream, unit_circular_gaussian};
use crate::slc::{SlcRaster, SlcStack};
use crate::units::db_to_linear;
use ndarray::Array2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub const DAYS_PER_YEAR: f64 = 365.25;

/// Ground-truth LOS velocity patterns. Velocities are meters/year, positive
/// toward the sensor.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VelocityKind {
    Uniform {
        v_m_per_yr: f64,
    },
    /// Linear gradient along columns from `start` to `end` m/yr.
    LinearRamp {
        start_m_per_yr: f64,
        end_m_per_yr: f64,
    },
    /// Zero left of `strike_col`, `amplitude_m_per_yr` at and right of it.
    FaultStep {
        amplitude_m_per_yr: f64,
        strike_col: usize,
    },
    /// Gaussian subsidence/uplift bowl.
    GaussianBowl {
        peak_m_per_yr: f64,
        center_row: usize,
        center_col: usize,
        sigma_px: f64,
    },
    /// Column ramp tuned to produce `fringes` full interferometric fringes
    /// across the scene over `span_days` at wavelength `wavelength_m`.
    FringeRamp {
        fringes: f64,
        span_days: f64,
        wavelength_m: f64,
    },
}

impl VelocityKind {
    pub fn name(&self) -> &'static str {
        match self {
            VelocityKind::Uniform { .. } => "uniform",
            VelocityKind::LinearRamp { .. } => "linear-ramp",
            VelocityKind::FaultStep { .. } => "fault-step",
            VelocityKind::GaussianBowl { .. } => "gaussian-bowl",
            VelocityKind::FringeRamp { .. } => "fringe-ramp",
        }
    }
}

#[derive(Debug, Clone)]
pub struct VelocityField {
    pub v_los: RealGrid,
    pub kind: String,
}

pub fn make_velocity_field(kind: &VelocityKind, rows: usize, cols: usize) -> Result<VelocityField> {
    if rows == 0 || cols == 0 {
        return Err(Error::invalid("velocity field needs positive dims"));
    }
    let v_los = match *kind {
        VelocityKind::Uniform { v_m_per_yr } => {
            if !v_m_per_yr.is_finite() {
                return Err(Error::invalid("uniform velocity must be finite"));
            }
            RealGrid::from_elem((rows, cols), v_m_per_yr)
        }
        VelocityKind::LinearRamp {
            start_m_per_yr,
            end_m_per_yr,
        } => {
            let denom = (cols.max(2) - 1) as f64;
            RealGrid::from_shape_fn((rows, cols), |(_, j)| {
                start_m_per_yr + (end_m_per_yr - start_m_per_yr) * j as f64 / denom
            })
        }
        VelocityKind::FaultStep {
            amplitude_m_per_yr,
            strike_col,
        } => {
            if strike_col >= cols {
                return Err(Error::invalid(format!(
                    "strike column {strike_col} outside raster with {cols} columns"
                )));
            }
            RealGrid::from_shape_fn((rows, cols), |(_, j)| {
                if j >= strike_col {
                    amplitude_m_per_yr
                } else {
                    0.0
                }
            })
        }
        VelocityKind::GaussianBowl {
            peak_m_per_yr,
            center_row,
            center_col,
            sigma_px,
        } => {
            if !(sigma_px > 0.0) {
                return Err(Error::invalid("bowl sigma must be positive"));
            }
            RealGrid::from_shape_fn((rows, cols), |(i, j)| {
                let dr = i as f64 - center_row as f64;
                let dc = j as f64 - center_col as f64;
                peak_m_per_yr * (-(dr * dr + dc * dc) / (2.0 * sigma_px * sigma_px)).exp()
            })
        }
        VelocityKind::FringeRamp {
            fringes,
            span_days,
            wavelength_m,
        } => {
            if !(span_days > 0.0) || !(wavelength_m > 0.0) {
                return Err(Error::invalid("fringe ramp needs positive span and wavelength"));
            }
            // One fringe = lambda/2 of LOS change; the full scene spans
            // `fringes` of them over `span_days`.
            let peak_disp = fringes * wavelength_m / 2.0;
            let v_max = peak_disp / (span_days / DAYS_PER_YEAR);
            let denom = (cols.max(2) - 1) as f64;
            RealGrid::from_shape_fn((rows, cols), |(_, j)| v_max * j as f64 / denom)
        }
    };
    Ok(VelocityField {
        v_los,
        kind: kind.name().to_string(),
    })
}

/// Backscatter patterns in dB. Values far outside [-40, 10] dB are accepted
/// but flagged by `Sigma0Field::range_warning`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Sigma0Kind {
    Uniform {
        sigma0_db: f64,
    },
    /// Linear dB gradient along columns.
    Gradient {
        start_db: f64,
        end_db: f64,
    },
    /// Uniform background with a darker vertical band.
    DarkBand {
        background_db: f64,
        band_db: f64,
        band_start_col: usize,
        band_end_col: usize,
    },
}

impl Sigma0Kind {
    pub fn name(&self) -> &'static str {
        match self {
            Sigma0Kind::Uniform { .. } => "uniform",
            Sigma0Kind::Gradient { .. } => "gradient",
            Sigma0Kind::DarkBand { .. } => "dark-band",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Sigma0Field {
    pub sigma0_db: RealGrid,
    pub kind: String,
}

impl Sigma0Field {
    /// Soft check of the typical backscatter range.
    pub fn range_warning(&self) -> Option<String> {
        let lo = self.sigma0_db.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = self
            .sigma0_db
            .iter()
            .cloned()
            .fold(f64::NEG_INFINITY, f64::max);
        if lo < -40.0 || hi > 10.0 {
            Some(format!(
                "sigma0 range [{lo:.1}, {hi:.1}] dB extends outside the typical [-40, 10] dB"
            ))
        } else {
            None
        }
    }
}

pub fn make_sigma0_field(kind: &Sigma0Kind, rows: usize, cols: usize) -> Result<Sigma0Field> {
    if rows == 0 || cols == 0 {
        return Err(Error::invalid("sigma0 field needs positive dims"));
    }
    let sigma0_db = match *kind {
        Sigma0Kind::Uniform { sigma0_db } => {
            if !sigma0_db.is_finite() {
                return Err(Error::invalid("sigma0 must be finite"));
            }
            RealGrid::from_elem((rows, cols), sigma0_db)
        }
        Sigma0Kind::Gradient { start_db, end_db } => {
            let denom = (cols.max(2) - 1) as f64;
            RealGrid::from_shape_fn((rows, cols), |(_, j)| {
                start_db + (end_db - start_db) * j as f64 / denom
            })
        }
        Sigma0Kind::DarkBand {
            background_db,
            band_db,
            band_start_col,
            band_end_col,
        } => {
            if band_start_col >= band_end_col || band_end_col > cols {
                return Err(Error::invalid("dark band columns out of order or range"));
            }
            RealGrid::from_shape_fn((rows, cols), |(_, j)| {
                if j >= band_start_col && j < band_end_col {
                    band_db
                } else {
                    background_db
                }
            })
        }
    };
    Ok(Sigma0Field {
        sigma0_db,
        kind: kind.name().to_string(),
    })
}

/// Exponential-plus-floor temporal decorrelation model.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CoherenceModel {
    pub rho_inf: f64,
    pub rho0: f64,
    pub tau_days: f64,
}

impl CoherenceModel {
    pub fn new(rho_inf: f64, rho0: f64, tau_days: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho_inf) || !(0.0..=1.0).contains(&rho0) || rho_inf > rho0 {
            return Err(Error::invalid(format!(
                "need 0 <= rho_inf <= rho0 <= 1, got rho_inf={rho_inf} rho0={rho0}"
            )));
        }
        if !(tau_days > 0.0) {
            return Err(Error::invalid("tau_days must be positive"));
        }
        Ok(CoherenceModel {
            rho_inf,
            rho0,
            tau_days,
        })
    }
}

/// Population coherence of a pair separated by `dt_days`.
pub fn true_pairwise_coherence(model: &CoherenceModel, dt_days: f64) -> f64 {
    debug_assert!(dt_days >= 0.0);
    model.rho_inf + (model.rho0 - model.rho_inf) * (-dt_days / model.tau_days).exp()
}

/// Scene geometry shared by all acquisitions of a synthesized stack.
#[derive(Debug, Clone)]
pub struct SceneGeometry {
    pub wavelength_m: f64,
    pub pixel_spacing_m: (f64, f64),
    pub incidence_deg: Vec<f64>,
}

impl SceneGeometry {
    pub fn constant(cols: usize, wavelength_m: f64, pixel_spacing_m: f64, incidence_deg: f64) -> Self {
        SceneGeometry {
            wavelength_m,
            pixel_spacing_m: (pixel_spacing_m, pixel_spacing_m),
            incidence_deg: vec![incidence_deg; cols],
        }
    }
}

/// Deterministic phase of acquisition `i` relative to the first date.
fn acquisition_phase(v_m_per_yr: f64, dt_days: f64, wavelength_m: f64) -> f64 {
    let disp = v_m_per_yr * dt_days / DAYS_PER_YEAR;
    -(4.0 * PI / wavelength_m) * disp
}

/// Synthesize a speckle-correlated SLC stack with exact pairwise population
/// coherence and deterministic deformation phase. Output is a pure function
/// of the inputs and `seed`; generation is parallel over rows and
/// bit-identical to serial evaluation.
pub fn synthesize_slc_stack(
    velocity: &VelocityField,
    sigma0: &Sigma0Field,
    dates: &[i64],
    model: &CoherenceModel,
    geometry: &SceneGeometry,
    seed: u64,
) -> Result<SlcStack> {
    let (rows, cols) = velocity.v_los.dim();
    if sigma0.sigma0_db.dim() != (rows, cols) {
        return Err(Error::dims("velocity and sigma0 dims mismatch".to_string()));
    }
    if dates.len() < 2 {
        return Err(Error::invalid("need at least 2 acquisition dates"));
    }
    if !dates.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::invalid("dates must be strictly increasing"));
    }
    if geometry.incidence_deg.len() != cols {
        return Err(Error::dims("incidence field length mismatch".to_string()));
    }
    let n = dates.len();
    let w_common = model.rho_inf.sqrt();
    let w_chain = (model.rho0 - model.rho_inf).sqrt();
    let w_innov = (1.0 - model.rho0).sqrt();
    // Markov step correlations between consecutive acquisitions.
    let steps: Vec<f64> = dates
        .windows(2)
        .map(|w| (-((w[1] - w[0]) as f64) / model.tau_days).exp())
        .collect();

    let amplitude: RealGrid = sigma0
        .sigma0_db
        .mapv(|db| db_to_linear(db).map(f64::sqrt).unwrap_or(f64::NAN));
    if amplitude.iter().any(|a| !a.is_finite()) {
        return Err(Error::invalid("sigma0 field contains non-finite values"));
    }

    let mut grids: Vec<Array2<Complex64>> =
        (0..n).map(|_| Array2::zeros((rows, cols))).collect();

    // Parallel over rows; each pixel derives all randomness from its own
    // keyed streams, so the tiling cannot affect the result.
    let row_chunks: Vec<Vec<Vec<Complex64>>> = (0..rows)
        .into_par_iter()
        .map(|i| {
            let mut out = vec![vec![Complex64::new(0.0, 0.0); cols]; n];
            for j in 0..cols {
                let common =
                    unit_circular_gaussian(&mut pixel_rng(seed, stream::SCENE_COMMON, i, j));
                let mut chain =
                    unit_circular_gaussian(&mut pixel_rng(seed, stream::scene_chain(0), i, j));
                let amp = amplitude[[i, j]];
                let v = velocity.v_los[[i, j]];
                for (k, &date) in dates.iter().enumerate() {
                    if k > 0 {
                        let a = steps[k - 1];
                        let g = unit_circular_gaussian(&mut pixel_rng(
                            seed,
                            stream::scene_chain(k),
                            i,
                            j,
                        ));
                        chain = chain * a + g * (1.0 - a * a).sqrt();
                    }
                    let innov = unit_circular_gaussian(&mut pixel_rng(
                        seed,
                        stream::scene_innovation(k),
                        i,
                        j,
                    ));
                    let speckle = common * w_common + chain * w_chain + innov * w_innov;
                    let phase =
                        acquisition_phase(v, (date - dates[0]) as f64, geometry.wavelength_m);
                    out[k][j] = speckle * amp * Complex64::from_polar(1.0, phase);
                }
            }
            out
        })
        .collect();
    for (i, row) in row_chunks.into_iter().enumerate() {
        for (k, vals) in row.into_iter().enumerate() {
            for (j, z) in vals.into_iter().enumerate() {
                grids[k][[i, j]] = z;
            }
        }
    }

    let slcs = grids
        .into_iter()
        .zip(dates)
        .map(|(g, &date)| {
            SlcRaster::new(
                g,
                geometry.pixel_spacing_m,
                geometry.wavelength_m,
                geometry.incidence_deg.clone(),
                date,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    SlcStack::new(slcs)
}

/// Synthesize exactly two acquisitions whose population coherence is `rho`,
/// with deterministic deformation phase from `velocity` over the date span:
/// s2 = (rho*s1 + sqrt(1-rho^2)*w) * exp(i*phi_def).
pub fn synthesize_slc_pair(
    velocity: &VelocityField,
    sigma0: &Sigma0Field,
    date_a: i64,
    date_b: i64,
    rho: f64,
    geometry: &SceneGeometry,
    seed: u64,
) -> Result<SlcStack> {
    let (rows, cols) = velocity.v_los.dim();
    if sigma0.sigma0_db.dim() != (rows, cols) {
        return Err(Error::dims("velocity and sigma0 dims mismatch".to_string()));
    }
    if date_a >= date_b {
        return Err(Error::invalid("pair requires date_a < date_b"));
    }
    if !(0.0..=1.0).contains(&rho) {
        return Err(Error::invalid("pair coherence must be in [0, 1]"));
    }
    if geometry.incidence_deg.len() != cols {
        return Err(Error::dims("incidence field length mismatch".to_string()));
    }
    let dt = (date_b - date_a) as f64;
    let mut g1 = Array2::zeros((rows, cols));
    let mut g2 = Array2::zeros((rows, cols));
    for i in 0..rows {
        for j in 0..cols {
            let amp = db_to_linear(sigma0.sigma0_db[[i, j]])?.sqrt();
            let s1 = unit_circular_gaussian(&mut pixel_rng(seed, stream::scene_chain(0), i, j));
            let w = unit_circular_gaussian(&mut pixel_rng(seed, stream::scene_chain(1), i, j));
            let phase = acquisition_phase(velocity.v_los[[i, j]], dt, geometry.wavelength_m);
            g1[[i, j]] = s1 * amp;
            g2[[i, j]] =
                (s1 * rho + w * (1.0 - rho * rho).sqrt()) * amp * Complex64::from_polar(1.0, phase);
        }
    }
    let mk = |g, date| {
        SlcRaster::new(
            g,
            geometry.pixel_spacing_m,
            geometry.wavelength_m,
            geometry.incidence_deg.clone(),
            date,
        )
    };
    SlcStack::new(vec![mk(g1, date_a)?, mk(g2, date_b)?])
}

/// Exact LOS displacement accumulated between two dates, in meters.
pub fn ground_truth_los(velocity: &VelocityField, date_a: i64, date_b: i64) -> Result<RealGrid> {
    if date_a >= date_b {
        return Err(Error::invalid("ground truth requires date_a < date_b"));
    }
    let years = (date_b - date_a) as f64 / DAYS_PER_YEAR;
    Ok(velocity.v_los.mapv(|v| v * years))
}

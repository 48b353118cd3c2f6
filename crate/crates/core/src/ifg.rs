//! Interferogram formation, coherence estimation, and the closed-form
//! SNR/coherence/phase-error model chain.
//!
//! Phase convention: the interferogram of the pair (a, b) with a the earlier
//! date is s_a * conj(s_b), so motion toward the sensor between a and b
//! yields positive phase.

use crate::error::{Error, Result};
use crate::raster::{ComplexGrid, RealGrid};
use crate::slc::SlcRaster;
use crate::units::db_to_linear;

/// Per-pixel complex interferogram s_a * conj(s_b).
pub fn form_interferogram(slc_a: &SlcRaster, slc_b: &SlcRaster) -> Result<ComplexGrid> {
    if !slc_a.same_geometry(slc_b) {
        return Err(Error::dims(
            "interferogram inputs must share geometry".to_string(),
        ));
    }
    let mut out = ComplexGrid::zeros(slc_a.data.dim());
    ndarray::Zip::from(&mut out)
        .and(&slc_a.data)
        .and(&slc_b.data)
        .for_each(|o, a, b| *o = a * b.conj());
    Ok(out)
}

/// Sample coherence magnitude over non-overlapping windows:
/// |sum s_a conj(s_b)| / sqrt(sum |s_a|^2 * sum |s_b|^2). In [0, 1] by
/// Cauchy-Schwarz; windows with zero power in either input emit NaN.
/// Output dims are floor(dims / window); each estimate uses
/// win_rows*win_cols looks.
pub fn estimate_coherence(
    slc_a: &SlcRaster,
    slc_b: &SlcRaster,
    win_rows: usize,
    win_cols: usize,
) -> Result<RealGrid> {
    if !slc_a.same_geometry(slc_b) {
        return Err(Error::dims(
            "coherence inputs must share geometry".to_string(),
        ));
    }
    if win_rows < 2 || win_cols < 2 {
        return Err(Error::invalid("coherence window must be at least 2x2"));
    }
    let (rows, cols) = slc_a.data.dim();
    if win_rows > rows || win_cols > cols {
        return Err(Error::WindowTooLarge {
            win_rows,
            win_cols,
            rows,
            cols,
        });
    }
    let (out_r, out_c) = (rows / win_rows, cols / win_cols);
    let mut out = RealGrid::zeros((out_r, out_c));
    for i in 0..out_r {
        for j in 0..out_c {
            let mut num = num_complex::Complex64::new(0.0, 0.0);
            let (mut pa, mut pb) = (0.0f64, 0.0f64);
            for di in 0..win_rows {
                for dj in 0..win_cols {
                    let a = slc_a.data[[i * win_rows + di, j * win_cols + dj]];
                    let b = slc_b.data[[i * win_rows + di, j * win_cols + dj]];
                    num += a * b.conj();
                    pa += a.norm_sqr();
                    pb += b.norm_sqr();
                }
            }
            out[[i, j]] = if pa > 0.0 && pb > 0.0 {
                (num.norm() / (pa * pb).sqrt()).min(1.0)
            } else {
                f64::NAN
            };
        }
    }
    Ok(out)
}

/// Coherence loss from finite SNR: rho = 1 / (1 + 1/SNR_linear).
pub fn snr_decorrelation(snr_db: f64) -> f64 {
    if snr_db == f64::NEG_INFINITY {
        return 0.0;
    }
    if snr_db == f64::INFINITY {
        return 1.0;
    }
    let snr = db_to_linear(snr_db).expect("snr_decorrelation: finite dB required");
    1.0 / (1.0 + 1.0 / snr)
}

/// Total coherence of the degraded signal: rho_original * rho_SNR.
pub fn predict_noisy_coherence(rho_original: f64, snr_db: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&rho_original) {
        return Err(Error::invalid(format!(
            "rho_original must be in [0, 1], got {rho_original}"
        )));
    }
    Ok(rho_original * snr_decorrelation(snr_db))
}

/// Cramer-Rao standard deviation of multilooked LOS displacement:
/// (lambda/4pi) * 1/sqrt(2 N) * sqrt((1 - rho^2)/rho^2). Unbounded at
/// rho = 0, which is rejected.
pub fn cramer_rao_los_std(rho_total: f64, n_looks: u32, wavelength_m: f64) -> Result<f64> {
    if !(rho_total > 0.0 && rho_total <= 1.0) {
        return Err(Error::numerical(format!(
            "LOS error model needs rho in (0, 1], got {rho_total} (zero coherence is unbounded)"
        )));
    }
    if n_looks < 1 {
        return Err(Error::invalid("look count must be >= 1"));
    }
    if !(wavelength_m > 0.0) {
        return Err(Error::invalid("wavelength must be positive"));
    }
    let prefactor = wavelength_m / (4.0 * std::f64::consts::PI);
    let looks = 1.0 / (2.0 * n_looks as f64).sqrt();
    Ok(prefactor * looks * ((1.0 - rho_total * rho_total).sqrt() / rho_total))
}

/// Inputs of the closed-form error chain for one coherence/SNR operating
/// point.
#[derive(Debug, Clone, Copy)]
pub struct ErrorModelInput {
    pub rho_original: f64,
    pub snr_db: f64,
    pub n_looks: u32,
    pub wavelength_m: f64,
}

/// One evaluated point of the error chain.
#[derive(Debug, Clone, Copy)]
pub struct ErrorModelPoint {
    pub snr_db: f64,
    pub rho_noisy: f64,
    pub sigma_los_m: f64,
}

/// Evaluate rho_noisy and the LOS error std for one operating point.
pub fn los_error_model(input: &ErrorModelInput) -> Result<ErrorModelPoint> {
    if !input.rho_original.is_finite() || !input.snr_db.is_finite() {
        return Err(Error::invalid("error model inputs must be finite"));
    }
    let rho_noisy = predict_noisy_coherence(input.rho_original, input.snr_db)?;
    let sigma_los_m = cramer_rao_los_std(rho_noisy, input.n_looks, input.wavelength_m)?;
    Ok(ErrorModelPoint {
        snr_db: input.snr_db,
        rho_noisy,
        sigma_los_m,
    })
}

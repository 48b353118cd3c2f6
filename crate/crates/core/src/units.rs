//! Power-scale conversions and the phase-to-displacement prefactor.
//!
//! All power quantities (sigma0, NESZ, SNR) are carried in dB and converted
//! to linear ratios only at the point of use. Line-of-sight sign convention:
//! positive unwrapped phase = motion toward the sensor = positive LOS
//! displacement.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Convert a decibel power quantity to a linear power ratio, 10^(dB/10).
pub fn db_to_linear(x_db: f64) -> Result<f64> {
    if !x_db.is_finite() {
        return Err(Error::invalid(format!("non-finite dB value: {x_db}")));
    }
    Ok(10f64.powf(x_db / 10.0))
}

/// Convert a linear power ratio to decibels, 10·log10(x).
pub fn linear_to_db(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::invalid(format!(
            "linear power must be finite and positive, got {x}"
        )));
    }
    Ok(10.0 * x.log10())
}

/// Linear power for a dB value that may be -inf (a noise-free channel).
pub(crate) fn db_to_linear_allow_neg_inf(x_db: f64) -> Result<f64> {
    if x_db == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    db_to_linear(x_db)
}

/// LOS displacement in meters for an unwrapped phase: (lambda / 4*pi) * phase.
pub fn phase_to_los(phase_rad: f64, wavelength_m: f64) -> Result<f64> {
    if !(wavelength_m > 0.0) {
        return Err(Error::invalid(format!(
            "wavelength must be positive, got {wavelength_m}"
        )));
    }
    Ok(wavelength_m / (4.0 * PI) * phase_rad)
}

/// The meters-per-radian factor lambda / 4*pi.
pub fn los_per_radian(wavelength_m: f64) -> Result<f64> {
    phase_to_los(1.0, wavelength_m)
}

/// Wrap a phase into (-pi, pi].
pub fn wrap_phase(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let two_pi = 2.0 * PI;
    let mut w = x.rem_euclid(two_pi); // [0, 2*pi)
    if w > PI {
        w -= two_pi;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn db_identity_and_direct_values() {
        assert_eq!(db_to_linear(0.0).unwrap(), 1.0);
        // 10^(-1.5) and 10^(-5)
        assert!((db_to_linear(-15.0).unwrap() - 0.0316228).abs() < 1e-6);
        assert!((db_to_linear(-50.0).unwrap() - 1.0e-5).abs() < 1e-12);
    }

    #[test]
    fn db_round_trip() {
        for &x in &[1e-10, 1e-3, 0.5, 1.0, 7.3, 1e4, 1e10] {
            let db = linear_to_db(x).unwrap();
            let back = db_to_linear(db).unwrap();
            assert!((back - x).abs() / x < 1e-12, "x={x} back={back}");
        }
        // round-trip in the dB domain to 1e-9 dB
        for &db in &[-50.0, -15.0, 0.0, 3.7, 20.0] {
            let lin = db_to_linear(db).unwrap();
            assert!((linear_to_db(lin).unwrap() - db).abs() < 1e-9);
        }
    }

    #[test]
    fn db_rejects_non_finite() {
        assert!(db_to_linear(f64::NAN).is_err());
        assert!(db_to_linear(f64::INFINITY).is_err());
        assert!(linear_to_db(0.0).is_err());
        assert!(linear_to_db(-1.0).is_err());
    }

    #[test]
    fn phase_to_los_values() {
        assert_eq!(phase_to_los(0.0, 0.24).unwrap(), 0.0);
        // one fringe (2*pi) is half a wavelength of LOS change
        assert!((phase_to_los(2.0 * PI, 0.24).unwrap() - 0.12).abs() < 1e-12);
        assert!((phase_to_los(PI, 0.24).unwrap() - 0.06).abs() < 1e-12);
        assert!(phase_to_los(1.0, 0.0).is_err());
    }

    #[test]
    fn phase_to_los_linear_in_phase_and_wavelength() {
        let a = phase_to_los(1.3, 0.24).unwrap();
        assert!((phase_to_los(2.6, 0.24).unwrap() - 2.0 * a).abs() < 1e-15);
        assert!((phase_to_los(1.3, 0.48).unwrap() - 2.0 * a).abs() < 1e-15);
    }

    #[test]
    fn wrap_phase_range_and_edges() {
        assert_eq!(wrap_phase(0.0), 0.0);
        assert!((wrap_phase(PI) - PI).abs() < 1e-15); // pi stays pi
        assert!(wrap_phase(PI + 1e-9) < 0.0); // just past pi wraps negative
        assert!((wrap_phase(3.0 * PI) - PI).abs() < 1e-12);
        for &x in &[-10.0, -3.2, 0.1, 7.9, 123.456] {
            let w = wrap_phase(x);
            assert!(w > -PI && w <= PI, "w={w}");
            // congruent mod 2*pi
            let k = (x - w) / (2.0 * PI);
            assert!((k - k.round()).abs() < 1e-9);
        }
    }
}

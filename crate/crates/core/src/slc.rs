//! Single-look-complex rasters, stacks, and interferogram containers.

use crate::error::{Error, Result};
use crate::raster::{ComplexGrid, RealGrid};

/// A focused complex-amplitude image. Power is |z|^2 (unitless sigma0 scale),
/// the incidence angle is stored per column (it varies across track), and the
/// acquisition date is in days since an arbitrary epoch.
#[derive(Debug, Clone)]
pub struct SlcRaster {
    pub data: ComplexGrid,
    pub pixel_spacing_m: (f64, f64),
    pub wavelength_m: f64,
    pub incidence_deg: Vec<f64>,
    pub date: i64,
}

impl SlcRaster {
    pub fn new(
        data: ComplexGrid,
        pixel_spacing_m: (f64, f64),
        wavelength_m: f64,
        incidence_deg: Vec<f64>,
        date: i64,
    ) -> Result<Self> {
        let (rows, cols) = data.dim();
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("SLC must have positive dimensions"));
        }
        if !(wavelength_m > 0.0) {
            return Err(Error::invalid("wavelength must be positive"));
        }
        if incidence_deg.len() != cols {
            return Err(Error::dims(format!(
                "incidence field has {} entries for {} columns",
                incidence_deg.len(),
                cols
            )));
        }
        if !incidence_deg.iter().all(|&a| a > 0.0 && a < 90.0) {
            return Err(Error::invalid("incidence angles must lie in (0, 90) deg"));
        }
        Ok(SlcRaster {
            data,
            pixel_spacing_m,
            wavelength_m,
            incidence_deg,
            date,
        })
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn same_geometry(&self, other: &SlcRaster) -> bool {
        self.data.dim() == other.data.dim()
            && self.wavelength_m == other.wavelength_m
            && self.incidence_deg == other.incidence_deg
    }
}

/// Constant incidence angle across the swath.
pub fn constant_incidence(cols: usize, deg: f64) -> Vec<f64> {
    vec![deg; cols]
}

/// An ordered stack of co-registered SLCs with strictly increasing dates.
#[derive(Debug, Clone)]
pub struct SlcStack {
    slcs: Vec<SlcRaster>,
}

impl SlcStack {
    pub fn new(slcs: Vec<SlcRaster>) -> Result<Self> {
        if slcs.len() < 2 {
            return Err(Error::invalid("a stack needs at least 2 acquisitions"));
        }
        let first = &slcs[0];
        for s in &slcs[1..] {
            if !first.same_geometry(s) {
                return Err(Error::dims("stack SLCs must share geometry".to_string()));
            }
        }
        if !slcs.windows(2).all(|w| w[0].date < w[1].date) {
            return Err(Error::invalid("stack dates must be strictly increasing"));
        }
        Ok(SlcStack { slcs })
    }

    pub fn slcs(&self) -> &[SlcRaster] {
        &self.slcs
    }

    pub fn len(&self) -> usize {
        self.slcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slcs.is_empty()
    }

    pub fn dates(&self) -> Vec<i64> {
        self.slcs.iter().map(|s| s.date).collect()
    }

    pub fn rows(&self) -> usize {
        self.slcs[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.slcs[0].cols()
    }

    pub fn wavelength_m(&self) -> f64 {
        self.slcs[0].wavelength_m
    }

    pub fn get(&self, i: usize) -> &SlcRaster {
        &self.slcs[i]
    }

    /// Replace the pixel data of every SLC, keeping metadata. Used by the
    /// noise stage which preserves geometry exactly.
    pub fn with_data(&self, data: Vec<ComplexGrid>) -> Result<Self> {
        if data.len() != self.slcs.len() {
            return Err(Error::dims("replacement data length mismatch".to_string()));
        }
        let slcs = self
            .slcs
            .iter()
            .zip(data)
            .map(|(s, d)| {
                if d.dim() != s.data.dim() {
                    return Err(Error::dims("replacement grid dims mismatch".to_string()));
                }
                Ok(SlcRaster { data: d, ..s.clone() })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SlcStack { slcs })
    }
}

/// Wrapped phase plus coherence for one date pair at a given look count.
#[derive(Debug, Clone)]
pub struct Interferogram {
    pub wrapped_phase: RealGrid,
    pub coherence: RealGrid,
    pub date_a: i64,
    pub date_b: i64,
    pub n_looks: u32,
}

impl Interferogram {
    pub fn new(
        wrapped_phase: RealGrid,
        coherence: RealGrid,
        date_a: i64,
        date_b: i64,
        n_looks: u32,
    ) -> Result<Self> {
        if wrapped_phase.dim() != coherence.dim() {
            return Err(Error::dims(
                "wrapped phase and coherence dims mismatch".to_string(),
            ));
        }
        if date_a >= date_b {
            return Err(Error::invalid("interferogram requires date_a < date_b"));
        }
        if n_looks < 1 {
            return Err(Error::invalid("look count must be >= 1"));
        }
        let pi = std::f64::consts::PI;
        for &p in wrapped_phase.iter() {
            if p.is_finite() && !(p > -pi - 1e-9 && p <= pi + 1e-9) {
                return Err(Error::invalid(format!("wrapped phase {p} outside (-pi, pi]")));
            }
        }
        for &c in coherence.iter() {
            if c.is_finite() && !(0.0..=1.0 + 1e-12).contains(&c) {
                return Err(Error::invalid(format!("coherence {c} outside [0, 1]")));
            }
        }
        Ok(Interferogram {
            wrapped_phase,
            coherence,
            date_a,
            date_b,
            n_looks,
        })
    }
}

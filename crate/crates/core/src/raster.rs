//! Grid primitives shared by every stage.
//!
//! Rasters are row-major with the origin at the top-left. Real grids carry
//! masked pixels as NaN; masked pixels are excluded from all statistics.

use crate::error::{Error, Result};
use ndarray::Array2;
use num_complex::Complex64;

pub type RealGrid = Array2<f64>;
pub type ComplexGrid = Array2<Complex64>;

fn check_window(rows: usize, cols: usize, win_rows: usize, win_cols: usize) -> Result<()> {
    if win_rows == 0 || win_cols == 0 {
        return Err(Error::invalid("multilook window dims must be >= 1"));
    }
    if win_rows > rows || win_cols > cols {
        return Err(Error::WindowTooLarge {
            win_rows,
            win_cols,
            rows,
            cols,
        });
    }
    Ok(())
}

/// Complex mean over non-overlapping windows. Trailing partial windows are
/// discarded so every output pixel averages exactly win_rows*win_cols
/// samples; the equivalent look count multiplies by that window area.
pub fn multilook_complex(
    grid: &ComplexGrid,
    win_rows: usize,
    win_cols: usize,
) -> Result<ComplexGrid> {
    let (rows, cols) = grid.dim();
    check_window(rows, cols, win_rows, win_cols)?;
    let (out_r, out_c) = (rows / win_rows, cols / win_cols);
    let norm = 1.0 / (win_rows * win_cols) as f64;
    let mut out = ComplexGrid::zeros((out_r, out_c));
    for i in 0..out_r {
        for j in 0..out_c {
            let mut acc = Complex64::new(0.0, 0.0);
            for di in 0..win_rows {
                for dj in 0..win_cols {
                    acc += grid[[i * win_rows + di, j * win_cols + dj]];
                }
            }
            out[[i, j]] = acc * norm;
        }
    }
    Ok(out)
}

/// Real mean over non-overlapping windows; NaN inputs poison their window.
pub fn multilook_real(grid: &RealGrid, win_rows: usize, win_cols: usize) -> Result<RealGrid> {
    let (rows, cols) = grid.dim();
    check_window(rows, cols, win_rows, win_cols)?;
    let (out_r, out_c) = (rows / win_rows, cols / win_cols);
    let norm = 1.0 / (win_rows * win_cols) as f64;
    let mut out = RealGrid::zeros((out_r, out_c));
    for i in 0..out_r {
        for j in 0..out_c {
            let mut acc = 0.0;
            for di in 0..win_rows {
                for dj in 0..win_cols {
                    acc += grid[[i * win_rows + di, j * win_cols + dj]];
                }
            }
            out[[i, j]] = acc * norm;
        }
    }
    Ok(out)
}

/// Subtract the value at the reference pixel so the output is exactly zero
/// there. A masked or non-finite reference is rejected.
pub fn reference_to_pixel(grid: &RealGrid, ref_row: usize, ref_col: usize) -> Result<RealGrid> {
    let (rows, cols) = grid.dim();
    if ref_row >= rows || ref_col >= cols {
        return Err(Error::invalid(format!(
            "reference pixel ({ref_row}, {ref_col}) out of bounds for {rows}x{cols} raster"
        )));
    }
    let r = grid[[ref_row, ref_col]];
    if !r.is_finite() {
        return Err(Error::MaskedReference {
            row: ref_row,
            col: ref_col,
        });
    }
    let mut out = grid.mapv(|v| v - r);
    out[[ref_row, ref_col]] = 0.0;
    Ok(out)
}

/// Mean over finite pixels; None when no pixel is finite.
pub fn nan_mean(grid: &RealGrid) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0usize;
    for &v in grid.iter() {
        if v.is_finite() {
            sum += v;
            n += 1;
        }
    }
    (n > 0).then(|| sum / n as f64)
}

/// Population standard deviation over finite pixels.
pub fn nan_std(grid: &RealGrid) -> Option<f64> {
    let mean = nan_mean(grid)?;
    let mut sum2 = 0.0;
    let mut n = 0usize;
    for &v in grid.iter() {
        if v.is_finite() {
            let d = v - mean;
            sum2 += d * d;
            n += 1;
        }
    }
    Some((sum2 / n as f64).sqrt())
}

/// Median over finite pixels; None when no pixel is finite.
pub fn nan_median(grid: &RealGrid) -> Option<f64> {
    let mut vals: Vec<f64> = grid.iter().copied().filter(|v| v.is_finite()).collect();
    if vals.is_empty() {
        return None;
    }
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = vals.len();
    Some(if n % 2 == 1 {
        vals[n / 2]
    } else {
        0.5 * (vals[n / 2 - 1] + vals[n / 2])
    })
}

pub fn median_of(mut vals: Vec<f64>) -> Option<f64> {
    vals.retain(|v| v.is_finite());
    if vals.is_empty() {
        return None;
    }
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = vals.len();
    Some(if n % 2 == 1 {
        vals[n / 2]
    } else {
        0.5 * (vals[n / 2 - 1] + vals[n / 2])
    })
}

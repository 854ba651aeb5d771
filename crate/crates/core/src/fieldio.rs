//! Plain-text serialization of grid fields.
//!
//! Real fields go out as `x,y,<name>` CSV, complex fields as `x,y,re,im`,
//! one row per grid point in row-major order (l outer, k inner, matching
//! the flat index `k + nx*l`). Floats print with Rust's shortest
//! round-trip formatting, so a parse of the emitted text reproduces the
//! original values bit for bit.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hydro::Grid2D;

/// Render a real scalar field as CSV with value column `name`.
pub fn real_field_csv(grid: Grid2D, name: &str, values: &[f64]) -> Result<String> {
    check_len(grid, values.len())?;
    check_name(name)?;
    let mut out = String::new();
    out.push_str("x,y,");
    out.push_str(name);
    out.push('\n');
    for l in 0..grid.ny_points() {
        for k in 0..grid.nx_points() {
            let v = values[grid.flat_index(k, l)];
            out.push_str(&format!("{},{},{}\n", grid.x(k), grid.y(l), v));
        }
    }
    Ok(out)
}

/// Render a complex field as `x,y,re,im` CSV.
pub fn complex_field_csv(grid: Grid2D, values: &[Complex64]) -> Result<String> {
    check_len(grid, values.len())?;
    let mut out = String::from("x,y,re,im\n");
    for l in 0..grid.ny_points() {
        for k in 0..grid.nx_points() {
            let v = values[grid.flat_index(k, l)];
            out.push_str(&format!("{},{},{},{}\n", grid.x(k), grid.y(l), v.re, v.im));
        }
    }
    Ok(out)
}

/// Parse a real-field CSV produced by [`real_field_csv`]. Returns the value
/// column's name and the values in row-major order. Coordinates are
/// trusted to follow the writer's ordering and are not re-derived.
pub fn parse_real_field(text: &str) -> Result<(String, Vec<f64>)> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty field file".into()))?;
    let name = header
        .strip_prefix("x,y,")
        .ok_or_else(|| Error::Parse(format!("bad field header {header:?}")))?;
    if name.is_empty() || name.contains(',') {
        return Err(Error::Parse(format!("bad field header {header:?}")));
    }
    let mut values = Vec::new();
    for line in lines {
        let cols = split_floats(line, 3)?;
        values.push(cols[2]);
    }
    Ok((name.to_string(), values))
}

/// Parse a complex-field CSV produced by [`complex_field_csv`].
pub fn parse_complex_field(text: &str) -> Result<Vec<Complex64>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty field file".into()))?;
    if header != "x,y,re,im" {
        return Err(Error::Parse(format!("bad field header {header:?}")));
    }
    let mut values = Vec::new();
    for line in lines {
        let cols = split_floats(line, 4)?;
        values.push(Complex64::new(cols[2], cols[3]));
    }
    Ok(values)
}

fn split_floats(line: &str, want: usize) -> Result<Vec<f64>> {
    let cols: Vec<&str> = line.split(',').collect();
    if cols.len() != want {
        return Err(Error::Parse(format!("expected {want} columns, got {} in {line:?}", cols.len())));
    }
    cols.iter()
        .map(|c| c.parse::<f64>().map_err(|e| Error::Parse(format!("{e} in {line:?}"))))
        .collect()
}

fn check_len(grid: Grid2D, len: usize) -> Result<()> {
    if len != grid.num_points() {
        return Err(Error::DimensionMismatch { expected: grid.num_points(), actual: len });
    }
    Ok(())
}

fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || name.contains(',') || name.contains('\n') {
        return Err(Error::InvalidParameter(format!("bad column name {name:?}")));
    }
    Ok(())
}

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};
use std::sync::Arc;

use super::{Field, Grid};
use crate::error::{Error, Result};

const AXIS_NAMES: [&str; 3] = ["x", "y", "z"];

/// Writes the interior nodes as CSV: header `x[,y[,z]],u`, one row per node in row-major order,
/// 17 significant digits.
pub fn write_field_csv(field: &Field, out: &mut impl Write) -> Result<()> {
    let grid = field.grid();
    let mut text = String::new();
    let header: Vec<&str> = AXIS_NAMES[..grid.dim()].iter().copied().chain(["u"]).collect();
    text.push_str(&header.join(","));
    text.push('\n');
    for (j, &u) in field.values().iter().enumerate() {
        for x in grid.node_coords(j) {
            let _ = write!(text, "{x:.16e},");
        }
        let _ = writeln!(text, "{u:.16e}");
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}

/// Reads a field written by [`write_field_csv`] back onto `grid`, checking the node coordinates.
pub fn read_field_csv(grid: Arc<Grid>, input: impl Read) -> Result<Field> {
    let reader = BufReader::new(input);
    let mut lines = reader.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty field file".into()))??;
    let expected: Vec<&str> = AXIS_NAMES[..grid.dim()].iter().copied().chain(["u"]).collect();
    if header.trim() != expected.join(",") {
        return Err(Error::Parse(format!(
            "header {:?} does not match {:?}",
            header.trim(),
            expected.join(",")
        )));
    }
    let tol = 1e-9 * grid.spacing().iter().cloned().fold(f64::INFINITY, f64::min);
    let mut values = Vec::with_capacity(grid.node_count());
    for (row, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let nums = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Parse(format!("row {}: {e}", row + 2)))?;
        if nums.len() != grid.dim() + 1 {
            return Err(Error::Parse(format!("row {}: expected {} columns", row + 2, grid.dim() + 1)));
        }
        let j = values.len();
        if j >= grid.node_count() {
            return Err(Error::Parse("more rows than interior nodes".into()));
        }
        let coords = grid.node_coords(j);
        if coords.iter().zip(&nums).any(|(a, b)| (a - b).abs() > tol) {
            return Err(Error::Parse(format!("row {}: coordinates do not match the grid", row + 2)));
        }
        values.push(nums[grid.dim()]);
    }
    Field::new(grid, values)
}

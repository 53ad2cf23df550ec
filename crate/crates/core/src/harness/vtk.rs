//! Legacy VTK structured-points export of grid fields.

use std::io::Write;

use crate::discretize::VoxelGrid;
use crate::error::{invalid, Result};

/// Largest lattice box written, in points.
pub const VTK_POINT_LIMIT: usize = 64 * 1024 * 1024;

pub enum Field<'a> {
    Scalar(&'a [f64]),
    Labels(&'a [u32]),
}

/// Writes named node fields on the lattice box of the grid. Points outside
/// the domain carry 0 (scalars) or -1 (labels).
pub fn write_vtk(grid: &VoxelGrid, fields: &[(&str, Field<'_>)], title: &str, w: &mut impl Write) -> Result<()> {
    let k = grid.half_extent();
    let side = (2 * k + 1) as usize;
    let total = side * side * side;
    if total > VTK_POINT_LIMIT {
        return Err(invalid(format!("{total} lattice points exceed the export limit")));
    }
    for (name, f) in fields {
        let len = match f {
            Field::Scalar(v) => v.len(),
            Field::Labels(v) => v.len(),
        };
        if len != grid.len() {
            return Err(invalid(format!("field `{name}` has {len} values for {} nodes", grid.len())));
        }
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(invalid(format!("bad field name `{name}`")));
        }
    }
    let h = grid.h();
    let origin = -(k as f64) * h;
    writeln!(w, "# vtk DataFile Version 3.0")?;
    writeln!(w, "{}", title.lines().next().unwrap_or(""))?;
    writeln!(w, "ASCII")?;
    writeln!(w, "DATASET STRUCTURED_POINTS")?;
    writeln!(w, "DIMENSIONS {side} {side} {side}")?;
    writeln!(w, "ORIGIN {origin:?} {origin:?} {origin:?}")?;
    writeln!(w, "SPACING {h:?} {h:?} {h:?}")?;
    writeln!(w, "POINT_DATA {total}")?;
    // VTK orders points with x fastest.
    let slot = |x: i32, y: i32, z: i32| grid.node_at(&[x, y, z]);
    for (name, f) in fields {
        match f {
            Field::Scalar(v) => {
                writeln!(w, "SCALARS {name} double 1")?;
                writeln!(w, "LOOKUP_TABLE default")?;
                for z in -k..=k {
                    for y in -k..=k {
                        for x in -k..=k {
                            writeln!(w, "{:?}", slot(x, y, z).map_or(0.0, |i| v[i]))?;
                        }
                    }
                }
            }
            Field::Labels(v) => {
                writeln!(w, "SCALARS {name} int 1")?;
                writeln!(w, "LOOKUP_TABLE default")?;
                for z in -k..=k {
                    for y in -k..=k {
                        for x in -k..=k {
                            writeln!(w, "{}", slot(x, y, z).map_or(-1, |i| v[i] as i64))?;
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_grid_layout() {
        let grid = VoxelGrid::from_nodes(0.5, vec![[0, 0, 0], [1, 0, 0]], &[]).unwrap();
        let mut out = Vec::new();
        write_vtk(&grid, &[("psi", Field::Scalar(&[1.5, -2.0])), ("label", Field::Labels(&[0, 1]))], "t", &mut out)
            .unwrap();
        let text = String::from_utf8(out).unwrap();
        let k = grid.half_extent();
        let side = 2 * k + 1;
        assert!(text.contains(&format!("DIMENSIONS {side} {side} {side}")));
        let values: Vec<&str> = text.lines().skip_while(|l| !l.starts_with("LOOKUP")).skip(1).take((side * side * side) as usize).collect();
        let centre = ((k * side + k) * side + k) as usize;
        assert_eq!(values[centre], "1.5");
        assert_eq!(values[centre + 1], "-2.0");
        assert_eq!(values.iter().filter(|v| **v != "0.0").count(), 2);
    }

    #[test]
    fn length_mismatch_rejected() {
        let grid = VoxelGrid::from_nodes(0.5, vec![[0, 0, 0]], &[]).unwrap();
        assert!(write_vtk(&grid, &[("psi", Field::Scalar(&[]))], "t", &mut Vec::new()).is_err());
    }
}

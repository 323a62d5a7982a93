use std::io::{self, Write};

use super::{NodalLevel, SingularPoint, ZeroCellSet};
use crate::fields::FieldSource;

/// `level,epsilon,count`.
pub fn write_boxcounts_csv<W: Write>(levels: &[NodalLevel], mut out: W) -> io::Result<()> {
    writeln!(out, "level,epsilon,count")?;
    for (i, l) in levels.iter().enumerate() {
        writeln!(out, "{i},{:.12e},{}", l.epsilon, l.count)?;
    }
    Ok(())
}

/// Cell centres and the field norm there.
pub fn write_nodal_cells_csv<W: Write>(set: &ZeroCellSet, source: &dyn FieldSource, mut out: W) -> io::Result<()> {
    let n = set.grid.dim();
    let header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    writeln!(out, "{},norm", header.join(","))?;
    for &cell in &set.cells {
        let c = set.grid.cell_center(cell);
        let coords: Vec<String> = c.iter().map(|v| format!("{v:.9}")).collect();
        writeln!(out, "{},{:.6e}", coords.join(","), source.norm_at(&c))?;
    }
    Ok(())
}

/// Point coordinates, `|f|`, `|df|` and the crossing-angle gaps (if measured).
pub fn write_singular_points_csv<W: Write>(points: &[SingularPoint], gaps: &[Vec<f64>], mut out: W) -> io::Result<()> {
    let n = points.first().map_or(2, |p| p.position.len());
    let header: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    writeln!(out, "{},abs_f,abs_df,angle_gaps_deg", header.join(","))?;
    for (i, p) in points.iter().enumerate() {
        let coords: Vec<String> = p.position.iter().map(|v| format!("{v:.12}")).collect();
        let g: Vec<String> = gaps.get(i).map(|g| g.iter().map(|v| format!("{v:.3}")).collect()).unwrap_or_default();
        writeln!(out, "{},{:.3e},{:.3e},{}", coords.join(","), p.value.abs(), p.gradient_norm, g.join(" "))?;
    }
    Ok(())
}

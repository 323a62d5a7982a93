use super::NodalError;
use crate::fields::Domain;

/// Sampling lattice over a [`Domain`]: `res` nodes per axis at
/// `lower + (i + offset)·h` with `h = extent / res`.
///
/// Periodic domains have `res` cells per axis (the last wraps around);
/// boxes have `res − 1`. With a zero offset, the grids for `res` and `2·res`
/// are nested cell by cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellGrid {
    domain: Domain,
    res: usize,
    offset: f64,
}

pub const DEFAULT_OFFSET: f64 = std::f64::consts::SQRT_2 - 1.0;
const MIN_RES: usize = 8;

impl CellGrid {
    pub fn new(domain: Domain, res: usize) -> Result<Self, NodalError> {
        Self::with_offset(domain, res, DEFAULT_OFFSET)
    }

    /// `offset` is a fraction of the spacing, in `[0, 1)`.
    pub fn with_offset(domain: Domain, res: usize, offset: f64) -> Result<Self, NodalError> {
        if res < MIN_RES {
            return Err(NodalError::TooCoarse(res));
        }
        if !(0.0..1.0).contains(&offset) {
            return Err(NodalError::BadOffset(offset));
        }
        Ok(Self { domain, res, offset })
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn resolution(&self) -> usize {
        self.res
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn periodic(&self) -> bool {
        self.domain.periodic
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        self.domain.extent(axis) / self.res as f64
    }

    pub fn max_spacing(&self) -> f64 {
        (0..self.dim()).map(|a| self.spacing(a)).fold(0.0, f64::max)
    }

    pub fn cells_per_axis(&self) -> usize {
        if self.periodic() {
            self.res
        } else {
            self.res - 1
        }
    }

    pub fn num_nodes(&self) -> usize {
        self.res.pow(self.dim() as u32)
    }

    pub fn num_cells(&self) -> usize {
        self.cells_per_axis().pow(self.dim() as u32)
    }

    pub fn node_coord(&self, axis: usize, i: f64) -> f64 {
        self.domain.lower[axis] + (i + self.offset) * self.spacing(axis)
    }

    pub fn node_position(&self, node: usize) -> Vec<f64> {
        unflatten(node, self.res, self.dim()).iter().enumerate().map(|(a, &i)| self.node_coord(a, i as f64)).collect()
    }

    pub fn cell_index(&self, cell: usize) -> Vec<usize> {
        unflatten(cell, self.cells_per_axis(), self.dim())
    }

    pub fn cell_flat(&self, idx: &[usize]) -> usize {
        idx.iter().fold(0, |acc, &i| acc * self.cells_per_axis() + i)
    }

    pub fn cell_center(&self, cell: usize) -> Vec<f64> {
        self.cell_index(cell).iter().enumerate().map(|(a, &i)| self.node_coord(a, i as f64 + 0.5)).collect()
    }

    /// The `2ⁿ` corner nodes, corner `c` taking the upper node on axis `a`
    /// when bit `a` of `c` is set.
    pub fn corners(&self, cell: usize) -> Vec<usize> {
        let idx = self.cell_index(cell);
        let n = self.dim();
        (0..1usize << n)
            .map(|c| {
                idx.iter().enumerate().fold(0, |acc, (a, &i)| {
                    let j = if c & (1 << a) != 0 { (i + 1) % self.res } else { i };
                    acc * self.res + j
                })
            })
            .collect()
    }

    /// Cell containing `x`, wrapping periodic coordinates.
    pub fn cell_of(&self, x: &[f64]) -> Option<usize> {
        let cells = self.cells_per_axis() as i64;
        let mut idx = Vec::with_capacity(self.dim());
        for (a, &v) in x.iter().enumerate() {
            let t = ((v - self.domain.lower[a]) / self.spacing(a) - self.offset).floor() as i64;
            let t = if self.periodic() { t.rem_euclid(cells) } else { t };
            if !(0..cells).contains(&t) {
                return None;
            }
            idx.push(t as usize);
        }
        Some(self.cell_flat(&idx))
    }

    /// Neighbouring cells: all `3ⁿ − 1` when `diagonal`, else the `2n` face
    /// neighbours, together with the integer step taken.
    pub fn neighbors(&self, cell: usize, diagonal: bool) -> Vec<(usize, Vec<i64>)> {
        let n = self.dim();
        let idx = self.cell_index(cell);
        let cells = self.cells_per_axis() as i64;
        let mut out = Vec::new();
        for code in 0..3usize.pow(n as u32) {
            let step: Vec<i64> = (0..n).map(|a| (code / 3usize.pow(a as u32) % 3) as i64 - 1).collect();
            let moved = step.iter().filter(|&&s| s != 0).count();
            if moved == 0 || (!diagonal && moved > 1) {
                continue;
            }
            let mut target = Vec::with_capacity(n);
            for (a, &s) in step.iter().enumerate() {
                let t = idx[a] as i64 + s;
                let t = if self.periodic() { t.rem_euclid(cells) } else { t };
                if !(0..cells).contains(&t) {
                    break;
                }
                target.push(t as usize);
            }
            if target.len() == n {
                out.push((self.cell_flat(&target), step));
            }
        }
        out
    }
}

fn unflatten(mut flat: usize, base: usize, n: usize) -> Vec<usize> {
    let mut idx = vec![0; n];
    for a in (0..n).rev() {
        idx[a] = flat % base;
        flat /= base;
    }
    idx
}

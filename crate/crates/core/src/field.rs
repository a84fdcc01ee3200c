//! Plant lattice layout and a uniform-grid spatial index.

use crate::error::{Error, Result};
use crate::scenario::{FieldSpec, SeedingStrategy};

/// Relative slack on `extent / spacing` so that spacings such as 0.2 m on a
/// 10 m field give 51 rows instead of 50 after rounding.
const FLOOR_SLACK: f64 = 1e-9;

/// Upper bound on spatial-hash cells per plant; keeps tiny cutoffs from
/// allocating a huge empty table.
const MAX_CELLS_PER_PLANT: f64 = 4.0;

/// Number of lattice positions along one axis: `floor(extent / spacing) + 1`.
pub fn axis_count(extent_m: f64, spacing_m: f64) -> usize {
    let ratio = extent_m / spacing_m;
    (ratio * (1.0 + FLOOR_SLACK)).floor() as usize + 1
}

/// Number of plants a full lattice with this spacing holds.
pub fn grid_capacity(field: &FieldSpec, strategy: &SeedingStrategy) -> usize {
    axis_count(field.width_m, strategy.dx_m) * axis_count(field.height_m, strategy.dy_m)
}

/// Plant positions plus a bucketed index for radius queries.
#[derive(Debug, Clone)]
pub struct PlantGrid {
    positions: Vec<(f64, f64)>,
    cutoff_radius_m: f64,
    index: CellIndex,
}

#[derive(Debug, Clone)]
struct CellIndex {
    cell_size: f64,
    origin: (f64, f64),
    span: (f64, f64),
    cols: usize,
    rows: usize,
    /// `starts[c]..starts[c + 1]` indexes `members` for cell `c`.
    starts: Vec<usize>,
    members: Vec<usize>,
}

impl CellIndex {
    fn build(positions: &[(f64, f64)], requested: f64) -> Self {
        let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
        let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for &(x, y) in positions {
            min_x = min_x.min(x);
            min_y = min_y.min(y);
            max_x = max_x.max(x);
            max_y = max_y.max(y);
        }
        if positions.is_empty() {
            (min_x, min_y, max_x, max_y) = (0.0, 0.0, 0.0, 0.0);
        }
        let (span_x, span_y) = (max_x - min_x, max_y - min_y);

        let n = positions.len().max(1) as f64;
        let floor_size = ((span_x.max(1e-12) * span_y.max(1e-12)) / (MAX_CELLS_PER_PLANT * n)).sqrt();
        let mut cell_size = requested.max(floor_size);
        if !cell_size.is_finite() || cell_size <= 0.0 {
            cell_size = span_x.max(span_y).max(1.0);
        }

        let cols = (span_x / cell_size).floor() as usize + 1;
        let rows = (span_y / cell_size).floor() as usize + 1;
        let mut index = CellIndex {
            cell_size,
            origin: (min_x, min_y),
            span: (span_x, span_y),
            cols,
            rows,
            starts: vec![0; cols * rows + 1],
            members: vec![0; positions.len()],
        };

        let cells: Vec<usize> = positions.iter().map(|&p| index.cell_of(p)).collect();
        for &c in &cells {
            index.starts[c + 1] += 1;
        }
        for c in 0..cols * rows {
            index.starts[c + 1] += index.starts[c];
        }
        let mut fill = index.starts.clone();
        for (i, &c) in cells.iter().enumerate() {
            index.members[fill[c]] = i;
            fill[c] += 1;
        }
        index
    }

    fn axis_cell(&self, offset: f64, limit: usize) -> usize {
        let c = (offset / self.cell_size).floor();
        if c <= 0.0 {
            0
        } else {
            (c as usize).min(limit - 1)
        }
    }

    fn cell_of(&self, (x, y): (f64, f64)) -> usize {
        let col = self.axis_cell(x - self.origin.0, self.cols);
        let row = self.axis_cell(y - self.origin.1, self.rows);
        row * self.cols + col
    }
}

impl PlantGrid {
    /// Builds a grid from arbitrary positions. The spatial hash uses cells of
    /// side `cutoff_radius_m` (bounded below so the table stays small).
    pub fn from_positions(positions: Vec<(f64, f64)>, cutoff_radius_m: f64) -> Self {
        let index = CellIndex::build(&positions, cutoff_radius_m);
        Self {
            positions,
            cutoff_radius_m,
            index,
        }
    }

    /// Rebuilds the spatial index for a new cutoff radius.
    pub fn with_cutoff(self, cutoff_radius_m: f64) -> Self {
        Self::from_positions(self.positions, cutoff_radius_m)
    }

    pub fn count(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[(f64, f64)] {
        &self.positions
    }

    pub fn position(&self, index: usize) -> (f64, f64) {
        self.positions[index]
    }

    pub fn cutoff_radius_m(&self) -> f64 {
        self.cutoff_radius_m
    }

    pub fn distance(&self, a: usize, b: usize) -> f64 {
        let (ax, ay) = self.positions[a];
        let (bx, by) = self.positions[b];
        (ax - bx).hypot(ay - by)
    }

    /// Diagonal of the plants' bounding box; no two plants are farther apart.
    pub fn extent_diagonal_m(&self) -> f64 {
        self.index.span.0.hypot(self.index.span.1)
    }

    /// Calls `visit(j, distance)` for every plant `j != index` with
    /// `distance <= radius_m`. Visit order follows the spatial hash.
    pub fn for_each_neighbor(&self, index: usize, radius_m: f64, mut visit: impl FnMut(usize, f64)) {
        let (x, y) = self.positions[index];
        let idx = &self.index;
        let col_lo = idx.axis_cell(x - radius_m - idx.origin.0, idx.cols);
        let col_hi = idx.axis_cell(x + radius_m - idx.origin.0, idx.cols);
        let row_lo = idx.axis_cell(y - radius_m - idx.origin.1, idx.rows);
        let row_hi = idx.axis_cell(y + radius_m - idx.origin.1, idx.rows);
        for row in row_lo..=row_hi {
            for col in col_lo..=col_hi {
                let cell = row * idx.cols + col;
                for &j in &idx.members[idx.starts[cell]..idx.starts[cell + 1]] {
                    if j == index {
                        continue;
                    }
                    let d = self.distance(index, j);
                    if d <= radius_m {
                        visit(j, d);
                    }
                }
            }
        }
    }

    /// All plants within `radius_m` of plant `index` (excluding itself),
    /// sorted by plant index.
    pub fn neighbors_within(&self, index: usize, radius_m: f64) -> Result<Vec<(usize, f64)>> {
        if index >= self.count() {
            return Err(Error::IndexOutOfRange {
                index,
                count: self.count(),
            });
        }
        let mut out = Vec::new();
        self.for_each_neighbor(index, radius_m, |j, d| out.push((j, d)));
        out.sort_unstable_by_key(|&(j, _)| j);
        Ok(out)
    }
}

/// Lays plants out at `(i * dx, j * dy)`, rows (fixed `j`) in order.
///
/// With `explicit_count`, only the first `n` positions are kept.
pub fn layout_grid(
    field: &FieldSpec,
    strategy: &SeedingStrategy,
    explicit_count: Option<usize>,
) -> Result<PlantGrid> {
    strategy.validate()?;
    let cols = axis_count(field.width_m, strategy.dx_m);
    let rows = axis_count(field.height_m, strategy.dy_m);
    let capacity = cols * rows;
    let count = match explicit_count {
        Some(n) if n > capacity => {
            return Err(Error::CapacityExceeded {
                requested: n,
                capacity,
            })
        }
        Some(n) => n,
        None => capacity,
    };

    let positions: Vec<(f64, f64)> = (0..count)
        .map(|p| {
            let (j, i) = (p / cols, p % cols);
            (
                (i as f64 * strategy.dx_m).min(field.width_m),
                (j as f64 * strategy.dy_m).min(field.height_m),
            )
        })
        .collect();
    let diagonal = field.width_m.hypot(field.height_m);
    Ok(PlantGrid::from_positions(positions, diagonal))
}

/// Square spacing whose `ceil(sqrt(n))`-sided lattice spans the field.
pub fn spacing_from_count(field: &FieldSpec, n: usize) -> Result<SeedingStrategy> {
    if n < 4 {
        return Err(Error::PlantCount {
            min: 4,
            got: n as f64,
        });
    }
    let side = ceil_sqrt(n);
    let gaps = (side - 1) as f64;
    Ok(SeedingStrategy::new(field.width_m / gaps, field.height_m / gaps))
}

fn ceil_sqrt(n: usize) -> usize {
    let mut m = (n as f64).sqrt().ceil() as usize;
    while m * m < n {
        m += 1;
    }
    while m > 1 && (m - 1) * (m - 1) >= n {
        m -= 1;
    }
    m
}

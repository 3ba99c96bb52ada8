//! Uniform tensor-product grids in one to four dimensions.
//!
//! Two constructors cover the two uses in the codebase: node-centered
//! covering grids for sampling sup norms of fields near a particle cloud,
//! and cell-centered grids for midpoint quadrature of densities on a box.

/// A uniform rectangular grid, row-major flattened (last axis fastest).
#[derive(Debug, Clone)]
pub struct TensorGrid {
    /// Coordinates of the node with multi-index (0, ..., 0).
    pub origin: Vec<f64>,
    /// Spacing along each axis.
    pub dx: Vec<f64>,
    /// Number of nodes along each axis.
    pub shape: Vec<usize>,
}

impl TensorGrid {
    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    /// Total number of nodes.
    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Volume of one cell, `prod_i dx_i`.
    pub fn cell_volume(&self) -> f64 {
        self.dx.iter().product()
    }

    /// Decode a flat index into physical coordinates.
    pub fn point(&self, flat: usize, out: &mut [f64]) {
        debug_assert_eq!(out.len(), self.dim());
        let mut rem = flat;
        for axis in (0..self.dim()).rev() {
            let idx = rem % self.shape[axis];
            rem /= self.shape[axis];
            out[axis] = self.origin[axis] + idx as f64 * self.dx[axis];
        }
    }

    /// Visit every node as `(flat_index, coordinates)` without allocating
    /// per point.
    pub fn for_each_point(&self, mut f: impl FnMut(usize, &[f64])) {
        let mut buf = vec![0.0; self.dim()];
        for flat in 0..self.len() {
            self.point(flat, &mut buf);
            f(flat, &buf);
        }
    }

    /// Node-centered grid covering the box `[min, max]` with spacing at most
    /// `max_dx` along every axis. Nodes start exactly at `min`; the last node
    /// along each axis lies at or beyond `max`.
    pub fn covering(min: &[f64], max: &[f64], max_dx: f64) -> Self {
        assert_eq!(min.len(), max.len());
        assert!(max_dx > 0.0);
        let dim = min.len();
        let mut shape = Vec::with_capacity(dim);
        for axis in 0..dim {
            let len = (max[axis] - min[axis]).max(0.0);
            shape.push((len / max_dx).floor() as usize + 2);
        }
        TensorGrid {
            origin: min.to_vec(),
            dx: vec![max_dx; dim],
            shape,
        }
    }

    /// Covering grid for a flattened point cloud (`points[k * dim + axis]`),
    /// with the bounding box inflated by `inflate` on every side. Used to
    /// sample sup norms of compactly supported convolutions: the field
    /// vanishes beyond the inflated box.
    pub fn covering_cloud(points: &[f64], dim: usize, inflate: f64, max_dx: f64) -> Self {
        assert!(dim > 0 && points.len() % dim == 0 && !points.is_empty());
        let mut min = vec![f64::INFINITY; dim];
        let mut max = vec![f64::NEG_INFINITY; dim];
        for chunk in points.chunks_exact(dim) {
            for axis in 0..dim {
                min[axis] = min[axis].min(chunk[axis]);
                max[axis] = max[axis].max(chunk[axis]);
            }
        }
        for axis in 0..dim {
            min[axis] -= inflate;
            max[axis] += inflate;
        }
        Self::covering(&min, &max, max_dx)
    }

    /// Cell-centered grid over `[min, max]` with `cells` cells per axis:
    /// nodes at the midpoints, spacing `(max - min) / cells`. Summing field
    /// values times `cell_volume()` is the midpoint quadrature of the box.
    pub fn cell_centers(min: &[f64], max: &[f64], cells: &[usize]) -> Self {
        assert_eq!(min.len(), max.len());
        assert_eq!(min.len(), cells.len());
        let dim = min.len();
        let mut origin = Vec::with_capacity(dim);
        let mut dx = Vec::with_capacity(dim);
        for axis in 0..dim {
            assert!(cells[axis] > 0 && max[axis] > min[axis]);
            let h = (max[axis] - min[axis]) / cells[axis] as f64;
            origin.push(min[axis] + 0.5 * h);
            dx.push(h);
        }
        TensorGrid {
            origin,
            dx,
            shape: cells.to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covering_contains_box() {
        let g = TensorGrid::covering(&[-1.0, 0.0], &[2.5, 0.7], 0.3);
        assert_eq!(g.dim(), 2);
        for axis in 0..2 {
            let last = g.origin[axis] + (g.shape[axis] - 1) as f64 * g.dx[axis];
            assert!(g.dx[axis] <= 0.3);
            assert!(last >= [2.5, 0.7][axis]);
        }
    }

    #[test]
    fn flat_index_roundtrip() {
        let g = TensorGrid {
            origin: vec![0.0, 10.0, -5.0],
            dx: vec![1.0, 2.0, 0.5],
            shape: vec![3, 4, 5],
        };
        assert_eq!(g.len(), 60);
        let mut buf = [0.0; 3];
        // flat = (i * 4 + j) * 5 + k with point origin + (i, j, k) * dx
        g.point((2 * 4 + 3) * 5 + 4, &mut buf);
        assert_eq!(buf, [2.0, 16.0, -3.0]);
    }

    #[test]
    fn midpoint_quadrature_of_constant() {
        let g = TensorGrid::cell_centers(&[0.0, 0.0], &[2.0, 3.0], &[8, 12]);
        let mut total = 0.0;
        g.for_each_point(|_, _| total += g.cell_volume());
        assert!((total - 6.0).abs() < 1e-12);
    }

    #[test]
    fn cloud_bounding_box_inflated() {
        let pts = [0.0, 0.0, 1.0, 4.0, -2.0, 1.0]; // three 2-D points
        let g = TensorGrid::covering_cloud(&pts, 2, 0.5, 0.25);
        assert_eq!(g.origin, vec![-2.5, -0.5]);
        let last_x = g.origin[0] + (g.shape[0] - 1) as f64 * g.dx[0];
        let last_y = g.origin[1] + (g.shape[1] - 1) as f64 * g.dx[1];
        assert!(last_x >= 1.5 && last_y >= 4.5);
    }
}

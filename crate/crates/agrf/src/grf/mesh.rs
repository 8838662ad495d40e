//! Regular triangulated grid over an extended square domain.
//!
//! The field of interest lives on the unit square, discretized by
//! `n_core x n_core` nodes. To soften the effect of the boundary condition,
//! operators are assembled on a larger concentric grid with the same spacing;
//! samples on the core grid are subvectors of samples on the extended grid.

use nalgebra::Vector2;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct Mesh {
    /// Nodes per side of the extended grid.
    pub n_ext: usize,
    /// Nodes per side of the core grid.
    pub n_core: usize,
    /// Grid step, identical in both directions.
    pub spacing: f64,
    /// Lower-left corner of the extended domain.
    pub origin: Vector2<f64>,
    /// core node index (row-major) -> extended node index (row-major).
    pub core_index_map: Vec<usize>,
    /// Node-index triples, two per grid cell, all with positive orientation.
    pub triangles: Vec<[usize; 3]>,
}

impl Mesh {
    pub fn n_nodes(&self) -> usize {
        self.n_ext * self.n_ext
    }

    pub fn n_core_nodes(&self) -> usize {
        self.n_core * self.n_core
    }

    /// Position of extended node `i` (row-major: `i = iy * n_ext + ix`).
    pub fn node_position(&self, i: usize) -> Vector2<f64> {
        let ix = i % self.n_ext;
        let iy = i / self.n_ext;
        Vector2::new(
            self.origin.x + ix as f64 * self.spacing,
            self.origin.y + iy as f64 * self.spacing,
        )
    }

    /// Restrict an extended-grid vector to the core grid.
    pub fn restrict_to_core(&self, extended: &[f64]) -> Vec<f64> {
        assert_eq!(extended.len(), self.n_nodes());
        self.core_index_map.iter().map(|&i| extended[i]).collect()
    }

    /// Nearest core node (row-major index) to a point of the unit square.
    pub fn nearest_core_node(&self, p: Vector2<f64>) -> usize {
        let grid = (self.n_core - 1) as f64;
        let ix = (p.x * grid).round().clamp(0.0, grid) as usize;
        let iy = (p.y * grid).round().clamp(0.0, grid) as usize;
        iy * self.n_core + ix
    }

    /// Position of core node `i` within the unit square.
    pub fn core_node_position(&self, i: usize) -> Vector2<f64> {
        let ix = i % self.n_core;
        let iy = i / self.n_core;
        let h = 1.0 / (self.n_core - 1) as f64;
        Vector2::new(ix as f64 * h, iy as f64 * h)
    }

    pub fn triangle_area(&self, t: &[usize; 3]) -> f64 {
        let a = self.node_position(t[0]);
        let b = self.node_position(t[1]);
        let c = self.node_position(t[2]);
        0.5 * ((b - a).x * (c - a).y - (b - a).y * (c - a).x)
    }
}

/// Builds the extended grid: `round(margin_fraction * n_core)` extra node
/// layers on each side, core block centered, each cell split along the
/// lower-left to upper-right diagonal.
pub fn build_mesh(n_core: usize, margin_fraction: f64) -> Result<Mesh> {
    if n_core < 2 {
        return Err(Error::invalid(format!("n_core must be >= 2, got {n_core}")));
    }
    if !(margin_fraction >= 0.0) || !margin_fraction.is_finite() {
        return Err(Error::invalid(format!(
            "margin_fraction must be finite and >= 0, got {margin_fraction}"
        )));
    }
    let extra = (margin_fraction * n_core as f64).round() as usize;
    let n_ext = n_core + 2 * extra;
    let spacing = 1.0 / (n_core - 1) as f64;
    let origin = Vector2::new(-(extra as f64) * spacing, -(extra as f64) * spacing);

    let mut core_index_map = Vec::with_capacity(n_core * n_core);
    for cy in 0..n_core {
        for cx in 0..n_core {
            core_index_map.push((cy + extra) * n_ext + (cx + extra));
        }
    }

    let mut triangles = Vec::with_capacity(2 * (n_ext - 1) * (n_ext - 1));
    for iy in 0..n_ext - 1 {
        for ix in 0..n_ext - 1 {
            let a = iy * n_ext + ix;
            let b = iy * n_ext + ix + 1;
            let c = (iy + 1) * n_ext + ix;
            let d = (iy + 1) * n_ext + ix + 1;
            triangles.push([a, b, d]);
            triangles.push([a, d, c]);
        }
    }

    Ok(Mesh {
        n_ext,
        n_core,
        spacing,
        origin,
        core_index_map,
        triangles,
    })
}

//! Thin-plate spline interpolation in the plane.
//!
//! Kernel `U(r) = r^2 log r` plus an affine polynomial part, with the usual
//! orthogonality constraints on the kernel weights. The analytic gradient is
//! exposed because downstream code derives unit direction fields from it.

use nalgebra::{DMatrix, DVector, Vector2};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ThinPlateSpline {
    nodes: Vec<Vector2<f64>>,
    kernel_weights: DVector<f64>,
    /// Affine part (c0, cx, cy).
    affine: [f64; 3],
}

#[inline]
fn kernel(r: f64) -> f64 {
    if r == 0.0 {
        0.0
    } else {
        r * r * r.ln()
    }
}

impl ThinPlateSpline {
    /// Fits the interpolant through `(nodes[i], values[i])`.
    pub fn fit(nodes: &[Vector2<f64>], values: &[f64]) -> Result<Self> {
        if nodes.len() != values.len() {
            return Err(Error::invalid(format!(
                "node/value count mismatch: {} vs {}",
                nodes.len(),
                values.len()
            )));
        }
        if nodes.len() < 3 {
            return Err(Error::invalid("thin-plate spline needs at least 3 nodes"));
        }
        let n = nodes.len();
        let dim = n + 3;
        let mut system = DMatrix::zeros(dim, dim);
        for i in 0..n {
            for j in 0..n {
                system[(i, j)] = kernel((nodes[i] - nodes[j]).norm());
            }
            system[(i, n)] = 1.0;
            system[(i, n + 1)] = nodes[i].x;
            system[(i, n + 2)] = nodes[i].y;
            system[(n, i)] = 1.0;
            system[(n + 1, i)] = nodes[i].x;
            system[(n + 2, i)] = nodes[i].y;
        }
        let mut rhs = DVector::zeros(dim);
        for i in 0..n {
            rhs[i] = values[i];
        }
        let rhs_norm = rhs.norm();

        let lu = system.clone().full_piv_lu();
        let solution = lu
            .solve(&rhs)
            .ok_or_else(|| Error::DegenerateNodes("singular interpolation system".into()))?;
        if !solution.iter().all(|v| v.is_finite()) {
            return Err(Error::DegenerateNodes("non-finite interpolation weights".into()));
        }
        // Full-pivot LU still "solves" nearly singular systems (e.g. all
        // nodes collinear); a residual check catches those.
        let residual = (&system * &solution - &rhs).norm();
        if residual > 1e-6 * (rhs_norm + 1.0) {
            return Err(Error::DegenerateNodes(format!(
                "interpolation residual {residual:.3e} too large"
            )));
        }

        Ok(ThinPlateSpline {
            nodes: nodes.to_vec(),
            kernel_weights: solution.rows(0, n).into_owned(),
            affine: [solution[n], solution[n + 1], solution[n + 2]],
        })
    }

    pub fn eval(&self, p: Vector2<f64>) -> f64 {
        let mut acc = self.affine[0] + self.affine[1] * p.x + self.affine[2] * p.y;
        for (node, w) in self.nodes.iter().zip(self.kernel_weights.iter()) {
            acc += w * kernel((p - node).norm());
        }
        acc
    }

    /// Analytic gradient; the kernel term `w (2 log r + 1)(p - node)`
    /// vanishes continuously as `p` approaches a node.
    pub fn gradient(&self, p: Vector2<f64>) -> Vector2<f64> {
        let mut g = Vector2::new(self.affine[1], self.affine[2]);
        for (node, w) in self.nodes.iter().zip(self.kernel_weights.iter()) {
            let d = p - node;
            let r = d.norm();
            if r > 0.0 {
                g += d * (*w * (2.0 * r.ln() + 1.0));
            }
        }
        g
    }
}

/// One-shot interpolation: fit through the nodes, evaluate at `query`.
pub fn thin_plate_spline(
    nodes: &[Vector2<f64>],
    values: &[f64],
    query: Vector2<f64>,
) -> Result<f64> {
    Ok(ThinPlateSpline::fit(nodes, values)?.eval(query))
}

/// `per_side x per_side` equidistant nodes covering the unit square,
/// row-major.
pub fn grid_nodes(per_side: usize) -> Vec<Vector2<f64>> {
    assert!(per_side >= 2);
    let h = 1.0 / (per_side - 1) as f64;
    let mut nodes = Vec::with_capacity(per_side * per_side);
    for iy in 0..per_side {
        for ix in 0..per_side {
            nodes.push(Vector2::new(ix as f64 * h, iy as f64 * h));
        }
    }
    nodes
}

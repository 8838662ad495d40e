//! Per-node anisotropy: a unit direction field and two scale factors.
//!
//! At node `s` the deformation `Q_s` has eigenvalues `1/rho1` along `v(s)`
//! and `1/rho2` along its orthogonal; the metric tensor is `G_s = Q_s^T Q_s`.
//! The scale factors are constant across the domain, with the larger one
//! pinned to 1 so the correlation range parameter stays identifiable.

use nalgebra::{Matrix2, Vector2};

use crate::error::{Error, Result};
use crate::grf::mesh::Mesh;
use crate::grf::tps::ThinPlateSpline;

const UNIT_NORM_TOL: f64 = 1e-12;
const ZERO_GRADIENT_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct AnisotropyField {
    /// Unit direction at each extended-grid node.
    directions: Vec<Vector2<f64>>,
    rho1: f64,
    rho2: f64,
}

fn check_rhos(rho1: f64, rho2: f64) -> Result<()> {
    for (name, rho) in [("rho1", rho1), ("rho2", rho2)] {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::invalid(format!("{name} must lie in (0, 1], got {rho}")));
        }
    }
    if (rho1.max(rho2) - 1.0).abs() > UNIT_NORM_TOL {
        return Err(Error::invalid(format!(
            "max(rho1, rho2) must equal 1, got max({rho1}, {rho2})"
        )));
    }
    Ok(())
}

impl AnisotropyField {
    /// Identity metric everywhere.
    pub fn isotropic(mesh: &Mesh) -> Self {
        AnisotropyField {
            directions: vec![Vector2::new(1.0, 0.0); mesh.n_nodes()],
            rho1: 1.0,
            rho2: 1.0,
        }
    }

    /// Constant direction given by `angle` (radians), constant scales.
    pub fn uniform(mesh: &Mesh, angle: f64, rho1: f64, rho2: f64) -> Result<Self> {
        check_rhos(rho1, rho2)?;
        let v = Vector2::new(angle.cos(), angle.sin());
        Ok(AnisotropyField {
            directions: vec![v; mesh.n_nodes()],
            rho1,
            rho2,
        })
    }

    /// Direction field from explicit unit vectors.
    pub fn from_directions(
        directions: Vec<Vector2<f64>>,
        rho1: f64,
        rho2: f64,
        mesh: &Mesh,
    ) -> Result<Self> {
        check_rhos(rho1, rho2)?;
        if directions.len() != mesh.n_nodes() {
            return Err(Error::invalid(format!(
                "direction count {} does not match node count {}",
                directions.len(),
                mesh.n_nodes()
            )));
        }
        for v in &directions {
            if (v.norm() - 1.0).abs() > UNIT_NORM_TOL {
                return Err(Error::invalid(format!(
                    "direction ({}, {}) is not unit norm",
                    v.x, v.y
                )));
            }
        }
        Ok(AnisotropyField { directions, rho1, rho2 })
    }

    pub fn n_nodes(&self) -> usize {
        self.directions.len()
    }

    pub fn rho1(&self) -> f64 {
        self.rho1
    }

    pub fn rho2(&self) -> f64 {
        self.rho2
    }

    pub fn direction(&self, node: usize) -> Vector2<f64> {
        self.directions[node]
    }

    /// Metric tensor `G = v v^T / rho1^2 + u u^T / rho2^2`, `u` orthogonal
    /// to `v`.
    pub fn metric(&self, node: usize) -> Matrix2<f64> {
        let v = self.directions[node];
        let u = Vector2::new(-v.y, v.x);
        (v * v.transpose()) / (self.rho1 * self.rho1)
            + (u * u.transpose()) / (self.rho2 * self.rho2)
    }

    /// `sqrt(det G)`, constant across nodes since the scales are constant.
    pub fn sqrt_det_metric(&self) -> f64 {
        1.0 / (self.rho1 * self.rho2)
    }
}

/// Builds the direction field as the normalized gradient of a thin-plate
/// spline potential fitted through `(nodes, node_values)`.
///
/// Where the gradient norm falls below 1e-10 the direction defaults to
/// `(1, 0)`; isolated critical points carry no area in the assembly.
pub fn anisotropy_from_potential(
    nodes: &[Vector2<f64>],
    node_values: &[f64],
    rho1: f64,
    rho2: f64,
    mesh: &Mesh,
) -> Result<AnisotropyField> {
    check_rhos(rho1, rho2)?;
    let potential = ThinPlateSpline::fit(nodes, node_values)?;
    let directions = directions_from_potential(&potential, mesh);
    AnisotropyField::from_directions(directions, rho1, rho2, mesh)
}

pub(crate) fn directions_from_potential(
    potential: &ThinPlateSpline,
    mesh: &Mesh,
) -> Vec<Vector2<f64>> {
    (0..mesh.n_nodes())
        .map(|i| {
            let g = potential.gradient(mesh.node_position(i));
            let norm = g.norm();
            if norm < ZERO_GRADIENT_TOL {
                Vector2::new(1.0, 0.0)
            } else {
                g / norm
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grf::mesh::build_mesh;
    use crate::grf::tps::grid_nodes;
    use crate::rng::CounterRng;

    #[test]
    fn linear_potential_gives_constant_direction() {
        let mesh = build_mesh(8, 0.125).unwrap();
        let spline_nodes = grid_nodes(4);
        let values: Vec<f64> = spline_nodes.iter().map(|p| p.x).collect();
        let field = anisotropy_from_potential(&spline_nodes, &values, 1.0, 0.5, &mesh).unwrap();
        for i in 0..mesh.n_nodes() {
            let v = field.direction(i);
            assert!((v - Vector2::new(1.0, 0.0)).norm() < 1e-9, "node {i}: {v:?}");
        }
    }

    #[test]
    fn isotropic_scales_give_identity_metric() {
        let mesh = build_mesh(4, 0.0).unwrap();
        let spline_nodes = grid_nodes(3);
        let mut rng = CounterRng::new(2);
        let values: Vec<f64> = spline_nodes.iter().map(|_| rng.next_gaussian()).collect();
        let field = anisotropy_from_potential(&spline_nodes, &values, 1.0, 1.0, &mesh).unwrap();
        for i in 0..mesh.n_nodes() {
            let g = field.metric(i);
            assert!((g - Matrix2::identity()).norm() < 1e-12);
        }
    }

    #[test]
    fn metric_determinant_and_spd() {
        let mesh = build_mesh(6, 0.1).unwrap();
        let field = AnisotropyField::uniform(&mesh, 0.7, 1.0, 0.25).unwrap();
        let expected_det = 1.0 / (field.rho1() * field.rho2()).powi(2);
        for i in 0..mesh.n_nodes() {
            let g = field.metric(i);
            assert!((g[(0, 1)] - g[(1, 0)]).abs() < 1e-14);
            assert!((g.determinant() - expected_det).abs() < 1e-9 * expected_det);
            assert!(g[(0, 0)] > 0.0 && g.determinant() > 0.0, "not SPD at {i}");
        }
    }

    #[test]
    fn rejects_bad_scales() {
        let mesh = build_mesh(4, 0.0).unwrap();
        assert!(AnisotropyField::uniform(&mesh, 0.0, 0.5, 0.5).is_err());
        assert!(AnisotropyField::uniform(&mesh, 0.0, 1.2, 1.0).is_err());
        assert!(AnisotropyField::uniform(&mesh, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn gradient_directions_match_finite_differences() {
        let mesh = build_mesh(8, 0.0).unwrap();
        let spline_nodes = grid_nodes(4);
        let mut rng = CounterRng::new(7);
        let values: Vec<f64> = spline_nodes.iter().map(|_| rng.next_gaussian()).collect();
        let potential = ThinPlateSpline::fit(&spline_nodes, &values).unwrap();
        let field = anisotropy_from_potential(&spline_nodes, &values, 1.0, 0.5, &mesh).unwrap();

        let step = 1e-5;
        for i in 0..mesh.n_nodes() {
            let p = mesh.node_position(i);
            let fd = Vector2::new(
                (potential.eval(p + Vector2::new(step, 0.0))
                    - potential.eval(p - Vector2::new(step, 0.0)))
                    / (2.0 * step),
                (potential.eval(p + Vector2::new(0.0, step))
                    - potential.eval(p - Vector2::new(0.0, step)))
                    / (2.0 * step),
            );
            if fd.norm() > 1e-6 {
                let v = field.direction(i);
                assert!((v - fd / fd.norm()).norm() < 1e-4, "node {i}");
            }
        }
    }
}

//! Finite element operators on the extended grid.
//!
//! Linear (P1) elements with one-point centroid quadrature. The mass matrix
//! is lumped to a diagonal, which keeps `M^{-1/2}` trivial; the stiffness
//! matrix carries the inverse metric so gradients are measured in the
//! deformed geometry.

use nalgebra::{DMatrix, DVector, Matrix2, Vector2};
use nalgebra_sparse::{CooMatrix, CsrMatrix};

use crate::error::{Error, Result};
use crate::grf::anisotropy::AnisotropyField;
use crate::grf::mesh::Mesh;

#[derive(Clone, Debug)]
pub struct FemOperators {
    /// Diagonal of the lumped mass matrix, strictly positive.
    pub mass_diag: DVector<f64>,
    /// Stiffness matrix R, symmetric with zero row sums.
    pub stiffness: CsrMatrix<f64>,
    /// Scaled stiffness S = M^{-1/2} R M^{-1/2}, symmetric PSD.
    pub scaled_stiffness: CsrMatrix<f64>,
    /// Upper bound on the spectrum of S (1.01 x Gershgorin).
    pub lambda_max: f64,
}

impl FemOperators {
    pub fn n_nodes(&self) -> usize {
        self.mass_diag.len()
    }

    /// `S v` via the CSR structure.
    pub fn apply_scaled_stiffness(&self, v: &DVector<f64>) -> DVector<f64> {
        spmv(&self.scaled_stiffness, v)
    }

    /// Applies `M^{-1/2}` in place.
    pub fn apply_inv_sqrt_mass(&self, v: &mut DVector<f64>) {
        for (x, m) in v.iter_mut().zip(self.mass_diag.iter()) {
            *x /= m.sqrt();
        }
    }

    pub fn scaled_stiffness_dense(&self) -> DMatrix<f64> {
        csr_to_dense(&self.scaled_stiffness)
    }

    pub fn stiffness_dense(&self) -> DMatrix<f64> {
        csr_to_dense(&self.stiffness)
    }
}

pub(crate) fn spmv(csr: &CsrMatrix<f64>, v: &DVector<f64>) -> DVector<f64> {
    assert_eq!(csr.ncols(), v.len());
    let mut out = DVector::zeros(csr.nrows());
    let offsets = csr.row_offsets();
    let cols = csr.col_indices();
    let vals = csr.values();
    for row in 0..csr.nrows() {
        let mut acc = 0.0;
        for k in offsets[row]..offsets[row + 1] {
            acc += vals[k] * v[cols[k]];
        }
        out[row] = acc;
    }
    out
}

pub(crate) fn csr_to_dense(csr: &CsrMatrix<f64>) -> DMatrix<f64> {
    let mut dense = DMatrix::zeros(csr.nrows(), csr.ncols());
    for (i, j, v) in csr.triplet_iter() {
        dense[(i, j)] = *v;
    }
    dense
}

/// Gradients of the three barycentric basis functions on a triangle;
/// constant vectors for P1 elements.
fn basis_gradients(p: [Vector2<f64>; 3], double_area: f64) -> [Vector2<f64>; 3] {
    let perp = |v: Vector2<f64>| Vector2::new(-v.y, v.x);
    [
        perp(p[2] - p[1]) / double_area,
        perp(p[0] - p[2]) / double_area,
        perp(p[1] - p[0]) / double_area,
    ]
}

/// Assembles the lumped mass matrix, the stiffness matrix and the scaled
/// stiffness matrix, freezing the metric at each triangle centroid (average
/// of the three vertex metrics).
pub fn assemble_operators(mesh: &Mesh, aniso: &AnisotropyField) -> Result<FemOperators> {
    let n = mesh.n_nodes();
    if aniso.n_nodes() != n {
        return Err(Error::invalid(format!(
            "anisotropy field has {} nodes, mesh has {n}",
            aniso.n_nodes()
        )));
    }

    let mut mass = DVector::zeros(n);
    let mut coo = CooMatrix::new(n, n);

    for tri in &mesh.triangles {
        let p = [
            mesh.node_position(tri[0]),
            mesh.node_position(tri[1]),
            mesh.node_position(tri[2]),
        ];
        let double_area = (p[1] - p[0]).x * (p[2] - p[0]).y - (p[1] - p[0]).y * (p[2] - p[0]).x;
        if double_area <= 0.0 {
            return Err(Error::Assembly(format!(
                "triangle {tri:?} has non-positive area"
            )));
        }
        let area = 0.5 * double_area;

        let metric: Matrix2<f64> =
            (aniso.metric(tri[0]) + aniso.metric(tri[1]) + aniso.metric(tri[2])) / 3.0;
        let det = metric.determinant();
        if !(det > 0.0 && metric[(0, 0)] > 0.0) || !det.is_finite() {
            return Err(Error::Assembly(format!(
                "non-SPD centroid metric on triangle {tri:?}"
            )));
        }
        let sqrt_det = det.sqrt();
        let metric_inv = Matrix2::new(
            metric[(1, 1)] / det,
            -metric[(0, 1)] / det,
            -metric[(1, 0)] / det,
            metric[(0, 0)] / det,
        );

        let lump = area * sqrt_det / 3.0;
        for &node in tri {
            mass[node] += lump;
        }

        let grads = basis_gradients(p, double_area);
        for a in 0..3 {
            let ga = metric_inv * grads[a];
            for b in 0..3 {
                let val = area * sqrt_det * ga.dot(&grads[b]);
                coo.push(tri[a], tri[b], val);
            }
        }
    }

    let stiffness = CsrMatrix::from(&coo);

    let inv_sqrt_mass: Vec<f64> = mass.iter().map(|m: &f64| 1.0 / m.sqrt()).collect();
    let mut scaled = CooMatrix::new(n, n);
    for (i, j, v) in stiffness.triplet_iter() {
        scaled.push(i, j, v * inv_sqrt_mass[i] * inv_sqrt_mass[j]);
    }
    let scaled_stiffness = CsrMatrix::from(&scaled);

    let mut gershgorin: f64 = 0.0;
    {
        let offsets = scaled_stiffness.row_offsets();
        let vals = scaled_stiffness.values();
        for row in 0..n {
            let row_sum: f64 = vals[offsets[row]..offsets[row + 1]]
                .iter()
                .map(|v| v.abs())
                .sum();
            gershgorin = gershgorin.max(row_sum);
        }
    }

    Ok(FemOperators {
        mass_diag: mass,
        stiffness,
        scaled_stiffness,
        lambda_max: 1.01 * gershgorin,
    })
}

use agrf::grf::*;
use std::time::Instant;

fn main() {
    for &(n_core, a) in &[(16usize, 0.15), (24, 0.15), (32, 0.15), (32, 0.1)] {
        let mesh = build_mesh(n_core, 0.1).unwrap();
        let ops = assemble_operators(&mesh, &AnisotropyField::isotropic(&mesh)).unwrap();
        let sd = SpectralDensity::with_variance(a, 2.0, 1.0).unwrap();
        let t = Instant::now();
        let sigma = dense_covariance(&ops, &sd, &mesh).unwrap();
        let n = mesh.n_core;
        let center = (n / 2) * n + n / 2;
        println!(
            "n_core={n_core:3} (ext {}) a={a}: var={:.4}  dense_covariance took {:.2?}",
            mesh.n_ext, sigma[(center, center)], t.elapsed()
        );
    }
}

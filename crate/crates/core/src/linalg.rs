//! Small dense complex matrices and a cyclic Jacobi eigensolver for Hermitian input.

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

pub type CMat2 = Matrix2<Complex64>;
pub type CMat4 = Matrix4<Complex64>;

const JACOBI_MAX_SWEEPS: usize = 64;
const JACOBI_REL_TOL: f64 = 1e-14;

/// Eigen-decomposition `A = V diag(values) V†` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vector4<f64>,
    /// Columns are the eigenvectors.
    pub vectors: CMat4,
}

/// `σy ⊗ σy`, which is real in the standard basis.
pub fn sigma_yy() -> CMat4 {
    let one = Complex64::new(1.0, 0.0);
    let z = Complex64::new(0.0, 0.0);
    CMat4::new(
        z, z, z, -one, //
        z, z, one, z, //
        z, one, z, z, //
        -one, z, z, z,
    )
}

/// Frobenius norm of the strictly off-diagonal part.
fn off_diagonal_norm(a: &CMat4) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Largest deviation from Hermiticity, `max |A_ij − conj(A_ji)|`.
pub fn hermiticity_gap(a: &CMat4) -> f64 {
    let mut gap = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            gap = gap.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    gap
}

/// Cyclic Jacobi diagonalisation of a 4×4 Hermitian matrix.
///
/// Only the upper triangle is trusted; the input is symmetrised first.
/// Iterates until the off-diagonal norm drops below `1e-14 · ‖A‖_F`.
pub fn hermitian_eigen(input: &CMat4) -> HermitianEigen {
    let mut a = (input + input.adjoint()) * Complex64::new(0.5, 0.0);
    let mut v = CMat4::identity();
    let scale = a.norm();
    let target = JACOBI_REL_TOL * scale;

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= target {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..4 {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 || r <= 1e-300 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                // Remove the phase of a_pq, then rotate the real 2×2 block
                // [[app, r], [r, aqq]] by the smaller of the two diagonalising angles.
                let phase = apq / r;
                let angle = if app == aqq {
                    std::f64::consts::FRAC_PI_4
                } else {
                    0.5 * (2.0 * r / (app - aqq)).atan()
                };
                let (s, c) = angle.sin_cos();
                // Columns p, q of the rotation: [c, phase* s] and [-s, phase* c].
                let g_pp = Complex64::new(c, 0.0);
                let g_qp = phase.conj() * s;
                let g_pq = Complex64::new(-s, 0.0);
                let g_qq = phase.conj() * c;

                // A ← A G (columns p, q)
                for k in 0..4 {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                }
                // A ← G† A (rows p, q)
                for k in 0..4 {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                // V ← V G
                for k in 0..4 {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
            }
        }
    }

    HermitianEigen { values: Vector4::from_fn(|i, _| a[(i, i)].re), vectors: v }
}

/// `V f(D) V†` for a Hermitian eigen-decomposition.
pub fn spectral_map(eig: &HermitianEigen, f: impl Fn(f64) -> f64) -> CMat4 {
    let mut out = CMat4::zeros();
    for k in 0..4 {
        let fk = Complex64::new(f(eig.values[k]), 0.0);
        let col = eig.vectors.column(k);
        out += col * col.adjoint() * fk;
    }
    out
}

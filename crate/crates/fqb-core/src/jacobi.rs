//! Cyclic Jacobi eigenvalue iteration for small Hermitian matrices.
//!
//! Off-diagonal elements are annihilated in row-cyclic order with complex
//! plane rotations until the off-diagonal Frobenius norm drops below the
//! threshold or the sweep budget runs out. Intended for the well-conditioned
//! positive-semidefinite matrices produced by partial traces.

use num_complex::Complex64;

/// Frobenius norm of the strict upper triangle (the Hermitian off-diagonal
/// content, up to the symmetric factor).
fn off_diagonal_norm(a: &[Complex64], dim: usize) -> f64 {
    let mut sum = 0.0;
    for p in 0..dim {
        for q in (p + 1)..dim {
            sum += a[p * dim + q].norm_sqr();
        }
    }
    (2.0 * sum).sqrt()
}

/// Eigenvalues of a Hermitian matrix given in row-major order. The input
/// buffer is consumed as scratch. Not sorted.
pub fn hermitian_eigenvalues(
    mut a: Vec<Complex64>,
    dim: usize,
    max_sweeps: usize,
    off_diag_tol: f64,
) -> Vec<f64> {
    assert_eq!(a.len(), dim * dim, "matrix buffer does not match dimension");
    if dim == 1 {
        return vec![a[0].re];
    }
    for _ in 0..max_sweeps {
        if off_diagonal_norm(&a, dim) <= off_diag_tol {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                rotate(&mut a, dim, p, q);
            }
        }
    }
    (0..dim).map(|i| a[i * dim + i].re).collect()
}

/// Annihilates a[p,q] by the unitary similarity A ← U† A U where U acts on
/// the (p,q) plane. The Hermitian block is first phase-rotated to a real
/// symmetric one, then a classical Jacobi rotation is applied.
fn rotate(a: &mut [Complex64], dim: usize, p: usize, q: usize) {
    let apq = a[p * dim + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let alpha = apq / r; // unit phase of the pivot

    // Column q absorbs the conjugate phase so the (p,q) block becomes real:
    // A <- P† A P with P = diag(..., 1_p, ..., conj(alpha)_q, ...).
    for k in 0..dim {
        a[k * dim + q] *= alpha.conj();
    }
    for k in 0..dim {
        a[q * dim + k] *= alpha;
    }

    let app = a[p * dim + p].re;
    let aqq = a[q * dim + q].re;
    // Stable tangent of the rotation zeroing the now-real pivot r.
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Rows p and q of A <- R† A R with R = [[c, s], [-s, c]] in the (p,q)
    // plane, then the matching columns.
    for k in 0..dim {
        let akp = a[p * dim + k];
        let akq = a[q * dim + k];
        a[p * dim + k] = akp * c - akq * s;
        a[q * dim + k] = akp * s + akq * c;
    }
    for k in 0..dim {
        let apk = a[k * dim + p];
        let aqk = a[k * dim + q];
        a[k * dim + p] = apk * c - aqk * s;
        a[k * dim + q] = apk * s + aqk * c;
    }

    // Clean up what should be exactly zero and exactly real.
    a[p * dim + q] = Complex64::new(0.0, 0.0);
    a[q * dim + p] = Complex64::new(0.0, 0.0);
    a[p * dim + p] = Complex64::new(a[p * dim + p].re, 0.0);
    a[q * dim + q] = Complex64::new(a[q * dim + q].re, 0.0);
}

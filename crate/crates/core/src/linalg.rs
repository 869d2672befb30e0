//! Dense complex linear algebra helpers shared by all modules.
//!
//! Unitaries are always produced by eigendecomposition of their Hermitian
//! generator; the dimensions in this crate are small enough (a few hundred)
//! that this is both fast and exactly unitary to solver tolerance.

use nalgebra::{DMatrix, DVector};

pub type C64 = num_complex::Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub fn cr(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn ci(x: f64) -> C64 {
    C64::new(0.0, x)
}

/// Eigendecomposition of a Hermitian matrix: eigenvalues (real) and the
/// unitary of column eigenvectors, in the solver's order.
pub fn eigh(h: &CMatrix) -> (DVector<f64>, CMatrix) {
    let e = h.clone().symmetric_eigen();
    (e.eigenvalues, e.eigenvectors)
}

/// exp(i t H) for Hermitian H.
pub fn exp_i_hermitian(h: &CMatrix, t: f64) -> CMatrix {
    let (vals, vecs) = eigh(h);
    let phases = CMatrix::from_diagonal(&vals.map(|l| ci(t * l).exp()));
    &vecs * phases * vecs.adjoint()
}

/// ‖M − M†‖∞ over entries.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let d = m - m.adjoint();
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// ‖U†U − 1‖∞ over entries.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    let p = u.adjoint() * u;
    let n = p.nrows();
    let mut err = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let want = if i == j { cr(1.0) } else { cr(0.0) };
            err = err.max((p[(i, j)] - want).norm());
        }
    }
    err
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac, br, bc) = (a.nrows(), a.ncols(), b.nrows(), b.ncols());
    let mut out = CMatrix::zeros(ar * br, ac * bc);
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[(i * br + k, j * bc + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    let mut out = CVector::zeros(a.len() * b.len());
    for i in 0..a.len() {
        for j in 0..b.len() {
            out[i * b.len() + j] = a[i] * b[j];
        }
    }
    out
}

/// Apply `u` to the slow (row-major outer) index of a bipartite vector with
/// inner dimension `inner_dim`.
pub fn apply_outer(u: &CMatrix, v: &CVector, inner_dim: usize) -> CVector {
    let outer = u.nrows();
    debug_assert_eq!(outer * inner_dim, v.len());
    let mut out = CVector::zeros(v.len());
    for k in 0..inner_dim {
        for i in 0..outer {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..outer {
                acc += u[(i, j)] * v[j * inner_dim + k];
            }
            out[i * inner_dim + k] = acc;
        }
    }
    out
}

/// Apply `u` to the fast (row-major inner) index of a bipartite vector.
pub fn apply_inner(u: &CMatrix, v: &CVector, inner_dim: usize) -> CVector {
    let outer = v.len() / inner_dim;
    debug_assert_eq!(u.nrows(), inner_dim);
    let mut out = CVector::zeros(v.len());
    for i in 0..outer {
        for k in 0..inner_dim {
            let mut acc = C64::new(0.0, 0.0);
            for l in 0..inner_dim {
                acc += u[(k, l)] * v[i * inner_dim + l];
            }
            out[i * inner_dim + k] = acc;
        }
    }
    out
}

/// Natural-log factorial table: entry `k` holds ln(k!).
pub fn log_factorials(up_to: usize) -> Vec<f64> {
    let mut t = vec![0.0f64; up_to + 1];
    for k in 1..=up_to {
        t[k] = t[k - 1] + (k as f64).ln();
    }
    t
}

/// Compensated (Kahan) sum; used where alternating-sign series would lose
/// digits under naive accumulation.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let y = t - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    sum
}

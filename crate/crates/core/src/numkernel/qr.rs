use super::matrix::{ComplexMatrix, C64, ONE, ZERO};

/// Householder QR of an `m×n` matrix with `m ≥ n`: returns `(Q, R)` with
/// `Q` unitary `m×m` and `R` upper triangular `m×n`.
pub fn householder_qr(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let (m, n) = (a.rows(), a.cols());
    assert!(m >= n, "householder_qr needs rows >= cols");
    let mut r = a.clone();
    let mut q = ComplexMatrix::identity(m);
    for k in 0..n.min(m.saturating_sub(1)) {
        let x: Vec<C64> = (k..m).map(|i| r[(i, k)]).collect();
        let xnorm = super::matrix::norm(&x);
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vn = super::matrix::norm(&v);
        if vn == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vn;
        }
        // R <- H R on rows k.., Q <- Q H on cols k..
        for j in k..n {
            let s: C64 = (k..m).map(|i| v[i - k].conj() * r[(i, j)]).sum();
            for i in k..m {
                let upd = v[i - k] * s * 2.0;
                r[(i, j)] -= upd;
            }
        }
        for i in 0..m {
            let s: C64 = (k..m).map(|j| q[(i, j)] * v[j - k]).sum();
            for j in k..m {
                let upd = s * v[j - k].conj() * 2.0;
                q[(i, j)] -= upd;
            }
        }
        for i in k + 1..m {
            r[(i, k)] = ZERO;
        }
    }
    (q, r)
}

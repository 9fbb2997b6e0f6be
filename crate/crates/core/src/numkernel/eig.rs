use super::matrix::{dot, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Off-diagonal deflation threshold, relative to the adjacent diagonal scale.
const DEFLATE_REL: f64 = 1e-14;
const MAX_SWEEPS: usize = 60;
/// Below this side length the trailing updates run single-threaded.
const PAR_MIN_SIDE: usize = 96;

/// Eigen-decomposition of a Hermitian matrix. Eigenvalues are sorted in
/// descending order; column `j` of `eigenvectors` belongs to `eigenvalues[j]`.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    /// `V·diag(λ)·V†`
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_eigenvalues(|x| x)
    }

    /// `V·diag(f(λ))·V†`
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let k = self.eigenvalues.len();
        let scaled = ComplexMatrix::from_fn(n, k, |i, j| v[(i, j)] * f(self.eigenvalues[j]));
        scaled.matmul(&v.dagger())
    }
}

struct Tridiagonal {
    diag: Vec<f64>,
    off: Vec<C64>,
    /// Householder vectors, `reflectors[k]` acting on indices `k+1..n`;
    /// `None` where the column was already reduced.
    reflectors: Vec<Option<Vec<C64>>>,
}

fn tridiagonalize(h: &ComplexMatrix) -> Tridiagonal {
    let n = h.rows();
    let mut a = h.as_slice().to_vec();
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    let mut reflectors = Vec::with_capacity(n.saturating_sub(2));

    for k in 0..n.saturating_sub(1) {
        let m = n - k - 1;
        let x: Vec<C64> = (k + 1..n).map(|i| a[i * n + k]).collect();
        let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
        if tail == 0.0 {
            off.push(x[0]);
            reflectors.push(None);
            continue;
        }
        let xnorm = (x[0].norm_sqr() + tail).sqrt();
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
        let alpha = -phase * xnorm;
        let mut v = x;
        v[0] -= alpha;
        let vn = super::matrix::norm(&v);
        for z in v.iter_mut() {
            *z /= vn;
        }

        let exec = if m >= PAR_MIN_SIDE {
            Execution::default()
        } else {
            Execution::Sequential
        };

        // p = A22 v over the trailing block
        let a_ref = &a;
        let v_ref = &v;
        let p: Vec<C64> = exec.map_range(m, |r| {
            let row = &a_ref[(k + 1 + r) * n + k + 1..(k + 2 + r) * n];
            row.iter().zip(v_ref).map(|(&x, &y)| x * y).sum()
        });
        let kappa = dot(&v, &p).re;
        let w: Vec<C64> = p.iter().zip(&v).map(|(&pi, &vi)| pi - vi * kappa).collect();

        // A22 -= 2 (v w† + w v†)
        let w_ref = &w;
        let trailing = &mut a[(k + 1) * n..];
        exec.for_each_chunk_mut(trailing, n, |r, row| {
            let (vr, wr) = (v_ref[r], w_ref[r]);
            for (c, z) in row[k + 1..].iter_mut().enumerate() {
                *z -= (vr * w_ref[c].conj() + wr * v_ref[c].conj()) * 2.0;
            }
        });

        for i in k + 1..n {
            a[i * n + k] = ZERO;
            a[k * n + i] = ZERO;
        }
        a[(k + 1) * n + k] = alpha;
        a[k * n + k + 1] = alpha.conj();
        off.push(alpha);
        reflectors.push(Some(v));
    }

    let diag = (0..n).map(|i| a[i * n + i].re).collect();
    Tridiagonal {
        diag,
        off,
        reflectors,
    }
}

/// `Q = H_0 H_1 … H_{n-2}` so that the input equals `Q·T·Q†`.
fn accumulate_q(n: usize, reflectors: &[Option<Vec<C64>>]) -> ComplexMatrix {
    let mut q = ComplexMatrix::identity(n);
    for (k, refl) in reflectors.iter().enumerate().rev() {
        let Some(v) = refl else { continue };
        let lo = k + 1;
        let m = n - lo;
        // u = v† Q[lo.., lo..]
        let mut u = vec![ZERO; m];
        for (r, &vr) in v.iter().enumerate() {
            let vc = vr.conj();
            let row = &q.row(lo + r)[lo..];
            for (uc, &x) in u.iter_mut().zip(row) {
                *uc += vc * x;
            }
        }
        let exec = if m >= PAR_MIN_SIDE {
            Execution::default()
        } else {
            Execution::Sequential
        };
        let u_ref = &u;
        let data = &mut q.as_mut_slice()[lo * n..];
        exec.for_each_chunk_mut(data, n, |r, row| {
            let s = v[r] * 2.0;
            for (z, &uc) in row[lo..].iter_mut().zip(u_ref) {
                *z -= s * uc;
            }
        });
    }
    q
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix. `e[i]` couples
/// `d[i]` and `d[i+1]`. When `z` is given its columns are rotated along.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    let anorm = d
        .iter()
        .chain(e.iter())
        .map(|x| x.abs())
        .fold(0.0, f64::max);
    let floor = 1e-3 * DEFLATE_REL * anorm;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= DEFLATE_REL * dd || e[m].abs() <= floor {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::NoConvergence);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let zi = z[k * n + i];
                        let zi1 = z[k * n + i + 1];
                        z[k * n + i + 1] = s * zi + c * zi1;
                        z[k * n + i] = c * zi - s * zi1;
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Real off-diagonal and the diagonal phases `φ` with `D†TD` real, `D = diag(φ)`.
fn realify(off: &[C64]) -> (Vec<f64>, Vec<C64>) {
    let n = off.len() + 1;
    let mut phases = Vec::with_capacity(n);
    phases.push(ONE);
    let mut e = Vec::with_capacity(n);
    for (k, &o) in off.iter().enumerate() {
        let mag = o.norm();
        let next = if mag > 0.0 { phases[k] * (o / mag) } else { phases[k] };
        phases.push(next);
        e.push(mag);
    }
    e.push(0.0);
    (e, phases)
}

fn descending_order(d: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..d.len()).collect();
    idx.sort_by(|&a, &b| d[b].total_cmp(&d[a]));
    idx
}

/// Full eigen-decomposition of a Hermitian matrix.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<Spectrum> {
    h.require_hermitian()?;
    let n = h.rows();
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: vec![],
            eigenvectors: ComplexMatrix::zeros(0, 0),
        });
    }
    let tri = tridiagonalize(h);
    let (mut e, phases) = realify(&tri.off);
    let mut d = tri.diag;
    let mut z = vec![0.0; n * n];
    for i in 0..n {
        z[i * n + i] = 1.0;
    }
    tridiagonal_ql(&mut d, &mut e, Some(&mut z))?;

    let q = accumulate_q(n, &tri.reflectors);
    let order = descending_order(&d);
    // V = Q·D·Z, columns reordered
    let qd = ComplexMatrix::from_fn(n, n, |i, j| q[(i, j)] * phases[j]);
    let zs = ComplexMatrix::from_fn(n, n, |i, j| C64::new(z[i * n + order[j]], 0.0));
    let eigenvectors = qd.matmul(&zs);
    let eigenvalues = order.iter().map(|&i| d[i]).collect();
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Eigenvalues only (descending); skips the eigenvector accumulation.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    h.require_hermitian()?;
    let n = h.rows();
    if n == 0 {
        return Ok(vec![]);
    }
    let tri = tridiagonalize(h);
    let (mut e, _) = realify(&tri.off);
    let mut d = tri.diag;
    tridiagonal_ql(&mut d, &mut e, None)?;
    let order = descending_order(&d);
    Ok(order.iter().map(|&i| d[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn random_hermitian(n: usize, rng: &mut Rng) -> ComplexMatrix {
        let g = ComplexMatrix::from_fn(n, n, |_, _| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        });
        g.hermitian_part()
    }

    #[test]
    fn diagonal_case() {
        let s = hermitian_eig(&ComplexMatrix::diag_real(&[1.0, 3.0, -2.0])).unwrap();
        assert_eq!(s.eigenvalues.len(), 3);
        for (got, want) in s.eigenvalues.iter().zip([3.0, 1.0, -2.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }

    #[test]
    fn pauli_x() {
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let s = hermitian_eig(&x).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn reconstructs_random_hermitian() {
        let mut rng = Rng::new(11);
        for n in [1, 2, 3, 16, 33, 120] {
            let h = random_hermitian(n, &mut rng);
            let s = hermitian_eig(&h).unwrap();
            let rel = s.reconstruct().distance(&h) / h.frobenius_norm();
            assert!(rel < 1e-12, "n={n} rel={rel}");
            let vv = s.eigenvectors.dagger().matmul(&s.eigenvectors);
            assert!(vv.max_abs_diff(&ComplexMatrix::identity(n)) < 1e-12);
            assert!(s.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
            let vals = hermitian_eigenvalues(&h).unwrap();
            for (a, b) in vals.iter().zip(&s.eigenvalues) {
                assert!((a - b).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // rank-2 projector in dimension 40: heavy degeneracy at 0 and 1
        let mut rng = Rng::new(5);
        let h = random_hermitian(40, &mut rng);
        let s = hermitian_eig(&h).unwrap();
        let p = ComplexMatrix::from_fn(40, 40, |i, j| {
            s.eigenvectors[(i, 0)] * s.eigenvectors[(j, 0)].conj()
                + s.eigenvectors[(i, 1)] * s.eigenvectors[(j, 1)].conj()
        });
        let vals = hermitian_eigenvalues(&p).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-12 && (vals[1] - 1.0).abs() < 1e-12);
        assert!(vals[2..].iter().all(|x| x.abs() < 1e-12));
    }
}

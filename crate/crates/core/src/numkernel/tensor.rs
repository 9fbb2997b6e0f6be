use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Kronecker product: `result[(i·rb+k),(j·cb+l)] = a[i,j]·b[k,l]`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ra, ca, rb, cb) = (a.rows(), a.cols(), b.rows(), b.cols());
    let mut out = ComplexMatrix::zeros(ra * rb, ca * cb);
    let ncols = ca * cb;
    let data = out.as_mut_slice();
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[(i, j)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..rb {
                let row = (i * rb + k) * ncols + j * cb;
                for l in 0..cb {
                    data[row + l] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Left-to-right Kronecker product of a non-empty list.
pub fn kron_all(factors: &[ComplexMatrix]) -> ComplexMatrix {
    let mut it = factors.iter();
    let first = it.next().expect("kron_all needs at least one factor").clone();
    it.fold(first, |acc, f| kron(&acc, f))
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Offsets into the full index space of every joint index over `factors`,
/// enumerated in row-major order of those factors.
fn offsets(dims: &[usize], strides: &[usize], factors: &[usize]) -> Vec<usize> {
    let mut offs = vec![0usize];
    for &f in factors {
        let mut next = Vec::with_capacity(offs.len() * dims[f]);
        for &o in &offs {
            for k in 0..dims[f] {
                next.push(o + k * strides[f]);
            }
        }
        offs = next;
    }
    offs
}

fn check_square(m: &ComplexMatrix, dims: &[usize]) -> Result<usize> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows() != total {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix for subsystem dims {dims:?}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(total)
}

/// Traces out every factor not listed in `keep`. Kept factors stay in their
/// original relative order.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_square(m, dims)?;
    let mut kept = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if kept.len() != keep.len() {
        return Err(Error::InvalidArgument(format!("duplicate factor in {keep:?}")));
    }
    if let Some(&bad) = kept.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::FactorOutOfRange {
            index: bad,
            count: dims.len(),
        });
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
    let st = strides(dims);
    let ko = offsets(dims, &st, &kept);
    let to = offsets(dims, &st, &traced);
    let n = ko.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (r, &kr) in ko.iter().enumerate() {
        for (c, &kc) in ko.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &to {
                acc += m[(kr + t, kc + t)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

fn permutation_map(dims: &[usize], order: &[usize]) -> Result<Vec<usize>> {
    let mut seen = vec![false; dims.len()];
    if order.len() != dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "order {order:?} for {} factors",
            dims.len()
        )));
    }
    for &o in order {
        if o >= dims.len() {
            return Err(Error::FactorOutOfRange {
                index: o,
                count: dims.len(),
            });
        }
        if std::mem::replace(&mut seen[o], true) {
            return Err(Error::InvalidArgument(format!("repeated factor in {order:?}")));
        }
    }
    let st = strides(dims);
    Ok(offsets(dims, &st, order))
}

/// Reorders tensor factors: factor `k` of the result is factor `order[k]` of
/// the input. Returns the permuted matrix; the new dims are
/// `order.iter().map(|&o| dims[o])`.
pub fn permute_factors(m: &ComplexMatrix, dims: &[usize], order: &[usize]) -> Result<ComplexMatrix> {
    check_square(m, dims)?;
    let map = permutation_map(dims, order)?;
    let n = map.len();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| m[(map[i], map[j])]))
}

/// Vector analogue of [`permute_factors`].
pub fn permute_vector_factors(v: &[C64], dims: &[usize], order: &[usize]) -> Result<Vec<C64>> {
    let total: usize = dims.iter().product();
    if v.len() != total {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} for dims {dims:?}",
            v.len()
        )));
    }
    let map = permutation_map(dims, order)?;
    Ok(map.iter().map(|&i| v[i]).collect())
}

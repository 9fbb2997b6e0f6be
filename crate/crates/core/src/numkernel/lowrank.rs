use super::eig::hermitian_eigenvalues;
use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};
use crate::exec::Execution;

/// Vectors whose residual after projection falls below this fraction of
/// their original norm are treated as already spanned.
const SPAN_DROP: f64 = 1e-12;

/// PSD operator `Σ wᵢ|vᵢ⟩⟨vᵢ|` kept in factored form.
#[derive(Clone, Debug, PartialEq)]
pub struct LowRank {
    dim: usize,
    terms: Vec<(f64, Vec<C64>)>,
}

impl LowRank {
    pub fn new(dim: usize, terms: Vec<(f64, Vec<C64>)>) -> Result<Self> {
        for (w, v) in &terms {
            if *w < 0.0 {
                return Err(Error::NegativeWeight(*w));
            }
            if v.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "vector of length {} in ambient dimension {dim}",
                    v.len()
                )));
            }
        }
        Ok(Self { dim, terms })
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: vec![] }
    }

    pub fn pure(v: Vec<C64>) -> Self {
        Self {
            dim: v.len(),
            terms: vec![(1.0, v)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored terms (an upper bound on the rank).
    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[(f64, Vec<C64>)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(f64, Vec<C64>)> {
        self.terms
    }

    pub fn trace(&self) -> f64 {
        self.terms
            .iter()
            .map(|(w, v)| w * v.iter().map(|z| z.norm_sqr()).sum::<f64>())
            .sum()
    }

    pub fn to_dense(&self) -> ComplexMatrix {
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n, n);
        let terms = &self.terms;
        Execution::default().for_each_chunk_mut(out.as_mut_slice(), n.max(1), |i, row| {
            for (w, v) in terms {
                let a = v[i] * *w;
                if a == ZERO {
                    continue;
                }
                for (o, b) in row.iter_mut().zip(v) {
                    *o += a * b.conj();
                }
            }
        });
        out
    }

    /// `tr(A·B)` from pairwise overlaps.
    pub fn trace_product(&self, other: &LowRank) -> f64 {
        let rows = Execution::default().map_range(self.terms.len(), |i| {
            let (wa, va) = &self.terms[i];
            other
                .terms
                .iter()
                .map(|(wb, vb)| wa * wb * super::matrix::dot(va, vb).norm_sqr())
                .sum::<f64>()
        });
        rows.iter().sum()
    }

    /// `‖A − B‖_F` without densifying. Panics if the ambient dimensions
    /// differ.
    pub fn frobenius_distance(&self, other: &LowRank) -> f64 {
        assert_eq!(self.dim, other.dim, "ambient dimensions differ");
        projected_difference(self, other).map_or(0.0, |m| m.frobenius_norm())
    }
}

/// Orthonormal basis of the span (classical Gram–Schmidt, two passes) plus
/// the coordinates of every input vector in that basis.
fn orthonormalize(vectors: &[&[C64]]) -> (usize, Vec<Vec<C64>>) {
    let exec = Execution::default();
    let mut basis: Vec<Vec<C64>> = Vec::new();
    let mut coords: Vec<Vec<C64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let original = super::matrix::norm(v);
        let mut resid = v.to_vec();
        let mut coeff = vec![ZERO; basis.len()];
        for _ in 0..2 {
            let c: Vec<C64> = exec.map_range(basis.len(), |j| super::matrix::dot(&basis[j], &resid));
            for (j, cj) in c.iter().enumerate() {
                coeff[j] += cj;
                for (r, q) in resid.iter_mut().zip(&basis[j]) {
                    *r -= cj * q;
                }
            }
        }
        let rn = super::matrix::norm(&resid);
        if original > 0.0 && rn > SPAN_DROP * original {
            for r in resid.iter_mut() {
                *r /= rn;
            }
            basis.push(resid);
            coeff.push(C64::new(rn, 0.0));
        }
        coords.push(coeff);
    }
    let r = basis.len();
    for c in coords.iter_mut() {
        c.resize(r, ZERO);
    }
    (r, coords)
}

/// `‖A − B‖₁` for PSD operators given in factored form. The difference is
/// projected onto the joint span (at most `rank(A) + rank(B)` dimensional)
/// and diagonalized there.
pub fn low_rank_trace_norm(a: &LowRank, b: &LowRank) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch(format!(
            "ambient dimensions {} and {}",
            a.dim, b.dim
        )));
    }
    Ok(match projected_difference(a, b) {
        Some(m) => hermitian_eigenvalues(&m)?.iter().map(|x| x.abs()).sum(),
        None => 0.0,
    })
}

/// `A − B` expressed in an orthonormal basis of the joint span, or `None`
/// when both are zero.
fn projected_difference(a: &LowRank, b: &LowRank) -> Option<ComplexMatrix> {
    let vectors: Vec<&[C64]> = a
        .terms
        .iter()
        .chain(&b.terms)
        .map(|(_, v)| v.as_slice())
        .collect();
    let signs: Vec<f64> = a
        .terms
        .iter()
        .map(|(w, _)| *w)
        .chain(b.terms.iter().map(|(w, _)| -*w))
        .collect();
    let (r, coords) = orthonormalize(&vectors);
    if r == 0 {
        return None;
    }
    let mut m = ComplexMatrix::zeros(r, r);
    for (c, s) in coords.iter().zip(&signs) {
        for i in 0..r {
            let ci = c[i] * *s;
            if ci == ZERO {
                continue;
            }
            for j in 0..r {
                m[(i, j)] += ci * c[j].conj();
            }
        }
    }
    Some(m.hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_against_zero() {
        let v = vec![C64::new(0.6, 0.0), C64::new(0.0, 0.8), ZERO];
        let n = low_rank_trace_norm(&LowRank::pure(v), &LowRank::zero(3)).unwrap();
        assert!((n - 1.0).abs() < 1e-14);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            LowRank::new(2, vec![(-0.1, vec![ZERO; 2])]),
            Err(Error::NegativeWeight(_))
        ));
        assert!(matches!(
            low_rank_trace_norm(&LowRank::zero(2), &LowRank::zero(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn dependent_vectors_are_dropped() {
        let v = vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)];
        let a = LowRank::new(2, vec![(0.25, v.clone()), (0.25, v.clone())]).unwrap();
        let b = LowRank::new(2, vec![(0.5, v)]).unwrap();
        assert!(low_rank_trace_norm(&a, &b).unwrap() < 1e-14);
    }

    #[test]
    fn frobenius_distance_matches_dense() {
        let a = LowRank::new(2, vec![(0.5, vec![C64::new(1.0, 0.0), ZERO]), (0.5, vec![ZERO, C64::new(0.0, 1.0)])]).unwrap();
        let b = LowRank::pure(vec![C64::new(0.6, 0.0), C64::new(0.8, 0.0)]);
        let dense = a.to_dense().distance(&b.to_dense());
        assert!((a.frobenius_distance(&b) - dense).abs() < 1e-14);
    }
}

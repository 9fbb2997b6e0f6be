use std::borrow::Cow;

use crate::error::{Error, Result};
use crate::numkernel::{
    hermitian_eigenvalues, kron, partial_trace, permute_factors, permute_vector_factors,
    ComplexMatrix, LowRank, C64, PSD_FLOOR,
};

/// Trace and normalization tolerance for states.
pub(crate) const STATE_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
enum Repr {
    Dense(ComplexMatrix),
    Factored(LowRank),
}

/// Density operator on an ordered list of subsystems.
///
/// Pure probes and their channel images are stored in factored form
/// `Σ wᵢ|vᵢ⟩⟨vᵢ|` as long as that is cheaper than the dense matrix;
/// [`MultiState::rho`] materializes the dense operator on demand.
#[derive(Clone, Debug)]
pub struct MultiState {
    dims: Vec<usize>,
    repr: Repr,
}

fn check_side(dims: &[usize], side: usize) -> Result<()> {
    let total: usize = dims.iter().product();
    if total != side {
        return Err(Error::DimensionMismatch(format!(
            "operator side {side} for subsystem dims {dims:?}"
        )));
    }
    Ok(())
}

impl MultiState {
    /// Validates Hermiticity, positivity (eigenvalue floor `-1e-10`) and unit trace.
    pub fn new(rho: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} density operator",
                rho.rows(),
                rho.cols()
            )));
        }
        check_side(&dims, rho.rows())?;
        let s = Self {
            dims,
            repr: Repr::Dense(rho),
        };
        s.validate()?;
        Ok(s)
    }

    /// Pure state `|ψ⟩⟨ψ|`; `amplitudes` must have unit norm.
    pub fn pure(amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        check_side(&dims, amplitudes.len())?;
        let n2: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (n2 - 1.0).abs() > STATE_TOL {
            return Err(Error::BadTrace(n2));
        }
        Ok(Self {
            dims,
            repr: Repr::Factored(LowRank::pure(amplitudes)),
        })
    }

    pub fn from_low_rank(lr: LowRank, dims: Vec<usize>) -> Result<Self> {
        check_side(&dims, lr.dim())?;
        let t = lr.trace();
        if (t - 1.0).abs() > STATE_TOL {
            return Err(Error::BadTrace(t));
        }
        Ok(Self {
            dims,
            repr: Repr::Factored(lr),
        })
    }

    pub(crate) fn dense_unchecked(rho: ComplexMatrix, dims: Vec<usize>) -> Self {
        debug_assert_eq!(rho.rows(), dims.iter().product::<usize>());
        Self {
            dims,
            repr: Repr::Dense(rho),
        }
    }

    pub(crate) fn factored_unchecked(lr: LowRank, dims: Vec<usize>) -> Self {
        debug_assert_eq!(lr.dim(), dims.iter().product::<usize>());
        Self {
            dims,
            repr: Repr::Factored(lr),
        }
    }

    /// `I/d` on a single subsystem.
    pub fn maximally_mixed(d: usize) -> Self {
        Self::dense_unchecked(ComplexMatrix::identity(d).scale_real(1.0 / d as f64), vec![d])
    }

    /// Computational basis state `|k⟩` of a single subsystem.
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(Error::ValueOutOfRange { value: k, d });
        }
        let mut v = vec![C64::new(0.0, 0.0); d];
        v[k] = C64::new(1.0, 0.0);
        Self::pure(v, vec![d])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Side length of the density matrix.
    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_factored(&self) -> bool {
        matches!(self.repr, Repr::Factored(_))
    }

    /// Factored form, when the state is stored that way.
    pub fn low_rank(&self) -> Option<&LowRank> {
        match &self.repr {
            Repr::Factored(lr) => Some(lr),
            Repr::Dense(_) => None,
        }
    }

    /// Number of factored terms, if factored.
    pub fn stored_rank(&self) -> Option<usize> {
        self.low_rank().map(LowRank::rank)
    }

    /// Dense density matrix (borrowed when already dense).
    pub fn rho(&self) -> Cow<'_, ComplexMatrix> {
        match &self.repr {
            Repr::Dense(m) => Cow::Borrowed(m),
            Repr::Factored(lr) => Cow::Owned(lr.to_dense()),
        }
    }

    /// Same state, stored densely.
    pub fn densified(&self) -> Self {
        Self::dense_unchecked(self.rho().into_owned(), self.dims.clone())
    }

    pub fn trace(&self) -> f64 {
        match &self.repr {
            Repr::Dense(m) => m.trace().re,
            Repr::Factored(lr) => lr.trace(),
        }
    }

    /// Re-checks every state invariant.
    pub fn validate(&self) -> Result<()> {
        let t = self.trace();
        if (t - 1.0).abs() > STATE_TOL {
            return Err(Error::BadTrace(t));
        }
        if let Repr::Dense(m) = &self.repr {
            m.require_hermitian()?;
            let min = hermitian_eigenvalues(m)?.last().copied().unwrap_or(0.0);
            if min < PSD_FLOOR {
                return Err(Error::NotPsd(min));
            }
        }
        Ok(())
    }

    /// Marginal on `keep` (kept factors stay in their original order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let dims: Vec<usize> = {
            let mut k = keep.to_vec();
            k.sort_unstable();
            k.dedup();
            if let Some(&bad) = k.iter().find(|&&i| i >= self.dims.len()) {
                return Err(Error::FactorOutOfRange {
                    index: bad,
                    count: self.dims.len(),
                });
            }
            k.iter().map(|&i| self.dims[i]).collect()
        };
        match &self.repr {
            Repr::Dense(m) => Ok(Self::dense_unchecked(
                partial_trace(m, &self.dims, keep)?,
                dims,
            )),
            Repr::Factored(lr) => {
                let mut kept = keep.to_vec();
                kept.sort_unstable();
                kept.dedup();
                let traced: Vec<usize> = (0..self.dims.len()).filter(|i| !kept.contains(i)).collect();
                let order: Vec<usize> = kept.iter().chain(&traced).copied().collect();
                let k: usize = dims.iter().product();
                let t: usize = traced.iter().map(|&i| self.dims[i]).product();
                let mut out = ComplexMatrix::zeros(k, k);
                for (w, v) in lr.terms() {
                    let pv = permute_vector_factors(v, &self.dims, &order)?;
                    for r in 0..k {
                        for c in 0..k {
                            let mut acc = C64::new(0.0, 0.0);
                            for x in 0..t {
                                acc += pv[r * t + x] * pv[c * t + x].conj();
                            }
                            out[(r, c)] += acc * *w;
                        }
                    }
                }
                Ok(Self::dense_unchecked(out, dims))
            }
        }
    }

    /// Reorders subsystems: factor `k` of the result is factor `order[k]` here.
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        let dims: Vec<usize> = order
            .iter()
            .map(|&o| {
                self.dims.get(o).copied().ok_or(Error::FactorOutOfRange {
                    index: o,
                    count: self.dims.len(),
                })
            })
            .collect::<Result<_>>()?;
        let repr = match &self.repr {
            Repr::Dense(m) => Repr::Dense(permute_factors(m, &self.dims, order)?),
            Repr::Factored(lr) => {
                let terms = lr
                    .terms()
                    .iter()
                    .map(|(w, v)| Ok((*w, permute_vector_factors(v, &self.dims, order)?)))
                    .collect::<Result<Vec<_>>>()?;
                Repr::Factored(LowRank::new(lr.dim(), terms)?)
            }
        };
        Ok(Self { dims, repr })
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Self {
        let dims: Vec<usize> = self.dims.iter().chain(&other.dims).copied().collect();
        match (&self.repr, &other.repr) {
            (Repr::Factored(a), Repr::Factored(b)) => {
                let mut terms = Vec::with_capacity(a.rank() * b.rank());
                for (wa, va) in a.terms() {
                    for (wb, vb) in b.terms() {
                        let v: Vec<C64> = va
                            .iter()
                            .flat_map(|x| vb.iter().map(move |y| x * y))
                            .collect();
                        terms.push((wa * wb, v));
                    }
                }
                let dim = a.dim() * b.dim();
                Self::factored_unchecked(
                    LowRank::new(dim, terms).expect("tensor of valid factors"),
                    dims,
                )
            }
            _ => Self::dense_unchecked(kron(&self.rho(), &other.rho()), dims),
        }
    }

    /// Frobenius distance `‖ρ − σ‖_F`; stays factored when both are.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "states on {:?} and {:?}",
                self.dims, other.dims
            )));
        }
        Ok(match (&self.repr, &other.repr) {
            (Repr::Factored(a), Repr::Factored(b)) => a.frobenius_distance(b),
            _ => self.rho().distance(&other.rho()),
        })
    }
}

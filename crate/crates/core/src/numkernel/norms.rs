use super::eig::{hermitian_eig, hermitian_eigenvalues};
use super::matrix::{ComplexMatrix, C64};
use super::PSD_FLOOR;
use crate::error::{Error, Result};

/// `‖G‖₁ = Σ|λᵢ|` for Hermitian `G`.
pub fn trace_norm(g: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigenvalues(g)?.iter().map(|x| x.abs()).sum())
}

/// Square root of a PSD matrix. Eigenvalues in `[PSD_FLOOR, 0)` are clamped
/// to zero, anything lower is rejected.
pub fn psd_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let s = hermitian_eig(m)?;
    let min = s.eigenvalues.last().copied().unwrap_or(0.0);
    if min < PSD_FLOOR {
        return Err(Error::NotPsd(min));
    }
    Ok(s.map_eigenvalues(|x| x.max(0.0).sqrt()))
}

/// Eigenvalues at or below this fraction of the largest one are treated as
/// round-off when a PSD matrix is factored for the fidelity.
const FACTOR_CUTOFF: f64 = 1e-13;

/// `A` with `A·A† = m` on the numerically nonzero part of the spectrum.
fn psd_factor(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let s = hermitian_eig(m)?;
    let min = s.eigenvalues.last().copied().unwrap_or(0.0);
    if min < PSD_FLOOR {
        return Err(Error::NotPsd(min));
    }
    let cutoff = FACTOR_CUTOFF * s.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let keep: Vec<usize> = (0..s.eigenvalues.len()).filter(|&j| s.eigenvalues[j] > cutoff).collect();
    let v = &s.eigenvectors;
    Ok(ComplexMatrix::from_fn(m.rows(), keep.len(), |i, k| {
        v[(i, keep[k])] * s.eigenvalues[keep[k]].sqrt()
    }))
}

/// Squared Uhlmann fidelity `(tr√(√ρ σ √ρ))²`.
///
/// Evaluated as `‖A†B‖₁²` with `ρ = AA†`, `σ = BB†`. The singular values
/// of `A†B` are read off its Hermitian dilation, so round-off in rank
/// deficient inputs is not amplified by a square root.
pub fn state_fidelity(rho: &ComplexMatrix, sigma: &ComplexMatrix) -> Result<f64> {
    if rho.rows() != sigma.rows() || !rho.is_square() || !sigma.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "fidelity of {}x{} and {}x{}",
            rho.rows(),
            rho.cols(),
            sigma.rows(),
            sigma.cols()
        )));
    }
    let a = psd_factor(rho)?;
    let b = psd_factor(sigma)?;
    let m = a.dagger().matmul(&b);
    let (r, c) = (m.rows(), m.cols());
    let dilation = ComplexMatrix::from_fn(r + c, r + c, |i, j| match (i < r, j < r) {
        (true, false) => m[(i, j - r)],
        (false, true) => m[(j, i - r)].conj(),
        _ => C64::new(0.0, 0.0),
    });
    let nuclear = trace_norm(&dilation)? / 2.0;
    Ok(nuclear * nuclear)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ket(v: &[(f64, f64)]) -> Vec<C64> {
        v.iter().map(|&(r, i)| C64::new(r, i)).collect()
    }

    #[test]
    fn signed_diagonal() {
        assert!((trace_norm(&ComplexMatrix::diag_real(&[1.0, -1.0])).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn density_operator_has_unit_trace_norm() {
        let v = ket(&[(0.6, 0.0), (0.0, 0.8)]);
        let rho = ComplexMatrix::projector(&v).scale_real(0.5);
        let rho = &rho + &ComplexMatrix::identity(2).scale_real(0.25);
        assert!((trace_norm(&rho).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn fidelity_of_pure_states_is_overlap() {
        let psi = ket(&[(0.6, 0.0), (0.0, 0.8)]);
        let phi = ket(&[(std::f64::consts::FRAC_1_SQRT_2, 0.0), (0.5, 0.5)]);
        let ov: C64 = psi.iter().zip(&phi).map(|(a, b)| a.conj() * b).sum();
        let f = state_fidelity(&ComplexMatrix::projector(&psi), &ComplexMatrix::projector(&phi)).unwrap();
        assert!((f - ov.norm_sqr()).abs() < 1e-12);
    }

    #[test]
    fn fidelity_edge_cases() {
        let p0 = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let p1 = ComplexMatrix::diag_real(&[0.0, 1.0]);
        assert!(state_fidelity(&p0, &p1).unwrap().abs() < 1e-12);
        let mixed = ComplexMatrix::diag_real(&[0.3, 0.7]);
        assert!((state_fidelity(&mixed, &mixed).unwrap() - 1.0).abs() < 1e-12);
        let bad = ComplexMatrix::diag_real(&[1.5, -0.5]);
        assert!(matches!(state_fidelity(&bad, &mixed), Err(Error::NotPsd(_))));
        assert!(matches!(state_fidelity(&mixed, &bad), Err(Error::NotPsd(_))));
    }

    #[test]
    fn rank_deficient_fidelity_is_exact() {
        // |0⟩⟨0| ⊗ I/2 against I/2 ⊗ |+⟩⟨+|
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = ComplexMatrix::projector(&ket(&[(h, 0.0), (h, 0.0)]));
        let zero = ComplexMatrix::diag_real(&[1.0, 0.0]);
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        let a = crate::numkernel::kron(&zero, &half);
        let b = crate::numkernel::kron(&half, &plus);
        assert!((state_fidelity(&a, &b).unwrap() - 0.25).abs() < 1e-14);
    }
}

//! Minimum-error discrimination between hypotheses.
//!
//! Quantum pairs use the Helstrom bound, `k`-ary ensembles the square-root
//! measurement. On the classical side the optimum over non-adaptive basis
//! inputs is found by exact enumeration, and a seeded Monte Carlo run
//! checks it empirically.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numkernel::{hermitian_eig, low_rank_trace_norm, trace_norm, ComplexMatrix, LowRank, C64};
use crate::quantum::{random_permutation, Dependence, HypothesisSpec, MultiState, Rng};
use crate::strategies::classical_output_distribution;

/// Both states must expose at most this stored rank for the automatic
/// low-rank path.
pub const LOW_RANK_MAX_RANK: usize = 256;
/// Ambient dimension above which the automatic path goes low-rank.
pub const LOW_RANK_MIN_DIM: usize = 1024;
/// Largest dimension densified for Helstrom or SRM evaluation.
pub const DENSE_MAX_DIM: usize = 8192;
/// Eigenvalues of the average state at or below this fraction of the
/// largest one are treated as zero by the square-root measurement.
pub const SRM_CUTOFF: f64 = 1e-12;
/// Trials per Monte Carlo work unit. Each unit draws from its own forked
/// stream, so results do not depend on the thread count.
pub const MC_CHUNK: u64 = 65_536;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Helstrom,
    Srm,
    TvEnumeration,
    MonteCarlo,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Helstrom => "helstrom",
            Method::Srm => "srm",
            Method::TvEnumeration => "tv_enumeration",
            Method::MonteCarlo => "monte_carlo",
        }
    }
}

/// How the trace norm in [`helstrom_error_with`] is evaluated.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TraceNormPath {
    #[default]
    Auto,
    Dense,
    LowRank,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    /// `‖p₁ρ₁ − p₂ρ₂‖₁` for Helstrom, the total-variation distance for the
    /// classical optimum.
    pub trace_distance: Option<f64>,
    pub samples: Option<u64>,
    pub std_error: Option<f64>,
    /// Which trace-norm path was taken.
    pub path: Option<TraceNormPath>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiscriminationResult {
    pub error_probability: f64,
    pub method: Method,
    pub diagnostics: Diagnostics,
    /// Exact value, when the computation was rational.
    pub exact: Option<Ratio<u64>>,
    /// Input tuple achieving the optimum, for classical searches.
    pub witness: Option<Vec<usize>>,
}

impl DiscriminationResult {
    fn new(error_probability: f64, method: Method) -> Self {
        Self {
            error_probability,
            method,
            diagnostics: Diagnostics::default(),
            exact: None,
            witness: None,
        }
    }
}

fn check_prior(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("prior {p} outside [0, 1]")))
    }
}

fn check_dense(dim: usize) -> Result<()> {
    if dim > DENSE_MAX_DIM {
        return Err(Error::Infeasible(format!("dense evaluation at dimension {dim}")));
    }
    Ok(())
}

/// `p·ρ` in factored form; dense states are factored through their
/// spectrum.
fn weighted(state: &MultiState, p: f64) -> Result<LowRank> {
    match state.low_rank() {
        Some(lr) => LowRank::new(lr.dim(), lr.terms().iter().map(|(w, v)| (w * p, v.clone())).collect()),
        None => {
            let s = hermitian_eig(&state.rho())?;
            let terms = s
                .eigenvalues
                .iter()
                .enumerate()
                .filter(|(_, &l)| l > 0.0)
                .map(|(j, &l)| (l * p, s.eigenvectors.column_vec(j)))
                .collect();
            LowRank::new(state.dim(), terms)
        }
    }
}

/// Helstrom error `(1 − ‖p₁ρ₁ − p₂ρ₂‖₁)/2` with automatic path selection.
pub fn helstrom_error(rho1: &MultiState, rho2: &MultiState, prior1: f64) -> Result<DiscriminationResult> {
    helstrom_error_with(rho1, rho2, prior1, TraceNormPath::Auto)
}

/// [`helstrom_error`] with an explicit trace-norm path. Forcing the
/// low-rank path on a dense state factors it through its spectrum first.
pub fn helstrom_error_with(
    rho1: &MultiState,
    rho2: &MultiState,
    prior1: f64,
    path: TraceNormPath,
) -> Result<DiscriminationResult> {
    if rho1.dims() != rho2.dims() {
        return Err(Error::DimensionMismatch(format!(
            "states on {:?} and {:?}",
            rho1.dims(),
            rho2.dims()
        )));
    }
    check_prior(prior1)?;
    let prior2 = 1.0 - prior1;
    let factored = match (rho1.low_rank(), rho2.low_rank()) {
        (Some(a), Some(b)) => Some((a, b)),
        _ => None,
    };
    let resolved = match path {
        TraceNormPath::Auto => match factored {
            Some((a, b))
                if a.rank() <= LOW_RANK_MAX_RANK
                    && b.rank() <= LOW_RANK_MAX_RANK
                    && rho1.dim() > LOW_RANK_MIN_DIM =>
            {
                TraceNormPath::LowRank
            }
            _ => TraceNormPath::Dense,
        },
        other => other,
    };
    let norm = match resolved {
        TraceNormPath::LowRank => low_rank_trace_norm(&weighted(rho1, prior1)?, &weighted(rho2, prior2)?)?,
        _ => {
            check_dense(rho1.dim())?;
            let mut m = rho1.rho().scale_real(prior1);
            m.add_assign_scaled(&rho2.rho(), C64::new(-prior2, 0.0));
            trace_norm(&m)?
        }
    };
    let mut out = DiscriminationResult::new(((1.0 - norm) / 2.0).max(0.0), Method::Helstrom);
    out.diagnostics.trace_distance = Some(norm);
    out.diagnostics.path = Some(resolved);
    Ok(out)
}

/// Error of the square-root measurement `Πᵢ = S^{-1/2} pᵢρᵢ S^{-1/2}`,
/// `S = Σ pᵢρᵢ`, an upper bound on the optimal `k`-ary error.
pub fn srm_error(states: &[MultiState], priors: &[f64]) -> Result<DiscriminationResult> {
    if states.is_empty() || states.len() != priors.len() {
        return Err(Error::InvalidArgument(format!(
            "{} states with {} priors",
            states.len(),
            priors.len()
        )));
    }
    let dims = states[0].dims();
    if let Some(s) = states.iter().find(|s| s.dims() != dims) {
        return Err(Error::DimensionMismatch(format!("states on {:?} and {:?}", dims, s.dims())));
    }
    for &p in priors {
        check_prior(p)?;
    }
    let total: f64 = priors.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("priors sum to {total}")));
    }
    let dim = states[0].dim();
    check_dense(dim)?;

    let weighted: Vec<ComplexMatrix> = states
        .iter()
        .zip(priors)
        .map(|(s, &p)| s.rho().scale_real(p))
        .collect();
    let mut avg = ComplexMatrix::zeros(dim, dim);
    for w in &weighted {
        avg.add_assign_scaled(w, C64::new(1.0, 0.0));
    }
    let spec = hermitian_eig(&avg.hermitian_part())?;
    let cutoff = SRM_CUTOFF * spec.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let inv_sqrt = spec.map_eigenvalues(|x| if x > cutoff { 1.0 / x.sqrt() } else { 0.0 });

    let exec = Execution::default();
    let success: f64 = exec
        .map_range(weighted.len(), |i| {
            let w = &weighted[i];
            let povm = inv_sqrt.matmul(w).matmul(&inv_sqrt);
            povm.matmul(w).trace().re
        })
        .iter()
        .sum();
    Ok(DiscriminationResult::new((1.0 - success).clamp(0.0, 1.0), Method::Srm))
}

/// Integer partitions of `n` into at most `parts` parts, largest first.
fn partitions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, max: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        if parts == 0 {
            return;
        }
        for k in (1..=max.min(rest)).rev() {
            cur.push(k);
            go(rest - k, k, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, parts, &mut Vec::new(), &mut out);
    out
}

/// Exact optimal error of `n` non-adaptive classical queries, `d ≤ 3` and
/// `n ≤ 4`.
///
/// Relabeling input values by a shared permutation, or reordering the
/// queries, maps both hypothesis mixtures onto themselves. It is therefore
/// enough to search over how often each value is repeated.
pub fn classical_optimum(d: usize, n: usize) -> Result<DiscriminationResult> {
    if !(2..=3).contains(&d) || !(1..=4).contains(&n) {
        return Err(Error::Infeasible(format!(
            "exact classical search limited to 2 <= d <= 3, 1 <= n <= 4 (got d = {d}, n = {n})"
        )));
    }
    let h1 = HypothesisSpec::h1(d, Dependence::Permutation)?;
    let h2 = HypothesisSpec::h2(d, Dependence::Permutation)?;
    let mut best: Option<(Ratio<u64>, Vec<usize>)> = None;
    for pattern in partitions(n, d) {
        let inputs: Vec<usize> = pattern
            .iter()
            .enumerate()
            .flat_map(|(value, &count)| std::iter::repeat_n(value, count))
            .collect();
        let tv = classical_output_distribution(&inputs, &h1)?
            .total_variation(&classical_output_distribution(&inputs, &h2)?)?;
        if best.as_ref().is_none_or(|(b, _)| tv > *b) {
            best = Some((tv, inputs));
        }
    }
    let (tv, witness) = best.expect("at least one pattern");
    let exact = (Ratio::from_integer(1) - tv) / 2;
    let mut out = DiscriminationResult::new(ratio_f64(exact), Method::TvEnumeration);
    out.diagnostics.trace_distance = Some(ratio_f64(tv));
    out.exact = Some(exact);
    out.witness = Some(witness);
    Ok(out)
}

fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Empirical error of the likelihood-ratio decision on simulated classical
/// runs with the given inputs.
pub fn monte_carlo_classical(
    d: usize,
    n: usize,
    inputs: &[usize],
    trials: u64,
    rng: &Rng,
) -> Result<DiscriminationResult> {
    monte_carlo_classical_with(d, n, inputs, trials, rng, Execution::default())
}

/// [`monte_carlo_classical`] with an explicit execution mode. The estimate
/// is identical for both modes.
pub fn monte_carlo_classical_with(
    d: usize,
    n: usize,
    inputs: &[usize],
    trials: u64,
    rng: &Rng,
    exec: Execution,
) -> Result<DiscriminationResult> {
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    if inputs.len() != n {
        return Err(Error::InvalidArgument(format!("{} inputs for n = {n}", inputs.len())));
    }
    let h1 = classical_output_distribution(inputs, &HypothesisSpec::h1(d, Dependence::Permutation)?)?;
    let h2 = classical_output_distribution(inputs, &HypothesisSpec::h2(d, Dependence::Permutation)?)?;
    // same denominator on both sides, so counts compare directly
    let decide_h1: Vec<bool> = h1.counts().iter().zip(h2.counts()).map(|(a, b)| a >= b).collect();
    let side = d.pow(n as u32);

    let chunks = trials.div_ceil(MC_CHUNK);
    let errors: u64 = exec
        .map_range(chunks as usize, |c| {
            let mut local = rng.fork(c as u64);
            let len = MC_CHUNK.min(trials - c as u64 * MC_CHUNK);
            let mut wrong = 0u64;
            for _ in 0..len {
                let truth_h1 = rand::Rng::random_bool(&mut local, 0.5);
                let perm = random_permutation(d, &mut local);
                let effect = inputs.iter().fold(0, |acc, &a| acc * d + perm[a]);
                let other = rand::Rng::random_range(&mut local, 0..side);
                let outcome = if truth_h1 { effect * side + other } else { other * side + effect };
                if decide_h1[outcome] != truth_h1 {
                    wrong += 1;
                }
            }
            wrong
        })
        .iter()
        .sum();

    let p = errors as f64 / trials as f64;
    let mut out = DiscriminationResult::new(p, Method::MonteCarlo);
    out.diagnostics.samples = Some(trials);
    out.diagnostics.std_error = Some((p * (1.0 - p) / trials as f64).sqrt());
    out.witness = Some(inputs.to_vec());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::random_density_matrix;
    use crate::strategies::{output_state, ProbeKind};

    fn pure(v: &[f64]) -> MultiState {
        MultiState::pure(v.iter().map(|&x| C64::new(x, 0.0)).collect(), vec![v.len()]).unwrap()
    }

    #[test]
    fn trivial_cases() {
        let a = pure(&[1.0, 0.0]);
        let b = pure(&[0.0, 1.0]);
        assert!((helstrom_error(&a, &a, 0.5).unwrap().error_probability - 0.5).abs() < 1e-15);
        assert!(helstrom_error(&a, &b, 0.5).unwrap().error_probability.abs() < 1e-15);
        assert!(helstrom_error(&a, &b, 1.5).is_err());
        let c = MultiState::maximally_mixed(3);
        assert!(matches!(helstrom_error(&a, &c, 0.5), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn coherent_single_use() {
        let h1 = output_state(&HypothesisSpec::h1(2, Dependence::Permutation).unwrap(), &ProbeKind::Coherent, 1).unwrap();
        let h2 = output_state(&HypothesisSpec::h2(2, Dependence::Permutation).unwrap(), &ProbeKind::Coherent, 1).unwrap();
        let r = helstrom_error_with(&h1, &h2, 0.5, TraceNormPath::Dense).unwrap();
        assert!((r.error_probability - 0.25).abs() < 1e-12);
        let lr = helstrom_error_with(&h1, &h2, 0.5, TraceNormPath::LowRank).unwrap();
        assert!((lr.error_probability - 0.25).abs() < 1e-12);
        assert_eq!(lr.diagnostics.path, Some(TraceNormPath::LowRank));
    }

    #[test]
    fn dense_states_on_low_rank_path() {
        let a = MultiState::maximally_mixed(2);
        let b = pure(&[1.0, 0.0]);
        let r = helstrom_error_with(&a, &b, 0.5, TraceNormPath::LowRank).unwrap();
        assert!((r.error_probability - 0.25).abs() < 1e-14);
        assert_eq!(
            helstrom_error(&a, &a, 0.5).unwrap().diagnostics.path,
            Some(TraceNormPath::Dense)
        );
    }

    #[test]
    fn srm_orthogonal_and_binary() {
        let states = vec![pure(&[1.0, 0.0, 0.0]), pure(&[0.0, 1.0, 0.0]), pure(&[0.0, 0.0, 1.0])];
        let r = srm_error(&states, &[0.2, 0.3, 0.5]).unwrap();
        assert!(r.error_probability.abs() < 1e-12);

        let mut rng = Rng::new(5);
        for _ in 0..10 {
            let a = MultiState::new(random_density_matrix(4, &mut rng), vec![4]).unwrap();
            let b = MultiState::new(random_density_matrix(4, &mut rng), vec![4]).unwrap();
            let h = helstrom_error(&a, &b, 0.5).unwrap().error_probability;
            let s = srm_error(&[a, b], &[0.5, 0.5]).unwrap().error_probability;
            assert!(s >= h - 1e-10 && s <= 2.0 * h + 1e-10, "{s} vs {h}");
        }
        assert!(srm_error(&states, &[0.5, 0.5, 0.5]).is_err());
    }

    #[test]
    fn pattern_enumeration() {
        assert_eq!(partitions(4, 2), vec![vec![4], vec![3, 1], vec![2, 2]]);
        assert_eq!(partitions(3, 3), vec![vec![3], vec![2, 1], vec![1, 1, 1]]);
    }

    #[test]
    fn classical_optimum_values() {
        let r = classical_optimum(2, 2).unwrap();
        assert_eq!(r.exact, Some(Ratio::new(1, 4)));
        let r = classical_optimum(3, 2).unwrap();
        assert_eq!(r.exact, Some(Ratio::new(1, 6)));
        assert_eq!(r.witness, Some(vec![0, 0]));
        assert_eq!(classical_optimum(2, 1).unwrap().exact, Some(Ratio::new(1, 2)));
        assert!(matches!(classical_optimum(4, 2), Err(Error::Infeasible(_))));
        assert!(matches!(classical_optimum(2, 5), Err(Error::Infeasible(_))));
    }

    #[test]
    fn monte_carlo_is_deterministic_across_modes() {
        let rng = Rng::new(11);
        let a = monte_carlo_classical_with(2, 2, &[0, 0], 200_000, &rng, Execution::Sequential).unwrap();
        let b = monte_carlo_classical(2, 2, &[0, 0], 200_000, &rng).unwrap();
        assert_eq!(a, b);
        let se = a.diagnostics.std_error.unwrap();
        assert!((a.error_probability - 0.25).abs() < 4.0 * se);
        let single = monte_carlo_classical(2, 1, &[1], 100_000, &rng).unwrap();
        assert!((single.error_probability - 0.5).abs() < 4.0 * single.diagnostics.std_error.unwrap());
        assert!(monte_carlo_classical(2, 2, &[0], 10, &rng).is_err());
        assert!(monte_carlo_classical(2, 2, &[0, 0], 0, &rng).is_err());
    }
}

//! Closed-form error probabilities, decay rates and lower bounds.
//!
//! Every probability has a `log2_` twin so that decay-rate fits can run far
//! past the point where the plain value underflows. All logarithms are base 2.

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::combinat::multiplicity;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numkernel::{state_fidelity, ComplexMatrix, C64};
use crate::quantum::{apply_channel, random_pure_state, Channel, MultiState, Rng};

/// Input pairs whose fidelity is at or below this are skipped by the
/// fidelity-divergence estimator.
pub const FIDELITY_SKIP: f64 = 1e-10;
/// Largest `n` searched by [`claim`].
pub const CLAIM_MAX_N: usize = 4096;

fn check_nd(n: usize, d: usize) -> Result<()> {
    if n == 0 || d < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 1 and d >= 2 (got n = {n}, d = {d})")));
    }
    Ok(())
}

fn require_multiple(n: usize, d: usize) -> Result<()> {
    check_nd(n, d)?;
    if !n.is_multiple_of(d) {
        return Err(Error::NotMultiple { n, d });
    }
    Ok(())
}

/// `log₂ m` for an arbitrarily large integer.
pub fn log2_biguint(m: &BigUint) -> f64 {
    let bits = m.bits();
    let shift = bits.saturating_sub(64);
    let top = (m >> shift).to_u64().expect("at most 64 bits");
    (top as f64).log2() + shift as f64
}

/// `c / d^e`, exact whenever `d^e` is; zero once it overflows.
fn over_power(c: f64, d: usize, e: usize) -> f64 {
    c / (d as f64).powi(e as i32)
}

/// `1 − √(1 − x)` without cancellation for small `x`.
fn one_minus_sqrt_one_minus(x: f64) -> f64 {
    x / (1.0 + (1.0 - x).sqrt())
}

/// Optimal classical error `1/(2 d^{n−1})`.
pub fn p_classical(n: usize, d: usize) -> Result<f64> {
    check_nd(n, d)?;
    Ok(over_power(0.5, d, n - 1))
}

pub fn log2_p_classical(n: usize, d: usize) -> Result<f64> {
    check_nd(n, d)?;
    Ok(-1.0 - (n - 1) as f64 * (d as f64).log2())
}

/// Coherent-probe error `1/(2 dⁿ)`.
pub fn p_coherent(n: usize, d: usize) -> Result<f64> {
    check_nd(n, d)?;
    Ok(over_power(0.5, d, n))
}

pub fn log2_p_coherent(n: usize, d: usize) -> Result<f64> {
    check_nd(n, d)?;
    Ok(-1.0 - n as f64 * (d as f64).log2())
}

/// Singlet-strategy error `1/(2 d^Ñ)` with `Ñ = d⌊n/d⌋` active probes.
pub fn p_singlet(n: usize, d: usize) -> Result<f64> {
    log2_p_singlet(n, d)?;
    p_coherent(d * (n / d), d)
}

pub fn log2_p_singlet(n: usize, d: usize) -> Result<f64> {
    check_nd(n, d)?;
    if n < d {
        return Err(Error::InvalidArgument(format!("singlet strategy needs n >= d (n = {n}, d = {d})")));
    }
    log2_p_coherent(d * (n / d), d)
}

/// Reference-strategy error `m/(2dⁿ)·(1 − √(1 − 1/m²))` with
/// `m = multiplicity(n, d)`.
pub fn p_reference(n: usize, d: usize) -> Result<f64> {
    require_multiple(n, d)?;
    let m = multiplicity(n, d)?;
    Ok(match m.to_u64().filter(|&m| m < 1 << 53) {
        Some(m) => p_reference_with_multiplicity(n, d, m as f64)?,
        None => log2_p_reference(n, d)?.exp2(),
    })
}

pub fn log2_p_reference(n: usize, d: usize) -> Result<f64> {
    require_multiple(n, d)?;
    let m = multiplicity(n, d)?;
    let log2_m = log2_biguint(&m);
    // 1/m² underflows long before m stops being representable in log form
    let inv_sq = (-2.0 * log2_m).exp2();
    Ok(-1.0 - log2_m - n as f64 * (d as f64).log2() - (1.0 + (1.0 - inv_sq).sqrt()).log2())
}

/// The reference-strategy expression for an explicit multiplicity `m ≥ 1`.
pub fn p_reference_with_multiplicity(n: usize, d: usize, m: f64) -> Result<f64> {
    check_nd(n, d)?;
    if m.is_nan() || m < 1.0 {
        return Err(Error::InvalidArgument(format!("multiplicity {m} < 1")));
    }
    Ok(over_power(m / 2.0, d, n) * one_minus_sqrt_one_minus(1.0 / (m * m)))
}

/// Large-`n` approximation `1/(4 m dⁿ)`.
pub fn p_reference_asymptotic(n: usize, d: usize) -> Result<f64> {
    Ok(log2_p_reference_asymptotic(n, d)?.exp2())
}

pub fn log2_p_reference_asymptotic(n: usize, d: usize) -> Result<f64> {
    require_multiple(n, d)?;
    Ok(-2.0 - log2_biguint(&multiplicity(n, d)?) - n as f64 * (d as f64).log2())
}

/// Best reference-strategy error for any `n`, padding down to `d⌊n/d⌋`
/// probes; `1/2` when no group fits.
pub fn p_reference_padded(n: usize, d: usize) -> Result<f64> {
    check_nd(n, d)?;
    let active = d * (n / d);
    if active == 0 {
        Ok(0.5)
    } else {
        p_reference(active, d)
    }
}

/// Sequential-strategy lower bound `∂F^N/4 = 1/(4 d^{2n})`.
pub fn seq_lower_bound(n: usize, d: usize) -> Result<f64> {
    check_nd(n, d)?;
    Ok(over_power(0.25, d, 2 * n))
}

pub fn log2_seq_lower_bound(n: usize, d: usize) -> Result<f64> {
    check_nd(n, d)?;
    Ok(-2.0 - 2.0 * n as f64 * (d as f64).log2())
}

/// Indefinite-order lower bound `(1 − √(1 − d^{−2n}))/2`.
pub fn indefinite_lower_bound(n: usize, d: usize) -> Result<f64> {
    check_nd(n, d)?;
    let x = over_power(1.0, d, 2 * n);
    Ok(one_minus_sqrt_one_minus(x) / 2.0)
}

pub fn log2_indefinite_lower_bound(n: usize, d: usize) -> Result<f64> {
    check_nd(n, d)?;
    let log2_x = -2.0 * n as f64 * (d as f64).log2();
    let x = log2_x.exp2();
    Ok(log2_x - 1.0 - (1.0 + (1.0 - x).sqrt()).log2())
}

/// Which side of a `k`-candidate comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Classical,
    Quantum,
}

/// Leading term of the `k`-candidate error: `(k−1)/(2d^{n−1})` classically,
/// `(k−1)/(2dⁿ)` for parallel quantum probes. Corrections of order
/// `d^{−2n}` are not included.
pub fn p_multi_k(n: usize, d: usize, k: usize, side: Side) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("need k >= 2 candidates, got {k}")));
    }
    let base = match side {
        Side::Classical => p_classical(n, d)?,
        Side::Quantum => p_coherent(n, d)?,
    };
    Ok((k - 1) as f64 * base)
}

/// What [`cause_id`] computes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CauseIdMode {
    /// Error `(m−1)/(d^{2n} + m − 1)` of the known-unitary test.
    Error,
    /// `⌈log_d m⌉` classical queries.
    ClassicalQueries,
    /// `⌈(1+ε)(log_d m)/2⌉` quantum queries.
    QuantumQueries { epsilon: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CauseIdValue {
    Probability(f64),
    Queries(u64),
}

/// Identifying which of `m` candidates causes a given variable. `n` is
/// only used in [`CauseIdMode::Error`].
pub fn cause_id(n: usize, d: usize, m: u64, mode: CauseIdMode) -> Result<CauseIdValue> {
    if d < 2 || m < 2 {
        return Err(Error::InvalidArgument(format!("need d >= 2 and m >= 2 (got d = {d}, m = {m})")));
    }
    Ok(match mode {
        CauseIdMode::Error => {
            let ratio = (2.0 * n as f64 * (d as f64).log2() - ((m - 1) as f64).log2()).exp2();
            CauseIdValue::Probability(1.0 / (1.0 + ratio))
        }
        CauseIdMode::ClassicalQueries => {
            let mut q = 0u64;
            let mut reach = 1u128;
            while reach < m as u128 {
                reach *= d as u128;
                q += 1;
            }
            CauseIdValue::Queries(q)
        }
        CauseIdMode::QuantumQueries { epsilon } => {
            if epsilon.is_nan() || epsilon < 0.0 {
                return Err(Error::InvalidArgument(format!("epsilon {epsilon} < 0")));
            }
            let x = (1.0 + epsilon) * (m as f64).ln() / (d as f64).ln() / 2.0;
            CauseIdValue::Queries(tolerant_ceil(x))
        }
    })
}

fn tolerant_ceil(x: f64) -> u64 {
    let f = x.floor();
    if x - f <= 1e-12 * x.abs().max(1.0) {
        f as u64
    } else {
        f as u64 + 1
    }
}

/// Strategy families with a closed-form decay rate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RateKind {
    Classical,
    Coherent,
    Singlet,
    Reference,
    /// The sequential and indefinite-order limit.
    QuantumLimit,
    /// Classical detection of a causal link.
    LinkClassical,
    /// Quantum detection of a causal link with a reference system.
    LinkQuantum,
}

/// Asymptotic decay rate in bits per interrogation.
pub fn decay_rate_closed(kind: RateKind, d: usize) -> f64 {
    let r = (d as f64).log2();
    match kind {
        RateKind::Classical | RateKind::Coherent | RateKind::Singlet | RateKind::LinkClassical => r,
        RateKind::Reference | RateKind::QuantumLimit | RateKind::LinkQuantum => 2.0 * r,
    }
}

/// One point of an error curve, stored in the log domain.
#[derive(Clone, Debug, PartialEq)]
pub struct RatePoint {
    pub n: usize,
    pub d: usize,
    pub log2_p: f64,
    pub strategy: String,
}

impl RatePoint {
    pub fn new(n: usize, d: usize, log2_p: f64, strategy: impl Into<String>) -> Self {
        Self { n, d, log2_p, strategy: strategy.into() }
    }

    pub fn probability(&self) -> f64 {
        self.log2_p.exp2()
    }
}

/// Least-squares slope of `−log₂ p` against `n`.
pub fn decay_rate_fit(points: &[RatePoint]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument(format!("{} points, need at least 2", points.len())));
    }
    if let Some(p) = points.iter().find(|p| !p.log2_p.is_finite()) {
        return Err(Error::InvalidArgument(format!("non-finite log value at n = {}", p.n)));
    }
    let k = points.len() as f64;
    let mean_x = points.iter().map(|p| p.n as f64).sum::<f64>() / k;
    let mean_y = points.iter().map(|p| -p.log2_p).sum::<f64>() / k;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for p in points {
        let dx = p.n as f64 - mean_x;
        sxy += dx * (-p.log2_p - mean_y);
        sxx += dx * dx;
    }
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all points share the same n".into()));
    }
    Ok(sxy / sxx)
}

/// Upper estimate of the fidelity divergence `inf F(ρ₁′,ρ₂′)/F(ρ₁,ρ₂)`
/// between two channels, each extended by the identity on a reference of
/// dimension `ref_dim`.
///
/// Sample 0 is the identical pure input `|0⟩⟨0|`; samples `1..` are pairs of
/// Haar-random pure states drawn from `rng.fork(i)`, so the estimate is a
/// running minimum that can only decrease as `samples` grows.
pub fn fidelity_divergence_estimate(
    c1: &Channel,
    c2: &Channel,
    ref_dim: usize,
    samples: usize,
    rng: &Rng,
) -> Result<f64> {
    fidelity_divergence_estimate_with(c1, c2, ref_dim, samples, rng, Execution::default())
}

/// [`fidelity_divergence_estimate`] with an explicit execution mode.
pub fn fidelity_divergence_estimate_with(
    c1: &Channel,
    c2: &Channel,
    ref_dim: usize,
    samples: usize,
    rng: &Rng,
    exec: Execution,
) -> Result<f64> {
    if c1.in_dim() != c2.in_dim() || c1.out_dim() != c2.out_dim() {
        return Err(Error::DimensionMismatch(format!(
            "channels {}→{} and {}→{}",
            c1.in_dim(),
            c1.out_dim(),
            c2.in_dim(),
            c2.out_dim()
        )));
    }
    if samples == 0 || ref_dim == 0 {
        return Err(Error::InvalidArgument(format!(
            "need samples >= 1 and ref_dim >= 1 (got {samples}, {ref_dim})"
        )));
    }
    let din = c1.in_dim();
    let c1 = c1.regroup(vec![din], vec![c1.out_dim()])?;
    let c2 = c2.regroup(vec![din], vec![c2.out_dim()])?;
    let dims = vec![din, ref_dim];
    let total = din * ref_dim;

    let ratios: Vec<Result<Option<f64>>> = exec.map_range(samples, |i| {
        let (a, b) = if i == 0 {
            let mut v = vec![C64::new(0.0, 0.0); total];
            v[0] = C64::new(1.0, 0.0);
            (v.clone(), v)
        } else {
            let mut local = rng.fork(i as u64);
            (random_pure_state(total, &mut local), random_pure_state(total, &mut local))
        };
        let rho1 = MultiState::pure(a, dims.clone())?;
        let rho2 = MultiState::pure(b, dims.clone())?;
        let f_in = state_fidelity(&rho1.rho(), &rho2.rho())?;
        if f_in <= FIDELITY_SKIP {
            return Ok(None);
        }
        let out1: ComplexMatrix = apply_channel(&c1, &rho1, &[0])?.rho().into_owned();
        let out2: ComplexMatrix = apply_channel(&c2, &rho2, &[0])?.rho().into_owned();
        Ok(Some(state_fidelity(&out1, &out2)? / f_in))
    });
    let mut best: Option<f64> = None;
    for r in ratios {
        if let Some(x) = r? {
            best = Some(best.map_or(x, |b| b.min(x)));
        }
    }
    best.ok_or(Error::AllSamplesSkipped)
}

/// Smallest numbers of interrogations reaching an error threshold.
#[derive(Clone, Debug, PartialEq)]
pub struct Claim {
    pub d: usize,
    pub threshold: f64,
    pub quantum_n: usize,
    pub quantum_p: f64,
    pub classical_n: usize,
    pub classical_p: f64,
}

/// Smallest `n` with error at most `threshold`, for the reference strategy
/// (padded when `d ∤ n`) and for the classical optimum.
pub fn claim(d: usize, threshold: f64) -> Result<Claim> {
    claim_with(d, threshold, p_reference_padded)
}

/// [`claim`] with a replacement for the quantum error curve.
pub fn claim_with(
    d: usize,
    threshold: f64,
    quantum: impl Fn(usize, usize) -> Result<f64>,
) -> Result<Claim> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("need d >= 2, got {d}")));
    }
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(Error::InvalidArgument(format!("threshold {threshold} must be positive")));
    }
    let first = |f: &dyn Fn(usize) -> Result<f64>| -> Result<(usize, f64)> {
        for n in 1..=CLAIM_MAX_N {
            let p = f(n)?;
            if p <= threshold {
                return Ok((n, p));
            }
        }
        Err(Error::Infeasible(format!("threshold {threshold} not reached by n = {CLAIM_MAX_N}")))
    };
    let (quantum_n, quantum_p) = first(&|n| quantum(n, d))?;
    let (classical_n, classical_p) = first(&|n| p_classical(n, d))?;
    Ok(Claim { d, threshold, quantum_n, quantum_p, classical_n, classical_p })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{hypothesis_channel, Dependence, HypothesisSpec, Parameter};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn classical_values() {
        assert_eq!(p_classical(4, 2).unwrap(), 1.0 / 16.0);
        assert_eq!(p_classical(1, 5).unwrap(), 0.5);
        let p20 = p_classical(20, 2).unwrap();
        assert!(p20 < 1e-6 && p_classical(19, 2).unwrap() > 1e-6);
        assert!(p_classical(0, 2).is_err());
    }

    #[test]
    fn coherent_and_singlet() {
        assert_eq!(p_coherent(1, 2).unwrap(), 0.25);
        assert_eq!(p_coherent(3, 2).unwrap(), 1.0 / 16.0);
        for d in 2..6 {
            for n in 1..8 {
                assert!(close(p_classical(n, d).unwrap() / p_coherent(n, d).unwrap(), d as f64, 1e-14));
            }
        }
        assert_eq!(p_singlet(2, 2).unwrap(), 0.125);
        assert!(close(p_singlet(3, 3).unwrap(), 1.0 / 54.0, 1e-15));
        assert_eq!(p_singlet(5, 2).unwrap(), 1.0 / 32.0);
        assert!(p_singlet(2, 3).is_err());
    }

    #[test]
    fn reference_values() {
        assert_eq!(p_reference(2, 2).unwrap(), 0.125);
        let expect = (1.0 - 3f64.sqrt() / 2.0) / 16.0;
        assert!(close(p_reference(4, 2).unwrap(), expect, 1e-14));
        let p12 = p_reference(12, 2).unwrap();
        assert!(close(p12, 4.624e-7, 1e-3), "{p12}");
        assert!(p_reference(10, 2).unwrap() > 1e-6);
        assert!(matches!(p_reference(3, 2), Err(Error::NotMultiple { .. })));
        for n in (2..=24).step_by(2) {
            let direct = p_reference(n, 2).unwrap().log2();
            assert!((direct - log2_p_reference(n, 2).unwrap()).abs() < 1e-12);
        }
        let ratio = p_reference_asymptotic(24, 2).unwrap() / p_reference(24, 2).unwrap();
        assert!((ratio - 1.0).abs() < 1e-3);
        assert_eq!(p_reference_padded(1, 2).unwrap(), 0.5);
        assert_eq!(p_reference_padded(3, 2).unwrap(), 0.125);
    }

    #[test]
    fn log_domain_survives_underflow() {
        let l = log2_p_reference(3000, 2).unwrap();
        assert!(l.is_finite() && l < -5000.0);
        assert_eq!(log2_p_classical(5000, 2).unwrap(), -5000.0);
    }

    #[test]
    fn bounds() {
        assert_eq!(seq_lower_bound(1, 2).unwrap(), 1.0 / 16.0);
        let ind = indefinite_lower_bound(1, 2).unwrap();
        assert!(close(ind, (1.0 - 0.75f64.sqrt()) / 2.0, 1e-14));
        assert!(ind > seq_lower_bound(1, 2).unwrap());
        for d in 2..=5 {
            for n in 1..=60 {
                assert!(indefinite_lower_bound(n, d).unwrap() >= seq_lower_bound(n, d).unwrap());
                let l = log2_indefinite_lower_bound(n, d).unwrap();
                if n <= 20 {
                    assert!(close(l.exp2(), indefinite_lower_bound(n, d).unwrap(), 1e-12));
                }
            }
        }
        let rate = -log2_indefinite_lower_bound(400, 3).unwrap() / 400.0;
        assert!((rate - 2.0 * 3f64.log2()).abs() < 1e-2);
    }

    #[test]
    fn multi_k() {
        assert_eq!(p_multi_k(4, 2, 2, Side::Classical).unwrap(), p_classical(4, 2).unwrap());
        assert_eq!(p_multi_k(4, 2, 2, Side::Quantum).unwrap(), p_coherent(4, 2).unwrap());
        assert_eq!(p_multi_k(4, 2, 3, Side::Classical).unwrap(), 0.125);
        assert_eq!(p_multi_k(4, 2, 3, Side::Quantum).unwrap(), 0.0625);
        assert!(p_multi_k(4, 2, 1, Side::Quantum).is_err());
    }

    #[test]
    fn cause_identification() {
        match cause_id(1, 2, 2, CauseIdMode::Error).unwrap() {
            CauseIdValue::Probability(p) => assert!(close(p, 0.2, 1e-14)),
            v => panic!("{v:?}"),
        }
        assert_eq!(cause_id(0, 2, 8, CauseIdMode::ClassicalQueries).unwrap(), CauseIdValue::Queries(3));
        assert_eq!(cause_id(0, 2, 9, CauseIdMode::ClassicalQueries).unwrap(), CauseIdValue::Queries(4));
        assert_eq!(
            cause_id(0, 2, 8, CauseIdMode::QuantumQueries { epsilon: 0.01 }).unwrap(),
            CauseIdValue::Queries(2)
        );
        assert_eq!(
            cause_id(0, 2, 16, CauseIdMode::QuantumQueries { epsilon: 0.0 }).unwrap(),
            CauseIdValue::Queries(2)
        );
        assert!(cause_id(0, 2, 8, CauseIdMode::QuantumQueries { epsilon: -0.1 }).is_err());
        let mut last = 1.0;
        for n in 0..30 {
            let CauseIdValue::Probability(p) = cause_id(n, 3, 7, CauseIdMode::Error).unwrap() else {
                unreachable!()
            };
            assert!(p < last);
            let direct = 6.0 / (9f64.powi(n as i32) + 6.0);
            assert!(close(p, direct, 1e-12));
            last = p;
        }
    }

    #[test]
    fn rate_fits() {
        let pts: Vec<RatePoint> =
            (1..30).map(|n| RatePoint::new(n, 3, log2_p_classical(n, 3).unwrap(), "classical")).collect();
        assert!((decay_rate_fit(&pts).unwrap() - 3f64.log2()).abs() < 1e-12);
        let flat: Vec<RatePoint> = (1..5).map(|n| RatePoint::new(n, 2, -1.0, "flat")).collect();
        assert_eq!(decay_rate_fit(&flat).unwrap(), 0.0);
        assert!(decay_rate_fit(&flat[..1]).is_err());
        let pts: Vec<RatePoint> = (40..=80)
            .step_by(2)
            .map(|n| RatePoint::new(n, 2, log2_p_reference(n, 2).unwrap(), "reference"))
            .collect();
        assert!((decay_rate_fit(&pts).unwrap() / 2.0 - 1.0).abs() < 0.02);
        assert_eq!(decay_rate_closed(RateKind::LinkQuantum, 4), 4.0);
        assert_eq!(decay_rate_closed(RateKind::Coherent, 4), 2.0);
    }

    #[test]
    fn fidelity_divergence_of_swapped_unitaries() {
        let mut rng = Rng::new(3);
        let u = Parameter::sample(Dependence::Unitary, 2, &mut rng);
        let v = Parameter::sample(Dependence::Unitary, 2, &mut rng);
        let h1 = hypothesis_channel(&HypothesisSpec::h1(2, Dependence::Unitary).unwrap(), &u).unwrap();
        let h2 = hypothesis_channel(&HypothesisSpec::h2(2, Dependence::Unitary).unwrap(), &v).unwrap();
        let first = fidelity_divergence_estimate(&h1, &h2, 1, 1, &rng).unwrap();
        assert!((first - 0.25).abs() < 1e-12, "{first}");
        let more = fidelity_divergence_estimate(&h1, &h2, 2, 40, &rng).unwrap();
        assert!((more - 0.25).abs() < 1e-12);
        let same = fidelity_divergence_estimate(&h1, &h1, 2, 20, &rng).unwrap();
        assert!((same - 1.0).abs() < 1e-9);
        let mut last = f64::INFINITY;
        for s in [1, 5, 10, 20] {
            let e = fidelity_divergence_estimate(&h1, &h2, 1, s, &rng).unwrap();
            assert!(e <= last);
            last = e;
        }
        assert!(fidelity_divergence_estimate(&h1, &Channel::identity(2), 1, 1, &rng).is_err());
    }

    #[test]
    fn claims() {
        let c = claim(2, 1e-6).unwrap();
        assert_eq!((c.quantum_n, c.classical_n), (12, 20));
        let c = claim(2, 0.3).unwrap();
        assert_eq!((c.quantum_n, c.classical_n), (2, 2));
        let c = claim(2, 0.5).unwrap();
        assert_eq!((c.quantum_n, c.classical_n), (1, 1));
        assert!(claim(2, 0.0).is_err());
    }
}

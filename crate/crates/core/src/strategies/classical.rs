use num_rational::Ratio;

use crate::combinat::all_permutations;
use crate::error::{Error, Result};
use crate::quantum::{Dependence, EffectSlot, HypothesisSpec, Parameter};

/// Largest outcome space `d^{2n}` enumerated exactly.
pub const MAX_CLASSICAL_OUTCOMES: usize = 1 << 24;

/// Exact distribution over output tuples `(b₁..b_n, c₁..c_n)`.
///
/// Outcome `k` encodes the tuple in base `d`, most significant digit first,
/// so `k = index(b) · dⁿ + index(c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    d: usize,
    n: usize,
    counts: Vec<u64>,
    denominator: u64,
}

impl Distribution {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Unnormalized weights; divide by [`Distribution::denominator`].
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn probability(&self, outcome: usize) -> Ratio<u64> {
        Ratio::new(self.counts[outcome], self.denominator)
    }

    pub fn probability_f64(&self, outcome: usize) -> f64 {
        self.counts[outcome] as f64 / self.denominator as f64
    }

    /// Number of outcomes with nonzero probability.
    pub fn support_size(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }

    pub fn total(&self) -> Ratio<u64> {
        Ratio::new(self.counts.iter().sum(), self.denominator)
    }

    /// Splits an outcome index into its `b` and `c` tuples.
    pub fn decode(&self, outcome: usize) -> (Vec<usize>, Vec<usize>) {
        let digits = decode_digits(outcome, self.d, 2 * self.n);
        let (b, c) = digits.split_at(self.n);
        (b.to_vec(), c.to_vec())
    }

    /// Exact total-variation distance.
    pub fn total_variation(&self, other: &Distribution) -> Result<Ratio<u64>> {
        if self.d != other.d || self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "distributions over (d={}, n={}) and (d={}, n={})",
                self.d, self.n, other.d, other.n
            )));
        }
        let (a, b) = (self.denominator as u128, other.denominator as u128);
        let num: u128 = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(&x, &y)| (x as u128 * b).abs_diff(y as u128 * a))
            .sum();
        let den = 2 * a * b;
        let g = gcd(num, den);
        let (num, den) = (num / g, den / g);
        let num = u64::try_from(num).map_err(|_| Error::Infeasible("TV numerator".into()))?;
        let den = u64::try_from(den).map_err(|_| Error::Infeasible("TV denominator".into()))?;
        Ok(Ratio::new(num, den))
    }
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

fn decode_digits(mut k: usize, d: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = k % d;
        k /= d;
    }
    out
}

fn encode_digits(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

/// Exact output distribution of the classical process for basis inputs.
///
/// Without a fixed parameter the hidden permutation is uniform over all
/// `d!` choices. The effect slot carries the permuted inputs and the other
/// slot is uniform.
pub fn classical_output_distribution(inputs: &[usize], spec: &HypothesisSpec) -> Result<Distribution> {
    let d = spec.d;
    let n = inputs.len();
    if n == 0 {
        return Err(Error::InvalidArgument("no classical inputs".into()));
    }
    if let Some(&v) = inputs.iter().find(|&&v| v >= d) {
        return Err(Error::ValueOutOfRange { value: v, d });
    }
    if spec.dependence != Dependence::Permutation {
        return Err(Error::InvalidArgument(
            "classical distributions need a permutation dependence".into(),
        ));
    }
    let side = (d as u64).checked_pow(n as u32);
    let outcomes = side
        .and_then(|s| s.checked_mul(s))
        .filter(|&x| x <= MAX_CLASSICAL_OUTCOMES as u64)
        .ok_or_else(|| Error::Infeasible(format!("{d}^{} classical outcomes", 2 * n)))?;
    let side = side.expect("checked above") as usize;

    let perms = match &spec.parameter {
        None => all_permutations(d),
        Some(Parameter::Permutation(p)) => {
            if p.len() != d {
                return Err(Error::DimensionMismatch(format!(
                    "permutation of {} symbols for d = {d}",
                    p.len()
                )));
            }
            vec![p.clone()]
        }
        Some(Parameter::Unitary(_)) => {
            return Err(Error::InvalidArgument(
                "classical distributions need a permutation parameter".into(),
            ))
        }
    };

    let mut counts = vec![0u64; outcomes as usize];
    for p in &perms {
        let effect: Vec<usize> = inputs.iter().map(|&a| p[a]).collect();
        let e = encode_digits(&effect, d);
        for other in 0..side {
            let k = match spec.effect_slot {
                EffectSlot::First => e * side + other,
                EffectSlot::Second => other * side + e,
            };
            counts[k] += 1;
        }
    }
    Ok(Distribution { d, n, counts, denominator: perms.len() as u64 * side as u64 })
}

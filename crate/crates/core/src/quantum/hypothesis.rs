use crate::error::{Error, Result};
use crate::numkernel::{ComplexMatrix, C64};

use super::channel::Channel;
use super::random::{haar_unitary, random_permutation, Rng};

/// Output slot that carries the cause's influence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EffectSlot {
    /// `B` is the effect: `U·U† ⊗ I/d`.
    First,
    /// `C` is the effect: `I/d ⊗ V·V†`.
    Second,
}

impl EffectSlot {
    pub fn other(self) -> Self {
        match self {
            EffectSlot::First => EffectSlot::Second,
            EffectSlot::Second => EffectSlot::First,
        }
    }
}

/// How the effect depends on the cause.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dependence {
    Permutation,
    Unitary,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Parameter {
    Permutation(Vec<usize>),
    Unitary(ComplexMatrix),
}

impl Parameter {
    /// Draws a hidden parameter: a uniform permutation or a Haar unitary.
    pub fn sample(dependence: Dependence, d: usize, rng: &mut Rng) -> Self {
        match dependence {
            Dependence::Permutation => Parameter::Permutation(random_permutation(d, rng)),
            Dependence::Unitary => Parameter::Unitary(haar_unitary(d, rng)),
        }
    }

    pub fn to_unitary(&self) -> Result<ComplexMatrix> {
        match self {
            Parameter::Permutation(p) => permutation_unitary(p),
            Parameter::Unitary(u) => {
                let res = u.unitarity_residual();
                if res > 1e-10 {
                    return Err(Error::NotUnitary(res));
                }
                Ok(u.clone())
            }
        }
    }
}

/// One causal hypothesis: which slot is the effect, the dimension, and the
/// kind of reversible dependence. An absent parameter means the dependence
/// is unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct HypothesisSpec {
    pub effect_slot: EffectSlot,
    pub d: usize,
    pub dependence: Dependence,
    pub parameter: Option<Parameter>,
}

impl HypothesisSpec {
    pub fn new(effect_slot: EffectSlot, d: usize, dependence: Dependence) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidArgument(format!("dimension d = {d} must be >= 2")));
        }
        Ok(Self {
            effect_slot,
            d,
            dependence,
            parameter: None,
        })
    }

    /// `H1`: `B` carries the effect.
    pub fn h1(d: usize, dependence: Dependence) -> Result<Self> {
        Self::new(EffectSlot::First, d, dependence)
    }

    /// `H2`: `C` carries the effect.
    pub fn h2(d: usize, dependence: Dependence) -> Result<Self> {
        Self::new(EffectSlot::Second, d, dependence)
    }

    pub fn with_parameter(mut self, p: Parameter) -> Self {
        self.parameter = Some(p);
        self
    }

    /// The competing hypothesis with the same dimension and dependence.
    pub fn swapped(&self) -> Self {
        Self {
            effect_slot: self.effect_slot.other(),
            ..self.clone()
        }
    }
}

/// `U_π = Σ |π(i)⟩⟨i|`.
pub fn permutation_unitary(perm: &[usize]) -> Result<ComplexMatrix> {
    let d = perm.len();
    let mut seen = vec![false; d];
    for &p in perm {
        if p >= d || std::mem::replace(&mut seen[p], true) {
            return Err(Error::NotBijective(d));
        }
    }
    let mut u = ComplexMatrix::zeros(d, d);
    for (i, &p) in perm.iter().enumerate() {
        u[(p, i)] = C64::new(1.0, 0.0);
    }
    Ok(u)
}

/// The process `A → B⊗C` of a hypothesis with dependence `param`.
///
/// Kraus operators are `U ⊗ |i⟩/√d` (effect in `B`) or `|i⟩/√d ⊗ U`
/// (effect in `C`), `i = 0..d`.
pub fn hypothesis_channel(spec: &HypothesisSpec, param: &Parameter) -> Result<Channel> {
    let d = spec.d;
    if spec.dependence == Dependence::Permutation && matches!(param, Parameter::Unitary(_)) {
        return Err(Error::InvalidArgument(
            "permutation dependence needs a permutation parameter".into(),
        ));
    }
    let u = param.to_unitary()?;
    if u.rows() != d {
        return Err(Error::DimensionMismatch(format!(
            "{}-dimensional parameter for d = {d}",
            u.rows()
        )));
    }
    let s = 1.0 / (d as f64).sqrt();
    let kraus = (0..d)
        .map(|i| {
            ComplexMatrix::from_fn(d * d, d, |row, a| {
                let (b, c) = (row / d, row % d);
                match spec.effect_slot {
                    EffectSlot::First if c == i => u[(b, a)] * s,
                    EffectSlot::Second if b == i => u[(c, a)] * s,
                    _ => C64::new(0.0, 0.0),
                }
            })
        })
        .collect();
    Channel::new(kraus, vec![d], vec![d, d])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{apply_channel, choi_of, is_cptp, MultiState};

    #[test]
    fn permutation_matrices() {
        assert_eq!(permutation_unitary(&[0, 1, 2]).unwrap(), ComplexMatrix::identity(3));
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert_eq!(permutation_unitary(&[1, 0]).unwrap(), x);
        assert!(matches!(permutation_unitary(&[0, 0]), Err(Error::NotBijective(2))));
        assert!(matches!(permutation_unitary(&[0, 2]), Err(Error::NotBijective(2))));
    }

    #[test]
    fn identity_dependence_on_zero() {
        let spec = HypothesisSpec::h1(2, Dependence::Unitary).unwrap();
        let c = hypothesis_channel(&spec, &Parameter::Unitary(ComplexMatrix::identity(2))).unwrap();
        let out = apply_channel(&c, &MultiState::basis(2, 0).unwrap(), &[0]).unwrap();
        let expect = ComplexMatrix::diag_real(&[0.5, 0.5, 0.0, 0.0]);
        assert!(out.rho().max_abs_diff(&expect) < 1e-15);
        assert!(is_cptp(&choi_of(&c), 2, 4));
    }

    #[test]
    fn swap_dependence_in_second_slot() {
        let spec = HypothesisSpec::h2(2, Dependence::Permutation).unwrap();
        let c = hypothesis_channel(&spec, &Parameter::Permutation(vec![1, 0])).unwrap();
        let out = apply_channel(&c, &MultiState::basis(2, 0).unwrap(), &[0]).unwrap();
        // I/2 ⊗ |1⟩⟨1|
        let expect = ComplexMatrix::diag_real(&[0.0, 0.5, 0.0, 0.5]);
        assert!(out.rho().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn rejects_bad_parameters() {
        let spec = HypothesisSpec::h1(2, Dependence::Unitary).unwrap();
        let bad = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert!(matches!(
            hypothesis_channel(&spec, &Parameter::Unitary(bad)),
            Err(Error::NotUnitary(_))
        ));
        let perm_spec = HypothesisSpec::h1(2, Dependence::Permutation).unwrap();
        assert!(hypothesis_channel(&perm_spec, &Parameter::Unitary(ComplexMatrix::identity(2))).is_err());
        assert!(HypothesisSpec::h1(1, Dependence::Unitary).is_err());
    }
}

use super::probes::{active_probes, probe_state, ProbeKind};
use crate::error::{Error, Result};
use crate::quantum::{apply_channel, hypothesis_channel, HypothesisSpec, MultiState, Parameter, Rng};

/// Number of hidden parameters drawn when checking that a probe's output
/// does not depend on them.
pub const INVARIANCE_SAMPLES: usize = 3;
/// Largest Frobenius spread tolerated between those outputs.
pub const INVARIANCE_TOL: f64 = 1e-9;

const INVARIANCE_SEED: u64 = 0x1f0e_5eed;

/// Factor order exchanging the `B` and `C` blocks of a canonical output
/// state with `active` probes; the reference factor, if any, stays last.
pub fn canonical_swap_order(active: usize, with_reference: bool) -> Vec<usize> {
    let mut order: Vec<usize> = (active..2 * active).chain(0..active).collect();
    if with_reference {
        order.push(2 * active);
    }
    order
}

/// Output state of `n` parallel uses of the process under `spec`.
///
/// When the hidden parameter is not fixed in `spec`, several parameters are
/// drawn from a fixed internal seed and the outputs must coincide, otherwise
/// [`Error::NonInvariantProbe`] is returned.
pub fn output_state(spec: &HypothesisSpec, probe: &ProbeKind, n: usize) -> Result<MultiState> {
    output_state_with_rng(spec, probe, n, &mut Rng::new(INVARIANCE_SEED))
}

/// [`output_state`] drawing the hidden parameters from `rng`.
pub fn output_state_with_rng(
    spec: &HypothesisSpec,
    probe: &ProbeKind,
    n: usize,
    rng: &mut Rng,
) -> Result<MultiState> {
    let (mut outputs, spread) = sampled_outputs(spec, probe, n, INVARIANCE_SAMPLES, rng)?;
    if spread > INVARIANCE_TOL {
        return Err(Error::NonInvariantProbe(spread));
    }
    Ok(outputs.swap_remove(0))
}

/// Largest pairwise Frobenius distance between the outputs for `samples`
/// hidden parameters drawn from `rng`. Zero when `spec` fixes the parameter.
pub fn parameter_spread(
    spec: &HypothesisSpec,
    probe: &ProbeKind,
    n: usize,
    samples: usize,
    rng: &mut Rng,
) -> Result<f64> {
    Ok(sampled_outputs(spec, probe, n, samples, rng)?.1)
}

fn sampled_outputs(
    spec: &HypothesisSpec,
    probe: &ProbeKind,
    n: usize,
    samples: usize,
    rng: &mut Rng,
) -> Result<(Vec<MultiState>, f64)> {
    let d = spec.d;
    let input = probe_state(probe, n, d)?;
    let active = active_probes(probe, n, d);
    let with_reference = matches!(probe, ProbeKind::Reference);

    let params: Vec<Parameter> = match &spec.parameter {
        Some(p) => vec![p.clone()],
        None => (0..samples.max(1))
            .map(|_| Parameter::sample(spec.dependence, d, rng))
            .collect(),
    };

    let mut outputs = Vec::with_capacity(params.len());
    for p in &params {
        outputs.push(run_parallel_uses(spec, p, &input, active, with_reference)?);
    }
    let mut spread = 0.0f64;
    for i in 0..outputs.len() {
        for j in i + 1..outputs.len() {
            spread = spread.max(outputs[i].distance(&outputs[j])?);
        }
    }
    Ok((outputs, spread))
}

fn run_parallel_uses(
    spec: &HypothesisSpec,
    param: &Parameter,
    input: &MultiState,
    active: usize,
    with_reference: bool,
) -> Result<MultiState> {
    let channel = hypothesis_channel(spec, param)?;
    let mut state = input.clone();
    // probe i sits at 2i once the earlier probes have each become (B, C)
    for i in 0..active {
        state = apply_channel(&channel, &state, &[2 * i])?;
    }
    let mut order: Vec<usize> = (0..active).map(|i| 2 * i).collect();
    order.extend((0..active).map(|i| 2 * i + 1));
    if with_reference {
        order.push(2 * active);
    }
    state.permute(&order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::GroupPartition;
    use crate::numkernel::{kron, kron_all, ComplexMatrix};
    use crate::quantum::{Dependence, EffectSlot};
    use crate::strategies::{coherent_probe, singlet_state};

    fn mixed(d: usize) -> ComplexMatrix {
        MultiState::maximally_mixed(d).rho().into_owned()
    }

    #[test]
    fn coherent_h1_matches_product_form() {
        let d = 2;
        let spec = HypothesisSpec::h1(d, Dependence::Permutation).unwrap();
        let out = output_state(&spec, &ProbeKind::Coherent, 2).unwrap();
        let e0 = coherent_probe(1, d).unwrap().rho().into_owned();
        let expect = kron_all(&[e0.clone(), e0, mixed(d), mixed(d)]);
        assert_eq!(out.dims(), &[2, 2, 2, 2]);
        assert!(out.rho().max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn singlet_h2_is_mixed_tensor_singlet() {
        let spec = HypothesisSpec::h2(2, Dependence::Unitary).unwrap();
        let probe = ProbeKind::contiguous_singlets(2, 2).unwrap();
        let out = output_state(&spec, &probe, 2).unwrap();
        let s = singlet_state(2).unwrap().rho().into_owned();
        let expect = kron(&kron(&mixed(2), &mixed(2)), &s);
        assert!(out.rho().max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn coherent_is_not_invariant_under_unitaries() {
        let spec = HypothesisSpec::h1(2, Dependence::Unitary).unwrap();
        assert!(matches!(
            output_state(&spec, &ProbeKind::Coherent, 1),
            Err(Error::NonInvariantProbe(_))
        ));
    }

    #[test]
    fn classical_needs_known_parameter() {
        let spec = HypothesisSpec::h1(3, Dependence::Permutation).unwrap();
        let probe = ProbeKind::Classical(vec![0, 1]);
        assert!(matches!(output_state(&spec, &probe, 2), Err(Error::NonInvariantProbe(_))));
        let known = spec.with_parameter(Parameter::Permutation(vec![2, 0, 1]));
        let out = output_state(&known, &probe, 2).unwrap();
        let b = kron(
            &MultiState::basis(3, 2).unwrap().rho(),
            &MultiState::basis(3, 0).unwrap().rho(),
        );
        assert!(out.rho().max_abs_diff(&kron(&b, &kron(&mixed(3), &mixed(3)))) < 1e-12);
    }

    #[test]
    fn hypotheses_related_by_block_swap() {
        let probes = [
            (ProbeKind::Coherent, 2, Dependence::Permutation),
            (ProbeKind::contiguous_singlets(3, 2).unwrap(), 3, Dependence::Unitary),
            (ProbeKind::Reference, 4, Dependence::Unitary),
        ];
        for (probe, n, dep) in probes {
            let h1 = output_state(&HypothesisSpec::h1(2, dep).unwrap(), &probe, n).unwrap();
            let h2 = output_state(&HypothesisSpec::h2(2, dep).unwrap(), &probe, n).unwrap();
            let active = (h1.dims().len() - usize::from(probe == ProbeKind::Reference)) / 2;
            let order = canonical_swap_order(active, probe == ProbeKind::Reference);
            let swapped = h1.permute(&order).unwrap();
            assert!(swapped.distance(&h2).unwrap() < 1e-12, "{}", probe.label());
        }
    }

    #[test]
    fn padded_singlet_drops_extra_probe() {
        let spec = HypothesisSpec::h1(2, Dependence::Unitary).unwrap();
        let probe = ProbeKind::Singlet(GroupPartition::contiguous(2, 2).unwrap());
        let out = output_state(&spec, &probe, 3).unwrap();
        assert_eq!(out.dims(), &[2, 2, 2, 2]);
    }

    #[test]
    fn reference_h1_structure() {
        let spec = HypothesisSpec::h1(2, Dependence::Unitary).unwrap();
        let out = output_state(&spec, &ProbeKind::Reference, 4).unwrap();
        assert_eq!(out.dims(), &[2, 2, 2, 2, 2, 2, 2, 2, 3]);
        // C block is maximally mixed and uncorrelated with B and R
        let c = out.partial_trace(&[4, 5, 6, 7]).unwrap();
        let expect = kron_all(&[mixed(2), mixed(2), mixed(2), mixed(2)]);
        assert!(c.rho().max_abs_diff(&expect) < 1e-12);
        let br = out.partial_trace(&[0, 1, 2, 3, 8]).unwrap();
        let rest = kron(&br.rho(), &expect).clone();
        let reordered = out.permute(&[0, 1, 2, 3, 8, 4, 5, 6, 7]).unwrap();
        assert!(reordered.rho().max_abs_diff(&rest) < 1e-12);
        // B ⊗ R is the (pure) input state
        let input = crate::strategies::reference_probe(4, 2).unwrap();
        assert!(br.distance(&input).unwrap() < 1e-12);
        let _ = EffectSlot::First;
    }
}

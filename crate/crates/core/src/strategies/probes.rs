use crate::combinat::{all_permutations, group_partitions, permutation_sign, GroupPartition};
use crate::error::{Error, Result};
use crate::numkernel::C64;
use crate::quantum::MultiState;

/// Largest state vector the constructors will allocate.
const MAX_AMPLITUDES: usize = 1 << 26;

/// How the `n` probes are prepared.
#[derive(Clone, Debug, PartialEq)]
pub enum ProbeKind {
    /// Computational-basis inputs, one value per probe.
    Classical(Vec<usize>),
    /// `|e₀⟩^{⊗n}` with `|e₀⟩ = Σᵢ|i⟩/√d`.
    Coherent,
    /// Singlets of `d` probes placed on the groups of a partition. When `d`
    /// does not divide `n` only the first `d⌊n/d⌋` probes are used.
    Singlet(GroupPartition),
    /// Superposition over all singlet groupings, entangled with a reference.
    Reference,
}

impl ProbeKind {
    /// Singlets on contiguous groups over the `d⌊n/d⌋` active probes.
    pub fn contiguous_singlets(n: usize, d: usize) -> Result<Self> {
        let active = d * (n / d);
        Ok(ProbeKind::Singlet(GroupPartition::contiguous(active, d)?))
    }

    /// Short label used in reports.
    pub fn label(&self) -> &'static str {
        match self {
            ProbeKind::Classical(_) => "classical",
            ProbeKind::Coherent => "coherent",
            ProbeKind::Singlet(_) => "singlet",
            ProbeKind::Reference => "reference",
        }
    }
}

fn checked_len(d: usize, n: usize, extra: usize) -> Result<usize> {
    (d as u64)
        .checked_pow(n as u32)
        .and_then(|x| x.checked_mul(extra as u64))
        .filter(|&x| x <= MAX_AMPLITUDES as u64)
        .map(|x| x as usize)
        .ok_or_else(|| Error::Infeasible(format!("state vector of {d}^{n}·{extra} amplitudes")))
}

/// `|e₀⟩^{⊗n}`
pub fn coherent_probe(n: usize, d: usize) -> Result<MultiState> {
    if n == 0 || d == 0 {
        return Err(Error::InvalidArgument(format!("coherent probe with n = {n}, d = {d}")));
    }
    let len = checked_len(d, n, 1)?;
    let a = C64::new(1.0 / (len as f64).sqrt(), 0.0);
    MultiState::pure(vec![a; len], vec![d; n])
}

/// `(1/√d!) Σ ε_{k₁..k_d} |k₁..k_d⟩`
pub fn singlet_state(d: usize) -> Result<MultiState> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("singlet needs d >= 2, got {d}")));
    }
    let group = GroupPartition::contiguous(d, d)?;
    grouped_singlet_state(&group, d, d)
}

/// Product of singlets on the groups of `p`, factors in probe order.
pub fn grouped_singlet_state(p: &GroupPartition, n: usize, d: usize) -> Result<MultiState> {
    if !p.fits(n, d) {
        return Err(Error::InvalidPartition(format!(
            "partition of {} probes in groups of {} used for n = {n}, d = {d}",
            p.n(),
            p.group_size()
        )));
    }
    let amps = grouped_singlet_amplitudes(p, n, d)?;
    MultiState::pure(amps, vec![d; n])
}

fn grouped_singlet_amplitudes(p: &GroupPartition, n: usize, d: usize) -> Result<Vec<C64>> {
    let len = checked_len(d, n, 1)?;
    let perms: Vec<(Vec<usize>, f64)> = all_permutations(d)
        .into_iter()
        .map(|q| {
            let s = permutation_sign(&q) as f64;
            (q, s)
        })
        .collect();
    let groups = p.groups();
    let t = groups.len();
    let norm = {
        let fact: f64 = (1..=d).map(|k| k as f64).product();
        fact.powi(t as i32).sqrt()
    };
    let mut strides = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * d;
    }
    let mut amps = vec![C64::new(0.0, 0.0); len];
    // odometer over one permutation per group
    let mut choice = vec![0usize; t];
    loop {
        let mut idx = 0;
        let mut sign = 1.0;
        for (g, &c) in groups.iter().zip(&choice) {
            let (q, s) = &perms[c];
            sign *= s;
            for (member, &value) in g.iter().zip(q) {
                idx += value * strides[*member];
            }
        }
        amps[idx] = C64::new(sign / norm, 0.0);
        let mut k = 0;
        loop {
            if k == t {
                return Ok(amps);
            }
            choice[k] += 1;
            if choice[k] < perms.len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// `(1/√G) Σᵢ (grouped singlets)ᵢ ⊗ |i⟩` over all `G = G_{n,d}` groupings,
/// with dims `(d, …, d, G)`.
pub fn reference_probe(n: usize, d: usize) -> Result<MultiState> {
    let parts = group_partitions(n, d)?;
    let g = parts.len();
    let len = checked_len(d, n, g)?;
    let scale = 1.0 / (g as f64).sqrt();
    let mut amps = vec![C64::new(0.0, 0.0); len];
    for (i, p) in parts.iter().enumerate() {
        let v = grouped_singlet_amplitudes(p, n, d)?;
        for (x, a) in v.into_iter().enumerate() {
            if a != C64::new(0.0, 0.0) {
                amps[x * g + i] = a * scale;
            }
        }
    }
    let mut dims = vec![d; n];
    dims.push(g);
    MultiState::pure(amps, dims)
}

/// Number of probes that are actually sent through the process.
pub fn active_probes(probe: &ProbeKind, n: usize, d: usize) -> usize {
    match probe {
        ProbeKind::Singlet(_) => d * (n / d),
        _ => n,
    }
}

/// The input state for `n` interrogations: probes first, then the reference
/// (for [`ProbeKind::Reference`]).
pub fn probe_state(probe: &ProbeKind, n: usize, d: usize) -> Result<MultiState> {
    match probe {
        ProbeKind::Classical(inputs) => {
            if inputs.len() != n || n == 0 {
                return Err(Error::InvalidArgument(format!(
                    "{} classical inputs for n = {n}",
                    inputs.len()
                )));
            }
            let mut it = inputs.iter();
            let first = MultiState::basis(d, *it.next().expect("n > 0"))?;
            it.try_fold(first, |acc, &v| Ok(acc.tensor(&MultiState::basis(d, v)?)))
        }
        ProbeKind::Coherent => coherent_probe(n, d),
        ProbeKind::Singlet(p) => {
            let active = active_probes(probe, n, d);
            if active == 0 {
                return Err(Error::InvalidArgument(format!(
                    "singlet strategy needs n >= d (n = {n}, d = {d})"
                )));
            }
            grouped_singlet_state(p, active, d)
        }
        ProbeKind::Reference => reference_probe(n, d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernel::kron;

    #[test]
    fn coherent_single_qubit_is_plus() {
        let s = coherent_probe(1, 2).unwrap();
        let v = &s.low_rank().unwrap().terms()[0].1;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[0].re - h).abs() < 1e-15 && (v[1].re - h).abs() < 1e-15);
    }

    #[test]
    fn coherent_two_qutrits() {
        let s = coherent_probe(2, 3).unwrap();
        let v = &s.low_rank().unwrap().terms()[0].1;
        assert_eq!(v.len(), 9);
        assert!(v.iter().all(|a| (a.re - 1.0 / 3.0).abs() < 1e-15 && a.im == 0.0));
    }

    #[test]
    fn qubit_singlet() {
        let s = singlet_state(2).unwrap();
        let v = &s.low_rank().unwrap().terms()[0].1;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expect = [0.0, h, -h, 0.0];
        for (a, e) in v.iter().zip(expect) {
            assert!((a.re - e).abs() < 1e-15);
        }
    }

    #[test]
    fn qutrit_singlet_signs() {
        let s = singlet_state(3).unwrap();
        let v = &s.low_rank().unwrap().terms()[0].1;
        let a = 1.0 / 6f64.sqrt();
        let mut nonzero = 0;
        for p in all_permutations(3) {
            let idx = p[0] * 9 + p[1] * 3 + p[2];
            assert!((v[idx].re - a * permutation_sign(&p) as f64).abs() < 1e-15);
            nonzero += 1;
        }
        assert_eq!(nonzero, 6);
        assert_eq!(v.iter().filter(|z| z.norm() > 0.0).count(), 6);
    }

    #[test]
    fn contiguous_grouping_is_product() {
        let p = GroupPartition::contiguous(4, 2).unwrap();
        let s = grouped_singlet_state(&p, 4, 2).unwrap();
        let single = singlet_state(2).unwrap();
        let expect = kron(&single.rho(), &single.rho());
        assert!(s.rho().max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn crossed_grouping_marginal_is_singlet() {
        let p = GroupPartition::new(vec![vec![0, 2], vec![1, 3]]).unwrap();
        let s = grouped_singlet_state(&p, 4, 2).unwrap();
        let marginal = s.partial_trace(&[0, 2]).unwrap();
        assert!(marginal.rho().max_abs_diff(&singlet_state(2).unwrap().rho()) < 1e-15);
    }

    #[test]
    fn reference_probe_shapes() {
        let r = reference_probe(2, 2).unwrap();
        assert_eq!(r.dims(), &[2, 2, 1]);
        let r = reference_probe(4, 2).unwrap();
        assert_eq!(r.dims(), &[2, 2, 2, 2, 3]);
        assert!((r.trace() - 1.0).abs() < 1e-12);
        assert!(matches!(reference_probe(3, 2), Err(Error::NotMultiple { n: 3, d: 2 })));
    }

    #[test]
    fn partition_must_fit() {
        let p = GroupPartition::contiguous(4, 2).unwrap();
        assert!(matches!(grouped_singlet_state(&p, 6, 2), Err(Error::InvalidPartition(_))));
    }

    #[test]
    fn classical_probe_is_basis_product() {
        let s = probe_state(&ProbeKind::Classical(vec![1, 0, 2]), 3, 3).unwrap();
        let v = &s.low_rank().unwrap().terms()[0].1;
        assert_eq!(v[9 + 2].re, 1.0);
        assert!(probe_state(&ProbeKind::Classical(vec![3]), 1, 3).is_err());
    }
}

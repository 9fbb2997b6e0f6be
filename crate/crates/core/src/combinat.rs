//! Groupings of `n` labeled probes into blocks of `d`, and the multiplicity
//! of the trivial representation of SU(d) in `U ↦ U^{⊗n}`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numkernel::{hermitian_eigenvalues, ComplexMatrix, C64};

/// Largest `d^n` accepted by [`invariant_subspace_dim`].
pub const INVARIANT_ORACLE_MAX_DIM: usize = 4096;
/// Eigenvalues of the collective Casimir below this count as kernel.
const KERNEL_THRESHOLD: f64 = 1e-9;

/// Division of `0..n` into unordered groups of equal size. Canonical form:
/// each group sorted, groups sorted by their minimum element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupPartition {
    groups: Vec<Vec<usize>>,
}

impl GroupPartition {
    /// Validates exact cover, equal group sizes and canonical ordering.
    pub fn new(groups: Vec<Vec<usize>>) -> Result<Self> {
        let n: usize = groups.iter().map(Vec::len).sum();
        let size = groups.first().map_or(0, Vec::len);
        if size == 0 {
            return Err(Error::InvalidPartition("empty partition".into()));
        }
        if groups.iter().any(|g| g.len() != size) {
            return Err(Error::InvalidPartition(format!("unequal group sizes in {groups:?}")));
        }
        let mut seen = vec![false; n];
        for g in &groups {
            if g.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidPartition(format!("group {g:?} is not sorted")));
            }
            for &x in g {
                if x >= n || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::InvalidPartition(format!(
                        "{groups:?} is not an exact cover of 0..{n}"
                    )));
                }
            }
        }
        if groups.windows(2).any(|w| w[0][0] >= w[1][0]) {
            return Err(Error::InvalidPartition(format!(
                "groups of {groups:?} not ordered by minimum"
            )));
        }
        Ok(Self { groups })
    }

    /// `{0..d}, {d..2d}, …`
    pub fn contiguous(n: usize, d: usize) -> Result<Self> {
        check_multiple(n, d)?;
        Ok(Self {
            groups: (0..n / d).map(|g| (g * d..(g + 1) * d).collect()).collect(),
        })
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn n(&self) -> usize {
        self.groups.len() * self.group_size()
    }

    pub fn group_size(&self) -> usize {
        self.groups[0].len()
    }

    /// True iff this partition covers `0..n` in groups of `d`.
    pub fn fits(&self, n: usize, d: usize) -> bool {
        self.n() == n && self.group_size() == d
    }
}

fn check_multiple(n: usize, d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("group size d = {d} must be >= 2")));
    }
    if n == 0 || !n.is_multiple_of(d) {
        return Err(Error::NotMultiple { n, d });
    }
    Ok(())
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// `G_{n,d} = n! / ((d!)^{n/d} (n/d)!)`
pub fn partition_count(n: usize, d: usize) -> Result<BigUint> {
    check_multiple(n, d)?;
    let t = n / d;
    let denom = factorial(d).pow(t as u32) * factorial(t);
    Ok(factorial(n) / denom)
}

/// Every grouping of `0..n` into blocks of `d`, in canonical form and
/// lexicographic order.
pub fn group_partitions(n: usize, d: usize) -> Result<Vec<GroupPartition>> {
    check_multiple(n, d)?;
    fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        (k - 1..m)
            .flat_map(|last| {
                combinations(last, k - 1).into_iter().map(move |mut c| {
                    c.push(last);
                    c
                })
            })
            .collect()
    }
    fn rec(
        remaining: &[usize],
        d: usize,
        current: &mut Vec<Vec<usize>>,
        out: &mut Vec<GroupPartition>,
    ) {
        let Some((&head, rest)) = remaining.split_first() else {
            out.push(GroupPartition {
                groups: current.clone(),
            });
            return;
        };
        // the smallest unused element anchors the next group
        let mut combos = combinations(rest.len(), d - 1);
        combos.sort();
        for idx in combos {
            let mut group = vec![head];
            group.extend(idx.iter().map(|&i| rest[i]));
            let left: Vec<usize> = rest
                .iter()
                .enumerate()
                .filter(|(i, _)| !idx.contains(i))
                .map(|(_, &x)| x)
                .collect();
            current.push(group);
            rec(&left, d, current, out);
            current.pop();
        }
    }
    let items: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    rec(&items, d, &mut Vec::new(), &mut out);
    Ok(out)
}

/// Multiplicity of the trivial SU(d) irrep in `(C^d)^{⊗n}`: the number of
/// standard Young tableaux of the `d × (n/d)` rectangle,
/// `n! · Π_{i=1..d} (d−i)! / (n/d + d − i)!`, in exact integer arithmetic.
pub fn multiplicity(n: usize, d: usize) -> Result<BigUint> {
    check_multiple(n, d)?;
    let t = n / d;
    let mut num = factorial(n);
    let mut den = BigUint::one();
    for i in 1..=d {
        num *= factorial(d - i);
        den *= factorial(t + d - i);
    }
    let m = &num / &den;
    debug_assert!((&num % &den).is_zero());
    Ok(m)
}

/// [`multiplicity`] as `u64`, when it fits.
pub fn multiplicity_u64(n: usize, d: usize) -> Result<u64> {
    multiplicity(n, d)?
        .to_u64()
        .ok_or_else(|| Error::Infeasible(format!("m({n},{d}) exceeds u64")))
}

/// All permutations of `0..d` in lexicographic order.
pub fn all_permutations(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..d).collect();
    loop {
        out.push(p.clone());
        // next lexicographic permutation
        let Some(i) = (1..d).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..d).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// `+1` for even permutations, `-1` for odd ones.
pub fn permutation_sign(p: &[usize]) -> i32 {
    let mut inversions = 0usize;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Generalized Gell-Mann matrices: a basis of traceless Hermitian `d×d` matrices.
fn su_generators(d: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(d * d - 1);
    for j in 0..d {
        for k in j + 1..d {
            let mut s = ComplexMatrix::zeros(d, d);
            s[(j, k)] = C64::new(1.0, 0.0);
            s[(k, j)] = C64::new(1.0, 0.0);
            out.push(s);
            let mut a = ComplexMatrix::zeros(d, d);
            a[(j, k)] = C64::new(0.0, -1.0);
            a[(k, j)] = C64::new(0.0, 1.0);
            out.push(a);
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut h = ComplexMatrix::zeros(d, d);
        for i in 0..l {
            h[(i, i)] = C64::new(norm, 0.0);
        }
        h[(l, l)] = C64::new(-(l as f64) * norm, 0.0);
        out.push(h);
    }
    out
}

/// Dimension of the subspace of `(C^d)^{⊗n}` annihilated by every collective
/// generator `G = Σ_k g^{(k)}`, computed as the null space of `Σ_g G†G`.
pub fn invariant_subspace_dim(n: usize, d: usize) -> Result<usize> {
    if d < 2 || n == 0 {
        return Err(Error::InvalidArgument(format!("invalid (n, d) = ({n}, {d})")));
    }
    let dim = (d as u64)
        .checked_pow(n as u32)
        .filter(|&x| x <= INVARIANT_ORACLE_MAX_DIM as u64)
        .ok_or_else(|| {
            Error::Infeasible(format!("d^n = {d}^{n} exceeds {INVARIANT_ORACLE_MAX_DIM}"))
        })? as usize;
    let gens = su_generators(d);
    let mut strides = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * d;
    }
    // rows of each collective generator are sparse: accumulate Σ_g G†G row by row
    let mut casimir = ComplexMatrix::zeros(dim, dim);
    for g in &gens {
        let rows: Vec<Vec<(usize, C64)>> = Execution::default().map_range(dim, |r| {
            let mut entries: Vec<(usize, C64)> = Vec::with_capacity(n * d);
            for &st in &strides {
                let rk = (r / st) % d;
                for b in 0..d {
                    let val = g[(rk, b)];
                    if val == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let col = r - rk * st + b * st;
                    match entries.iter_mut().find(|(c, _)| *c == col) {
                        Some(e) => e.1 += val,
                        None => entries.push((col, val)),
                    }
                }
            }
            entries
        });
        for row in &rows {
            for &(i, gi) in row {
                for &(j, gj) in row {
                    casimir[(i, j)] += gi.conj() * gj;
                }
            }
        }
    }
    let vals = hermitian_eigenvalues(&casimir.hermitian_part())?;
    Ok(vals.iter().filter(|&&x| x.abs() <= KERNEL_THRESHOLD).count())
}

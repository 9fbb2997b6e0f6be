use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numkernel::{
    hermitian_eig, hermitian_eigenvalues, partial_trace, ComplexMatrix, LowRank, C64,
};

use super::state::MultiState;

/// Tolerance for channel equality (Choi distance) and CPTP checks.
pub const CHANNEL_TOL: f64 = 1e-9;
/// Trace-preservation tolerance enforced by [`Channel::new`].
const TP_TOL: f64 = 1e-10;

/// CPTP map in Kraus form. Each Kraus operator is `out_dim × in_dim`, where
/// the dims are the products of `out_dims` and `in_dims`.
#[derive(Clone, Debug)]
pub struct Channel {
    kraus: Vec<ComplexMatrix>,
    in_dims: Vec<usize>,
    out_dims: Vec<usize>,
}

fn tp_residual(kraus: &[ComplexMatrix], din: usize) -> f64 {
    let mut sum = ComplexMatrix::zeros(din, din);
    for k in kraus {
        sum.add_assign_scaled(&k.dagger().matmul(k), C64::new(1.0, 0.0));
    }
    sum.max_abs_diff(&ComplexMatrix::identity(din))
}

impl Channel {
    pub fn new(kraus: Vec<ComplexMatrix>, in_dims: Vec<usize>, out_dims: Vec<usize>) -> Result<Self> {
        let din: usize = in_dims.iter().product();
        let dout: usize = out_dims.iter().product();
        if kraus.is_empty() {
            return Err(Error::InvalidArgument("channel without Kraus operators".into()));
        }
        for k in &kraus {
            if k.rows() != dout || k.cols() != din {
                return Err(Error::DimensionMismatch(format!(
                    "{}x{} Kraus operator for a {din} -> {dout} channel",
                    k.rows(),
                    k.cols()
                )));
            }
        }
        let res = tp_residual(&kraus, din);
        if res > TP_TOL {
            return Err(Error::NotTracePreserving(res));
        }
        Ok(Self {
            kraus,
            in_dims,
            out_dims,
        })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            kraus: vec![ComplexMatrix::identity(d)],
            in_dims: vec![d],
            out_dims: vec![d],
        }
    }

    /// `ρ ↦ UρU†`
    pub fn unitary(u: ComplexMatrix) -> Result<Self> {
        let res = u.unitarity_residual();
        if res > TP_TOL {
            return Err(Error::NotUnitary(res));
        }
        let d = u.rows();
        Ok(Self {
            kraus: vec![u],
            in_dims: vec![d],
            out_dims: vec![d],
        })
    }

    /// `ρ ↦ tr(ρ)·I/d`, Kraus set `{|i⟩⟨j|/√d}`.
    pub fn depolarizing(d: usize) -> Self {
        let s = 1.0 / (d as f64).sqrt();
        let mut kraus = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut k = ComplexMatrix::zeros(d, d);
                k[(i, j)] = C64::new(s, 0.0);
                kraus.push(k);
            }
        }
        Self {
            kraus,
            in_dims: vec![d],
            out_dims: vec![d],
        }
    }

    /// `ρ ↦ tr(ρ)·σ` from a `din`-dimensional input.
    pub fn replacer(sigma: &MultiState, din: usize) -> Result<Self> {
        let spec = hermitian_eig(&sigma.rho())?;
        let dout = sigma.dim();
        let mut kraus = Vec::new();
        for (idx, &lam) in spec.eigenvalues.iter().enumerate() {
            if lam <= 1e-15 {
                continue;
            }
            let v = spec.eigenvectors.column_vec(idx);
            for j in 0..din {
                let mut k = ComplexMatrix::zeros(dout, din);
                for o in 0..dout {
                    k[(o, j)] = v[o] * lam.sqrt();
                }
                kraus.push(k);
            }
        }
        Self::new(kraus, vec![din], sigma.dims().to_vec())
    }

    /// Exchanges two subsystems of dimensions `d1`, `d2`.
    pub fn swap(d1: usize, d2: usize) -> Self {
        let n = d1 * d2;
        let mut u = ComplexMatrix::zeros(n, n);
        for a in 0..d1 {
            for b in 0..d2 {
                u[(b * d1 + a, a * d2 + b)] = C64::new(1.0, 0.0);
            }
        }
        Self {
            kraus: vec![u],
            in_dims: vec![d1, d2],
            out_dims: vec![d2, d1],
        }
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn in_dims(&self) -> &[usize] {
        &self.in_dims
    }

    pub fn out_dims(&self) -> &[usize] {
        &self.out_dims
    }

    pub fn in_dim(&self) -> usize {
        self.in_dims.iter().product()
    }

    pub fn out_dim(&self) -> usize {
        self.out_dims.iter().product()
    }

    /// Same map with its input/output split into different subsystems.
    pub fn regroup(&self, in_dims: Vec<usize>, out_dims: Vec<usize>) -> Result<Self> {
        if in_dims.iter().product::<usize>() != self.in_dim()
            || out_dims.iter().product::<usize>() != self.out_dim()
        {
            return Err(Error::DimensionMismatch(format!(
                "cannot regroup {:?} -> {:?} as {in_dims:?} -> {out_dims:?}",
                self.in_dims, self.out_dims
            )));
        }
        Ok(Self {
            kraus: self.kraus.clone(),
            in_dims,
            out_dims,
        })
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &Channel) -> Result<Self> {
        if first.out_dim() != self.in_dim() {
            return Err(Error::DimensionMismatch(format!(
                "composing {:?} -> {:?} after {:?} -> {:?}",
                self.in_dims, self.out_dims, first.in_dims, first.out_dims
            )));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * first.kraus.len());
        for a in &self.kraus {
            for b in &first.kraus {
                kraus.push(a.matmul(b));
            }
        }
        let c = Self {
            kraus,
            in_dims: first.in_dims.clone(),
            out_dims: self.out_dims.clone(),
        };
        Ok(if c.kraus.len() > c.in_dim() * c.out_dim() {
            c.compressed()?
        } else {
            c
        })
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Channel) -> Self {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(crate::numkernel::kron(a, b));
            }
        }
        Self {
            kraus,
            in_dims: self.in_dims.iter().chain(&other.in_dims).copied().collect(),
            out_dims: self.out_dims.iter().chain(&other.out_dims).copied().collect(),
        }
    }

    /// Minimal Kraus set from the eigen-decomposition of the Choi matrix.
    pub fn compressed(&self) -> Result<Self> {
        let (din, dout) = (self.in_dim(), self.out_dim());
        let spec = hermitian_eig(&choi_of(self))?;
        let cutoff = 1e-13 * spec.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
        let mut kraus = Vec::new();
        for (idx, &lam) in spec.eigenvalues.iter().enumerate() {
            if lam <= cutoff {
                break;
            }
            let s = lam.sqrt();
            let v = &spec.eigenvectors;
            kraus.push(ComplexMatrix::from_fn(dout, din, |o, i| v[(i * dout + o, idx)] * s));
        }
        Self::new(kraus, self.in_dims.clone(), self.out_dims.clone())
    }

    /// `Σ K X K†` for an arbitrary input operator `X`.
    pub fn apply_matrix(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.out_dim(), self.out_dim());
        for k in &self.kraus {
            out.add_assign_scaled(&k.matmul(x).matmul(&k.dagger()), C64::new(1.0, 0.0));
        }
        out
    }
}

/// Choi matrix `J = Σ_{ij} |i⟩⟨j| ⊗ 𝒞(|i⟩⟨j|)` (input factor first).
pub fn choi_from_kraus(kraus: &[ComplexMatrix], din: usize) -> ComplexMatrix {
    let dout = kraus.first().map_or(0, ComplexMatrix::rows);
    let n = din * dout;
    let mut j = ComplexMatrix::zeros(n, n);
    for k in kraus {
        // |K⟩⟩ = Σ_i |i⟩ ⊗ K|i⟩
        let v: Vec<C64> = (0..din)
            .flat_map(|i| (0..dout).map(move |o| (i, o)))
            .map(|(i, o)| k[(o, i)])
            .collect();
        j.add_assign_scaled(&ComplexMatrix::projector(&v), C64::new(1.0, 0.0));
    }
    j
}

pub fn choi_of(c: &Channel) -> ComplexMatrix {
    choi_from_kraus(&c.kraus, c.in_dim())
}

/// True iff `m` is PSD and its output-side partial trace is the identity,
/// both within [`CHANNEL_TOL`].
pub fn is_cptp(m: &ComplexMatrix, din: usize, dout: usize) -> bool {
    if !m.is_square() || m.rows() != din * dout || !m.is_hermitian(CHANNEL_TOL) {
        return false;
    }
    let Ok(vals) = hermitian_eigenvalues(&m.hermitian_part()) else {
        return false;
    };
    if vals.last().copied().unwrap_or(0.0) < -CHANNEL_TOL {
        return false;
    }
    match partial_trace(m, &[din, dout], &[0]) {
        Ok(t) => t.max_abs_diff(&ComplexMatrix::identity(din)) <= CHANNEL_TOL,
        Err(_) => false,
    }
}

/// Frobenius distance between Choi matrices; infinite on shape mismatch.
pub fn choi_distance(a: &Channel, b: &Channel) -> f64 {
    if a.in_dim() != b.in_dim() || a.out_dim() != b.out_dim() {
        return f64::INFINITY;
    }
    choi_of(a).distance(&choi_of(b))
}

/// Applies `K` (acting on the contiguous block `[pos, pos + width)` of
/// `dims`) on both sides of a dense operator.
fn conjugate_dense(
    rho: &ComplexMatrix,
    left: usize,
    right: usize,
    kraus: &[ComplexMatrix],
) -> ComplexMatrix {
    let din = kraus[0].cols();
    let dout = kraus[0].rows();
    let nin = left * din * right;
    let nout = left * dout * right;
    let exec = if nout * nin > 1 << 14 {
        Execution::default()
    } else {
        Execution::Sequential
    };
    let mut out = ComplexMatrix::zeros(nout, nout);
    for k in kraus {
        // T = (I⊗K⊗I) ρ
        let mut t = ComplexMatrix::zeros(nout, nin);
        exec.for_each_chunk_mut(t.as_mut_slice(), nin, |row, trow| {
            let l = row / (dout * right);
            let o = (row / right) % dout;
            let r = row % right;
            for i in 0..din {
                let kk = k[(o, i)];
                if kk == C64::new(0.0, 0.0) {
                    continue;
                }
                let src = rho.row((l * din + i) * right + r);
                for (a, &b) in trow.iter_mut().zip(src) {
                    *a += kk * b;
                }
            }
        });
        // out += T (I⊗K†⊗I)
        let t = &t;
        exec.for_each_chunk_mut(out.as_mut_slice(), nout, |row, orow| {
            let trow = t.row(row);
            for l in 0..left {
                for o in 0..dout {
                    for r in 0..right {
                        let mut acc = C64::new(0.0, 0.0);
                        for i in 0..din {
                            acc += trow[(l * din + i) * right + r] * k[(o, i)].conj();
                        }
                        orow[(l * dout + o) * right + r] += acc;
                    }
                }
            }
        });
    }
    out
}

fn apply_to_vector(v: &[C64], left: usize, right: usize, k: &ComplexMatrix) -> Vec<C64> {
    let din = k.cols();
    let dout = k.rows();
    let mut out = vec![C64::new(0.0, 0.0); left * dout * right];
    for l in 0..left {
        for o in 0..dout {
            for i in 0..din {
                let kk = k[(o, i)];
                if kk == C64::new(0.0, 0.0) {
                    continue;
                }
                let src = &v[(l * din + i) * right..(l * din + i + 1) * right];
                let dst = &mut out[(l * dout + o) * right..(l * dout + o + 1) * right];
                for (a, &b) in dst.iter_mut().zip(src) {
                    *a += kk * b;
                }
            }
        }
    }
    out
}

/// Applies `c` to the factors `on_factors` of `s` (in that order).
///
/// The output factors `c.out_dims` take the place of the selected block:
/// they are inserted where the first selected factor was, and the other
/// factors keep their relative order.
pub fn apply_channel(c: &Channel, s: &MultiState, on_factors: &[usize]) -> Result<MultiState> {
    let dims = s.dims();
    if on_factors.is_empty() {
        return Err(Error::InvalidArgument("no factors selected".into()));
    }
    for (pos, &f) in on_factors.iter().enumerate() {
        if f >= dims.len() {
            return Err(Error::FactorOutOfRange {
                index: f,
                count: dims.len(),
            });
        }
        if on_factors[..pos].contains(&f) {
            return Err(Error::InvalidArgument(format!("repeated factor {f}")));
        }
    }
    let selected: Vec<usize> = on_factors.iter().map(|&f| dims[f]).collect();
    if selected.iter().product::<usize>() != c.in_dim() || selected != c.in_dims() {
        return Err(Error::DimensionMismatch(format!(
            "channel input {:?} applied to factors of dims {selected:?}",
            c.in_dims()
        )));
    }
    let first = *on_factors.iter().min().expect("non-empty");
    let before: Vec<usize> = (0..first).filter(|i| !on_factors.contains(i)).collect();
    let after: Vec<usize> = (first..dims.len()).filter(|i| !on_factors.contains(i)).collect();
    let order: Vec<usize> = before
        .iter()
        .chain(on_factors)
        .chain(&after)
        .copied()
        .collect();
    let arranged = if order.iter().enumerate().all(|(i, &o)| i == o) {
        s.clone()
    } else {
        s.permute(&order)?
    };
    let left: usize = before.iter().map(|&i| dims[i]).product();
    let right: usize = after.iter().map(|&i| dims[i]).product();
    let out_dims: Vec<usize> = before
        .iter()
        .map(|&i| dims[i])
        .chain(c.out_dims().iter().copied())
        .chain(after.iter().map(|&i| dims[i]))
        .collect();
    let total_out: usize = out_dims.iter().product();

    if let Some(lr) = arranged.low_rank() {
        let new_rank = lr.rank() * c.kraus().len();
        if new_rank * 4 <= total_out {
            let nk = c.kraus().len();
            let terms = lr.terms();
            let mapped = Execution::default().map_range(terms.len() * nk, |idx| {
                let (w, v) = &terms[idx / nk];
                let nv = apply_to_vector(v, left, right, &c.kraus()[idx % nk]);
                (*w, nv)
            });
            let kept: Vec<(f64, Vec<C64>)> = mapped
                .into_iter()
                .filter(|(w, v)| *w * v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-30)
                .collect();
            return Ok(MultiState::factored_unchecked(
                LowRank::new(total_out, kept)?,
                out_dims,
            ));
        }
    }
    let rho = conjugate_dense(&arranged.rho(), left, right, c.kraus());
    Ok(MultiState::dense_unchecked(rho, out_dims))
}

/// The reduced process `ρ ↦ tr_{B′}[𝒟(ρ ⊗ α)]` of a bipartite process
/// `𝒟: A⊗A′ → B⊗B′` with the auxiliary input fixed to `α`.
pub fn reduced_process(d_chan: &Channel, aux: &MultiState) -> Result<Channel> {
    let (ind, outd) = (d_chan.in_dims(), d_chan.out_dims());
    if ind.len() != 2 || outd.len() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "reduced process needs a bipartite channel, got {ind:?} -> {outd:?}"
        )));
    }
    let (da, daux, db, dbaux) = (ind[0], ind[1], outd[0], outd[1]);
    if aux.dim() != daux {
        return Err(Error::DimensionMismatch(format!(
            "auxiliary state of dimension {} for an input of dimension {daux}",
            aux.dim()
        )));
    }
    let spec = hermitian_eig(&aux.rho())?;
    let mut kraus = Vec::new();
    for (idx, &lam) in spec.eigenvalues.iter().enumerate() {
        if lam <= 1e-15 {
            continue;
        }
        let a = spec.eigenvectors.column_vec(idx);
        let s = lam.sqrt();
        for k in d_chan.kraus() {
            for bp in 0..dbaux {
                kraus.push(ComplexMatrix::from_fn(db, da, |b, x| {
                    let mut acc = C64::new(0.0, 0.0);
                    for (y, ay) in a.iter().enumerate() {
                        acc += k[(b * dbaux + bp, x * daux + y)] * ay;
                    }
                    acc * s
                }));
            }
        }
    }
    let c = Channel::new(kraus, vec![da], vec![db])?;
    if c.kraus().len() > da * db {
        c.compressed()
    } else {
        Ok(c)
    }
}

/// Input states whose span is the full operator space on `C^d`.
fn spanning_states(d: usize) -> Vec<ComplexMatrix> {
    let mut out = Vec::with_capacity(d * d);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        let mut v = vec![C64::new(0.0, 0.0); d];
        v[i] = C64::new(1.0, 0.0);
        out.push(ComplexMatrix::projector(&v));
        for j in i + 1..d {
            let mut p = vec![C64::new(0.0, 0.0); d];
            p[i] = C64::new(s, 0.0);
            p[j] = C64::new(s, 0.0);
            out.push(ComplexMatrix::projector(&p));
            p[j] = C64::new(0.0, s);
            out.push(ComplexMatrix::projector(&p));
        }
    }
    out
}

/// True iff the channel sends every input state to the same output, up to
/// `tol` in Frobenius norm. Checked on a spanning set of input states, which
/// suffices by linearity.
pub fn is_constant(c: &Channel, tol: f64) -> bool {
    let din = c.in_dim();
    let reference = c.apply_matrix(&ComplexMatrix::identity(din).scale_real(1.0 / din as f64));
    spanning_states(din)
        .iter()
        .all(|rho| c.apply_matrix(rho).distance(&reference) <= tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reversibility {
    /// `ℛ∘𝒞 = ℐ_A` only: `𝒞` is correctable by `ℛ`.
    FaithfulOnly,
    /// `ℛ∘𝒞 = ℐ_A` and `𝒞∘ℛ = ℐ_B`.
    Reversible,
    Neither,
}

/// Tests the supplied candidate `r` as a left and right inverse of `c`.
/// This is not a search over all possible correctors.
pub fn verify_reversible(c: &Channel, r: &Channel, tol: f64) -> Reversibility {
    if r.in_dim() != c.out_dim() || r.out_dim() != c.in_dim() {
        return Reversibility::Neither;
    }
    let left = match r.compose(c) {
        Ok(rc) => choi_distance(&rc, &Channel::identity(c.in_dim())) <= tol,
        Err(_) => false,
    };
    if !left {
        return Reversibility::Neither;
    }
    let right = match c.compose(r) {
        Ok(cr) => choi_distance(&cr, &Channel::identity(c.out_dim())) <= tol,
        Err(_) => false,
    };
    if right {
        Reversibility::Reversible
    } else {
        Reversibility::FaithfulOnly
    }
}

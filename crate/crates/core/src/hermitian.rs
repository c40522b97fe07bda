//! Dense Hermitian linear algebra and entropy primitives.
//!
//! All entropies are in nats. Subsystem index 0 is the leftmost tensor factor,
//! i.e. the most significant digit of a basis index.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::real::xlogx_neg;

pub type CMatrix = DMatrix<C64>;

/// Elementwise tolerance for Hermiticity and unit trace.
pub const STATE_TOL: f64 = 1e-12;
/// Most negative eigenvalue still accepted (and clamped to zero).
pub const PSD_TOL: f64 = 1e-10;
/// Above this dimension the eigensolver switches from cyclic Jacobi to
/// Householder tridiagonalization with implicit QL.
pub const JACOBI_MAX_DIM: usize = 32;

const JACOBI_REL_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// A unit-trace, positive semidefinite Hermitian matrix over a tensor product
/// of subsystems.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    entries: CMatrix,
    subsystem_dims: Vec<usize>,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(entries: CMatrix, subsystem_dims: Vec<usize>) -> Result<Self> {
        let dm = Self::from_parts(entries, subsystem_dims)?;
        let evals = eigvalsh(&dm.entries)?;
        if let Some(&min) = evals.first() {
            if min < -PSD_TOL {
                return Err(Error::NotAState(format!("eigenvalue {min:e} is negative")));
            }
        }
        Ok(dm)
    }

    /// Checks shape, Hermiticity and trace but not positivity. For matrices
    /// that are positive by construction (thermal states, partial traces).
    pub(crate) fn from_parts(entries: CMatrix, subsystem_dims: Vec<usize>) -> Result<Self> {
        let dim = entries.nrows();
        if entries.ncols() != dim {
            return Err(Error::Dimension(format!(
                "density matrix is {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        if subsystem_dims.is_empty() || subsystem_dims.iter().any(|&d| d == 0) {
            return Err(Error::Dimension("subsystem dimensions must be positive".into()));
        }
        if subsystem_dims.iter().product::<usize>() != dim {
            return Err(Error::Dimension(format!(
                "subsystem dimensions {subsystem_dims:?} do not multiply to {dim}"
            )));
        }
        let herm_err = hermiticity_error(&entries);
        if herm_err > STATE_TOL {
            return Err(Error::Validation(format!("not Hermitian (deviation {herm_err:e})")));
        }
        let tr = entries.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::NotAState(format!("trace is {tr}")));
        }
        Ok(Self { entries: hermitize(&entries), subsystem_dims })
    }

    /// Pure state `|ψ><ψ|`; `psi` is normalized here.
    pub fn from_pure(psi: &[C64], subsystem_dims: Vec<usize>) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Argument("zero state vector".into()));
        }
        let n = psi.len();
        let m = CMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj() / (norm * norm));
        Self::from_parts(m, subsystem_dims)
    }

    pub fn maximally_mixed(subsystem_dims: Vec<usize>) -> Result<Self> {
        let dim: usize = subsystem_dims.iter().product();
        let m = CMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0);
        Self::from_parts(m, subsystem_dims)
    }

    /// `n`-qubit state with all subsystems of dimension 2.
    pub fn qubits(entries: CMatrix) -> Result<Self> {
        let dim = entries.nrows();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::Dimension(format!("{dim} is not a qubit register dimension")));
        }
        let n = dim.trailing_zeros() as usize;
        Self::new(entries, vec![2; n])
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn subsystem_dims(&self) -> &[usize] {
        &self.subsystem_dims
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.entries).0
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.subsystem_dims.clone();
        dims.extend_from_slice(&other.subsystem_dims);
        DensityMatrix { entries: self.entries.kronecker(&other.entries), subsystem_dims: dims }
    }

    /// `U ρ U†` for a unitary `u` of matching dimension.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::Dimension("unitary does not match state dimension".into()));
        }
        let m = u * &self.entries * u.adjoint();
        Self::from_parts(m, self.subsystem_dims.clone())
    }

    /// `tr(O ρ)` for a Hermitian observable.
    pub fn expectation(&self, observable: &CMatrix) -> f64 {
        let n = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += observable[(i, j)] * self.entries[(j, i)];
            }
        }
        acc.re
    }
}

/// Largest elementwise deviation `|M_ij - conj(M_ji)|`.
pub fn hermiticity_error(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut err: f64 = 0.0;
    for i in 0..n {
        for j in i..m.ncols().min(n) {
            err = err.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    err
}

/// `(M + M†)/2`.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Eigenvalues (ascending) and eigenvectors (columns) of the Hermitian part
/// of `m`. No validation; see [`eigvalsh`] for the checked entry point.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = hermitize(m);
    let (vals, vecs) = if h.nrows() <= JACOBI_MAX_DIM {
        jacobi_eigh(&h)
    } else {
        let eig = SymmetricEigen::new(h);
        (eig.eigenvalues.iter().copied().collect::<Vec<_>>(), eig.eigenvectors)
    };
    sort_eigenpairs(vals, vecs)
}

pub(crate) fn sort_eigenpairs(vals: Vec<f64>, vecs: CMatrix) -> (Vec<f64>, CMatrix) {
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let sorted_vals = order.iter().map(|&k| vals[k]).collect();
    let sorted_vecs = CMatrix::from_fn(vecs.nrows(), vecs.ncols(), |i, j| vecs[(i, order[j])]);
    (sorted_vals, sorted_vecs)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eigvalsh(m: &CMatrix) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::Dimension(format!("matrix is {}x{}", m.nrows(), m.ncols())));
    }
    let scale = m.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let err = hermiticity_error(m);
    if err > 1e-10 * scale {
        return Err(Error::Validation(format!("not Hermitian (deviation {err:e})")));
    }
    Ok(eigh(m).0)
}

/// Cyclic Jacobi for Hermitian matrices. Each rotation first removes the
/// phase of the pivot and then applies a real Givens rotation.
pub fn jacobi_eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let mut a = hermitize(m);
    let mut v = CMatrix::identity(n, n);
    let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return (vec![0.0; n], v);
    }
    let off = |a: &CMatrix| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    for _ in 0..JACOBI_MAX_SWEEPS {
        if off(&a) < JACOBI_REL_TOL * norm {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag < 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let theta = (aqq - app) / (2.0 * mag);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let e = phase.conj();
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    let nkp = akp * c - akq * e * s;
                    let nkq = akp * s + akq * e * c;
                    a[(k, p)] = nkp;
                    a[(p, k)] = nkp.conj();
                    a[(k, q)] = nkq;
                    a[(q, k)] = nkq.conj();
                }
                a[(p, p)] = C64::new(app - t * mag, 0.0);
                a[(q, q)] = C64::new(aqq + t * mag, 0.0);
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c - vkq * e * s;
                    v[(k, q)] = vkp * s + vkq * e * c;
                }
            }
        }
    }
    ((0..n).map(|i| a[(i, i)].re).collect(), v)
}

/// Shannon entropy of a spectrum, clamping values in `[-PSD_TOL, 0)` to zero.
pub fn spectrum_entropy(evals: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for &l in evals {
        if l < -PSD_TOL {
            return Err(Error::NotAState(format!("eigenvalue {l:e} is negative")));
        }
        s += xlogx_neg(&l);
    }
    Ok(s)
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    spectrum_entropy(&eigh(rho.matrix()).0)
}

/// Reduced state on the subsystems listed in `keep` (any order; the result
/// keeps them in ascending order).
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let dims = rho.subsystem_dims();
    let n = dims.len();
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    if keep_sorted.is_empty() || keep_sorted.len() >= n {
        return Err(Error::Argument(format!(
            "kept subsystems {keep:?} must be a nonempty proper subset of 0..{n}"
        )));
    }
    if keep_sorted.iter().any(|&k| k >= n) {
        return Err(Error::Argument(format!("subsystem index out of range in {keep:?}")));
    }
    let traced: Vec<usize> = (0..n).filter(|k| !keep_sorted.contains(k)).collect();
    let kept_dims: Vec<usize> = keep_sorted.iter().map(|&k| dims[k]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let dk: usize = kept_dims.iter().product();
    let dt: usize = traced_dims.iter().product();

    // Strides of every subsystem inside the full index.
    let mut strides = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * dims[k + 1];
    }
    let offsets = |sel: &[usize], sel_dims: &[usize], count: usize| -> Vec<usize> {
        (0..count)
            .map(|mut idx| {
                let mut off = 0;
                for (pos, &k) in sel.iter().enumerate().rev() {
                    let d = sel_dims[pos];
                    off += (idx % d) * strides[k];
                    idx /= d;
                }
                off
            })
            .collect()
    };
    let kept_off = offsets(&keep_sorted, &kept_dims, dk);
    let traced_off = offsets(&traced, &traced_dims, dt);

    let m = rho.matrix();
    let out = CMatrix::from_fn(dk, dk, |i, j| {
        traced_off
            .iter()
            .map(|&t| m[(kept_off[i] + t, kept_off[j] + t)])
            .sum::<C64>()
    });
    DensityMatrix::from_parts(hermitize(&out), kept_dims)
}

/// Reorders the tensor factors: factor `k` of the result is factor
/// `order[k]` of `rho`.
pub fn permute_subsystems(rho: &DensityMatrix, order: &[usize]) -> Result<DensityMatrix> {
    let dims = rho.subsystem_dims();
    let n = dims.len();
    let mut seen = vec![false; n];
    if order.len() != n || order.iter().any(|&k| k >= n || std::mem::replace(&mut seen[k], true)) {
        return Err(Error::Argument(format!("{order:?} is not a permutation of 0..{n}")));
    }
    let new_dims: Vec<usize> = order.iter().map(|&k| dims[k]).collect();
    let mut old_strides = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        old_strides[k] = old_strides[k + 1] * dims[k + 1];
    }
    let dim = rho.dim();
    // Old flat index of every new flat index.
    let map: Vec<usize> = (0..dim)
        .map(|mut idx| {
            let mut old = 0;
            for pos in (0..n).rev() {
                let d = new_dims[pos];
                old += (idx % d) * old_strides[order[pos]];
                idx /= d;
            }
            old
        })
        .collect();
    let m = rho.matrix();
    let out = CMatrix::from_fn(dim, dim, |i, j| m[(map[i], map[j])]);
    DensityMatrix::from_parts(out, new_dims)
}

/// Trace norm `‖ρ - σ‖₁` (sum of absolute eigenvalues, no factor 1/2).
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::Argument(format!(
            "dimension mismatch: {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let diff = rho.matrix() - sigma.matrix();
    Ok(eigh(&diff).0.iter().map(|l| l.abs()).sum())
}

/// `I(A:B) = S(ρ_A) + S(ρ_B) - S(ρ_AB)` with `A` the listed subsystems and
/// `B` the complement.
pub fn mutual_information(rho: &DensityMatrix, part_a: &[usize]) -> Result<f64> {
    let n = rho.subsystem_dims().len();
    let part_b: Vec<usize> = (0..n).filter(|k| !part_a.contains(k)).collect();
    if part_a.is_empty() || part_b.is_empty() || part_a.iter().any(|&k| k >= n) {
        return Err(Error::Argument(format!("invalid bipartition {part_a:?} of {n} subsystems")));
    }
    let s_a = von_neumann_entropy(&partial_trace(rho, part_a)?)?;
    let s_b = von_neumann_entropy(&partial_trace(rho, &part_b)?)?;
    let s_ab = von_neumann_entropy(rho)?;
    let i = s_a + s_b - s_ab;
    if i < -1e-9 {
        return Err(Error::Internal(format!("mutual information {i:e} is negative")));
    }
    Ok(i.max(0.0))
}

pub mod pauli {
    use super::CMatrix;
    use num_complex::Complex64 as C64;

    pub fn identity() -> CMatrix {
        CMatrix::identity(2, 2)
    }

    pub fn x() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[C64::new(0., 0.), C64::new(1., 0.), C64::new(1., 0.), C64::new(0., 0.)])
    }

    pub fn y() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[C64::new(0., 0.), C64::new(0., -1.), C64::new(0., 1.), C64::new(0., 0.)])
    }

    pub fn z() -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[C64::new(1., 0.), C64::new(0., 0.), C64::new(0., 0.), C64::new(-1., 0.)])
    }
}

//! Exact diagonalization of small two-local Hamiltonians, Gibbs states and
//! the area-law bound on mutual information across a cut.

use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::chain::ModelSpec;
use crate::error::{Error, Result};
use crate::hermitian::{hermiticity_error, partial_trace, pauli, spectrum_entropy, CMatrix, DensityMatrix};
use crate::oracle::{discord_single_site, DEFAULT_GRID};

pub const MAX_SITES: usize = 12;
/// Largest system for which single-site discord is computed by default.
pub const SINGLE_SITE_ORACLE_MAX_SITES: usize = 6;
/// Slack on the area-law and free-energy inequalities.
pub const AREA_LAW_TOL: f64 = 1e-9;
/// Relative gap below which levels count as degenerate ground states.
const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Geometry {
    OpenChain,
    PeriodicChain,
    /// Row-major `rows × cols` square lattice with open boundaries.
    Grid { rows: usize, cols: usize },
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Geometry::OpenChain => f.write_str("open"),
            Geometry::PeriodicChain => f.write_str("periodic"),
            Geometry::Grid { rows, cols } => write!(f, "grid({rows}x{cols})"),
        }
    }
}

impl Geometry {
    /// Bonds `(i, j)` with `i < j`, in a fixed order.
    pub fn bonds(&self, n: usize) -> Result<Vec<(usize, usize)>> {
        if n < 2 {
            return Err(Error::Argument(format!("a lattice needs at least 2 sites, got {n}")));
        }
        Ok(match *self {
            Geometry::OpenChain => (0..n - 1).map(|i| (i, i + 1)).collect(),
            Geometry::PeriodicChain => {
                if n < 3 {
                    return Err(Error::Argument("a periodic chain needs at least 3 sites".into()));
                }
                let mut b: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
                b.push((0, n - 1));
                b
            }
            Geometry::Grid { rows, cols } => {
                if rows * cols != n {
                    return Err(Error::Argument(format!("grid {rows}x{cols} does not have {n} sites")));
                }
                let mut b = Vec::new();
                for r in 0..rows {
                    for c in 0..cols {
                        let s = r * cols + c;
                        if c + 1 < cols {
                            b.push((s, s + 1));
                        }
                        if r + 1 < rows {
                            b.push((s, s + cols));
                        }
                    }
                }
                b
            }
        })
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    /// 4×4 operator on sites `i ⊗ j`, `i` the first factor.
    pub term: CMatrix,
}

#[derive(Clone, Debug)]
pub struct LatticeHamiltonian {
    n_sites: usize,
    edges: Vec<Edge>,
    geometry: Geometry,
}

impl LatticeHamiltonian {
    pub fn new(n_sites: usize, edges: Vec<Edge>, geometry: Geometry) -> Result<Self> {
        if n_sites > MAX_SITES {
            return Err(Error::Resource(format!("{n_sites} sites exceed the dense limit of {MAX_SITES}")));
        }
        for e in &edges {
            if e.i == e.j || e.i >= n_sites || e.j >= n_sites {
                return Err(Error::Validation(format!("invalid edge ({}, {}) on {n_sites} sites", e.i, e.j)));
            }
            if e.term.shape() != (4, 4) || hermiticity_error(&e.term) > 1e-12 {
                return Err(Error::Validation(format!("term on ({}, {}) is not a 4x4 Hermitian matrix", e.i, e.j)));
            }
        }
        Ok(Self { n_sites, edges, geometry })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }

    /// Dense `2^n × 2^n` matrix of `Σ h_ij`.
    pub fn matrix(&self) -> CMatrix {
        let n = self.n_sites;
        let dim = self.dim();
        let mut h = CMatrix::zeros(dim, dim);
        for e in &self.edges {
            // Bit of site k in a basis index, site 0 most significant.
            let (si, sj) = (n - 1 - e.i, n - 1 - e.j);
            let mask = (1usize << si) | (1usize << sj);
            for col in 0..dim {
                let a = ((col >> si) & 1) << 1 | ((col >> sj) & 1);
                let rest = col & !mask;
                for b in 0..4 {
                    let v = e.term[(b, a)];
                    if v == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let row = rest | ((b >> 1) << si) | ((b & 1) << sj);
                    h[(row, col)] += v;
                }
            }
        }
        h
    }

    /// Edges with exactly one end in `cut`.
    pub fn boundary(&self, cut: &[usize]) -> Vec<&Edge> {
        self.edges.iter().filter(|e| cut.contains(&e.i) != cut.contains(&e.j)).collect()
    }

    pub fn diagonalize(&self) -> Spectrum {
        let h = self.matrix();
        let real = h.iter().all(|z| z.im == 0.0);
        let (vals, vecs) = if real {
            let eig = SymmetricEigen::new(h.map(|z| z.re));
            crate::hermitian::sort_eigenpairs(
                eig.eigenvalues.iter().copied().collect(),
                eig.eigenvectors.map(|x| C64::new(x, 0.0)),
            )
        } else {
            crate::hermitian::eigh(&h)
        };
        Spectrum { energies: vals, vectors: vecs, n_sites: self.n_sites }
    }
}

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Bond operator of the model without field terms, in the sign conventions
/// whose ground states the free-fermion correlators describe.
fn bond_term(m: &ModelSpec) -> (CMatrix, f64) {
    let (x, y, z) = (pauli::x(), pauli::y(), pauli::z());
    let xx = kron(&x, &x);
    let yy = kron(&y, &y);
    let zz = kron(&z, &z);
    let c = |v: f64| C64::new(v, 0.0);
    match *m {
        ModelSpec::Xxz { delta } => (&xx + &yy + zz * c(delta), 0.0),
        ModelSpec::Xy { alpha } => (-(&xx + yy * c(alpha)), 0.0),
        ModelSpec::Tfim { h } => (-xx, h),
        ModelSpec::XyField { gamma, h } => (-(xx * c(0.5 * (1.0 + gamma)) + yy * c(0.5 * (1.0 - gamma))), h),
    }
}

/// Two-local Hamiltonian of a chain model on `n` sites. The one-site field
/// `-h σz` of every site is shared equally among its incident bonds, so the
/// total field on each site is exactly `h`.
pub fn build_chain_hamiltonian(m: &ModelSpec, n: usize, geometry: Geometry) -> Result<LatticeHamiltonian> {
    m.validate()?;
    if n > MAX_SITES {
        return Err(Error::Resource(format!("{n} sites exceed the dense limit of {MAX_SITES}")));
    }
    let bonds = geometry.bonds(n)?;
    let mut degree = vec![0usize; n];
    for &(i, j) in &bonds {
        degree[i] += 1;
        degree[j] += 1;
    }
    let (coupling, h) = bond_term(m);
    let id = pauli::identity();
    let z = pauli::z();
    let edges = bonds
        .iter()
        .map(|&(i, j)| {
            let mut term = coupling.clone();
            if h != 0.0 {
                let hi = C64::new(-h / degree[i] as f64, 0.0);
                let hj = C64::new(-h / degree[j] as f64, 0.0);
                term += kron(&z, &id) * hi + kron(&id, &z) * hj;
            }
            Edge { i, j, term }
        })
        .collect();
    LatticeHamiltonian::new(n, edges, geometry)
}

/// Eigendecomposition of a lattice Hamiltonian, reusable across temperatures.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Ascending.
    pub energies: Vec<f64>,
    pub vectors: CMatrix,
    n_sites: usize,
}

impl Spectrum {
    /// Gibbs weights `exp(-β(E_k - E_0))`, normalized. `β = ∞` spreads the
    /// weight equally over the ground space.
    pub fn weights(&self, beta: f64) -> Result<Vec<f64>> {
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::Argument(format!("beta = {beta} must be nonnegative")));
        }
        let e0 = self.energies[0];
        let raw: Vec<f64> = if beta.is_infinite() {
            let tol = DEGENERACY_TOL * e0.abs().max(1.0);
            self.energies.iter().map(|&e| if e - e0 <= tol { 1.0 } else { 0.0 }).collect()
        } else {
            self.energies.iter().map(|&e| (-beta * (e - e0)).exp()).collect()
        };
        let z: f64 = raw.iter().sum();
        Ok(raw.into_iter().map(|w| w / z).collect())
    }

    pub fn state(&self, beta: f64) -> Result<DensityMatrix> {
        let w = self.weights(beta)?;
        let dim = w.len();
        let keep: Vec<usize> = (0..dim).filter(|&k| w[k] > 0.0).collect();
        let v = CMatrix::from_fn(dim, keep.len(), |i, k| self.vectors[(i, keep[k])]);
        let vw = CMatrix::from_fn(dim, keep.len(), |i, k| v[(i, k)] * w[keep[k]]);
        let rho = vw * v.adjoint();
        let trace = rho.trace().re;
        DensityMatrix::from_parts(rho / C64::new(trace, 0.0), vec![2; self.n_sites])
    }

    /// `tr(Hρ)` and `S(ρ)` of the Gibbs state.
    pub fn energy_entropy(&self, beta: f64) -> Result<(f64, f64)> {
        let w = self.weights(beta)?;
        let e = w.iter().zip(&self.energies).map(|(p, e)| p * e).sum();
        Ok((e, spectrum_entropy(&w)?))
    }
}

/// `ρ = e^{-βH} / tr e^{-βH}`.
pub fn thermal_state(h: &LatticeHamiltonian, beta: f64) -> Result<DensityMatrix> {
    h.diagonalize().state(beta)
}

/// Frobenius norm of a term.
pub fn schatten2(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn validate_cut(h: &LatticeHamiltonian, cut: &[usize]) -> Result<Vec<usize>> {
    let mut c = cut.to_vec();
    c.sort_unstable();
    c.dedup();
    if c.is_empty() || c.len() >= h.n_sites() || c.iter().any(|&s| s >= h.n_sites()) {
        return Err(Error::Argument(format!("cut {cut:?} is not a nonempty proper subset of 0..{}", h.n_sites())));
    }
    Ok(c)
}

/// `2β|∂A| max_{(i,j)∈∂A} ‖h_ij‖₂`, zero for a cut with no boundary.
pub fn area_law_bound(h: &LatticeHamiltonian, cut: &[usize], beta: f64) -> Result<f64> {
    let cut = validate_cut(h, cut)?;
    let boundary = h.boundary(&cut);
    if boundary.is_empty() || beta == 0.0 {
        return Ok(0.0);
    }
    let max_norm = boundary.iter().map(|e| schatten2(&e.term)).fold(0.0, f64::max);
    Ok(2.0 * beta * boundary.len() as f64 * max_norm)
}

/// All blocks `[i, j)` of consecutive site labels except the full system.
pub fn contiguous_cuts(n: usize) -> Vec<Vec<usize>> {
    let mut cuts = Vec::new();
    for i in 0..n {
        for j in i + 1..=n {
            if j - i < n {
                cuts.push((i..j).collect());
            }
        }
    }
    cuts
}

#[derive(Clone, Debug)]
pub struct AreaLawCheck {
    pub beta: f64,
    pub cut: Vec<usize>,
    pub boundary_size: usize,
    pub max_term_norm: f64,
    pub bound: f64,
    pub mutual_info: f64,
    /// `D ≤ I`, so the mutual information bounds the discord.
    pub discord_upper: f64,
    /// `β Σ_{∂A} tr[h_ij(ρ_i ⊗ ρ_j - ρ_ij)]`, between `I` and the bound.
    pub intermediate_bound: f64,
    /// `F(ρ_A ⊗ ρ_B) - F(ρ)`, absent at `β = 0` and `β = ∞`.
    pub free_energy_gap: Option<f64>,
    /// Oracle discord with B the complement of the cut, when it is one site.
    pub single_site_discord: Option<f64>,
    pub satisfied: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    /// Compute the oracle discord for single-site B on systems up to this size.
    pub single_site_max_sites: usize,
    pub grid: (usize, usize),
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { single_site_max_sites: SINGLE_SITE_ORACLE_MAX_SITES, grid: DEFAULT_GRID }
    }
}

pub fn check_area_law(h: &LatticeHamiltonian, cut: &[usize], beta: f64) -> Result<AreaLawCheck> {
    let spectrum = h.diagonalize();
    check_area_law_with(h, &spectrum, cut, beta, CheckOptions::default())
}

/// As [`check_area_law`] with a precomputed spectrum.
pub fn check_area_law_with(
    h: &LatticeHamiltonian,
    spectrum: &Spectrum,
    cut: &[usize],
    beta: f64,
    opts: CheckOptions,
) -> Result<AreaLawCheck> {
    let cut = validate_cut(h, cut)?;
    let n = h.n_sites();
    let rest: Vec<usize> = (0..n).filter(|s| !cut.contains(s)).collect();
    let rho = spectrum.state(beta)?;
    let (energy, entropy) = spectrum.energy_entropy(beta)?;
    let s_a = crate::hermitian::von_neumann_entropy(&partial_trace(&rho, &cut)?)?;
    let s_b = crate::hermitian::von_neumann_entropy(&partial_trace(&rho, &rest)?)?;
    let mi = s_a + s_b - entropy;
    if mi < -AREA_LAW_TOL {
        return Err(Error::Internal(format!("mutual information {mi:e} is negative")));
    }
    let mi = mi.max(0.0);

    let boundary = h.boundary(&cut);
    let max_term_norm = boundary.iter().map(|e| schatten2(&e.term)).fold(0.0, f64::max);
    let bound = if boundary.is_empty() || beta == 0.0 { 0.0 } else { 2.0 * beta * boundary.len() as f64 * max_term_norm };

    // Energy change on replacing ρ by ρ_A ⊗ ρ_B only involves boundary bonds.
    let mut delta_e = 0.0;
    for e in &boundary {
        let pair = oriented_marginal(&rho, e.i, e.j)?;
        let ri = partial_trace(&rho, &[e.i])?;
        let rj = partial_trace(&rho, &[e.j])?;
        let product = kron(ri.matrix(), rj.matrix());
        delta_e += ((&e.term * (product - pair)).trace()).re;
    }
    let finite = beta > 0.0 && beta.is_finite();
    let intermediate_bound = if finite { beta * delta_e } else if beta == 0.0 { 0.0 } else { f64::INFINITY };
    let free_energy_gap = finite.then(|| {
        let f_rho = energy - entropy / beta;
        let f_prod = energy + delta_e - (s_a + s_b) / beta;
        f_prod - f_rho
    });

    let single_site_discord = if rest.len() == 1 && n <= opts.single_site_max_sites {
        Some(discord_single_site(&rho, rest[0], opts.grid)?.discord)
    } else {
        None
    };

    let mut satisfied = mi <= bound + AREA_LAW_TOL;
    if let Some(gap) = free_energy_gap {
        satisfied &= gap >= -AREA_LAW_TOL;
    }
    if let Some(d) = single_site_discord {
        satisfied &= d <= mi + AREA_LAW_TOL;
    }
    Ok(AreaLawCheck {
        beta,
        cut,
        boundary_size: boundary.len(),
        max_term_norm,
        bound,
        mutual_info: mi,
        discord_upper: mi,
        intermediate_bound,
        free_energy_gap,
        single_site_discord,
        satisfied,
    })
}

/// Two-site marginal with site `i` as the first factor.
fn oriented_marginal(rho: &DensityMatrix, i: usize, j: usize) -> Result<CMatrix> {
    let m = partial_trace(rho, &[i, j])?.into_matrix();
    if i < j {
        return Ok(m);
    }
    let swap = DMatrix::from_fn(4, 4, |r, c| {
        let swapped = ((c & 1) << 1) | (c >> 1);
        C64::new(if r == swapped { 1.0 } else { 0.0 }, 0.0)
    });
    Ok(&swap * m * &swap)
}

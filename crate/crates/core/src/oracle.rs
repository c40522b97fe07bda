//! Discord by direct optimization over projective measurements on a qubit.
//!
//! The measured party B is a single qubit; A may be any dimension. The
//! objective `Σ p_i S(ρ_A^i)` is minimized over the Bloch sphere of B.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermitian::{eigh, hermitize, partial_trace, permute_subsystems, spectrum_entropy, von_neumann_entropy, CMatrix, DensityMatrix};
use crate::real::{binary_entropy, xlogx_neg};

/// Default coarse grid over (θ, φ).
pub const DEFAULT_GRID: (usize, usize) = (64, 128);
/// Refinement stops once the line-search bracket is below this angle.
pub const ANGLE_TOL: f64 = 1e-7;
/// Outcomes less likely than this are dropped.
const MIN_PROBABILITY: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementAngles {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) || !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::Argument(format!("angles ({theta}, {phi}) out of range")));
        }
        Ok(Self { theta, phi })
    }

    /// Bloch direction `(sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Representative with θ in [0, π/2]; antipodal directions define the
    /// same measurement. φ is reset to 0 at the poles.
    pub fn canonical(theta: f64, phi: f64) -> Self {
        let two_pi = 2.0 * PI;
        let mut t = theta.rem_euclid(two_pi);
        let mut p = phi;
        if t > PI {
            t = two_pi - t;
            p += PI;
        }
        if t > FRAC_PI_2 {
            t = PI - t;
            p += PI;
        }
        p = p.rem_euclid(two_pi);
        if p >= two_pi {
            p = 0.0;
        }
        if t < 1e-12 {
            p = 0.0;
        }
        Self { theta: t, phi: p }
    }
}

/// Which qubit of a two-qubit state is measured.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MeasuredQubit {
    First,
    #[default]
    Second,
}

#[derive(Clone, Debug)]
pub struct DiscordResult {
    pub discord: f64,
    pub classical_correlation: f64,
    pub mutual_information: f64,
    pub argmin: MeasurementAngles,
    pub grid_resolution: (usize, usize),
    /// Minimized `Σ p_i S(ρ_A^i)`.
    pub min_conditional_entropy: f64,
}

/// `Π± = (I ± n·σ)/2`.
pub fn measurement_projectors(m: &MeasurementAngles) -> [CMatrix; 2] {
    let [nx, ny, nz] = m.direction();
    let proj = |s: f64| {
        CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.5 * (1.0 + s * nz), 0.0),
                C64::new(0.5 * s * nx, -0.5 * s * ny),
                C64::new(0.5 * s * nx, 0.5 * s * ny),
                C64::new(0.5 * (1.0 - s * nz), 0.0),
            ],
        )
    };
    [proj(1.0), proj(-1.0)]
}

/// Splits a state on A ⊗ qubit into the four A-blocks `ρ^{bb'}`.
struct Blocks {
    dim_a: usize,
    blocks: [[CMatrix; 2]; 2],
}

impl Blocks {
    fn new(rho: &DensityMatrix) -> Result<Self> {
        let dims = rho.subsystem_dims();
        if dims.len() < 2 || *dims.last().unwrap() != 2 {
            return Err(Error::Dimension(format!(
                "measured subsystem must be a trailing qubit, got dimensions {dims:?}"
            )));
        }
        let dim_a = rho.dim() / 2;
        let m = rho.matrix();
        let block = |b: usize, bp: usize| CMatrix::from_fn(dim_a, dim_a, |i, j| m[(2 * i + b, 2 * j + bp)]);
        Ok(Self { dim_a, blocks: [[block(0, 0), block(0, 1)], [block(1, 0), block(1, 1)]] })
    }

    fn conditional_entropy(&self, m: &MeasurementAngles) -> f64 {
        let mut total = 0.0;
        for pi in measurement_projectors(m) {
            // tr_B[(I ⊗ Π) ρ] = Σ_{b,b''} Π_{b b''} ρ^{b'' b}
            let mut unnorm = CMatrix::zeros(self.dim_a, self.dim_a);
            for b in 0..2 {
                for bpp in 0..2 {
                    unnorm += &self.blocks[bpp][b] * pi[(b, bpp)];
                }
            }
            let p = unnorm.trace().re;
            if p < MIN_PROBABILITY {
                continue;
            }
            total += p * normalized_entropy(&unnorm, p);
        }
        total
    }
}

fn normalized_entropy(m: &CMatrix, p: f64) -> f64 {
    if m.nrows() == 2 {
        let d = (m[(0, 0)].re - m[(1, 1)].re) / p;
        let off = m[(0, 1)].norm() / p;
        let r = (d * d + 4.0 * off * off).sqrt().min(1.0);
        return binary_entropy(&(0.5 + 0.5 * r));
    }
    let evals = hermitize(&(m / C64::new(p, 0.0))).symmetric_eigenvalues();
    evals.iter().map(|l| xlogx_neg(&l.max(0.0))).sum()
}

/// `Σ p_i S(ρ_A^i)` after measuring the trailing qubit along `m`.
pub fn measured_conditional_entropy(rho: &DensityMatrix, m: &MeasurementAngles) -> Result<f64> {
    Ok(Blocks::new(rho)?.conditional_entropy(m))
}

fn oriented(rho: &DensityMatrix, measured: MeasuredQubit) -> Result<DensityMatrix> {
    if rho.subsystem_dims() != [2, 2] {
        return Err(Error::Dimension(format!("expected a two-qubit state, got {:?}", rho.subsystem_dims())));
    }
    match measured {
        MeasuredQubit::Second => Ok(rho.clone()),
        MeasuredQubit::First => permute_subsystems(rho, &[1, 0]),
    }
}

/// Two-qubit discord with measurement on the second qubit.
pub fn discord_numeric(rho: &DensityMatrix, grid: (usize, usize)) -> Result<DiscordResult> {
    discord_numeric_on(rho, grid, MeasuredQubit::Second)
}

pub fn discord_numeric_on(rho: &DensityMatrix, grid: (usize, usize), measured: MeasuredQubit) -> Result<DiscordResult> {
    discord_trailing_qubit(&oriented(rho, measured)?, grid)
}

pub fn classical_correlation(rho: &DensityMatrix) -> Result<f64> {
    Ok(discord_numeric(rho, DEFAULT_GRID)?.classical_correlation)
}

/// Discord for a fixed (not optimized) measurement on the second qubit.
pub fn discord_for_measurement(rho: &DensityMatrix, m: &MeasurementAngles) -> Result<f64> {
    let rho = oriented(rho, MeasuredQubit::Second)?;
    let s_b = von_neumann_entropy(&partial_trace(&rho, &[1])?)?;
    let s_ab = von_neumann_entropy(&rho)?;
    Ok(s_b - s_ab + measured_conditional_entropy(&rho, m)?)
}

/// Discord of an n-qudit state with B the single qubit `site` and A the rest.
pub fn discord_single_site(rho: &DensityMatrix, site: usize, grid: (usize, usize)) -> Result<DiscordResult> {
    let n = rho.subsystem_dims().len();
    if site >= n || n < 2 {
        return Err(Error::Argument(format!("site {site} out of range for {n} subsystems")));
    }
    let order: Vec<usize> = (0..n).filter(|&k| k != site).chain(std::iter::once(site)).collect();
    let moved = if site == n - 1 { rho.clone() } else { permute_subsystems(rho, &order)? };
    discord_trailing_qubit(&moved, grid)
}

fn discord_trailing_qubit(rho: &DensityMatrix, grid: (usize, usize)) -> Result<DiscordResult> {
    let (n_theta, n_phi) = grid;
    if n_theta < 2 || n_phi < 1 {
        return Err(Error::Argument(format!("grid {grid:?} is too coarse")));
    }
    let blocks = Blocks::new(rho)?;
    let n = rho.subsystem_dims().len();
    let a_sites: Vec<usize> = (0..n - 1).collect();
    let s_a = von_neumann_entropy(&partial_trace(rho, &a_sites)?)?;
    let s_b = von_neumann_entropy(&partial_trace(rho, &[n - 1])?)?;
    let s_ab = spectrum_entropy(&eigh(rho.matrix()).0)?;

    let f = |t: f64, p: f64| blocks.conditional_entropy(&MeasurementAngles { theta: t, phi: p });
    let d_theta = FRAC_PI_2 / (n_theta - 1) as f64;
    let d_phi = 2.0 * PI / n_phi as f64;
    let values: Vec<f64> = (0..n_theta * n_phi)
        .into_par_iter()
        .map(|k| f((k / n_phi) as f64 * d_theta, (k % n_phi) as f64 * d_phi))
        .collect();
    // First strict minimum in (θ, φ) order.
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = k;
        }
    }
    let mut theta = (best / n_phi) as f64 * d_theta;
    let mut phi = (best % n_phi) as f64 * d_phi;
    let mut fmin = values[best];

    let mut delta = d_theta.max(d_phi);
    while delta >= ANGLE_TOL {
        let (t, ft) = golden_section(|x| f(x, phi), theta - delta, theta + delta, delta * 1e-3);
        if ft < fmin {
            theta = t;
            fmin = ft;
        }
        let (p, fp) = golden_section(|x| f(theta, x), phi - delta, phi + delta, delta * 1e-3);
        if fp < fmin {
            phi = p;
            fmin = fp;
        }
        delta *= 0.5;
    }

    let discord = s_b - s_ab + fmin;
    let classical = s_a - fmin;
    let mutual = s_a + s_b - s_ab;
    if discord < -1e-9 {
        return Err(Error::Internal(format!("numeric discord {discord:e} is negative")));
    }
    Ok(DiscordResult {
        discord: discord.max(0.0),
        classical_correlation: classical,
        mutual_information: mutual,
        argmin: MeasurementAngles::canonical(theta, phi),
        grid_resolution: grid,
        min_conditional_entropy: fmin,
    })
}

/// Minimum of a unimodal function on `[a, b]`.
fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

//! Exact ground-state correlators of free-fermion chains from Toeplitz
//! determinants of the fermion two-point function.
//!
//! With `g(θ) = (h + cos θ) + iγ sin θ` the symbol is `ν = g/|g|` and
//! `G(n) = (1/2π) ∫ e^{-inθ} ν(θ) dθ`, which is real.

use std::collections::HashMap;
use std::f64::consts::PI;

use rayon::prelude::*;

use super::ModelSpec;
use crate::error::{Error, Result};
use crate::quadrature::integrate_pieces;
use crate::real::{Mp, Real, MP_PRECISION_BITS};
use crate::xstate::PairCorrelators;

/// Largest separation for exact correlators.
pub const MAX_EXACT_R: usize = 512;
/// `⟨σxσx⟩(r) = det[G(i - j + XX_OFFSET)]` and `⟨σyσy⟩(r)` uses the opposite
/// offset. Fixed by requiring `⟨σxσx⟩ → (1-h²)^{1/4}` in the ordered TFIM
/// phase (see tests).
pub const XX_OFFSET: i64 = 1;

const MOMENT_ABS_TOL: f64 = 1e-13;
const MAX_TRAPEZOID_POINTS: usize = 1 << 16;

fn params(m: &ModelSpec) -> Result<(f64, f64)> {
    m.validate()?;
    m.free_fermion()
        .ok_or_else(|| Error::Unsupported(format!("{m} has no free-fermion solution")))
}

/// Quadrature breakpoints on `[0, π]`: the symbol jumps where `g = 0` on the
/// real axis, which happens only for `γ = 0`.
fn breakpoints(gamma: f64, h: f64) -> Vec<f64> {
    if gamma == 0.0 && h <= 1.0 {
        vec![0.0, (-h).acos(), PI]
    } else {
        vec![0.0, PI]
    }
}

fn moment_f64(gamma: f64, h: f64, n: i64) -> Result<f64> {
    let nf = n as f64;
    let f = |t: f64| {
        let (s, c) = t.sin_cos();
        let re = h + c;
        let im = gamma * s;
        let norm = re.hypot(im);
        if norm == 0.0 {
            return 0.0;
        }
        ((nf * t).cos() * re + (nf * t).sin() * im) / norm
    };
    // Oscillatory integrands: pre-split into roughly one piece per period.
    let base = breakpoints(gamma, h);
    let per = (n.unsigned_abs() as usize / 2).clamp(1, 256);
    let mut pts = Vec::with_capacity(base.len() * per);
    for w in base.windows(2) {
        for k in 0..per {
            pts.push(w[0] + (w[1] - w[0]) * k as f64 / per as f64);
        }
    }
    pts.push(PI);
    Ok(integrate_pieces(f, &pts, MOMENT_ABS_TOL, 0.0)?.value / PI)
}

/// `G(n)` by adaptive quadrature.
pub fn fermion_moment(m: &ModelSpec, n: i64) -> Result<f64> {
    let (gamma, h) = params(m)?;
    moment_f64(gamma, h, n)
}

/// `⟨σz⟩ = G(0)`.
pub fn magnetization(m: &ModelSpec) -> Result<f64> {
    fermion_moment(m, 0)
}

/// `G(n)` for `|n| ≤ n_max`.
#[derive(Clone, Debug)]
pub struct MomentTable<T> {
    n_max: i64,
    values: Vec<T>,
}

impl<T: Real> MomentTable<T> {
    pub fn get(&self, n: i64) -> T {
        assert!(n.abs() <= self.n_max, "moment {n} outside table of size {}", self.n_max);
        self.values[(n + self.n_max) as usize].clone()
    }

    pub fn n_max(&self) -> i64 {
        self.n_max
    }

    /// Exact correlators at separation `r` (needs `n_max ≥ r + 1`).
    pub fn correlators(&self, r: usize) -> PairCorrelators<T> {
        let r_i = r as i64;
        let g0 = self.get(0);
        let xx = toeplitz_det(r, |k| self.get(k + XX_OFFSET));
        let yy = toeplitz_det(r, |k| self.get(k - XX_OFFSET));
        let zz = g0.clone() * g0.clone() - self.get(r_i) * self.get(-r_i);
        PairCorrelators::symmetric(g0, xx, yy, zz)
    }
}

impl MomentTable<f64> {
    /// Moments by adaptive quadrature.
    pub fn new(m: &ModelSpec, n_max: usize) -> Result<Self> {
        let (gamma, h) = params(m)?;
        let n_max = n_max as i64;
        let values = (-n_max..=n_max)
            .into_par_iter()
            .map(|n| moment_f64(gamma, h, n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n_max, values })
    }
}

impl MomentTable<Mp> {
    /// Moments in extended precision by the trapezoid rule on the full
    /// period, doubling the grid until successive results agree to working
    /// precision. Gapped models only: the symbol must be analytic.
    pub fn new_mp(m: &ModelSpec, n_max: usize) -> Result<Self> {
        let (gamma, h) = params(m)?;
        if (h - 1.0).abs() < 1e-9 || gamma == 0.0 {
            return Err(Error::Unsupported(format!(
                "extended-precision moments need a gapped model, got {m}"
            )));
        }
        let n_max = n_max as i64;
        let tol = Mp::new(2f64.powi(-(MP_PRECISION_BITS as i32) + 24));
        let mut points = (4 * (n_max as usize + 1)).next_power_of_two().max(256);
        let mut prev = trapezoid_moments(gamma, h, n_max, points);
        loop {
            points *= 2;
            if points > MAX_TRAPEZOID_POINTS {
                return Err(Error::Domain(format!(
                    "trapezoid moments for {m} did not converge with {MAX_TRAPEZOID_POINTS} points"
                )));
            }
            let next = trapezoid_moments(gamma, h, n_max, points);
            let change = prev
                .iter()
                .zip(&next)
                .map(|(a, b)| (a.clone() - b.clone()).abs())
                .fold(Mp::zero(), Real::max_of);
            prev = next;
            if change < tol {
                return Ok(Self { n_max, values: prev });
            }
        }
    }
}

fn trapezoid_moments(gamma: f64, h: f64, n_max: i64, points: usize) -> Vec<Mp> {
    let step = Mp::pi() * Mp::new(2.0) / Mp::from_i64(points as i64);
    let (cos_t, sin_t): (Vec<Mp>, Vec<Mp>) = (0..points)
        .into_par_iter()
        .map(|k| {
            let t = step.clone() * Mp::from_i64(k as i64);
            (t.cos(), t.sin())
        })
        .unzip();
    let (g, hh) = (Mp::new(gamma), Mp::new(h));
    let nu: Vec<(Mp, Mp)> = (0..points)
        .into_par_iter()
        .map(|k| {
            let re = hh.clone() + cos_t[k].clone();
            let im = g.clone() * sin_t[k].clone();
            let norm = (re.clone() * re.clone() + im.clone() * im.clone()).sqrt();
            (re / norm.clone(), im / norm)
        })
        .collect();
    let inv_n = Mp::one() / Mp::from_i64(points as i64);
    (-n_max..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut acc = Mp::zero();
            for (k, (re, im)) in nu.iter().enumerate() {
                let idx = (n.rem_euclid(points as i64) as usize * k) % points;
                acc = acc + cos_t[idx].clone() * re.clone() + sin_t[idx].clone() * im.clone();
            }
            acc * inv_n.clone()
        })
        .collect()
}

/// Determinant of the `r × r` Toeplitz matrix `T_ij = t(i - j)` by LU with
/// partial pivoting. `r = 0` gives 1.
pub fn toeplitz_det<T: Real>(r: usize, t: impl Fn(i64) -> T) -> T {
    let mut cache: HashMap<i64, T> = HashMap::new();
    let mut a: Vec<Vec<T>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let k = i as i64 - j as i64;
                    cache.entry(k).or_insert_with(|| t(k)).clone()
                })
                .collect()
        })
        .collect();
    lu_det(&mut a)
}

fn lu_det<T: Real>(a: &mut [Vec<T>]) -> T {
    let n = a.len();
    let mut det = T::one();
    for col in 0..n {
        let mut piv = col;
        let mut best = a[col][col].abs();
        for row in col + 1..n {
            let v = a[row][col].abs();
            if v > best {
                best = v;
                piv = row;
            }
        }
        if !best.is_positive() {
            return T::zero();
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = det * p.clone();
        let (top, rest) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for row in rest.iter_mut() {
            let factor = row[col].clone() / p.clone();
            if !factor.is_positive() && !(-factor.clone()).is_positive() {
                continue;
            }
            for k in col + 1..n {
                row[k] = row[k].clone() - factor.clone() * pivot_row[k].clone();
            }
        }
    }
    det
}

fn check_r(r: usize) -> Result<()> {
    if r == 0 || r > MAX_EXACT_R {
        return Err(Error::Argument(format!("separation r = {r} must be in 1..={MAX_EXACT_R}")));
    }
    Ok(())
}

/// Exact correlators at separation `r` in double precision.
pub fn exact_correlators(m: &ModelSpec, r: usize) -> Result<PairCorrelators> {
    check_r(r)?;
    Ok(MomentTable::new(m, r + 1)?.correlators(r))
}

/// Exact correlators at separation `r` in extended precision (gapped only).
pub fn exact_correlators_mp(m: &ModelSpec, r: usize) -> Result<PairCorrelators<Mp>> {
    check_r(r)?;
    Ok(MomentTable::new_mp(m, r + 1)?.correlators(r))
}

//! Amplitudes of the asymptotic correlators and discord.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::quadrature::integrate;

/// Glaisher-Kinkelin constant.
pub const GLAISHER: f64 = 1.282_427_129_100_622_6;

/// Below this `x` the XXZ integrands are replaced by their Taylor series.
const SERIES_CUTOFF: f64 = 1e-4;
/// Tail size at which the XXZ integrals are truncated.
const TAIL_TOL: f64 = 1e-16;
/// Below this `|sz|` the closed form of `A_1` is replaced by its series.
const A1_SERIES_CUTOFF: f64 = 1e-2;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PrefactorSet {
    pub a_z: Option<f64>,
    pub a_x: Option<f64>,
    pub a_1: Option<f64>,
    pub a_2: Option<f64>,
    pub a_3: Option<f64>,
    pub a_4: Option<f64>,
    pub glaisher: f64,
}

/// `exp(-(2-2η)x)`-type ratio `sinh(ηx) / (sinh x cosh((1-η)x))` in a form
/// that does not overflow for large `x`.
fn ratio_x(eta: f64, x: f64) -> f64 {
    if x < 1.0 {
        (eta * x).sinh() / (x.sinh() * ((1.0 - eta) * x).cosh())
    } else {
        2.0 * (-(2.0 - 2.0 * eta) * x).exp() * (1.0 - (-2.0 * eta * x).exp())
            / ((1.0 - (-2.0 * x).exp()) * (1.0 + (-2.0 * (1.0 - eta) * x).exp()))
    }
}

/// `sinh((2η-1)x) / (sinh(ηx) cosh((1-η)x))`, overflow-safe.
fn ratio_z(eta: f64, x: f64) -> f64 {
    let m = 2.0 * eta - 1.0;
    if x < 1.0 {
        (m * x).sinh() / ((eta * x).sinh() * ((1.0 - eta) * x).cosh())
    } else {
        m.signum() * 2.0 * ((m.abs() - 1.0) * x).exp() * (1.0 - (-2.0 * m.abs() * x).exp())
            / ((1.0 - (-2.0 * eta * x).exp()) * (1.0 + (-2.0 * (1.0 - eta) * x).exp()))
    }
}

fn integrand_x(eta: f64, x: f64) -> f64 {
    if x < SERIES_CUTOFF {
        let g2 = eta * (eta * eta - 1.0) / 6.0 - eta * (1.0 - eta).powi(2) / 2.0;
        return -2.0 * eta + (2.0 * eta - g2) * x - 4.0 / 3.0 * eta * x * x;
    }
    (eta * (-2.0 * x).exp() - ratio_x(eta, x)) / x
}

fn integrand_z(eta: f64, x: f64) -> f64 {
    let k0 = (2.0 * eta - 1.0) / eta;
    if x < SERIES_CUTOFF {
        let m = 2.0 * eta - 1.0;
        let k2 = k0 * ((m * m - eta * eta) / 6.0 - (1.0 - eta).powi(2) / 2.0);
        return 2.0 * k0 + (k2 - 2.0 * k0) * x + 4.0 / 3.0 * k0 * x * x;
    }
    (ratio_z(eta, x) - k0 * (-2.0 * x).exp()) / x
}

/// `∫_0^∞ f` split at 1 and at doubling points until the integrand and the
/// remaining exponential tail are negligible.
fn improper_integral(f: impl Fn(f64) -> f64, decay_rate: f64) -> Result<f64> {
    let tol = 1e-12;
    let mut total = integrate(&f, 0.0, 1.0, tol, 0.0)?.value;
    let mut lo = 1.0;
    loop {
        let hi = 2.0 * lo;
        total += integrate(&f, lo, hi, tol, 0.0)?.value;
        lo = hi;
        let tail = f(lo).abs() / decay_rate.max(1e-3);
        if tail < TAIL_TOL {
            return Ok(total);
        }
        if lo > 1e6 {
            return Err(Error::Domain("improper integral tail did not decay".into()));
        }
    }
}

/// `(A_z, A_x)` of the critical XXZ chain with `η = arccos(-Δ)/π`.
pub fn xxz_prefactors(eta: f64) -> Result<(f64, f64)> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::Argument(format!("eta = {eta} is outside (0, 1)")));
    }
    let g1 = ln_gamma(eta / (2.0 - 2.0 * eta));
    let g2 = ln_gamma(1.0 / (2.0 - 2.0 * eta));
    let rate_x = (2.0 - 2.0 * eta).min(2.0);
    let rate_z = (1.0 - (2.0 * eta - 1.0).abs()).min(2.0);
    let ix = improper_integral(|x| integrand_x(eta, x), rate_x)?;
    let iz = improper_integral(|x| integrand_z(eta, x), rate_z)?;
    let ln_ax = (-1.0 - eta) * 2f64.ln() - 0.5 * eta * PI.ln() - 2.0 * (1.0 - eta).ln() + eta * (g1 - g2) + ix;
    let ln_az = (3.0 - 1.0 / eta) * 2f64.ln() + (-0.5 / eta - 2.0) * PI.ln() + (g1 - g2) / eta + iz;
    Ok((ln_az.exp(), ln_ax.exp()))
}

/// `A_1(sz)`, the coefficient of `xx²` in the discord of a weakly
/// correlated pair.
pub fn a1_prefactor(sz: f64) -> Result<f64> {
    if !(sz.abs() < 1.0) {
        return Err(Error::Domain(format!("|sz| = {} must be below 1", sz.abs())));
    }
    if sz.abs() < A1_SERIES_CUTOFF {
        // Σ_k k/(2(2k+1)) sz^{2k}
        let s2 = sz * sz;
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..=10 {
            term *= s2;
            let k = k as f64;
            sum += term * k / (2.0 * (2.0 * k + 1.0));
        }
        return Ok(sum);
    }
    Ok(0.25 / (1.0 - sz * sz) + ((1.0 - sz) / (1.0 + sz)).ln() / (8.0 * sz))
}

fn checked_ln(x: f64, what: &str) -> Result<f64> {
    if x > 0.0 && x.is_finite() {
        Ok(x.ln())
    } else {
        Err(Error::Domain(format!("logarithm argument {what} = {x} is not positive")))
    }
}

/// `(A_1, A_2, A_3)` for magnetization `sz` and long-range order `xx_inf`.
pub fn field_prefactors(sz: f64, xx_inf: f64) -> Result<(f64, f64, f64)> {
    let a1 = a1_prefactor(sz)?;
    if xx_inf == 0.0 {
        return Ok((a1, 0.0, 0.0));
    }
    let (w, s2) = (xx_inf, sz * sz);
    let q4 = (w * w + 4.0 * s2).sqrt();
    let q1 = (w * w + s2).sqrt();
    let l0 = checked_ln(1.0 + w - s2, "1 + xx_inf - sz²")? - checked_ln(1.0 - w - s2, "1 - xx_inf - sz²")?;
    let l4 = checked_ln(1.0 + s2 + q4, "1 + sz² + q")? - checked_ln(1.0 + s2 - q4, "1 + sz² - q")?;
    let l1 = checked_ln(1.0 - q1, "1 - q")? - checked_ln(1.0 + q1, "1 + q")?;
    let a2 = 0.25 * l0 + w / (4.0 * q4) * l4 + w / (2.0 * q1) * l1;
    let a3 = 0.25 * l0 - w / (4.0 * q4) * l4;
    Ok((a1, a2, a3))
}

/// The parameter `λ = (h - √(γ² + h² - 1))/(1 - γ)` of the XY chain in a
/// field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LambdaParam {
    Real(f64),
    /// Inner ferromagnetic regime, where the radicand is negative.
    Oscillatory { value: C64, modulus: f64 },
}

impl LambdaParam {
    pub fn modulus(&self) -> f64 {
        match *self {
            LambdaParam::Real(x) => x.abs(),
            LambdaParam::Oscillatory { modulus, .. } => modulus,
        }
    }

    pub fn complex(&self) -> C64 {
        match *self {
            LambdaParam::Real(x) => C64::new(x, 0.0),
            LambdaParam::Oscillatory { value, .. } => value,
        }
    }
}

/// `γ = 1` uses the limit `1/h`.
pub fn lambda_param(gamma: f64, h: f64) -> LambdaParam {
    if gamma >= 1.0 {
        return LambdaParam::Real(1.0 / h);
    }
    let rad = gamma * gamma + h * h - 1.0;
    if rad >= 0.0 {
        LambdaParam::Real((h - rad.sqrt()) / (1.0 - gamma))
    } else {
        let value = C64::new(h, -(-rad).sqrt()) / (1.0 - gamma);
        LambdaParam::Oscillatory { value, modulus: ((1.0 + gamma) / (1.0 - gamma)).sqrt() }
    }
}

/// `A_4 / A_3`, finite even where `A_3` vanishes.
pub(crate) fn a4_over_a3(gamma: f64, h: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::Argument(format!("A_4 needs 0 < gamma < 1, got {gamma}")));
    }
    if !(h >= 0.0 && h * h < 1.0 - gamma * gamma) {
        return Err(Error::Argument(format!("A_4 needs 0 <= h < sqrt(1 - gamma²), got h = {h}")));
    }
    let lam = lambda_param(gamma, h).complex();
    let den = ((1.0 - gamma) * lam * lam + (1.0 + gamma) / (lam * lam) - 2.0).norm();
    if den < 1e-12 {
        return Err(Error::Singularity(format!("A_4 denominator {den:e} vanishes")));
    }
    Ok(4.0 / PI * gamma.powf(-0.5) / (1.0 - gamma) * (1.0 - h * h).powf(0.25) * (1.0 - gamma * gamma - h * h) / den)
}

/// `A_4` for the inner ferromagnetic regime of the XY chain in a field.
pub fn a4_prefactor(gamma: f64, h: f64, a3: f64) -> Result<f64> {
    Ok(a4_over_a3(gamma, h)? * a3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn glaisher_digits() {
        assert!((GLAISHER - 1.2824271291).abs() < 1e-10);
    }

    #[test]
    fn series_matches_integrands_near_cutoff() {
        for eta in [0.2, 0.5, 0.8] {
            let x = SERIES_CUTOFF * 0.999_999;
            let direct_x = (eta * (-2.0 * x).exp() - ratio_x(eta, x)) / x;
            let k0 = (2.0 * eta - 1.0) / eta;
            let direct_z = (ratio_z(eta, x) - k0 * (-2.0 * x).exp()) / x;
            assert!((integrand_x(eta, x) - direct_x).abs() < 1e-10);
            assert!((integrand_z(eta, x) - direct_z).abs() < 1e-10);
        }
    }

    #[test]
    fn stable_ratios_match_direct_forms() {
        for eta in [0.1f64, 0.5, 0.9] {
            for x in [1.0f64, 3.0, 10.0] {
                let dx = (eta * x).sinh() / (x.sinh() * ((1.0 - eta) * x).cosh());
                let dz = ((2.0 * eta - 1.0) * x).sinh() / ((eta * x).sinh() * ((1.0 - eta) * x).cosh());
                assert!((ratio_x(eta, x) - dx).abs() < 1e-14 * dx.abs().max(1.0));
                assert!((ratio_z(eta, x) - dz).abs() < 1e-14 * dz.abs().max(1.0));
            }
        }
    }

    #[test]
    fn xxz_prefactors_at_free_fermion_point() {
        // At η = 1/2 the zz amplitude is 2/π² exactly.
        let (az, ax) = xxz_prefactors(0.5).unwrap();
        assert!((az - 2.0 / (PI * PI)).abs() < 1e-9);
        assert!((ax - 0.588_352_664_197_678).abs() < 1e-9);
    }

    #[test]
    fn xxz_prefactor_regression() {
        // Independent arbitrary-precision evaluation of the same integrals.
        for (eta, ax, az) in [(0.3, 0.635984058, 0.054765630), (0.7, 0.527636500, 0.491682527), (0.9, 0.562441586, 1.293895791)] {
            let (z, x) = xxz_prefactors(eta).unwrap();
            assert!((x - ax).abs() < 1e-8, "A_x({eta}) = {x}");
            assert!((z - az).abs() < 1e-8, "A_z({eta}) = {z}");
            assert!(x > 0.0 && z > 0.0);
        }
        assert!(xxz_prefactors(1.0).is_err());
        assert!(xxz_prefactors(0.0).is_err());
    }

    #[test]
    fn a1_series_and_closed_form() {
        assert_eq!(a1_prefactor(0.0).unwrap(), 0.0);
        // The two branches agree where they meet.
        let s = A1_SERIES_CUTOFF * 0.999_999_9;
        let closed = 0.25 / (1.0 - s * s) + ((1.0 - s) / (1.0 + s)).ln() / (8.0 * s);
        assert!((a1_prefactor(s).unwrap() - closed).abs() < 1e-12);
        assert!((a1_prefactor(1e-3).unwrap() - 1e-6 / 6.0).abs() < 1e-12);
        assert!((a1_prefactor(0.3).unwrap() - 0.0167922712).abs() < 1e-9);
        assert!(a1_prefactor(1.0).is_err());
    }

    #[test]
    fn field_prefactor_values() {
        let (a1, a2, a3) = field_prefactors(0.3, 0.8).unwrap();
        assert!((a1 - 0.0167922712).abs() < 1e-9);
        assert!((a2 - 0.1237397569).abs() < 1e-9);
        assert!((a3 - 0.0569201360).abs() < 1e-9);
        let (_, a2, a3) = field_prefactors(0.4, 0.0).unwrap();
        assert_eq!((a2, a3), (0.0, 0.0));
        // At sz = 0 the three terms of A_2 cancel and A_3 vanishes too.
        let (_, a2, a3) = field_prefactors(0.0, 0.6).unwrap();
        assert!(a2.abs() < 1e-15 && a3.abs() < 1e-15);
        assert!(matches!(field_prefactors(0.5, 0.9), Err(Error::Domain(_))));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda_param(0.5, 1.0), LambdaParam::Real(1.0));
        match lambda_param(0.6, 0.8) {
            LambdaParam::Real(x) => assert!((x - 2.0).abs() < 1e-12),
            other => panic!("{other:?}"),
        }
        assert_eq!(lambda_param(1.0, 2.0), LambdaParam::Real(0.5));
        // The γ → 1 limit is continuous.
        let near = lambda_param(1.0 - 1e-7, 2.0).modulus();
        assert!((near - 0.5).abs() < 1e-6);
        match lambda_param(0.5, 0.3) {
            LambdaParam::Oscillatory { value, modulus } => {
                assert!((value.norm() - modulus).abs() < 1e-14);
                assert!((modulus - 3f64.sqrt()).abs() < 1e-14);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn a4_examples() {
        assert!(matches!(a4_prefactor(1.0, 0.0, 1.0), Err(Error::Argument(_))));
        let edge = (1.0 - 0.25f64).sqrt();
        // Vanishes like the square root of the distance to the circle.
        let a = a4_prefactor(0.5, edge * (1.0 - 1e-6), 1.0).unwrap();
        let b = a4_prefactor(0.5, edge * (1.0 - 1e-10), 1.0).unwrap();
        assert!(b.abs() < 2e-5 && (b / a - 1e-2).abs() < 1e-3);
        let (_, _, a3) = field_prefactors(0.1, 0.5).unwrap();
        assert!(a4_prefactor(0.5, 0.3, a3).unwrap().is_finite());
    }
}

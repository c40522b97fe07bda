//! Two-qubit X states and the closed-form discord for a σ^x measurement on
//! the second qubit.
//!
//! Basis order is |00>, |01>, |10>, |11> with the first qubit `i` (A) and the
//! second qubit `j` (B). All functions are generic over [`Real`] so the same
//! formulas serve the f64 and extended-precision paths.

use rand::Rng;

use crate::error::{Error, Result};
use crate::hermitian::{CMatrix, DensityMatrix};
use crate::real::{binary_entropy, xlogx_neg, Real};
use num_complex::Complex64 as C64;

/// Tolerance for probability sums, PSD slack and σx-optimality slack.
pub const XSTATE_TOL: f64 = 1e-12;
/// Most negative eigenvalue accepted before a state is rejected.
const EIG_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct PairCorrelators<T = f64> {
    pub sz_i: T,
    pub sz_j: T,
    pub xx: T,
    pub yy: T,
    pub zz: T,
}

impl<T: Real> PairCorrelators<T> {
    pub fn new(sz_i: T, sz_j: T, xx: T, yy: T, zz: T) -> Self {
        Self { sz_i, sz_j, xx, yy, zz }
    }

    /// Translation-invariant pair with `sz_i = sz_j = sz`.
    pub fn symmetric(sz: T, xx: T, yy: T, zz: T) -> Self {
        Self { sz_i: sz.clone(), sz_j: sz, xx, yy, zz }
    }

    pub fn to_f64(&self) -> PairCorrelators<f64> {
        PairCorrelators {
            sz_i: self.sz_i.to_f64(),
            sz_j: self.sz_j.to_f64(),
            xx: self.xx.to_f64(),
            yy: self.yy.to_f64(),
            zz: self.zz.to_f64(),
        }
    }

    fn values(&self) -> [(&'static str, &T); 5] {
        [("sz_i", &self.sz_i), ("sz_j", &self.sz_j), ("xx", &self.xx), ("yy", &self.yy), ("zz", &self.zz)]
    }

    /// The common magnetization, or an error when the pair is not symmetric.
    pub fn symmetric_sz(&self) -> Result<T> {
        let diff = (self.sz_i.clone() - self.sz_j.clone()).abs().to_f64();
        if diff > XSTATE_TOL {
            return Err(Error::UnsupportedAsymmetry { sz_i: self.sz_i.to_f64(), sz_j: self.sz_j.to_f64() });
        }
        Ok(self.sz_i.clone())
    }
}

impl PairCorrelators<f64> {
    pub fn to_real<T: Real>(&self) -> PairCorrelators<T> {
        PairCorrelators {
            sz_i: T::from_f64(self.sz_i),
            sz_j: T::from_f64(self.sz_j),
            xx: T::from_f64(self.xx),
            yy: T::from_f64(self.yy),
            zz: T::from_f64(self.zz),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct XState<T = f64> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub d: T,
    pub alpha: T,
    pub beta: T,
}

impl<T: Real> XState<T> {
    /// Validates normalization, the diagonal range and positivity.
    pub fn new(a: T, b: T, c: T, d: T, alpha: T, beta: T) -> Result<Self> {
        let s = Self { a, b, c, d, alpha, beta };
        s.validate()?;
        Ok(s)
    }

    fn validate(&self) -> Result<()> {
        let sum = (self.a.clone() + self.b.clone() + self.c.clone() + self.d.clone()).to_f64();
        if (sum - 1.0).abs() > XSTATE_TOL {
            return Err(Error::NotAState(format!("diagonal sums to {sum}")));
        }
        for (name, v) in [("a", &self.a), ("b", &self.b), ("c", &self.c), ("d", &self.d)] {
            let v = v.to_f64();
            if !(-XSTATE_TOL..=1.0 + XSTATE_TOL).contains(&v) {
                return Err(Error::NotAState(format!("{name} = {v} is not a probability")));
            }
        }
        let slack = T::from_f64(XSTATE_TOL);
        let ad = clamp0(self.a.clone() * self.d.clone()).sqrt();
        let bc = clamp0(self.b.clone() * self.c.clone()).sqrt();
        if self.alpha.abs() > ad.clone() + slack.clone() {
            return Err(Error::NotAState(format!(
                "|alpha| = {:e} exceeds sqrt(ad) = {:e}",
                self.alpha.abs().to_f64(),
                ad.to_f64()
            )));
        }
        if self.beta.abs() > bc.clone() + slack {
            return Err(Error::NotAState(format!(
                "|beta| = {:e} exceeds sqrt(bc) = {:e}",
                self.beta.abs().to_f64(),
                bc.to_f64()
            )));
        }
        Ok(())
    }

    pub fn to_f64(&self) -> XState<f64> {
        XState {
            a: self.a.to_f64(),
            b: self.b.to_f64(),
            c: self.c.to_f64(),
            d: self.d.to_f64(),
            alpha: self.alpha.to_f64(),
            beta: self.beta.to_f64(),
        }
    }

    /// Inverse of [`from_correlators`].
    pub fn correlators(&self) -> PairCorrelators<T> {
        let (a, b, c, d) = (self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone());
        let two = T::from_f64(2.0);
        PairCorrelators {
            sz_i: a.clone() + b.clone() - c.clone() - d.clone(),
            sz_j: a.clone() - b.clone() + c.clone() - d.clone(),
            zz: a - b - c + d,
            xx: two.clone() * (self.alpha.clone() + self.beta.clone()),
            yy: two * (self.beta.clone() - self.alpha.clone()),
        }
    }

    /// Slack in σx-optimality, `|α| + |β| - |√(ad) - √(bc)|`. Nonnegative means the
    /// σ^x measurement is optimal.
    pub fn lemma1_margin(&self) -> T {
        let ad = clamp0(self.a.clone() * self.d.clone()).sqrt();
        let bc = clamp0(self.b.clone() * self.c.clone()).sqrt();
        self.alpha.abs() + self.beta.abs() - (ad - bc).abs()
    }
}

impl XState<f64> {
    pub fn to_density_matrix(&self) -> Result<DensityMatrix> {
        let z = C64::new(0.0, 0.0);
        let r = |x: f64| C64::new(x, 0.0);
        #[rustfmt::skip]
        let m = CMatrix::from_row_slice(4, 4, &[
            r(self.a), z, z, r(self.alpha),
            z, r(self.b), r(self.beta), z,
            z, r(self.beta), r(self.c), z,
            r(self.alpha), z, z, r(self.d),
        ]);
        DensityMatrix::new(m, vec![2, 2])
    }

    pub fn to_real<T: Real>(&self) -> XState<T> {
        XState {
            a: T::from_f64(self.a),
            b: T::from_f64(self.b),
            c: T::from_f64(self.c),
            d: T::from_f64(self.d),
            alpha: T::from_f64(self.alpha),
            beta: T::from_f64(self.beta),
        }
    }
}

fn clamp0<T: Real>(x: T) -> T {
    x.max_of(T::zero())
}

/// Matrix elements from the five correlators.
pub fn from_correlators<T: Real>(c: &PairCorrelators<T>) -> Result<XState<T>> {
    for (name, v) in c.values() {
        let v = v.to_f64();
        if !v.is_finite() || v.abs() > 1.0 + XSTATE_TOL {
            return Err(Error::Argument(format!("{name} = {v} is outside [-1, 1]")));
        }
    }
    let one = T::one();
    let quarter = T::from_f64(0.25);
    let (si, sj, zz) = (c.sz_i.clone(), c.sz_j.clone(), c.zz.clone());
    let s = XState {
        a: (one.clone() + si.clone() + sj.clone() + zz.clone()) * quarter.clone(),
        b: (one.clone() + si.clone() - sj.clone() - zz.clone()) * quarter.clone(),
        c: (one.clone() - si.clone() + sj.clone() - zz.clone()) * quarter.clone(),
        d: (one - si - sj + zz) * quarter.clone(),
        alpha: (c.xx.clone() - c.yy.clone()) * quarter.clone(),
        beta: (c.xx.clone() + c.yy.clone()) * quarter,
    };
    s.validate()?;
    Ok(s)
}

/// The four eigenvalues `λ1..λ4` for a translation-invariant pair.
pub fn xstate_eigenvalues<T: Real>(c: &PairCorrelators<T>) -> Result<[T; 4]> {
    let sz = c.symmetric_sz()?;
    let one = T::one();
    let quarter = T::from_f64(0.25);
    let four = T::from_f64(4.0);
    let dxy = c.xx.clone() - c.yy.clone();
    let root = (four * sz.clone() * sz + dxy.clone() * dxy).sqrt();
    let sxy = c.xx.clone() + c.yy.clone();
    let l = [
        (one.clone() - c.zz.clone() + sxy.clone()) * quarter.clone(),
        (one.clone() - c.zz.clone() - sxy) * quarter.clone(),
        (one.clone() + c.zz.clone() + root.clone()) * quarter.clone(),
        (one + c.zz.clone() - root) * quarter,
    ];
    for v in &l {
        if v.to_f64() < -EIG_TOL {
            return Err(Error::NotAState(format!("X-state eigenvalue {:e} is negative", v.to_f64())));
        }
    }
    Ok(l)
}

/// `S(ρ_ij) - S(ρ_j)`.
pub fn conditional_entropy<T: Real>(c: &PairCorrelators<T>) -> Result<T> {
    let sz = c.symmetric_sz()?;
    let lam = xstate_eigenvalues(c)?;
    let half = T::from_f64(0.5);
    let joint = lam.iter().fold(T::zero(), |acc, l| acc + xlogx_neg(l));
    Ok(joint - binary_entropy(&(half.clone() + sz * half)))
}

/// Conditional entropy after measuring σ^x on the second qubit.
pub fn postmeasurement_entropy_x<T: Real>(c: &PairCorrelators<T>) -> Result<T> {
    let sz = c.symmetric_sz()?;
    let x2 = c.xx.clone() * c.xx.clone();
    let y2 = c.yy.clone() * c.yy.clone();
    let arg = sz.clone() * sz + x2.max_of(y2);
    if arg.to_f64() < 0.0 {
        return Err(Error::Internal("negative radicand in post-measurement entropy".into()));
    }
    let mut root = arg.sqrt();
    if root.to_f64() > 1.0 {
        if root.to_f64() > 1.0 + XSTATE_TOL {
            return Err(Error::NotAState(format!("Bloch length {} exceeds one", root.to_f64())));
        }
        root = T::one();
    }
    let half = T::from_f64(0.5);
    Ok(binary_entropy(&(half.clone() + half * root)))
}

pub fn lemma1_holds<T: Real>(s: &XState<T>) -> bool {
    s.lemma1_margin().to_f64() >= -XSTATE_TOL
}

/// Discord, classical correlation and mutual information for a σ^x
/// measurement on the second qubit.
#[derive(Clone, Debug)]
pub struct DiscordBreakdown<T = f64> {
    pub discord: T,
    pub classical_correlation: T,
    pub mutual_information: T,
}

/// Closed-form discord. Refuses states outside the σx-optimality region.
pub fn discord_analytic<T: Real>(c: &PairCorrelators<T>) -> Result<T> {
    Ok(discord_breakdown(c)?.discord)
}

pub fn discord_breakdown<T: Real>(c: &PairCorrelators<T>) -> Result<DiscordBreakdown<T>> {
    let s = from_correlators(c)?;
    if !lemma1_holds(&s) {
        return Err(Error::ConditionViolated(format!(
            "|sqrt(ad) - sqrt(bc)| exceeds |alpha| + |beta| by {:e}",
            -s.lemma1_margin().to_f64()
        )));
    }
    discord_breakdown_unchecked(c)
}

/// As [`discord_breakdown`] without the σx-optimality test. The value is then only
/// the discord for a σ^x measurement, an upper bound on the true discord.
pub fn discord_breakdown_unchecked<T: Real>(c: &PairCorrelators<T>) -> Result<DiscordBreakdown<T>> {
    let sz = c.symmetric_sz()?;
    let post = postmeasurement_entropy_x(c)?;
    let cond = conditional_entropy(c)?;
    let mut d = post - cond.clone();
    if d.to_f64() < -1e-9 {
        return Err(Error::Internal(format!("analytic discord {:e} is negative", d.to_f64())));
    }
    d = clamp0(d);
    // S(ρ_i) = S(ρ_j) for a symmetric pair, so I = S(ρ_i) - S(ρ_ij|j).
    let half = T::from_f64(0.5);
    let s_a = binary_entropy(&(half.clone() + sz * half));
    let i = clamp0(s_a - cond);
    let j = i.clone() - d.clone();
    Ok(DiscordBreakdown { discord: d, classical_correlation: j, mutual_information: i })
}

/// Discord of the `r → ∞` limit state.
pub fn limit_discord<T: Real>(limit: &PairCorrelators<T>) -> Result<T> {
    discord_analytic(limit)
}

/// Random valid X state. With `symmetric` the two magnetizations coincide
/// (`b = c`).
pub fn random_xstate<R: Rng + ?Sized>(rng: &mut R, symmetric: bool) -> XState<f64> {
    let mut w: [f64; 4] = std::array::from_fn(|_| -rng.gen_range(f64::EPSILON..1.0).ln());
    if symmetric {
        let m = 0.5 * (w[1] + w[2]);
        w[1] = m;
        w[2] = m;
    }
    let total: f64 = w.iter().sum();
    let [a, b, c, d] = w.map(|x| x / total);
    let alpha = rng.gen_range(-1.0..=1.0) * (a * d).sqrt();
    let beta = rng.gen_range(-1.0..=1.0) * (b * c).sqrt();
    XState { a, b, c, d, alpha, beta }
}

/// Random pure X state `cos t |00> + sin t |11>`, which is always symmetric.
/// Returns the state and the entanglement entropy of either qubit.
pub fn random_pure_xstate<R: Rng + ?Sized>(rng: &mut R) -> (XState<f64>, f64) {
    let t: f64 = rng.gen_range(0.0..std::f64::consts::PI);
    let (s, c) = t.sin_cos();
    let state = XState { a: c * c, b: 0.0, c: 0.0, d: s * s, alpha: c * s, beta: 0.0 };
    (state, binary_entropy(&(c * c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::eigvalsh;
    use crate::real::Mp;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::LN_2;

    fn bell() -> PairCorrelators {
        PairCorrelators::symmetric(0.0, 1.0, -1.0, 1.0)
    }

    fn zeros() -> PairCorrelators {
        PairCorrelators::symmetric(0.0, 0.0, 0.0, 0.0)
    }

    #[test]
    fn from_correlators_examples() {
        let s = from_correlators(&zeros()).unwrap();
        assert_eq!((s.a, s.b, s.c, s.d, s.alpha, s.beta), (0.25, 0.25, 0.25, 0.25, 0.0, 0.0));
        let s = from_correlators(&bell()).unwrap();
        assert_eq!((s.a, s.b, s.c, s.d, s.alpha, s.beta), (0.5, 0.0, 0.0, 0.5, 0.5, 0.0));
        let s = from_correlators(&PairCorrelators::symmetric(1.0, 0.0, 0.0, 1.0)).unwrap();
        assert_eq!((s.a, s.b, s.c, s.d), (1.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn inconsistent_correlators_are_rejected() {
        let bad = PairCorrelators::symmetric(0.0, 1.0, 1.0, 0.0);
        assert!(matches!(from_correlators(&bad), Err(Error::NotAState(_))));
        let out = PairCorrelators::symmetric(1.5, 0.0, 0.0, 0.0);
        assert!(matches!(from_correlators(&out), Err(Error::Argument(_))));
    }

    #[test]
    fn correlator_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let s = random_xstate(&mut rng, false);
            let back = from_correlators(&s.correlators()).unwrap();
            for (x, y) in [(s.a, back.a), (s.b, back.b), (s.c, back.c), (s.d, back.d), (s.alpha, back.alpha), (s.beta, back.beta)] {
                assert!((x - y).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(xstate_eigenvalues(&zeros()).unwrap(), [0.25; 4]);
        let mut l = xstate_eigenvalues(&bell()).unwrap();
        l.sort_by(f64::total_cmp);
        assert_eq!(l, [0.0, 0.0, 0.0, 1.0]);
        let asym = PairCorrelators::new(0.1, 0.2, 0.0, 0.0, 0.0);
        assert!(matches!(xstate_eigenvalues(&asym), Err(Error::UnsupportedAsymmetry { .. })));
    }

    #[test]
    fn eigenvalues_match_numeric_eigensolver() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let s = random_xstate(&mut rng, true);
            let mut l = xstate_eigenvalues(&s.correlators()).unwrap();
            l.sort_by(f64::total_cmp);
            let num = eigvalsh(s.to_density_matrix().unwrap().matrix()).unwrap();
            for (x, y) in l.iter().zip(&num) {
                assert!((x - y).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn conditional_entropy_examples() {
        assert!((conditional_entropy(&zeros()).unwrap() - LN_2).abs() < 1e-15);
        assert!((conditional_entropy(&bell()).unwrap() + LN_2).abs() < 1e-15);
    }

    #[test]
    fn lemma1_examples() {
        assert!(lemma1_holds(&from_correlators(&bell()).unwrap()));
        assert!(lemma1_holds(&from_correlators(&zeros()).unwrap()));
        let classical = XState::new(0.7, 0.0, 0.0, 0.3, 0.0, 0.0).unwrap();
        assert!(!lemma1_holds(&classical));
    }

    #[test]
    fn postmeasurement_examples() {
        assert!((postmeasurement_entropy_x(&zeros()).unwrap() - LN_2).abs() < 1e-15);
        assert_eq!(postmeasurement_entropy_x(&bell()).unwrap(), 0.0);
        let c = PairCorrelators::symmetric(0.6, 0.0, 0.0, 0.36);
        assert!((postmeasurement_entropy_x(&c).unwrap() - binary_entropy(&0.8)).abs() < 1e-15);
    }

    #[test]
    fn discord_examples() {
        assert!((discord_analytic(&bell()).unwrap() - LN_2).abs() < 1e-15);
        assert!(discord_analytic(&zeros()).unwrap().abs() < 1e-15);
        let classical = XState::new(0.7, 0.0, 0.0, 0.3, 0.0, 0.0).unwrap().correlators();
        assert!(matches!(discord_analytic(&classical), Err(Error::ConditionViolated(_))));
        let b = discord_breakdown(&bell()).unwrap();
        assert!((b.mutual_information - 2.0 * LN_2).abs() < 1e-15);
        assert!((b.classical_correlation - LN_2).abs() < 1e-15);
    }

    #[test]
    fn product_limit_state_has_zero_discord() {
        for sz in [0.0, 0.3, -0.7] {
            let c = PairCorrelators::symmetric(sz, 0.0, 0.0, sz * sz);
            assert!(limit_discord(&c).unwrap().abs() < 1e-15);
        }
    }

    #[test]
    fn ising_h0_limit_state() {
        // sz=0, xx=1, yy=0, zz=0: spectrum {1/2, 0, 1/2, 0}, so D = 0 - (ln 2 - ln 2).
        let c = PairCorrelators::symmetric(0.0, 1.0, 0.0, 0.0);
        let mut l = xstate_eigenvalues(&c).unwrap();
        l.sort_by(f64::total_cmp);
        assert_eq!(l, [0.0, 0.0, 0.5, 0.5]);
        assert!(limit_discord(&c).unwrap().abs() < 1e-15);
    }

    #[test]
    fn extended_precision_agrees_with_f64() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let s = random_xstate(&mut rng, true);
            let c = s.correlators();
            let Ok(d) = discord_analytic(&c) else { continue };
            let dm = discord_analytic(&c.to_real::<Mp>()).unwrap().to_f64();
            assert!((d - dm).abs() < 1e-13);
        }
    }

    #[test]
    fn extended_precision_resolves_tiny_correlations() {
        // Weak xx at sz = 0.3 (limit state zz = sz²): D ≈ A_1 xx² with
        // A_1(0.3) = 0.0167922712 from a high-precision finite difference.
        let (sz, x) = (0.3, 1e-20);
        let s = Mp::new(sz);
        let c = PairCorrelators::symmetric(s.clone(), Mp::new(x), Mp::new(0.0), s.clone() * s);
        let d = discord_analytic(&c).unwrap().to_f64();
        assert!((d / (x * x) / 0.0167922712 - 1.0).abs() < 1e-8);
    }
}

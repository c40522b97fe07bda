//! Two-site discord as a function of separation: closed-form asymptotes,
//! sweeps over `r`, decay-law fits and the continuity experiment.
//!
//! The X-state analysis of every record runs in extended precision. In
//! gapped chains the discord, or its distance to the `r → ∞` limit, drops
//! below `1e-16` within a few dozen sites, and the subtraction `D - D_∞`
//! would otherwise be lost entirely.

use std::f64::consts::PI;
use std::fmt;

use log::{debug, warn};
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::chain::{
    a1_prefactor, classify_regime, field_prefactors, lambda_param, magnetization, prefactor_set,
    asymptotic_correlators, long_range_order, MomentTable, ModelSpec, RegimeTag, Source, GLAISHER, MAX_EXACT_R,
};
use crate::error::{Error, Result};
use crate::hermitian::trace_distance;
use crate::oracle::{discord_numeric, DEFAULT_GRID};
use crate::real::{Mp, Real};
use crate::xstate::{discord_breakdown_unchecked, from_correlators, limit_discord, PairCorrelators, XState};

/// σx-optimality violations smaller than this are treated as boundary cases.
pub const LEMMA1_FALLBACK_TOL: f64 = 1e-9;
/// Smallest discord an f64 correlator set can resolve.
pub const DOUBLE_RESOLUTION: f64 = 1e-14;
/// Resolution of records built from extended-precision correlators.
pub const EXTENDED_RESOLUTION: f64 = 1e-80;
/// Resolution of asymptotic records without a limit offset. The formulas
/// are evaluated to full relative precision, so only the f64 range matters.
const FORMULA_RESOLUTION: f64 = 1e-280;
/// Default slack constant of the continuity experiment.
pub const DEFAULT_CONTINUITY_SLACK: f64 = 10.0;
const MIN_FIT_RECORDS: usize = 8;

/// Closed-form two-site discord `D_∞ + correction(r)` for one model.
#[derive(Clone, Debug)]
pub struct DiscordAsymptote {
    model: ModelSpec,
    regime: RegimeTag,
    limit: f64,
    law: AsymptoteLaw,
}

#[derive(Clone, Copy, Debug)]
enum AsymptoteLaw {
    /// `amp · r^{-p}`.
    Power { amp: f64, p: f64 },
    /// `amp · r^{-2} ln r`.
    PowerLog { amp: f64 },
    /// `amp · r^{-p} · base^r`.
    PowerExp { amp: f64, p: f64, base: f64 },
    Constant,
}

impl DiscordAsymptote {
    pub fn new(m: &ModelSpec) -> Result<Self> {
        let regime = classify_regime(m)?;
        let not_provided = || Err(Error::NotProvided(format!("no closed-form discord for {m} in regime {regime}")));
        let offset_limit = || -> Result<f64> { limit_discord(&crate::chain::limit_correlators(m)?) };
        let (limit, law) = match (regime, *m) {
            (RegimeTag::XxzCritical { eta }, _) => {
                let ax = prefactor_set(m)?.a_x.expect("XXZ amplitude");
                (0.0, AsymptoteLaw::Power { amp: 0.5 * ax * ax, p: 2.0 * eta })
            }
            (RegimeTag::XxzHeisenberg, _) => (0.0, AsymptoteLaw::PowerLog { amp: 2.0 / PI.powi(3) }),
            (RegimeTag::XxzGapped | RegimeTag::XyCritical, _) => return not_provided(),
            (RegimeTag::XyGapped, ModelSpec::Xy { alpha }) => (0.0, xy_law(alpha)),
            (RegimeTag::XyfFerroInner, ModelSpec::XyField { gamma, h }) if h == 0.0 => {
                (0.0, xy_law((1.0 - gamma) / (1.0 + gamma)))
            }
            (RegimeTag::TfimCritical | RegimeTag::XyfCritical, _) => {
                let (gamma, _) = m.free_fermion().expect("field model");
                let a1 = a1_prefactor(magnetization(m)?)?;
                let amp = 2f64.powf(13.0 / 6.0) * 0.5f64.exp() * GLAISHER.powi(-6) * gamma.powf(1.5)
                    / (1.0 + gamma).powi(2);
                (0.0, AsymptoteLaw::Power { amp: amp * a1, p: 0.5 })
            }
            (RegimeTag::TfimPara | RegimeTag::XyfPara, _) => {
                let (gamma, h) = m.free_fermion().expect("field model");
                let a1 = a1_prefactor(magnetization(m)?)?;
                let lam = lambda_param(gamma, h).modulus();
                let root = (1.0 + gamma * gamma + 2.0 * gamma * (1.0 + lam * lam) / (1.0 - lam * lam)).sqrt();
                let amp = 2.0 * gamma * a1 / (PI * (1.0 + gamma).powi(2)) * root;
                (0.0, AsymptoteLaw::PowerExp { amp, p: 1.0, base: lam * lam })
            }
            // The correction carries h^{2r+2} while A_2 diverges at h = 0;
            // the product vanishes.
            (RegimeTag::TfimFerro, ModelSpec::Tfim { h }) if h == 0.0 => (offset_limit()?, AsymptoteLaw::Constant),
            (RegimeTag::TfimFerro | RegimeTag::XyfFerroOuter, _) => {
                let (gamma, h) = m.free_fermion().expect("field model");
                let (_, a2, _) = field_prefactors(magnetization(m)?, long_range_order(m)?)?;
                let lam = lambda_param(gamma, h).modulus();
                let amp = gamma.sqrt() * (1.0 - h * h).powf(0.25) * a2
                    / (PI * (1.0 + gamma) * (lam - 1.0 / lam).powi(2));
                (offset_limit()?, AsymptoteLaw::PowerExp { amp, p: 2.0, base: lam.powi(-2) })
            }
            (RegimeTag::XyfDisorderCircle, _) => (offset_limit()?, AsymptoteLaw::Constant),
            (RegimeTag::XyfFerroInner, _) => {
                let set = prefactor_set(m)?;
                let (gamma, _) = m.free_fermion().expect("field model");
                let a4 = set.a_4.expect("inner ferromagnetic amplitude");
                (offset_limit()?, AsymptoteLaw::PowerExp { amp: a4, p: 1.0, base: (1.0 - gamma) / (1.0 + gamma) })
            }
            _ => return Err(Error::Internal(format!("regime {regime} does not match model {m}"))),
        };
        Ok(Self { model: *m, regime, limit, law })
    }

    pub fn model(&self) -> ModelSpec {
        self.model
    }

    pub fn regime(&self) -> RegimeTag {
        self.regime
    }

    /// `D_σx(ρ_∞)`, zero without long-range order.
    pub fn limit(&self) -> f64 {
        self.limit
    }

    /// The `r`-dependent part of the asymptote.
    pub fn correction(&self, r: usize) -> Result<f64> {
        if r < 2 {
            return Err(Error::Argument(format!("asymptotic discord needs r >= 2, got {r}")));
        }
        let rf = r as f64;
        Ok(match self.law {
            AsymptoteLaw::Power { amp, p } => amp * rf.powf(-p),
            AsymptoteLaw::PowerLog { amp } => amp * rf.ln() / (rf * rf),
            // Evaluated in logs so that tiny bases do not underflow early.
            AsymptoteLaw::PowerExp { amp, p, base } => {
                if amp == 0.0 || base == 0.0 {
                    0.0
                } else {
                    amp.signum() * (amp.abs().ln() - p * rf.ln() + rf * base.ln()).exp()
                }
            }
            AsymptoteLaw::Constant => 0.0,
        })
    }

    pub fn value(&self, r: usize) -> Result<f64> {
        Ok(self.limit + self.correction(r)?)
    }
}

/// `2π⁻²(1-α²)⁻¹ r⁻² α^{2r-2}`.
fn xy_law(alpha: f64) -> AsymptoteLaw {
    let amp = 2.0 / (PI * PI * (1.0 - alpha * alpha) * alpha * alpha);
    if alpha == 0.0 {
        AsymptoteLaw::PowerExp { amp: 0.0, p: 2.0, base: 0.0 }
    } else {
        AsymptoteLaw::PowerExp { amp, p: 2.0, base: alpha * alpha }
    }
}

/// Closed-form discord at separation `r`, including the limit offset.
pub fn asymptotic_discord(m: &ModelSpec, r: usize) -> Result<f64> {
    DiscordAsymptote::new(m)?.value(r)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Precision {
    /// Extended for exact sweeps of gapped free-fermion chains.
    #[default]
    Auto,
    Double,
    Extended,
}

#[derive(Clone, Debug)]
pub struct ScalingRecord {
    pub model: ModelSpec,
    pub regime: RegimeTag,
    pub r: usize,
    pub correlators: PairCorrelators,
    pub source: Source,
    pub discord: f64,
    pub classical_correlation: f64,
    pub mutual_information: f64,
    pub discord_asym: Option<f64>,
    pub lemma1: bool,
    pub lemma1_margin: f64,
    /// `D - D_σx(ρ_∞)`, evaluated at the working precision of the record.
    pub discord_minus_limit: f64,
    /// Decaying part of the dominant correlator: `|xx - xx_∞|` in ferro
    /// regimes, `|yy|` where `yy` carries the decay, `|xx|` otherwise.
    pub correlator_deviation: f64,
    /// Magnitudes below this are numerical noise.
    pub resolution: f64,
    /// The σx formula did not apply and the record came from the oracle.
    pub oracle_fallback: bool,
}

#[derive(Clone, Debug)]
pub struct RejectedRecord {
    pub r: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default)]
pub struct ScalingProfile {
    pub records: Vec<ScalingRecord>,
    pub rejected: Vec<RejectedRecord>,
}

pub fn discord_profile(m: &ModelSpec, r_min: usize, r_max: usize, source: Source) -> Result<ScalingProfile> {
    discord_profile_with(m, r_min, r_max, source, Precision::Auto)
}

pub fn discord_profile_with(
    m: &ModelSpec,
    r_min: usize,
    r_max: usize,
    source: Source,
    precision: Precision,
) -> Result<ScalingProfile> {
    if !(2 <= r_min && r_min < r_max && r_max <= MAX_EXACT_R) {
        return Err(Error::Argument(format!(
            "need 2 <= r_min < r_max <= {MAX_EXACT_R}, got r_min = {r_min}, r_max = {r_max}"
        )));
    }
    let regime = classify_regime(m)?;
    if source == Source::Exact && !m.is_free_fermion() {
        return Err(Error::Unsupported(format!("no exact correlators for {m}")));
    }
    let asymptote = match DiscordAsymptote::new(m) {
        Ok(a) => Some(a),
        Err(Error::NotProvided(msg)) => {
            debug!("{msg}");
            None
        }
        Err(e) => return Err(e),
    };
    let ctx = RecordContext::new(m, regime, source, asymptote)?;
    let rs: Vec<usize> = (r_min..=r_max).collect();

    let results: Vec<Result<ScalingRecord>> = match source {
        Source::Asymptotic => rs
            .par_iter()
            .map(|&r| {
                let c = asymptotic_correlators(m, r)?;
                let resolution = if regime.has_limit_offset() { DOUBLE_RESOLUTION } else { FORMULA_RESOLUTION };
                ctx.record(r, c.to_real::<Mp>(), c, resolution)
            })
            .collect(),
        Source::Exact => {
            let extended = match precision {
                Precision::Double => false,
                Precision::Extended => true,
                Precision::Auto => !regime.is_critical(),
            };
            if extended {
                let table = MomentTable::new_mp(m, r_max + 1)?;
                rs.par_iter()
                    .map(|&r| {
                        let c = table.correlators(r);
                        let c64 = c.to_f64();
                        ctx.record(r, c, c64, EXTENDED_RESOLUTION)
                    })
                    .collect()
            } else {
                let table = MomentTable::new(m, r_max + 1)?;
                rs.par_iter()
                    .map(|&r| {
                        let c = table.correlators(r);
                        ctx.record(r, c.to_real::<Mp>(), c, DOUBLE_RESOLUTION)
                    })
                    .collect()
            }
        }
    };

    let mut profile = ScalingProfile::default();
    for (r, res) in rs.into_iter().zip(results) {
        match res {
            Ok(rec) => profile.records.push(rec),
            Err(Error::NotAState(reason)) => {
                warn!("{m}: correlators at r = {r} are not a state: {reason}");
                profile.rejected.push(RejectedRecord { r, reason });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(profile)
}

/// Per-sweep constants shared by every record.
struct RecordContext {
    model: ModelSpec,
    regime: RegimeTag,
    source: Source,
    asymptote: Option<DiscordAsymptote>,
    xx_inf: Mp,
    limit: Option<Mp>,
}

impl RecordContext {
    fn new(m: &ModelSpec, regime: RegimeTag, source: Source, asymptote: Option<DiscordAsymptote>) -> Result<Self> {
        let xx_inf = long_range_order_real::<Mp>(m, regime);
        let limit = if regime.has_limit_offset() { None } else { Some(Mp::zero()) };
        Ok(Self { model: *m, regime, source, asymptote, xx_inf, limit })
    }

    /// Dominant decaying correlator.
    fn deviation(&self, c: &PairCorrelators<Mp>) -> Mp {
        let yy_carries_decay = match (self.regime, self.model) {
            (RegimeTag::XyGapped, _) => true,
            (RegimeTag::XyfFerroInner, _) => true,
            _ => false,
        };
        if yy_carries_decay {
            c.yy.abs()
        } else {
            (c.xx.abs() - self.xx_inf.clone()).abs()
        }
    }

    fn record(&self, r: usize, c: PairCorrelators<Mp>, c64: PairCorrelators, resolution: f64) -> Result<ScalingRecord> {
        let state: XState<Mp> = from_correlators(&c)?;
        let margin = state.lemma1_margin().to_f64();
        let lemma1 = margin >= -LEMMA1_FALLBACK_TOL;
        let discord_asym = match &self.asymptote {
            Some(a) if r >= 2 => Some(a.value(r)?),
            _ => None,
        };
        let limit = match &self.limit {
            Some(l) => l.clone(),
            None => limit_discord(&limit_correlators_real(&c, self.xx_inf.clone()))?,
        };
        let (discord, j, i, minus_limit, fallback) = if lemma1 {
            let b = discord_breakdown_unchecked(&c)?;
            let minus = b.discord.clone() - limit;
            (b.discord.to_f64(), b.classical_correlation.to_f64(), b.mutual_information.to_f64(), minus.to_f64(), false)
        } else {
            warn!("{}: σx-optimality fails at r = {r} by {:e}, using the oracle", self.model, -margin);
            let rho = state.to_f64().to_density_matrix()?;
            let res = discord_numeric(&rho, DEFAULT_GRID)?;
            let minus = res.discord - limit.to_f64();
            (res.discord, res.classical_correlation, res.mutual_information, minus, true)
        };
        Ok(ScalingRecord {
            model: self.model,
            regime: self.regime,
            r,
            correlators: c64,
            source: self.source,
            discord,
            classical_correlation: j,
            mutual_information: i,
            discord_asym,
            lemma1,
            lemma1_margin: margin,
            discord_minus_limit: minus_limit,
            correlator_deviation: self.deviation(&c).to_f64(),
            resolution,
            oracle_fallback: fallback,
        })
    }
}

/// `⟨σxσx⟩_∞` evaluated in `T` from the same f64 parameters that define the
/// moments, so that `D - D_∞` is consistent to working precision.
fn long_range_order_real<T: Real>(m: &ModelSpec, regime: RegimeTag) -> T {
    match (regime, m.free_fermion()) {
        (RegimeTag::XyGapped, Some((gamma, h))) | (RegimeTag::TfimFerro, Some((gamma, h)))
        | (RegimeTag::XyfFerroOuter, Some((gamma, h)))
        | (RegimeTag::XyfDisorderCircle, Some((gamma, h)))
        | (RegimeTag::XyfFerroInner, Some((gamma, h))) => {
            let g = T::from_f64(gamma);
            let hh = T::from_f64(h);
            let one = T::one();
            T::from_f64(2.0) * g.sqrt() / (one.clone() + g) * (one - hh.clone() * hh).sqrt().sqrt()
        }
        _ => T::zero(),
    }
}

/// Limit state with the record's own magnetization.
fn limit_correlators_real<T: Real>(c: &PairCorrelators<T>, xx_inf: T) -> PairCorrelators<T> {
    let sz = c.sz_i.clone();
    PairCorrelators::symmetric(sz.clone(), xx_inf, T::zero(), sz.clone() * sz)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecayLaw {
    Power,
    Exponential,
    PowerTimesExp,
    PowerTimesLog,
}

impl DecayLaw {
    pub const ALL: [DecayLaw; 4] = [DecayLaw::Power, DecayLaw::Exponential, DecayLaw::PowerTimesExp, DecayLaw::PowerTimesLog];

    fn n_params(self) -> usize {
        match self {
            DecayLaw::Power | DecayLaw::Exponential => 2,
            DecayLaw::PowerTimesExp | DecayLaw::PowerTimesLog => 3,
        }
    }

    fn row(self, r: f64) -> Vec<f64> {
        match self {
            DecayLaw::Power => vec![1.0, r.ln()],
            DecayLaw::Exponential => vec![1.0, r],
            DecayLaw::PowerTimesExp => vec![1.0, r.ln(), r],
            DecayLaw::PowerTimesLog => vec![1.0, r.ln(), r.ln().ln()],
        }
    }
}

impl fmt::Display for DecayLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecayLaw::Power => "power",
            DecayLaw::Exponential => "exponential",
            DecayLaw::PowerTimesExp => "power_times_exp",
            DecayLaw::PowerTimesLog => "power_times_log",
        })
    }
}

/// Least-squares fit of `ln y` for one law.
#[derive(Clone, Debug)]
pub struct LawFit {
    pub law: DecayLaw,
    /// Coefficients in the order of [`DecayLaw`] columns: `ln amp`, then the
    /// `ln r`, `r` or `ln ln r` coefficients.
    pub coefficients: Vec<f64>,
    pub r_squared: f64,
    pub adjusted_r_squared: f64,
}

impl LawFit {
    pub fn amplitude(&self) -> f64 {
        self.coefficients[0].exp()
    }

    /// Power of `r`, if the law has one.
    pub fn exponent(&self) -> Option<f64> {
        match self.law {
            DecayLaw::Exponential => None,
            _ => Some(self.coefficients[1]),
        }
    }

    /// Exponential rate, if the law has one.
    pub fn rate(&self) -> Option<f64> {
        match self.law {
            DecayLaw::Exponential => Some(self.coefficients[1]),
            DecayLaw::PowerTimesExp => Some(self.coefficients[2]),
            _ => None,
        }
    }

    /// The rate when the law is exponential in `r`, the power otherwise.
    pub fn leading(&self) -> f64 {
        self.rate().or(self.exponent()).expect("every law has a leading parameter")
    }
}

pub fn fit_law(rs: &[f64], ys: &[f64], law: DecayLaw) -> Result<LawFit> {
    let n = rs.len();
    let p = law.n_params();
    if n != ys.len() || n <= p {
        return Err(Error::Argument(format!("{law} fit needs more than {p} points, got {n}")));
    }
    if ys.iter().any(|&y| !(y > 0.0 && y.is_finite())) || rs.iter().any(|&r| !(r > 1.0)) {
        return Err(Error::Domain(format!("{law} fit needs positive values at r > 1")));
    }
    let a = DMatrix::from_fn(n, p, |i, j| law.row(rs[i])[j]);
    let b = DVector::from_iterator(n, ys.iter().map(|y| y.ln()));
    let coef = a
        .clone()
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::Internal(format!("least squares failed: {e}")))?;
    let resid = &b - &a * &coef;
    let mean = b.mean();
    let ss_tot: f64 = b.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res = resid.norm_squared();
    let r_squared = if ss_tot > 0.0 { (1.0 - ss_res / ss_tot).clamp(0.0, 1.0) } else { 1.0 };
    let adjusted = 1.0 - (1.0 - r_squared) * (n as f64 - 1.0) / (n as f64 - p as f64);
    Ok(LawFit { law, coefficients: coef.iter().copied().collect(), r_squared, adjusted_r_squared: adjusted })
}

/// Fits every law and keeps the best by adjusted `r²`. Laws within
/// [`FIT_TIE_TOL`] of the best count as tied and the one with fewer
/// parameters wins, earlier in [`DecayLaw::ALL`] on equal counts.
pub fn best_law(rs: &[f64], ys: &[f64]) -> Result<LawFit> {
    let fits: Vec<LawFit> = DecayLaw::ALL.iter().map(|&l| fit_law(rs, ys, l)).collect::<Result<_>>()?;
    let best = fits.iter().map(|f| f.adjusted_r_squared).fold(f64::NEG_INFINITY, f64::max);
    let mut tied: Vec<&LawFit> = fits.iter().filter(|f| f.adjusted_r_squared >= best - FIT_TIE_TOL).collect();
    tied.sort_by_key(|f| f.law.n_params());
    Ok(tied[0].clone())
}

pub const FIT_TIE_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct FitReport {
    pub law: DecayLaw,
    pub exponent_or_rate: f64,
    pub exponent: Option<f64>,
    pub rate: Option<f64>,
    pub amplitude: f64,
    pub r_squared: f64,
    /// Ratio of the discord's leading parameter to the dominant correlator's
    /// under the same law.
    pub ratio_n: Option<f64>,
    pub points_used: usize,
}

/// Fits the decay of discord over a sweep. In regimes with long-range order
/// the fitted quantity is `|D - D_∞|`, elsewhere `D`. Points below the
/// record resolution are dropped.
pub fn fit_decay(records: &[ScalingRecord]) -> Result<FitReport> {
    if records.len() < MIN_FIT_RECORDS {
        return Err(Error::Argument(format!("fit needs at least {MIN_FIT_RECORDS} records, got {}", records.len())));
    }
    let value = |rec: &ScalingRecord| {
        if rec.regime.has_limit_offset() {
            rec.discord_minus_limit.abs()
        } else {
            rec.discord
        }
    };
    let usable: Vec<&ScalingRecord> = records.iter().filter(|rec| value(rec) > rec.resolution).collect();
    if usable.len() <= 3 {
        return Err(Error::Underflow(format!(
            "only {} of {} records are above resolution; use a smaller r_max",
            usable.len(),
            records.len()
        )));
    }
    let rs: Vec<f64> = usable.iter().map(|rec| rec.r as f64).collect();
    let ys: Vec<f64> = usable.iter().map(|rec| value(rec)).collect();
    let fit = best_law(&rs, &ys)?;

    let corr: Vec<(f64, f64)> = usable
        .iter()
        .filter(|rec| rec.correlator_deviation > 0.0)
        .map(|rec| (rec.r as f64, rec.correlator_deviation))
        .collect();
    let ratio_n = if corr.len() == usable.len() {
        let (cr, cy): (Vec<f64>, Vec<f64>) = corr.into_iter().unzip();
        fit_law(&cr, &cy, fit.law).ok().and_then(|cf| {
            let (num, den) = (fit.leading(), cf.leading());
            let ratio = num / den;
            (num.is_finite() && den.is_finite() && den != 0.0 && ratio.is_finite()).then_some(ratio)
        })
    } else {
        None
    };
    Ok(FitReport {
        law: fit.law,
        exponent_or_rate: fit.leading(),
        exponent: fit.exponent(),
        rate: fit.rate(),
        amplitude: fit.amplitude(),
        r_squared: fit.r_squared,
        ratio_n,
        points_used: usable.len(),
    })
}

#[derive(Clone, Debug)]
pub struct ContinuityRow {
    /// Trace norm `‖ρ - σ‖₁`.
    pub t: f64,
    pub discord_rho: f64,
    pub discord_sigma: f64,
    pub delta_d: f64,
    /// `-4 t ln t`.
    pub bound_term: f64,
    /// `|ΔD| / (-4 t ln t + C t)`.
    pub ratio: f64,
    pub flagged: bool,
}

/// Discord differences of nearby states against the continuity envelope
/// `-4 t ln t + C t`, with both discords from the oracle.
pub fn continuity_report(pairs: &[(XState, XState)], slack: f64) -> Result<Vec<ContinuityRow>> {
    pairs
        .par_iter()
        .map(|(a, b)| {
            let rho = a.to_density_matrix()?;
            let sigma = b.to_density_matrix()?;
            let t = trace_distance(&rho, &sigma)?;
            if !(t > 0.0 && t <= 0.2) {
                return Err(Error::Argument(format!("trace norm {t:e} is outside (0, 0.2]")));
            }
            let d1 = discord_numeric(&rho, DEFAULT_GRID)?.discord;
            let d2 = discord_numeric(&sigma, DEFAULT_GRID)?.discord;
            let delta = (d1 - d2).abs();
            let bound_term = -4.0 * t * t.ln();
            let ratio = delta / (bound_term + slack * t);
            Ok(ContinuityRow { t, discord_rho: d1, discord_sigma: d2, delta_d: delta, bound_term, ratio, flagged: ratio > 1.0 })
        })
        .collect()
}

/// Mixes `s` with a random X state: `(1-ε) s + ε σ`.
pub fn perturb_xstate<R: rand::Rng + ?Sized>(rng: &mut R, s: &XState, eps: f64) -> XState {
    let o = crate::xstate::random_xstate(rng, false);
    let mix = |x: f64, y: f64| (1.0 - eps) * x + eps * y;
    XState {
        a: mix(s.a, o.a),
        b: mix(s.b, o.b),
        c: mix(s.c, o.c),
        d: mix(s.d, o.d),
        alpha: mix(s.alpha, o.alpha),
        beta: mix(s.beta, o.beta),
    }
}

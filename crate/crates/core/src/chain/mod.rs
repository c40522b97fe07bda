//! The four spin chains: model parameters, phase classification, exact
//! free-fermion correlators and leading-order asymptotics.

use std::fmt;

use crate::error::{Error, Result};
use crate::xstate::PairCorrelators;

mod asymptotic;
mod free_fermion;
mod prefactors;

pub use asymptotic::{asymptotic_correlators, limit_correlators, long_range_order, prefactor_set};
pub use free_fermion::{
    exact_correlators, exact_correlators_mp, fermion_moment, magnetization, toeplitz_det, MomentTable, MAX_EXACT_R,
    XX_OFFSET,
};
pub use prefactors::{
    a1_prefactor, a4_prefactor, field_prefactors, lambda_param, xxz_prefactors, LambdaParam, PrefactorSet, GLAISHER,
};

/// Tolerance for placing a parameter exactly on a phase boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelSpec {
    /// `H = Σ σxσx + σyσy + Δ σzσz`.
    Xxz { delta: f64 },
    /// `H = -Σ (σxσx + α σyσy)`, `0 ≤ α ≤ 1`.
    Xy { alpha: f64 },
    /// `H = -Σ (σxσx + h σz)`, `h ≥ 0`.
    Tfim { h: f64 },
    /// `H = -Σ ((1+γ)/2 σxσx + (1-γ)/2 σyσy + h σz)`, `0 < γ ≤ 1`, `h ≥ 0`.
    XyField { gamma: f64, h: f64 },
}

impl ModelSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            ModelSpec::Xxz { delta } => delta.is_finite(),
            ModelSpec::Xy { alpha } => (0.0..=1.0).contains(&alpha),
            ModelSpec::Tfim { h } => h.is_finite() && h >= 0.0,
            ModelSpec::XyField { gamma, h } => gamma > 0.0 && gamma <= 1.0 && h.is_finite() && h >= 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Validation(format!("parameters out of range: {self}")))
        }
    }

    /// Anisotropy and field `(γ, h)` of the equivalent free-fermion chain.
    /// XY(α) maps to `γ = (1-α)/(1+α)`, `h = 0` after an overall rescale of
    /// the couplings, which leaves ground-state correlators unchanged.
    pub fn free_fermion(&self) -> Option<(f64, f64)> {
        match *self {
            ModelSpec::Xxz { .. } => None,
            ModelSpec::Xy { alpha } => Some(((1.0 - alpha) / (1.0 + alpha), 0.0)),
            ModelSpec::Tfim { h } => Some((1.0, h)),
            ModelSpec::XyField { gamma, h } => Some((gamma, h)),
        }
    }

    pub fn is_free_fermion(&self) -> bool {
        self.free_fermion().is_some()
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::Xxz { .. } => "xxz",
            ModelSpec::Xy { .. } => "xy",
            ModelSpec::Tfim { .. } => "tfim",
            ModelSpec::XyField { .. } => "xyfield",
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::Xxz { delta } => write!(f, "xxz(delta={delta})"),
            ModelSpec::Xy { alpha } => write!(f, "xy(alpha={alpha})"),
            ModelSpec::Tfim { h } => write!(f, "tfim(h={h})"),
            ModelSpec::XyField { gamma, h } => write!(f, "xyfield(gamma={gamma}, h={h})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RegimeTag {
    XxzCritical { eta: f64 },
    XxzHeisenberg,
    XxzGapped,
    XyGapped,
    XyCritical,
    TfimCritical,
    TfimPara,
    TfimFerro,
    XyfCritical,
    XyfPara,
    XyfFerroOuter,
    XyfDisorderCircle,
    XyfFerroInner,
}

impl RegimeTag {
    pub fn is_critical(&self) -> bool {
        matches!(
            self,
            RegimeTag::XxzCritical { .. }
                | RegimeTag::XxzHeisenberg
                | RegimeTag::XyCritical
                | RegimeTag::TfimCritical
                | RegimeTag::XyfCritical
        )
    }

    /// Regimes with long-range order, where discord tends to a nonzero limit.
    pub fn has_limit_offset(&self) -> bool {
        matches!(
            self,
            RegimeTag::TfimFerro | RegimeTag::XyfFerroOuter | RegimeTag::XyfDisorderCircle | RegimeTag::XyfFerroInner
        )
    }
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegimeTag::XxzCritical { eta } => write!(f, "XXZ_Critical(eta={eta})"),
            RegimeTag::XxzHeisenberg => f.write_str("XXZ_Heisenberg"),
            RegimeTag::XxzGapped => f.write_str("XXZ_Gapped"),
            RegimeTag::XyGapped => f.write_str("XY_Gapped"),
            RegimeTag::XyCritical => f.write_str("XY_Critical"),
            RegimeTag::TfimCritical => f.write_str("TFIM_Critical"),
            RegimeTag::TfimPara => f.write_str("TFIM_Para"),
            RegimeTag::TfimFerro => f.write_str("TFIM_Ferro"),
            RegimeTag::XyfCritical => f.write_str("XYF_Critical"),
            RegimeTag::XyfPara => f.write_str("XYF_Para"),
            RegimeTag::XyfFerroOuter => f.write_str("XYF_FerroOuter"),
            RegimeTag::XyfDisorderCircle => f.write_str("XYF_DisorderCircle"),
            RegimeTag::XyfFerroInner => f.write_str("XYF_FerroInner"),
        }
    }
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= BOUNDARY_TOL
}

/// Phase of a model. XYField at `h = 0` with `γ < 1` is the zero-field XY
/// chain and is tagged inner ferromagnetic.
pub fn classify_regime(m: &ModelSpec) -> Result<RegimeTag> {
    m.validate()?;
    Ok(match *m {
        ModelSpec::Xxz { delta } => {
            if delta <= -1.0 {
                return Err(Error::Unsupported(format!("ferromagnetic XXZ regime delta = {delta} <= -1")));
            } else if near(delta, 1.0) {
                RegimeTag::XxzHeisenberg
            } else if delta > 1.0 {
                RegimeTag::XxzGapped
            } else {
                RegimeTag::XxzCritical { eta: (-delta).acos() / std::f64::consts::PI }
            }
        }
        ModelSpec::Xy { alpha } => {
            if near(alpha, 1.0) {
                RegimeTag::XyCritical
            } else {
                RegimeTag::XyGapped
            }
        }
        ModelSpec::Tfim { h } => {
            if near(h, 1.0) {
                RegimeTag::TfimCritical
            } else if h > 1.0 {
                RegimeTag::TfimPara
            } else {
                RegimeTag::TfimFerro
            }
        }
        ModelSpec::XyField { gamma, h } => {
            let circle = (1.0 - gamma * gamma).max(0.0).sqrt();
            if near(h, 1.0) {
                RegimeTag::XyfCritical
            } else if h > 1.0 {
                RegimeTag::XyfPara
            } else if near(h, circle) {
                RegimeTag::XyfDisorderCircle
            } else if h > circle {
                RegimeTag::XyfFerroOuter
            } else {
                RegimeTag::XyfFerroInner
            }
        }
    })
}

/// Correlators of the exact free-fermion solution or of the asymptotic
/// formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Source {
    Exact,
    Asymptotic,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Exact => "exact",
            Source::Asymptotic => "asymptotic",
        })
    }
}

/// Correlators for `r` from the chosen source.
pub fn correlators(m: &ModelSpec, r: usize, source: Source) -> Result<PairCorrelators> {
    match source {
        Source::Exact => exact_correlators(m, r),
        Source::Asymptotic => asymptotic_correlators(m, r),
    }
}

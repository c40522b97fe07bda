//! Scalar abstraction shared by the double-precision and extended-precision
//! evaluation paths.
//!
//! Most of the crate works in `f64`. Gapped spin chains, however, produce
//! two-site discord values that decay like `h^{-2r}` and quickly fall below the
//! resolution of entropies of order one. The closed-form X-state formulas and
//! the free-fermion Toeplitz determinants are therefore written against
//! [`Real`], which is implemented for `f64` and for [`Mp`], a fixed-precision
//! binary float.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};

/// Working precision of [`Mp`] in bits (about 96 decimal digits).
pub const MP_PRECISION_BITS: usize = 320;

const RM: RoundingMode = RoundingMode::ToEven;

pub trait Real:
    Clone
    + fmt::Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn abs(&self) -> Self;
    fn pi() -> Self;

    /// Relative resolution of the type.
    fn epsilon() -> f64;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }

    fn one() -> Self {
        Self::from_f64(1.0)
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn pi() -> Self {
        std::f64::consts::PI
    }
    fn epsilon() -> f64 {
        f64::EPSILON
    }
}

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constants cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Extended-precision float with [`MP_PRECISION_BITS`] bits of mantissa.
#[derive(Clone)]
pub struct Mp(BigFloat);

impl Mp {
    pub fn new(x: f64) -> Self {
        Mp(BigFloat::from_f64(x, MP_PRECISION_BITS))
    }

    pub fn from_i64(n: i64) -> Self {
        Mp(BigFloat::from_i64(n, MP_PRECISION_BITS))
    }

    pub fn is_nan(&self) -> bool {
        self.0.is_nan()
    }

    pub fn powi(&self, n: i32) -> Self {
        let p = Mp(self.0.powi(n.unsigned_abs() as usize, MP_PRECISION_BITS, RM));
        if n < 0 {
            Mp::one() / p
        } else {
            p
        }
    }
}

impl fmt::Debug for Mp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mp({:e})", self.to_f64())
    }
}

impl PartialEq for Mp {
    fn eq(&self, other: &Self) -> bool {
        self.0.cmp(&other.0) == Some(0)
    }
}

impl PartialOrd for Mp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

impl Add for Mp {
    type Output = Mp;
    fn add(self, rhs: Mp) -> Mp {
        Mp(self.0.add(&rhs.0, MP_PRECISION_BITS, RM))
    }
}

impl Sub for Mp {
    type Output = Mp;
    fn sub(self, rhs: Mp) -> Mp {
        Mp(self.0.sub(&rhs.0, MP_PRECISION_BITS, RM))
    }
}

impl Mul for Mp {
    type Output = Mp;
    fn mul(self, rhs: Mp) -> Mp {
        Mp(self.0.mul(&rhs.0, MP_PRECISION_BITS, RM))
    }
}

impl Div for Mp {
    type Output = Mp;
    fn div(self, rhs: Mp) -> Mp {
        Mp(self.0.div(&rhs.0, MP_PRECISION_BITS, RM))
    }
}

impl Neg for Mp {
    type Output = Mp;
    fn neg(self) -> Mp {
        Mp(self.0.neg())
    }
}

impl Real for Mp {
    fn from_f64(x: f64) -> Self {
        Mp::new(x)
    }

    fn to_f64(&self) -> f64 {
        if self.0.is_nan() {
            return f64::NAN;
        }
        if self.0.is_inf_pos() {
            return f64::INFINITY;
        }
        if self.0.is_inf_neg() {
            return f64::NEG_INFINITY;
        }
        if self.0.is_zero() {
            return 0.0;
        }
        let Some((words, _, sign, exponent, _)) = self.0.as_raw_parts() else {
            return f64::NAN;
        };
        // Normalized mantissa 0.1xxx in little-endian words; the top word
        // carries more than the 53 bits an f64 can hold.
        let top = *words.last().unwrap_or(&0) as f64;
        let mut value = top;
        let mut e = exponent as i64 - 64;
        while e > 0 {
            let step = e.min(1000);
            value *= 2f64.powi(step as i32);
            e -= step;
        }
        while e < 0 {
            let step = (-e).min(1000);
            value /= 2f64.powi(step as i32);
            e += step;
        }
        if sign == Sign::Neg {
            -value
        } else {
            value
        }
    }

    fn sqrt(&self) -> Self {
        Mp(self.0.sqrt(MP_PRECISION_BITS, RM))
    }

    fn ln(&self) -> Self {
        with_consts(|cc| Mp(self.0.ln(MP_PRECISION_BITS, RM, cc)))
    }

    fn exp(&self) -> Self {
        with_consts(|cc| Mp(self.0.exp(MP_PRECISION_BITS, RM, cc)))
    }

    fn sin(&self) -> Self {
        with_consts(|cc| Mp(self.0.sin(MP_PRECISION_BITS, RM, cc)))
    }

    fn cos(&self) -> Self {
        with_consts(|cc| Mp(self.0.cos(MP_PRECISION_BITS, RM, cc)))
    }

    fn abs(&self) -> Self {
        Mp(self.0.abs())
    }

    fn pi() -> Self {
        with_consts(|cc| Mp(cc.pi(MP_PRECISION_BITS, RM)))
    }

    fn epsilon() -> f64 {
        2f64.powi(-(MP_PRECISION_BITS as i32) + 1)
    }
}

/// Entropy kernel `-x ln x` with `0 ln 0 = 0`; non-positive arguments map to zero.
pub fn xlogx_neg<T: Real>(x: &T) -> T {
    if x.is_positive() {
        -(x.clone() * x.ln())
    } else {
        T::zero()
    }
}

/// Binary entropy `H(p) = -p ln p - (1-p) ln(1-p)` in nats.
pub fn binary_entropy<T: Real>(p: &T) -> T {
    xlogx_neg(p) + xlogx_neg(&(T::one() - p.clone()))
}

//! Spin^c characteristic numbers and the homomorphism to `Omega_4^{Pin+} = Z/16`.
//!
//! A simply connected spin^c 4-manifold `(B, d)` has cobordism coordinates
//! `(<d^2,[B]>, ind(B,d))` with `ind = (<d^2,[B]> - sign(B)) / 8`. The pin^+
//! class of the characteristic submanifold of the associated `Z/2` circle
//! bundle is `beta = <d^2,[B]> + 4 eps ind (mod 16)`, where the sign `eps` is
//! not determined. Callers either pin `eps` or report both branches.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{CohomologyClass, IntersectionForm};

/// Coordinates of a class in `Omega_4^{Spin^c} = Z^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SpincClass {
    d_squared: i64,
    index: i64,
}

impl SpincClass {
    /// From `<d^2,[B]>` and `sign(B)`; fails unless `8 | d^2 - sign`.
    pub fn from_numbers(d_squared: i64, signature: i64) -> Result<Self> {
        let diff = d_squared - signature;
        if diff.rem_euclid(8) != 0 {
            return Err(Error::Internal(format!(
                "spin^c index (d^2 - sign)/8 = ({d_squared} - {signature})/8 is not integral"
            )));
        }
        Ok(Self {
            d_squared,
            index: diff / 8,
        })
    }

    /// Direct coordinates, the generators being `(1,0)` and `(9,1)`.
    pub fn new(d_squared: i64, index: i64) -> Self {
        Self { d_squared, index }
    }

    pub fn d_squared(&self) -> i64 {
        self.d_squared
    }

    pub fn index(&self) -> i64 {
        self.index
    }

    pub fn signature(&self) -> i64 {
        self.d_squared - 8 * self.index
    }
}

/// The unresolved sign in the pin^+ formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EpsilonSign {
    Plus,
    Minus,
}

impl EpsilonSign {
    pub const BOTH: [EpsilonSign; 2] = [EpsilonSign::Plus, EpsilonSign::Minus];

    pub fn value(self) -> i64 {
        match self {
            EpsilonSign::Plus => 1,
            EpsilonSign::Minus => -1,
        }
    }

    pub fn from_value(v: i64) -> Result<Self> {
        match v {
            1 => Ok(EpsilonSign::Plus),
            -1 => Ok(EpsilonSign::Minus),
            _ => Err(Error::Parse(format!("epsilon must be +1 or -1, got {v}"))),
        }
    }
}

impl fmt::Display for EpsilonSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EpsilonSign::Plus => "+1",
            EpsilonSign::Minus => "-1",
        })
    }
}

impl FromStr for EpsilonSign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" | "+1" | "+" | "plus" => Ok(EpsilonSign::Plus),
            "-1" | "-" | "minus" => Ok(EpsilonSign::Minus),
            other => Err(Error::Parse(format!(
                "epsilon must be +1 or -1, got `{other}`"
            ))),
        }
    }
}

impl Serialize for EpsilonSign {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i64(self.value())
    }
}

/// Element of `Z/16`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PinPlusClass(u8);

impl PinPlusClass {
    pub fn new(value: i64) -> Self {
        Self(value.rem_euclid(16) as u8)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn negate(self) -> Self {
        Self::new(-(self.0 as i64))
    }

    /// Representative of `{x, -x}` in `0..=8`, the label `q` of `X(q)`.
    pub fn up_to_sign(self) -> u8 {
        self.0.min(16 - self.0)
    }

    pub fn eq_up_to_sign(self, other: Self) -> bool {
        self.up_to_sign() == other.up_to_sign()
    }
}

impl std::ops::Add for PinPlusClass {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.0 as i64 + rhs.0 as i64)
    }
}

impl fmt::Display for PinPlusClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `(<d^2,[B]>, ind(B,d))` for a characteristic `d`. Primitivity is not
/// required here.
pub fn spinc_class(form: &IntersectionForm, d: &CohomologyClass) -> Result<SpincClass> {
    if !form.is_characteristic(d)? {
        return Err(Error::NotCharacteristic(d.to_string()));
    }
    SpincClass::from_numbers(form.square(d)?, form.signature())
}

/// The homomorphism `Omega_4^{Spin^c} -> Z/16` in coordinates.
pub fn beta_of_class(class: SpincClass, eps: EpsilonSign) -> PinPlusClass {
    PinPlusClass::new(class.d_squared + 4 * eps.value() * class.index)
}

/// `beta(B, d)` for a primitive characteristic `d`.
pub fn beta(
    form: &IntersectionForm,
    d: &CohomologyClass,
    eps: EpsilonSign,
) -> Result<PinPlusClass> {
    let class = spinc_class(form, d)?;
    if !d.is_primitive()? {
        return Err(Error::NotPrimitive(d.to_string()));
    }
    Ok(beta_of_class(class, eps))
}

/// Both `eps` branches, `[beta_plus, beta_minus]`.
pub fn beta_branches(form: &IntersectionForm, d: &CohomologyClass) -> Result<[PinPlusClass; 2]> {
    Ok([
        beta(form, d, EpsilonSign::Plus)?,
        beta(form, d, EpsilonSign::Minus)?,
    ])
}

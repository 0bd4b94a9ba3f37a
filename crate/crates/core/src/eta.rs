//! Eta invariants of spin^c Dirac operators on circle-bundle total spaces.
//!
//! For a free isometric circle action with positive scalar curvature on a
//! `(4n+1)`-manifold with quotient `B`, flat connection and vanishing real
//! Pontryagin classes, the eta invariant of the spin^c Dirac operator for the
//! bundle with Chern class `l d`, `l` even, is the characteristic number
//!
//! ```text
//! < sinh(d/2) A-hat(TB) / sinh(l d/2), [B] >.
//! ```
//!
//! These geometric hypotheses are preconditions of the caller; only the
//! topological formula is evaluated. In base dimension 4 it reduces to
//! `-((l^2 - 1) d^2 + p_1) / (24 l)` with `p_1 = 3 sign(B)`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::bundle::chern_family_type_iii;
use crate::cobordism::EpsilonSign;
use crate::error::{Error, Result};
use crate::lattice::{CohomologyClass, IntersectionForm};
use crate::series::{ahat_table, format_rational, sinh_ratio, GradedSeries};

/// Exact value of an eta invariant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EtaValue(BigRational);

impl EtaValue {
    pub fn new(value: BigRational) -> Self {
        Self(value)
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl fmt::Display for EtaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl Serialize for EtaValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `<monomial, [B]>` keyed by the monomial as text, e.g. `"d^2"`, `"p1^2"`,
/// `"d^4 p1"`.
pub type PairingData = BTreeMap<String, i64>;

fn check_level(level: i64) -> Result<u32> {
    if level < 2 || level % 2 != 0 || level > u32::MAX as i64 {
        return Err(Error::InvalidLevel(level));
    }
    Ok(level as u32)
}

/// Pairing data of a 4-dimensional base: `d^2` and `p1 = 3 sign`.
pub fn pairing_data_dim4(form: &IntersectionForm, d: &CohomologyClass) -> Result<PairingData> {
    Ok(PairingData::from([
        ("d^2".to_string(), form.square(d)?),
        ("p1".to_string(), 3 * form.signature()),
    ]))
}

/// `-((l^2 - 1) <d^2> + 3 sign) / (24 l)`, for characteristic primitive `d`
/// and even `l >= 2`.
pub fn eta_closed_form_dim5(
    form: &IntersectionForm,
    d: &CohomologyClass,
    level: i64,
) -> Result<EtaValue> {
    let l = check_level(level)? as i64;
    if !form.is_characteristic(d)? {
        return Err(Error::NotCharacteristic(d.to_string()));
    }
    if !d.is_primitive()? {
        return Err(Error::NotPrimitive(d.to_string()));
    }
    let d2 = BigInt::from(form.square(d)?);
    let num = -(BigInt::from(l * l - 1) * d2 + BigInt::from(3 * form.signature()));
    Ok(EtaValue(BigRational::new(num, BigInt::from(24 * l))))
}

type IntegrandCache = Mutex<HashMap<(u32, usize), Arc<GradedSeries>>>;

/// Degree-`4n` part of `sinh(d/2) A-hat / sinh(l d/2)`, memoised per `(l, n)`.
pub fn eta_integrand(level: i64, n: usize) -> Result<Arc<GradedSeries>> {
    let l = check_level(level)?;
    if n == 0 {
        return Err(Error::Precondition("base dimension 4n needs n >= 1".into()));
    }
    static CACHE: OnceLock<IntegrandCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().expect("cache lock").get(&(l, n)) {
        return Ok(s.clone());
    }
    let order = 4 * n as u32;
    let ratio = sinh_ratio(l, order)?;
    let ahat = ahat_table(n).total();
    let top = Arc::new(ratio.try_mul(&ahat)?.extract_degree(order));
    cache
        .lock()
        .expect("cache lock")
        .insert((l, n), top.clone());
    Ok(top)
}

/// Evaluates the general formula on abstract pairing data for a base of
/// dimension `4n`. Every monomial of degree `4n` with a nonzero coefficient
/// must be paired; entries of other degrees are rejected.
pub fn eta_series_general(level: i64, n: usize, pairing: &PairingData) -> Result<EtaValue> {
    let integrand = eta_integrand(level, n)?;
    let grading = integrand.grading().clone();
    let mut values = HashMap::new();
    for (name, v) in pairing {
        let m = grading.parse_monomial(name)?;
        let deg = grading.degree_of(&m);
        if deg != 4 * n as u32 {
            return Err(Error::Precondition(format!(
                "pairing `{name}` has degree {deg}, expected {}",
                4 * n
            )));
        }
        values.insert(m, BigRational::from_integer(BigInt::from(*v)));
    }
    let v = integrand.contract(4 * n as u32, |m| values.get(m).cloned())?;
    Ok(EtaValue(v))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaRow {
    pub k: u64,
    pub d_k: CohomologyClass,
    pub eta: EtaValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EtaFamilyReport {
    pub base: (usize, usize),
    pub epsilon: EpsilonSign,
    /// `c` in `[P] = sign + 4c`.
    pub target: u8,
    pub rows: Vec<EtaRow>,
    pub distinct_count: usize,
}

/// Eta values (`l = 2`) over the first `count` members of the Type III family
/// on `cp(a,b)` with `[P] = sign`.
pub fn eta_family_table(
    a: usize,
    b: usize,
    count: usize,
    eps: EpsilonSign,
) -> Result<EtaFamilyReport> {
    eta_family_table_for_target(a, b, count, 0, eps)
}

pub fn eta_family_table_for_target(
    a: usize,
    b: usize,
    count: usize,
    target: u8,
    eps: EpsilonSign,
) -> Result<EtaFamilyReport> {
    if a + b < 2 {
        return Err(Error::Precondition(format!(
            "eta family needs a + b >= 2, got cp({a},{b})"
        )));
    }
    let form = IntersectionForm::diagonal(a, b);
    let rows = chern_family_type_iii(&form, count, target, eps)?
        .into_iter()
        .map(|m| {
            Ok(EtaRow {
                eta: eta_closed_form_dim5(&form, &m.class, 2)?,
                k: m.k,
                d_k: m.class,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let distinct_count = rows.iter().map(|r| &r.eta).collect::<BTreeSet<_>>().len();
    Ok(EtaFamilyReport {
        base: (a, b),
        epsilon: eps,
        target,
        rows,
        distinct_count,
    })
}

/// Number of distinct eta values in the family, hence a lower bound on the
/// path components of the positive Ricci (and positive scalar) moduli space
/// of the common total space.
pub fn moduli_component_lower_bound(
    a: usize,
    b: usize,
    count: usize,
    eps: EpsilonSign,
) -> Result<usize> {
    Ok(eta_family_table(a, b, count, eps)?.distinct_count)
}

impl EtaValue {
    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

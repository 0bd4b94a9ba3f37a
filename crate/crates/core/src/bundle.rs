//! Total spaces of principal circle bundles over simply connected 4-manifolds.
//!
//! A bundle over `B` with first Chern class `k d`, `d` primitive, has an
//! orientable total space `M` with `pi_1(M) = Z/k`, torsion-free `H_2` and
//! `b_2(M) = b_2(B) - 1`. For `k = 2` the manifold falls into one of three
//! types by the second Stiefel-Whitney classes of `M` and its universal cover:
//!
//! | type | condition on `(B, d)`            | invariant                         |
//! |------|----------------------------------|-----------------------------------|
//! | II   | `B` spin                         | `b_2`                             |
//! | III  | `B` non-spin, `d` characteristic | `b_2`, `+-[P]` in `Z/16`          |
//! | I    | otherwise                        | `b_2`, `q` mod 8 up to sign, `s`  |
//!
//! Type III manifolds are `X(q) #_{S^1} (#^k (S^2 x S^2) x S^1)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::cobordism::{beta, EpsilonSign};
use crate::error::{Error, Result};
use crate::lattice::{CohomologyClass, IntersectionForm};

/// Base, multiplier `k` and primitive `d`; the first Chern class is `k d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleSpec {
    base: IntersectionForm,
    multiplier: u64,
    primitive_class: CohomologyClass,
}

impl BundleSpec {
    pub fn new(
        base: IntersectionForm,
        multiplier: i64,
        primitive_class: CohomologyClass,
    ) -> Result<Self> {
        if multiplier < 1 {
            return Err(Error::InvalidMultiplier(multiplier));
        }
        if base.rank() == 0 {
            return Err(Error::EmptyBase);
        }
        if primitive_class.len() != base.rank() {
            return Err(Error::DimensionMismatch {
                expected: base.rank(),
                found: primitive_class.len(),
            });
        }
        if !primitive_class.is_primitive()? {
            return Err(Error::NotPrimitive(primitive_class.to_string()));
        }
        Ok(Self {
            base,
            multiplier: multiplier as u64,
            primitive_class,
        })
    }

    pub fn base(&self) -> &IntersectionForm {
        &self.base
    }

    pub fn multiplier(&self) -> u64 {
        self.multiplier
    }

    pub fn primitive_class(&self) -> &CohomologyClass {
        &self.primitive_class
    }

    pub fn chern_class(&self) -> CohomologyClass {
        self.primitive_class.scale(self.multiplier as i64)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ManifoldType {
    #[serde(rename = "I")]
    I,
    #[serde(rename = "II")]
    II,
    #[serde(rename = "III")]
    III,
    /// `pi_1 != Z/2`.
    #[serde(rename = "not-applicable")]
    NotApplicable,
}

impl fmt::Display for ManifoldType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ManifoldType::I => "I",
            ManifoldType::II => "II",
            ManifoldType::III => "III",
            ManifoldType::NotApplicable => "not-applicable",
        })
    }
}

/// `X(q) #_{S^1} (#^summands (S^2 x S^2) x S^1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StandardName {
    pub q: u8,
    pub summands: u32,
}

impl StandardName {
    /// Solves `b_2 = 2 summands + (1 + (-1)^q)/2` for the summand count.
    /// Odd `q` other than 1 needs at least one summand.
    pub fn from_invariants(q: u8, b2: u32) -> Result<Self> {
        if q > 8 {
            return Err(Error::Internal(format!("X(q) label {q} outside 0..=8")));
        }
        let even_q = u32::from(q.is_multiple_of(2));
        if b2 < even_q || !(b2 - even_q).is_multiple_of(2) {
            return Err(Error::Internal(format!(
                "b2 = {b2} is incompatible with q = {q} (parity of [P] must match b2 + 1)"
            )));
        }
        let summands = (b2 - even_q) / 2;
        if summands == 0 && matches!(q, 3 | 5 | 7) {
            return Err(Error::Internal(format!(
                "X({q}) with no S^2 x S^2 summands is not a free circle quotient"
            )));
        }
        Ok(Self { q, summands })
    }

    pub fn b2(&self) -> u32 {
        2 * self.summands + u32::from(self.q.is_multiple_of(2))
    }

    pub fn is_rp5(&self) -> bool {
        self.q == 1 && self.summands == 0
    }
}

impl fmt::Display for StandardName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.summands == 0 {
            write!(f, "X({})", self.q)?;
            if self.is_rp5() {
                write!(f, " = RP^5")?;
            }
            Ok(())
        } else {
            write!(
                f,
                "X({}) #_S1 (#^{} (S^2 x S^2) x S^1)",
                self.q, self.summands
            )
        }
    }
}

impl Serialize for StandardName {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("StandardName", 3)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("summands", &self.summands)?;
        st.serialize_field("label", &self.to_string())?;
        st.end()
    }
}

/// Diffeomorphism invariants of a total space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiveManifoldClass {
    pub fundamental_group_order: u64,
    pub b2: u32,
    pub orientable: bool,
    pub h2_torsion_free: bool,
    #[serde(rename = "type")]
    pub manifold_type: ManifoldType,
    /// Branch of the pin^+ sign used for `pin_plus`.
    pub epsilon: Option<EpsilonSign>,
    /// `[P]` up to sign, represented in `0..=8` (Type III).
    pub pin_plus: Option<u8>,
    /// `<d^2,[B]>` mod 8 up to sign, in `0..=4` (Type I).
    pub type_i_q: Option<u8>,
    /// Parity with `q + s = b2 + 1` mod 2 (Type I).
    pub type_i_s: Option<u8>,
    pub standard_name: Option<StandardName>,
}

impl FiveManifoldClass {
    /// Type III with the two-manifold invariants only (for queries that do not
    /// start from a bundle).
    pub fn type_iii(b2: u32, pin_plus: u8) -> Result<Self> {
        let q = crate::cobordism::PinPlusClass::new(pin_plus as i64).up_to_sign();
        Ok(Self {
            fundamental_group_order: 2,
            b2,
            orientable: true,
            h2_torsion_free: true,
            manifold_type: ManifoldType::III,
            epsilon: None,
            pin_plus: Some(q),
            type_i_q: None,
            type_i_s: None,
            standard_name: Some(StandardName::from_invariants(q, b2)?),
        })
    }

    pub fn type_ii(b2: u32) -> Self {
        Self {
            fundamental_group_order: 2,
            b2,
            orientable: true,
            h2_torsion_free: true,
            manifold_type: ManifoldType::II,
            epsilon: None,
            pin_plus: None,
            type_i_q: None,
            type_i_s: None,
            standard_name: None,
        }
    }

    pub fn type_i(b2: u32, q: u8) -> Self {
        let q = (q % 8).min(8 - q % 8);
        Self {
            fundamental_group_order: 2,
            b2,
            orientable: true,
            h2_torsion_free: true,
            manifold_type: ManifoldType::I,
            epsilon: None,
            pin_plus: None,
            type_i_q: Some(q),
            type_i_s: Some(((b2 + 1 + q as u32) % 2) as u8),
            standard_name: None,
        }
    }

    /// Invariants of the four exceptional Type I manifolds
    /// `X(q) #_{S^1} (CP^2 x S^1)` and `X(q) #_{S^1} (S^2 x RP^3)`, `q = 0, 4`.
    /// No definite base carries a class with `<d^2> = 0, 4` mod 8 in ranks 3
    /// and 4, so these quotient sets exclude definite forms.
    pub fn is_exceptional_type_i(&self) -> bool {
        self.manifold_type == ManifoldType::I
            && matches!(self.type_i_q, Some(0 | 4))
            && matches!(self.b2, 2 | 3)
    }
}

/// Classifies the total space. For multiplier 2 this decides the type; for
/// other multipliers only `pi_1 = Z/k` and `b_2` are recorded.
pub fn classify_total_space(spec: &BundleSpec, eps: EpsilonSign) -> Result<FiveManifoldClass> {
    let base = &spec.base;
    let d = &spec.primitive_class;
    let b2 = (base.rank() - 1) as u32;
    let mut out = FiveManifoldClass {
        fundamental_group_order: spec.multiplier,
        b2,
        orientable: true,
        h2_torsion_free: true,
        manifold_type: ManifoldType::NotApplicable,
        epsilon: None,
        pin_plus: None,
        type_i_q: None,
        type_i_s: None,
        standard_name: None,
    };
    if spec.multiplier != 2 {
        return Ok(out);
    }
    if base.is_spin() {
        out.manifold_type = ManifoldType::II;
    } else if base.is_characteristic(d)? {
        let q = beta(base, d, eps)?.up_to_sign();
        out.manifold_type = ManifoldType::III;
        out.epsilon = Some(eps);
        out.pin_plus = Some(q);
        out.standard_name = Some(StandardName::from_invariants(q, b2)?);
    } else {
        let r = base.square(d)?.rem_euclid(8) as u8;
        let q = r.min(8 - r);
        out.manifold_type = ManifoldType::I;
        out.type_i_q = Some(q);
        out.type_i_s = Some(((b2 + 1 + q as u32) % 2) as u8);
    }
    Ok(out)
}

/// Labels `q` of the Type III total space over both sign branches; a set of
/// one or two values.
pub fn type_iii_candidates(spec: &BundleSpec) -> Result<BTreeSet<u8>> {
    let mut out = BTreeSet::new();
    for eps in EpsilonSign::BOTH {
        let m = classify_total_space(spec, eps)?;
        if m.manifold_type != ManifoldType::III {
            return Err(Error::Precondition(format!(
                "total space is type {}, not III",
                m.manifold_type
            )));
        }
        out.extend(m.pin_plus);
    }
    Ok(out)
}

/// Number of `q in 0..=8` with `q = +-sign(B)` mod 4, i.e. the number of
/// Type III diffeomorphism types over a fixed non-spin base: 2, 3 or 4 for
/// signature 2, 0, or odd mod 4.
pub fn count_type_iii_diffeo_types(form: &IntersectionForm) -> Result<usize> {
    if form.is_spin() {
        return Err(Error::SpinBase);
    }
    let s = form.signature();
    Ok((0..=8i64)
        .filter(|q| (q - s).rem_euclid(4) == 0 || (q + s).rem_euclid(4) == 0)
        .count())
}

/// Whether `form` is the quotient of `m` by some free circle action, row by
/// row through the table of necessary and sufficient conditions.
pub fn quotient_membership(m: &FiveManifoldClass, form: &IntersectionForm) -> Result<bool> {
    if m.fundamental_group_order != 2 {
        return Err(Error::NotZ2(m.fundamental_group_order));
    }
    let rank_ok = form.rank() == m.b2 as usize + 1;
    Ok(match m.manifold_type {
        ManifoldType::II => form.is_spin() && rank_ok,
        ManifoldType::III => {
            let pin = m
                .pin_plus
                .ok_or_else(|| Error::Internal("type III class without pin^+ invariant".into()))?
                as i64;
            let s = form.signature();
            !form.is_spin()
                && rank_ok
                && ((s - pin).rem_euclid(4) == 0 || (s + pin).rem_euclid(4) == 0)
        }
        ManifoldType::I => {
            !form.is_spin() && rank_ok && !(m.is_exceptional_type_i() && form.is_definite())
        }
        ManifoldType::NotApplicable => return Err(Error::NotZ2(m.fundamental_group_order)),
    })
}

/// A standard simply connected 4-manifold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StandardQuotient {
    /// `#^a CP^2 # #^b CP^2-bar`
    Diagonal { a: usize, b: usize },
    /// `#^c S^2 x S^2`
    Even { c: usize },
}

impl StandardQuotient {
    pub fn form(&self) -> IntersectionForm {
        match *self {
            StandardQuotient::Diagonal { a, b } => IntersectionForm::diagonal(a, b),
            StandardQuotient::Even { c } => IntersectionForm::even(c),
        }
    }
}

impl fmt::Display for StandardQuotient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardQuotient::Diagonal { a, b } => write!(f, "cp({a},{b})"),
            StandardQuotient::Even { c } => write!(f, "even({c})"),
        }
    }
}

/// Quotients of the form `#^c S^2 x S^2` or `#^a CP^2 # #^b CP^2-bar`.
///
/// For Type III both lifts `c` of `+-[P]` to `0..16` are tried, each giving
/// `l` with `0 <= c - 4l < 4` and `a, b = (b2 + 1 +- (c - 4l)) / 2`. Every
/// output is checked against [`quotient_membership`].
pub fn enumerate_standard_quotients(m: &FiveManifoldClass) -> Result<Vec<StandardQuotient>> {
    if m.fundamental_group_order != 2 {
        return Err(Error::NotZ2(m.fundamental_group_order));
    }
    let b2 = m.b2 as usize;
    let mut out = BTreeSet::new();
    match m.manifold_type {
        ManifoldType::II => {
            if b2.is_multiple_of(2) {
                return Err(Error::Internal(format!(
                    "type II manifold with even b2 = {b2}"
                )));
            }
            out.insert(StandardQuotient::Even { c: b2.div_ceil(2) });
        }
        ManifoldType::I => {
            out.insert(StandardQuotient::Diagonal { a: b2, b: 1 });
        }
        ManifoldType::III => {
            let pin = m
                .pin_plus
                .ok_or_else(|| Error::Internal("type III class without pin^+ invariant".into()))?
                as usize;
            for c in [pin % 16, (16 - pin) % 16] {
                if c % 2 != (b2 + 1) % 2 {
                    return Err(Error::Internal(format!(
                        "[P] = {c} violates c = b2(M) + 1 mod 2 with b2 = {b2}"
                    )));
                }
                let l = c / 4;
                let rem = c - 4 * l;
                if rem > b2 + 1 {
                    continue;
                }
                out.insert(StandardQuotient::Diagonal {
                    a: (b2 + 1 + rem) / 2,
                    b: (b2 + 1 - rem) / 2,
                });
            }
        }
        ManifoldType::NotApplicable => return Err(Error::NotZ2(m.fundamental_group_order)),
    }
    if out.is_empty() {
        return Err(Error::Internal("no standard quotient found".into()));
    }
    for q in &out {
        if !quotient_membership(m, &q.form())? {
            return Err(Error::Internal(format!(
                "standard quotient {q} fails the membership test"
            )));
        }
    }
    Ok(out.into_iter().collect())
}

/// Solutions `k >= 0` of `(4 + 2 eps) k (k+1) = 4c (mod 16)`.
///
/// `(4 + 2 eps) x` mod 16 depends only on `x` mod 8 and `k(k+1)` mod 8 has
/// period 8 in `k`, so the solution set is a union of residue classes mod 8.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KCongruence {
    pub target: u8,
    pub epsilon: EpsilonSign,
    pub modulus: u64,
    pub residues: Vec<u64>,
    pub minimal: u64,
}

impl KCongruence {
    pub fn contains(&self, k: u64) -> bool {
        self.residues.contains(&(k % self.modulus))
    }

    /// All solutions in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0u64..).filter(move |&k| self.contains(k))
    }
}

fn congruence_holds(k: u64, target: u8, eps: EpsilonSign) -> bool {
    let k = k as i128;
    ((4 + 2 * eps.value() as i128) * k * (k + 1) - 4 * target as i128).rem_euclid(16) == 0
}

pub fn solve_k_congruence(target: u8, eps: EpsilonSign) -> Result<KCongruence> {
    if target > 3 {
        return Err(Error::InvalidTarget(target));
    }
    let scan: Vec<u64> = (0..16)
        .filter(|&k| congruence_holds(k, target, eps))
        .collect();
    let residues: Vec<u64> = scan.iter().copied().filter(|&k| k < 8).collect();
    if scan.iter().any(|&k| k >= 8 && !residues.contains(&(k - 8))) {
        return Err(Error::Internal("solution set is not periodic mod 8".into()));
    }
    let Some(&minimal) = residues.first() else {
        return Err(Error::Internal(format!(
            "(4 + 2 eps) k (k+1) = {} mod 16 has no solution for eps = {eps}",
            4 * target
        )));
    };
    Ok(KCongruence {
        target,
        epsilon: eps,
        modulus: 8,
        residues,
        minimal,
    })
}

/// One member `d_k` of a Chern-class family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyMember {
    pub k: u64,
    pub class: CohomologyClass,
}

fn diagonal_base(form: &IntersectionForm) -> Result<(usize, usize)> {
    form.diagonal_counts().ok_or(Error::NotDiagonal)
}

/// Type III family over `cp(a,b)`: `d_k = (1 + 2k, 1, ..., 1)` for the first
/// `count` admissible `k`, all giving total spaces with `[P] = +-(sign + 4c)`.
///
/// When `a = 0` the first coordinate sits in a `CP^2-bar` summand, which flips
/// the sign of `(4 + 2 eps) k (k+1)` in `beta`; the congruence is then solved
/// for `-c`.
pub fn chern_family_type_iii(
    form: &IntersectionForm,
    count: usize,
    target: u8,
    eps: EpsilonSign,
) -> Result<Vec<FamilyMember>> {
    let (a, b) = diagonal_base(form)?;
    if a + b < 2 {
        return Err(Error::Precondition(format!(
            "family needs a + b >= 2, got cp({a},{b})"
        )));
    }
    if target > 3 {
        return Err(Error::InvalidTarget(target));
    }
    let oriented = if a >= 1 { target } else { (4 - target) % 4 };
    let sol = solve_k_congruence(oriented, eps)?;
    Ok(sol
        .iter()
        .take(count)
        .map(|k| {
            let mut v = vec![1i64; a + b];
            v[0] = 1 + 2 * k as i64;
            FamilyMember {
                k,
                class: CohomologyClass::new(v),
            }
        })
        .collect())
}

/// Type I family over `cp(a,b)` with `<d_k^2> = +-q` mod 8, `d_k` primitive
/// and not characteristic:
///
/// | q | `b > 0`                      | `b = 0`                      |
/// |---|------------------------------|------------------------------|
/// | 0 | `(1+8k, 0, ..., 0, 1)`       | `(2+8k, 1, 1, 1, 1, 0, ...)` |
/// | 4 | `(2+8k, 1, 0, ..., 0, 1)`    | `(1+8k, 1, 1, 1, 0, ...)`    |
/// | 2 | `(1+8k, 1, 0, ..., 0)`       |                              |
/// | 1 | `(1+8k, 4, 0, ..., 0)`       |                              |
/// | 3 | `(1+8k, 2, 0, ..., 0)`       |                              |
///
/// Coordinates are listed positive summands first; if the requirements fail in
/// the given orientation the reversed orientation is tried.
pub fn chern_family_type_i(
    q: u8,
    form: &IntersectionForm,
    count: usize,
) -> Result<Vec<FamilyMember>> {
    let (a, b) = diagonal_base(form)?;
    let r = q % 8;
    let q = r.min(8 - r);
    // (positive, negative) counts as seen in each orientation
    let orientations = [(a, b, false), (b, a, true)];
    let pick = orientations
        .iter()
        .copied()
        .find(|&(pos, neg, _)| type_i_layout_fits(q, pos, neg))
        .ok_or_else(|| Error::Precondition(type_i_requirement(q, a, b)))?;
    let (pos, neg, reversed) = pick;
    let n = pos + neg;
    Ok((0..count as u64)
        .map(|k| {
            let k8 = 8 * k as i64;
            let mut v = vec![0i64; n];
            match (q, neg > 0) {
                (0, true) => {
                    v[0] = 1 + k8;
                    v[n - 1] = 1;
                }
                (0, false) => {
                    v[0] = 2 + k8;
                    v[1..5].fill(1);
                }
                (4, true) => {
                    v[0] = 2 + k8;
                    v[1] = 1;
                    v[n - 1] = 1;
                }
                (4, false) => {
                    v[0] = 1 + k8;
                    v[1..4].fill(1);
                }
                (2, _) => {
                    v[0] = 1 + k8;
                    v[1] = 1;
                }
                (1, _) => {
                    v[0] = 1 + k8;
                    v[1] = 4;
                }
                (3, _) => {
                    v[0] = 1 + k8;
                    v[1] = 2;
                }
                _ => unreachable!("q reduced to 0..=4"),
            }
            if reversed {
                // oriented layout is (original negatives, original positives)
                let (neg_part, pos_part) = v.split_at(pos);
                v = pos_part.iter().chain(neg_part).copied().collect();
            }
            FamilyMember {
                k,
                class: CohomologyClass::new(v),
            }
        })
        .collect())
}

fn type_i_layout_fits(q: u8, pos: usize, neg: usize) -> bool {
    let n = pos + neg;
    match q {
        0 if neg > 0 => pos >= 1 && n >= 3,
        0 => pos >= 5,
        4 if neg > 0 => pos >= 2,
        4 => pos >= 5,
        2 => pos >= 2 && n >= 3,
        1 | 3 => pos >= 1 && n >= 2,
        _ => false,
    }
}

fn type_i_requirement(q: u8, a: usize, b: usize) -> String {
    let need = match q {
        0 => "one orientation with a >= 1, b >= 1 and a + b >= 3, or a definite base of rank >= 5",
        4 => "one orientation with a >= 2 and b >= 1, or a definite base of rank >= 5",
        2 => "a >= 2 in one orientation and a + b >= 3",
        _ => "a + b >= 2",
    };
    format!("type I family for q = {q} needs {need}; got cp({a},{b})")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobordism::spinc_class;
    use crate::lattice::{classes_in_box, standard_forms};

    fn cls(v: &[i64]) -> CohomologyClass {
        CohomologyClass::new(v.to_vec())
    }

    fn spec(f: IntersectionForm, d: &[i64], k: i64) -> BundleSpec {
        BundleSpec::new(f, k, cls(d)).unwrap()
    }

    #[test]
    fn spec_validation() {
        let f = IntersectionForm::diagonal(1, 0);
        assert_eq!(
            BundleSpec::new(f.clone(), 0, cls(&[1])),
            Err(Error::InvalidMultiplier(0))
        );
        assert_eq!(
            BundleSpec::new(f.clone(), 2, cls(&[3])),
            Err(Error::NotPrimitive("3".into()))
        );
        assert_eq!(
            BundleSpec::new(f.clone(), 2, cls(&[0])),
            Err(Error::ZeroClass)
        );
        assert_eq!(
            BundleSpec::new(IntersectionForm::diagonal(0, 0), 2, cls(&[])),
            Err(Error::EmptyBase)
        );
        assert_eq!(spec(f, &[1], 2).chern_class(), cls(&[2]));
    }

    #[test]
    fn rp5_over_cp2() {
        for eps in EpsilonSign::BOTH {
            let m = classify_total_space(&spec(IntersectionForm::diagonal(1, 0), &[1], 2), eps)
                .unwrap();
            assert_eq!(m.manifold_type, ManifoldType::III);
            assert_eq!(m.b2, 0);
            assert_eq!(m.pin_plus, Some(1));
            let name = m.standard_name.unwrap();
            assert!(name.is_rp5());
            assert_eq!(name.to_string(), "X(1) = RP^5");
        }
    }

    #[test]
    fn type_ii_over_s2xs2() {
        let m = classify_total_space(
            &spec(IntersectionForm::even(1), &[1, 0], 2),
            EpsilonSign::Plus,
        )
        .unwrap();
        assert_eq!(m.manifold_type, ManifoldType::II);
        assert_eq!(m.b2, 1);
        assert_eq!(m.pin_plus, None);
    }

    #[test]
    fn type_iii_over_two_cp2_one_bar() {
        let m = classify_total_space(
            &spec(IntersectionForm::diagonal(2, 1), &[1, 1, 1], 2),
            EpsilonSign::Plus,
        )
        .unwrap();
        assert_eq!(m.manifold_type, ManifoldType::III);
        assert_eq!(m.b2, 2);
        assert_eq!(m.pin_plus, Some(1));
        assert_eq!(m.standard_name, Some(StandardName { q: 1, summands: 1 }));
    }

    #[test]
    fn type_i_invariants() {
        // d = (2,1) on cp(1,1): d^2 = 3, not characteristic
        let m = classify_total_space(
            &spec(IntersectionForm::diagonal(1, 1), &[2, 1], 2),
            EpsilonSign::Plus,
        )
        .unwrap();
        assert_eq!(m.manifold_type, ManifoldType::I);
        assert_eq!(m.type_i_q, Some(3));
        assert_eq!(m.type_i_s, Some(1));
        assert_eq!(
            (m.type_i_q.unwrap() as u32 + m.type_i_s.unwrap() as u32) % 2,
            (m.b2 + 1) % 2
        );
    }

    #[test]
    fn other_multipliers() {
        let m = classify_total_space(
            &spec(IntersectionForm::diagonal(2, 0), &[1, 0], 3),
            EpsilonSign::Plus,
        )
        .unwrap();
        assert_eq!(m.manifold_type, ManifoldType::NotApplicable);
        assert_eq!(m.fundamental_group_order, 3);
        assert_eq!(m.b2, 1);
        assert!(enumerate_standard_quotients(&m).is_err());
        assert_eq!(
            quotient_membership(&m, &IntersectionForm::diagonal(2, 0)),
            Err(Error::NotZ2(3))
        );
    }

    #[test]
    fn trichotomy_exhaustive() {
        for f in standard_forms(4) {
            for d in classes_in_box(f.rank(), 3) {
                if d.is_zero() || !d.is_primitive().unwrap() {
                    continue;
                }
                let m = classify_total_space(&spec(f.clone(), d.coords(), 2), EpsilonSign::Plus)
                    .unwrap();
                let expect = if f.is_spin() {
                    ManifoldType::II
                } else if f.is_characteristic(&d).unwrap() {
                    ManifoldType::III
                } else {
                    ManifoldType::I
                };
                assert_eq!(m.manifold_type, expect, "{f} {d}");
                assert_eq!(m.b2 as usize, f.rank() - 1);
                if let Some(name) = m.standard_name {
                    assert_eq!(name.b2(), m.b2);
                }
                if m.manifold_type == ManifoldType::I {
                    let q = m.type_i_q.unwrap() as u32;
                    assert_eq!((q + m.type_i_s.unwrap() as u32) % 2, (m.b2 + 1) % 2);
                }
            }
        }
    }

    #[test]
    fn type_iii_realises_exactly_signature_mod_4() {
        for f in standard_forms(4) {
            if f.is_spin() {
                continue;
            }
            let mut got = BTreeSet::new();
            for d in crate::lattice::characteristic_classes_in_box(&f, 5) {
                if !d.is_primitive().unwrap() {
                    continue;
                }
                for eps in EpsilonSign::BOTH {
                    let p = beta(&f, &d, eps).unwrap().value() as i64;
                    got.insert(p.rem_euclid(4));
                    got.insert((-p).rem_euclid(4));
                }
            }
            let s = f.signature();
            let expect: BTreeSet<i64> = [s.rem_euclid(4), (-s).rem_euclid(4)].into();
            assert_eq!(got, expect, "{f}");
        }
    }

    #[test]
    fn diffeo_type_counts() {
        assert_eq!(
            count_type_iii_diffeo_types(&IntersectionForm::diagonal(3, 1)).unwrap(),
            2
        );
        assert_eq!(
            count_type_iii_diffeo_types(&IntersectionForm::diagonal(2, 2)).unwrap(),
            3
        );
        assert_eq!(
            count_type_iii_diffeo_types(&IntersectionForm::diagonal(2, 1)).unwrap(),
            4
        );
        assert_eq!(
            count_type_iii_diffeo_types(&IntersectionForm::even(1)),
            Err(Error::SpinBase)
        );
    }

    #[test]
    fn membership_rows() {
        let rp5 = classify_total_space(
            &spec(IntersectionForm::diagonal(1, 0), &[1], 2),
            EpsilonSign::Plus,
        )
        .unwrap();
        assert!(quotient_membership(&rp5, &IntersectionForm::diagonal(1, 0)).unwrap());
        assert!(quotient_membership(&rp5, &IntersectionForm::diagonal(0, 1)).unwrap());
        assert!(!quotient_membership(&rp5, &IntersectionForm::even(1)).unwrap());

        // pin = +-2 needs b2 odd; cp(3,1) has rank 4 and signature 2
        let m = FiveManifoldClass::type_iii(3, 2).unwrap();
        assert!(quotient_membership(&m, &IntersectionForm::diagonal(3, 1)).unwrap());
        assert!(!quotient_membership(&m, &IntersectionForm::diagonal(2, 2)).unwrap());
        let small = FiveManifoldClass::type_iii(1, 2).unwrap();
        assert!(!quotient_membership(&small, &IntersectionForm::diagonal(3, 1)).unwrap());

        let t2 = FiveManifoldClass::type_ii(3);
        assert!(quotient_membership(&t2, &IntersectionForm::even(2)).unwrap());
        assert!(!quotient_membership(&t2, &IntersectionForm::diagonal(2, 2)).unwrap());

        let ex = FiveManifoldClass::type_i(2, 4);
        assert!(ex.is_exceptional_type_i());
        assert!(quotient_membership(&ex, &IntersectionForm::diagonal(2, 1)).unwrap());
        assert!(!quotient_membership(&ex, &IntersectionForm::diagonal(3, 0)).unwrap());
        let ex3 = FiveManifoldClass::type_i(3, 0);
        assert!(quotient_membership(&ex3, &IntersectionForm::diagonal(3, 1)).unwrap());
        assert!(!quotient_membership(&ex3, &IntersectionForm::diagonal(0, 4)).unwrap());
        let plain = FiveManifoldClass::type_i(2, 1);
        assert!(quotient_membership(&plain, &IntersectionForm::diagonal(3, 0)).unwrap());
    }

    #[test]
    fn definite_rank_3_and_4_never_hit_0_or_4_mod_8() {
        // justifies the exceptional rows: primitive, non-characteristic d on a
        // definite form of rank 3 or 4 has <d^2> != 0, 4 mod 8
        for f in [
            IntersectionForm::diagonal(3, 0),
            IntersectionForm::diagonal(4, 0),
        ] {
            for d in classes_in_box(f.rank(), 5) {
                if d.is_zero() || !d.is_primitive().unwrap() || f.is_characteristic(&d).unwrap() {
                    continue;
                }
                let r = f.square(&d).unwrap().rem_euclid(8);
                assert!(r != 0 && r != 4, "{f} {d}");
            }
        }
    }

    #[test]
    fn standard_quotients() {
        let rp5 = FiveManifoldClass::type_iii(0, 1).unwrap();
        assert_eq!(
            enumerate_standard_quotients(&rp5).unwrap(),
            vec![StandardQuotient::Diagonal { a: 1, b: 0 }]
        );
        let t2 = FiveManifoldClass::type_ii(1);
        assert_eq!(
            enumerate_standard_quotients(&t2).unwrap(),
            vec![StandardQuotient::Even { c: 1 }]
        );
        let m = FiveManifoldClass::type_iii(2, 13).unwrap();
        let qs = enumerate_standard_quotients(&m).unwrap();
        assert!(qs.contains(&StandardQuotient::Diagonal { a: 2, b: 1 }));
        assert_eq!(
            qs,
            vec![
                StandardQuotient::Diagonal { a: 2, b: 1 },
                StandardQuotient::Diagonal { a: 3, b: 0 }
            ]
        );
        let t1 = FiveManifoldClass::type_i(4, 1);
        assert_eq!(
            enumerate_standard_quotients(&t1).unwrap(),
            vec![StandardQuotient::Diagonal { a: 4, b: 1 }]
        );
        let bad = FiveManifoldClass::type_ii(2);
        assert!(enumerate_standard_quotients(&bad)
            .unwrap_err()
            .is_internal());
    }

    #[test]
    fn standard_name_rules() {
        assert_eq!(
            StandardName::from_invariants(1, 0).unwrap().to_string(),
            "X(1) = RP^5"
        );
        assert_eq!(
            StandardName::from_invariants(0, 1).unwrap(),
            StandardName { q: 0, summands: 0 }
        );
        assert_eq!(StandardName::from_invariants(4, 5).unwrap().summands, 2);
        assert!(StandardName::from_invariants(3, 0).is_err());
        assert!(StandardName::from_invariants(2, 2).is_err());
        assert_eq!(
            StandardName::from_invariants(3, 2).unwrap().to_string(),
            "X(3) #_S1 (#^1 (S^2 x S^2) x S^1)"
        );
    }

    #[test]
    fn congruence_against_enumeration() {
        for eps in EpsilonSign::BOTH {
            for c in 0..4u8 {
                let sol = solve_k_congruence(c, eps).unwrap();
                for k in 0..32u64 {
                    let direct = ((4 + 2 * eps.value()) * (k * (k + 1)) as i64 - 4 * c as i64)
                        .rem_euclid(16)
                        == 0;
                    assert_eq!(sol.contains(k), direct, "c={c} eps={eps} k={k}");
                }
                assert_eq!(sol.minimal, sol.iter().next().unwrap());
            }
        }
        assert_eq!(solve_k_congruence(0, EpsilonSign::Plus).unwrap().minimal, 0);
        assert_eq!(
            solve_k_congruence(0, EpsilonSign::Minus).unwrap().residues,
            vec![0, 7]
        );
        // 3 k (k+1) = 4 mod 8
        assert_eq!(solve_k_congruence(2, EpsilonSign::Plus).unwrap().minimal, 3);
        assert_eq!(
            solve_k_congruence(4, EpsilonSign::Plus),
            Err(Error::InvalidTarget(4))
        );
    }

    #[test]
    fn type_iii_family_hits_target() {
        for (a, b) in [(2, 0), (1, 1), (0, 2), (3, 2), (0, 3)] {
            let f = IntersectionForm::diagonal(a, b);
            for eps in EpsilonSign::BOTH {
                for c in 0..4u8 {
                    let fam = chern_family_type_iii(&f, 12, c, eps).unwrap();
                    assert_eq!(fam.len(), 12);
                    for mem in &fam {
                        assert!(mem.class.is_primitive().unwrap());
                        assert!(f.is_characteristic(&mem.class).unwrap());
                        let p = beta(&f, &mem.class, eps).unwrap();
                        let want =
                            crate::cobordism::PinPlusClass::new(f.signature() + 4 * c as i64);
                        assert_eq!(p, want, "cp({a},{b}) c={c} eps={eps} k={}", mem.k);
                    }
                }
            }
        }
        assert_eq!(
            chern_family_type_iii(&IntersectionForm::diagonal(2, 0), 1, 0, EpsilonSign::Plus)
                .unwrap()[0]
                .class,
            cls(&[1, 1])
        );
        assert!(
            chern_family_type_iii(&IntersectionForm::diagonal(1, 0), 1, 0, EpsilonSign::Plus)
                .is_err()
        );
        assert_eq!(
            chern_family_type_iii(&IntersectionForm::even(1), 1, 0, EpsilonSign::Plus),
            Err(Error::NotDiagonal)
        );
    }

    #[test]
    fn type_i_family_fixtures() {
        let fam = chern_family_type_i(2, &IntersectionForm::diagonal(3, 0), 2).unwrap();
        assert_eq!(fam[0].class, cls(&[1, 1, 0]));
        assert_eq!(fam[1].class, cls(&[9, 1, 0]));
        let fam = chern_family_type_i(1, &IntersectionForm::diagonal(1, 1), 1).unwrap();
        assert_eq!(fam[0].class, cls(&[1, 4]));
        assert_eq!(
            IntersectionForm::diagonal(1, 1)
                .square(&fam[0].class)
                .unwrap(),
            -15
        );
        let fam = chern_family_type_i(4, &IntersectionForm::diagonal(5, 0), 1).unwrap();
        assert_eq!(fam[0].class, cls(&[1, 1, 1, 1, 0]));
        // rank 4 definite: (1,1,1,1) would be characteristic
        assert!(chern_family_type_i(4, &IntersectionForm::diagonal(4, 0), 1).is_err());
        // q = 2 on cp(2,0) has no room for a zero coordinate
        assert!(chern_family_type_i(2, &IntersectionForm::diagonal(2, 0), 1).is_err());
        // reversed orientation
        let fam = chern_family_type_i(2, &IntersectionForm::diagonal(1, 2), 1).unwrap();
        assert_eq!(fam[0].class, cls(&[0, 1, 1]));
    }

    #[test]
    fn type_i_families_valid_everywhere() {
        for rank in 2..=7 {
            for a in 0..=rank {
                let f = IntersectionForm::diagonal(a, rank - a);
                for q in 0..8u8 {
                    let Ok(fam) = chern_family_type_i(q, &f, 20) else {
                        continue;
                    };
                    let qq = (q % 8).min(8 - q % 8) as i64;
                    for mem in fam {
                        assert!(mem.class.is_primitive().unwrap());
                        assert!(
                            !f.is_characteristic(&mem.class).unwrap(),
                            "{f} q={q} {}",
                            mem.class
                        );
                        let s = f.square(&mem.class).unwrap();
                        assert!((s - qq).rem_euclid(8) == 0 || (s + qq).rem_euclid(8) == 0);
                        let m = classify_total_space(
                            &spec(f.clone(), mem.class.coords(), 2),
                            EpsilonSign::Plus,
                        )
                        .unwrap();
                        assert_eq!(m.type_i_q, Some(qq as u8));
                    }
                }
            }
        }
    }

    #[test]
    fn type_iii_class_from_spinc() {
        let f = IntersectionForm::diagonal(2, 1);
        let s = spinc_class(&f, &cls(&[1, 1, 1])).unwrap();
        assert_eq!((s.d_squared(), s.index()), (1, 0));
    }
}

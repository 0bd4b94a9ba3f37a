//! Integral intersection forms of simply connected 4-manifolds.
//!
//! A closed simply connected 4-manifold `B` is modelled by the cup-product
//! pairing on `H^2(B; Z)` in a fixed basis. Standard forms come from
//! [`IntersectionForm::connected_sum`], which realises
//! `#^a CP^2 # #^b CP^2-bar # #^c (S^2 x S^2)` as a block sum. Everything here
//! is exact integer or rational arithmetic.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// How a form was built. Only tags, the matrix is authoritative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// `diag(+1 x positive, -1 x negative)`.
    Diagonal {
        positive: usize,
        negative: usize,
    },
    /// `hyperbolic` copies of `[[0,1],[1,0]]`.
    Even {
        hyperbolic: usize,
    },
    BlockSum,
    Raw,
}

/// Symmetric unimodular integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionForm {
    matrix: Vec<Vec<i64>>,
    provenance: Provenance,
    signature: i64,
    determinant: i64,
}

impl IntersectionForm {
    /// Validates symmetry and unimodularity.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        Self::with_provenance(rows, Provenance::Raw)
    }

    fn with_provenance(matrix: Vec<Vec<i64>>, provenance: Provenance) -> Result<Self> {
        let n = matrix.len();
        if matrix.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if matrix[i][j] != matrix[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        let det = bareiss_determinant(&matrix);
        if det.abs() != BigInt::from(1) {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        let determinant = if det.is_positive() { 1 } else { -1 };
        let signature = congruence_signature(&matrix);
        Ok(Self {
            matrix,
            provenance,
            signature,
            determinant,
        })
    }

    /// `diag(e_1, ..., e_n)` with every entry `+-1`.
    pub fn from_diagonal_entries(entries: &[i64]) -> Result<Self> {
        let n = entries.len();
        let mut rows = vec![vec![0; n]; n];
        for (i, &e) in entries.iter().enumerate() {
            rows[i][i] = e;
        }
        let positive = entries.iter().take_while(|&&e| e == 1).count();
        let sorted = entries[positive..].iter().all(|&e| e == -1);
        let provenance = if sorted {
            Provenance::Diagonal {
                positive,
                negative: n - positive,
            }
        } else {
            Provenance::Raw
        };
        Self::with_provenance(rows, provenance)
    }

    /// The form of `#^a CP^2 # #^b CP^2-bar`.
    pub fn diagonal(a: usize, b: usize) -> Self {
        Self::connected_sum(a, b, 0)
    }

    /// The form of `#^c (S^2 x S^2)`.
    pub fn even(c: usize) -> Self {
        Self::connected_sum(0, 0, c)
    }

    /// `diag(+1)^a (+) diag(-1)^b (+) H^c`. Rank zero (the 4-sphere) is allowed.
    pub fn connected_sum(a: usize, b: usize, c: usize) -> Self {
        let n = a + b + 2 * c;
        let mut m = vec![vec![0; n]; n];
        for i in 0..a {
            m[i][i] = 1;
        }
        for i in a..a + b {
            m[i][i] = -1;
        }
        for h in 0..c {
            let i = a + b + 2 * h;
            m[i][i + 1] = 1;
            m[i + 1][i] = 1;
        }
        let provenance = if c == 0 {
            Provenance::Diagonal {
                positive: a,
                negative: b,
            }
        } else if a == 0 && b == 0 {
            Provenance::Even { hyperbolic: c }
        } else {
            Provenance::BlockSum
        };
        let determinant = if (b + c).is_multiple_of(2) { 1 } else { -1 };
        Self {
            matrix: m,
            provenance,
            signature: a as i64 - b as i64,
            determinant,
        }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `Some((a, b))` when the form was built as `cp(a,b)`.
    pub fn diagonal_counts(&self) -> Option<(usize, usize)> {
        match self.provenance {
            Provenance::Diagonal { positive, negative } => Some((positive, negative)),
            _ => None,
        }
    }

    pub fn determinant(&self) -> i64 {
        self.determinant
    }

    /// Positive minus negative inertia, computed once at construction by exact
    /// congruence diagonalisation.
    pub fn signature(&self) -> i64 {
        self.signature
    }

    /// Even form, i.e. every diagonal entry is even. Vacuously true in rank 0.
    pub fn is_spin(&self) -> bool {
        (0..self.rank()).all(|i| self.matrix[i][i] % 2 == 0)
    }

    pub fn is_definite(&self) -> bool {
        self.signature.unsigned_abs() as usize == self.rank()
    }

    /// Orientation reversal.
    pub fn negate(&self) -> Self {
        let matrix = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|&x| -x).collect())
            .collect();
        let provenance = match self.provenance {
            Provenance::Diagonal { positive, negative } if positive == 0 || negative == 0 => {
                Provenance::Diagonal {
                    positive: negative,
                    negative: positive,
                }
            }
            _ => Provenance::Raw,
        };
        let determinant = if self.rank().is_multiple_of(2) {
            self.determinant
        } else {
            -self.determinant
        };
        Self {
            matrix,
            provenance,
            signature: -self.signature,
            determinant,
        }
    }

    /// Block-diagonal sum, the form of a disjoint union (or connected sum).
    pub fn block_sum(&self, other: &Self) -> Self {
        let (n1, n2) = (self.rank(), other.rank());
        let mut m = vec![vec![0; n1 + n2]; n1 + n2];
        for i in 0..n1 {
            m[i][..n1].copy_from_slice(&self.matrix[i]);
        }
        for i in 0..n2 {
            m[n1 + i][n1..].copy_from_slice(&other.matrix[i]);
        }
        use Provenance::*;
        let provenance = match (self.provenance, other.provenance) {
            _ if n1 == 0 => other.provenance,
            _ if n2 == 0 => self.provenance,
            (Even { hyperbolic: c1 }, Even { hyperbolic: c2 }) => Even {
                hyperbolic: c1 + c2,
            },
            (
                Diagonal {
                    positive: a1,
                    negative: 0,
                },
                Diagonal {
                    positive: a2,
                    negative: b2,
                },
            ) => Diagonal {
                positive: a1 + a2,
                negative: b2,
            },
            (
                Diagonal {
                    positive: a1,
                    negative: b1,
                },
                Diagonal {
                    positive: 0,
                    negative: b2,
                },
            ) => Diagonal {
                positive: a1,
                negative: b1 + b2,
            },
            _ => BlockSum,
        };
        Self {
            matrix: m,
            provenance,
            signature: self.signature + other.signature,
            determinant: self.determinant * other.determinant,
        }
    }

    fn check_len(&self, x: &CohomologyClass) -> Result<()> {
        if x.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// `x^T Q y`.
    pub fn pairing(&self, x: &CohomologyClass, y: &CohomologyClass) -> Result<i64> {
        self.check_len(x)?;
        self.check_len(y)?;
        let mut acc: i128 = 0;
        for (i, row) in self.matrix.iter().enumerate() {
            if x.0[i] == 0 {
                continue;
            }
            let mut inner: i128 = 0;
            for (j, &q) in row.iter().enumerate() {
                inner += q as i128 * y.0[j] as i128;
            }
            acc += x.0[i] as i128 * inner;
        }
        i64::try_from(acc).map_err(|_| Error::Overflow("pairing"))
    }

    /// `<x^2, [B]>`.
    pub fn square(&self, x: &CohomologyClass) -> Result<i64> {
        self.pairing(x, x)
    }

    /// The unique `v` over Z/2 with `v.x = x.x` for all `x` (the Wu class, equal
    /// to `w_2(TB)` in this basis). Solved from `Q v = diag(Q)` mod 2, which has
    /// a unique solution because `Q` is invertible mod 2.
    pub fn char_vector_mod2(&self) -> Mod2Vector {
        let n = self.rank();
        // augmented system, rows packed as bool vectors
        let mut rows: Vec<Vec<bool>> = (0..n)
            .map(|i| {
                let mut r: Vec<bool> = self.matrix[i]
                    .iter()
                    .map(|&q| q.rem_euclid(2) == 1)
                    .collect();
                r.push(self.matrix[i][i].rem_euclid(2) == 1);
                r
            })
            .collect();
        let mut pivot_row = 0;
        let mut pivot_cols = Vec::with_capacity(n);
        for col in 0..n {
            let Some(p) = (pivot_row..n).find(|&r| rows[r][col]) else {
                continue;
            };
            rows.swap(pivot_row, p);
            for r in 0..n {
                if r != pivot_row && rows[r][col] {
                    let (src, dst) = if r < pivot_row {
                        let (a, b) = rows.split_at_mut(pivot_row);
                        (&b[0], &mut a[r])
                    } else {
                        let (a, b) = rows.split_at_mut(r);
                        (&a[pivot_row], &mut b[0])
                    };
                    for (d, s) in dst.iter_mut().zip(src.iter()) {
                        *d ^= *s;
                    }
                }
            }
            pivot_cols.push(col);
            pivot_row += 1;
        }
        // unimodular => full rank mod 2
        debug_assert_eq!(pivot_cols.len(), n);
        let mut v = vec![false; n];
        for (r, &c) in pivot_cols.iter().enumerate() {
            v[c] = rows[r][n];
        }
        Mod2Vector(v)
    }

    /// `d` reduces mod 2 to the characteristic vector.
    pub fn is_characteristic(&self, d: &CohomologyClass) -> Result<bool> {
        self.check_len(d)?;
        Ok(d.mod2() == self.char_vector_mod2())
    }
}

impl fmt::Display for IntersectionForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.provenance {
            Provenance::Diagonal { positive, negative } => write!(f, "cp({positive},{negative})"),
            Provenance::Even { hyperbolic } => write!(f, "even({hyperbolic})"),
            _ => {
                if self.rank() == 0 {
                    return write!(f, "diag()");
                }
                let rows: Vec<String> = self
                    .matrix
                    .iter()
                    .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(","))
                    .collect();
                write!(f, "{}", rows.join(";"))
            }
        }
    }
}

fn parse_ints(s: &str) -> Result<Vec<i64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("`{}`: {e}", t.trim())))
        })
        .collect()
}

fn parse_counts(s: &str, n: usize) -> Result<Vec<usize>> {
    let v = parse_ints(s)?;
    if v.len() != n || v.iter().any(|&x| x < 0) {
        return Err(Error::Parse(format!(
            "expected {n} nonnegative integer(s), got `{s}`"
        )));
    }
    Ok(v.into_iter().map(|x| x as usize).collect())
}

/// Accepted syntax:
///
/// - `diag(e1,...,en)`: literal diagonal, entries `+-1`
/// - `cp(a,b)`: `#^a CP^2 # #^b CP^2-bar`
/// - `even(c)`: `#^c S^2 x S^2`
/// - `sum(a,b,c)`: block sum of all three
/// - explicit rows, `0,1;1,0` or `[[0,1],[1,0]]`
impl FromStr for IntersectionForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let call = |name: &str| -> Option<&str> {
            s.strip_prefix(name)
                .and_then(|r| r.trim_start().strip_prefix('('))
                .and_then(|r| r.strip_suffix(')'))
        };
        if let Some(args) = call("diag") {
            return Self::from_diagonal_entries(&parse_ints(args)?);
        }
        if let Some(args) = call("cp") {
            let v = parse_counts(args, 2)?;
            return Ok(Self::diagonal(v[0], v[1]));
        }
        if let Some(args) = call("even") {
            let v = parse_counts(args, 1)?;
            return Ok(Self::even(v[0]));
        }
        if let Some(args) = call("sum") {
            let v = parse_counts(args, 3)?;
            return Ok(Self::connected_sum(v[0], v[1], v[2]));
        }
        let body = s.replace(' ', "");
        let rows: Vec<Vec<i64>> =
            if let Some(inner) = body.strip_prefix("[[").and_then(|r| r.strip_suffix("]]")) {
                inner.split("],[").map(parse_ints).collect::<Result<_>>()?
            } else if body.contains(';')
                || body
                    .chars()
                    .all(|c| c.is_ascii_digit() || c == '-' || c == ',')
            {
                body.split(';').map(parse_ints).collect::<Result<_>>()?
            } else {
                return Err(Error::Parse(format!("unrecognised form `{s}`")));
            };
        Self::from_rows(rows)
    }
}

/// Integer vector in the basis of the parent form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CohomologyClass(Vec<i64>);

impl CohomologyClass {
    pub fn new(coords: Vec<i64>) -> Self {
        Self(coords)
    }

    pub fn zero(rank: usize) -> Self {
        Self(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// gcd of the coordinates (0 for the zero class).
    pub fn content(&self) -> u64 {
        self.0.iter().fold(0u64, |g, &x| g.gcd(&x.unsigned_abs()))
    }

    /// Not a positive multiple of another class.
    pub fn is_primitive(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroClass);
        }
        Ok(self.content() == 1)
    }

    pub fn mod2(&self) -> Mod2Vector {
        Mod2Vector(self.0.iter().map(|x| x.rem_euclid(2) == 1).collect())
    }

    /// Coordinates of `x1 (+) x2` in the block sum basis.
    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self(self.0.iter().map(|x| x * k).collect())
    }
}

impl fmt::Display for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for CohomologyClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        Ok(Self(parse_ints(s)?))
    }
}

impl From<Vec<i64>> for CohomologyClass {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

/// Vector over Z/2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mod2Vector(pub Vec<bool>);

impl Mod2Vector {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|b| !b)
    }
}

impl fmt::Display for Mod2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.0.iter().map(|&b| if b { "1" } else { "0" }).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Fraction-free Gaussian elimination; exact for any integer matrix.
fn bareiss_determinant(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = 1;
    let mut prev = BigInt::from(1);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].clone() * sign
}

/// Signature by symmetric (Lagrange) diagonalisation over Q: congruence
/// `P^T A P` preserves inertia, so counting signs of the pivots suffices.
fn congruence_signature(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(x.into()))
                .collect()
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut sig = 0;
    while !active.is_empty() {
        let pivot = match active.iter().position(|&i| !a[i][i].is_zero()) {
            Some(p) => active[p],
            None => {
                // zero diagonal: find a nonzero off-diagonal a_ij and replace
                // e_i by e_i + e_j, giving a_ii = 2 a_ij != 0
                let found = active.iter().find_map(|&i| {
                    active
                        .iter()
                        .find(|&&j| j != i && !a[i][j].is_zero())
                        .map(|&j| (i, j))
                });
                let Some((i, j)) = found else { break };
                for k in 0..n {
                    let v = a[j][k].clone();
                    a[i][k] += v;
                }
                for k in 0..n {
                    let v = a[k][j].clone();
                    a[k][i] += v;
                }
                i
            }
        };
        let p = a[pivot][pivot].clone();
        sig += if p.is_positive() { 1 } else { -1 };
        active.retain(|&i| i != pivot);
        for &i in &active {
            if a[i][pivot].is_zero() {
                continue;
            }
            let factor = &a[i][pivot] / &p;
            for &j in &active {
                let v = &factor * &a[pivot][j];
                a[i][j] -= v;
            }
        }
    }
    sig
}

/// All `connected_sum(a, b, c)` with `1 <= a + b + 2c <= max_rank`.
pub fn standard_forms(max_rank: usize) -> Vec<IntersectionForm> {
    let mut out = Vec::new();
    for rank in 1..=max_rank {
        for c in 0..=rank / 2 {
            let rest = rank - 2 * c;
            for a in 0..=rest {
                out.push(IntersectionForm::connected_sum(a, rest - a, c));
            }
        }
    }
    out
}

/// Every class of the given rank with `|coords| <= bound`, in lexicographic
/// order.
pub fn classes_in_box(rank: usize, bound: i64) -> impl Iterator<Item = CohomologyClass> {
    let side = (2 * bound + 1) as u64;
    let total = side.pow(rank as u32);
    (0..total).map(move |mut idx| {
        let mut v = vec![0i64; rank];
        for slot in v.iter_mut().rev() {
            *slot = (idx % side) as i64 - bound;
            idx /= side;
        }
        CohomologyClass(v)
    })
}

/// Characteristic classes of `form` with `|coords| <= bound`, enumerated
/// directly from the mod 2 characteristic vector.
pub fn characteristic_classes_in_box(
    form: &IntersectionForm,
    bound: i64,
) -> impl Iterator<Item = CohomologyClass> {
    let w = form.char_vector_mod2();
    let choices: Vec<Vec<i64>> =
        w.0.iter()
            .map(|&odd| {
                (-bound..=bound)
                    .filter(|x| (x.rem_euclid(2) == 1) == odd)
                    .collect()
            })
            .collect();
    let sizes: Vec<usize> = choices.iter().map(Vec::len).collect();
    let total: usize = if sizes.contains(&0) {
        0
    } else {
        sizes.iter().product()
    };
    (0..total).map(move |mut idx| {
        let mut v = vec![0i64; choices.len()];
        for (slot, (c, &s)) in v.iter_mut().zip(choices.iter().zip(sizes.iter())).rev() {
            *slot = c[idx % s];
            idx /= s;
        }
        CohomologyClass(v)
    })
}

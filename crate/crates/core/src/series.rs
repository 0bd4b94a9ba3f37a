//! Truncated graded power series with exact rational coefficients.
//!
//! A [`GradedSeries`] lives in a commutative polynomial algebra over `Q` whose
//! generators carry positive cohomological degrees (for characteristic
//! classes: `d` in degree 2, `p_i` in degree `4i`). Every operation drops
//! terms above the truncation order, so `(s t)` truncated equals
//! `(s truncated)(t truncated)` truncated.
//!
//! The same engine produces the `A-hat` multiplicative sequence and the
//! `sinh(d/2) / sinh(l d/2)` series used by the eta formula.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Generators of the algebra and their degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Grading {
    names: Vec<String>,
    degrees: Vec<u32>,
}

impl Grading {
    /// Panics on a zero degree; the truncation argument needs positive degrees.
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, u32)>) -> Self {
        let (names, degrees): (Vec<String>, Vec<u32>) =
            vars.into_iter().map(|(n, d)| (n.into(), d)).unzip();
        assert!(
            degrees.iter().all(|&d| d > 0),
            "generator degrees must be positive"
        );
        Self { names, degrees }
    }

    /// `d` (degree 2) and `p_1, ..., p_n` (degree `4i`).
    pub fn characteristic(max_pontryagin: usize) -> Self {
        let mut vars = vec![("d".to_string(), 2)];
        vars.extend((1..=max_pontryagin).map(|i| (format!("p{i}"), 4 * i as u32)));
        Self::new(vars)
    }

    /// Characteristic grading with every `p_i` of degree at most `order`.
    pub fn characteristic_for_order(order: u32) -> Self {
        Self::characteristic((order / 4) as usize)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn degree_of(&self, m: &Monomial) -> u32 {
        m.0.iter().zip(&self.degrees).map(|(e, d)| e * d).sum()
    }

    /// Every monomial of exactly this degree, sorted.
    pub fn monomials_of_degree(&self, degree: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; self.len()];
        self.fill_monomials(0, degree, &mut cur, &mut out);
        out.sort();
        out
    }

    fn fill_monomials(&self, var: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if var == self.len() {
            if left == 0 {
                out.push(Monomial(cur.clone()));
            }
            return;
        }
        let deg = self.degrees[var];
        for e in 0..=left / deg {
            cur[var] = e;
            self.fill_monomials(var + 1, left - e * deg, cur, out);
        }
        cur[var] = 0;
    }

    /// Renders a monomial as `d^2 p1`, or `1` for the unit.
    pub fn format_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> =
            m.0.iter()
                .zip(&self.names)
                .filter(|(e, _)| **e > 0)
                .map(|(e, n)| {
                    if *e == 1 {
                        n.clone()
                    } else {
                        format!("{n}^{e}")
                    }
                })
                .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    /// Inverse of [`Grading::format_monomial`].
    pub fn parse_monomial(&self, s: &str) -> Result<Monomial> {
        let mut exps = vec![0u32; self.len()];
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial(exps));
        }
        for factor in s
            .split(|c: char| c == '*' || c.is_whitespace())
            .filter(|f| !f.is_empty())
        {
            let (name, e) = match factor.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?,
                ),
                None => (factor, 1),
            };
            let i = self
                .index_of(name)
                .ok_or_else(|| Error::Parse(format!("unknown generator `{name}`")))?;
            exps[i] += e;
        }
        Ok(Monomial(exps))
    }
}

/// Exponent vector, one entry per generator of the grading.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn unit(vars: usize) -> Self {
        Self(vec![0; vars])
    }

    pub fn generator(vars: usize, index: usize, power: u32) -> Self {
        let mut v = vec![0; vars];
        v[index] = power;
        Self(v)
    }

    fn times(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Truncated element of a graded polynomial algebra over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSeries {
    grading: Arc<Grading>,
    order: u32,
    terms: BTreeMap<Monomial, BigRational>,
}

impl GradedSeries {
    pub fn zero(grading: Arc<Grading>, order: u32) -> Self {
        Self {
            grading,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(grading: Arc<Grading>, order: u32, c: BigRational) -> Self {
        let mut s = Self::zero(grading, order);
        let unit = Monomial::unit(s.grading.len());
        s.insert(unit, c);
        s
    }

    pub fn one(grading: Arc<Grading>, order: u32) -> Self {
        Self::constant(grading, order, BigRational::one())
    }

    /// The generator called `name`.
    pub fn generator(grading: Arc<Grading>, order: u32, name: &str) -> Result<Self> {
        let i = grading
            .index_of(name)
            .ok_or_else(|| Error::Parse(format!("unknown generator `{name}`")))?;
        let m = Monomial::generator(grading.len(), i, 1);
        Ok(Self::from_terms(grading, order, [(m, BigRational::one())]))
    }

    /// Builds a series, dropping zero coefficients and terms above `order`.
    pub fn from_terms(
        grading: Arc<Grading>,
        order: u32,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Self {
        let mut s = Self::zero(grading, order);
        for (m, c) in terms {
            assert_eq!(m.0.len(), s.grading.len(), "monomial arity");
            s.insert(m, c);
        }
        s
    }

    /// Adds into the coefficient of `m`, respecting truncation.
    fn insert(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() || self.grading.degree_of(&m) > self.order {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn grading(&self) -> &Arc<Grading> {
        &self.grading
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of the monomial written as in [`Grading::format_monomial`].
    pub fn coefficient_of(&self, monomial: &str) -> Result<BigRational> {
        Ok(self.coefficient(&self.grading.parse_monomial(monomial)?))
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&Monomial::unit(self.grading.len()))
    }

    /// Highest degree with a nonzero term, `None` for zero.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| self.grading.degree_of(m)).max()
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        Self::from_terms(
            self.grading.clone(),
            order,
            self.terms.iter().map(|(m, c)| (m.clone(), c.clone())),
        )
    }

    /// Homogeneous part of the given degree.
    pub fn extract_degree(&self, degree: u32) -> Self {
        Self {
            grading: self.grading.clone(),
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| self.grading.degree_of(m) == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    fn compatible(&self, other: &Self) -> Result<u32> {
        if self.grading != other.grading {
            return Err(Error::IncompatibleSeries("different gradings"));
        }
        Ok(self.order.min(other.order))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let order = self.compatible(other)?;
        let mut out = self.truncate(order);
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let order = self.compatible(other)?;
        let mut out = Self::zero(self.grading.clone(), order);
        for (m1, c1) in &self.terms {
            let d1 = self.grading.degree_of(m1);
            if d1 > order {
                continue;
            }
            for (m2, c2) in &other.terms {
                if d1 + self.grading.degree_of(m2) > order {
                    continue;
                }
                out.insert(m1.times(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_terms(
            self.grading.clone(),
            self.order,
            self.terms.iter().map(|(m, x)| (m.clone(), x * c)),
        )
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.grading.clone(), self.order);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn min_positive_degree(&self) -> u32 {
        self.grading.degrees.iter().copied().min().unwrap_or(1)
    }

    /// Multiplicative inverse of a unit, degree by degree:
    /// `v_0 = 1/u_0`, `v_D = -(1/u_0) sum_{j=1..D} u_j v_{D-j}`.
    pub fn inverse(&self) -> Result<Self> {
        let u0 = self.constant_term();
        if u0.is_zero() {
            return Err(Error::NotAUnit);
        }
        let inv0 = u0.recip();
        let parts: Vec<Self> = (0..=self.order).map(|d| self.extract_degree(d)).collect();
        let mut v: Vec<Self> = vec![Self::constant(
            self.grading.clone(),
            self.order,
            inv0.clone(),
        )];
        for deg in 1..=self.order {
            let mut acc = Self::zero(self.grading.clone(), self.order);
            for j in 1..=deg {
                if parts[j as usize].is_zero() || v[(deg - j) as usize].is_zero() {
                    continue;
                }
                acc = &acc + &(&parts[j as usize] * &v[(deg - j) as usize]);
            }
            v.push(acc.scale(&-inv0.clone()));
        }
        let mut out = Self::zero(self.grading.clone(), self.order);
        for part in v {
            out = &out + &part;
        }
        Ok(out)
    }

    /// `exp(s)` for `s` without constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::Precondition("exp needs a zero constant term".into()));
        }
        let steps = self.order / self.min_positive_degree();
        let mut out = Self::one(self.grading.clone(), self.order);
        let mut power = Self::one(self.grading.clone(), self.order);
        for k in 1..=steps {
            power = (&power * self).scale(&rational(1, k as i64));
            out = &out + &power;
        }
        Ok(out)
    }

    /// `log(s)` for `s` with constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::Precondition("log needs constant term 1".into()));
        }
        let r = self - &Self::one(self.grading.clone(), self.order);
        let steps = self.order / self.min_positive_degree();
        let mut out = Self::zero(self.grading.clone(), self.order);
        let mut power = Self::one(self.grading.clone(), self.order);
        for k in 1..=steps {
            power = &power * &r;
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = &out + &power.scale(&rational(sign, k as i64));
        }
        Ok(out)
    }

    /// Replaces generator `i` by `images[i]` (all in one target grading) and
    /// expands, truncating at the images' order.
    pub fn substitute(&self, images: &[GradedSeries]) -> Result<Self> {
        if images.len() != self.grading.len() {
            return Err(Error::IncompatibleSeries(
                "one image per generator required",
            ));
        }
        let Some(first) = images.first() else {
            return Err(Error::IncompatibleSeries("no generators"));
        };
        let (grading, mut order) = (first.grading.clone(), first.order);
        for img in images {
            order = first.compatible(img)?.min(order);
        }
        let mut out = Self::zero(grading.clone(), order);
        for (m, c) in &self.terms {
            let mut term = Self::constant(grading.clone(), order, c.clone());
            for (img, &e) in images.iter().zip(&m.0) {
                if e > 0 {
                    term = &term * &img.pow(e);
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// `sum_m c_m <m, [B]>` over the terms of the given degree, with pairing
    /// values supplied by `pairing`. A missing value is an error naming the
    /// monomial.
    pub fn contract<F>(&self, degree: u32, mut pairing: F) -> Result<BigRational>
    where
        F: FnMut(&Monomial) -> Option<BigRational>,
    {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            if self.grading.degree_of(m) != degree {
                continue;
            }
            let v =
                pairing(m).ok_or_else(|| Error::MissingPairing(self.grading.format_monomial(m)))?;
            acc += c * v;
        }
        Ok(acc)
    }

    /// `(monomial, "num/den")` pairs ordered by degree, then exponents.
    pub fn monomial_list(&self) -> Vec<(String, String)> {
        let mut keys: Vec<&Monomial> = self.terms.keys().collect();
        keys.sort_by_key(|m| (self.grading.degree_of(m), (*m).clone()));
        keys.into_iter()
            .map(|m| {
                (
                    self.grading.format_monomial(m),
                    format_rational(&self.terms[m]),
                )
            })
            .collect()
    }
}

/// Always `num/den`, also for integers.
pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = self.monomial_list();
        if list.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in list.iter().enumerate() {
            let (sign, mag) = match c.strip_prefix('-') {
                Some(rest) => ("-", rest),
                None => ("+", c.as_str()),
            };
            if i == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if m == "1" {
                write!(f, "{mag}")?;
            } else {
                write!(f, "{mag} {m}")?;
            }
        }
        write!(f, " + O({})", self.order + 1)
    }
}

impl Add for &GradedSeries {
    type Output = GradedSeries;
    fn add(self, rhs: &GradedSeries) -> GradedSeries {
        self.try_add(rhs).expect("series grading mismatch")
    }
}

impl Sub for &GradedSeries {
    type Output = GradedSeries;
    fn sub(self, rhs: &GradedSeries) -> GradedSeries {
        self.try_add(&-rhs).expect("series grading mismatch")
    }
}

impl Mul for &GradedSeries {
    type Output = GradedSeries;
    fn mul(self, rhs: &GradedSeries) -> GradedSeries {
        self.try_mul(rhs).expect("series grading mismatch")
    }
}

impl Neg for &GradedSeries {
    type Output = GradedSeries;
    fn neg(self) -> GradedSeries {
        self.scale(&-BigRational::one())
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `sinh(scale x) / x = sum_k scale^(2k+1) x^(2k) / (2k+1)!` in generator `var`.
pub fn sinh_over_generator(
    grading: Arc<Grading>,
    order: u32,
    var: &str,
    scale: &BigRational,
) -> Result<GradedSeries> {
    let i = grading
        .index_of(var)
        .ok_or_else(|| Error::Parse(format!("unknown generator `{var}`")))?;
    let deg = grading.degrees[i];
    let mut terms = Vec::new();
    let mut k = 0u32;
    while 2 * k * deg <= order {
        let coeff = num_traits::pow(scale.clone(), (2 * k + 1) as usize)
            / BigRational::from_integer(factorial(2 * k + 1));
        terms.push((Monomial::generator(grading.len(), i, 2 * k), coeff));
        k += 1;
    }
    Ok(GradedSeries::from_terms(grading, order, terms))
}

/// `sinh(scale x)` itself.
pub fn sinh_series(
    grading: Arc<Grading>,
    order: u32,
    var: &str,
    scale: &BigRational,
) -> Result<GradedSeries> {
    let x = GradedSeries::generator(grading.clone(), order, var)?;
    Ok(&sinh_over_generator(grading, order, var, scale)? * &x)
}

/// `sinh(d/2) / sinh(l d/2)` as a series in `d`, computed as
/// `(sinh(d/2)/d) * (sinh(l d/2)/d)^(-1)`; both factors are units with
/// constant terms `1/2` and `l/2`. The result lives in
/// [`Grading::characteristic_for_order`].
pub fn sinh_ratio(level: u32, order: u32) -> Result<GradedSeries> {
    if level == 0 {
        return Err(Error::InvalidLevel(0));
    }
    let grading = Arc::new(Grading::characteristic_for_order(order));
    let num = sinh_over_generator(grading.clone(), order, "d", &rational(1, 2))?;
    let den = sinh_over_generator(grading, order, "d", &rational(level as i64, 2))?;
    Ok(&num * &den.inverse()?)
}

/// `A-hat_0 = 1, A-hat_1, ..., A-hat_n` as homogeneous polynomials in the
/// Pontryagin generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AhatPolynomialTable {
    polys: Vec<GradedSeries>,
}

impl AhatPolynomialTable {
    /// Largest index in the table.
    pub fn max_index(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn get(&self, i: usize) -> Option<&GradedSeries> {
        self.polys.get(i)
    }

    pub fn iter(&self) -> impl Iterator<Item = &GradedSeries> {
        self.polys.iter()
    }

    /// `1 + A-hat_1 + ... + A-hat_n`, truncated at degree `4n`.
    pub fn total(&self) -> GradedSeries {
        let mut acc = GradedSeries::zero(self.polys[0].grading.clone(), self.polys[0].order);
        for p in &self.polys {
            acc = &acc + p;
        }
        acc
    }
}

/// The multiplicative sequence of `Q(z) = (sqrt(z)/2) / sinh(sqrt(z)/2)`.
///
/// With `p_i = e_i(x_1^2, x_2^2, ...)`, `log prod_j Q(x_j^2) =
/// sum_k a_k s_k` where `a_k` are the coefficients of `log Q` and `s_k` the
/// power sums, which Newton's identities express in the `p_i`. Exponentiating
/// gives the whole sequence at once.
pub fn ahat_table(n: usize) -> AhatPolynomialTable {
    let order = 4 * n as u32;
    let grading = Arc::new(Grading::characteristic(n));

    // log Q(z) as a series in one degree-1 generator
    let zg = Arc::new(Grading::new([("z", 1)]));
    let sinh_quotient = GradedSeries::from_terms(
        zg.clone(),
        n as u32,
        (0..=n as u32).map(|k| {
            let c = BigRational::new(
                BigInt::one(),
                num_traits::pow(BigInt::from(4), k as usize) * factorial(2 * k + 1),
            );
            (Monomial(vec![k]), c)
        }),
    );
    let log_q = -&sinh_quotient.log().expect("constant term is 1");

    let p = |i: usize| {
        GradedSeries::generator(grading.clone(), order, &format!("p{i}")).expect("generator exists")
    };
    // Newton: s_k = sum_{i=1}^{k-1} (-1)^(i-1) e_i s_{k-i} + (-1)^(k-1) k e_k
    let mut power_sums: Vec<GradedSeries> = vec![GradedSeries::zero(grading.clone(), order)];
    for k in 1..=n {
        let mut s = p(k).scale(&rational(
            if k % 2 == 1 { k as i64 } else { -(k as i64) },
            1,
        ));
        for i in 1..k {
            let term = &p(i) * &power_sums[k - i];
            s = if i % 2 == 1 { &s + &term } else { &s - &term };
        }
        power_sums.push(s);
    }

    let mut log_ahat = GradedSeries::zero(grading.clone(), order);
    for (k, s) in power_sums.iter().enumerate().skip(1) {
        let a_k = log_q.coefficient(&Monomial(vec![k as u32]));
        log_ahat = &log_ahat + &s.scale(&a_k);
    }
    let ahat = log_ahat.exp().expect("no constant term");
    AhatPolynomialTable {
        polys: (0..=n).map(|i| ahat.extract_degree(4 * i as u32)).collect(),
    }
}

impl GradedSeries {
    /// True when every coefficient is an integer multiple of its
    /// denominator's reciprocal, i.e. a sanity hook for printing.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Whether every nonzero term has an even exponent in generator `var`.
    pub fn only_even_powers_of(&self, var: &str) -> bool {
        match self.grading.index_of(var) {
            Some(i) => self.terms.keys().all(|m| m.0[i] % 2 == 0),
            None => true,
        }
    }

    pub fn has_negative_coefficient(&self) -> bool {
        self.terms.values().any(|c| c.is_negative())
    }
}

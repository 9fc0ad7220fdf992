//! Exact arithmetic on dominant weights of `so(n)`.
//!
//! Weights are written in the orthonormal basis `μ_1, …, μ_m`, `m = ⌊n/2⌋`,
//! dual to the Cartan generators `i·e_{2k-1}∧e_{2k}`. Coordinates are
//! half-integers and are stored doubled so that every operation here is
//! exact.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{arg, Error, Result};
use crate::rational::{self, BigIntJson, Rational, RationalJson};

/// A number in `½ℤ`, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    doubled: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { doubled: 0 };
    pub const ONE: HalfInt = HalfInt { doubled: 2 };
    pub const HALF: HalfInt = HalfInt { doubled: 1 };

    pub const fn from_doubled(doubled: i64) -> Self {
        Self { doubled }
    }

    pub const fn int(v: i64) -> Self {
        Self { doubled: 2 * v }
    }

    pub const fn doubled(self) -> i64 {
        self.doubled
    }

    pub fn is_integer(self) -> bool {
        self.doubled % 2 == 0
    }

    pub fn abs(self) -> Self {
        Self { doubled: self.doubled.abs() }
    }

    pub fn to_rational(self) -> Rational {
        rational::frac(self.doubled, 2)
    }

    pub fn to_f64(self) -> f64 {
        self.doubled as f64 / 2.0
    }

    /// Exact square as a rational.
    pub fn square(self) -> Rational {
        rational::frac(self.doubled * self.doubled, 4)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: Self) -> Self {
        Self { doubled: self.doubled + rhs.doubled }
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: Self) -> Self {
        Self { doubled: self.doubled - rhs.doubled }
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> Self {
        Self { doubled: -self.doubled }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.doubled / 2)
        } else {
            write!(f, "{}/2", self.doubled)
        }
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Argument(format!("'{s}' is not an integer or a half-integer k/2"));
        match s.split_once('/') {
            None => s.parse::<i64>().map(HalfInt::int).map_err(|_| bad()),
            Some((num, den)) => {
                let num: i64 = num.trim().parse().map_err(|_| bad())?;
                match den.trim() {
                    "1" => Ok(HalfInt::int(num)),
                    "2" => Ok(HalfInt::from_doubled(num)),
                    _ => Err(bad()),
                }
            }
        }
    }
}

/// Parses the comma separated weight format, e.g. `3/2,1/2`.
pub fn parse_coords(text: &str) -> Result<Vec<HalfInt>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(str::parse).collect()
}

fn check_len(n: usize, len: usize) -> Result<()> {
    if n < 3 {
        return arg(format!("dimension n = {n} must be at least 3"));
    }
    if len != n / 2 {
        return arg(format!(
            "a weight of so({n}) has {} coordinates, got {len}",
            n / 2
        ));
    }
    Ok(())
}

/// True iff `coords` is the dominant weight of an irreducible representation
/// of `so(n)`: weakly decreasing, nonnegative (or `|ρ^m|`-bounded when `n` is
/// even), and either all integral or all half-odd.
pub fn is_dominant(n: usize, coords: &[HalfInt]) -> Result<bool> {
    check_len(n, coords.len())?;
    let m = coords.len();
    let parity = coords[0].doubled().rem_euclid(2);
    if coords.iter().any(|c| c.doubled().rem_euclid(2) != parity) {
        return Ok(false);
    }
    if coords.windows(2).take(m.saturating_sub(2)).any(|w| w[0] < w[1]) {
        return Ok(false);
    }
    let last = coords[m - 1];
    let ok = if n % 2 == 1 {
        (m < 2 || coords[m - 2] >= last) && last >= HalfInt::ZERO
    } else {
        m < 2 || coords[m - 2] >= last.abs()
    };
    Ok(ok)
}

/// Dominant weight `(ρ^1, …, ρ^m)` of an irreducible `so(n)` representation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DominantWeight {
    n: usize,
    coords: Vec<HalfInt>,
}

impl DominantWeight {
    pub fn new(n: usize, coords: Vec<HalfInt>) -> Result<Self> {
        if !is_dominant(n, &coords)? {
            let text = coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
            return arg(format!("({text}) is not a dominant weight of so({n})"));
        }
        Ok(Self { n, coords })
    }

    pub fn parse(n: usize, text: &str) -> Result<Self> {
        Self::new(n, parse_coords(text)?)
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, vec![HalfInt::ZERO; n / 2])
    }

    /// The defining representation on `R^n`.
    pub fn standard(n: usize) -> Result<Self> {
        Self::forms(n, 1)
    }

    /// `Λ^p R^n` for `p ≤ n/2`; for `p = n/2` this is the self-dual half.
    pub fn forms(n: usize, p: usize) -> Result<Self> {
        let m = n / 2;
        if p > m {
            return arg(format!("forms weight needs p ≤ {m}, got {p}"));
        }
        let mut c = vec![HalfInt::ZERO; m];
        c.iter_mut().take(p).for_each(|x| *x = HalfInt::ONE);
        Self::new(n, c)
    }

    /// The spin representation (positive half-spin when `n` is even).
    pub fn spin(n: usize) -> Result<Self> {
        Self::new(n, vec![HalfInt::HALF; n / 2])
    }

    /// Symmetric traceless tensors of degree `k`.
    pub fn symmetric(n: usize, k: i64) -> Result<Self> {
        let mut c = vec![HalfInt::ZERO; n / 2];
        c[0] = HalfInt::int(k);
        Self::new(n, c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[HalfInt] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| *c == HalfInt::ZERO)
    }

    /// Doubled `δ_k = (n - 2k)/2`, i.e. `n - 2k`, for `k = 1..m`.
    fn doubled_delta(&self) -> impl Iterator<Item = i64> + '_ {
        (1..=self.rank()).map(move |k| self.n as i64 - 2 * k as i64)
    }

    fn shifted(&self, i: usize, by: HalfInt) -> Vec<HalfInt> {
        let mut c = self.coords.clone();
        c[i] = c[i] + by;
        c
    }
}

impl fmt::Display for DominantWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
        f.write_str(&text)
    }
}

impl Serialize for DominantWeight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `c(ρ) = ⟨ρ+δ, ρ+δ⟩ − ⟨δ, δ⟩`.
pub fn casimir(rho: &DominantWeight) -> Rational {
    let four_c: i64 = rho
        .coords
        .iter()
        .zip(rho.doubled_delta())
        .map(|(r, d)| {
            let s = r.doubled() + d;
            s * s - d * d
        })
        .sum();
    rational::frac(four_c, 4)
}

/// Weyl dimension formula, `∏_{α>0} ⟨ρ+δ, α⟩ / ⟨δ, α⟩`.
pub fn weyl_dimension(rho: &DominantWeight) -> BigInt {
    let l: Vec<i64> = rho
        .coords
        .iter()
        .zip(rho.doubled_delta())
        .map(|(r, d)| r.doubled() + d)
        .collect();
    let d: Vec<i64> = rho.doubled_delta().collect();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    let m = l.len();
    for i in 0..m {
        for j in i + 1..m {
            num *= BigInt::from(l[i] - l[j]) * BigInt::from(l[i] + l[j]);
            den *= BigInt::from(d[i] - d[j]) * BigInt::from(d[i] + d[j]);
        }
        if rho.n % 2 == 1 {
            num *= BigInt::from(l[i]);
            den *= BigInt::from(d[i]);
        }
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

/// How a summand `λ` of `R^n ⊗ V(ρ)` arises from `ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Origin {
    /// `λ = ρ + μ_i` (1-based).
    Plus(usize),
    /// `λ = ρ − μ_i` (1-based).
    Minus(usize),
    /// `λ = ρ`, possible only for odd `n` with `ρ^m > 0`.
    Equal,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Plus(i) => write!(f, "plus({i})"),
            Origin::Minus(i) => write!(f, "minus({i})"),
            Origin::Equal => f.write_str("equal"),
        }
    }
}

impl Serialize for Origin {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Closed form of the conformal weight for a summand of the given origin.
pub fn closed_form_weight(rho: &DominantWeight, origin: Origin) -> Rational {
    let n = rho.n as i64;
    match origin {
        Origin::Plus(i) => rational::int(1 - i as i64) + rho.coords[i - 1].to_rational(),
        Origin::Minus(i) => rational::int(1 - n + i as i64) - rho.coords[i - 1].to_rational(),
        Origin::Equal => rational::frac(1 - n, 2),
    }
}

fn identify(lambda: &DominantWeight, rho: &DominantWeight) -> Result<Origin> {
    if lambda.n != rho.n {
        return arg(format!(
            "weights of so({}) and so({}) cannot be compared",
            lambda.n, rho.n
        ));
    }
    let diff: Vec<(usize, i64)> = lambda
        .coords
        .iter()
        .zip(&rho.coords)
        .enumerate()
        .map(|(i, (l, r))| (i, (*l - *r).doubled()))
        .filter(|(_, d)| *d != 0)
        .collect();
    let not_summand = || {
        Error::Argument(format!(
            "({lambda}) is not a summand of R^{} ⊗ V({rho})",
            rho.n
        ))
    };
    match diff.as_slice() {
        [] => {
            if rho.n % 2 == 1 && rho.coords[rho.rank() - 1] > HalfInt::ZERO {
                Ok(Origin::Equal)
            } else {
                Err(not_summand())
            }
        }
        [(i, 2)] => Ok(Origin::Plus(i + 1)),
        [(i, -2)] => Ok(Origin::Minus(i + 1)),
        _ => Err(not_summand()),
    }
}

/// `w(λ, ρ) = ½ (c(λ) − c(ρ) − c(τ))`, checked against the closed form table.
pub fn conformal_weight(lambda: &DominantWeight, rho: &DominantWeight) -> Result<Rational> {
    let origin = identify(lambda, rho)?;
    let tau = DominantWeight::standard(rho.n)?;
    let via_casimir = (casimir(lambda) - casimir(rho) - casimir(&tau)) / rational::int(2);
    let closed = closed_form_weight(rho, origin);
    if via_casimir != closed {
        return Err(Error::Consistency(format!(
            "conformal weight of ({lambda}) in R^{} ⊗ ({rho}): Casimir difference gives {}, closed form {}",
            rho.n,
            rational::display(&via_casimir),
            rational::display(&closed)
        )));
    }
    Ok(via_casimir)
}

/// One irreducible summand `W_j` of `R^n ⊗ V`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summand {
    pub weight: DominantWeight,
    #[serde(rename = "w", serialize_with = "ser_rational")]
    pub conformal_weight: Rational,
    #[serde(serialize_with = "ser_bigint")]
    pub dim: BigInt,
    pub origin: Origin,
}

fn ser_rational<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    RationalJson(q.clone()).serialize(s)
}

fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    BigIntJson(v.clone()).serialize(s)
}

/// The splitting `R^n ⊗ V(ρ) = ⊕ W_j`, summands ordered by decreasing
/// conformal weight and then by decreasing weight (lexicographically).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Decomposition {
    pub rho: DominantWeight,
    pub n: usize,
    pub summands: Vec<Summand>,
}

/// Splits `R^n ⊗ V(ρ)` into irreducibles.
pub fn decompose(rho: &DominantWeight) -> Decomposition {
    let m = rho.rank();
    let mut origins = Vec::new();
    for i in 1..=m {
        origins.push((rho.shifted(i - 1, HalfInt::ONE), Origin::Plus(i)));
        origins.push((rho.shifted(i - 1, -HalfInt::ONE), Origin::Minus(i)));
    }
    if rho.n % 2 == 1 && rho.coords[m - 1] > HalfInt::ZERO {
        origins.push((rho.coords.clone(), Origin::Equal));
    }
    let mut summands: Vec<Summand> = origins
        .into_iter()
        .filter_map(|(coords, origin)| {
            let weight = DominantWeight::new(rho.n, coords).ok()?;
            let dim = weyl_dimension(&weight);
            Some(Summand {
                conformal_weight: closed_form_weight(rho, origin),
                weight,
                dim,
                origin,
            })
        })
        .collect();
    summands.sort_by(|a, b| {
        b.conformal_weight
            .cmp(&a.conformal_weight)
            .then_with(|| b.weight.coords.cmp(&a.weight.coords))
    });
    Decomposition { rho: rho.clone(), n: rho.n, summands }
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn weights(&self) -> Vec<Rational> {
        self.summands.iter().map(|s| s.conformal_weight.clone()).collect()
    }

    pub fn dim_v(&self) -> BigInt {
        weyl_dimension(&self.rho)
    }

    pub fn index_of(&self, weight: &DominantWeight) -> Option<usize> {
        self.summands.iter().position(|s| &s.weight == weight)
    }

    /// Verifies the four exact identities every decomposition satisfies:
    /// distinct summands, `Σ dim W_j = n dim V`, `Σ w_j dim W_j = 0` and
    /// `Σ w_j² dim W_j = 2 dim V c(ρ)`.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |what: &str| {
            Err(Error::Consistency(format!(
                "decomposition of R^{} ⊗ ({}): {what}",
                self.n, self.rho
            )))
        };
        for (i, a) in self.summands.iter().enumerate() {
            if self.summands[i + 1..].iter().any(|b| b.weight == a.weight) {
                return fail("repeated summand");
            }
            if a.dim <= BigInt::zero() {
                return fail("summand of non-positive dimension");
            }
        }
        let dim_v = Rational::from_integer(self.dim_v());
        let mut total = Rational::zero();
        let mut first = Rational::zero();
        let mut second = Rational::zero();
        for s in &self.summands {
            let d = Rational::from_integer(s.dim.clone());
            first += &s.conformal_weight * &d;
            second += &s.conformal_weight * &s.conformal_weight * &d;
            total += d;
        }
        if total != rational::int(self.n as i64) * &dim_v {
            return fail("dimensions do not add up to n·dim V");
        }
        if !first.is_zero() {
            return fail("Σ w·dim ≠ 0");
        }
        if second != rational::int(2) * dim_v * casimir(&self.rho) {
            return fail("Σ w²·dim ≠ 2·dim V·c(ρ)");
        }
        Ok(())
    }
}

//! Exact closed-form constants, computed with arbitrary-precision rationals.
//!
//! The central quantity is the `ℓ₁^d` polarization constant
//!
//! ```text
//! c(k, ℓ₁^d) = max_{k₁+…+k_d = k} (k₁!⋯k_d!/k!) · k^k/(k₁^{k₁}⋯k_d^{k_d})
//! ```
//!
//! whose maximum is attained at the balanced partition. The same expression
//! with positive parts is the Harris bound for mixed polarization.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spaces::Exponent;

/// A reduced fraction with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numerator: BigInt, denominator: BigInt) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::invalid("zero denominator"));
        }
        Ok(ExactRational(BigRational::new(numerator, denominator)))
    }

    pub fn from_integer(n: i64) -> Self {
        ExactRational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_ratio(&self) -> &BigRational {
        &self.0
    }

    /// Natural logarithm, evaluated from the logarithms of numerator and
    /// denominator so that huge values never pass through an `f64`.
    pub fn ln(&self) -> f64 {
        assert!(self.0.is_positive(), "ln of a non-positive rational");
        ln_big(self.numer().magnitude()) - ln_big(self.denom().magnitude())
    }

    /// Closest `f64` (infinite when out of range).
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or_else(|| self.ln().exp())
    }

    /// `"num/den"`, or just `"num"` for integers.
    pub fn fraction_string(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `ln n` for an arbitrarily large positive integer.
fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_u64().expect("64 leading bits");
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

fn factorial(n: u32) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `n^n` with `0^0 = 1`.
fn self_power(n: u32) -> BigUint {
    BigUint::from(n).pow(n)
}

/// Parts `(k₁, …, k_d)` of a degree `k = Σ k_i`, stored non-increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::invalid("a partition needs at least one part"));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn degree(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::invalid(format!("bad part `{t}` in `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// `(k₁!⋯k_d!/k!) · k^k/(k₁^{k₁}⋯k_d^{k_d})` with `0^0 = 0! = 1`.
/// Degree zero gives 1.
pub fn partition_value(pt: &Partition) -> ExactRational {
    let k = pt.degree();
    if k == 0 {
        return ExactRational::one();
    }
    let mut num = self_power(k);
    let mut den = factorial(k);
    for &part in pt.parts() {
        num *= factorial(part);
        den *= self_power(part);
    }
    ExactRational(BigRational::new(num.into(), den.into()))
}

/// The maximizing partition: `c+1` repeated `r` times then `c` repeated
/// `d − r` times, where `k = dc + r`, `0 ≤ r < d`.
pub fn balanced_partition(k: u32, d: u32) -> Result<Partition> {
    if k == 0 || d == 0 {
        return Err(Error::invalid("balanced_partition needs k >= 1 and d >= 1"));
    }
    let (c, r) = (k / d, k % d);
    let parts = (0..d).map(|i| if i < r { c + 1 } else { c }).collect();
    Partition::new(parts)
}

/// `c(k, ℓ₁^d)`.
pub fn exact_c_l1(k: u32, d: u32) -> Result<ExactRational> {
    Ok(partition_value(&balanced_partition(k, d)?))
}

/// Every partition of `k` into at most `d` parts, padded with zeros to
/// length `d`, parts non-increasing.
pub fn partitions(k: u32, d: u32) -> Vec<Partition> {
    fn rec(remaining: u32, slots: u32, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if slots == 0 {
            if remaining == 0 {
                out.push(Partition {
                    parts: prefix.clone(),
                });
            }
            return;
        }
        // the remaining slots can hold at most slots * cap
        if remaining > slots.saturating_mul(cap) {
            return;
        }
        for part in (0..=cap.min(remaining)).rev() {
            prefix.push(part);
            rec(remaining - part, slots - 1, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(k, d, k, &mut Vec::new(), &mut out);
    out
}

/// Brute-force maximum of [`partition_value`] over all partitions of `k`
/// into `d` nonnegative parts. Used to audit [`exact_c_l1`].
pub fn brute_force_c_l1(k: u32, d: u32) -> (ExactRational, Partition) {
    partitions(k, d)
        .into_iter()
        .map(|pt| (partition_value(&pt), pt))
        .max_by(|a, b| a.0.cmp(&b.0))
        .expect("at least one partition")
}

/// `c(k, ℓ₁^d)^{1/k}` for each `k`, from the exact logarithm of the rational value.
pub fn root_sequence(d: u32, ks: &[u32]) -> Result<Vec<(u32, f64)>> {
    ks.iter()
        .map(|&k| {
            let c = exact_c_l1(k, d)?;
            Ok((k, (c.ln() / f64::from(k)).exp()))
        })
        .collect()
}

/// Harris' mixed polarization bound `(k₁!⋯kₙ!/k!) · k^k/(k₁^{k₁}⋯kₙ^{kₙ})`.
pub fn harris_bound(parts: &Partition) -> Result<ExactRational> {
    if parts.parts().contains(&0) {
        return Err(Error::invalid("Harris bound needs every multiplicity to be positive"));
    }
    Ok(partition_value(parts))
}

fn check_p_at_least_two(p: Exponent) -> Result<f64> {
    let inv = p.reciprocal();
    if inv > 0.5 {
        return Err(Error::invalid(format!("the l_p^3 bounds need p >= 2, got {p}")));
    }
    Ok(inv)
}

/// `(6/5)^{1−2/p}`: lower bound for `c(2, ℓ_p³)`, `p ≥ 2`.
pub fn lp3_lower_bound(p: Exponent) -> Result<f64> {
    let inv = check_p_at_least_two(p)?;
    Ok(1.2_f64.powf(1.0 - 2.0 * inv))
}

/// `2^{2/p} 5^{1−2/p}`: interpolation bound on the uniform norm of the
/// Varopoulos quadratic on `ℓ_p³`, between its values 2 on `ℓ₂³` and 5 on `ℓ_∞³`.
pub fn lp3_interpolation_upper_bound(p: Exponent) -> Result<f64> {
    let inv = check_p_at_least_two(p)?;
    Ok(2f64.powf(2.0 * inv) * 5f64.powf(1.0 - 2.0 * inv))
}

/// `6/3^{2/p}`: value of the Varopoulos bilinear form at the pair
/// `(w, (1, λ, λ²))` normalized in `ℓ_p³`.
pub fn lp3_bilinear_witness_value(p: Exponent) -> f64 {
    6.0 / 3f64.powf(2.0 * p.reciprocal())
}

/// Formats `x` with 15 significant digits.
pub fn decimal15(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if (-5..15).contains(&magnitude) {
        let decimals = (14 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.14e}")
    }
}

//! Homogeneous polynomials stored as sparse multi-index coefficient maps.
//!
//! Terms are kept in a `BTreeMap` keyed by [`MultiIndex`], whose ordering is
//! lexicographic *descending* on the exponent vector, so iteration and
//! serialization are canonical: for `n = 2, k = 2` the order is
//! `x², xy, y²`.

mod json;

use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::BuildHasherDefault;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::spaces::{Field, Vector};

pub use json::{parse_polynomial, read_polynomial, write_polynomial, PolynomialFile, TermRecord};

/// Relative threshold below which coefficients are dropped after arithmetic.
pub const PRUNE_RELATIVE: f64 = 1e-15;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Exponent vector `α = (α₁, …, αₙ)` of a monomial `z^α`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    /// `|α| = Σ α_j`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `α! = Π α_j!` in floating point.
    pub fn factorial(&self) -> f64 {
        self.0.iter().map(|&a| factorial_f64(a)).product()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

/// `a!` in floating point via log-gamma-free accumulation; exact up to 22!.
pub(crate) fn factorial_f64(a: u32) -> f64 {
    if a <= 170 {
        (1..=a).map(f64::from).product()
    } else {
        f64::INFINITY
    }
}

/// `ln a!`.
pub(crate) fn ln_factorial(a: u32) -> f64 {
    (1..=a).map(|i| f64::from(i).ln()).sum()
}

/// A `k`-homogeneous polynomial `P(z) = Σ_{|α|=k} c_α z^α` in `n` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPolynomial {
    degree: u32,
    dim: usize,
    field: Field,
    terms: BTreeMap<MultiIndex, Complex64>,
}

impl HomogeneousPolynomial {
    /// Builds a polynomial from `(α, c_α)` pairs, summing repeated indices
    /// and dropping negligible coefficients.
    pub fn new<I, A>(field: Field, degree: u32, dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, Complex64)>,
        A: Into<MultiIndex>,
    {
        if dim == 0 {
            return Err(Error::invalid("polynomial dimension must be at least 1"));
        }
        let mut map: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        for (alpha, c) in terms {
            let alpha = alpha.into();
            check_dim(dim, alpha.len())?;
            if alpha.order() != degree {
                return Err(Error::invalid(format!(
                    "multi-index {:?} has order {} but the degree is {degree}",
                    alpha.0,
                    alpha.order()
                )));
            }
            if field == Field::Real && c.im != 0.0 {
                return Err(Error::invalid(format!(
                    "real polynomial has a complex coefficient at {:?}",
                    alpha.0
                )));
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::invalid(format!("non-finite coefficient at {:?}", alpha.0)));
            }
            *map.entry(alpha).or_insert(ZERO) += c;
        }
        let mut p = HomogeneousPolynomial {
            degree,
            dim,
            field,
            terms: map,
        };
        p.prune();
        Ok(p)
    }

    pub fn zero(field: Field, degree: u32, dim: usize) -> Result<Self> {
        Self::new(field, degree, dim, std::iter::empty::<(MultiIndex, Complex64)>())
    }

    /// Degree-zero polynomial with the given constant value.
    pub fn constant(field: Field, dim: usize, value: Complex64) -> Result<Self> {
        Self::new(field, 0, dim, [(vec![0u32; dim], value)])
    }

    pub fn monomial(field: Field, alpha: Vec<u32>, c: Complex64) -> Result<Self> {
        let degree = alpha.iter().sum();
        let dim = alpha.len();
        Self::new(field, degree, dim, [(alpha, c)])
    }

    fn prune(&mut self) {
        let max = self.terms.values().map(|c| c.norm()).fold(0.0_f64, f64::max);
        let cut = PRUNE_RELATIVE * max;
        self.terms.retain(|_, c| c.norm() > cut && c.norm() != 0.0);
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Number of stored (nonzero) monomials.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.terms.iter()
    }

    /// `c_α`, zero when absent.
    pub fn coefficient(&self, alpha: &[u32]) -> Complex64 {
        self.terms
            .get(&MultiIndex(alpha.to_vec()))
            .copied()
            .unwrap_or(ZERO)
    }

    /// Largest coefficient modulus.
    pub fn max_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Result<Self> {
        let field = if s.im != 0.0 { Field::Complex } else { self.field };
        Self::new(
            field,
            self.degree,
            self.dim,
            self.terms.iter().map(|(a, c)| (a.clone(), c * s)),
        )
    }

    /// `x_j^a` for every variable and every exponent up to the degree.
    fn power_table(&self, x: &Vector) -> Vec<Vec<Complex64>> {
        let k = self.degree as usize;
        x.iter()
            .map(|&xj| {
                let mut row = Vec::with_capacity(k + 1);
                let mut acc = ONE;
                row.push(acc);
                for _ in 0..k {
                    acc *= xj;
                    row.push(acc);
                }
                row
            })
            .collect()
    }

    /// `P(x)`.
    pub fn evaluate(&self, x: &Vector) -> Result<Complex64> {
        check_dim(self.dim, x.len())?;
        let pw = self.power_table(x);
        Ok(self
            .terms
            .iter()
            .map(|(alpha, c)| {
                alpha
                    .0
                    .iter()
                    .enumerate()
                    .fold(*c, |acc, (j, &a)| acc * pw[j][a as usize])
            })
            .sum())
    }

    /// Formal gradient `(∂_j P)(x)`; the zero vector for constants.
    pub fn gradient(&self, x: &Vector) -> Result<Vector> {
        check_dim(self.dim, x.len())?;
        let mut g = vec![ZERO; self.dim];
        if self.degree == 0 {
            return Ok(Vector(g));
        }
        let pw = self.power_table(x);
        for (alpha, c) in &self.terms {
            for (j, &aj) in alpha.0.iter().enumerate() {
                if aj == 0 {
                    continue;
                }
                let mut term = c * f64::from(aj);
                for (l, &al) in alpha.0.iter().enumerate() {
                    let e = if l == j { al - 1 } else { al };
                    term *= pw[l][e as usize];
                }
                g[j] += term;
            }
        }
        Ok(Vector(g))
    }

    /// The partial derivative `∂_j P` as a polynomial of degree `k − 1`.
    pub fn partial(&self, j: usize) -> Result<Self> {
        if j >= self.dim {
            return Err(Error::invalid(format!("variable {j} out of range")));
        }
        if self.degree == 0 {
            return Self::zero(self.field, 0, self.dim);
        }
        let terms = self.terms.iter().filter(|(a, _)| a.0[j] > 0).map(|(a, c)| {
            let mut b = a.0.clone();
            b[j] -= 1;
            (b, c * f64::from(a.0[j]))
        });
        Self::new(self.field, self.degree - 1, self.dim, terms)
    }

    /// `Q(z) = P(Mz)` for an `n × m` matrix `M`, expanded to canonical form.
    pub fn compose_linear(&self, m: &DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() != self.dim {
            return Err(Error::invalid(format!(
                "composition matrix has {} rows but the polynomial has {} variables",
                m.nrows(),
                self.dim
            )));
        }
        if m.ncols() == 0 {
            return Err(Error::invalid("composition matrix has no columns"));
        }
        let expanded = expand_composition(self, m, None);
        let field = if self.field == Field::Complex || m.iter().any(|z| z.im != 0.0) {
            Field::Complex
        } else {
            Field::Real
        };
        Self::new(field, self.degree, m.ncols(), expanded)
    }

    /// Pointwise product `P·Q` of degree `k_P + k_Q`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        if self.field != other.field {
            return Err(Error::invalid("cannot multiply polynomials over different fields"));
        }
        let mut out = Sparse::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let key: Vec<u32> = a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect();
                *out.entry(key).or_insert(ZERO) += ca * cb;
            }
        }
        Self::new(self.field, self.degree + other.degree, self.dim, out)
    }

    /// The complexification: same coefficients, now over ℂ.
    pub fn complexify(&self) -> Result<Self> {
        if self.field == Field::Complex {
            return Err(Error::invalid("polynomial is already complex"));
        }
        Ok(HomogeneousPolynomial {
            field: Field::Complex,
            ..self.clone()
        })
    }

    /// Maximum coefficientwise difference, treating absent terms as zero.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut keys: Vec<&MultiIndex> = self.terms.keys().collect();
        keys.extend(other.terms.keys());
        keys.into_iter()
            .map(|a| (self.coefficient(&a.0) - other.coefficient(&a.0)).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for HomogeneousPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (alpha, c) in &self.terms {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}", c.re)?;
            } else {
                write!(f, "({c})")?;
            }
            for (j, &a) in alpha.0.iter().enumerate() {
                match a {
                    0 => {}
                    1 => write!(f, "·z{}", j + 1)?,
                    _ => write!(f, "·z{}^{a}", j + 1)?,
                }
            }
        }
        Ok(())
    }
}

/// Fixed hash keys keep iteration order, and hence floating-point summation
/// order, identical from run to run.
type Sparse = HashMap<Vec<u32>, Complex64, BuildHasherDefault<DefaultHasher>>;

fn within_caps(e: &[u32], caps: Option<&[u32]>) -> bool {
    caps.is_none_or(|caps| e.iter().zip(caps).all(|(a, c)| a <= c))
}

fn sparse_mul(a: &Sparse, b: &Sparse, caps: Option<&[u32]>) -> Sparse {
    let mut out = Sparse::with_capacity_and_hasher(a.len().max(b.len()), Default::default());
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            if within_caps(&e, caps) {
                *out.entry(e).or_insert(ZERO) += ca * cb;
            }
        }
    }
    out
}

/// Expands `P(Mz)` into raw `(exponent, coefficient)` pairs. With `caps`,
/// terms whose exponent exceeds the cap in some coordinate are discarded as
/// early as possible; this is how a single coefficient is extracted cheaply.
pub(crate) fn expand_composition(
    p: &HomogeneousPolynomial,
    m: &DMatrix<Complex64>,
    caps: Option<&[u32]>,
) -> Sparse {
    let cols = m.ncols();
    let unit: Sparse = [(vec![0u32; cols], ONE)].into_iter().collect();

    // powers[j][a] = (row j of M as a linear form)^a
    let mut max_exp = vec![0u32; p.dim];
    for alpha in p.terms.keys() {
        for (j, &a) in alpha.0.iter().enumerate() {
            max_exp[j] = max_exp[j].max(a);
        }
    }
    let powers: Vec<Vec<Sparse>> = (0..p.dim)
        .map(|j| {
            let mut linear = Sparse::default();
            for c in 0..cols {
                let v = m[(j, c)];
                if v != ZERO {
                    let mut e = vec![0u32; cols];
                    e[c] = 1;
                    linear.insert(e, v);
                }
            }
            let mut table = vec![unit.clone()];
            for a in 1..=max_exp[j] as usize {
                let next = sparse_mul(&table[a - 1], &linear, caps);
                table.push(next);
            }
            table
        })
        .collect();

    let mut out = Sparse::default();
    for (alpha, c) in &p.terms {
        let mut acc = unit.clone();
        for (j, &a) in alpha.0.iter().enumerate() {
            if a > 0 {
                acc = sparse_mul(&acc, &powers[j][a as usize], caps);
                if acc.is_empty() {
                    break;
                }
            }
        }
        for (e, v) in acc {
            *out.entry(e).or_insert(ZERO) += c * v;
        }
    }
    out
}

/// All multi-indices of order `k` in `n` variables, in canonical order.
pub fn multi_indices(k: u32, n: usize) -> Vec<MultiIndex> {
    fn rec(k: u32, n: usize, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if n == 1 {
            prefix.push(k);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in (0..=k).rev() {
            prefix.push(a);
            rec(k - a, n - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(k, n, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Binomial coefficient in floating point (exact while it fits in 53 bits).
pub(crate) fn binomial_f64(n: u32, r: u32) -> f64 {
    if r > n {
        return 0.0;
    }
    let r = r.min(n - r);
    (0..r).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// The real degree-`8m` polynomial on `ℓ₁²(ℝ)`
/// `(xy)^{2m} Σ_{j=0}^{2m} C(4m, 2j) (−1)^j y^{2j} x^{4m−2j}`,
/// whose complexification is larger than itself by a factor `2^{2m−1}`.
pub fn real_l1_example(m: u32) -> Result<HomogeneousPolynomial> {
    if m < 1 {
        return Err(Error::invalid("real_l1_example needs m >= 1"));
    }
    let terms = (0..=2 * m).map(|j| {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let alpha = vec![2 * m + 4 * m - 2 * j, 2 * m + 2 * j];
        (alpha, Complex64::new(sign * binomial_f64(4 * m, 2 * j), 0.0))
    });
    HomogeneousPolynomial::new(Field::Real, 8 * m, 2, terms)
}

/// `z₁² + z₂² + z₃² − 2z₁z₂ − 2z₁z₃ − 2z₂z₃` over ℂ³.
pub fn varopoulos() -> HomogeneousPolynomial {
    let c = |r: f64| Complex64::new(r, 0.0);
    HomogeneousPolynomial::new(
        Field::Complex,
        2,
        3,
        [
            (vec![2, 0, 0], c(1.0)),
            (vec![0, 2, 0], c(1.0)),
            (vec![0, 0, 2], c(1.0)),
            (vec![1, 1, 0], c(-2.0)),
            (vec![1, 0, 1], c(-2.0)),
            (vec![0, 1, 1], c(-2.0)),
        ],
    )
    .expect("fixed coefficients are valid")
}

/// Dense polynomial with i.i.d. standard normal coefficients, deterministic in `seed`.
pub fn random_polynomial(k: u32, n: usize, field: Field, seed: u64) -> Result<HomogeneousPolynomial> {
    if n == 0 {
        return Err(Error::invalid("random_polynomial needs n >= 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indices = multi_indices(k, n);
    let coeffs = Vector::gaussian(indices.len(), field, &mut rng);
    HomogeneousPolynomial::new(field, k, n, indices.into_iter().zip(coeffs.0))
}

//! Evaluation of the symmetric `k`-linear form `P∨` attached to `P`.
//!
//! Two independent routes are provided:
//!
//! * [`polarize_sign_sum`] averages `P` over all `2^k` sign patterns. It is
//!   exponential in `k` and serves as a validation oracle.
//! * [`polarize_blocked`] expands `P(t₁x₁ + … + tₙxₙ)` and reads off a single
//!   coefficient. This is the production path and handles repeated
//!   arguments `(x₁^{k₁}, …, xₙ^{kₙ})` natively.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{check_dim, Error, Result};
use crate::poly::{binomial_f64, expand_composition, ln_factorial, HomogeneousPolynomial};
use crate::spaces::{Field, Vector};

/// Largest degree accepted by the sign-sum oracle.
pub const SIGN_SUM_MAX_DEGREE: u32 = 24;

/// Arguments `(x₁^{k₁}, …, xₙ^{kₙ})` of a symmetric multilinear form.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTuple {
    blocks: Vec<(Vector, u32)>,
}

impl BlockTuple {
    pub fn new(blocks: Vec<(Vector, u32)>) -> Result<Self> {
        let Some(first) = blocks.first() else {
            return Err(Error::invalid("a block tuple needs at least one block"));
        };
        let dim = first.0.len();
        for (v, m) in &blocks {
            check_dim(dim, v.len())?;
            if *m == 0 {
                return Err(Error::invalid("block multiplicities must be positive"));
            }
        }
        Ok(BlockTuple { blocks })
    }

    /// Every argument with multiplicity one.
    pub fn distinct(args: &[Vector]) -> Result<Self> {
        Self::new(args.iter().map(|v| (v.clone(), 1)).collect())
    }

    /// `Σ k_i`.
    pub fn total(&self) -> u32 {
        self.blocks.iter().map(|(_, m)| m).sum()
    }

    pub fn dim(&self) -> usize {
        self.blocks[0].0.len()
    }

    pub fn blocks(&self) -> &[(Vector, u32)] {
        &self.blocks
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Vector> {
        self.blocks.iter().map(|(v, _)| v)
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        self.blocks.iter().map(|(_, m)| *m).collect()
    }
}

/// `k₁!⋯kₙ!/k!`.
fn multinomial_weight(parts: &[u32]) -> f64 {
    let k: u32 = parts.iter().sum();
    let ln = parts.iter().map(|&m| ln_factorial(m)).sum::<f64>() - ln_factorial(k);
    ln.exp()
}

fn columns(vectors: &[&Vector], dim: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, vectors.len(), |i, j| vectors[j][i])
}

/// `P∨(x₁, …, x_k)` by the polarization formula
/// `(1/(k! 2^k)) Σ_{ε_i = ±1} ε₁⋯ε_k P(Σ ε_i x_i)`.
pub fn polarize_sign_sum(p: &HomogeneousPolynomial, args: &[Vector]) -> Result<Complex64> {
    let k = p.degree();
    if k == 0 {
        return Err(Error::invalid("polarization needs degree >= 1"));
    }
    if k > SIGN_SUM_MAX_DEGREE {
        return Err(Error::Budget(format!(
            "sign-sum polarization is capped at degree {SIGN_SUM_MAX_DEGREE}, got {k}"
        )));
    }
    if args.len() != k as usize {
        return Err(Error::invalid(format!(
            "expected {k} arguments, got {}",
            args.len()
        )));
    }
    for a in args {
        check_dim(p.dim(), a.len())?;
    }

    // Walk the sign patterns in Gray-code order so each step flips one sign.
    let mut signs = vec![1.0_f64; args.len()];
    let mut point = args
        .iter()
        .fold(Vector::zeros(p.dim()), |acc, x| acc.axpy(Complex64::new(1.0, 0.0), x));
    let mut total = p.evaluate(&point)?;
    let mut parity = 1.0;
    for step in 1u64..(1u64 << k) {
        let i = step.trailing_zeros() as usize;
        signs[i] = -signs[i];
        parity = -parity;
        point = point.axpy(Complex64::new(2.0 * signs[i], 0.0), &args[i]);
        total += p.evaluate(&point)? * parity;
    }
    let scale = (ln_factorial(k) + f64::from(k) * std::f64::consts::LN_2).exp();
    Ok(total / scale)
}

/// `P∨(x₁^{k₁}, …, xₙ^{kₙ}) = (k₁!⋯kₙ!/k!) · [t^κ] P(t₁x₁ + … + tₙxₙ)`.
pub fn polarize_blocked(p: &HomogeneousPolynomial, bt: &BlockTuple) -> Result<Complex64> {
    if bt.total() != p.degree() {
        return Err(Error::invalid(format!(
            "block multiplicities sum to {} but the degree is {}",
            bt.total(),
            p.degree()
        )));
    }
    check_dim(p.dim(), bt.dim())?;
    let parts = bt.multiplicities();
    let vectors: Vec<&Vector> = bt.vectors().collect();
    let expanded = expand_composition(p, &columns(&vectors, p.dim()), Some(&parts));
    let coefficient = expanded
        .get(&parts)
        .copied()
        .unwrap_or(Complex64::new(0.0, 0.0));
    Ok(coefficient * multinomial_weight(&parts))
}

/// `(d̂^j P(x₁)/j!)(x₂) = C(k, j) · P∨(x₁^{k−j}, x₂^j)`.
pub fn derivative_pairing(
    p: &HomogeneousPolynomial,
    x1: &Vector,
    x2: &Vector,
    j: u32,
) -> Result<Complex64> {
    let k = p.degree();
    if j > k {
        return Err(Error::invalid(format!("derivative order {j} exceeds degree {k}")));
    }
    check_dim(p.dim(), x1.len())?;
    check_dim(p.dim(), x2.len())?;
    if k == 0 {
        return p.evaluate(x1);
    }
    let blocks: Vec<(Vector, u32)> = [(x1.clone(), k - j), (x2.clone(), j)]
        .into_iter()
        .filter(|(_, m)| *m > 0)
        .collect();
    Ok(polarize_blocked(p, &BlockTuple::new(blocks)?)? * binomial_f64(k, j))
}

/// The `k_i`-homogeneous polynomial `y ↦ P∨(…, y^{k_i}, …)` obtained by
/// freeing block `free` and keeping every other block fixed.
///
/// For a block of multiplicity one this is a linear functional whose
/// coefficients are `P∨(…, e_j, …)`.
pub fn slot_polynomial(
    p: &HomogeneousPolynomial,
    bt: &BlockTuple,
    free: usize,
) -> Result<HomogeneousPolynomial> {
    if bt.total() != p.degree() {
        return Err(Error::invalid("block multiplicities do not sum to the degree"));
    }
    if free >= bt.blocks().len() {
        return Err(Error::invalid(format!("block {free} out of range")));
    }
    check_dim(p.dim(), bt.dim())?;
    let n = p.dim();
    let fixed: Vec<(&Vector, u32)> = bt
        .blocks()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != free)
        .map(|(_, (v, m))| (v, *m))
        .collect();
    let k_free = bt.blocks()[free].1;

    let mut m = DMatrix::<Complex64>::zeros(n, fixed.len() + n);
    for (c, (v, _)) in fixed.iter().enumerate() {
        for r in 0..n {
            m[(r, c)] = v[r];
        }
    }
    for r in 0..n {
        m[(r, fixed.len() + r)] = Complex64::new(1.0, 0.0);
    }
    let mut caps: Vec<u32> = fixed.iter().map(|(_, k)| *k).collect();
    caps.extend(std::iter::repeat_n(k_free, n));

    let expanded = expand_composition(p, &m, Some(&caps));
    let head = fixed.len();
    let mut parts: Vec<u32> = fixed.iter().map(|(_, k)| *k).collect();
    parts.push(k_free);
    let weight = multinomial_weight(&parts);
    let terms = expanded
        .into_iter()
        .filter(|(e, _)| e[..head].iter().zip(&caps[..head]).all(|(a, b)| a == b))
        .map(|(e, c)| (e[head..].to_vec(), c * weight));

    let real = p.field() == Field::Real && bt.vectors().all(Vector::is_real);
    let field = if real { Field::Real } else { Field::Complex };
    HomogeneousPolynomial::new(field, k_free, n, terms)
}

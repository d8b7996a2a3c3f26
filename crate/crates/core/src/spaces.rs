//! Finite-dimensional `ℓ_p^n` spaces over ℝ or ℂ.
//!
//! Every vector is stored with complex entries; over the real field the
//! imaginary parts are kept at exactly zero, so a single arithmetic path
//! serves both fields.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Scalar field of a space or polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Real => f.write_str("real"),
            Field::Complex => f.write_str("complex"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "real" | "r" => Ok(Field::Real),
            "complex" | "c" => Ok(Field::Complex),
            other => Err(Error::invalid(format!("unknown field `{other}`"))),
        }
    }
}

/// An exponent `p ∈ [1, ∞]`. Infinity is its own case, never a large float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Finite(f64),
    Infinity,
}

impl Exponent {
    pub fn new(p: f64) -> Result<Self> {
        if p.is_infinite() && p > 0.0 {
            return Ok(Exponent::Infinity);
        }
        if !(p >= 1.0) || !p.is_finite() {
            return Err(Error::invalid(format!("exponent p must lie in [1, inf], got {p}")));
        }
        Ok(Exponent::Finite(p))
    }

    /// `1/p`, with `1/∞ = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Finite(p) => 1.0 / p,
            Exponent::Infinity => 0.0,
        }
    }

    /// The conjugate exponent `p′` with `1/p + 1/p′ = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinity => Exponent::Finite(1.0),
            Exponent::Finite(p) if p == 1.0 => Exponent::Infinity,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    pub fn is_one(self) -> bool {
        self == Exponent::Finite(1.0)
    }

    pub fn is_two(self) -> bool {
        self == Exponent::Finite(2.0)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinity => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinity),
            other => {
                let p: f64 = other
                    .parse()
                    .map_err(|_| Error::invalid(format!("cannot parse exponent `{s}`")))?;
                Exponent::new(p)
            }
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Exponent::Finite(p) => serializer.serialize_f64(*p),
            Exponent::Infinity => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Num(p) => Exponent::new(p).map_err(de::Error::custom),
            Raw::Text(s) => s.parse().map_err(de::Error::custom),
        }
    }
}

/// The space `ℓ_p^n` over a field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub dim: usize,
    pub p: Exponent,
    pub field: Field,
}

impl SpaceSpec {
    pub fn new(dim: usize, p: Exponent, field: Field) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("space dimension must be at least 1"));
        }
        Ok(SpaceSpec { dim, p, field })
    }

    pub fn real(dim: usize, p: Exponent) -> Result<Self> {
        Self::new(dim, p, Field::Real)
    }

    pub fn complex(dim: usize, p: Exponent) -> Result<Self> {
        Self::new(dim, p, Field::Complex)
    }

    /// Same `p` and dimension over the other field.
    pub fn with_field(self, field: Field) -> Self {
        SpaceSpec { field, ..self }
    }

    pub fn check(&self, x: &Vector) -> Result<()> {
        check_dim(self.dim, x.len())
    }

    /// A random point on the unit sphere, Gaussian direction then normalized.
    pub fn random_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> Vector {
        loop {
            let v = Vector::gaussian(self.dim, self.field, rng);
            if let Ok(u) = project_to_sphere(&v, self) {
                return u;
            }
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l_{}^{}({})", self.p, self.dim, self.field)
    }
}

/// A point of `𝕂ⁿ`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Vector(pub Vec<Complex64>);

impl Vector {
    pub fn zeros(n: usize) -> Self {
        Vector(vec![Complex64::new(0.0, 0.0); n])
    }

    pub fn from_real(xs: &[f64]) -> Self {
        Vector(xs.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    /// The canonical basis vector `e_j` of `𝕂ⁿ`.
    pub fn basis(n: usize, j: usize) -> Self {
        let mut v = Self::zeros(n);
        v.0[j] = Complex64::new(1.0, 0.0);
        v
    }

    pub fn ones(n: usize) -> Self {
        Vector(vec![Complex64::new(1.0, 0.0); n])
    }

    pub fn gaussian<R: Rng + ?Sized>(n: usize, field: Field, rng: &mut R) -> Self {
        Vector(
            (0..n)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = match field {
                        Field::Real => 0.0,
                        Field::Complex => rng.sample(StandardNormal),
                    };
                    Complex64::new(re, im)
                })
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn is_real(&self) -> bool {
        self.0.iter().all(|z| z.im == 0.0)
    }

    pub fn scale(&self, s: Complex64) -> Vector {
        Vector(self.0.iter().map(|z| z * s).collect())
    }

    /// `self + t·other`.
    pub fn axpy(&self, t: Complex64, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + t * b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn conj(&self) -> Vector {
        Vector(self.0.iter().map(|z| z.conj()).collect())
    }

    /// Unconjugated pairing `Σ a_j b_j`.
    pub fn pairing(&self, other: &Vector) -> Complex64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Flattened `(re, im)` sequence, used for deterministic tie-breaking.
    pub fn flat(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().flat_map(|z| [z.re, z.im])
    }

    /// Entries as `[re, im]` pairs for serialization.
    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.0.iter().map(|z| [z.re, z.im]).collect()
    }

    pub fn from_pairs(pairs: &[[f64; 2]]) -> Self {
        Vector(pairs.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl From<Vec<Complex64>> for Vector {
    fn from(v: Vec<Complex64>) -> Self {
        Vector(v)
    }
}

impl Serialize for Vector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Vector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(deserializer)?;
        Ok(Vector::from_pairs(&pairs))
    }
}

/// Unit-modulus phase of `z`, with `phase(0) = 1`.
pub fn phase(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        z / r
    }
}

/// `ℓ_p` norm of a raw coefficient slice.
pub(crate) fn lp_norm(entries: &[Complex64], p: Exponent) -> f64 {
    let max = entries.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    match p {
        Exponent::Infinity => max,
        _ if max == 0.0 => 0.0,
        Exponent::Finite(p) if p == 1.0 => entries.iter().map(|z| z.norm()).sum(),
        Exponent::Finite(p) => {
            // scale by the largest modulus so that |x_j|^p cannot overflow
            let s: f64 = entries.iter().map(|z| (z.norm() / max).powf(p)).sum();
            max * s.powf(1.0 / p)
        }
    }
}

/// `‖x‖_p`.
pub fn norm(x: &Vector, spec: &SpaceSpec) -> Result<f64> {
    spec.check(x)?;
    Ok(lp_norm(&x.0, spec.p))
}

/// `x / ‖x‖_p`.
pub fn project_to_sphere(x: &Vector, spec: &SpaceSpec) -> Result<Vector> {
    let r = norm(x, spec)?;
    if r == 0.0 {
        return Err(Error::degenerate("cannot project the zero vector to the sphere"));
    }
    Ok(Vector(x.0.iter().map(|z| z / r).collect()))
}

/// The dual norm `‖phi‖_{p′}`, i.e. the largest value of `Re⟨phi, x⟩` on the unit ball.
pub fn dual_norm(phi: &Vector, spec: &SpaceSpec) -> Result<f64> {
    spec.check(phi)?;
    Ok(lp_norm(&phi.0, spec.p.conjugate()))
}

/// Unit vector maximizing `Re Σ phi_j x_j` over the unit ball of `ℓ_p`.
///
/// Each term `phi_j x_j` of the optimal pairing is real and nonnegative.
/// For `p = 1` all mass sits on the first coordinate of maximal modulus.
pub fn dual_align(phi: &Vector, spec: &SpaceSpec) -> Result<Vector> {
    spec.check(phi)?;
    if phi.is_zero() {
        return Err(Error::degenerate("cannot align with the zero functional"));
    }
    let aligned_phase = |z: Complex64| phase(z).conj();
    let x = match spec.p {
        Exponent::Infinity => phi.0.iter().map(|&z| aligned_phase(z)).collect(),
        Exponent::Finite(p) if p == 1.0 => {
            let mut best = 0;
            let mut best_mod = phi.0[0].norm();
            for (j, z) in phi.0.iter().enumerate().skip(1) {
                if z.norm() > best_mod {
                    best = j;
                    best_mod = z.norm();
                }
            }
            let mut x = vec![Complex64::new(0.0, 0.0); phi.len()];
            x[best] = aligned_phase(phi.0[best]);
            x
        }
        Exponent::Finite(p) => {
            let q = p / (p - 1.0);
            let max = phi.0.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
            let raw: Vec<Complex64> = phi
                .0
                .iter()
                .map(|&z| aligned_phase(z) * (z.norm() / max).powf(q - 1.0))
                .collect();
            let r = lp_norm(&raw, spec.p);
            raw.into_iter().map(|z| z / r).collect()
        }
    };
    Ok(Vector(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn norm_examples() {
        let two = Exponent::Finite(2.0);
        for p in [Exponent::Finite(1.0), two, Exponent::Finite(3.5), Exponent::Infinity] {
            let s = SpaceSpec::real(3, p).unwrap();
            assert_eq!(norm(&Vector::from_real(&[1.0, 0.0, 0.0]), &s).unwrap(), 1.0);
        }
        let l1 = SpaceSpec::real(2, Exponent::Finite(1.0)).unwrap();
        assert_eq!(norm(&Vector::from_real(&[1.0, 1.0]), &l1).unwrap(), 2.0);
        let l1c = SpaceSpec::complex(2, Exponent::Finite(1.0)).unwrap();
        let v = Vector(vec![c(0.5, 0.0), c(0.0, 0.5)]);
        assert_eq!(norm(&v, &l1c).unwrap(), 1.0);
    }

    #[test]
    fn norm_rejects_dimension_mismatch() {
        let s = SpaceSpec::real(3, Exponent::Finite(2.0)).unwrap();
        assert!(matches!(
            norm(&Vector::from_real(&[1.0, 2.0]), &s),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
    }

    #[test]
    fn projection_examples() {
        let l2 = SpaceSpec::real(2, Exponent::Finite(2.0)).unwrap();
        let l1 = SpaceSpec::real(2, Exponent::Finite(1.0)).unwrap();
        assert_eq!(
            project_to_sphere(&Vector::from_real(&[2.0, 0.0]), &l2).unwrap(),
            Vector::from_real(&[1.0, 0.0])
        );
        assert_eq!(
            project_to_sphere(&Vector::from_real(&[1.0, 1.0]), &l1).unwrap(),
            Vector::from_real(&[0.5, 0.5])
        );
        let u = project_to_sphere(&Vector::from_real(&[3.0, 4.0]), &l2).unwrap();
        assert!((u[0].re - 0.6).abs() < 1e-15 && (u[1].re - 0.8).abs() < 1e-15);
        assert!(matches!(
            project_to_sphere(&Vector::zeros(2), &l2),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn dual_align_examples() {
        let l2 = SpaceSpec::real(2, Exponent::Finite(2.0)).unwrap();
        let x = dual_align(&Vector::from_real(&[1.0, 0.0]), &l2).unwrap();
        assert_eq!(x, Vector::from_real(&[1.0, 0.0]));

        let linf = SpaceSpec::real(2, Exponent::Infinity).unwrap();
        let phi = Vector::from_real(&[3.0, 4.0]);
        let x = dual_align(&phi, &linf).unwrap();
        assert_eq!(x, Vector::from_real(&[1.0, 1.0]));
        assert_eq!(phi.pairing(&x).re, 7.0);
        assert_eq!(dual_norm(&phi, &linf).unwrap(), 7.0);

        let linf_c = SpaceSpec::complex(2, Exponent::Infinity).unwrap();
        let phi = Vector(vec![c(1.0, 0.0), c(0.0, 1.0)]);
        let x = dual_align(&phi, &linf_c).unwrap();
        assert_eq!(x, Vector(vec![c(1.0, 0.0), c(0.0, -1.0)]));
        assert!(close(phi.pairing(&x).re, 2.0, 1e-15));
    }

    #[test]
    fn dual_align_l1_ties_go_to_first_index() {
        let l1 = SpaceSpec::complex(3, Exponent::Finite(1.0)).unwrap();
        let phi = Vector(vec![c(0.0, 2.0), c(-2.0, 0.0), c(1.0, 0.0)]);
        let x = dual_align(&phi, &l1).unwrap();
        assert_eq!(x.0[1], c(0.0, 0.0));
        assert_eq!(x.0[2], c(0.0, 0.0));
        assert!(close(phi.pairing(&x).re, 2.0, 1e-15));
    }

    #[test]
    fn zero_entries_get_unit_phase_on_linf() {
        let linf = SpaceSpec::complex(2, Exponent::Infinity).unwrap();
        let x = dual_align(&Vector(vec![c(0.0, 0.0), c(2.0, 0.0)]), &linf).unwrap();
        assert_eq!(x.0[0], c(1.0, 0.0));
        assert!(dual_align(&Vector::zeros(2), &linf).is_err());
    }

    #[test]
    fn dual_align_beats_random_unit_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [1.0, 1.5, 2.0, 3.0, f64::INFINITY] {
            for field in [Field::Real, Field::Complex] {
                let spec = SpaceSpec::new(4, Exponent::new(p).unwrap(), field).unwrap();
                let phi = Vector::gaussian(4, field, &mut rng);
                let x = dual_align(&phi, &spec).unwrap();
                let value = phi.pairing(&x).re;
                assert!(close(value, dual_norm(&phi, &spec).unwrap(), 1e-12));
                assert!(close(norm(&x, &spec).unwrap(), 1.0, 1e-12));
                for _ in 0..10_000 {
                    let y = spec.random_unit(&mut rng);
                    assert!(phi.pairing(&y).re <= value * (1.0 + 1e-12));
                }
            }
        }
    }

    #[test]
    fn space_spec_json() {
        let s = SpaceSpec::complex(3, Exponent::Infinity).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"dim":3,"p":"inf","field":"complex"}"#);
        assert_eq!(serde_json::from_str::<SpaceSpec>(&text).unwrap(), s);
        let s: SpaceSpec = serde_json::from_str(r#"{"dim":2,"p":1.5,"field":"real"}"#).unwrap();
        assert_eq!(s.p, Exponent::Finite(1.5));
        assert!(serde_json::from_str::<SpaceSpec>(r#"{"dim":2,"p":0.5,"field":"real"}"#).is_err());
    }

    #[test]
    fn conjugate_exponents() {
        assert_eq!(Exponent::Finite(1.0).conjugate(), Exponent::Infinity);
        assert_eq!(Exponent::Infinity.conjugate(), Exponent::Finite(1.0));
        assert_eq!(Exponent::Finite(2.0).conjugate(), Exponent::Finite(2.0));
        assert_eq!(Exponent::Finite(4.0).conjugate(), Exponent::Finite(4.0 / 3.0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn norm_is_absolutely_homogeneous(
                xs in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 1..6),
                lre in -3.0..3.0f64, lim in -3.0..3.0f64,
                p in prop::sample::select(vec![1.0, 1.3, 2.0, 4.0, f64::INFINITY]),
            ) {
                let x = Vector(xs.iter().map(|&(a, b)| c(a, b)).collect());
                let spec = SpaceSpec::complex(x.len(), Exponent::new(p).unwrap()).unwrap();
                let lambda = c(lre, lim);
                let lhs = norm(&x.scale(lambda), &spec).unwrap();
                let rhs = lambda.norm() * norm(&x, &spec).unwrap();
                prop_assert!((lhs - rhs).abs() <= 1e-13 * rhs.max(1e-300));
            }

            #[test]
            fn projection_lands_on_sphere(
                xs in prop::collection::vec(-5.0..5.0f64, 1..6),
                p in prop::sample::select(vec![1.0, 1.7, 2.0, 6.0, f64::INFINITY]),
            ) {
                let x = Vector::from_real(&xs);
                prop_assume!(!x.is_zero());
                let spec = SpaceSpec::real(x.len(), Exponent::new(p).unwrap()).unwrap();
                let u = project_to_sphere(&x, &spec).unwrap();
                prop_assert!((norm(&u, &spec).unwrap() - 1.0).abs() <= 1e-14);
            }
        }
    }
}

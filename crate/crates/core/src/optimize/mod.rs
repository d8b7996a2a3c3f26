//! Certified lower bounds for sup-type norms of polynomials.
//!
//! Every estimate is an objective value attained at a stored feasible point
//! (the witness), so it is a true lower bound for the norm it estimates.
//! Runs are deterministic in [`OptimConfig::seed`]: starts are independent,
//! may execute in parallel, and are reduced by value with ties broken by the
//! lexicographically smallest witness.

mod local;
pub mod spectral;

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constants::Partition;
use crate::error::{check_dim, Error, Result};
use crate::polarize::{polarize_blocked, BlockTuple};
use crate::poly::HomogeneousPolynomial;
use crate::spaces::{lp_norm, project_to_sphere, Field, SpaceSpec, Vector};

use local::{ascend_blocked, ascend_poly, scaled_objective};
pub use spectral::{quadratic_matrix, spectral_norm_quadratic};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimConfig {
    pub starts: usize,
    pub max_iters: usize,
    /// Relative objective improvement below which a local run stops.
    pub tol: f64,
    pub seed: u64,
    /// Answer degree-2 requests on `ℓ₂` with the exact spectral oracle.
    pub spectral_shortcut: bool,
    pub parallel: bool,
}

impl Default for OptimConfig {
    fn default() -> Self {
        OptimConfig {
            starts: 200,
            max_iters: 500,
            tol: 1e-10,
            seed: 0,
            spectral_shortcut: true,
            parallel: true,
        }
    }
}

impl OptimConfig {
    pub fn with_seed(seed: u64) -> Self {
        OptimConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 || self.max_iters == 0 || !(self.tol > 0.0) {
            return Err(Error::invalid("starts, max_iters and tol must all be positive"));
        }
        Ok(())
    }

    fn start_rng(&self, index: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64 + 1);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimateKind {
    Poly,
    Multilinear,
    Blocked,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Multistart,
    Spectral,
    Closed,
}

/// A lower bound for a norm together with the point that attains it.
#[derive(Debug, Clone, PartialEq)]
pub struct NormEstimate {
    pub value: f64,
    pub kind: EstimateKind,
    /// One unit vector for `Poly`; one unit vector per block otherwise.
    pub witness: Vec<Vector>,
    /// Block multiplicities matching `witness`.
    pub parts: Vec<u32>,
    pub converged_starts: usize,
    pub method: Method,
    pub config: OptimConfig,
}

impl NormEstimate {
    /// Re-evaluates the objective at the witness.
    pub fn recompute(&self, p: &HomogeneousPolynomial, spec: &SpaceSpec) -> Result<f64> {
        match self.kind {
            EstimateKind::Poly => {
                check_dim(p.dim(), self.witness[0].len())?;
                Ok(scaled_objective(p, spec, &self.witness[0]))
            }
            _ => {
                let bt = BlockTuple::new(
                    self.witness
                        .iter()
                        .cloned()
                        .zip(self.parts.iter().copied())
                        .collect(),
                )?;
                let scale: f64 = self
                    .witness
                    .iter()
                    .zip(&self.parts)
                    .map(|(w, &m)| lp_norm(&w.0, spec.p).powi(m as i32))
                    .product();
                Ok(polarize_blocked(p, &bt)?.norm() / scale)
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let witness = match self.kind {
            EstimateKind::Poly => serde_json::to_value(&self.witness[0]),
            _ => serde_json::to_value(&self.witness),
        }
        .expect("vectors serialize");
        serde_json::json!({
            "value": self.value,
            "kind": self.kind,
            "witness": witness,
            "parts": self.parts,
            "converged_starts": self.converged_starts,
            "seed": self.config.seed,
            "starts": self.config.starts,
            "method": self.method,
        })
    }
}

struct Candidate {
    witness: Vec<Vector>,
    value: f64,
    converged: bool,
}

fn witness_cmp(a: &[Vector], b: &[Vector]) -> Ordering {
    let fa = a.iter().flat_map(Vector::flat);
    let fb = b.iter().flat_map(Vector::flat);
    for (x, y) in fa.zip(fb) {
        match x.total_cmp(&y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// Runs every start and keeps the best; the fold is order-independent.
fn multistart<F>(cfg: &OptimConfig, run: F) -> (Candidate, usize)
where
    F: Fn(usize, &mut ChaCha8Rng) -> Candidate + Sync,
{
    let job = |i: usize| run(i, &mut cfg.start_rng(i));
    let results: Vec<Candidate> = if cfg.parallel {
        (0..cfg.starts).into_par_iter().map(job).collect()
    } else {
        (0..cfg.starts).map(job).collect()
    };
    let converged = results.iter().filter(|c| c.converged).count();
    let best = results
        .into_iter()
        .reduce(|a, b| match a.value.total_cmp(&b.value) {
            Ordering::Greater => a,
            Ordering::Less => b,
            Ordering::Equal => {
                if witness_cmp(&b.witness, &a.witness) == Ordering::Less {
                    b
                } else {
                    a
                }
            }
        })
        .expect("at least one start");
    (best, converged)
}

fn check_inputs(p: &HomogeneousPolynomial, spec: &SpaceSpec, cfg: &OptimConfig) -> Result<()> {
    cfg.validate()?;
    check_dim(spec.dim, p.dim())?;
    if p.field() == Field::Complex && spec.field == Field::Real {
        return Err(Error::invalid("a complex polynomial cannot be maximized over a real space"));
    }
    if p.field() == Field::Real && spec.field == Field::Complex {
        return Err(Error::invalid(
            "complexify the real polynomial before maximizing it over a complex space",
        ));
    }
    Ok(())
}

fn unit_ones(spec: &SpaceSpec) -> Vector {
    project_to_sphere(&Vector::ones(spec.dim), spec).expect("nonzero")
}

fn uses_spectral(p: &HomogeneousPolynomial, spec: &SpaceSpec, cfg: &OptimConfig) -> bool {
    cfg.spectral_shortcut && p.degree() == 2 && spec.p.is_two()
}

fn finish(
    p: &HomogeneousPolynomial,
    spec: &SpaceSpec,
    cfg: &OptimConfig,
    kind: EstimateKind,
    parts: Vec<u32>,
    witness: Vec<Vector>,
    converged_starts: usize,
    method: Method,
) -> Result<NormEstimate> {
    let witness = witness
        .into_iter()
        .map(|w| project_to_sphere(&w, spec).unwrap_or(w))
        .collect();
    let mut est = NormEstimate {
        value: 0.0,
        kind,
        witness,
        parts,
        converged_starts,
        method,
        config: *cfg,
    };
    est.value = est.recompute(p, spec)?;
    Ok(est)
}

/// Lower bound for `‖P‖ = sup_{‖x‖=1} |P(x)|`.
pub fn estimate_poly_norm(
    p: &HomogeneousPolynomial,
    spec: &SpaceSpec,
    cfg: &OptimConfig,
) -> Result<NormEstimate> {
    check_inputs(p, spec, cfg)?;
    let k = p.degree();
    let kind = EstimateKind::Poly;
    if k == 0 || p.is_zero() {
        return finish(p, spec, cfg, kind, vec![k], vec![unit_ones(spec)], cfg.starts, Method::Closed);
    }
    if uses_spectral(p, spec, cfg) {
        let (_, w) = spectral::takagi_top(&quadratic_matrix(p)?);
        return finish(p, spec, cfg, kind, vec![k], vec![w], 1, Method::Spectral);
    }
    let (best, converged) = multistart(cfg, |i, rng| {
        let start = if i == 0 { unit_ones(spec) } else { spec.random_unit(rng) };
        let out = ascend_poly(p, spec, &start, cfg.max_iters, cfg.tol);
        Candidate {
            witness: vec![out.x],
            value: out.value,
            converged: out.converged,
        }
    });
    finish(p, spec, cfg, kind, vec![k], best.witness, converged, Method::Multistart)
}

/// Lower bound for `‖P∨‖ = sup |P∨(x₁, …, x_k)|` over unit vectors.
pub fn estimate_multilinear_norm(
    p: &HomogeneousPolynomial,
    spec: &SpaceSpec,
    cfg: &OptimConfig,
) -> Result<NormEstimate> {
    if p.degree() == 0 {
        return Err(Error::invalid("the multilinear norm needs degree >= 1"));
    }
    let parts = vec![1; p.degree() as usize];
    blocked(p, parts, spec, cfg, EstimateKind::Multilinear)
}

/// Lower bound for `‖P‖_{k₁,…,kₙ;X} = sup |P∨(x₁^{k₁}, …, xₙ^{kₙ})|`.
pub fn estimate_blocked_norm(
    p: &HomogeneousPolynomial,
    parts: &Partition,
    spec: &SpaceSpec,
    cfg: &OptimConfig,
) -> Result<NormEstimate> {
    if parts.degree() != p.degree() {
        return Err(Error::invalid(format!(
            "parts {parts} sum to {} but the degree is {}",
            parts.degree(),
            p.degree()
        )));
    }
    if parts.parts().contains(&0) {
        return Err(Error::invalid("blocked norms need positive multiplicities"));
    }
    blocked(p, parts.parts().to_vec(), spec, cfg, EstimateKind::Blocked)
}

fn blocked(
    p: &HomogeneousPolynomial,
    parts: Vec<u32>,
    spec: &SpaceSpec,
    cfg: &OptimConfig,
    kind: EstimateKind,
) -> Result<NormEstimate> {
    check_inputs(p, spec, cfg)?;
    let poly = estimate_poly_norm(p, spec, cfg)?;
    let diagonal = |w: &Vector| vec![w.clone(); parts.len()];

    if parts.len() == 1 || poly.method == Method::Closed {
        let witness = diagonal(&poly.witness[0]);
        return finish(p, spec, cfg, kind, parts, witness, poly.converged_starts, poly.method);
    }
    if poly.method == Method::Spectral {
        // |P∨(x, y)| ≤ σ on ℓ₂, attained on the diagonal at the Takagi vector
        let witness = diagonal(&poly.witness[0]);
        return finish(p, spec, cfg, kind, parts, witness, 1, Method::Spectral);
    }

    let (best, converged) = multistart(cfg, |i, rng| {
        let start = match i {
            0 => diagonal(&unit_ones(spec)),
            1 => diagonal(&poly.witness[0]),
            _ => parts.iter().map(|_| spec.random_unit(rng)).collect(),
        };
        let out = ascend_blocked(p, &parts, spec, start, cfg.max_iters, cfg.tol);
        Candidate {
            witness: out.blocks,
            value: out.value,
            converged: out.converged,
        }
    });
    finish(p, spec, cfg, kind, parts, best.witness, converged, Method::Multistart)
}

/// Both norms and their quotient, a per-polynomial witness for `c(k, X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub poly: NormEstimate,
    pub multilinear: NormEstimate,
    /// The denominator used: the supplied exact (or upper-bound) value of
    /// `‖P‖` when given, otherwise the estimate.
    pub denominator: f64,
    pub ratio: f64,
    /// True when `ratio` is a rigorous lower bound for `c(k, X)`, which
    /// requires an exact or upper-bound denominator.
    pub rigorous: bool,
}

impl RatioReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "poly": self.poly.to_json(),
            "multilinear": self.multilinear.to_json(),
            "denominator": self.denominator,
            "ratio": self.ratio,
            "rigorous": self.rigorous,
        })
    }
}

/// `‖P∨‖ / ‖P‖` estimated on `spec`.
///
/// `exact_norm` overrides the denominator; pass the exact `‖P‖` or any
/// upper bound for it to make the ratio a rigorous lower bound.
pub fn estimate_ratio(
    p: &HomogeneousPolynomial,
    spec: &SpaceSpec,
    cfg: &OptimConfig,
    exact_norm: Option<f64>,
) -> Result<RatioReport> {
    let poly = estimate_poly_norm(p, spec, cfg)?;
    if poly.value == 0.0 {
        return Err(Error::degenerate("the polynomial vanishes on the sphere"));
    }
    let multilinear = estimate_multilinear_norm(p, spec, cfg)?;
    if let Some(d) = exact_norm {
        if !(d > 0.0) {
            return Err(Error::invalid("the exact denominator must be positive"));
        }
    }
    let denominator = exact_norm.unwrap_or(poly.value);
    Ok(RatioReport {
        ratio: multilinear.value / denominator,
        denominator,
        rigorous: exact_norm.is_some(),
        poly,
        multilinear,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BochnakReport {
    pub real_norm: NormEstimate,
    pub complex_norm: NormEstimate,
    pub ratio: f64,
}

impl BochnakReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "real_norm": self.real_norm.to_json(),
            "complex_norm": self.complex_norm.to_json(),
            "ratio": self.ratio,
        })
    }
}

/// `‖P̃‖ / ‖P‖` for a real polynomial: the complexification is maximized on
/// the same `ℓ_p` over ℂ, which is the Bochnak complexification of `ℓ_p` over ℝ.
pub fn estimate_bochnak_ratio(
    p: &HomogeneousPolynomial,
    spec: &SpaceSpec,
    cfg: &OptimConfig,
) -> Result<BochnakReport> {
    if p.field() != Field::Real || spec.field != Field::Real {
        return Err(Error::invalid("the Bochnak ratio needs a real polynomial on a real space"));
    }
    let real_norm = estimate_poly_norm(p, spec, cfg)?;
    if real_norm.value == 0.0 {
        return Err(Error::degenerate("the polynomial vanishes on the real sphere"));
    }
    let complex_norm = estimate_poly_norm(&p.complexify()?, &spec.with_field(Field::Complex), cfg)?;
    Ok(BochnakReport {
        ratio: complex_norm.value / real_norm.value,
        real_norm,
        complex_norm,
    })
}

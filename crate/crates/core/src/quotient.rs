//! η-nets on unit spheres and the norm-one quotient map `q: ℓ₁^d → X`.
//!
//! If `{h₁, …, h_d}` is an η-net of the sphere of `X`, the map sending
//! `e_j ↦ h_j` has norm one, and every `x` lifts greedily to some `z` with
//! `q(z) = x` and `‖z‖₁ ≤ ‖x‖/(1−η)`. Pulling a polynomial back along `q`
//! bounds its polarization constant on `X` by the one on `ℓ₁^d`, up to a
//! factor `(1+ε)^k`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::constants::exact_c_l1;
use crate::error::{check_dim, Error, Result};
use crate::optimize::{estimate_poly_norm, OptimConfig};
use crate::polarize::{polarize_blocked, BlockTuple};
use crate::poly::{binomial_f64, HomogeneousPolynomial};
use crate::spaces::{lp_norm, norm, project_to_sphere, Exponent, Field, SpaceSpec, Vector};

/// Size of each random sample used to build and to check a net.
pub const NET_SAMPLES: usize = 100_000;
/// Nets larger than this are refused rather than built.
pub const MAX_NET_SIZE: usize = 20_000;
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-12;
pub const DEFAULT_MAX_STEPS: usize = 200;
/// Highest degree accepted by [`verify_transfer_bound`].
pub const TRANSFER_MAX_DEGREE: u32 = 8;
/// Largest pulled-back polynomial (in monomials) expanded to cross-check the
/// lifted multilinear value.
const PULLBACK_TERM_BUDGET: f64 = 2.0e5;

/// Monotone proxy for `‖a − b‖_p`, cheap enough for the covering loops.
#[derive(Clone, Copy)]
struct Metric {
    p: Exponent,
}

impl Metric {
    fn key(&self, a: &[Complex64], b: &[Complex64]) -> f64 {
        let sq = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr());
        match self.p {
            Exponent::Infinity => sq.fold(0.0, f64::max),
            Exponent::Finite(p) if p == 1.0 => sq.map(f64::sqrt).sum(),
            Exponent::Finite(p) if p == 2.0 => sq.sum(),
            Exponent::Finite(p) => sq.map(|d| d.powf(p / 2.0)).sum(),
        }
    }

    fn key_of(&self, distance: f64) -> f64 {
        match self.p {
            Exponent::Infinity | Exponent::Finite(2.0) => distance * distance,
            Exponent::Finite(p) if p == 1.0 => distance,
            Exponent::Finite(p) => distance.powf(p),
        }
    }
}

fn check_budget(spec: &SpaceSpec) -> Result<()> {
    let limit = match spec.field {
        Field::Real => 3,
        Field::Complex => 2,
    };
    if spec.dim > limit {
        return Err(Error::Unsupported(format!(
            "η-nets are limited to dimension {limit} over the {} field, got {}",
            spec.field, spec.dim
        )));
    }
    Ok(())
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::invalid(format!("eta must lie in (0, 1), got {eta}")));
    }
    Ok(())
}

/// Unit vectors from a regular grid: cube lattice points over ℝ, moduli and
/// phases over ℂ.
fn angular_grid(spec: &SpaceSpec) -> Vec<Vector> {
    let c = Complex64::new;
    let mut raw: Vec<Vector> = Vec::new();
    match (spec.field, spec.dim) {
        (Field::Real, n) => {
            // lattice points on the surface of the cube [-1, 1]^n
            let m: i32 = match n {
                1 => 1,
                2 => 2048,
                _ => 48,
            };
            let coords: Vec<f64> = (-m..=m).map(|i| i as f64 / m as f64).collect();
            let mut idx = vec![0usize; n];
            loop {
                if idx.iter().any(|&i| i == 0 || i + 1 == coords.len()) {
                    raw.push(Vector(idx.iter().map(|&i| c(coords[i], 0.0)).collect()));
                }
                let mut j = 0;
                while j < n && idx[j] + 1 == coords.len() {
                    idx[j] = 0;
                    j += 1;
                }
                if j == n {
                    break;
                }
                idx[j] += 1;
            }
        }
        (Field::Complex, 1) => {
            let m = 4096;
            for t in 0..m {
                raw.push(Vector(vec![Complex64::from_polar(1.0, std::f64::consts::TAU * t as f64 / m as f64)]));
            }
        }
        (Field::Complex, _) => {
            let (radii, phases) = (12, 24);
            for a in 0..=radii {
                let (r1, r2) = (a as f64 / radii as f64, 1.0 - a as f64 / radii as f64);
                for t1 in 0..phases {
                    for t2 in 0..phases {
                        let th = |t: i32| std::f64::consts::TAU * t as f64 / phases as f64;
                        raw.push(Vector(vec![
                            Complex64::from_polar(r1, th(t1)),
                            Complex64::from_polar(r2, th(t2)),
                        ]));
                    }
                }
            }
        }
    }
    raw.iter().filter_map(|v| project_to_sphere(v, spec).ok()).collect()
}

fn random_sample(spec: &SpaceSpec, seed: u64, stream: u64) -> Vec<Vector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    (0..NET_SAMPLES).map(|_| spec.random_unit(&mut rng)).collect()
}

/// Index of the net point closest to `x` and the proxy distance to it.
fn nearest(metric: Metric, net: &[Vector], x: &Vector) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, h) in net.iter().enumerate() {
        let d = metric.key(&x.0, &h.0);
        if d < best.1 {
            best = (i, d);
        }
    }
    best
}

/// A finite subset of the unit sphere of `spec` within distance `eta` of
/// every point of a dense seeded sample.
///
/// Farthest-point insertion runs on one sample (random points plus a grid)
/// down to covering radius `eta/2`; a second independent sample is then
/// checked at radius `eta` and any point it finds uncovered joins the net.
pub fn build_eta_net(spec: &SpaceSpec, eta: f64, seed: u64) -> Result<Vec<Vector>> {
    check_eta(eta)?;
    check_budget(spec)?;
    let metric = Metric { p: spec.p };

    let mut sample = random_sample(spec, seed, 1);
    sample.extend(angular_grid(spec));
    let build_key = metric.key_of(eta / 2.0);
    let mut net = vec![Vector::basis(spec.dim, 0)];
    let mut gap: Vec<f64> = sample.iter().map(|x| metric.key(&x.0, &net[0].0)).collect();
    loop {
        let (far, &worst) = gap
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("sample is nonempty");
        if worst < build_key {
            break;
        }
        if net.len() >= MAX_NET_SIZE {
            return Err(Error::Budget(format!(
                "an η-net for {spec} with eta = {eta} needs more than {MAX_NET_SIZE} points"
            )));
        }
        let h = sample[far].clone();
        for (g, x) in gap.iter_mut().zip(&sample) {
            *g = g.min(metric.key(&x.0, &h.0));
        }
        net.push(h);
    }

    let check_key = metric.key_of(eta);
    for x in random_sample(spec, seed, 2) {
        if nearest(metric, &net, &x).1 >= check_key {
            net.push(x);
        }
    }
    Ok(net)
}

/// The map `q: ℓ₁^d → X`, `q(e_j) = h_j`, built on an η-net.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    target: SpaceSpec,
    net: Vec<Vector>,
    eta: f64,
    epsilon: f64,
}

impl QuotientMap {
    /// Wraps an existing net after checking its points and the `η`/`ε` constraint.
    pub fn from_net(target: SpaceSpec, net: Vec<Vector>, eta: f64, epsilon: f64) -> Result<Self> {
        check_eta(eta)?;
        check_constraint(eta, epsilon)?;
        if net.is_empty() {
            return Err(Error::invalid("the net is empty"));
        }
        for h in &net {
            let r = norm(h, &target)?;
            if (r - 1.0).abs() > 1e-12 {
                return Err(Error::invalid(format!("net point has norm {r}, not 1")));
            }
        }
        Ok(QuotientMap {
            target,
            net,
            eta,
            epsilon,
        })
    }

    pub fn target(&self) -> &SpaceSpec {
        &self.target
    }

    pub fn net(&self) -> &[Vector] {
        &self.net
    }

    /// `d`, the dimension of the domain `ℓ₁^d`.
    pub fn d(&self) -> usize {
        self.net.len()
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// The `n × d` matrix whose columns are the net points.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.target.dim, self.d(), |i, j| self.net[j].0[i])
    }

    pub fn apply(&self, z: &SparseL1) -> Vector {
        let mut out = Vector::zeros(self.target.dim);
        for &(j, c) in &z.terms {
            out = out.axpy(c, &self.net[j]);
        }
        out
    }

    /// `‖q‖` from `ℓ₁^d`, the largest column norm.
    pub fn operator_norm(&self) -> f64 {
        self.net.iter().map(|h| lp_norm(&h.0, self.target.p)).fold(0.0, f64::max)
    }

    /// Largest `‖q(z)‖` over `samples` random unit vectors `z` of `ℓ₁^d`.
    pub fn sampled_operator_norm(&self, samples: usize, seed: u64) -> f64 {
        let domain = SpaceSpec {
            dim: self.d(),
            p: Exponent::Finite(1.0),
            field: self.target.field,
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..samples)
            .map(|_| {
                let z = domain.random_unit(&mut rng);
                let terms = z.0.iter().copied().enumerate().collect();
                lp_norm(&self.apply(&SparseL1 { terms }).0, self.target.p)
            })
            .fold(0.0, f64::max)
    }
}

fn check_constraint(eta: f64, epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0) || !(1.0 / (1.0 - eta) < 1.0 + epsilon) {
        return Err(Error::invalid(format!(
            "need 1/(1 - eta) < 1 + epsilon, got eta = {eta}, epsilon = {epsilon}"
        )));
    }
    Ok(())
}

pub fn build_quotient(spec: &SpaceSpec, eta: f64, epsilon: f64, seed: u64) -> Result<QuotientMap> {
    check_eta(eta)?;
    check_constraint(eta, epsilon)?;
    let net = build_eta_net(spec, eta, seed)?;
    QuotientMap::from_net(*spec, net, eta, epsilon)
}

/// A sparse vector of `ℓ₁^d` as `(index, coefficient)` pairs, indices increasing.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SparseL1 {
    pub terms: Vec<(usize, Complex64)>,
}

impl SparseL1 {
    pub fn l1_norm(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).sum()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().map(|&(j, _)| j)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preimage {
    pub z: SparseL1,
    pub steps: usize,
    /// `‖q(z) − x‖` in the target norm.
    pub residual: f64,
    /// Whether the residual after every step `j` stayed below `η^j·‖x‖`.
    pub geometric: bool,
}

/// Lifts `x` through `q` greedily: repeatedly subtract the net point nearest
/// to the normalized residual, scaled by the residual's norm.
pub fn greedy_preimage(
    q: &QuotientMap,
    x: &Vector,
    residual_tol: f64,
    max_steps: usize,
) -> Result<Preimage> {
    let spec = q.target;
    let size = norm(x, &spec)?;
    if size == 0.0 {
        return Ok(Preimage {
            z: SparseL1::default(),
            steps: 0,
            residual: 0.0,
            geometric: true,
        });
    }
    let metric = Metric { p: spec.p };
    let mut coeffs: BTreeMap<usize, f64> = BTreeMap::new();
    let mut residual = x.clone();
    let mut r = size;
    let mut geometric = true;
    let mut steps = 0;
    while r > residual_tol {
        if steps == max_steps {
            return Err(Error::Convergence { steps, residual: r });
        }
        let direction = residual.scale(Complex64::new(1.0 / r, 0.0));
        let (j, _) = nearest(metric, &q.net, &direction);
        *coeffs.entry(j).or_insert(0.0) += r;
        residual = residual.axpy(Complex64::new(-r, 0.0), &q.net[j]);
        steps += 1;
        r = lp_norm(&residual.0, spec.p);
        if r >= size * q.eta.powi(steps as i32) {
            geometric = false;
        }
    }
    let z = SparseL1 {
        terms: coeffs.into_iter().map(|(j, c)| (j, Complex64::new(c, 0.0))).collect(),
    };
    let residual = lp_norm(&q.apply(&z).sub(x).0, spec.p);
    Ok(Preimage {
        z,
        steps,
        residual,
        geometric,
    })
}

/// Outcome of [`verify_transfer_bound`] over a batch of random tuples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferReport {
    pub degree: u32,
    pub d: usize,
    pub eta: f64,
    pub epsilon: f64,
    pub samples: usize,
    /// `c(k, ℓ₁^d)`.
    pub c_l1: f64,
    /// Estimated `‖P‖` on the target.
    pub poly_norm: f64,
    /// Largest `‖z‖₁/‖x‖` over all lifts.
    pub max_l1_ratio: f64,
    pub max_residual: f64,
    /// Largest `|P∨(x₁, …, x_k)| / ((1+ε)^k · c(k, ℓ₁^d) · ‖P‖)`.
    pub transfer_slack: f64,
    /// Largest `|P∨(x₁, …, x_k)| / (c(k, ℓ₁^d) · ‖P‖ · Π‖z_i‖₁)`.
    pub chain_slack: f64,
    /// Largest gap between `P∨(x)` and `(P∘q)∨(z)`, over tuples small enough
    /// to expand `P∘q` explicitly.
    pub max_pullback_gap: f64,
    pub pullback_checks: usize,
    pub violations: usize,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Audits the transfer inequality `|P∨(x₁, …, x_k)| ≤ (1+ε)^k c(k, ℓ₁^d) ‖P‖`
/// on `samples` random unit tuples, lifting each `x_i` through `q`.
pub fn verify_transfer_bound(
    p: &HomogeneousPolynomial,
    q: &QuotientMap,
    cfg: &OptimConfig,
    samples: usize,
) -> Result<TransferReport> {
    let spec = q.target;
    let k = p.degree();
    check_dim(spec.dim, p.dim())?;
    if k == 0 || k > TRANSFER_MAX_DEGREE {
        return Err(Error::Unsupported(format!(
            "transfer audit needs degree 1..={TRANSFER_MAX_DEGREE}, got {k}"
        )));
    }
    let poly_norm = estimate_poly_norm(p, &spec, cfg)?.value;
    let c_l1 = exact_c_l1(k, q.d() as u32)?.to_f64();
    let bound = (1.0 + q.epsilon).powi(k as i32) * c_l1 * poly_norm;

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(0x7a);
    let mut report = TransferReport {
        degree: k,
        d: q.d(),
        eta: q.eta,
        epsilon: q.epsilon,
        samples,
        c_l1,
        poly_norm,
        max_l1_ratio: 0.0,
        max_residual: 0.0,
        transfer_slack: 0.0,
        chain_slack: 0.0,
        max_pullback_gap: 0.0,
        pullback_checks: 0,
        violations: 0,
    };
    for _ in 0..samples {
        let xs: Vec<Vector> = (0..k).map(|_| spec.random_unit(&mut rng)).collect();
        let lifts = xs
            .iter()
            .map(|x| greedy_preimage(q, x, DEFAULT_RESIDUAL_TOL, DEFAULT_MAX_STEPS))
            .collect::<Result<Vec<_>>>()?;
        let lhs = polarize_blocked(p, &BlockTuple::distinct(&xs)?)?.norm();
        let l1_product: f64 = lifts.iter().map(|l| l.z.l1_norm()).product();
        for l in &lifts {
            report.max_l1_ratio = report.max_l1_ratio.max(l.z.l1_norm());
            report.max_residual = report.max_residual.max(l.residual);
        }
        let slack = if bound > 0.0 { lhs / bound } else { 0.0 };
        let chain = if l1_product * c_l1 * poly_norm > 0.0 {
            lhs / (l1_product * c_l1 * poly_norm)
        } else {
            0.0
        };
        report.transfer_slack = report.transfer_slack.max(slack);
        report.chain_slack = report.chain_slack.max(chain);
        let lhs_ok = lhs <= bound * (1.0 + 1e-6) + 1e-300;
        let lift_ok = lifts
            .iter()
            .all(|l| l.residual <= DEFAULT_RESIDUAL_TOL && l.z.l1_norm() <= (1.0 + q.epsilon));
        if !(lhs_ok && lift_ok) {
            report.violations += 1;
        }
        if let Some(gap) = pullback_gap(p, q, &xs, &lifts)? {
            report.pullback_checks += 1;
            report.max_pullback_gap = report.max_pullback_gap.max(gap);
            if gap > 1e-9 * (1.0 + lhs) {
                report.violations += 1;
            }
        }
    }
    Ok(report)
}

/// `|P∨(x) − (P∘q)∨(z)|` with `P∘q` expanded on the union of the supports,
/// or `None` when that expansion is over budget.
fn pullback_gap(
    p: &HomogeneousPolynomial,
    q: &QuotientMap,
    xs: &[Vector],
    lifts: &[Preimage],
) -> Result<Option<f64>> {
    let mut support: Vec<usize> = lifts.iter().flat_map(|l| l.z.support()).collect();
    support.sort_unstable();
    support.dedup();
    let m = support.len();
    let k = p.degree();
    if binomial_f64(m as u32 + k - 1, k) > PULLBACK_TERM_BUDGET {
        return Ok(None);
    }
    let columns = DMatrix::from_fn(q.target.dim, m, |i, j| q.net[support[j]].0[i]);
    let pulled = p.compose_linear(&columns)?;
    let restricted = |z: &SparseL1| {
        let mut v = Vector::zeros(m);
        for &(j, c) in &z.terms {
            v.0[support.binary_search(&j).expect("in support")] = c;
        }
        v
    };
    let zs: Vec<Vector> = lifts.iter().map(|l| restricted(&l.z)).collect();
    let lifted = polarize_blocked(&pulled, &BlockTuple::distinct(&zs)?)?;
    let direct = polarize_blocked(p, &BlockTuple::distinct(xs)?)?;
    Ok(Some((lifted - direct).norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::random_polynomial;

    fn l2(n: usize) -> SpaceSpec {
        SpaceSpec::real(n, Exponent::Finite(2.0)).unwrap()
    }

    fn covers(spec: &SpaceSpec, net: &[Vector], eta: f64, seed: u64) -> bool {
        let metric = Metric { p: spec.p };
        random_sample(spec, seed, 9)
            .iter()
            .all(|x| nearest(metric, net, x).1 < metric.key_of(eta))
    }

    #[test]
    fn circle_net_spacing() {
        let spec = l2(2);
        let net = build_eta_net(&spec, 0.5, 1).unwrap();
        assert!(net.len() >= 13, "{}", net.len());
        let mut angles: Vec<f64> = net.iter().map(|h| h.0[1].re.atan2(h.0[0].re)).collect();
        angles.sort_by(f64::total_cmp);
        let wrap = angles[0] + std::f64::consts::TAU - angles[angles.len() - 1];
        let widest = angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
        assert!(widest < 2.0 * 0.25f64.asin(), "{widest}");
        assert!(covers(&spec, &net, 0.5, 77));
    }

    #[test]
    fn one_dimensional_nets() {
        let net = build_eta_net(&l2(1), 0.9999, 0).unwrap();
        let mut values: Vec<f64> = net.iter().map(|h| h.0[0].re).collect();
        values.sort_by(f64::total_cmp);
        assert_eq!(values, vec![-1.0, 1.0]);

        let spec = SpaceSpec::complex(1, Exponent::Finite(1.0)).unwrap();
        let net = build_eta_net(&spec, 0.1, 0).unwrap();
        let mut angles: Vec<f64> = net.iter().map(|h| h.0[0].arg()).collect();
        angles.sort_by(f64::total_cmp);
        let wrap = angles[0] + std::f64::consts::TAU - angles[angles.len() - 1];
        let widest = angles.windows(2).map(|w| w[1] - w[0]).fold(wrap, f64::max);
        assert!(widest < 2.0 * 0.05f64.asin(), "{widest}");
    }

    #[test]
    fn nets_cover_fresh_samples() {
        for (spec, eta) in [
            (SpaceSpec::real(3, Exponent::Finite(1.0)).unwrap(), 0.3),
            (SpaceSpec::real(2, Exponent::Infinity).unwrap(), 0.1),
            (SpaceSpec::real(2, Exponent::Finite(3.0)).unwrap(), 0.2),
            (SpaceSpec::complex(2, Exponent::Finite(2.0)).unwrap(), 0.6),
        ] {
            let net = build_eta_net(&spec, eta, 5).unwrap();
            for h in &net {
                assert!((norm(h, &spec).unwrap() - 1.0).abs() < 1e-12);
            }
            assert!(covers(&spec, &net, eta, 1234), "{spec} eta={eta}");
        }
    }

    #[test]
    fn budget_and_input_errors() {
        assert!(matches!(
            build_eta_net(&l2(4), 0.5, 0),
            Err(Error::Unsupported(_))
        ));
        let c3 = SpaceSpec::complex(3, Exponent::Finite(2.0)).unwrap();
        assert!(matches!(build_eta_net(&c3, 0.5, 0), Err(Error::Unsupported(_))));
        assert!(build_eta_net(&l2(2), 1.0, 0).is_err());
        assert!(build_eta_net(&l2(2), 0.0, 0).is_err());
    }

    #[test]
    fn quotient_constraint() {
        assert!(build_quotient(&l2(2), 0.1, 0.2, 0).is_ok());
        assert!(build_quotient(&l2(2), 0.1, 0.05, 0).is_err());
    }

    #[test]
    fn operator_norm_at_most_one() {
        let q = build_quotient(&l2(2), 0.1, 0.2, 3).unwrap();
        assert!(q.operator_norm() <= 1.0 + 1e-12);
        assert!(q.sampled_operator_norm(1000, 4) <= 1.0 + 1e-12);
        assert_eq!(q.matrix().ncols(), q.d());
    }

    #[test]
    fn lifts_of_net_points_and_zero() {
        let q = build_quotient(&l2(2), 0.1, 0.2, 3).unwrap();
        let lift = greedy_preimage(&q, &q.net()[5], 1e-12, 200).unwrap();
        assert_eq!(lift.z.terms.len(), 1);
        assert_eq!(lift.z.terms[0].0, 5);
        assert!((lift.z.l1_norm() - 1.0).abs() <= 1e-15);
        assert!(lift.residual <= 1e-15);
        let zero = greedy_preimage(&q, &Vector::zeros(2), 1e-12, 200).unwrap();
        assert!(zero.z.terms.is_empty());
    }

    #[test]
    fn lift_fidelity() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for (spec, eta, epsilon) in [
            (l2(2), 0.1, 0.2),
            (SpaceSpec::real(3, Exponent::Finite(1.0)).unwrap(), 0.3, 0.5),
            (SpaceSpec::complex(2, Exponent::Infinity).unwrap(), 0.6, 1.6),
        ] {
            let q = build_quotient(&spec, eta, epsilon, 2).unwrap();
            for _ in 0..100 {
                let x = spec.random_unit(&mut rng).scale(Complex64::new(2.5, 0.0));
                let lift = greedy_preimage(&q, &x, 1e-12, 200).unwrap();
                assert!(lift.residual <= 1e-12, "{}", lift.residual);
                assert!(lift.geometric);
                assert!(lift.z.l1_norm() <= 2.5 / (1.0 - eta) + 1e-12);
                assert!(lift.z.l1_norm() <= (1.0 + epsilon) * 2.5);
                if eta == 0.1 {
                    assert!(lift.steps <= 14, "{}", lift.steps);
                }
            }
        }
    }

    #[test]
    fn step_cap_reports_residual() {
        let q = build_quotient(&l2(2), 0.5, 1.5, 0).unwrap();
        let x = Vector::from_real(&[0.6, 0.8]);
        match greedy_preimage(&q, &x, 1e-12, 2) {
            Err(Error::Convergence { steps, residual }) => {
                assert_eq!(steps, 2);
                assert!(residual > 1e-12 && residual < 0.25);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn transfer_bound_holds() {
        let q = build_quotient(&l2(2), 0.1, 0.2, 0).unwrap();
        let cfg = OptimConfig { starts: 8, ..OptimConfig::with_seed(1) };
        for k in 1..=3 {
            let p = random_polynomial(k, 2, Field::Real, k as u64).unwrap();
            let report = verify_transfer_bound(&p, &q, &cfg, 10).unwrap();
            assert!(report.passed(), "{report:?}");
            assert!(report.max_l1_ratio <= 1.2);
            assert!(report.max_residual <= 1e-12);
            assert!(report.pullback_checks > 0);
            if k == 1 {
                assert!(report.transfer_slack <= 1.0 / 1.2 + 1e-9);
            }
        }
        let pure = HomogeneousPolynomial::monomial(Field::Real, vec![4, 0], Complex64::new(1.0, 0.0)).unwrap();
        let report = verify_transfer_bound(&pure, &q, &cfg, 5).unwrap();
        assert!(report.passed());
        let too_big = random_polynomial(9, 2, Field::Real, 0).unwrap();
        assert!(verify_transfer_bound(&too_big, &q, &cfg, 1).is_err());
    }
}

//! Single-start local solvers.

use num_complex::Complex64;

use crate::polarize::{polarize_blocked, slot_polynomial, BlockTuple};
use crate::poly::HomogeneousPolynomial;
use crate::spaces::{dual_align, lp_norm, project_to_sphere, Field, SpaceSpec, Vector};

const HALVINGS: usize = 40;

pub(crate) struct LocalOutcome {
    pub x: Vector,
    pub value: f64,
    pub converged: bool,
}

/// `|P(y)| / ‖y‖^k`, invariant under scaling of `y`.
pub(crate) fn scaled_objective(p: &HomogeneousPolynomial, spec: &SpaceSpec, y: &Vector) -> f64 {
    let r = lp_norm(&y.0, spec.p);
    if r == 0.0 {
        return 0.0;
    }
    let v = p.evaluate(y).expect("dimension checked by caller").norm();
    v / r.powi(p.degree() as i32)
}

/// Monotone ascent of `|P(x)|` on the unit sphere of `spec`.
///
/// Every iteration builds two candidates from the ascent functional
/// `φ = conj(P(x))·∇P(x)` (so that `d|P|²/2 = Re⟨φ, dx⟩`):
///
/// * a conditional-gradient step toward `dual_align(φ)`, the exact
///   maximizer of the linearization over the ball, with backtracking;
/// * a plain gradient step along `conj(φ)` with an adaptive step length;
/// * over ℂ, a rotation of the coordinate phases along `−Im(φ_j x_j)`, which
///   moves along the torus where `ℓ_∞` maxima live.
///
/// Both are evaluated through the scale-invariant objective and the better
/// one is kept only if it improves. Staying inside the ball means the
/// conditional-gradient step never loses to normalization.
pub(crate) fn ascend_poly(
    p: &HomogeneousPolynomial,
    spec: &SpaceSpec,
    start: &Vector,
    max_iters: usize,
    tol: f64,
) -> LocalOutcome {
    let mut x = project_to_sphere(start, spec).unwrap_or_else(|_| start.clone());
    let mut value = scaled_objective(p, spec, &x);
    let mut step = 0.25;
    let mut phase_step = 0.25;
    let mut converged = false;

    for _ in 0..max_iters {
        let px = p.evaluate(&x).expect("dimension checked");
        let g = p.gradient(&x).expect("dimension checked");
        // at a zero of P the modulus grows linearly along conj(∇P)
        let phi = if px.norm() == 0.0 { g } else { g.scale(px.conj()) };
        if phi.is_zero() {
            converged = true;
            break;
        }

        let mut best: Option<(Vector, f64)> = None;
        let mut offer = |y: Vector, fy: f64| {
            if fy > value && best.as_ref().is_none_or(|(_, b)| fy > *b) {
                best = Some((y, fy));
            }
        };

        if let Ok(c) = dual_align(&phi, spec) {
            let d = c.sub(&x);
            let mut t = 1.0;
            for _ in 0..HALVINGS {
                let y = x.axpy(Complex64::new(t, 0.0), &d);
                let fy = scaled_objective(p, spec, &y);
                if fy > value {
                    offer(y, fy);
                    break;
                }
                t *= 0.5;
            }
        }

        let dir = phi.conj();
        let dn = lp_norm(&dir.0, crate::spaces::Exponent::Finite(2.0));
        let dir = dir.scale(Complex64::new(1.0 / dn, 0.0));
        let mut s = step;
        let mut moved = false;
        for _ in 0..HALVINGS {
            let y = x.axpy(Complex64::new(s, 0.0), &dir);
            let fy = scaled_objective(p, spec, &y);
            if fy > value {
                offer(y, fy);
                step = (s * 2.0).min(1.0);
                moved = true;
                break;
            }
            s *= 0.5;
        }
        if !moved {
            step = s.max(1e-12);
        }

        if spec.field == Field::Complex {
            // rotate phases only, which keeps every modulus (and the norm) fixed
            let theta: Vec<f64> = x.iter().zip(phi.iter()).map(|(xj, pj)| -(pj * xj).im).collect();
            let tn = theta.iter().map(|t| t * t).sum::<f64>().sqrt();
            if tn > 0.0 {
                let mut s = phase_step;
                let mut moved = false;
                for _ in 0..HALVINGS {
                    let y = Vector(
                        x.iter()
                            .zip(&theta)
                            .map(|(xj, t)| xj * Complex64::from_polar(1.0, s * t / tn))
                            .collect(),
                    );
                    let fy = scaled_objective(p, spec, &y);
                    if fy > value {
                        offer(y, fy);
                        phase_step = (s * 2.0).min(1.0);
                        moved = true;
                        break;
                    }
                    s *= 0.5;
                }
                if !moved {
                    phase_step = s.max(1e-12);
                }
            }
        }

        let Some((y, _)) = best else {
            converged = true;
            break;
        };
        x = project_to_sphere(&y, spec).expect("improving point is nonzero");
        let next = scaled_objective(p, spec, &x);
        let gain = next - value;
        value = next;
        if gain <= tol * value {
            converged = true;
            break;
        }
    }
    LocalOutcome { x, value, converged }
}

pub(crate) struct BlockOutcome {
    pub blocks: Vec<Vector>,
    pub value: f64,
    pub converged: bool,
}

fn block_tuple(blocks: &[Vector], parts: &[u32]) -> BlockTuple {
    BlockTuple::new(blocks.iter().cloned().zip(parts.iter().copied()).collect())
        .expect("blocks share one dimension")
}

pub(crate) fn blocked_value(p: &HomogeneousPolynomial, blocks: &[Vector], parts: &[u32]) -> f64 {
    polarize_blocked(p, &block_tuple(blocks, parts))
        .expect("parts match degree")
        .norm()
}

/// Block-coordinate ascent of `|P∨(x₁^{k₁}, …, xₙ^{kₙ})|` over unit vectors.
///
/// With every other block frozen, a block of multiplicity one enters
/// linearly and is updated exactly by `dual_align`; a block of higher
/// multiplicity is improved by [`ascend_poly`] on its slot polynomial.
pub(crate) fn ascend_blocked(
    p: &HomogeneousPolynomial,
    parts: &[u32],
    spec: &SpaceSpec,
    start: Vec<Vector>,
    max_iters: usize,
    tol: f64,
) -> BlockOutcome {
    let mut blocks: Vec<Vector> = start
        .into_iter()
        .map(|v| project_to_sphere(&v, spec).unwrap_or(v))
        .collect();
    let mut value = blocked_value(p, &blocks, parts);
    let mut converged = false;
    let inner_iters = max_iters.clamp(1, 50);

    for _ in 0..max_iters {
        for i in 0..blocks.len() {
            let slot = slot_polynomial(p, &block_tuple(&blocks, parts), i).expect("consistent blocks");
            if parts[i] == 1 {
                let phi = Vector(
                    (0..spec.dim)
                        .map(|j| {
                            let mut e = vec![0u32; spec.dim];
                            e[j] = 1;
                            slot.coefficient(&e)
                        })
                        .collect(),
                );
                if let Ok(x) = dual_align(&phi, spec) {
                    blocks[i] = x;
                }
            } else {
                let current = scaled_objective(&slot, spec, &blocks[i]);
                let out = ascend_poly(&slot, spec, &blocks[i], inner_iters, tol);
                if out.value > current {
                    blocks[i] = out.x;
                }
            }
        }
        let next = blocked_value(p, &blocks, parts);
        let gain = next - value;
        value = next;
        if gain <= tol * value {
            converged = true;
            break;
        }
    }
    BlockOutcome {
        blocks,
        value,
        converged,
    }
}

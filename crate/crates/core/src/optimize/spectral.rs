//! Exact uniform and bilinear norms of quadratics on `ℓ₂ⁿ`.
//!
//! For `P(z) = zᵀAz` with `A` complex symmetric, both `‖P‖` and `‖P∨‖`
//! equal the largest singular value of `A`, attained at a Takagi vector
//! `w` with `A w = σ w̄`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::HomogeneousPolynomial;
use crate::spaces::Vector;

const SQUARINGS: usize = 64;
const REFINE_STEPS: usize = 50;

/// Symmetric coefficient matrix: `A_ii = c_{2e_i}`, `A_ij = A_ji = c_{e_i+e_j}/2`.
pub fn quadratic_matrix(p: &HomogeneousPolynomial) -> Result<DMatrix<Complex64>> {
    if p.degree() != 2 {
        return Err(Error::invalid(format!(
            "spectral oracle needs a quadratic, got degree {}",
            p.degree()
        )));
    }
    let n = p.dim();
    let mut a = DMatrix::<Complex64>::zeros(n, n);
    for (alpha, &c) in p.terms() {
        let idx: Vec<usize> = alpha
            .0
            .iter()
            .enumerate()
            .flat_map(|(j, &e)| std::iter::repeat_n(j, e as usize))
            .collect();
        let (i, j) = (idx[0], idx[1]);
        if i == j {
            a[(i, i)] = c;
        } else {
            a[(i, j)] = c * 0.5;
            a[(j, i)] = c * 0.5;
        }
    }
    Ok(a)
}

fn max_entry(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Top singular value of `A` and a Takagi vector for it.
pub(crate) fn takagi_top(a: &DMatrix<Complex64>) -> (f64, Vector) {
    let n = a.nrows();
    let b = a.adjoint() * a;
    let scale = max_entry(&b);
    if scale == 0.0 {
        let mut w = Vector::zeros(n);
        w.0[0] = Complex64::new(1.0, 0.0);
        return (0.0, w);
    }

    // Repeated squaring of the normalized Gram matrix converges to a multiple
    // of the projector onto its top eigenspace.
    let mut power = &b / Complex64::new(scale, 0.0);
    for _ in 0..SQUARINGS {
        let mut next = &power * &power;
        let m = max_entry(&next);
        next /= Complex64::new(m, 0.0);
        let change = max_entry(&(&next - &power));
        power = next;
        if change < 1e-15 {
            break;
        }
    }
    let col = (0..n)
        .max_by(|&i, &j| power.column(i).norm().total_cmp(&power.column(j).norm()))
        .expect("n >= 1");
    let mut v: DVector<Complex64> = power.column(col).into_owned();
    v /= Complex64::new(v.norm(), 0.0);
    for _ in 0..REFINE_STEPS {
        let next = &b * &v;
        let r = next.norm();
        if r == 0.0 {
            break;
        }
        v = next / Complex64::new(r, 0.0);
    }
    let sigma = (v.dotc(&(&b * &v)).re).max(0.0).sqrt();

    // A v = σ u and A ū = σ v̄, so z = v ± ū satisfies A z = ±σ z̄ and
    // |zᵀAz| = σ‖z‖². Since ‖v + ū‖² + ‖v − ū‖² = 4, the larger one has norm ≥ √2.
    let u = (a * &v) / Complex64::new(sigma, 0.0);
    let plus = &v + u.map(|c| c.conj());
    let minus = &v - u.map(|c| c.conj());
    let mut z = if plus.norm() >= minus.norm() { plus } else { minus };
    z /= Complex64::new(z.norm(), 0.0);
    (sigma, Vector(z.iter().copied().collect()))
}

/// Largest singular value of the coefficient matrix of a quadratic, which is
/// both its uniform norm and the norm of its bilinear form on `ℓ₂ⁿ`.
///
/// Real quadratics are handled as their complexification; the value agrees
/// with the real `ℓ₂ⁿ` norm too.
pub fn spectral_norm_quadratic(p: &HomogeneousPolynomial, n: usize) -> Result<f64> {
    crate::error::check_dim(p.dim(), n)?;
    let a = quadratic_matrix(p)?;
    Ok(takagi_top(&a).0)
}

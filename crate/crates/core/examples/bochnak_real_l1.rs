//! A real polynomial on `ℓ₁²(ℝ)` whose complexification is much larger.
//!
//! `P(x, y) = (xy)^{2m} Re (x + iy)^{4m}` has norm `2^{−6m}` on the real
//! sphere, but its complexification reaches `2^{−(4m+1)}` at `(1/2, i/2)`.

use polarization::optimize::{estimate_bochnak_ratio, OptimConfig};
use polarization::poly::real_l1_example;
use polarization::spaces::{Exponent, SpaceSpec, Vector};
use polarization::Complex64;

fn main() -> polarization::Result<()> {
    let spec = SpaceSpec::real(2, Exponent::Finite(1.0))?;
    let cfg = OptimConfig::with_seed(11);
    for m in 1..=3 {
        let p = real_l1_example(m)?;
        let probe = Vector(vec![Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5)]);
        let at = p.complexify()?.evaluate(&probe)?.norm();
        let report = estimate_bochnak_ratio(&p, &spec, &cfg)?;
        println!(
            "m={m} degree {:>2}: ||P|| ~ {:.3e} (exact {:.3e}), |P~(1/2,i/2)| = {:.3e}, ratio >= {:.4} (2^(2m-1) = {})",
            p.degree(),
            report.real_norm.value,
            0.5f64.powi(6 * m as i32),
            at,
            report.ratio,
            2u32.pow(2 * m - 1)
        );
    }
    Ok(())
}

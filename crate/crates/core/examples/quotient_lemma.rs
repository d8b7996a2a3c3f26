//! Lifting through an η-net quotient map `q: ℓ₁^d → ℓ₂²(ℝ)`.
//!
//! Every unit `x` lifts to `z` with `q(z) = x` and `‖z‖₁ < 1/(1−η)`, which
//! turns the polarization bound on `ℓ₁^d` into one on the target space.

use polarization::optimize::OptimConfig;
use polarization::poly::random_polynomial;
use polarization::quotient::{build_quotient, greedy_preimage, verify_transfer_bound};
use polarization::spaces::{Exponent, Field, SpaceSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> polarization::Result<()> {
    let spec = SpaceSpec::real(2, Exponent::Finite(2.0))?;
    let (eta, epsilon) = (0.1, 0.2);
    let q = build_quotient(&spec, eta, epsilon, 1)?;
    println!("eta-net of {spec}: d = {} points, ||q|| = {}", q.d(), q.operator_norm());

    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..5 {
        let x = spec.random_unit(&mut rng);
        let lift = greedy_preimage(&q, &x, 1e-12, 200)?;
        println!(
            "x = ({:+.4}, {:+.4}): {} steps, {} net points, ||z||_1 = {:.6}, residual {:.1e}",
            x[0].re,
            x[1].re,
            lift.steps,
            lift.z.terms.len(),
            lift.z.l1_norm(),
            lift.residual
        );
    }

    let cfg = OptimConfig {
        starts: 16,
        ..OptimConfig::with_seed(5)
    };
    for k in 1..=3 {
        let p = random_polynomial(k, 2, Field::Real, k as u64)?;
        let report = verify_transfer_bound(&p, &q, &cfg, 20)?;
        println!(
            "k={k}: max |P^v(x)| / ((1+eps)^k c(k,l1^d) ||P||) = {:.4}, violations {}",
            report.transfer_slack, report.violations
        );
    }
    Ok(())
}

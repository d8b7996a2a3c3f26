//! Blocked norms `sup |P^v(x₁^{k₁}, …, xₙ^{kₙ})|` against Harris' bound.
//!
//! The quartic is the square of the Varopoulos quadratic, whose norm on
//! `ℓ∞³` is `5² = 25`. The quadratic itself already separates the diagonal
//! value 5 from the bilinear value 6.

use polarization::constants::{harris_bound, Partition};
use polarization::optimize::{estimate_blocked_norm, OptimConfig};
use polarization::poly::varopoulos;
use polarization::spaces::{Exponent, SpaceSpec};

fn main() -> polarization::Result<()> {
    let spec = SpaceSpec::complex(3, Exponent::Infinity)?;
    let cfg = OptimConfig {
        starts: 48,
        ..OptimConfig::with_seed(21)
    };
    for parts in [vec![2], vec![1, 1]] {
        let pt = Partition::new(parts)?;
        let est = estimate_blocked_norm(&varopoulos(), &pt, &spec, &cfg)?;
        println!("Varopoulos quadratic, parts {pt}: {:.6} (Harris bound x 5 = {})", est.value, harris_bound(&pt)?.to_f64() * 5.0);
    }

    let p = varopoulos().product(&varopoulos())?;
    let norm = estimate_blocked_norm(&p, &Partition::new(vec![4])?, &spec, &cfg)?.value;
    println!("squared Varopoulos quadratic on {spec}: ||P|| >= {norm:.6}");
    println!("parts       blocked est   blocked/||P||   Harris bound");
    for parts in [vec![3, 1], vec![2, 2], vec![2, 1, 1], vec![1, 1, 1, 1]] {
        let pt = Partition::new(parts)?;
        let est = estimate_blocked_norm(&p, &pt, &spec, &cfg)?;
        println!(
            "{:<10}  {:.6}      {:.6}        {:.6}",
            pt.to_string(),
            est.value,
            est.value / norm,
            harris_bound(&pt)?.to_f64()
        );
    }
    Ok(())
}

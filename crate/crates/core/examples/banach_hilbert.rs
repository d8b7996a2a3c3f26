//! On a Hilbert space a quadratic and its bilinear form have the same norm.
//!
//! The iterative estimators (spectral shortcut switched off) are compared
//! with the exact largest singular value of the coefficient matrix.

use polarization::optimize::{estimate_multilinear_norm, estimate_poly_norm, spectral_norm_quadratic, OptimConfig};
use polarization::poly::random_polynomial;
use polarization::spaces::{Exponent, Field, SpaceSpec};

fn main() -> polarization::Result<()> {
    let spec = SpaceSpec::complex(4, Exponent::Finite(2.0))?;
    println!("seed  sigma_max        ||P|| est        ||P^v|| est");
    for seed in 0..8 {
        let cfg = OptimConfig {
            starts: 16,
            spectral_shortcut: false,
            ..OptimConfig::with_seed(seed)
        };
        let p = random_polynomial(2, 4, Field::Complex, seed)?;
        let sigma = spectral_norm_quadratic(&p, 4)?;
        let poly = estimate_poly_norm(&p, &spec, &cfg)?;
        let multi = estimate_multilinear_norm(&p, &spec, &cfg)?;
        println!("{seed:>4}  {sigma:.12}   {:.12}   {:.12}", poly.value, multi.value);
    }
    Ok(())
}

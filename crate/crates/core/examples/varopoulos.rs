//! The Varopoulos quadratic `z₁² + z₂² + z₃² − 2(z₁z₂ + z₁z₃ + z₂z₃)` on `ℓ_p³`.
//!
//! On `ℓ∞³` its norm is 5 while its bilinear form reaches 6; interpolating
//! with the Hilbert value 2 gives `c(2, ℓ_p³) ≥ (6/5)^{1−2/p}`.

use polarization::constants::{lp3_bilinear_witness_value, lp3_interpolation_upper_bound, lp3_lower_bound};
use polarization::optimize::{estimate_multilinear_norm, estimate_poly_norm, estimate_ratio, spectral_norm_quadratic, OptimConfig};
use polarization::poly::varopoulos;
use polarization::spaces::{Exponent, SpaceSpec};

fn main() -> polarization::Result<()> {
    let p = varopoulos();
    let cfg = OptimConfig::with_seed(3);
    println!("P = {p}");
    println!("norm on l_2^3 (spectral): {}", spectral_norm_quadratic(&p, 3)?);

    let linf = SpaceSpec::complex(3, Exponent::Infinity)?;
    let poly = estimate_poly_norm(&p, &linf, &cfg)?;
    let multi = estimate_multilinear_norm(&p, &linf, &cfg)?;
    println!("on l_inf^3: ||P|| >= {:.10}  ||P^v|| >= {:.10}", poly.value, multi.value);
    println!("bilinear witness: {}", multi.to_json()["witness"]);

    println!("\n  p   ||P||est   bound   ||P^v||est  6/3^(2/p)  ratio>=   (6/5)^(1-2/p)");
    for p_val in [3.0, 4.0, 8.0, 16.0] {
        let pe = Exponent::new(p_val)?;
        let spec = SpaceSpec::complex(3, pe)?;
        let upper = lp3_interpolation_upper_bound(pe)?;
        let r = estimate_ratio(&p, &spec, &cfg, Some(upper))?;
        println!(
            "{p_val:>4}  {:.6}  {:.6}  {:.6}  {:.6}  {:.6}  {:.6}",
            r.poly.value,
            upper,
            r.multilinear.value,
            lp3_bilinear_witness_value(pe),
            r.ratio,
            lp3_lower_bound(pe)?
        );
    }
    Ok(())
}

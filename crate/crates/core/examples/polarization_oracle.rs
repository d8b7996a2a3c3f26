//! The symmetric multilinear form of a polynomial, computed two ways.
//!
//! The sign-sum polarization formula needs only point evaluations of `P`;
//! the blocked evaluator works from the coefficients. They must agree.

use polarization::polarize::{derivative_pairing, polarize_blocked, polarize_sign_sum, BlockTuple};
use polarization::poly::random_polynomial;
use polarization::spaces::{Field, Vector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> polarization::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let p = random_polynomial(4, 3, Field::Complex, 7)?;
    println!("P = {p}\n");

    let args: Vec<Vector> = (0..4).map(|_| Vector::gaussian(3, Field::Complex, &mut rng)).collect();
    let by_signs = polarize_sign_sum(&p, &args)?;
    let by_coefficients = polarize_blocked(&p, &BlockTuple::distinct(&args)?)?;
    println!("sign sum     {by_signs:.15}");
    println!("coefficients {by_coefficients:.15}");
    println!("difference   {:.3e}\n", (by_signs - by_coefficients).norm());

    // repeated arguments: P^v(x, x, y, y) and its derivative form
    let (x, y) = (&args[0], &args[1]);
    let repeated = BlockTuple::new(vec![(x.clone(), 2), (y.clone(), 2)])?;
    println!("P^v(x^2, y^2)            {:.15}", polarize_blocked(&p, &repeated)?);
    println!("C(4,2) P^v(x^2, y^2)     {:.15}", derivative_pairing(&p, x, y, 2)?);
    println!("P(x) vs P^v(x^4)         {:.15} / {:.15}", p.evaluate(x)?, polarize_blocked(&p, &BlockTuple::new(vec![(x.clone(), 4)])?)?);
    Ok(())
}

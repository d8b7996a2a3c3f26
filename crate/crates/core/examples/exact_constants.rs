//! Exact polarization constants of `ℓ₁^d` and their k-th roots.
//!
//! ```text
//! cargo run --release --example exact_constants
//! ```

use polarization::constants::{balanced_partition, decimal15, exact_c_l1, harris_bound, root_sequence, Partition};

fn main() -> polarization::Result<()> {
    println!("{:>3} {:>2}  {:>28}  {:>18}  {:>17}", "k", "d", "c(k, l1^d)", "decimal", "k-th root");
    for d in 1..=4 {
        for k in [2, 3, 5, 8, 12] {
            let c = exact_c_l1(k, d)?;
            let (_, root) = root_sequence(d, &[k])?[0];
            println!(
                "{k:>3} {d:>2}  {:>28}  {:>18}  {:>17}",
                c.to_string(),
                decimal15(c.to_f64()),
                decimal15(root)
            );
        }
    }

    println!("\nmaximizing partition of k = 7 into 3 parts: {}", balanced_partition(7, 3)?);

    // the roots creep down to 1, slowly
    for (k, r) in root_sequence(3, &[9, 99, 999, 9999])? {
        println!("c({k}, l1^3)^(1/{k}) = {}", decimal15(r));
    }

    for parts in [vec![1, 1], vec![2, 2], vec![3, 1], vec![1, 1, 1, 1]] {
        let pt = Partition::new(parts)?;
        println!("Harris bound {pt}: {}", harris_bound(&pt)?);
    }
    Ok(())
}

//! Reading and writing the JSON polynomial format used by the command line.

use polarization::poly::{parse_polynomial, varopoulos, write_polynomial};

fn main() -> polarization::Result<()> {
    let text = write_polynomial(&varopoulos());
    println!("{text}");
    let back = parse_polynomial(&text, "varopoulos.json")?;
    assert_eq!(back, varopoulos());

    // errors point at the offending line
    let broken = text.replacen("[\n        2,", "[\n        3,", 1);
    match parse_polynomial(&broken, "broken.json") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("order mismatch must be rejected"),
    }
    Ok(())
}

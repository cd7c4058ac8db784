//! Exact arithmetic in `Q(r)`, `r² + r − 1 = 0`: products reduce modulo the
//! minimal polynomial, signs are decided exactly even for tiny values, and
//! enclosures give outward-rounded floating point bounds.
//!
//! `cargo run --example number_field`

use finitype::numberfield::NumberField;

fn main() -> finitype::Result<()> {
    let k = NumberField::golden();
    let r = k.generator();
    println!("r^2 = {}", &r * &r);
    println!("r^5 = {}", r.pow(5));
    println!("1/r = {}", r.inverse()?);
    println!("r^12 = {}", r.pow(12));
    let tiny = r.pow(30);
    println!("r^30 = {} > 0: {}", tiny, tiny.is_positive());
    let e = r.to_enclosure(128);
    println!("r in [{:.17}, {:.17}]", e.lo_f64(), e.hi_f64());
    let two_r_minus_one = k.integer(2) * &r - k.one();
    println!("2r - 1 = {} ~ {:.12}", two_r_minus_one, two_r_minus_one.to_f64());
    Ok(())
}

//! Fraction-free elimination of the linear system in `p`, producing the
//! polynomials E and F, plus the vanishing of all order-6 minors.

use cliffordlab::enumerate::derive_ef;
use cliffordlab::polysys::{build_linear_system, canonical_vars, minors};

fn main() -> cliffordlab::Result<()> {
    let (_, a, _) = build_linear_system(true);
    let ms = minors(&a, 6)?;
    println!("{} minors of order 6, all zero: {}", ms.len(), ms.iter().all(|m| m.is_zero()));

    let ef = derive_ef()?;
    let vars = canonical_vars(true);
    println!("pivots {:?}, vanishing row {}", ef.pivots, ef.last_row);
    println!("F = {}", ef.f.format_with(vars.names()));
    println!("E has {} terms of degree {}", ef.e.len(), ef.e.total_degree());
    println!("raw entries: {} * E and {} * F", ef.e_scale, ef.f_scale);
    Ok(())
}

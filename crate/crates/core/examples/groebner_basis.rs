//! Gröbner bases, ideal membership and intersection over Q and Z_p.

use cliffordlab::modring::Modulus;
use cliffordlab::polysys::{groebner, ideal_intersect, ideal_member, q_ideal, MonomialOrder, QPoly, VarTable};

fn main() -> cliffordlab::Result<()> {
    let vars = VarTable::new(["x", "y", "z"])?;
    let names = vars.names();
    let (x, y, z) = (QPoly::q_var(3, 0), QPoly::q_var(3, 1), QPoly::q_var(3, 2));

    // The twisted cubic (t, t^2, t^3).
    let gens = vec![&y - &(&x * &x), &z - &(&x * &y)];
    for order in [MonomialOrder::GrevLex, MonomialOrder::Lex] {
        let basis = groebner(&gens, order);
        let shown: Vec<String> = basis.iter().map(|g| g.format_with(names)).collect();
        println!("{order:?}: {}", shown.join(", "));
    }

    let cubic = q_ideal(&vars, gens)?;
    let f = &(&x * &z) - &(&y * &y);
    println!("xz - y^2 in the ideal: {}", ideal_member(&f, &cubic));

    let i = q_ideal(&vars, vec![x.clone(), y.clone()])?;
    let j = q_ideal(&vars, vec![z.clone()])?;
    let meet = ideal_intersect(&i, &j)?;
    let shown: Vec<String> = meet.gens().iter().map(|g| g.format_with(names)).collect();
    println!("(x, y) ∩ (z) = ({})", shown.join(", "));

    let mod5 = cubic.reduce_mod(Modulus::new(5)?)?;
    println!("over Z_5 the reduced basis has {} elements", mod5.groebner(MonomialOrder::GrevLex).gens().len());
    Ok(())
}

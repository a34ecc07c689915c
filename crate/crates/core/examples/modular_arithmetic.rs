//! Arithmetic in `Z_d` and reduction of rationals.

use cliffordlab::modring::{parse_rational, rational_mod, Modulus};

fn main() -> cliffordlab::Result<()> {
    let d = Modulus::new(7)?;
    let a = d.elem(3);
    println!("in Z_{d}: 3^-1 = {}, 3/2 = {}, 3^6 = {}", a.inv()?, a.half(), a.pow(6));
    println!("-1 as a signed representative: {}", d.elem(-1).signed());

    let r = parse_rational("5/4")?;
    for p in [3, 5, 7] {
        match rational_mod(&r, Modulus::new(p)?) {
            Ok(v) => println!("5/4 mod {p} = {v}"),
            Err(e) => println!("5/4 mod {p}: {e}"),
        }
    }

    for bad in [4, 2, 9] {
        println!("Modulus::new({bad}): {}", Modulus::new(bad).unwrap_err());
    }
    Ok(())
}

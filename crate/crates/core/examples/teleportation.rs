//! Teleporting a semi-Clifford gate `C_1 D C_2` through the magic state `D|+⟩`.

use cliffordlab::modring::Modulus;
use cliffordlab::statevector::{random_diagonal_unitary, random_state, random_unitary, teleport};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> cliffordlab::Result<()> {
    let d = Modulus::new(3)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let dg = random_diagonal_unitary(3, &mut rng);
    let c1 = random_unitary(3, &mut rng);
    let c2 = random_unitary(3, &mut rng);
    let psi = random_state(3, &mut rng);
    let target = c1.mul(&dg).mul(&c2).apply(&psi);
    for outcome in 0..d.value() as usize {
        let out = teleport(&dg, &c1, &c2, &psi, outcome)?;
        println!("outcome {outcome}: probability {:.6}, fidelity {:.12}", out.probability, out.state.fidelity(&target));
    }
    Ok(())
}

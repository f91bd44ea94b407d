//! Products and commutators of Pauli strings and their sums.
use krylov_agp::operator::{commutator, to_dense, OperatorSum, PauliString};
use krylov_agp::Result;

fn main() -> Result<()> {
    let xy = PauliString::parse("XY")?;
    let zz = PauliString::parse("ZZ")?;
    let (phase, p) = xy.multiply(&zz)?;
    println!("XY · ZZ = {} {p}", phase.to_complex());
    println!("XY and ZZ commute: {}", xy.commutes_with(&zz));

    let h = OperatorSum::from_real_terms(2, [(zz, 1.0), (PauliString::parse("XI")?, 0.5)])?;
    let o = OperatorSum::from_string(PauliString::parse("ZI")?);
    let c = commutator(&h, &o)?;
    println!("[H, ZI] has {} terms, norm {:.6}, anti-Hermitian: {}", c.as_pauli().unwrap().len(), c.norm(), c.is_anti_hermitian(1e-14));
    let d = to_dense(&c)?;
    println!("dense form:\n{}", d.as_dense().unwrap());
    Ok(())
}

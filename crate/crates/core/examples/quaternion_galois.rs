//! Quaternion arithmetic and the automorphisms of R, C and H.

use kstiefel::{Complex64, GaloisElement, KMatrix, Quaternion, Scalar};

fn main() -> kstiefel::Result<()> {
    let (i, j) = (Quaternion::I, Quaternion::J);
    println!("i*j = {}, j*i = {}", i * j, j * i);

    let q = Quaternion::new(1.0, 2.0, -1.0, 0.5);
    println!("q = {q}, |q| = {:.6}, q*q^-1 = {}", q.norm(), q * q.inv());

    // conjugation by (1+i)/√2 rotates j into k
    let g = GaloisElement::inner(Quaternion::new(1.0, 1.0, 0.0, 0.0))?;
    println!("g(j) = {}", j.apply_galois(&g)?);
    println!("g as a 4x4 real matrix: {:?}", g.real_matrix());

    let h = g.compose(&g)?;
    println!("g∘g = {}", h.to_json());
    println!("g∘g⁻¹ is identity: {}", g.compose(&g.inverse())?.equals(&GaloisElement::identity(kstiefel::Field::H))?);

    let z = Complex64::new(0.0, 1.0);
    println!("conj(i) in C: {}", z.apply_galois(&GaloisElement::complex_conjugation())?);

    // entrywise action on a matrix commutes with products
    let a = KMatrix::from_rows(&[vec![i, j], vec![Quaternion::K, Quaternion::ONE]])?;
    let lhs = a.matmul(&a)?.galois_map(&g)?;
    let rhs = a.galois_map(&g)?.matmul(&a.galois_map(&g)?)?;
    println!("|g(AA) - g(A)g(A)| = {:.2e}", lhs.max_abs_diff(&rhs)?);
    Ok(())
}

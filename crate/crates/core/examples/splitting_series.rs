//! Poincaré series of both sides of the stable splitting, and the dimension ledger.

use kstiefel::series::{rep_dims, series_compare, thom_dimension_table};
use kstiefel::splitting::dimension_check;
use kstiefel::{Complex64, Field, Quaternion};

fn main() -> kstiefel::Result<()> {
    for field in Field::ALL {
        let cmp = series_compare(field, 40)?;
        let head: Vec<String> = cmp.wedge.coeffs().iter().take(12).map(|c| c.to_string()).collect();
        println!("{field}: equal to degree 40: {}, first terms {}", cmp.equal, head.join(" "));
    }

    let big = series_compare(Field::H, 512)?;
    println!("H at degree 512: equal {}, top coefficient {}", big.equal, big.wedge.coeff(512));

    let d = rep_dims(Field::H, 3, 2);
    println!("H, k = 3, m = 2: dim ν = {}, dim ad = {}, dim sa = {}", d.dim_nu, d.dim_ad, d.dim_sa);
    println!("Thom space dimensions over C, m = 1: {:?}", thom_dimension_table(Field::C, 1, 5));

    for k in 1..=3 {
        let c = dimension_check::<Complex64>(k);
        let h = dimension_check::<Quaternion>(k);
        println!("k = {k}: C ad + sa = {} ({}), H ad + sa = {} ({})", c.dim_ad + c.dim_sa, c.ok(), h.dim_ad + h.dim_sa, h.ok());
    }
    Ok(())
}

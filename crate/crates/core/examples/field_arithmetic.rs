//! The smallest field containing the 7th roots of unity over F_l, and the
//! Frobenius action on them.

use g2_monodromy::ff::make_field;

fn main() {
    for ell in [5u64, 13, 29, 43] {
        let k = make_field(ell).expect("supported characteristic");
        let z = k.zeta();
        let fz = k.frobenius(z);
        let shift = (1..7).find(|&j| k.pow_u64(z, j) == fz).unwrap();
        println!(
            "l = {ell:>2}: degree {}, |F| = {}, zeta^7 = 1: {}, Frobenius(zeta) = zeta^{shift}",
            k.degree(),
            k.size(),
            k.pow_u64(z, 7) == k.one(),
        );
    }
    let k = make_field(5).unwrap();
    let a = k.elem(&[1, 2, 0, 3, 0, 0]).unwrap();
    let b = k.inv(a).unwrap();
    println!("in F_5^6: a = {:?}, a^-1 = {:?}, a * a^-1 = {:?}", k.coeffs(&a), k.coeffs(&b), k.coeffs(&k.mul(a, b)));
}

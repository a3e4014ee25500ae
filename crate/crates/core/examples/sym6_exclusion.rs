//! Unipotent elements in the image of GL2 under Sym^6 are single Jordan
//! blocks once l >= 7, unlike the 3 + 2 + 2 unipotent class of the triple.

use g2_monodromy::ff::FieldCtx;
use g2_monodromy::g2::sym6_rep;
use g2_monodromy::linalg::{jcf_signature, Mat};

fn main() {
    for ell in [5u64, 11, 13, 17] {
        let k = FieldCtx::prime(ell).unwrap();
        let u = Mat::from_i64(&k, &[&[1, 1], &[0, 1]]);
        let s = sym6_rep(&u).unwrap();
        println!("l = {ell:>2}: Sym^6 of a transvection has signature {}", jcf_signature(&s).unwrap().describe(&k));
    }
}

//! All certified points of bounded height, serial and parallel.

use g2_monodromy::certify::{scan, scan_parallel};

fn main() {
    let (ell, height) = (5, 40);
    let serial = scan(ell, height).unwrap();
    let parallel = scan_parallel(ell, height, 4).unwrap();
    assert_eq!(serial, parallel);
    println!("{} certified points with |a|, b <= {height} for l = {ell}", serial.len());
    for (s, c) in serial.iter().take(15) {
        println!("  {s:>7}  p = {:>3}  q = {:>3}  nu_p(s) = {}", c.p, c.q, c.nu_p_s);
    }
}

//! Breadth-first closure of a generating set at l = 3, with group elements
//! packed as 49 base-3 digits in a `u128`.

use std::collections::HashSet;

use super::{G2Error, GroupCtx, DIM};
use crate::linalg::Mat;

type Packed = [u8; DIM * DIM];

fn pack(m: &Packed) -> u128 {
    m.iter().rev().fold(0u128, |acc, &d| acc * 3 + d as u128)
}

fn unpack(mut key: u128) -> Packed {
    let mut m = [0u8; DIM * DIM];
    for slot in m.iter_mut() {
        *slot = (key % 3) as u8;
        key /= 3;
    }
    m
}

/// Nonzero entries of a generator, grouped by column.
struct Sparse {
    cols: Vec<Vec<(usize, u8)>>,
}

impl Sparse {
    fn new(m: &Mat) -> Sparse {
        let cols = (0..DIM)
            .map(|j| {
                (0..DIM)
                    .filter_map(|i| {
                        let v = m.get(i, j).constant() as u8;
                        (v != 0).then_some((i, v))
                    })
                    .collect()
            })
            .collect();
        Sparse { cols }
    }

    /// `x * self`.
    fn right_mul(&self, x: &Packed) -> Packed {
        let mut out = [0u8; DIM * DIM];
        for r in 0..DIM {
            let row = &x[r * DIM..(r + 1) * DIM];
            for (c, col) in self.cols.iter().enumerate() {
                let s: u32 = col.iter().map(|&(t, v)| row[t] as u32 * v as u32).sum();
                out[r * DIM + c] = (s % 3) as u8;
            }
        }
        out
    }
}

/// Order of the group generated by `gens` over F_3, by closure.
pub fn enumerate_subgroup(g: &GroupCtx, gens: &[Mat]) -> Result<u64, G2Error> {
    if g.ell() != 3 {
        return Err(G2Error::ResourceGuard(format!(
            "exhaustive enumeration is limited to l = 3 (got l = {})",
            g.ell()
        )));
    }
    let sparse: Vec<Sparse> = gens.iter().map(Sparse::new).collect();
    let mut id = [0u8; DIM * DIM];
    for i in 0..DIM {
        id[i * DIM + i] = 1;
    }
    let mut seen: HashSet<u128> = HashSet::new();
    seen.insert(pack(&id));
    let mut frontier = vec![pack(&id)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for key in frontier {
            let x = unpack(key);
            for s in &sparse {
                let k = pack(&s.right_mul(&x));
                if seen.insert(k) {
                    next.push(k);
                }
            }
        }
        frontier = next;
    }
    Ok(seen.len() as u64)
}

/// Order of G2(3) by closure of the full generator set.
pub fn enumerate(g: &GroupCtx) -> Result<u64, G2Error> {
    enumerate_subgroup(g, &g.generator_mats())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2::build_group;

    #[test]
    fn pack_round_trip() {
        let mut m = [0u8; 49];
        for (i, slot) in m.iter_mut().enumerate() {
            *slot = (i * 7 % 3) as u8;
        }
        assert_eq!(unpack(pack(&m)), m);
    }

    #[test]
    fn torus_closure_and_guard() {
        let g = build_group(3).unwrap();
        let torus = vec![g.torus_element(2, 1).unwrap(), g.torus_element(1, 2).unwrap()];
        assert_eq!(enumerate_subgroup(&g, &torus).unwrap(), 4);
        let g5 = build_group(5).unwrap();
        assert!(matches!(enumerate(&g5), Err(G2Error::ResourceGuard(_))));
    }
}

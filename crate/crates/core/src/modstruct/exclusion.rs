//! One row per class of maximal subgroups of G2(l), each with the witness
//! that rules it out for the group generated by a module's matrices.

use serde::{Deserialize, Serialize};

use super::{is_irreducible, ModError, Module};
use crate::g2::{sym6_rep, GroupCtx};
use crate::linalg::{blocks_from_profile, rank_profile, Mat};

/// Sporadic-type maximal subgroups: name, order, and the factorization of the order.
pub const SMALL_GROUPS: [(&str, u64, &[(u64, u32)]); 5] = [
    ("L2(8)", 504, &[(2, 3), (3, 2), (7, 1)]),
    ("L2(13)", 1092, &[(2, 2), (3, 1), (7, 1), (13, 1)]),
    ("G2(2)", 12096, &[(2, 6), (3, 3), (7, 1)]),
    ("J1", 175_560, &[(2, 3), (3, 1), (5, 1), (7, 1), (11, 1), (19, 1)]),
    ("2^3.L3(2)", 1344, &[(2, 6), (3, 1), (7, 1)]),
];

/// J1 has a 7-dimensional representation only in characteristic 11.
const J1_CHARACTERISTIC: u64 = 11;

const UNSUPPORTED: [u64; 5] = [2, 3, 7, 11, 13];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExclusionRow {
    pub subgroup_type: String,
    pub excluded: bool,
    pub witness: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExclusionReport {
    pub rows: Vec<ExclusionRow>,
    /// Every generator preserves both invariant forms.
    pub membership: bool,
    pub generates: bool,
}

fn row(subgroup_type: &str, excluded: bool, witness: impl Into<String>) -> ExclusionRow {
    ExclusionRow { subgroup_type: subgroup_type.to_string(), excluded, witness: witness.into() }
}

/// Jordan block sizes of a unipotent matrix, or `None` if it is not unipotent.
fn unipotent_blocks(m: &Mat) -> Option<Vec<usize>> {
    let one = m.ctx().one();
    let profile = rank_profile(m, one);
    if profile.last() != Some(&0) {
        return None;
    }
    Some(blocks_from_profile(&profile))
}

pub fn exclusion_report(m: &Module, group: &GroupCtx) -> Result<ExclusionReport, ModError> {
    let ell = group.ell();
    if UNSUPPORTED.contains(&ell) {
        return Err(ModError::UnsupportedEll(ell));
    }
    let irreducible = is_irreducible(m)?;
    let irr_note = if irreducible {
        "module is irreducible"
    } else {
        "module is reducible"
    };
    let mut rows = vec![
        row("parabolic P_alpha", irreducible, format!("{irr_note}; P_alpha stabilizes <e1, e2>")),
        row("parabolic P_beta", irreducible, format!("{irr_note}; P_beta stabilizes <e1, e2, e3>")),
        row(
            "involution centralizer C(iota)",
            irreducible,
            format!("{irr_note}; C(iota) preserves the 3 + 4 eigenspace decomposition of iota"),
        ),
        row(
            "K_epsilon (SL3.2 / SU3.2)",
            irreducible,
            format!("{irr_note}; K_epsilon stabilizes a 6-dim subspace"),
        ),
    ];

    let unipotent: Option<(usize, Vec<usize>)> = m
        .generators
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.is_identity())
        .find_map(|(i, g)| unipotent_blocks(g).map(|b| (i, b)));

    let pgl2 = if ell < 7 {
        row("PGL2(l)", true, format!("no PGL2 class in G2({ell}) for l < 7"))
    } else {
        let ctx = group.ctx();
        let u = Mat::from_i64(ctx, &[&[1, 1], &[0, 1]]);
        let sym = sym6_rep(&u).map_err(|e| ModError::PreconditionUnmet(e.to_string()))?;
        let sym_blocks = unipotent_blocks(&sym).unwrap_or_default();
        match &unipotent {
            Some((i, b)) if sym_blocks == [7] && b.as_slice() != [7] => row(
                "PGL2(l)",
                true,
                format!("generator {i} is unipotent with blocks {b:?}; nontrivial unipotents of Sym^6 have blocks [7]"),
            ),
            Some((i, b)) => row("PGL2(l)", false, format!("generator {i} has blocks {b:?}, Sym^6 gives {sym_blocks:?}")),
            None => row("PGL2(l)", false, "no nontrivial unipotent generator"),
        }
    };
    rows.push(pgl2);

    for (name, order, _) in SMALL_GROUPS {
        let coprime = order % ell != 0;
        let r = match (&unipotent, coprime) {
            (Some((i, _)), true) => row(name, true, format!("generator {i} has order {ell}, which does not divide {order}")),
            (_, false) if name == "J1" && ell != J1_CHARACTERISTIC => row(
                name,
                true,
                format!("{ell} divides {order}, but J1 embeds in G2(l) only for l = {J1_CHARACTERISTIC}"),
            ),
            (_, false) => row(name, false, format!("{ell} divides {order}")),
            (None, true) => row(name, false, "no element of order l among the generators"),
        };
        rows.push(r);
    }
    rows.push(row("subfield G2(l0)", true, "F_l is a prime field"));

    let membership = m.generators.iter().all(|g| group.is_member(g));
    let generates = membership && rows.iter().all(|r| r.excluded);
    Ok(ExclusionReport { rows, membership, generates })
}

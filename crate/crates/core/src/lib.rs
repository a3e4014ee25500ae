//! Explicit G2(F_l) monodromy computations over finite fields and an
//! arithmetic certificate checker for surjective specializations.

pub mod certify;
pub mod ff;
pub mod g2;
pub mod linalg;
pub mod modstruct;
pub mod monodromy;
pub mod cli;

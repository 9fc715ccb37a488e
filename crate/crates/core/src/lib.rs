//! Exact Eells-Kuiper `μ`-invariants for Milnor's homotopy 7-spheres `M_h`
//! and their quotients by the fiberwise antipodal involution.
//!
//! All arithmetic is exact: [`exact`] provides rationals, `Q/Z` residues,
//! and sign-ambiguous residue sets. [`bundle`] models the bundles
//! `ξ_{h,1−h}`, [`quotient`] assembles `μ(M_h/τ_h)` from fixed-point data,
//! and [`verify`] holds the independent brute-force checks.

pub mod bundle;
pub mod cli;
pub mod exact;
pub mod json;
pub mod quotient;
pub mod verify;

pub use bundle::{MilnorBundle, Theta7};
pub use exact::{add_ambiguous, ambiguous, reduce_mod_z, AmbiguousResidue, ArithError, PlusMinus, Rational, ResidueModZ};
pub use quotient::{classify_quotient, mu_quotient, QuotientReport, Verdict};

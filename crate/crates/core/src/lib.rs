//! Spin structures on closed orientable surfaces, modeled as quadratic
//! refinements of the mod-2 intersection form, together with the action of
//! periodic surface maps on them.
//!
//! A periodic map `f` is extendable over `S^4` for some trivial embedding
//! exactly when it fixes a spin structure of Arf invariant zero; this crate
//! decides that condition from `f_*` on `H_1(F_g; Z_2)` and carries an exact
//! verification harness for the surrounding finite statements.

pub mod action;
pub mod error;
pub mod families;
pub mod gf2;
pub mod harness;
pub mod matrix_file;
pub mod number_theory;
pub mod spin;

pub use action::{
    conjugate, invariant_structures, is_extendable, is_invariant, orbits,
    pgroup_fixed_point_guarantee, pullback, Extendability, FixedPointReport, GuaranteeResult,
    OrbitRecord,
};
pub use error::{Error, Result};
pub use families::{eta, family_map, tau, v, wiman, FamilyId, FamilyKind};
pub use gf2::{
    is_form_preserving, map_order, standard_form, symplectic_basis, Gf2Vector, HomologyMap,
    IntersectionForm, MapOrder, SymplecticBasis, DEFAULT_ORDER_CAP,
};
pub use spin::{
    arf, census, enumerate_all, evaluate, zero_count, ArfClass, Census, Cutoff, SpinStructure,
};

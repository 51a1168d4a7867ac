//! Congruences on partial wreath products `G ≀ I_n`.
//!
//! The crate builds finite groups from small specs or Cayley tables, models
//! the symmetric inverse monoid and its wreath products, classifies the
//! invariant normal subgroups of direct powers and the normal subgroups of
//! `G ≀ S_m`, and assembles these into a symbolic description of every
//! congruence. A brute-force oracle on explicit multiplication tables is
//! included for cross-checking small instances.

pub mod bitset;
pub mod congruence;
pub mod group;
pub mod invariant;
pub mod oracle;
pub mod perm;
pub mod sym_inverse;
pub mod wreath_monoid;
pub mod wreath_normal;

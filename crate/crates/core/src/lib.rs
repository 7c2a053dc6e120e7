//! Z_p[G]-module structure of Mordell-Weil groups of elliptic curves over
//! cyclic degree-p and dihedral extensions of Q.
//!
//! The crate is organised bottom-up:
//! matrix algebra at finite p-adic precision ([`padic_linalg`]),
//! the catalog of indecomposable Z_p[G]-modules and their invariants
//! ([`zpg_catalog`]), local arithmetic of elliptic curves ([`elliptic`]),
//! prime splitting in the relevant fields ([`fields`]), norm-map cokernels
//! D_v at each place ([`local_norm`]) and the global descent engine
//! ([`descent`]). [`ingest`] and [`report`] define the JSON record formats
//! consumed and produced by the `mwgm` binary.

pub mod fp;
pub mod polyfp;
pub mod unram;
pub mod padic_linalg;
pub mod zpg_catalog;
pub mod elliptic;
pub mod fields;
pub mod local_norm;
pub mod descent;
pub mod ingest;
pub mod report;

//! Exact computations with the restricted quantum group Uq(sl2) at a
//! primitive 2p-th root of unity q, and with its extension by a square
//! root of K.
//!
//! Everything structural is done in exact arithmetic over the cyclotomic
//! field Q(zeta_{4p}); floating point never enters the proof path (an
//! interval-arithmetic complex embedding exists for numeric sanity checks
//! only).  The crate builds, in order: the field, the Hopf algebra, its
//! R-matrix and ribbon data, the integrals, the module category data
//! (simples and projective covers with their half-liftings), symmetric
//! linear forms with the character / pseudo-character basis, and finally
//! the projective SL2(Z) action on symmetric linear forms coming from the
//! torus handle algebra.

pub mod interval;
pub mod cyclo;
pub mod linalg;
pub mod hopf;
pub mod quasi;
pub mod integrals;
pub mod repns;
pub mod slf;
pub mod mcg;
pub mod pipeline;
pub mod report;
pub mod export;

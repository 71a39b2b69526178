//! Bredon homology of finite groups over a family of subgroups.
//!
//! The crate is layered bottom-up:
//!
//! * [`linalg`] — exact integer matrices, normal forms, presented abelian groups.
//! * [`group`] — finite groups by Cayley table, subgroups, conjugation-closed families.
//! * [`orbit`] — orbit categories and Γ-sets.
//! * [`module`] — Bredon modules, morphisms, free covers and resolutions.
//! * [`tensor`] — tensor products over the family and over ℤ, Tor.
//! * [`induction`] — restriction and induction along subgroup inclusions.
//! * [`complex`] — Γ-simplicial complexes, Bredon chains and homology, filtrations.
//! * [`equivariant`] — equivariant homology with coefficients and the consistency harness.
//! * [`workspace`] — JSON manifests tying named objects together.

pub mod complex;
pub mod equivariant;
pub mod group;
pub mod induction;
pub mod linalg;
pub mod module;
pub mod orbit;
pub mod tensor;
pub mod workspace;

mod budget;

pub use budget::Budget;

//! Exact finite models for the cover calculus behind topological complexity
//! bounds, Z/2 cohomology lower bounds, and an interval rule engine that
//! derives bounds on TC, LS-category and their equivariant variants.

pub mod action;
pub mod bounds;
pub mod catalog;
pub mod cohomology;
pub mod complex;
pub mod cover;
pub mod formats;
pub mod gf2;
pub mod nerve;
pub mod ring;

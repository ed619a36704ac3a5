//! Exact additive invariants of variety classes (E-polynomials, Euler
//! characteristics, point counts, quotient Hodge measures) and torus
//! fixed-point formulas for Chow varieties of projective spaces, products of
//! projective spaces and toric varieties.
//!
//! All arithmetic is exact over arbitrary-precision integers.

pub mod chow;
pub mod ffcount;
pub mod io;
pub mod motive;
pub mod ring;
pub mod toric;
pub mod verify;

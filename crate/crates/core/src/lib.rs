//! Exact computer algebra for generation level of perfect complexes.
//!
//! The crate provides, bottom up:
//!
//! - normalized multivariate polynomials over `F_p` or `Q` ([`poly`], [`ring`]);
//! - a Buchberger engine for submodules of free modules with normal forms,
//!   membership witnesses and syzygies ([`groebner`]);
//! - finitely presented modules with torsion submodules, regular sequences,
//!   Koszul homology and depth ([`fgmodule`]);
//! - bounded complexes of free modules with shifts, cones, Hom complexes,
//!   homology and a null-homotopy decision procedure ([`complex`]);
//! - Koszul objects built by iterated cones together with the connecting
//!   maps of their defining triangles ([`koszul`]);
//! - ghost-map certificates for level lower bounds, constructive level
//!   upper bounds, and depth/dimension reports ([`level`]);
//! - a JSON wire layer for complexes, chain maps, certificates and build
//!   plans ([`wire`]);
//! - a brute-force truncated linear-algebra oracle used as an independent
//!   cross-check in tests ([`truncation`]).

pub mod complex;
pub mod error;
pub mod fgmodule;
pub mod groebner;
pub mod koszul;
pub mod level;
pub mod poly;
pub mod ring;
pub mod truncation;
pub mod wire;

pub use error::{Error, Result};

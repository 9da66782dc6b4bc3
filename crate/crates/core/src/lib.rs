//! Mukai lattices of abelian surfaces, Beauville–Bogomolov forms of
//! generalized Kummer varieties, and the cohomological Fourier–Mukai
//! transform on abelian surfaces.
//!
//! All arithmetic is exact (`BigInt` / `BigRational`). The main entry points:
//!
//! * [`cohomology`]: surface models, even classes, the Mukai pairing;
//! * [`lattice`]: orthogonal complements and rank-2 decomposability;
//! * [`kummer`]: the map from `v^⊥` into `H²` of the Albanese fiber;
//! * [`oracle`]: brute-force intersection numbers on generalized Kummers;
//! * [`fourier_mukai`]: the Poincaré-kernel transform and its identities;
//! * [`km`]: classification by `⟨v²⟩` and the Kummer K3 correspondence;
//! * [`selftest`]: a seeded run of the invariants above.

pub mod cohomology;
pub mod error;
pub mod fourier_mukai;
pub mod json;
pub mod km;
pub mod kummer;
pub mod lattice;
pub mod matrix;
pub mod oracle;
pub mod selftest;

pub use cohomology::{EvenClass, SurfaceKind, SurfaceModel};
pub use error::{Error, Result};
pub use km::{Classification, KummerK3Vector, PolarizedVector};
pub use kummer::{EllipticThetaData, KummerClass};
pub use lattice::{Decomposition, IntegralLattice};
pub use matrix::IntMatrix;
pub use oracle::{H2Symbolic, Oracle};

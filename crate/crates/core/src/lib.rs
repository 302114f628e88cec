//! Exact restricted root systems, resonant codimension and a symbolic model
//! of the measure-averaging argument for higher-rank lattice actions.
//!
//! * [`roots`] builds irreducible root systems exactly, with coarse classes,
//!   highest roots and the oriented base.
//! * [`weyl`] implements simple reflections, words and orbit search.
//! * [`linalg`] has the exact Gaussian elimination and Fourier–Motzkin
//!   feasibility used for kernel selections.
//! * [`parabolic`] enumerates standard parabolics, computes resonant
//!   codimension and checks parabolicity by brute force.
//! * [`resonance`] classifies invariance outcomes from exponent functionals.
//! * [`averaging`] runs and replays the averaging pipeline as a trace.
//! * [`dims`] computes and tabulates critical dimensions.

pub mod averaging;
pub mod cli;
pub mod dims;
pub mod error;
pub mod linalg;
pub mod parabolic;
pub mod rational;
pub mod resonance;
pub mod roots;
pub mod rootset;
pub mod weyl;

pub use error::{Error, Result};
pub use linalg::Sign;
pub use rational::{Vector, Q};
pub use roots::{
    build_root_system, root_system, CartanElement, CoarseRoot, Family, Functional, Root,
    RootSystem, RootSystemType,
};
pub use rootset::RootSet;
pub use weyl::WeylElement;
